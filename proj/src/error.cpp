#include "heun_rsj/error.hpp"

#include <cstdio>

namespace heun_rsj {

std::string short_number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}


std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidParameters: return "InvalidParameters";
        case ErrorCode::NonPositiveDiscriminant: return "NonPositiveDiscriminant";
        case ErrorCode::NonFiniteState: return "NonFiniteState";
        case ErrorCode::OriginUndefined: return "OriginUndefined";
        case ErrorCode::ZeroArgument: return "ZeroArgument";
        case ErrorCode::PoleAtAlpha: return "PoleAtAlpha";
        case ErrorCode::SingularPoint: return "SingularPoint";
        case ErrorCode::DegreeZeroUnsupported: return "DegreeZeroUnsupported";
        case ErrorCode::ZeroRatioDivision: return "ZeroRatioDivision";
        case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorCode::LambdaZero: return "LambdaZero";
        case ErrorCode::NotSpectral: return "NotSpectral";
        case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
        case ErrorCode::ZeroAtOne: return "ZeroAtOne";
        case ErrorCode::NotUnimodular: return "NotUnimodular";
        case ErrorCode::PolynomialZeroOnPath: return "PolynomialZeroOnPath";
        case ErrorCode::QuadratureFailure: return "QuadratureFailure";
        case ErrorCode::ZeroOnUnitCircle: return "ZeroOnUnitCircle";
        case ErrorCode::NonPositiveArgument: return "NonPositiveArgument";
        case ErrorCode::MuNotPositive: return "MuNotPositive";
        case ErrorCode::VerificationFailed: return "VerificationFailed";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

}  // namespace heun_rsj
