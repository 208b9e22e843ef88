#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace heun_rsj {

enum class ErrorCode {
    InvalidParameters,
    NonPositiveDiscriminant,
    NonFiniteState,
    OriginUndefined,
    ZeroArgument,
    PoleAtAlpha,
    SingularPoint,
    DegreeZeroUnsupported,
    ZeroRatioDivision,
    IndexOutOfRange,
    LambdaZero,
    NotSpectral,
    ConvergenceFailure,
    ZeroAtOne,
    NotUnimodular,
    PolynomialZeroOnPath,
    QuadratureFailure,
    ZeroOnUnitCircle,
    NonPositiveArgument,
    MuNotPositive,
    VerificationFailed,
};

[[nodiscard]] std::string_view to_string(ErrorCode code) noexcept;

/// %.3g, for numbers quoted in error messages.
[[nodiscard]] std::string short_number(double x);

/// Every failure raised by the library carries one of the named codes above;
/// the CLI prints `name()` on stderr.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& detail);

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }
    [[nodiscard]] std::string_view name() const noexcept { return to_string(code_); }

private:
    ErrorCode code_;
};

}  // namespace heun_rsj
