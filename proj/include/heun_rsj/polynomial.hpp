#pragma once

#include <complex>
#include <span>

namespace heun_rsj {

using cplx = std::complex<double>;

struct PolyValue {
    cplx value;
    cplx d1;
    cplx d2;
};

/// Horner evaluation of sum a_k z^k with first and second derivatives.
[[nodiscard]] PolyValue evaluate(std::span<const double> coeffs, cplx z) noexcept;

struct PolyMagnitude {
    double value;
    double d1;
    double d2;
};

/// Same sums over |a_k| and |z|: an upper bound for every partial sum, used
/// as the magnitude scale of residual checks.
[[nodiscard]] PolyMagnitude evaluate_abs(std::span<const double> coeffs, double r) noexcept;

}  // namespace heun_rsj
