#include "heun_rsj/polynomial.hpp"

#include <cmath>

namespace heun_rsj {

PolyValue evaluate(std::span<const double> coeffs, cplx z) noexcept {
    cplx p{0.0}, dp{0.0}, ddp{0.0};
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
        ddp = ddp * z + 2.0 * dp;
        dp = dp * z + p;
        p = p * z + *it;
    }
    return {p, dp, ddp};
}

PolyMagnitude evaluate_abs(std::span<const double> coeffs, double r) noexcept {
    r = std::abs(r);
    double p = 0.0, dp = 0.0, ddp = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
        ddp = ddp * r + 2.0 * dp;
        dp = dp * r + p;
        p = p * r + std::abs(*it);
    }
    return {p, dp, ddp};
}

}  // namespace heun_rsj
