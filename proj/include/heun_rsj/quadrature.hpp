#pragma once

#include <functional>

namespace heun_rsj {

struct QuadratureResult {
    double value = 0.0;
    double abs_integral = 0.0;  ///< integral of |f|
    double error = 0.0;         ///< summed Kronrod error estimates
    int intervals = 0;
};

/// Globally adaptive G7K15: the interval with the largest error estimate is
/// bisected until the summed estimate falls below
/// max(abs_tol, rel_tol * integral of |f|). Throws QuadratureFailure when
/// max_intervals is exhausted or f is not finite.
[[nodiscard]] QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                                  double a, double b, double abs_tol,
                                                  double rel_tol, int max_intervals = 4000);

}  // namespace heun_rsj
