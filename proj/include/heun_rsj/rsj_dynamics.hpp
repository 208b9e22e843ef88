#pragma once

#include <span>
#include <vector>

#include "heun_rsj/model.hpp"

namespace heun_rsj {

/// Steps per period used when no step is given: h = T / 2000.
inline constexpr int kDefaultStepsPerPeriod = 2000;

[[nodiscard]] double bias(double t, const RsjParams& p) noexcept;

[[nodiscard]] double default_step(const RsjParams& p) noexcept;

/// Classical RK4 for phi' = q(t) - sin(phi), one sample per step (the last
/// step is shortened to land on t_end). Column "phi".
[[nodiscard]] Trajectory integrate_phase(const RsjParams& p, double phi0, double t_end, double h);

/// Classical RK4 for 2x' = x + q y, 2y' = -(q x + y). Columns "x", "y".
[[nodiscard]] Trajectory integrate_xy(const RsjParams& p, double x0, double y0, double t_end,
                                      double h);

/// phi = 2 atan2(-y, x) reduced to [0, 2 pi).
[[nodiscard]] double phase_from_xy(double x, double y);

/// Continuous phase from wrapped samples: each step adds the multiple of
/// 2 pi that minimises the jump.
[[nodiscard]] std::vector<double> unwrap(std::span<const double> wrapped);

/// |a - b| measured on the circle, in [0, pi].
[[nodiscard]] double wrapped_distance(double a, double b) noexcept;

/// Unwrapped phase series of an (x, y) trajectory.
[[nodiscard]] std::vector<double> phase_series(const Trajectory& xy);

/// 5-point central difference of uniformly sampled data; the first and last
/// two entries are left at zero.
[[nodiscard]] std::vector<double> central_derivative(std::span<const double> samples, double h);

}  // namespace heun_rsj
