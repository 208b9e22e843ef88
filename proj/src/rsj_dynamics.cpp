#include "heun_rsj/rsj_dynamics.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "heun_rsj/error.hpp"

namespace heun_rsj {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

template <std::size_t N>
using State = std::array<double, N>;

template <std::size_t N>
State<N> axpy(const State<N>& y, double a, const State<N>& k) {
    State<N> out;
    for (std::size_t i = 0; i < N; ++i) out[i] = y[i] + a * k[i];
    return out;
}

template <std::size_t N, typename Rhs>
State<N> rk4_step(const Rhs& f, double t, const State<N>& y, double h) {
    const State<N> k1 = f(t, y);
    const State<N> k2 = f(t + 0.5 * h, axpy(y, 0.5 * h, k1));
    const State<N> k3 = f(t + 0.5 * h, axpy(y, 0.5 * h, k2));
    const State<N> k4 = f(t + h, axpy(y, h, k3));
    State<N> out;
    for (std::size_t i = 0; i < N; ++i) {
        out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
    }
    return out;
}

// Uniform grid t_i = i h, with the final point moved onto t_end.
std::vector<double> time_grid(double t_end, double h) {
    if (!(h > 0.0) || !(t_end > 0.0) || !std::isfinite(h) || !std::isfinite(t_end)) {
        throw Error(ErrorCode::InvalidParameters, "step and end time must be positive");
    }
    const double ratio = t_end / h;
    auto steps = static_cast<std::size_t>(std::llround(ratio));
    if (std::abs(ratio - static_cast<double>(steps)) > 1e-9 * std::max(1.0, ratio)) {
        steps = static_cast<std::size_t>(std::ceil(ratio));
    }
    steps = std::max<std::size_t>(steps, 1);
    std::vector<double> t(steps + 1);
    for (std::size_t i = 0; i < steps; ++i) t[i] = static_cast<double>(i) * h;
    t[steps] = t_end;
    return t;
}

template <std::size_t N, typename Rhs>
Trajectory integrate(const Rhs& f, const State<N>& y0, double t_end, double h,
                     std::vector<std::string> columns) {
    std::vector<double> times = time_grid(t_end, h);
    std::vector<double> values;
    values.reserve(times.size() * N);
    State<N> y = y0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (i > 0) y = rk4_step<N>(f, times[i - 1], y, times[i] - times[i - 1]);
        for (double v : y) {
            if (!std::isfinite(v)) {
                throw Error(ErrorCode::NonFiniteState,
                            "non-finite state at t = " + short_number(times[i]));
            }
            values.push_back(v);
        }
    }
    return {std::move(columns), std::move(times), std::move(values)};
}

}  // namespace

double bias(double t, const RsjParams& p) noexcept { return p.B() + p.A() * std::cos(p.omega() * t); }

double default_step(const RsjParams& p) noexcept { return p.period() / kDefaultStepsPerPeriod; }

Trajectory integrate_phase(const RsjParams& p, double phi0, double t_end, double h) {
    auto rhs = [&p](double t, const State<1>& y) -> State<1> {
        return {bias(t, p) - std::sin(y[0])};
    };
    return integrate<1>(rhs, State<1>{phi0}, t_end, h, {"phi"});
}

Trajectory integrate_xy(const RsjParams& p, double x0, double y0, double t_end, double h) {
    if (x0 == 0.0 && y0 == 0.0) {
        throw Error(ErrorCode::OriginUndefined, "(x0, y0) = (0, 0) carries no phase");
    }
    auto rhs = [&p](double t, const State<2>& s) -> State<2> {
        const double q = bias(t, p);
        return {0.5 * (s[0] + q * s[1]), -0.5 * (q * s[0] + s[1])};
    };
    return integrate<2>(rhs, State<2>{x0, y0}, t_end, h, {"x", "y"});
}

double phase_from_xy(double x, double y) {
    if (x == 0.0 && y == 0.0) {
        throw Error(ErrorCode::OriginUndefined, "phase undefined at the origin");
    }
    double phi = std::fmod(2.0 * std::atan2(-y, x), kTwoPi);
    if (phi < 0.0) phi += kTwoPi;
    if (phi >= kTwoPi) phi -= kTwoPi;
    return phi;
}

std::vector<double> unwrap(std::span<const double> wrapped) {
    std::vector<double> out(wrapped.begin(), wrapped.end());
    for (std::size_t i = 1; i < out.size(); ++i) {
        const double jump = wrapped[i] - wrapped[i - 1];
        const double turns = std::round(jump / kTwoPi);
        out[i] = out[i - 1] + (jump - turns * kTwoPi);
    }
    return out;
}

double wrapped_distance(double a, double b) noexcept {
    const double d = std::remainder(a - b, kTwoPi);
    return std::abs(d);
}

std::vector<double> phase_series(const Trajectory& xy) {
    std::vector<double> wrapped(xy.size());
    for (std::size_t i = 0; i < xy.size(); ++i) wrapped[i] = phase_from_xy(xy.value(i, 0), xy.value(i, 1));
    return unwrap(wrapped);
}

std::vector<double> central_derivative(std::span<const double> f, double h) {
    std::vector<double> d(f.size(), 0.0);
    for (std::size_t i = 2; i + 2 < f.size(); ++i) {
        d[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * h);
    }
    return d;
}

}  // namespace heun_rsj
