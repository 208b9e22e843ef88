#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "heun_rsj/error.hpp"
#include "heun_rsj/rsj_dynamics.hpp"

using namespace heun_rsj;
using std::numbers::pi;

TEST_CASE("bias examples") {
    CHECK(bias(0.0, RsjParams(1, 0, 1)) == 1.0);
    CHECK(bias(pi, RsjParams(1, 2, 1)) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(bias(pi / 2, RsjParams(3, 0.5, 1)) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("phase_from_xy examples") {
    CHECK(phase_from_xy(1, 0) == 0.0);
    CHECK(phase_from_xy(0, 1) == doctest::Approx(pi).epsilon(1e-15));
    CHECK(phase_from_xy(1, -1) == doctest::Approx(pi / 2).epsilon(1e-15));
    bool threw = false;
    try {
        (void)phase_from_xy(0, 0);
    } catch (const Error& e) {
        threw = e.code() == ErrorCode::OriginUndefined;
    }
    CHECK(threw);
}

TEST_CASE("phase_from_xy satisfies exp(i phi) = (x - iy)/(x + iy)") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-2, 2);
    for (int i = 0; i < 500; ++i) {
        const double x = u(rng), y = u(rng);
        const double phi = phase_from_xy(x, y);
        CHECK(phi >= 0.0);
        CHECK(phi < 2 * pi);
        const std::complex<double> lhs = std::polar(1.0, phi);
        const std::complex<double> rhs = std::complex<double>(x, -y) / std::complex<double>(x, y);
        CHECK(std::abs(lhs - rhs) <= 1e-14);
    }
}

TEST_CASE("unwrap and wrapped_distance") {
    const std::vector<double> wrapped{6.0, 0.1, 0.3, 6.2, 6.1};
    const auto u = unwrap(wrapped);
    CHECK(u[1] == doctest::Approx(0.1 + 2 * pi));
    CHECK(u[3] == doctest::Approx(6.2));
    CHECK(wrapped_distance(0.1, 2 * pi - 0.1) == doctest::Approx(0.2));
    CHECK(wrapped_distance(1.0, 1.0 + 6 * pi) <= 1e-14);
}

TEST_CASE("integrate_phase samples every step and lands on t_end") {
    const RsjParams p(1, 0, 1);
    const Trajectory tr = integrate_phase(p, 0.0, 2 * pi, 2 * pi / 100);
    CHECK(tr.size() == 101);
    CHECK(tr.time(0) == 0.0);
    CHECK(tr.time(tr.size() - 1) == 2 * pi);
    CHECK(tr.columns() == std::vector<std::string>{"phi"});
    const double phi_end = tr.value(tr.size() - 1);
    CHECK(std::isfinite(phi_end));
    // |phi'| <= |B| + |A| + 1
    CHECK(std::abs(phi_end) <= 2.0 * 2 * pi);

    const Trajectory uneven = integrate_phase(p, 0.0, 1.05, 0.1);
    CHECK(uneven.time(uneven.size() - 1) == 1.05);
}

TEST_CASE("integrate_phase: constant solution phi = pi/2 when q = 1") {
    // A is nonzero but tiny so q(t) = 1 + 1e-300 cos t == 1 in floating point.
    const Trajectory tr = integrate_phase(RsjParams(1e-300, 1.0, 1.0), pi / 2, 10.0, 0.01);
    for (std::size_t i = 0; i < tr.size(); ++i) CHECK(tr.value(i) == doctest::Approx(pi / 2));
}

TEST_CASE("integrate_xy is linear") {
    const RsjParams p(0.9, -0.4, 1.3);
    const double T = p.period(), h = T / 500;
    const Trajectory a = integrate_xy(p, 0.3, -0.7, 3 * T, h);
    const Trajectory b = integrate_xy(p, -0.2, 0.5, 3 * T, h);
    const Trajectory a2 = integrate_xy(p, 0.6, -1.4, 3 * T, h);
    const Trajectory ab = integrate_xy(p, 0.1, -0.2, 3 * T, h);
    double max_rel_scale = 0, max_rel_sum = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t c = 0; c < 2; ++c) {
            const double mag = std::max({std::abs(a.value(i, c)), std::abs(b.value(i, c)), 1e-300});
            max_rel_scale = std::max(max_rel_scale,
                                     std::abs(a2.value(i, c) - 2 * a.value(i, c)) / mag);
            max_rel_sum = std::max(
                max_rel_sum, std::abs(ab.value(i, c) - a.value(i, c) - b.value(i, c)) / mag);
        }
    }
    CHECK(max_rel_scale <= 1e-12);
    CHECK(max_rel_sum <= 1e-12);
}

TEST_CASE("integrate_xy rejects the origin and non-finite growth") {
    const RsjParams p(1, 0, 1);
    bool origin = false;
    try {
        (void)integrate_xy(p, 0.0, 0.0, 1.0, 0.1);
    } catch (const Error& e) {
        origin = e.code() == ErrorCode::InvalidParameters || e.code() == ErrorCode::OriginUndefined;
    }
    CHECK(origin);
    bool nonfinite = false;
    try {
        (void)integrate_phase(RsjParams(1, 1e308, 1), 0.0, 10.0, 1.0);
    } catch (const Error& e) {
        nonfinite = e.code() == ErrorCode::NonFiniteState;
    }
    CHECK(nonfinite);
}

namespace {

double phase_error(const RsjParams& p, double t_end, double h, double reference) {
    const Trajectory tr = integrate_phase(p, 0.4, t_end, h);
    return std::abs(tr.value(tr.size() - 1) - reference);
}

double xy_error(const RsjParams& p, double t_end, double h, double rx, double ry) {
    const Trajectory tr = integrate_xy(p, 0.6, 0.8, t_end, h);
    const std::size_t last = tr.size() - 1;
    return std::hypot(tr.value(last, 0) - rx, tr.value(last, 1) - ry);
}

}  // namespace

TEST_CASE("RK4 global error is fourth order on both systems") {
    const RsjParams p(1.2, 0.3, 1.0);
    const double t_end = 2 * pi;
    const Trajectory ref_phi = integrate_phase(p, 0.4, t_end, t_end / 20000);
    const double phi_ref = ref_phi.value(ref_phi.size() - 1);
    const double e1 = phase_error(p, t_end, t_end / 50, phi_ref);
    const double e2 = phase_error(p, t_end, t_end / 100, phi_ref);
    const double order_phi = std::log2(e1 / e2);
    CHECK(order_phi >= 3.7);
    CHECK(order_phi <= 4.3);
    CHECK(e1 / e2 == doctest::Approx(16.0).epsilon(0.2));

    const Trajectory ref_xy = integrate_xy(p, 0.6, 0.8, t_end, t_end / 20000);
    const std::size_t last = ref_xy.size() - 1;
    const double f1 = xy_error(p, t_end, t_end / 50, ref_xy.value(last, 0), ref_xy.value(last, 1));
    const double f2 = xy_error(p, t_end, t_end / 100, ref_xy.value(last, 0), ref_xy.value(last, 1));
    const double order_xy = std::log2(f1 / f2);
    CHECK(order_xy >= 3.7);
    CHECK(order_xy <= 4.3);
}

TEST_CASE("phase path and (x, y) path agree over 10 periods") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> a_dist(0.2, 2.0), b_dist(-2.0, 2.0),
        w_dist(0.3, 2.0), ang(0.0, 2 * pi);
    for (int trial = 0; trial < 5; ++trial) {
        const RsjParams p(a_dist(rng), b_dist(rng), w_dist(rng));
        const double theta = ang(rng);
        const double x0 = std::cos(theta), y0 = std::sin(theta);
        const double h = default_step(p), t_end = 10 * p.period();
        const Trajectory xy = integrate_xy(p, x0, y0, t_end, h);
        const Trajectory ph = integrate_phase(p, phase_from_xy(x0, y0), t_end, h);
        REQUIRE(xy.size() == ph.size());
        const auto phi_xy = phase_series(xy);
        double worst = 0.0;
        for (std::size_t i = 0; i < ph.size(); ++i) {
            worst = std::max(worst, wrapped_distance(phi_xy[i], ph.value(i)));
        }
        CHECK(worst <= 1e-6);
    }
}

TEST_CASE("phase from (x, y) satisfies the phase ODE by central differences") {
    const RsjParams p(0.7, 1.1, 0.9);
    const double h = p.period() / 4000;
    const Trajectory xy = integrate_xy(p, 1.0, 0.0, 3 * p.period(), h);
    const auto phi = phase_series(xy);
    const auto dphi = central_derivative(phi, h);
    double worst = 0.0;
    for (std::size_t i = 2; i + 2 < phi.size(); ++i) {
        const double t = xy.time(i);
        worst = std::max(worst, std::abs(dphi[i] + std::sin(phi[i]) - bias(t, p)));
    }
    CHECK(worst <= 1e-6);
}

TEST_CASE("central_derivative is exact on quartics") {
    std::vector<double> f;
    const double h = 0.1;
    for (int i = 0; i < 20; ++i) {
        const double t = i * h;
        f.push_back(t * t * t * t - 2 * t);
    }
    const auto d = central_derivative(f, h);
    CHECK(d[0] == 0.0);
    for (int i = 2; i < 18; ++i) {
        const double t = i * h;
        CHECK(d[i] == doctest::Approx(4 * t * t * t - 2).epsilon(1e-10));
    }
}
