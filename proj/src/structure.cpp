#include "heun_rsj/structure.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "heun_rsj/error.hpp"
#include "heun_rsj/polynomial.hpp"
#include "heun_rsj/quadrature.hpp"
#include "heun_rsj/transforms.hpp"

namespace heun_rsj {

namespace {

using namespace std::complex_literals;

constexpr int kUnitCircleScan = 4096;
constexpr double kUnitCircleZero = 1e-10;
constexpr double kZeroAtOne = 1e-12;
constexpr int kMinPhaseSamplesPerPeriod = 64;
constexpr double kTailFraction = 1e-14;
constexpr double kQuadratureTolerance = 1e-10;

double half_inverse_omega(const HeunPolynomial& P) { return P.params().half_inverse_omega(); }

std::vector<double> reversed(std::span<const double> a) { return {a.rbegin(), a.rend()}; }

void require_common_mu(const HeunPolynomial& P1, const HeunPolynomial& P2) {
    if (P1.mu() != P2.mu()) {
        throw Error(ErrorCode::InvalidParameters, "polynomials must share mu");
    }
}

// g(t) = i eps z^{n+1} P(1/z) / P(z) on z = e^{i w t}; exp(-i phi) = g.
struct PhaseKernel {
    const HeunPolynomial& P;
    int eps;
    double omega;

    cplx operator()(double t) const {
        // On |z| = 1 with real coefficients P(1/z) = conj P(z), so the ratio is
        // conj(u)^2 with u = P/|P|. Evaluating the reversed polynomial separately
        // would leave |ratio| - 1 at u ||P||_1 / |P(z)|.
        const cplx w = evaluate(P.coeffs(), z_of_t(t, omega)).value;
        const cplx u = w / std::abs(w);
        const cplx zn1 = z_of_t(static_cast<double>(P.n() + 1) * t, omega);
        return 1i * static_cast<double>(eps) * zn1 * std::conj(u * u);
    }
};

// Integrand of the semi-axis integrals after z = e^u, with its support
// [-U, U] chosen where |f| falls below kTailFraction of its peak.
struct SemiAxis {
    double lower;
    double upper;
    double l1_estimate;
};

SemiAxis locate_support(const std::function<double(double)>& f) {
    constexpr double kSpan = 40.0;
    constexpr double kStep = 0.02;
    const int count = static_cast<int>(2.0 * kSpan / kStep);
    std::vector<double> mag(static_cast<std::size_t>(count) + 1);
    double peak = 0.0, sum = 0.0;
    for (int i = 0; i <= count; ++i) {
        const double v = std::abs(f(-kSpan + i * kStep));
        mag[static_cast<std::size_t>(i)] = std::isfinite(v) ? v : 0.0;
        peak = std::max(peak, mag[static_cast<std::size_t>(i)]);
        sum += mag[static_cast<std::size_t>(i)] * kStep;
    }
    if (!(peak > 0.0)) throw Error(ErrorCode::QuadratureFailure, "integrand vanishes on the scan");
    int lo = 0, hi = count;
    while (lo < count && mag[static_cast<std::size_t>(lo)] < kTailFraction * peak) ++lo;
    while (hi > 0 && mag[static_cast<std::size_t>(hi)] < kTailFraction * peak) --hi;
    const double U = std::max(std::abs(-kSpan + lo * kStep), std::abs(-kSpan + hi * kStep)) + 0.5;
    return {-U, U, sum};
}

QuadratureResult integrate_semi_axis(const std::function<double(double)>& f_of_z) {
    auto f_of_u = [&](double u) {
        const double z = std::exp(u);
        return f_of_z(z) * z;
    };
    const SemiAxis support = locate_support(f_of_u);
    return integrate_adaptive(f_of_u, support.lower, support.upper,
                              1e-12 * support.l1_estimate, 0.0);
}

}  // namespace

std::vector<double> tilde_p(const HeunPolynomial& P) {
    const int n = P.n();
    std::vector<double> t(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) {
        t[static_cast<std::size_t>(k)] = (n + 1 - k) * P.coeff(n + 1 - k) - P.mu() * P.coeff(n - k);
    }
    return t;
}

int epsilon_sign(const HeunPolynomial& P) {
    const double c = half_inverse_omega(P);
    const PolyValue at_one = evaluate(P.coeffs(), 1.0);
    const double p1 = at_one.value.real();
    if (std::abs(p1) <= kZeroAtOne * P.l1_norm()) {
        throw Error(ErrorCode::ZeroAtOne, "P(1) vanishes");
    }
    const double ratio = (at_one.d1.real() - P.mu() * p1) / (c * p1);
    const int eps = ratio >= 0.0 ? 1 : -1;
    if (!(std::abs(ratio - eps) <= kUnimodularTolerance)) {
        throw Error(ErrorCode::NotUnimodular, "reflection ratio " + short_number(ratio) + " is not +-1");
    }
    return eps;
}

double symmetry_residual(const HeunPolynomial& P, int epsilon) {
    const double c = half_inverse_omega(P);
    const std::vector<double> rev = reversed(P.coeffs());
    const double mu = P.mu();
    double worst = 0.0;
    for (const cplx& z : residual_sample_points()) {
        const PolyValue p = evaluate(P.coeffs(), z);
        const cplx reflected = evaluate(rev, z).value;
        const cplx residual = p.d1 - mu * p.value - static_cast<double>(epsilon) * c * reflected;
        const PolyMagnitude m = evaluate_abs(P.coeffs(), std::abs(z));
        const PolyMagnitude mr = evaluate_abs(rev, std::abs(z));
        const double scale = std::max({m.d1, std::abs(mu) * m.value, c * mr.value});
        worst = std::max(worst, std::abs(residual) / scale);
    }
    return worst;
}

double symmetry_residual(const HeunPolynomial& P) { return symmetry_residual(P, epsilon_sign(P)); }

std::vector<double> coeff_relations_residual(const HeunPolynomial& P, int epsilon) {
    const double c = half_inverse_omega(P);
    const int n = P.n();
    std::vector<double> r(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) {
        r[static_cast<std::size_t>(k)] = epsilon * c * P.coeff(k) - (n + 1 - k) * P.coeff(n + 1 - k) +
                                         P.mu() * P.coeff(n - k);
    }
    return r;
}

double associated_integrand(const HeunPolynomial& P, double s) {
    const double p = evaluate(P.coeffs(), s).value.real();
    return std::pow(s, P.n()) * std::exp(P.mu() * (s + 1.0 / s)) / (p * p);
}

AssociatedValue associated_q(const HeunPolynomial& P, double z, double base) {
    if (!(z > 0.0) || !(base > 0.0)) {
        throw Error(ErrorCode::NonPositiveArgument, "z and base must be positive");
    }
    const double lo = std::min(z, base);
    const double hi = std::max(z, base);
    // Sign change or near-zero of P anywhere on the path.
    constexpr int kScan = 512;
    double prev = evaluate(P.coeffs(), lo).value.real();
    for (int i = 0; i <= kScan; ++i) {
        const double s = lo + (hi - lo) * i / kScan;
        const double p = evaluate(P.coeffs(), s).value.real();
        const double floor = 1e-12 * evaluate_abs(P.coeffs(), s).value;
        if (std::abs(p) <= floor || (p > 0.0) != (prev > 0.0)) {
            throw Error(ErrorCode::PolynomialZeroOnPath,
                        "P vanishes between " + short_number(lo) + " and " + short_number(hi));
        }
        prev = p;
    }

    double integral = 0.0;
    if (hi > lo) {
        const QuadratureResult q = integrate_adaptive(
            [&P](double s) { return associated_integrand(P, s); }, lo, hi, kQuadratureTolerance,
            kQuadratureTolerance);
        integral = z >= base ? q.value : -q.value;
    }

    const PolyValue p = evaluate(P.coeffs(), z);
    const double pv = p.value.real();
    const double w = std::pow(z, P.n()) * std::exp(P.mu() * (z + 1.0 / z));
    const double dw = w * (P.n() / z + P.mu() * (1.0 - 1.0 / (z * z)));
    AssociatedValue out;
    out.integral = integral;
    out.q = pv * integral;
    out.dq = p.d1.real() * integral + w / pv;
    out.d2q = p.d2.real() * integral + dw / pv;
    return out;
}

double unit_circle_min_modulus(const HeunPolynomial& P) {
    double m = HUGE_VAL;
    for (int k = 0; k < kUnitCircleScan; ++k) {
        const cplx z = std::polar(1.0, 2.0 * std::numbers::pi * k / kUnitCircleScan);
        m = std::min(m, std::abs(evaluate(P.coeffs(), z).value));
    }
    return m / P.l1_norm();
}

std::vector<double> phase_from_poly(const HeunPolynomial& P, std::span<const double> times) {
    if (unit_circle_min_modulus(P) <= kUnitCircleZero) {
        throw Error(ErrorCode::ZeroOnUnitCircle, "P has a zero on the unit circle");
    }
    const double c = half_inverse_omega(P);
    const PhaseKernel kernel{P, epsilon_sign(P), 1.0 / (2.0 * c)};
    const double period = 2.0 * std::numbers::pi / kernel.omega;
    const int per_period = std::max(kMinPhaseSamplesPerPeriod, 16 * (P.n() + 1));
    const double max_dt = period / per_period;

    std::vector<double> out;
    out.reserve(times.size());
    double t_prev = 0.0;
    cplx g_prev = kernel(0.0);
    double phi = -std::arg(g_prev);
    for (double t : times) {
        if (!(t >= t_prev)) {
            throw Error(ErrorCode::InvalidParameters, "times must be non-negative and non-decreasing");
        }
        const auto steps = static_cast<int>(std::ceil((t - t_prev) / max_dt));
        for (int s = 1; s <= steps; ++s) {
            const double ts = s == steps ? t : t_prev + (t - t_prev) * s / steps;
            const cplx g = kernel(ts);
            // Keep only the branch count from the running sum; summing increments
            // alone drifts by ~N ulp(phi).
            const double tracked = phi - std::arg(g / g_prev);
            const double principal = -std::arg(g);
            phi = principal + 2.0 * std::numbers::pi *
                                  std::round((tracked - principal) / (2.0 * std::numbers::pi));
            g_prev = g;
        }
        t_prev = t;
        out.push_back(phi);
    }
    return out;
}

double phase_from_poly(const HeunPolynomial& P, double t) {
    const double times[] = {t};
    return phase_from_poly(P, times).front();
}

double phase_certificate(const HeunPolynomial& P, double t, double phi) {
    const double c = half_inverse_omega(P);
    const PhaseKernel kernel{P, epsilon_sign(P), 1.0 / (2.0 * c)};
    return std::abs(std::polar(1.0, -phi) - kernel(t));
}

double weight_xi(double z, const HeunPolynomial& P1, const HeunPolynomial& P2) {
    require_common_mu(P1, P2);
    if (!(z > 0.0)) throw Error(ErrorCode::NonPositiveArgument, "z must be positive");
    const double mu = P1.mu();
    const double n1 = P1.n(), n2 = P2.n();
    const double envelope = std::pow(z, -(n1 + n2) / 2.0) * std::exp(-mu * (z + 1.0 / z));
    const double zi = 1.0 / z;
    const double bracket = (P1.lambda() - P2.lambda() - 0.25 * (n1 - n2) * (n1 + n2 + 2.0)) * zi * zi +
                           0.5 * mu * (n1 - n2) * zi * (1.0 + zi * zi);
    return envelope * bracket;
}

double xi_identity_residual(double z, const HeunPolynomial& P1, const HeunPolynomial& P2) {
    require_common_mu(P1, P2);
    if (!(z > 0.0)) throw Error(ErrorCode::NonPositiveArgument, "z must be positive");
    const double mu = P1.mu();
    const double n1 = P1.n(), n2 = P2.n();
    const double s = (n1 + n2) / 2.0;
    const double dn = 0.5 * (n1 - n2);
    const double zi = 1.0 / z;
    const PolyValue a = evaluate(P1.coeffs(), z);
    const PolyValue b = evaluate(P2.coeffs(), z);
    const double p1 = a.value.real(), d1 = a.d1.real(), dd1 = a.d2.real();
    const double p2 = b.value.real(), d2 = b.d1.real(), dd2 = b.d2.real();

    const double envelope = std::pow(z, -s) * std::exp(-mu * (z + zi));
    const double bracket = p2 * d1 - p1 * d2 - dn * zi * p1 * p2;
    const double xi = weight_xi(z, P1, P2);
    const double terms[] = {
        envelope * (-s * zi) * bracket,
        envelope * (-mu) * bracket,
        envelope * (mu * zi * zi) * bracket,
        envelope * p2 * dd1,
        -envelope * p1 * dd2,
        envelope * dn * zi * zi * p1 * p2,
        -envelope * dn * zi * d1 * p2,
        -envelope * dn * zi * p1 * d2,
        xi * p1 * p2,
    };
    double sum = 0.0, scale = 0.0;
    for (double t : terms) {
        sum += t;
        scale = std::max(scale, std::abs(t));
    }
    return scale > 0.0 ? std::abs(sum) / scale : std::abs(sum);
}

OrthogonalityReport orthogonality_integral(const HeunPolynomial& P1, const HeunPolynomial& P2) {
    require_common_mu(P1, P2);
    if (!(P1.mu() > 0.0)) throw Error(ErrorCode::MuNotPositive, "orthogonality requires mu > 0");
    if (P1.n() == P2.n() && P1.lambda() == P2.lambda()) {
        throw Error(ErrorCode::InvalidParameters, "identical (n, lambda): the weight vanishes");
    }
    const QuadratureResult q = integrate_semi_axis([&](double z) {
        const double p1 = evaluate(P1.coeffs(), z).value.real();
        const double p2 = evaluate(P2.coeffs(), z).value.real();
        return weight_xi(z, P1, P2) * p1 * p2;
    });
    return {q.value, q.abs_integral};
}

double norm_integral(const HeunPolynomial& P) {
    if (!(P.mu() > 0.0)) throw Error(ErrorCode::MuNotPositive, "the norm requires mu > 0");
    const QuadratureResult q = integrate_semi_axis([&](double z) {
        const double p = evaluate(P.coeffs(), z).value.real();
        return std::pow(z, -P.n()) * std::exp(-P.mu() * (z + 1.0 / z)) * p * p;
    });
    return q.value;
}

}  // namespace heun_rsj
