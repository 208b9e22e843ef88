#include "heun_rsj/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <numbers>

#include "heun_rsj/error.hpp"

namespace heun_rsj {

namespace {

using namespace std::complex_literals;

double max_magnitude(std::initializer_list<double> terms) {
    double m = 0.0;
    for (double t : terms) m = std::max(m, t);
    return m;
}

VPair substitute(cplx power, cplx z, cplx x, cplx y, const RsjParams& p) {
    const double w = p.omega();
    const cplx common = power * std::exp(p.A() / (4.0 * w) * (-z + 1.0 / z));
    return {1i * common * (x - 1i * y), common * (x + 1i * y) / (2.0 * w * z)};
}

void require_regular_zeta(cplx zeta) {
    if (zeta == cplx{1.0} || zeta == cplx{-1.0}) {
        throw Error(ErrorCode::SingularPoint, "zeta = +-1 is a singular point");
    }
}

}  // namespace

double Residual::relative() const noexcept {
    const double r = std::abs(value);
    return scale > 0.0 ? r / scale : r;
}

cplx z_of_t(double t, double omega) noexcept { return std::polar(1.0, omega * t); }

VPair xy_to_v(cplx z, cplx x, cplx y, const RsjParams& p) {
    if (z == cplx{0.0}) throw Error(ErrorCode::ZeroArgument, "z = 0");
    const cplx power = std::pow(z, cplx{-p.B() / (2.0 * p.omega())});
    return substitute(power, z, x, y, p);
}

VPair xy_to_v_at_time(double t, cplx x, cplx y, const RsjParams& p) {
    const double w = p.omega();
    const cplx power = std::exp(-p.B() / (2.0 * w) * (1i * w * t));
    return substitute(power, z_of_t(t, w), x, y, p);
}

Residual residual_eq8(const ComplexSample& v, const RsjParams& p) {
    if (v.z == cplx{0.0}) throw Error(ErrorCode::ZeroArgument, "z = 0");
    const double w = p.omega();
    const double half_a = p.A() / (2.0 * w);
    const double c = p.B() / w + 1.0;
    const double k = 1.0 / (4.0 * w * w);
    const cplx z = v.z;
    const cplx t1 = z * z * v.d2;
    const cplx t2 = half_a * z * z * v.d1;
    const cplx t3 = half_a * v.d1;
    const cplx t4 = c * z * v.d1;
    const cplx t5 = k * v.value;
    return {t1 + t2 + t3 + t4 + t5,
            max_magnitude({std::abs(t1), std::abs(t2), std::abs(t3), std::abs(t4), std::abs(t5)})};
}

Residual residual_eq11(const ComplexSample& f, const DcheParams& d) {
    const double n = d.n();
    const double mu = d.mu();
    const double lambda = d.lambda();
    const cplx z = f.z;
    const cplx terms[] = {
        z * z * f.d2,       (1.0 - n) * z * f.d1, -mu * z * z * f.d1, mu * n * z * f.value,
        mu * f.d1,          -z * f.d1,            lambda * f.value,
    };
    cplx sum{0.0};
    double scale = 0.0;
    for (const cplx& t : terms) {
        sum += t;
        scale = std::max(scale, std::abs(t));
    }
    return {sum, scale};
}

Residual residual_eq11(const HeunPolynomial& P, cplx z) {
    const PolyValue v = evaluate(P.coeffs(), z);
    Residual r = residual_eq11(ComplexSample{z, v.value, v.d1, v.d2}, P.params());
    // Magnitudes from |a_k| |z|^k also cover cancellation inside the sums.
    const PolyMagnitude m = evaluate_abs(P.coeffs(), std::abs(z));
    const double n = P.n();
    const double mu = std::abs(P.mu());
    const double r1 = std::abs(z);
    const double r2 = r1 * r1;
    r.scale = max_magnitude({r2 * m.d2, std::abs(1.0 - n) * r1 * m.d1, mu * r2 * m.d1,
                             mu * n * r1 * m.value, mu * m.d1, r1 * m.d1,
                             std::abs(P.lambda()) * m.value});
    return r;
}

ComplexSample v_from_polynomial(const HeunPolynomial& P, cplx z) {
    const PolyValue p = evaluate(P.coeffs(), z);
    const double mu = P.mu();
    const cplx e = std::exp(-mu * z);
    return {z, e * p.value, e * (p.d1 - mu * p.value), e * (p.d2 - 2.0 * mu * p.d1 + mu * mu * p.value)};
}

cplx mobius(cplx z, cplx alpha) {
    if (alpha == cplx{0.0}) throw Error(ErrorCode::InvalidParameters, "alpha must be nonzero");
    if (z == alpha) throw Error(ErrorCode::PoleAtAlpha, "z = alpha");
    return (z + alpha) / (z - alpha);
}

cplx mobius_inverse(cplx zeta, cplx alpha) {
    if (alpha == cplx{0.0}) throw Error(ErrorCode::InvalidParameters, "alpha must be nonzero");
    if (zeta == cplx{1.0}) throw Error(ErrorCode::PoleAtAlpha, "zeta = 1 is the image of z = infinity");
    return alpha * (zeta + 1.0) / (zeta - 1.0);
}

ComplexSample transport_to_zeta(const ComplexSample& at_z, cplx alpha) {
    const cplx zeta = mobius(at_z.z, alpha);
    const cplx s = zeta - 1.0;
    const cplx dz = -2.0 * alpha / (s * s);
    const cplx d2z = 4.0 * alpha / (s * s * s);
    return {zeta, at_z.value, at_z.d1 * dz, at_z.d2 * dz * dz + at_z.d1 * d2z};
}

Residual residual_eq8a(const ComplexSample& v, const RsjParams& p) {
    require_regular_zeta(v.z);
    const double w = p.omega();
    const cplx zeta = v.z;
    const cplx one_minus = 1.0 - zeta * zeta;
    const cplx terms[] = {
        one_minus * one_minus * v.d2,
        -2.0 * zeta * one_minus * v.d1,
        2.0 * (p.B() / w) * one_minus * v.d1,
        -2.0 * (p.A() / w) * (1.0 + zeta * zeta) * v.d1,
        v.value / (w * w),
    };
    cplx sum{0.0};
    double scale = 0.0;
    for (const cplx& t : terms) {
        sum += t;
        scale = std::max(scale, std::abs(t));
    }
    return {sum, scale};
}

Residual residual_eq8b(const ComplexSample& v, const RsjParams& p) {
    require_regular_zeta(v.z);
    const double w = p.omega();
    const cplx zeta = v.z;
    const cplx one_minus = 1.0 - zeta * zeta;
    const cplx terms[] = {
        one_minus * one_minus * v.d2,
        2.0 * (p.B() / w) * one_minus * v.d1,
        -2.0 * zeta * one_minus * v.d1,
        -4.0i * (p.A() / w) * zeta * v.d1,
        v.value / (w * w),
    };
    cplx sum{0.0};
    double scale = 0.0;
    for (const cplx& t : terms) {
        sum += t;
        scale = std::max(scale, std::abs(t));
    }
    return {sum, scale};
}

CanonicalDcheSets canonical_dche_params(const RsjParams& p) {
    const double w = p.omega();
    const double A = p.A();
    const double c = p.B() / w + 1.0;
    CanonicalDcheSets sets;
    sets.mobius_form = {0.0, -c, 1i * A / (2.0 * w), 1.0 / (2.0i * w * A)};
    const double half = A / (2.0 * w);
    sets.rescaled_form = {0.0, c, -half * half, 1.0 / (4.0 * w * w)};
    return sets;
}

Residual residual_canonical_dche(const ComplexSample& y, const CanonicalDche& k) {
    const cplx z = y.z;
    const cplx terms[] = {
        z * z * y.d2, -z * z * y.d1, k.c * z * y.d1, k.t * y.d1, -k.a * z * y.value, k.lambda * y.value,
    };
    cplx sum{0.0};
    double scale = 0.0;
    for (const cplx& t : terms) {
        sum += t;
        scale = std::max(scale, std::abs(t));
    }
    return {sum, scale};
}

const std::array<cplx, 20>& residual_sample_points() {
    static const std::array<cplx, 20> points = [] {
        std::array<cplx, 20> pts{};
        pts[0] = 0.5;
        pts[1] = 1.0;
        pts[2] = 2.0;
        for (int k = 0; k < 16; ++k) pts[3 + k] = std::polar(1.0, std::numbers::pi * k / 8.0);
        pts[19] = -1.0;
        return pts;
    }();
    return points;
}

double max_residual_eq11(const HeunPolynomial& P) {
    double worst = 0.0;
    for (const cplx& z : residual_sample_points()) worst = std::max(worst, residual_eq11(P, z).relative());
    return worst;
}

}  // namespace heun_rsj
