#pragma once

#include <array>
#include <complex>

#include "heun_rsj/model.hpp"
#include "heun_rsj/polynomial.hpp"

namespace heun_rsj {

/// A function value with its first two derivatives at a complex point.
struct ComplexSample {
    cplx z;
    cplx value;
    cplx d1;
    cplx d2;
};

/// A residual together with the largest summand magnitude at that point.
struct Residual {
    cplx value;
    double scale = 0.0;

    [[nodiscard]] double relative() const noexcept;
};

[[nodiscard]] cplx z_of_t(double t, double omega) noexcept;

struct VPair {
    cplx v;
    cplx v_check;
};

/// The (x, y) -> (v, v_check) substitution using the principal branch of
/// z^(-B/2 omega).
[[nodiscard]] VPair xy_to_v(cplx z, cplx x, cplx y, const RsjParams& p);

/// Same substitution along the unit circle at time t, with log z = i omega t
/// so that the power stays continuous in t.
[[nodiscard]] VPair xy_to_v_at_time(double t, cplx x, cplx y, const RsjParams& p);

/// z^2 v'' + [(A/2w)(z^2+1) + (B/w+1) z] v' + v/(4w^2).
[[nodiscard]] Residual residual_eq8(const ComplexSample& v, const RsjParams& p);

/// z (z P' - n P)' - mu z (z P' - n P) + (mu - z) P' + lambda P.
[[nodiscard]] Residual residual_eq11(const HeunPolynomial& P, cplx z);

/// Same operator applied to an arbitrary function given by its value and
/// derivatives at z.
[[nodiscard]] Residual residual_eq11(const ComplexSample& f, const DcheParams& d);

/// v = exp(-mu z) P(z) and its derivatives.
[[nodiscard]] ComplexSample v_from_polynomial(const HeunPolynomial& P, cplx z);

/// zeta = (z + alpha)/(z - alpha).
[[nodiscard]] cplx mobius(cplx z, cplx alpha);
[[nodiscard]] cplx mobius_inverse(cplx zeta, cplx alpha);

/// Re-expresses derivatives with respect to z as derivatives with respect to
/// zeta = mobius(z, alpha). Exact chain rule.
[[nodiscard]] ComplexSample transport_to_zeta(const ComplexSample& at_z, cplx alpha);

/// (1-zeta^2) d/dzeta (1-zeta^2) d/dzeta + 2[(B/w)(1-zeta^2) - (A/w)(1+zeta^2)] d/dzeta + 1/w^2.
[[nodiscard]] Residual residual_eq8a(const ComplexSample& v, const RsjParams& p);

/// (1-zeta^2)^2 d2 + 2[(B/w - zeta)(1-zeta^2) - 2i(A/w) zeta] d + 1/w^2.
[[nodiscard]] Residual residual_eq8b(const ComplexSample& v, const RsjParams& p);

struct CanonicalDche {
    cplx a;
    cplx c;
    cplx t;
    cplx lambda;
};

struct CanonicalDcheSets {
    CanonicalDche mobius_form;    ///< the alpha = i form
    CanonicalDche rescaled_form;  ///< z^2 y'' + (-z^2 + c z + t) y' + (-a z + lambda) y = 0
};

[[nodiscard]] CanonicalDcheSets canonical_dche_params(const RsjParams& p);

/// z^2 y'' + (-z^2 + c z + t) y' + (-a z + lambda) y.
[[nodiscard]] Residual residual_canonical_dche(const ComplexSample& y, const CanonicalDche& c);

/// Fixed residual sample set: 0.5, 1, 2, e^{i pi k/8} (k = 0..15), -1.
[[nodiscard]] const std::array<cplx, 20>& residual_sample_points();

/// max over the sample set of |residual_eq11| / scale.
[[nodiscard]] double max_residual_eq11(const HeunPolynomial& P);

}  // namespace heun_rsj
