#pragma once

#include <span>
#include <vector>

#include "heun_rsj/model.hpp"

namespace heun_rsj {

/// Coefficients of z^n [P'(1/z) - mu P(1/z)]:
/// tilde_k = (n+1-k) a_{n+1-k} - mu a_{n-k}, with a_{n+1} = 0.
[[nodiscard]] std::vector<double> tilde_p(const HeunPolynomial& P);

inline constexpr double kUnimodularTolerance = 1e-8;

/// eps = (P'(1) - mu P(1)) 2w / P(1), which must be +-1.
[[nodiscard]] int epsilon_sign(const HeunPolynomial& P);

/// max over the residual sample set of
/// |P'(z) - mu P(z) - eps (2w)^-1 z^n P(1/z)| / scale.
[[nodiscard]] double symmetry_residual(const HeunPolynomial& P, int epsilon);
[[nodiscard]] double symmetry_residual(const HeunPolynomial& P);

/// eps (2w)^-1 a_k - (n+1-k) a_{n+1-k} + mu a_{n-k}, k = 0..n.
[[nodiscard]] std::vector<double> coeff_relations_residual(const HeunPolynomial& P, int epsilon);

struct AssociatedValue {
    double q = 0.0;
    double dq = 0.0;
    double d2q = 0.0;
    double integral = 0.0;  ///< the quadrature from base to z
};

/// Second solution Q = P(z) * int_base^z s^n exp(mu(s + 1/s)) P(s)^-2 ds,
/// on the positive real axis.
[[nodiscard]] AssociatedValue associated_q(const HeunPolynomial& P, double z, double base = 1.0);

/// The integrand of associated_q; grows without bound as s -> 0+ for mu > 0.
[[nodiscard]] double associated_integrand(const HeunPolynomial& P, double s);

/// min |P| over the 4096-th roots of unity, relative to sum |a_k|.
[[nodiscard]] double unit_circle_min_modulus(const HeunPolynomial& P);

/// Closed-form phase exp(-i phi) = i eps z^(n+1) P(1/z)/P(z), z = e^{i w t},
/// continued along increasing t from phi(0) in (-pi, pi]. Times must be
/// non-decreasing and start at t >= 0; intermediate points are inserted so
/// that the argument is tracked at >= 64 points per period.
[[nodiscard]] std::vector<double> phase_from_poly(const HeunPolynomial& P,
                                                  std::span<const double> times);
[[nodiscard]] double phase_from_poly(const HeunPolynomial& P, double t);

/// |exp(-i phi) - i eps z^(n+1) P(1/z)/P(z)| at time t.
[[nodiscard]] double phase_certificate(const HeunPolynomial& P, double t, double phi);

/// Orthogonality weight for two polynomial solutions with a common mu.
[[nodiscard]] double weight_xi(double z, const HeunPolynomial& P1, const HeunPolynomial& P2);

/// d/dz of the boundary term plus Xi P1 P2, over the largest summand.
[[nodiscard]] double xi_identity_residual(double z, const HeunPolynomial& P1,
                                         const HeunPolynomial& P2);

struct OrthogonalityReport {
    double value = 0.0;
    double scale = 0.0;  ///< int |Xi P1 P2| dz

    [[nodiscard]] double relative() const noexcept { return scale > 0 ? value / scale : value; }
};

/// int_0^inf Xi P1 P2 dz evaluated on z = e^u. Requires mu > 0.
[[nodiscard]] OrthogonalityReport orthogonality_integral(const HeunPolynomial& P1,
                                                         const HeunPolynomial& P2);

/// int_0^inf z^-n exp(-mu(z + 1/z)) P^2 dz. Requires mu > 0.
[[nodiscard]] double norm_integral(const HeunPolynomial& P);

}  // namespace heun_rsj
