#include "heun_rsj/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "heun_rsj/error.hpp"

namespace heun_rsj {

RsjParams::RsjParams(double A, double B, double omega) : A_(A), B_(B), omega_(omega) {
    if (!std::isfinite(A) || !std::isfinite(B) || !std::isfinite(omega)) {
        throw Error(ErrorCode::InvalidParameters, "A, B and omega must be finite");
    }
    if (A == 0.0 || omega == 0.0) {
        throw Error(ErrorCode::InvalidParameters, "A and omega must be nonzero");
    }
}

double RsjParams::period() const noexcept { return 2.0 * std::numbers::pi / std::abs(omega_); }

DcheParams::DcheParams(int n, double mu, double lambda) : n_(n), mu_(mu), lambda_(lambda) {
    if (n < 0) {
        throw Error(ErrorCode::InvalidParameters, "n must be non-negative");
    }
    if (!std::isfinite(mu) || !std::isfinite(lambda)) {
        throw Error(ErrorCode::InvalidParameters, "mu and lambda must be finite");
    }
}

DcheParams::DcheParams(int n, double mu, double lambda, double half_inverse_omega, int epsilon)
    : DcheParams(n, mu, lambda) {
    if (epsilon != 0 && epsilon != 1 && epsilon != -1) {
        throw Error(ErrorCode::InvalidParameters, "epsilon must be -1, 0 or 1");
    }
    if (!std::isfinite(half_inverse_omega) || !(half_inverse_omega > 0.0)) {
        throw Error(ErrorCode::InvalidParameters, "(2 omega)^-1 must be positive");
    }
    const double c2 = half_inverse_omega * half_inverse_omega;
    const double slack = 1e-12 * std::max({1.0, std::abs(lambda), mu * mu});
    if (std::abs(c2 - discriminant()) > slack) {
        throw Error(ErrorCode::InvalidParameters, "(2 omega)^-2 disagrees with lambda + mu^2");
    }
    half_inverse_omega_ = half_inverse_omega;
    epsilon_ = epsilon;
}

bool DcheParams::admissible() const noexcept {
    return half_inverse_omega_.has_value() || discriminant() > 0.0;
}

double DcheParams::half_inverse_omega() const {
    if (half_inverse_omega_) return *half_inverse_omega_;
    const double disc = discriminant();
    if (!(disc > 0.0)) {
        throw Error(ErrorCode::NonPositiveDiscriminant,
                    "lambda + mu^2 = " + short_number(disc) + " admits no real omega");
    }
    return std::sqrt(disc);
}

std::optional<DcheParams> DcheCandidate::params() const {
    if (!integral) return std::nullopt;
    return DcheParams(static_cast<int>(std::lround(n_real)), mu, lambda, half_inverse_omega);
}

DcheCandidate params_to_dche(const RsjParams& p, double tol_int) {
    DcheCandidate c;
    const double w = p.omega();
    c.n_real = -(p.B() / w + 1.0);
    c.mu = p.A() / (2.0 * w);
    c.lambda = 1.0 / (4.0 * w * w) - c.mu * c.mu;
    c.half_inverse_omega = 1.0 / (2.0 * std::abs(w));
    const double rounded = std::round(c.n_real);
    c.integral = std::abs(c.n_real - rounded) <= tol_int && rounded >= 0.0;
    return c;
}

RsjParams dche_to_params(const DcheParams& d) {
    const double c = d.half_inverse_omega();
    if (d.mu() == 0.0) {
        throw Error(ErrorCode::InvalidParameters, "mu = 0 corresponds to A = 0");
    }
    const double omega = 1.0 / (2.0 * c);
    return {2.0 * d.mu() * omega, -(d.n() + 1) * omega, omega};
}

HeunPolynomial::HeunPolynomial(DcheParams params, std::vector<double> coeffs)
    : params_(params), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != static_cast<std::size_t>(params_.n()) + 1) {
        throw Error(ErrorCode::InvalidParameters,
                    "expected " + std::to_string(params_.n() + 1) + " coefficients, got " +
                        std::to_string(coeffs_.size()));
    }
    const double lead = coeffs_.back();
    if (!std::isfinite(lead) || lead == 0.0) {
        throw Error(ErrorCode::InvalidParameters, "leading coefficient must be finite and nonzero");
    }
    for (double& a : coeffs_) {
        a /= lead;
        if (!std::isfinite(a)) {
            throw Error(ErrorCode::InvalidParameters, "non-finite coefficient");
        }
    }
    coeffs_.back() = 1.0;
}

double HeunPolynomial::coeff(int k) const {
    if (k < 0 || k > n()) return 0.0;
    return coeffs_[static_cast<std::size_t>(k)];
}

double HeunPolynomial::max_abs_coeff() const noexcept {
    double m = 0.0;
    for (double a : coeffs_) m = std::max(m, std::abs(a));
    return m;
}

double HeunPolynomial::l1_norm() const noexcept {
    double s = 0.0;
    for (double a : coeffs_) s += std::abs(a);
    return s;
}

Trajectory::Trajectory(std::vector<std::string> columns, std::vector<double> times,
                       std::vector<double> values)
    : columns_(std::move(columns)), times_(std::move(times)), values_(std::move(values)) {
    if (columns_.empty() || values_.size() != times_.size() * columns_.size()) {
        throw Error(ErrorCode::InvalidParameters, "trajectory shape mismatch");
    }
    for (std::size_t i = 1; i < times_.size(); ++i) {
        if (!(times_[i] > times_[i - 1])) {
            throw Error(ErrorCode::InvalidParameters, "trajectory times must increase strictly");
        }
    }
}

double Trajectory::value(std::size_t i, std::size_t column) const {
    if (i >= size() || column >= width()) {
        throw Error(ErrorCode::IndexOutOfRange, "trajectory index");
    }
    return values_[i * width() + column];
}

std::vector<double> Trajectory::column(std::size_t column) const {
    std::vector<double> out(size());
    for (std::size_t i = 0; i < size(); ++i) out[i] = value(i, column);
    return out;
}

}  // namespace heun_rsj
