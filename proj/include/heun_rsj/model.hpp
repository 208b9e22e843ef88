#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace heun_rsj {

/// Harmonic bias q(t) = B + A cos(omega t). A and omega must be nonzero.
class RsjParams {
public:
    RsjParams(double A, double B, double omega);

    [[nodiscard]] double A() const noexcept { return A_; }
    [[nodiscard]] double B() const noexcept { return B_; }
    [[nodiscard]] double omega() const noexcept { return omega_; }
    [[nodiscard]] double period() const noexcept;

private:
    double A_;
    double B_;
    double omega_;
};

/// Reduced triplet (n, mu, lambda) of the master polynomial equation.
///
/// mu = 0 is accepted here because the algebraic objects (tridiagonal matrix,
/// determinant, spectrum) are well defined there; maps back to physical
/// parameters reject it.
class DcheParams {
public:
    DcheParams(int n, double mu, double lambda);

    /// Also records (2 omega)^-1 = sqrt(lambda + mu^2) > 0 computed by a
    /// route more accurate than the square root of the rounded sum; needed
    /// where lambda sits within rounding of -mu^2.
    /// `epsilon` (+-1, or 0 when unknown) records which G^(eps) is singular.
    DcheParams(int n, double mu, double lambda, double half_inverse_omega, int epsilon = 0);

    [[nodiscard]] int n() const noexcept { return n_; }
    [[nodiscard]] double mu() const noexcept { return mu_; }
    [[nodiscard]] double lambda() const noexcept { return lambda_; }

    /// lambda + mu^2, equal to 1/(2 omega)^2 on the physical branch.
    [[nodiscard]] double discriminant() const noexcept { return lambda_ + mu_ * mu_; }

    /// True when a real omega exists.
    [[nodiscard]] bool admissible() const noexcept;

    /// (2 omega)^-1 > 0; throws NonPositiveDiscriminant when not admissible.
    [[nodiscard]] double half_inverse_omega() const;

    /// Recorded eps, 0 when unknown.
    [[nodiscard]] int epsilon_hint() const noexcept { return epsilon_; }

    /// Drops any recorded (2 omega)^-1 and eps.
    [[nodiscard]] DcheParams with_lambda(double lambda) const { return {n_, mu_, lambda}; }

private:
    int n_;
    double mu_;
    double lambda_;
    std::optional<double> half_inverse_omega_;
    int epsilon_ = 0;
};

inline constexpr double kDefaultIntegralTolerance = 1e-9;

struct DcheCandidate {
    double n_real = 0.0;
    double mu = 0.0;
    double lambda = 0.0;
    double half_inverse_omega = 0.0;  ///< 1/(2|omega|), exact from the input
    bool integral = false;

    /// Present only when n_real is a non-negative integer within tolerance.
    [[nodiscard]] std::optional<DcheParams> params() const;
};

[[nodiscard]] DcheCandidate params_to_dche(const RsjParams& p,
                                           double tol_int = kDefaultIntegralTolerance);

/// Inverse map on the omega > 0 branch. Throws NonPositiveDiscriminant when
/// lambda + mu^2 <= 0 and InvalidParameters when mu = 0 (A would vanish).
[[nodiscard]] RsjParams dche_to_params(const DcheParams& d);

/// Degree-n polynomial a_0 + a_1 z + ... + a_n z^n, stored monic (a_n = 1).
class HeunPolynomial {
public:
    /// Coefficients are rescaled so that the leading one is 1; a vanishing
    /// or non-finite leading coefficient is rejected.
    HeunPolynomial(DcheParams params, std::vector<double> coeffs);

    [[nodiscard]] const DcheParams& params() const noexcept { return params_; }
    [[nodiscard]] int n() const noexcept { return params_.n(); }
    [[nodiscard]] double mu() const noexcept { return params_.mu(); }
    [[nodiscard]] double lambda() const noexcept { return params_.lambda(); }
    [[nodiscard]] std::span<const double> coeffs() const noexcept { return coeffs_; }
    [[nodiscard]] double coeff(int k) const;
    [[nodiscard]] double max_abs_coeff() const noexcept;
    /// Sum of |a_k|: bounds |P| on the closed unit disc.
    [[nodiscard]] double l1_norm() const noexcept;

private:
    DcheParams params_;
    std::vector<double> coeffs_;
};

/// Time-stamped samples; each row holds `width()` values after the time.
class Trajectory {
public:
    Trajectory(std::vector<std::string> columns, std::vector<double> times,
               std::vector<double> values);

    [[nodiscard]] std::size_t size() const noexcept { return times_.size(); }
    [[nodiscard]] std::size_t width() const noexcept { return columns_.size(); }
    [[nodiscard]] const std::vector<std::string>& columns() const noexcept { return columns_; }
    [[nodiscard]] std::span<const double> times() const noexcept { return times_; }
    [[nodiscard]] double time(std::size_t i) const { return times_.at(i); }
    [[nodiscard]] double value(std::size_t i, std::size_t column = 0) const;
    /// One column as a contiguous vector.
    [[nodiscard]] std::vector<double> column(std::size_t column) const;

private:
    std::vector<std::string> columns_;
    std::vector<double> times_;
    std::vector<double> values_;
};

}  // namespace heun_rsj
