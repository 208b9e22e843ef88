#pragma once

#include <vector>

#include "heun_rsj/model.hpp"

namespace heun_rsj {

/// (n+1)x(n+1) tridiagonal matrix of the coefficient system, stored in the
/// orientation where row k is the equation for z^k:
///   row k: mu (n-k+1) a_{k-1} + (lambda - k(n+1-k)) a_k + mu (k+1) a_{k+1}.
/// The Kronecker-delta orientation is its transpose.
class TriDiagMatrix {
public:
    explicit TriDiagMatrix(const DcheParams& d);

    [[nodiscard]] int n() const noexcept { return n_; }
    [[nodiscard]] std::size_t dim() const noexcept { return diag_.size(); }
    [[nodiscard]] const std::vector<double>& diag() const noexcept { return diag_; }
    /// super()[j] = entry (j, j+1), j = 0..n-1
    [[nodiscard]] const std::vector<double>& super() const noexcept { return super_; }
    /// sub()[j-1] = entry (j, j-1), j = 1..n
    [[nodiscard]] const std::vector<double>& sub() const noexcept { return sub_; }

    [[nodiscard]] double at(int row, int col) const;
    [[nodiscard]] double kronecker_at(int row, int col) const { return at(col, row); }

private:
    int n_;
    std::vector<double> diag_;
    std::vector<double> super_;
    std::vector<double> sub_;
};

[[nodiscard]] TriDiagMatrix build_phi(const DcheParams& d);

/// mantissa * 2^exponent with |mantissa| in [0.5, 1) (or 0).
struct ScaledReal {
    double mantissa = 0.0;
    long exponent = 0;

    [[nodiscard]] static ScaledReal from(double x);
    [[nodiscard]] double to_double() const;
    [[nodiscard]] ScaledReal operator*(double x) const;
    [[nodiscard]] ScaledReal operator-(const ScaledReal& other) const;
    [[nodiscard]] ScaledReal operator+(const ScaledReal& other) const;
};

/// Determinant by the three-term tridiagonal recurrence. Values that
/// overflow a double come back as +-inf; see delta_direct_scaled.
[[nodiscard]] double delta_direct(const DcheParams& d);

/// Determinant with per-step renormalisation; safe for large n.
[[nodiscard]] ScaledReal delta_direct_scaled(const DcheParams& d);

/// The same recurrence run on |entries|: bounds every term that enters the
/// determinant and serves as its rounding scale.
[[nodiscard]] double delta_scale(const DcheParams& d);

struct DeltaWithDerivative {
    double value;
    double d_lambda;
    double scale;
};

[[nodiscard]] DeltaWithDerivative delta_with_derivative(const DcheParams& d);

struct TwoByTwo {
    double m00 = 1.0, m01 = 0.0, m10 = 0.0, m11 = 1.0;

    [[nodiscard]] static TwoByTwo identity() { return {}; }
    [[nodiscard]] TwoByTwo operator*(const TwoByTwo& r) const;
};

/// M_k = [[Z_k + lambda, mu^2], [Z_k, 0]] with Z_k = k(k - n - 1). The index
/// is real so the k -> k + eps limit can be taken.
[[nodiscard]] TwoByTwo transfer_matrix(double k, const DcheParams& d);

/// Ordered product M_first M_{first+1} ... M_last (identity when empty).
[[nodiscard]] TwoByTwo transfer_product(int first, int last, const DcheParams& d);

/// Determinant as -[lambda, mu^2] M_1...M_{n-1} [n - lambda, n]^T. n >= 1.
[[nodiscard]] double delta_matrix(const DcheParams& d);

/// R_k = (mu/k) a_{k-1}/a_k for k = 1..n, returned with r[k-1] = R_k.
/// Starts from R_n = 1 - lambda/n and runs the recurrence downward.
[[nodiscard]] std::vector<double> ratios(const DcheParams& d);

/// a_n = 1, a_{k-1} = (k/mu) R_k a_k. Defined for any lambda; only spectral
/// lambdas give a solution.
[[nodiscard]] HeunPolynomial coeffs_from_ratios(const DcheParams& d);

/// a_k from the transfer-matrix product, a_n = 1. k = 0 is reached by the
/// k -> k + eps limit with Richardson extrapolation.
[[nodiscard]] double coeff_matrix(int k, const DcheParams& d);

struct LinearSystemResidual {
    double r0 = 0.0;
    std::vector<double> rmid;
    double rn = 0.0;

    [[nodiscard]] double max_abs() const noexcept;
};

[[nodiscard]] LinearSystemResidual residual_linear_system(const HeunPolynomial& P);

/// [1, mu^2/lambda] M_1...M_{n-1} [1 - lambda/n, 1]^T; equals -Delta_n/(n lambda).
[[nodiscard]] double necessary_condition(const DcheParams& d);

inline constexpr double kDefaultSpectralTolerance = 1e-8;

/// Polynomial solution for a spectral (n, mu, lambda). Throws NotSpectral
/// when |Delta_n| exceeds tol_spec * delta_scale.
[[nodiscard]] HeunPolynomial build_polynomial(const DcheParams& d,
                                              double tol_spec = kDefaultSpectralTolerance);

}  // namespace heun_rsj
