#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <optional>
#include <vector>

#include "heun_rsj/model.hpp"

namespace heun_rsj {

/// The n+1 roots lambda of Delta_n(lambda, mu) = 0, ascending.
struct SpectralSet {
    int n = 0;
    double mu = 0.0;
    std::vector<double> lambdas;
    /// (2 omega)^-1 per root, empty when lambda + mu^2 <= 0. Taken from the
    /// eigenvalues of H (G^(eps) = eps c I + H), which stay accurate when
    /// lambda is within rounding of -mu^2.
    std::vector<std::optional<double>> half_inverse_omegas;
    /// eps with det G^(eps) = 0 per root, 0 when not admissible.
    std::vector<int> epsilons;

    /// Root i with its (2 omega)^-1 attached when available.
    [[nodiscard]] DcheParams params(std::size_t i) const;
};

/// Delta_n(lambda, mu) = det(lambda I - T) with T_jj = j(n+1-j) and
/// off-diagonal products mu^2 (j+1)(n-j) >= 0, so T is similar to a symmetric
/// tridiagonal matrix. Eigenvalues come from the symmetric solver and are
/// polished by Newton on delta_direct; each root is certified to
/// |Delta| <= 1e-10 * delta_scale.
[[nodiscard]] SpectralSet lambda_spectrum(int n, double mu);

/// G^(eps)_{jk} = eps (2w)^-1 delta_{jk} + mu delta_{j,n-k} - j delta_{j,n+1-k},
/// with (2w)^-1 = sqrt(lambda + mu^2).
struct GMatrix {
    int epsilon = 1;
    int n = 0;
    Eigen::MatrixXd entries;
};

[[nodiscard]] GMatrix g_matrix(int epsilon, const DcheParams& d);

struct FactorizationCheck {
    double max_entry_deviation = 0.0;  ///< already divided by scale
    int sign = 0;                      ///< G+ G- = sign * Phi (Kronecker orientation)
    double scale = 0.0;                ///< max |Phi_jk|
};

/// Compares G+ G- against +Phi and -Phi. The product works out to
/// H^2 - (lambda + mu^2) I = -Phi, so `sign` is -1 for every n.
[[nodiscard]] FactorizationCheck check_factorization(const DcheParams& d);

struct SpectralCondition {
    double det_plus = 0.0;
    double det_minus = 0.0;
    /// Hadamard bounds (product of row norms) for each determinant.
    double scale_plus = 0.0;
    double scale_minus = 0.0;

    [[nodiscard]] double min_relative() const noexcept;
};

/// det G+ * det G- = (-1)^(n+1) Delta_n.
[[nodiscard]] SpectralCondition spectral_condition(const DcheParams& d);

struct PhysicalPoint {
    RsjParams rsj;
    DcheParams dche;
};

/// Root `root_index` of the spectrum mapped to (A, B, omega), omega > 0.
[[nodiscard]] PhysicalPoint physical_point(int n, double mu, int root_index);

}  // namespace heun_rsj
