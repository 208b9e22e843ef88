#include "heun_rsj/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>

#include "heun_rsj/error.hpp"
#include "heun_rsj/heun_poly.hpp"

namespace heun_rsj {

namespace {

constexpr double kRootCertificate = 1e-10;
constexpr int kMaxNewtonSteps = 8;

// Newton on delta_direct, never moving further than a rounding-level
// distance from the eigenvalue and only accepting steps that shrink |Delta|.
double polish_root(int n, double mu, double lambda0) {
    double lambda = lambda0;
    DeltaWithDerivative cur = delta_with_derivative(DcheParams(n, mu, lambda));
    const double max_shift = 1e-6 * (1.0 + std::abs(lambda0));
    for (int it = 0; it < kMaxNewtonSteps && cur.value != 0.0; ++it) {
        if (cur.d_lambda == 0.0 || !std::isfinite(cur.d_lambda)) break;
        const double candidate = lambda - cur.value / cur.d_lambda;
        if (std::abs(candidate - lambda0) > max_shift) break;
        const DeltaWithDerivative next = delta_with_derivative(DcheParams(n, mu, candidate));
        if (!(std::abs(next.value) < std::abs(cur.value))) break;
        lambda = candidate;
        cur = next;
    }
    return lambda;
}

double hadamard_bound(const Eigen::MatrixXd& m) {
    double bound = 1.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) bound *= m.row(i).norm();
    return bound;
}

// Eigenvalues of H_{jk} = mu delta_{j,n-k} - j delta_{j,n+1-k}. H^2 = mu^2 I + T^T,
// so every s satisfies s^2 = lambda_j + mu^2 for one root, and G^(eps) is
// singular for eps = -sign(s). Long double keeps small |s| accurate.
Eigen::Matrix<std::complex<long double>, Eigen::Dynamic, 1> reflection_eigenvalues(int n, double mu) {
    using MatrixL = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
    MatrixL h = MatrixL::Zero(n + 1, n + 1);
    for (int j = 0; j <= n; ++j) {
        h(j, n - j) += mu;
        if (j >= 1) h(j, n + 1 - j) -= j;
    }
    Eigen::EigenSolver<MatrixL> solver(h, false);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorCode::ConvergenceFailure, "reflection eigensolver did not converge");
    }
    return solver.eigenvalues();
}

void attach_half_inverse_omegas(SpectralSet& set) {
    const auto eig = reflection_eigenvalues(set.n, set.mu);
    const long double mu2 = static_cast<long double>(set.mu) * set.mu;
    std::vector<bool> used(static_cast<std::size_t>(eig.size()), false);
    set.half_inverse_omegas.assign(set.lambdas.size(), std::nullopt);
    set.epsilons.assign(set.lambdas.size(), 0);
    for (std::size_t i = 0; i < set.lambdas.size(); ++i) {
        const long double target = set.lambdas[i] + mu2;
        Eigen::Index best = -1;
        long double best_gap = std::numeric_limits<long double>::infinity();
        for (Eigen::Index k = 0; k < eig.size(); ++k) {
            if (used[static_cast<std::size_t>(k)]) continue;
            const long double gap = std::abs(eig(k) * eig(k) - target);
            if (gap < best_gap) {
                best_gap = gap;
                best = k;
            }
        }
        if (best < 0) continue;
        used[static_cast<std::size_t>(best)] = true;
        const std::complex<long double> s = eig(best);
        const long double re = std::abs(s.real());
        if (!(re > 0.0L) || std::abs(s.imag()) > 1e-9L * (1.0L + re)) continue;
        const double c = static_cast<double>(re);
        try {
            (void)DcheParams(set.n, set.mu, set.lambdas[i], c);
        } catch (const Error&) {
            continue;
        }
        set.half_inverse_omegas[i] = c;
        set.epsilons[i] = s.real() > 0 ? -1 : 1;
    }
}

}  // namespace

DcheParams SpectralSet::params(std::size_t i) const {
    if (i >= lambdas.size()) {
        throw Error(ErrorCode::IndexOutOfRange, "root index " + std::to_string(i) +
                                                    " outside 0.." + std::to_string(n));
    }
    if (i < half_inverse_omegas.size() && half_inverse_omegas[i]) {
        const int eps = i < epsilons.size() ? epsilons[i] : 0;
        return {n, mu, lambdas[i], *half_inverse_omegas[i], eps};
    }
    return {n, mu, lambdas[i]};
}

SpectralSet lambda_spectrum(int n, double mu) {
    if (n < 0) throw Error(ErrorCode::InvalidParameters, "n must be non-negative");
    if (!std::isfinite(mu)) throw Error(ErrorCode::InvalidParameters, "mu must be finite");

    SpectralSet set;
    set.n = n;
    set.mu = mu;
    if (n == 0) {
        set.lambdas = {0.0};
        attach_half_inverse_omegas(set);
        return set;
    }

    const auto size = static_cast<Eigen::Index>(n) + 1;
    Eigen::VectorXd diag(size);
    Eigen::VectorXd offdiag(size - 1);
    for (int j = 0; j <= n; ++j) diag(j) = static_cast<double>(j) * (n + 1 - j);
    for (int j = 0; j < n; ++j) {
        offdiag(j) = std::abs(mu) * std::sqrt(static_cast<double>(j + 1) * (n - j));
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, offdiag, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorCode::ConvergenceFailure, "tridiagonal eigensolver did not converge");
    }

    set.lambdas.resize(static_cast<std::size_t>(size));
    for (Eigen::Index i = 0; i < size; ++i) {
        const double root = polish_root(n, mu, solver.eigenvalues()(i));
        const DcheParams at_root(n, mu, root);
        if (!(std::abs(delta_direct(at_root)) <= kRootCertificate * delta_scale(at_root))) {
            throw Error(ErrorCode::ConvergenceFailure, "root " + std::to_string(i) +
                                                           " fails the determinant certificate");
        }
        set.lambdas[static_cast<std::size_t>(i)] = root;
    }
    std::stable_sort(set.lambdas.begin(), set.lambdas.end());
    attach_half_inverse_omegas(set);
    return set;
}

GMatrix g_matrix(int epsilon, const DcheParams& d) {
    if (epsilon != 1 && epsilon != -1) throw Error(ErrorCode::InvalidParameters, "epsilon must be +-1");
    const double c = d.half_inverse_omega();
    const int n = d.n();
    GMatrix g{epsilon, n, Eigen::MatrixXd::Zero(n + 1, n + 1)};
    for (int j = 0; j <= n; ++j) {
        g.entries(j, j) += epsilon * c;
        g.entries(j, n - j) += d.mu();
        if (j >= 1) g.entries(j, n + 1 - j) -= j;
    }
    return g;
}

FactorizationCheck check_factorization(const DcheParams& d) {
    const Eigen::MatrixXd product = g_matrix(1, d).entries * g_matrix(-1, d).entries;
    const TriDiagMatrix phi = build_phi(d);
    const int n = d.n();
    double dev_plus = 0.0, dev_minus = 0.0, scale = d.discriminant();
    for (int j = 0; j <= n; ++j) {
        for (int l = 0; l <= n; ++l) {
            const double target = phi.kronecker_at(j, l);
            scale = std::max(scale, std::abs(target));
            dev_plus = std::max(dev_plus, std::abs(product(j, l) - target));
            dev_minus = std::max(dev_minus, std::abs(product(j, l) + target));
        }
    }
    FactorizationCheck check;
    check.scale = scale;
    check.sign = dev_minus <= dev_plus ? -1 : 1;
    check.max_entry_deviation = std::min(dev_plus, dev_minus) / scale;
    return check;
}

double SpectralCondition::min_relative() const noexcept {
    const double rp = scale_plus > 0 ? std::abs(det_plus) / scale_plus : std::abs(det_plus);
    const double rm = scale_minus > 0 ? std::abs(det_minus) / scale_minus : std::abs(det_minus);
    return std::min(rp, rm);
}

SpectralCondition spectral_condition(const DcheParams& d) {
    const GMatrix plus = g_matrix(1, d);
    const GMatrix minus = g_matrix(-1, d);
    SpectralCondition sc;
    sc.det_plus = plus.entries.partialPivLu().determinant();
    sc.det_minus = minus.entries.partialPivLu().determinant();
    sc.scale_plus = hadamard_bound(plus.entries);
    sc.scale_minus = hadamard_bound(minus.entries);
    return sc;
}

PhysicalPoint physical_point(int n, double mu, int root_index) {
    const SpectralSet set = lambda_spectrum(n, mu);
    if (root_index < 0 || root_index >= static_cast<int>(set.lambdas.size())) {
        throw Error(ErrorCode::IndexOutOfRange, "root index " + std::to_string(root_index) +
                                                    " outside 0.." + std::to_string(n));
    }
    const DcheParams dche = set.params(static_cast<std::size_t>(root_index));
    return {dche_to_params(dche), dche};
}

}  // namespace heun_rsj
