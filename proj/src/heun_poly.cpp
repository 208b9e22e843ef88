#include "heun_rsj/heun_poly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "heun_rsj/error.hpp"
#include "heun_rsj/transforms.hpp"

namespace heun_rsj {

namespace {

// Beyond this degree the plain recurrence can leave the double range.
constexpr int kScaledDeterminantDegree = 30;

constexpr double kPolynomialResidualTolerance = 1e-9;

// Product of the (j, j-1) and (j-1, j) entries of Phi.
double offdiag_product(int j, const DcheParams& d) {
    return d.mu() * d.mu() * static_cast<double>(d.n() - j + 1) * static_cast<double>(j);
}

double diag_entry(int j, const DcheParams& d) {
    return d.lambda() - static_cast<double>(j) * static_cast<double>(d.n() + 1 - j);
}

void require_nonzero_mu(const DcheParams& d) {
    if (d.mu() == 0.0) {
        throw Error(ErrorCode::InvalidParameters, "coefficient recurrences divide by mu; mu = 0");
    }
}

double apply_second_row(const TwoByTwo& m, double u0, double u1) { return m.m10 * u0 + m.m11 * u1; }
double apply_first_row(const TwoByTwo& m, double u0, double u1) { return m.m00 * u0 + m.m01 * u1; }

}  // namespace

TriDiagMatrix::TriDiagMatrix(const DcheParams& d) : n_(d.n()) {
    const int n = n_;
    diag_.resize(static_cast<std::size_t>(n) + 1);
    super_.resize(static_cast<std::size_t>(n));
    sub_.resize(static_cast<std::size_t>(n));
    for (int j = 0; j <= n; ++j) diag_[static_cast<std::size_t>(j)] = diag_entry(j, d);
    for (int j = 0; j < n; ++j) super_[static_cast<std::size_t>(j)] = d.mu() * (j + 1);
    for (int j = 1; j <= n; ++j) sub_[static_cast<std::size_t>(j - 1)] = d.mu() * (n - j + 1);
}

double TriDiagMatrix::at(int row, int col) const {
    if (row < 0 || col < 0 || row > n_ || col > n_) {
        throw Error(ErrorCode::IndexOutOfRange, "matrix index (" + std::to_string(row) + ", " +
                                                    std::to_string(col) + ")");
    }
    if (row == col) return diag_[static_cast<std::size_t>(row)];
    if (col == row + 1) return super_[static_cast<std::size_t>(row)];
    if (col == row - 1) return sub_[static_cast<std::size_t>(row - 1)];
    return 0.0;
}

TriDiagMatrix build_phi(const DcheParams& d) { return TriDiagMatrix(d); }

ScaledReal ScaledReal::from(double x) {
    int e = 0;
    const double m = std::frexp(x, &e);
    return {m, m == 0.0 ? 0L : static_cast<long>(e)};
}

double ScaledReal::to_double() const {
    if (exponent > 4096) return mantissa == 0.0 ? 0.0 : std::copysign(HUGE_VAL, mantissa);
    if (exponent < -4096) return 0.0;
    return std::ldexp(mantissa, static_cast<int>(exponent));
}

ScaledReal ScaledReal::operator*(double x) const {
    ScaledReal r = from(mantissa * x);
    if (r.mantissa != 0.0) r.exponent += exponent;
    return r;
}

ScaledReal ScaledReal::operator+(const ScaledReal& o) const {
    if (mantissa == 0.0) return o;
    if (o.mantissa == 0.0) return *this;
    const long e = std::max(exponent, o.exponent);
    const long da = exponent - e;
    const long db = o.exponent - e;
    const double a = da < -1100 ? 0.0 : std::ldexp(mantissa, static_cast<int>(da));
    const double b = db < -1100 ? 0.0 : std::ldexp(o.mantissa, static_cast<int>(db));
    ScaledReal r = from(a + b);
    if (r.mantissa != 0.0) r.exponent += e;
    return r;
}

ScaledReal ScaledReal::operator-(const ScaledReal& o) const { return *this + ScaledReal{-o.mantissa, o.exponent}; }

ScaledReal delta_direct_scaled(const DcheParams& d) {
    ScaledReal prev = ScaledReal::from(1.0);
    ScaledReal cur = ScaledReal::from(diag_entry(0, d));
    for (int j = 1; j <= d.n(); ++j) {
        ScaledReal next = cur * diag_entry(j, d) - prev * offdiag_product(j, d);
        prev = cur;
        cur = next;
    }
    return cur;
}

double delta_direct(const DcheParams& d) {
    if (d.n() > kScaledDeterminantDegree) return delta_direct_scaled(d).to_double();
    double prev = 1.0;
    double cur = diag_entry(0, d);
    for (int j = 1; j <= d.n(); ++j) {
        const double next = diag_entry(j, d) * cur - offdiag_product(j, d) * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

double delta_scale(const DcheParams& d) {
    // Diagonal summands lambda and j(n+1-j) enter separately.
    const double lam = std::abs(d.lambda());
    double prev = 1.0;
    double cur = lam;
    for (int j = 1; j <= d.n(); ++j) {
        const double next = (lam + j * static_cast<double>(d.n() + 1 - j)) * cur +
                            std::abs(offdiag_product(j, d)) * prev;
        prev = cur;
        cur = next;
    }
    // Delta is monic in lambda; keep the scale from collapsing near lambda = 0.
    return std::max(cur, 1.0);
}

DeltaWithDerivative delta_with_derivative(const DcheParams& d) {
    double prev = 1.0, cur = diag_entry(0, d);
    double dprev = 0.0, dcur = 1.0;
    for (int j = 1; j <= d.n(); ++j) {
        const double a = diag_entry(j, d);
        const double b = offdiag_product(j, d);
        const double next = a * cur - b * prev;
        const double dnext = cur + a * dcur - b * dprev;
        prev = cur;
        cur = next;
        dprev = dcur;
        dcur = dnext;
    }
    return {cur, dcur, delta_scale(d)};
}

TwoByTwo TwoByTwo::operator*(const TwoByTwo& r) const {
    return {m00 * r.m00 + m01 * r.m10, m00 * r.m01 + m01 * r.m11,
            m10 * r.m00 + m11 * r.m10, m10 * r.m01 + m11 * r.m11};
}

TwoByTwo transfer_matrix(double k, const DcheParams& d) {
    const double z = k * (k - d.n() - 1.0);
    return {z + d.lambda(), d.mu() * d.mu(), z, 0.0};
}

TwoByTwo transfer_product(int first, int last, const DcheParams& d) {
    TwoByTwo acc = TwoByTwo::identity();
    for (int j = first; j <= last; ++j) acc = acc * transfer_matrix(j, d);
    return acc;
}

double delta_matrix(const DcheParams& d) {
    const int n = d.n();
    if (n == 0) {
        throw Error(ErrorCode::DegreeZeroUnsupported,
                    "the transfer-matrix determinant needs n >= 1; use delta_direct");
    }
    const TwoByTwo m = transfer_product(1, n - 1, d);
    const double u0 = apply_first_row(m, n - d.lambda(), n);
    const double u1 = apply_second_row(m, n - d.lambda(), n);
    return -(d.lambda() * u0 + d.mu() * d.mu() * u1);
}

namespace {

// The coefficient recurrences cancel heavily on small entries when mu is
// small, so they run in long double and round once at the end.
using Wide = long double;

struct WideTwoByTwo {
    Wide m00 = 1, m01 = 0, m10 = 0, m11 = 1;

    WideTwoByTwo operator*(const WideTwoByTwo& r) const {
        return {m00 * r.m00 + m01 * r.m10, m00 * r.m01 + m01 * r.m11,
                m10 * r.m00 + m11 * r.m10, m10 * r.m01 + m11 * r.m11};
    }
};

WideTwoByTwo wide_transfer_matrix(Wide k, const DcheParams& d) {
    const Wide z = k * (k - d.n() - 1);
    const Wide mu = d.mu();
    return {z + d.lambda(), mu * mu, z, 0};
}

WideTwoByTwo wide_transfer_product(int first, int last, const DcheParams& d) {
    WideTwoByTwo acc;
    for (int j = first; j <= last; ++j) acc = acc * wide_transfer_matrix(j, d);
    return acc;
}

std::vector<Wide> wide_ratios(const DcheParams& d) {
    const int n = d.n();
    std::vector<Wide> r(static_cast<std::size_t>(n));
    if (n == 0) return r;
    const Wide lambda = d.lambda();
    const Wide mu2 = static_cast<Wide>(d.mu()) * d.mu();
    r[static_cast<std::size_t>(n - 1)] = 1 - lambda / n;
    for (int k = n - 1; k >= 1; --k) {
        const Wide next = r[static_cast<std::size_t>(k)];
        if (next == 0) {
            throw Error(ErrorCode::ZeroRatioDivision,
                        "R_" + std::to_string(k + 1) + " = 0 while computing R_" + std::to_string(k));
        }
        const Wide z = static_cast<Wide>(k) * (k - n - 1);
        r[static_cast<std::size_t>(k - 1)] = 1 + lambda / z + mu2 / (z * next);
    }
    return r;
}

}  // namespace

std::vector<double> ratios(const DcheParams& d) {
    const std::vector<Wide> wide = wide_ratios(d);
    return {wide.begin(), wide.end()};
}

HeunPolynomial coeffs_from_ratios(const DcheParams& d) {
    const int n = d.n();
    std::vector<double> a(static_cast<std::size_t>(n) + 1, 0.0);
    a[static_cast<std::size_t>(n)] = 1.0;
    if (n == 0) return {d, std::move(a)};
    require_nonzero_mu(d);
    const std::vector<Wide> r = wide_ratios(d);
    Wide ak = 1;
    for (int k = n; k >= 1; --k) {
        ak *= (k / static_cast<Wide>(d.mu())) * r[static_cast<std::size_t>(k - 1)];
        a[static_cast<std::size_t>(k - 1)] = static_cast<double>(ak);
    }
    return {d, std::move(a)};
}

double coeff_matrix(int k, const DcheParams& d) {
    const int n = d.n();
    if (k < 0 || k > n) {
        throw Error(ErrorCode::IndexOutOfRange,
                    "k = " + std::to_string(k) + " outside 0.." + std::to_string(n));
    }
    if (k == n) return 1.0;
    require_nonzero_mu(d);
    const Wide u0 = n - static_cast<Wide>(d.lambda());
    const Wide u1 = n;
    const Wide minus_mu = -static_cast<Wide>(d.mu());
    if (k >= 1) {
        const WideTwoByTwo m = wide_transfer_product(k, n - 1, d);
        const Wide prefactor = std::pow(minus_mu, k - n) / (k * std::tgamma(static_cast<Wide>(n + 2 - k)));
        return static_cast<double>(prefactor * (m.m10 * u0 + m.m11 * u1));
    }
    // k = 0: the index is shifted to eps in M_0 and in k (n+1-k)!, then eps -> 0.
    const WideTwoByTwo tail = wide_transfer_product(1, n - 1, d);
    auto shifted = [&](Wide eps) {
        const WideTwoByTwo m = wide_transfer_matrix(eps, d) * tail;
        const Wide prefactor = std::pow(minus_mu, -n) / (eps * std::tgamma(n + 2 - eps));
        return prefactor * (m.m10 * u0 + m.m11 * u1);
    };
    const Wide coarse = shifted(1e-6L);
    const Wide fine = shifted(1e-7L);
    return static_cast<double>((10 * fine - coarse) / 9);
}

double LinearSystemResidual::max_abs() const noexcept {
    double m = std::max(std::abs(r0), std::abs(rn));
    for (double r : rmid) m = std::max(m, std::abs(r));
    return m;
}

LinearSystemResidual residual_linear_system(const HeunPolynomial& P) {
    const int n = P.n();
    const double mu = P.mu();
    const double lambda = P.lambda();
    LinearSystemResidual res;
    if (n == 0) {
        res.r0 = lambda * P.coeff(0);
        res.rn = res.r0;
        return res;
    }
    res.r0 = lambda * P.coeff(0) + mu * P.coeff(1);
    for (int k = 1; k <= n - 1; ++k) {
        res.rmid.push_back(mu * (n - k + 1) * P.coeff(k - 1) +
                           (lambda - static_cast<double>(k) * (n - k + 1)) * P.coeff(k) +
                           mu * (k + 1) * P.coeff(k + 1));
    }
    res.rn = mu * P.coeff(n - 1) + (lambda - n) * P.coeff(n);
    return res;
}

double necessary_condition(const DcheParams& d) {
    const int n = d.n();
    if (n == 0) throw Error(ErrorCode::DegreeZeroUnsupported, "necessary condition needs n >= 1");
    if (d.lambda() == 0.0) throw Error(ErrorCode::LambdaZero, "row [1, mu^2/lambda] undefined");
    const TwoByTwo m = transfer_product(1, n - 1, d);
    const double u0 = 1.0 - d.lambda() / n;
    const double u1 = 1.0;
    return apply_first_row(m, u0, u1) + d.mu() * d.mu() / d.lambda() * apply_second_row(m, u0, u1);
}

namespace {

using WideMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using WideVector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

constexpr int kInverseIterations = 3;

// Relative linear-system residual up to which the ratio chain is kept.
constexpr double kRatioPathTrust = 1e-12;

// Largest residual of the linear system and, when omega exists, of the
// reflection relations eps c a_k = (n+1-k) a_{n+1-k} - mu a_{n-k}, relative
// to max |a_k|. The relations tell apart solutions of nearly equal lambda.
double backward_error(const HeunPolynomial& P, const DcheParams& d) {
    double worst = residual_linear_system(P).max_abs();
    if (d.admissible()) {
        const int n = d.n();
        const double c = d.half_inverse_omega();
        double best_relations = std::numeric_limits<double>::infinity();
        for (int eps : {1, -1}) {
            if (d.epsilon_hint() != 0 && eps != d.epsilon_hint()) continue;
            double rel = 0.0;
            for (int k = 0; k <= n; ++k) {
                rel = std::max(rel, std::abs(eps * c * P.coeff(k) - (n + 1 - k) * P.coeff(n + 1 - k) +
                                             d.mu() * P.coeff(n - k)));
            }
            best_relations = std::min(best_relations, rel);
        }
        worst = std::max(worst, best_relations);
    }
    return worst / P.max_abs_coeff();
}

// Inverse iteration for the vector m nearly annihilates. Empty when m is
// exactly singular in a way the LU cannot handle.
std::optional<WideVector> near_null_vector(const WideMatrix& m) {
    const Eigen::PartialPivLU<WideMatrix> lu(m);
    WideVector x = WideVector::Ones(m.rows());
    for (int it = 0; it < kInverseIterations; ++it) {
        x = lu.solve(x);
        const long double norm = x.norm();
        if (!std::isfinite(static_cast<double>(norm)) || norm == 0) return std::nullopt;
        x /= norm;
    }
    return x;
}

std::optional<HeunPolynomial> monic_from(const DcheParams& d, const WideVector& a) {
    const int n = d.n();
    if (!(std::abs(a(n)) > 1e-300L)) return std::nullopt;
    std::vector<double> coeffs(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) coeffs[static_cast<std::size_t>(k)] = static_cast<double>(a(k) / a(n));
    return HeunPolynomial(d, std::move(coeffs));
}

// a is annihilated by (G^eps)^T = eps c I + H^T. H's eigenvalues are +-c_j,
// so this stays well conditioned where two lambda roots nearly coincide.
std::optional<HeunPolynomial> reflection_null_vector(const DcheParams& d, int epsilon) {
    const int n = d.n();
    WideMatrix m = WideMatrix::Zero(n + 1, n + 1);
    const long double c = d.half_inverse_omega();
    for (int k = 0; k <= n; ++k) {
        m(k, k) += epsilon * c;
        m(k, n - k) += d.mu();
        if (k >= 1) m(k, n + 1 - k) -= n + 1 - k;
    }
    const auto a = near_null_vector(m);
    if (!a) return std::nullopt;
    return monic_from(d, *a);
}

// Null vector of Phi through its symmetric form S = D^-1 Phi D with
// D = diag(sqrt(C(n, j))).
std::optional<HeunPolynomial> symmetric_null_vector(const DcheParams& d) {
    const int n = d.n();
    WideMatrix s = WideMatrix::Zero(n + 1, n + 1);
    for (int j = 0; j <= n; ++j) {
        s(j, j) = static_cast<long double>(d.lambda()) - static_cast<long double>(j) * (n + 1 - j);
        if (j < n) {
            const long double off = d.mu() * std::sqrt(static_cast<long double>(j + 1) * (n - j));
            s(j, j + 1) = off;
            s(j + 1, j) = off;
        }
    }
    auto y = near_null_vector(s);
    if (!y) return std::nullopt;
    long double dj = 1;
    for (int j = 0; j <= n; ++j) {
        (*y)(j) *= dj;
        dj *= std::sqrt(static_cast<long double>(n - j) / (j + 1));
    }
    return monic_from(d, *y);
}

}  // namespace

HeunPolynomial build_polynomial(const DcheParams& d, double tol_spec) {
    const double delta = delta_direct(d);
    const double scale = delta_scale(d);
    if (!(std::abs(delta) <= tol_spec * scale)) {
        throw Error(ErrorCode::NotSpectral, "|Delta_n| = " + short_number(std::abs(delta)) +
                                                " exceeds " + short_number(tol_spec) + " * " +
                                                short_number(scale));
    }
    HeunPolynomial P = coeffs_from_ratios(d);
    double backward = backward_error(P, d);
    if (backward > kRatioPathTrust) {
        // The downward recurrence solves rows 1..n exactly and leaves the
        // whole defect of a rounded lambda in row 0, amplified roughly by
        // mu^-n; near-coincident roots also mix. Small mu calls for a null
        // vector computed as a whole.
        std::vector<HeunPolynomial> candidates;
        if (d.admissible()) {
            for (int eps : {1, -1}) {
                if (d.epsilon_hint() != 0 && eps != d.epsilon_hint()) continue;
                if (auto c = reflection_null_vector(d, eps)) candidates.push_back(std::move(*c));
            }
        } else if (auto c = symmetric_null_vector(d)) {
            candidates.push_back(std::move(*c));
        }
        for (HeunPolynomial& c : candidates) {
            const double b = backward_error(c, d);
            if (b < backward) {
                backward = b;
                P = std::move(c);
            }
        }
    }
    const double residual = max_residual_eq11(P);
    if (!(residual <= kPolynomialResidualTolerance)) {
        throw Error(ErrorCode::VerificationFailed,
                    "polynomial residual " + short_number(residual) + " above tolerance");
    }
    return P;
}

}  // namespace heun_rsj
