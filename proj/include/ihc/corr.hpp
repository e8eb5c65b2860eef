#ifndef IHC_CORR_HPP
#define IHC_CORR_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ihc/errors.hpp"
#include "ihc/matrix.hpp"

namespace ihc {

/// Acceptance floor for the smallest eigenvalue of an n x n correlation
/// matrix.
inline double pd_tolerance(std::size_t n) { return 1e-10 * static_cast<double>(n); }

/// Symmetric positive-definite matrix with unit diagonal (the noise law).
/// The relaxed-diagonal variant admits non-unit diagonals and is flagged
/// explicitly; it covers reformulated covariances such as D S(g) Sigma S(g)' D.
class CorrelationMatrix {
public:
    static CorrelationMatrix from_dense(Matrix m, bool relaxed_diagonal = false) {
        const std::size_t n = m.rows();
        if (n == 0 || m.cols() != n)
            throw DimensionMismatch("correlation matrix must be square and nonempty");
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t k = j + 1; k < n; ++k)
                if (std::fabs(m(j, k) - m(k, j)) > 1e-12)
                    throw BadDiagonal("matrix is not symmetric at (" + std::to_string(j) +
                                      "," + std::to_string(k) + ")");
            if (!relaxed_diagonal && std::fabs(m(j, j) - 1.0) > 1e-12)
                throw BadDiagonal("diagonal entry " + std::to_string(j) + " is not 1");
        }
        check_pd(m);
        return CorrelationMatrix(std::move(m), relaxed_diagonal);
    }

    std::size_t n() const { return m_.rows(); }
    double operator()(std::size_t j, std::size_t k) const { return m_(j, k); }
    const Matrix& matrix() const { return m_; }
    bool relaxed_diagonal() const { return relaxed_diagonal_; }

    bool is_identity() const {
        const std::size_t nn = n();
        for (std::size_t j = 0; j < nn; ++j)
            for (std::size_t k = 0; k < nn; ++k)
                if (m_(j, k) != (j == k ? 1.0 : 0.0)) return false;
        return true;
    }

private:
    CorrelationMatrix(Matrix m, bool relaxed) : m_(std::move(m)), relaxed_diagonal_(relaxed) {}

    // Smallest eigenvalue exceeds pd_tolerance(n) iff Cholesky of
    // (Sigma - tol*I) succeeds; this implements the acceptance rule without
    // an eigensolver.
    static void check_pd(const Matrix& m) {
        const std::size_t n = m.rows();
        Matrix shifted = m;
        const double tol = pd_tolerance(n);
        for (std::size_t j = 0; j < n; ++j) shifted(j, j) -= tol;
        if (!cholesky_in_place(shifted))
            throw NotPositiveDefinite("smallest eigenvalue <= " + std::to_string(tol));
    }

    Matrix m_;
    bool relaxed_diagonal_ = false;
};

/// Lower-triangular matrix with strictly positive diagonal. Houses both the
/// Cholesky factor L (Sigma = L L') and its inverse U (U Sigma U' = I).
struct LowerTriangular {
    Matrix m;
    bool identity = false;

    std::size_t n() const { return m.rows(); }
    double operator()(std::size_t j, std::size_t k) const { return m(j, k); }

    Vec apply(const Vec& x) const {
        if (identity) return x;
        if (x.size() != n()) throw DimensionMismatch("triangular apply size mismatch");
        Vec y(n(), 0.0);
        for (std::size_t i = 0; i < n(); ++i) {
            const double* r = m.row_ptr(i);
            double s = 0.0;
            for (std::size_t j = 0; j <= i; ++j) s += r[j] * x[j];
            y[i] = s;
        }
        return y;
    }
};

struct CholeskyPair {
    LowerTriangular factor;  // L with Sigma = L L'
    LowerTriangular whitener; // U = inv(L), U Sigma U' = I
};

/// Toeplitz correlation matrix M(j,k) = a[|j-k|]; a[0] must be 1 and the
/// result must pass the PD check.
inline CorrelationMatrix toeplitz_from_coeffs(std::span<const double> a, std::size_t n) {
    if (a.empty() || a[0] != 1.0) throw BadDiagonal("leading Toeplitz coefficient must be 1");
    Matrix m(n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
            const std::size_t d = j > k ? j - k : k - j;
            m(j, k) = d < a.size() ? a[d] : 0.0;
        }
    return CorrelationMatrix::from_dense(std::move(m));
}

/// Strong-dependence family M(j,k) = max{0, 1 - |j-k|^alpha * n^-alpha0}.
inline CorrelationMatrix strong_dependence_matrix(std::size_t n, double alpha, double alpha0) {
    if (!(alpha > 0.0)) throw AlphaOutOfRange("alpha must be positive");
    if (!(alpha0 > 0.0 && alpha0 <= alpha))
        throw AlphaOutOfRange("alpha0 must lie in (0, alpha]");
    const double scale = std::pow(static_cast<double>(n), -alpha0);
    Matrix m(n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = j; k < n; ++k) {
            const double d = static_cast<double>(k - j);
            const double v = std::max(0.0, 1.0 - std::pow(d, alpha) * scale);
            m(j, k) = v;
            m(k, j) = v;
        }
    return CorrelationMatrix::from_dense(std::move(m));
}

/// Lower-triangular Toeplitz matrix with g[d] on the d-th sub-diagonal.
inline Matrix backward_shift_toeplitz(std::span<const double> g, std::size_t n) {
    if (g.empty()) throw DimensionMismatch("generator sequence must be nonempty");
    Matrix m(n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t d = 0; d < g.size() && d <= j; ++d) m(j, j - d) = g[d];
    return m;
}

/// Cholesky factor L of Sigma plus its inverse U. U Sigma U' = I, and for a
/// unit-diagonal Sigma every U(k,k) >= 1.
inline CholeskyPair cholesky_inverse(const CorrelationMatrix& sigma) {
    const std::size_t n = sigma.n();
    if (sigma.is_identity())
        return CholeskyPair{{Matrix::identity(n), true}, {Matrix::identity(n), true}};
    Matrix l = sigma.matrix();
    if (!cholesky_in_place(l, pd_tolerance(n)))
        throw FactorizationFailure("Cholesky pivot fell below the PD tolerance");
    // Forward substitution: U = inv(L), column by column.
    Matrix u(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        u(j, j) = 1.0 / l(j, j);
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = 0.0;
            const double* ri = l.row_ptr(i);
            for (std::size_t k = j; k < i; ++k) s += ri[k] * u(k, j);
            u(i, j) = -s / l(i, i);
        }
    }
    CholeskyPair out{{std::move(l)}, {std::move(u)}};
    const bool ident = sigma.is_identity();
    out.factor.identity = ident;
    out.whitener.identity = ident;
    return out;
}

/// Banding: keep U(k,j) only on the per-row window k-b+1 <= j <= k. At rows
/// k < b the window truncates at the first column.
inline LowerTriangular band(const LowerTriangular& u, std::size_t b) {
    const std::size_t n = u.n();
    if (b < 1 || b > n) throw BandwidthOutOfRange("bandwidth must be in [1, n]");
    Matrix m(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t lo = k + 1 >= b ? k + 1 - b : 0;
        for (std::size_t j = lo; j <= k; ++j) m(k, j) = u(k, j);
    }
    return LowerTriangular{std::move(m), b == n && u.identity};
}

/// The transform V = Ubar' U, with Ubar the column-normalized banding of U.
/// Under the null V Z has covariance Ubar' Ubar: banded, unit diagonal.
struct InnovationTransform {
    std::size_t n = 0;
    std::size_t b = 0;
    Matrix ubar; // column-normalized banded whitener
    Matrix v;    // Ubar' U, materialized
    LowerTriangular u;

    /// V x computed as Ubar'(U x); identical product order everywhere keeps
    /// results deterministic.
    Vec apply(const Vec& x) const {
        Vec ux = u.apply(x);
        Vec y(n, 0.0);
        for (std::size_t col = 0; col < n; ++col) {
            const std::size_t hi = std::min(n - 1, col + b - 1);
            double s = 0.0;
            for (std::size_t row = col; row <= hi; ++row) s += ubar(row, col) * ux[row];
            y[col] = s;
        }
        return y;
    }
};

inline InnovationTransform innovation_transform(const CholeskyPair& chol, std::size_t b) {
    const std::size_t n = chol.whitener.n();
    if (b < 1 || b > n) throw BandwidthOutOfRange("bandwidth must be in [1, n]");
    LowerTriangular banded = band(chol.whitener, b);
    Matrix ubar = std::move(banded.m);
    // Column j holds rows j..j+b-1; normalize by the column l2 norm.
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t hi = std::min(n - 1, j + b - 1);
        double s = 0.0;
        for (std::size_t i = j; i <= hi; ++i) s += ubar(i, j) * ubar(i, j);
        const double norm = std::sqrt(s);
        for (std::size_t i = j; i <= hi; ++i) ubar(i, j) /= norm;
    }
    // V = Ubar' U via the band: V(i,j) = sum_k Ubar(k,i) U(k,j), k in [i, i+b-1].
    Matrix v(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t hi = std::min(n - 1, i + b - 1);
        double* vr = v.row_ptr(i);
        for (std::size_t k = i; k <= hi; ++k) {
            const double w = ubar(k, i);
            const double* urow = chol.whitener.m.row_ptr(k);
            for (std::size_t j = 0; j <= k; ++j) vr[j] += w * urow[j];
        }
    }
    return InnovationTransform{n, b, std::move(ubar), std::move(v), chol.whitener};
}

inline InnovationTransform innovation_transform(const CorrelationMatrix& sigma, std::size_t b) {
    return innovation_transform(cholesky_inverse(sigma), b);
}

/// Diagonal of inv(Sigma) = U'U: per-column sums of squares of U.
inline Vec inverse_diagonal(const CholeskyPair& chol) {
    const std::size_t n = chol.whitener.n();
    Vec d(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double* r = chol.whitener.m.row_ptr(i);
        for (std::size_t j = 0; j <= i; ++j) d[j] += r[j] * r[j];
    }
    return d;
}

/// Min and max of inv(Sigma)(k,k) over ceil(sqrt(n)) <= k <= n - ceil(sqrt(n))
/// (1-based): the finite-n surrogates for the gamma limits.
inline std::pair<double, double> diag_inverse_range(const CorrelationMatrix& sigma) {
    const std::size_t n = sigma.n();
    if (n < 9) throw WindowEmpty("diag_inverse_range requires n >= 9");
    const auto w = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
    const Vec d = inverse_diagonal(cholesky_inverse(sigma));
    double lo = d[w - 1], hi = d[w - 1];
    for (std::size_t k = w; k <= n - w; ++k) { // 1-based k, element d[k-1]
        lo = std::min(lo, d[k - 1]);
        hi = std::max(hi, d[k - 1]);
    }
    return {lo, hi};
}

/// Least-squares slope of log(max_{|j-k|=d} |M(j,k)|) against log d over
/// d in [d_lo, d_hi]. Diagnoses polynomial off-diagonal decay: slope close
/// to -lambda for entries bounded by C (1+d)^-lambda.
inline double offdiag_decay_slope(const Matrix& m, std::size_t d_lo, std::size_t d_hi) {
    const std::size_t n = m.rows();
    if (d_hi >= n || d_lo < 1 || d_lo > d_hi)
        throw std::invalid_argument("bad decay-fit window");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t count = 0;
    for (std::size_t d = d_lo; d <= d_hi; ++d) {
        double mx = 0.0;
        for (std::size_t j = 0; j + d < n; ++j)
            mx = std::max(mx, std::max(std::fabs(m(j, j + d)), std::fabs(m(j + d, j))));
        if (mx <= 0.0) continue; // exactly banded beyond d; skip the log of zero
        const double x = std::log(static_cast<double>(d));
        const double y = std::log(mx);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++count;
    }
    if (count < 2) return -std::numeric_limits<double>::infinity();
    const double c = static_cast<double>(count);
    return (c * sxy - sx * sy) / (c * sxx - sx * sx);
}

} // namespace ihc

#endif // IHC_CORR_HPP
