#ifndef IHC_MATRIX_HPP
#define IHC_MATRIX_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "ihc/errors.hpp"

namespace ihc {

using Vec = std::vector<double>;

/// Dense row-major matrix of doubles. Values are immutable by convention
/// once an operation returns them; all operations produce new matrices.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const double* row_ptr(std::size_t i) const { return data_.data() + i * cols_; }
    double* row_ptr(std::size_t i) { return data_.data() + i * cols_; }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    Vec operator*(const Vec& x) const {
        if (x.size() != cols_) throw DimensionMismatch("matrix-vector size mismatch");
        Vec y(rows_, 0.0);
        for (std::size_t i = 0; i < rows_; ++i) {
            const double* r = row_ptr(i);
            double s = 0.0;
            for (std::size_t j = 0; j < cols_; ++j) s += r[j] * x[j];
            y[i] = s;
        }
        return y;
    }

    Matrix operator*(const Matrix& b) const {
        if (cols_ != b.rows_) throw DimensionMismatch("matrix-matrix size mismatch");
        Matrix c(rows_, b.cols_);
        // i-k-j ordering keeps the inner loop contiguous.
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t k = 0; k < cols_; ++k) {
                const double a = (*this)(i, k);
                if (a == 0.0) continue;
                const double* br = b.row_ptr(k);
                double* cr = c.row_ptr(i);
                for (std::size_t j = 0; j < b.cols_; ++j) cr[j] += a * br[j];
            }
        }
        return c;
    }

    Matrix operator-(const Matrix& b) const {
        if (rows_ != b.rows_ || cols_ != b.cols_)
            throw DimensionMismatch("matrix subtraction size mismatch");
        Matrix c(rows_, cols_);
        for (std::size_t i = 0; i < data_.size(); ++i) c.data_[i] = data_[i] - b.data_[i];
        return c;
    }

    double max_abs() const {
        double m = 0.0;
        for (double v : data_) m = std::max(m, std::fabs(v));
        return m;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> data_;
};

/// In-place lower Cholesky of a symmetric matrix (lower triangle read).
/// Returns false when a pivot drops to or below `pivot_floor`.
inline bool cholesky_in_place(Matrix& a, double pivot_floor = 0.0) {
    const std::size_t n = a.rows();
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= a(j, k) * a(j, k);
        if (d <= pivot_floor) return false;
        const double lj = std::sqrt(d);
        a(j, j) = lj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a(i, j);
            const double* ri = a.row_ptr(i);
            const double* rj = a.row_ptr(j);
            for (std::size_t k = 0; k < j; ++k) s -= ri[k] * rj[k];
            a(i, j) = s / lj;
        }
        for (std::size_t k = j + 1; k < n; ++k) a(j, k) = 0.0;
    }
    return true;
}

/// Largest singular value by power iteration on M'M, deterministic
/// all-ones start, capped at 10000 iterations, relative tolerance 1e-10.
inline double spectral_norm(const Matrix& m) {
    const std::size_t nc = m.cols();
    if (nc == 0 || m.rows() == 0) return 0.0;
    Vec v(nc, 1.0 / std::sqrt(static_cast<double>(nc)));
    double lambda = 0.0;
    const int cap = 10000;
    for (int it = 0; it < cap; ++it) {
        Vec mv = m * v;
        // w = M' (M v)
        Vec w(nc, 0.0);
        for (std::size_t i = 0; i < m.rows(); ++i) {
            const double* r = m.row_ptr(i);
            const double mvi = mv[i];
            if (mvi == 0.0) continue;
            for (std::size_t j = 0; j < nc; ++j) w[j] += r[j] * mvi;
        }
        double norm = 0.0;
        for (double x : w) norm += x * x;
        norm = std::sqrt(norm);
        if (norm == 0.0) return 0.0;
        const double prev = lambda;
        lambda = norm; // since ||v|| = 1, ||M'Mv|| estimates the top eigenvalue
        for (std::size_t j = 0; j < nc; ++j) v[j] = w[j] / norm;
        if (it > 0 && std::fabs(lambda - prev) <= 1e-10 * lambda)
            return std::sqrt(lambda);
    }
    throw ConvergenceFailure("spectral_norm: power iteration did not converge");
}

namespace detail {

/// Householder reduction of a symmetric matrix to tridiagonal form
/// (diagonal d, subdiagonal e); eigenvectors are not accumulated.
inline void tridiagonalize(Matrix a, Vec& d, Vec& e) {
    const std::size_t n = a.rows();
    d.assign(n, 0.0);
    e.assign(n, 0.0);
    for (std::size_t i = n; i-- > 1;) {
        const std::size_t l = i - 1;
        double h = 0.0, scale = 0.0;
        if (l > 0) {
            for (std::size_t k = 0; k <= l; ++k) scale += std::fabs(a(i, k));
            if (scale == 0.0) {
                e[i] = a(i, l);
            } else {
                for (std::size_t k = 0; k <= l; ++k) {
                    a(i, k) /= scale;
                    h += a(i, k) * a(i, k);
                }
                double f = a(i, l);
                double g = (f >= 0.0) ? -std::sqrt(h) : std::sqrt(h);
                e[i] = scale * g;
                h -= f * g;
                a(i, l) = f - g;
                f = 0.0;
                for (std::size_t j = 0; j <= l; ++j) {
                    g = 0.0;
                    for (std::size_t k = 0; k <= j; ++k) g += a(j, k) * a(i, k);
                    for (std::size_t k = j + 1; k <= l; ++k) g += a(k, j) * a(i, k);
                    e[j] = g / h;
                    f += e[j] * a(i, j);
                }
                const double hh = f / (h + h);
                for (std::size_t j = 0; j <= l; ++j) {
                    f = a(i, j);
                    e[j] = g = e[j] - hh * f;
                    for (std::size_t k = 0; k <= j; ++k)
                        a(j, k) -= f * e[k] + g * a(i, k);
                }
            }
        } else {
            e[i] = a(i, l);
        }
        d[i] = h;
    }
    for (std::size_t i = 0; i < n; ++i) d[i] = a(i, i);
}

/// Number of eigenvalues of the tridiagonal (d, e) strictly below x
/// (Sturm sequence / LDL' sign count).
inline std::size_t sturm_count(const Vec& d, const Vec& e, double x) {
    const std::size_t n = d.size();
    std::size_t count = 0;
    double q = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e2 = (i == 0) ? 0.0 : e[i] * e[i];
        q = d[i] - x - (q != 0.0 ? e2 / q : e2 / 1e-300);
        if (q < 0.0) ++count;
    }
    return count;
}

} // namespace detail

/// Smallest eigenvalue of a symmetric matrix, via Householder
/// tridiagonalization followed by Sturm-sequence bisection.
inline double sym_smallest_eigenvalue(const Matrix& s) {
    const std::size_t n = s.rows();
    if (n == 0) throw DimensionMismatch("empty matrix");
    Vec d, e;
    detail::tridiagonalize(s, d, e);
    double lo = d[0], hi = d[0];
    for (std::size_t i = 0; i < n; ++i) {
        const double off = (i > 0 ? std::fabs(e[i]) : 0.0) +
                           (i + 1 < n ? std::fabs(e[i + 1]) : 0.0);
        lo = std::min(lo, d[i] - off);
        hi = std::max(hi, d[i] + off);
    }
    for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, std::fabs(lo)); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (detail::sturm_count(d, e, mid) >= 1)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace ihc

#endif // IHC_MATRIX_HPP
