#ifndef IHC_SPECTRAL_HPP
#define IHC_SPECTRAL_HPP

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ihc/errors.hpp"

namespace ihc {

inline constexpr double kPi = std::numbers::pi;

/// Symmetric positive function on [-pi, pi] generating Toeplitz matrices and
/// rate constants.
struct SpectralDensity {
    std::function<double(double)> evaluator;
    bool symmetric = true;
    std::optional<double> ess_inf_hint;

    double operator()(double theta) const { return evaluator(theta); }
};

/// g(theta) = sum_k g_k e^{-ik theta} with real coefficients g_0..g_{K-1}.
struct TrigPolynomial {
    std::vector<double> coeffs;

    /// |g(theta)|^2 = (sum g_k cos k theta)^2 + (sum g_k sin k theta)^2.
    double abs2(double theta) const {
        double re = 0.0, im = 0.0;
        for (std::size_t k = 0; k < coeffs.size(); ++k) {
            re += coeffs[k] * std::cos(k * theta);
            im -= coeffs[k] * std::sin(k * theta);
        }
        return re * re + im * im;
    }
};

/// Density f(theta) = a0 + 2 sum_{k>=1} a_k cos(k theta) whose Toeplitz
/// Fourier coefficients are exactly the a_k.
inline SpectralDensity trig_poly_density(std::vector<double> a) {
    return SpectralDensity{
        [a = std::move(a)](double theta) {
            double s = a.empty() ? 0.0 : a[0];
            for (std::size_t k = 1; k < a.size(); ++k) s += 2.0 * a[k] * std::cos(k * theta);
            return s;
        },
        true, std::nullopt};
}

namespace detail {

inline void require_quadrature_grid(std::size_t grid) {
    if (grid < 256 || (grid & (grid - 1)) != 0)
        throw std::invalid_argument("quadrature grid must be a power of two >= 256");
}

/// Uniform trapezoid on [-pi, pi]; endpoints identified by periodicity, so
/// this is the n-point periodic rule with spectral accuracy for smooth f.
template <class F>
double periodic_trapezoid_mean(F&& f, std::size_t grid) {
    double s = 0.0;
    for (std::size_t j = 0; j < grid; ++j) {
        const double theta = -kPi + 2.0 * kPi * static_cast<double>(j) / grid;
        s += f(theta);
    }
    return s / static_cast<double>(grid);
}

} // namespace detail

/// k-th Fourier coefficient a_k = (2 pi)^{-1} int f(theta) e^{-ik theta}.
inline double fourier_coeff(const SpectralDensity& f, std::size_t k, std::size_t grid = 4096) {
    detail::require_quadrature_grid(grid);
    double re = 0.0, im = 0.0;
    for (std::size_t j = 0; j < grid; ++j) {
        const double theta = -kPi + 2.0 * kPi * static_cast<double>(j) / grid;
        const double v = f(theta);
        re += v * std::cos(k * theta);
        im -= v * std::sin(k * theta);
    }
    re /= static_cast<double>(grid);
    im /= static_cast<double>(grid);
    if (f.symmetric && std::fabs(im) > 1e-8)
        throw NonSymmetricImaginaryResidue("imaginary residue " + std::to_string(im) +
                                           " for a symmetric density");
    return re;
}

/// Wiener interpolation rate C(f) = (2 pi)^{-1} int 1/f. C(f) >= 1 with
/// equality iff f == 1.
inline double wiener_rate(const SpectralDensity& f, std::size_t grid = 4096) {
    detail::require_quadrature_grid(grid);
    return detail::periodic_trapezoid_mean(
        [&](double theta) {
            const double v = f(theta);
            if (v <= 0.0) throw NonPositiveDensity("density is not positive on the grid");
            return 1.0 / v;
        },
        grid);
}

/// Cluster rate C(f, g) = (2 pi)^{-1} int |g|^2 / f.
inline double cluster_rate(const SpectralDensity& f, const TrigPolynomial& g,
                           std::size_t grid = 4096) {
    detail::require_quadrature_grid(grid);
    return detail::periodic_trapezoid_mean(
        [&](double theta) {
            const double v = f(theta);
            if (v <= 0.0) throw NonPositiveDensity("density is not positive on the grid");
            return g.abs2(theta) / v;
        },
        grid);
}

/// Cosine coefficients c_k = (k+1)^a + (k-1)^a - 2 k^a of the strong
/// dependence surrogate density; |c_k| decays like k^{a-2}.
inline std::vector<double> f_alpha_coeffs(double alpha, std::size_t trunc) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw AlphaOutOfRange("f_alpha requires 0 < alpha < 1");
    if (trunc < 1000) throw std::invalid_argument("f_alpha truncation must be >= 1000");
    std::vector<double> c(trunc + 1, 0.0);
    for (std::size_t k = 1; k <= trunc; ++k) {
        const double kd = static_cast<double>(k);
        c[k] = std::pow(kd + 1.0, alpha) + std::pow(kd - 1.0, alpha) - 2.0 * std::pow(kd, alpha);
    }
    return c;
}

/// Truncated spectral density f_alpha with precomputed coefficients; grid
/// evaluation uses the Chebyshev cosine recurrence.
class FAlphaDensity {
public:
    FAlphaDensity(double alpha, std::size_t trunc = 100000)
        : alpha_(alpha), trunc_(trunc), c_(f_alpha_coeffs(alpha, trunc)) {}

    double alpha() const { return alpha_; }
    std::size_t truncation() const { return trunc_; }

    /// Analytic bound on the dropped tail sum_{k > trunc} |c_k|.
    double tail_bound() const {
        return alpha_ * std::pow(static_cast<double>(trunc_), alpha_ - 1.0);
    }

    double operator()(double theta) const {
        // cos(k theta) via the recurrence cos((k+1)t) = 2 cos t cos(kt) - cos((k-1)t).
        const double c1 = std::cos(theta);
        double ckm1 = 1.0, ck = c1;
        double s = 0.0;
        for (std::size_t k = 1; k <= trunc_; ++k) {
            s += c_[k] * ck;
            const double next = 2.0 * c1 * ck - ckm1;
            ckm1 = ck;
            ck = next;
        }
        return 1.0 - s;
    }

    SpectralDensity density() const {
        return SpectralDensity{[self = *this](double theta) { return self(theta); }, true,
                               std::nullopt};
    }

private:
    double alpha_;
    std::size_t trunc_;
    std::vector<double> c_;
};

/// Pointwise f_alpha evaluation. |theta| <= pi.
inline double f_alpha(double theta, double alpha, std::size_t trunc = 100000) {
    if (std::fabs(theta) > kPi + 1e-12) throw std::invalid_argument("|theta| must be <= pi");
    return FAlphaDensity(alpha, trunc)(theta);
}

/// C(f_alpha, g0) = (1/pi) int (1 - cos theta) / f_alpha(theta) d theta.
inline double strong_dependence_rate(double alpha, std::size_t grid = 4096,
                                     std::size_t trunc = 100000) {
    if (!(alpha > 0.0 && alpha < 0.5))
        throw AlphaOutOfRange("strong_dependence_rate requires 0 < alpha < 1/2");
    detail::require_quadrature_grid(grid);
    const FAlphaDensity f(alpha, trunc);
    // (1/pi) int = 2 * (2 pi)^{-1} int.
    return 2.0 * detail::periodic_trapezoid_mean(
                     [&](double theta) {
                         const double v = f(theta);
                         if (v <= 0.0)
                             throw NonPositiveDensity(
                                 "truncated f_alpha dips below zero; raise trunc");
                         return (1.0 - std::cos(theta)) / v;
                     },
                     grid);
}

} // namespace ihc

#endif // IHC_SPECTRAL_HPP
