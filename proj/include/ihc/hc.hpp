#ifndef IHC_HC_HPP
#define IHC_HC_HPP

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "ihc/corr.hpp"
#include "ihc/errors.hpp"

namespace ihc {

enum class Method { HC, HCa, HCb };

inline const char* method_name(Method m) {
    switch (m) {
        case Method::HC: return "HC";
        case Method::HCa: return "HC-a";
        case Method::HCb: return "HC-b";
    }
    return "?";
}

/// Two-sided normal p-value p = P{|N(0,1)| >= |y|} = erfc(|y|/sqrt(2)).
/// |y| > 38 clamps to the smallest positive normalized double so p stays
/// strictly positive.
inline Vec p_values(const Vec& y) {
    Vec p(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double a = std::fabs(y[i]);
        p[i] = a > 38.0 ? DBL_MIN : std::erfc(a / std::sqrt(2.0));
    }
    return p;
}

/// HC maximization result; value is -inf with empty_range set when no sorted
/// p-value lands in [1/n, 1/2].
struct HcScore {
    double value = -std::numeric_limits<double>::infinity();
    bool empty_range = true;
};

/// max over {j : 1/n <= p_(j) <= 1/2} of sqrt(n) (j/n - p_(j)) /
/// sqrt(p_(j)(1 - p_(j))), p sorted ascending. The range constraint applies
/// to the value p_(j), not the index.
inline HcScore hc_statistic(Vec p) {
    const std::size_t n = p.size();
    if (n < 2) throw NTooSmall("hc_statistic requires n >= 2");
    std::stable_sort(p.begin(), p.end());
    const double nd = static_cast<double>(n);
    const double sqrtn = std::sqrt(nd);
    HcScore best;
    for (std::size_t j = 1; j <= n; ++j) {
        const double pj = p[j - 1];
        if (pj < 1.0 / nd || pj > 0.5) continue;
        const double cand = sqrtn * (static_cast<double>(j) / nd - pj) /
                            std::sqrt(pj * (1.0 - pj));
        if (best.empty_range || cand > best.value) {
            best.value = cand;
            best.empty_range = false;
        }
    }
    return best;
}

/// Innovated HC: HC applied to p-values of V x, normalized by sqrt(2b - 1).
/// With b = 1 and Sigma = I this reduces exactly to hc_statistic.
inline HcScore ihc_statistic(const Vec& x, const InnovationTransform& transform) {
    if (x.size() != transform.n) throw DimensionMismatch("data/transform size mismatch");
    HcScore s = hc_statistic(p_values(transform.apply(x)));
    if (!s.empty_range) s.value /= std::sqrt(2.0 * static_cast<double>(transform.b) - 1.0);
    return s;
}

inline HcScore ihc_statistic(const Vec& x, const CorrelationMatrix& sigma, std::size_t b) {
    return ihc_statistic(x, innovation_transform(sigma, b));
}

/// (1 + a) sqrt(2 log log n), the asymptotic HC critical value.
inline double hc_threshold(std::size_t n, double a) {
    if (n < 16) throw NTooSmall("hc_threshold requires n >= 16");
    return (1.0 + a) * std::sqrt(2.0 * std::log(std::log(static_cast<double>(n))));
}

/// (log n)^2; conservative at finite n, the empirical threshold in simlab is
/// the practical alternative.
inline double ihc_threshold(std::size_t n) {
    if (n < 2) throw NTooSmall("ihc_threshold requires n >= 2");
    const double l = std::log(static_cast<double>(n));
    return l * l;
}

/// Detection boundary rho*(beta): beta - 1/2 on (1/2, 3/4], and
/// (1 - sqrt(1 - beta))^2 above; continuous at 3/4.
inline double rho_star(double beta) {
    if (!(beta > 0.5 && beta < 1.0)) throw BetaOutOfRange("beta must lie in (1/2, 1)");
    if (beta <= 0.75) return beta - 0.5;
    const double t = 1.0 - std::sqrt(1.0 - beta);
    return t * t;
}

struct DetectionResult {
    double statistic = 0.0;
    double threshold = 0.0;
    bool reject = false;
    Method method = Method::HC;
    bool empty_range = false;
};

inline DetectionResult make_detection_result(const HcScore& s, double threshold, Method m) {
    return DetectionResult{s.value, threshold, !s.empty_range && s.value >= threshold, m,
                           s.empty_range};
}

enum class Verdict { Undetectable, Detectable, Indeterminate };

struct BoundaryVerdict {
    double beta = 0.0;
    double r = 0.0;
    double gamma_lo = 0.0;
    double gamma_hi = 0.0;
    Verdict verdict = Verdict::Indeterminate;
};

/// The boundary is bounded by r = rho*(beta)/gamma_lo from above and
/// r = rho*(beta)/gamma_hi from below; Toeplitz callers pass
/// gamma_lo = gamma_hi = C(f), collapsing the indeterminate band.
inline BoundaryVerdict classify_boundary(double beta, double r, double gamma_lo,
                                         double gamma_hi) {
    if (!(gamma_lo > 0.0 && gamma_lo <= gamma_hi))
        throw InvalidGammaOrder("need 0 < gamma_lo <= gamma_hi");
    const double rs = rho_star(beta);
    Verdict v = Verdict::Indeterminate;
    if (r < rs / gamma_hi)
        v = Verdict::Undetectable;
    else if (r > rs / gamma_lo)
        v = Verdict::Detectable;
    return BoundaryVerdict{beta, r, gamma_lo, gamma_hi, v};
}

} // namespace ihc

#endif // IHC_HC_HPP
