#ifndef IHC_SIGNAL_HPP
#define IHC_SIGNAL_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ihc/corr.hpp"
#include "ihc/errors.hpp"
#include "ihc/rng.hpp"

namespace ihc {

enum class Hypothesis { Null, Alternative };

struct SingletonVariant {};
struct ClusterVariant {
    std::vector<double> g; // cluster shape coefficients, g[0] != 0
};
struct StrongVariant {
    double alpha = 0.0;
    double alpha0 = 0.0;
};

/// Sparsity/strength parameters: m = round(n^{1-beta}) signals of amplitude
/// A_n = sqrt(2 r log n) (rescaled by a_n^{-1/2} for the strong variant).
struct SignalConfig {
    std::size_t n = 0;
    double beta = 0.0;
    double r = 0.0;
    std::variant<SingletonVariant, ClusterVariant, StrongVariant> variant = SingletonVariant{};
    std::optional<std::vector<std::size_t>> forced_support; // 1-based locations

    std::size_t m() const {
        const auto v = static_cast<std::size_t>(
            std::llround(std::pow(static_cast<double>(n), 1.0 - beta)));
        return std::max<std::size_t>(1, v);
    }

    double amplitude() const {
        double a = std::sqrt(2.0 * r * std::log(static_cast<double>(n)));
        if (const auto* s = std::get_if<StrongVariant>(&variant)) {
            const double an = std::pow(static_cast<double>(n), s->alpha0) / 2.0;
            a /= std::sqrt(an);
        }
        return a;
    }

    void validate() const {
        if (n < 2) throw NTooSmall("signal config requires n >= 2");
        // beta = 1/2 is admitted: the dense-signal endpoint is a standard
        // simulation setting even though the sparse regime is beta > 1/2.
        if (!(beta >= 0.5 && beta < 1.0)) throw BetaOutOfRange("beta must lie in [1/2, 1)");
        if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("r must lie in (0, 1)");
        if (const auto* c = std::get_if<ClusterVariant>(&variant))
            if (c->g.empty() || c->g[0] == 0.0)
                throw std::invalid_argument("cluster generator needs g[0] != 0");
    }
};

/// Realized mean vector with its (sorted, 1-based) support.
struct SignalVector {
    Vec mu;
    std::vector<std::size_t> support;
};

/// m distinct indices drawn uniformly without replacement from {1..n},
/// sorted ascending; every m-subset is equally likely.
inline std::vector<std::size_t> sample_locations(std::size_t n, std::size_t m, SplitMix64& rng) {
    if (m > n) throw MTooLarge("cannot draw more locations than coordinates");
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{1});
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t j = i + rng.uniform_below(n - i);
        std::swap(idx[i], idx[j]);
    }
    std::vector<std::size_t> out(idx.begin(), idx.begin() + m);
    std::sort(out.begin(), out.end());
    return out;
}

inline SignalVector build_signal(const SignalConfig& config, SplitMix64& rng) {
    config.validate();
    std::vector<std::size_t> support =
        config.forced_support ? *config.forced_support
                              : sample_locations(config.n, config.m(), rng);
    const double amp = config.amplitude();
    Vec mu(config.n, 0.0);
    for (std::size_t loc : support) {
        if (loc < 1 || loc > config.n) throw DimensionMismatch("support index out of range");
        mu[loc - 1] = amp;
    }
    if (const auto* c = std::get_if<ClusterVariant>(&config.variant)) {
        // nu = S(g) mu: each singleton becomes a length-K run of g-shaped
        // amplitudes; overlapping runs add.
        Vec nu(config.n, 0.0);
        for (std::size_t loc : support)
            for (std::size_t d = 0; d < c->g.size() && loc - 1 + d < config.n; ++d)
                nu[loc - 1 + d] += c->g[d] * amp;
        mu = std::move(nu);
    }
    return SignalVector{std::move(mu), std::move(support)};
}

/// Z = L xi with xi iid standard normal: exact covariance L L'.
inline Vec sample_noise(const LowerTriangular& factor, SplitMix64& rng) {
    Vec xi(factor.n());
    for (double& x : xi) x = rng.normal();
    if (factor.identity) return xi;
    return factor.apply(xi);
}

/// One dataset draw: X = Z under the null, X = mu + Z under the alternative.
inline Vec generate_dataset(const SignalConfig& config, const CholeskyPair& chol,
                            Hypothesis hypothesis, SplitMix64& rng) {
    if (chol.factor.n() != config.n)
        throw DimensionMismatch("matrix dimension does not match the signal config");
    if (hypothesis == Hypothesis::Null) return sample_noise(chol.factor, rng);
    // Signal first: a fixed draw order keeps (config, seed) -> bytes stable.
    SignalVector sig = build_signal(config, rng);
    Vec x = sample_noise(chol.factor, rng);
    for (std::size_t i = 0; i < config.n; ++i) x[i] += sig.mu[i];
    return x;
}

inline Vec generate_dataset(const SignalConfig& config, const CorrelationMatrix& sigma,
                            Hypothesis hypothesis, SplitMix64& rng) {
    return generate_dataset(config, cholesky_inverse(sigma), hypothesis, rng);
}

} // namespace ihc

#endif // IHC_SIGNAL_HPP
