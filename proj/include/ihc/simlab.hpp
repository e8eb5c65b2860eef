#ifndef IHC_SIMLAB_HPP
#define IHC_SIMLAB_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "ihc/corr.hpp"
#include "ihc/errors.hpp"
#include "ihc/hc.hpp"
#include "ihc/rng.hpp"
#include "ihc/signal.hpp"

namespace ihc {

namespace detail {

/// Index-parallel loop; each index writes its own slot, so the result is
/// identical for any worker count.
inline void parallel_for(std::size_t count, std::size_t jobs,
                         const std::function<void(std::size_t)>& fn) {
    jobs = std::max<std::size_t>(1, std::min(jobs, count));
    if (jobs == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> workers;
    workers.reserve(jobs);
    for (std::size_t w = 0; w < jobs; ++w)
        workers.emplace_back([&, w] {
            for (std::size_t i = w; i < count; i += jobs) fn(i);
        });
    for (auto& t : workers) t.join();
}

} // namespace detail

/// Replicate scores for one (method, hypothesis) pair, reproducible from
/// (config, base_seed).
struct ScoreSample {
    std::string method;
    Hypothesis hypothesis = Hypothesis::Null;
    std::vector<double> scores;
    std::vector<std::uint64_t> seeds;
};

using Scorer = std::function<double(const Vec&)>;

/// Runs R replicates; replicate i uses a substream seed derived from
/// (base_seed, method, hypothesis, i), so results do not depend on execution
/// order or parallelism width.
inline ScoreSample run_replicates(std::string method_label, std::uint64_t method_tag,
                                  const SignalConfig& config, const CholeskyPair& chol,
                                  const Scorer& scorer, Hypothesis hypothesis, std::size_t R,
                                  std::uint64_t base_seed, std::size_t jobs = 1) {
    ScoreSample out;
    out.method = std::move(method_label);
    out.hypothesis = hypothesis;
    out.scores.resize(R);
    out.seeds.resize(R);
    const std::uint64_t hyp_tag = hypothesis == Hypothesis::Null ? 0 : 1;
    std::string failure;
    std::size_t failed_index = 0;
    detail::parallel_for(R, jobs, [&](std::size_t i) {
        const std::uint64_t seed = substream_seed(base_seed, {method_tag, hyp_tag, i});
        out.seeds[i] = seed;
        try {
            SplitMix64 rng(seed);
            out.scores[i] = scorer(generate_dataset(config, chol, hypothesis, rng));
        } catch (const std::exception& e) {
            if (failure.empty()) {
                failure = e.what();
                failed_index = i;
            }
        }
    });
    if (!failure.empty())
        throw std::runtime_error("replicate " + std::to_string(failed_index) + ": " + failure);
    return out;
}

/// Minimum over all cutoffs t of frac(null >= t) + frac(alt < t). The
/// objective is piecewise constant between observed scores, so scanning them
/// (plus +inf) is exact. Invariant under strictly increasing transforms.
inline double min_total_error(std::vector<double> null_scores, std::vector<double> alt_scores) {
    std::sort(null_scores.begin(), null_scores.end());
    std::sort(alt_scores.begin(), alt_scores.end());
    const double rn = static_cast<double>(null_scores.size());
    const double ra = static_cast<double>(alt_scores.size());
    auto error_at = [&](double t) {
        const auto null_ge = null_scores.end() -
                             std::lower_bound(null_scores.begin(), null_scores.end(), t);
        const auto alt_lt =
            std::lower_bound(alt_scores.begin(), alt_scores.end(), t) - alt_scores.begin();
        return static_cast<double>(null_ge) / rn + static_cast<double>(alt_lt) / ra;
    };
    double best = 1.0; // t = +inf: type I = 0, type II = 1
    for (double t : null_scores) best = std::min(best, error_at(t));
    for (double t : alt_scores) best = std::min(best, error_at(t));
    return best;
}

/// Upper-q percentile of the null scores: the ceil((1-q) R)-th ascending
/// order statistic.
inline double empirical_threshold(std::vector<double> null_scores, double q) {
    if (null_scores.empty()) throw std::invalid_argument("empty score sample");
    if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("q must lie in (0, 1)");
    std::sort(null_scores.begin(), null_scores.end());
    const std::size_t R = null_scores.size();
    auto idx = static_cast<std::size_t>(
        std::ceil((1.0 - q) * static_cast<double>(R)));
    idx = std::clamp<std::size_t>(idx, 1, R);
    return null_scores[idx - 1];
}

/// Fraction of alternative scores strictly exceeding the threshold.
inline double power(const std::vector<double>& alt_scores, double threshold) {
    if (alt_scores.empty()) throw std::invalid_argument("empty score sample");
    std::size_t c = 0;
    for (double s : alt_scores)
        if (s > threshold) ++c;
    return static_cast<double>(c) / static_cast<double>(alt_scores.size());
}

enum class Preset { A, B, C, Custom };

inline const char* preset_name(Preset p) {
    switch (p) {
        case Preset::A: return "a";
        case Preset::B: return "b";
        case Preset::C: return "c";
        case Preset::Custom: return "custom";
    }
    return "?";
}

enum class MatrixKind { TrigPoly, Strong };

struct ExperimentConfig {
    Preset preset = Preset::A;
    std::size_t n = 1000;
    std::vector<std::pair<double, double>> beta_r; // preset default when empty
    std::vector<double> rho_grid;           // filled from the preset when empty
    std::vector<std::size_t> n_grid;        // preset c
    MatrixKind matrix_kind = MatrixKind::TrigPoly; // custom cells
    std::vector<double> coeffs;             // custom trigpoly coefficients
    double alpha = 0.0, alpha0 = 0.0;       // custom strong family
    std::vector<Method> methods = {Method::HC, Method::HCa, Method::HCb};
    std::size_t replicates = 500;
    std::uint64_t base_seed = 0;
    double q = 0.10;
    std::size_t jobs = 1;
};

/// Null/alternative error summary for one sweep cell and method.
struct ErrorReport {
    std::string preset;
    std::string method;
    double beta = 0.0;
    double r = 0.0;
    double rho_or_alpha = 0.0;
    std::size_t n = 0;
    std::size_t replicates = 0;
    std::uint64_t seed = 0;
    double min_total_error = 0.0;
    double empirical_threshold = 0.0;
    double power = 0.0;
    std::string error; // nonempty when the cell failed
};

namespace detail {

inline std::size_t hcb_bandwidth(std::size_t n) {
    return static_cast<std::size_t>(std::ceil(std::log(static_cast<double>(n))));
}

struct MethodPlan {
    std::string label;
    std::uint64_t tag;
    Scorer scorer;
};

/// Covariance of D S(g0) X for the strong-dependence model:
/// entries (D S Sigma S' D)(j,k) with S the 1/-1 lower bidiagonal and
/// D = diag(1, sqrt(a_n), ..., sqrt(a_n)).
inline CorrelationMatrix transformed_strong_covariance(const CorrelationMatrix& sigma,
                                                       double alpha0) {
    const std::size_t n = sigma.n();
    const double an = std::pow(static_cast<double>(n), alpha0) / 2.0;
    Matrix m(n, n);
    auto s = [&](std::size_t j, std::size_t k) { return sigma(j, k); };
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
            double v = s(j, k);
            if (j > 0) v -= s(j - 1, k);
            if (k > 0) v -= s(j, k - 1);
            if (j > 0 && k > 0) v += s(j - 1, k - 1);
            const double dj = j == 0 ? 1.0 : std::sqrt(an);
            const double dk = k == 0 ? 1.0 : std::sqrt(an);
            m(j, k) = dj * dk * v;
        }
    // Round tiny symmetry noise away before validation.
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = j + 1; k < n; ++k) {
            const double v = 0.5 * (m(j, k) + m(k, j));
            m(j, k) = v;
            m(k, j) = v;
        }
    return CorrelationMatrix::from_dense(std::move(m), /*relaxed_diagonal=*/true);
}

inline Vec apply_strong_pre_transform(const Vec& x, double alpha0) {
    const std::size_t n = x.size();
    const double root_an = std::sqrt(std::pow(static_cast<double>(n), alpha0) / 2.0);
    Vec y(n);
    y[0] = x[0];
    for (std::size_t k = 1; k < n; ++k) y[k] = root_an * (x[k] - x[k - 1]);
    return y;
}

} // namespace detail

/// One cell of a sweep: builds the matrix and transforms once, shares them
/// read-only across replicates, and emits one report per method.
inline std::vector<ErrorReport> run_cell(const ExperimentConfig& config,
                                         const CorrelationMatrix& sigma,
                                         const SignalConfig& signal, double rho_or_alpha) {
    const std::size_t n = signal.n;
    const CholeskyPair chol = cholesky_inverse(sigma);
    const std::size_t b = detail::hcb_bandwidth(n);

    std::vector<detail::MethodPlan> plans;
    std::optional<InnovationTransform> t1, tb;
    for (Method m : config.methods) {
        switch (m) {
            case Method::HC:
                plans.push_back({"HC", 0, [](const Vec& x) {
                                     return hc_statistic(p_values(x)).value;
                                 }});
                break;
            case Method::HCa:
                if (!t1) t1 = innovation_transform(chol, 1);
                plans.push_back({"HC-a", 1, [&t1](const Vec& x) {
                                     return ihc_statistic(x, *t1).value;
                                 }});
                break;
            case Method::HCb:
                if (!tb) tb = innovation_transform(chol, b);
                plans.push_back({"HC-b", 2, [&tb](const Vec& x) {
                                     return ihc_statistic(x, *tb).value;
                                 }});
                break;
        }
    }
    // Strong-dependence cells report the transformed-model route next to the
    // direct one; both paths see the same datasets (same substream tag).
    std::optional<InnovationTransform> tb_tilde;
    const auto* strong = std::get_if<StrongVariant>(&signal.variant);
    if (strong &&
        std::find(config.methods.begin(), config.methods.end(), Method::HCb) !=
            config.methods.end()) {
        CorrelationMatrix tilde = detail::transformed_strong_covariance(sigma, strong->alpha0);
        tb_tilde = innovation_transform(tilde, b);
        const double alpha0 = strong->alpha0;
        plans.push_back({"HC-b-t", 2, [&tb_tilde, alpha0](const Vec& x) {
                             return ihc_statistic(detail::apply_strong_pre_transform(x, alpha0),
                                                  *tb_tilde)
                                 .value;
                         }});
    }

    std::vector<ErrorReport> reports;
    for (const auto& plan : plans) {
        ScoreSample null_sample =
            run_replicates(plan.label, plan.tag, signal, chol, plan.scorer, Hypothesis::Null,
                           config.replicates, config.base_seed, config.jobs);
        ScoreSample alt_sample =
            run_replicates(plan.label, plan.tag, signal, chol, plan.scorer,
                           Hypothesis::Alternative, config.replicates, config.base_seed,
                           config.jobs);
        ErrorReport rep;
        rep.preset = preset_name(config.preset);
        rep.method = plan.label;
        rep.beta = signal.beta;
        rep.r = signal.r;
        rep.rho_or_alpha = rho_or_alpha;
        rep.n = n;
        rep.replicates = config.replicates;
        rep.seed = config.base_seed;
        rep.min_total_error = min_total_error(null_sample.scores, alt_sample.scores);
        rep.empirical_threshold = empirical_threshold(null_sample.scores, config.q);
        rep.power = power(alt_sample.scores, rep.empirical_threshold);
        reports.push_back(std::move(rep));
    }
    return reports;
}

/// Full sweep over the preset's parameter grid. Per-cell failures are
/// recorded in the report's error column and the sweep continues.
inline std::vector<ErrorReport> run_experiment(ExperimentConfig config) {
    if (config.replicates < 2) throw std::invalid_argument("replicates must be >= 2");
    if (!(config.q > 0.0 && config.q < 1.0)) throw std::invalid_argument("q must lie in (0,1)");

    struct CellSpec {
        std::size_t n;
        double beta, r, rho_or_alpha;
    };
    std::vector<CellSpec> cells;
    auto fill_rho = [&](double lo, double hi) {
        if (config.rho_grid.empty())
            for (double rho = lo; rho <= hi + 1e-9; rho += 0.05)
                config.rho_grid.push_back(std::fabs(rho) < 1e-12 ? 0.0 : rho);
    };
    if (config.beta_r.empty()) {
        if (config.preset == Preset::A || config.preset == Preset::B)
            config.beta_r = {{0.5, 0.2}, {0.5, 0.25}, {0.55, 0.2}, {0.55, 0.25}};
        else
            config.beta_r = {{0.5, 0.25}};
    }
    switch (config.preset) {
        case Preset::A:
            fill_rho(-0.45, 0.45);
            for (const auto& [beta, r] : config.beta_r)
                for (double rho : config.rho_grid) cells.push_back({config.n, beta, r, rho});
            break;
        case Preset::B:
            fill_rho(-0.20, 0.45);
            for (const auto& [beta, r] : config.beta_r)
                for (double rho : config.rho_grid) cells.push_back({config.n, beta, r, rho});
            break;
        case Preset::C: {
            if (config.n_grid.empty()) config.n_grid = {500, 1000, 1500, 2000, 2500};
            const auto [beta, r] = config.beta_r.front();
            for (std::size_t n : config.n_grid) cells.push_back({n, beta, r, 0.4});
            break;
        }
        case Preset::Custom: {
            const auto& [beta, r] = config.beta_r.front();
            const double tag =
                config.matrix_kind == MatrixKind::Strong ? config.alpha : 0.0;
            cells.push_back({config.n, beta, r, tag});
            break;
        }
    }

    std::vector<ErrorReport> all;
    for (const auto& cell : cells) {
        SignalConfig signal;
        signal.n = cell.n;
        signal.beta = cell.beta;
        signal.r = cell.r;
        try {
            std::optional<CorrelationMatrix> sigma;
            switch (config.preset) {
                case Preset::A:
                case Preset::C: {
                    const double coeffs[] = {1.0, cell.rho_or_alpha};
                    sigma = toeplitz_from_coeffs(coeffs, cell.n);
                    break;
                }
                case Preset::B: {
                    const double coeffs[] = {1.0, 0.25, cell.rho_or_alpha};
                    sigma = toeplitz_from_coeffs(coeffs, cell.n);
                    break;
                }
                case Preset::Custom:
                    if (config.matrix_kind == MatrixKind::Strong) {
                        sigma = strong_dependence_matrix(cell.n, config.alpha, config.alpha0);
                        signal.variant = StrongVariant{config.alpha, config.alpha0};
                    } else {
                        sigma = toeplitz_from_coeffs(config.coeffs, cell.n);
                    }
                    break;
            }
            auto cell_reports = run_cell(config, *sigma, signal, cell.rho_or_alpha);
            all.insert(all.end(), cell_reports.begin(), cell_reports.end());
        } catch (const std::exception& e) {
            ErrorReport rep;
            rep.preset = preset_name(config.preset);
            rep.method = "-";
            rep.beta = cell.beta;
            rep.r = cell.r;
            rep.rho_or_alpha = cell.rho_or_alpha;
            rep.n = cell.n;
            rep.replicates = config.replicates;
            rep.seed = config.base_seed;
            rep.error = e.what();
            all.push_back(std::move(rep));
        }
    }
    return all;
}

} // namespace ihc

#endif // IHC_SIMLAB_HPP
