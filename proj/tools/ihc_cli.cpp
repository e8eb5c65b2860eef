// Command-line front end: build matrices, evaluate detection boundaries, run
// detection on supplied data, and execute the Monte Carlo experiment presets.
//
// Exit codes: 0 success, 2 parse/IO, 3 dimension mismatch, 4 all sweep cells
// failed, 5 matrix not positive definite.

#include <CLI11.hpp>

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ihc/ihc.hpp"

namespace {

constexpr const char* kToolVersion = "ihc 1.0.0";

struct CliError {
    int code;
    std::string message;
};

struct DensitySpec {
    std::string kind; // "trigpoly" or "f_alpha"
    std::vector<double> coeffs;
    double alpha = 0.0;
    std::size_t trunc = 100000;

    ihc::SpectralDensity density() const {
        if (kind == "trigpoly") return ihc::trig_poly_density(coeffs);
        return ihc::FAlphaDensity(alpha, trunc).density();
    }

    std::vector<double> toeplitz_coeffs(std::size_t n) const {
        if (kind == "trigpoly") return coeffs;
        // Fourier coefficients of f_alpha: a_0 = 1, a_k = -c_k / 2.
        const auto c = ihc::f_alpha_coeffs(alpha, std::max<std::size_t>(trunc, n));
        std::vector<double> a(n, 0.0);
        a[0] = 1.0;
        for (std::size_t k = 1; k < n; ++k) a[k] = -0.5 * c[k];
        return a;
    }
};

DensitySpec parse_density(const ihc::ConfigSection& sec) {
    DensitySpec spec;
    const auto kind_it = sec.find("kind");
    if (kind_it == sec.end()) throw CliError{2, "density config is missing key 'kind'"};
    spec.kind = kind_it->second;
    if (spec.kind == "trigpoly") {
        const auto it = sec.find("coeffs");
        if (it == sec.end()) throw CliError{2, "trigpoly density is missing key 'coeffs'"};
        for (const auto& tok : ihc::detail::split(it->second, ','))
            spec.coeffs.push_back(ihc::detail::parse_double(tok, "density coeffs"));
        if (spec.coeffs.empty() || spec.coeffs[0] != 1.0)
            throw CliError{2, "trigpoly density requires a leading coefficient a_0 = 1"};
    } else if (spec.kind == "f_alpha") {
        const auto it = sec.find("alpha");
        if (it == sec.end()) throw CliError{2, "f_alpha density is missing key 'alpha'"};
        spec.alpha = ihc::detail::parse_double(it->second, "density alpha");
        if (const auto t = sec.find("trunc"); t != sec.end())
            spec.trunc = static_cast<std::size_t>(
                ihc::detail::parse_double(t->second, "density trunc"));
    } else {
        throw CliError{2, "unknown density kind '" + spec.kind +
                              "' (expected trigpoly or f_alpha)"};
    }
    return spec;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw CliError{2, "cannot open output file '" + path + "'"};
    return os;
}

void write_manifest(const std::string& out_path, const std::string& subcommand,
                    const std::vector<std::pair<std::string, std::string>>& entries) {
    std::ofstream os(out_path + ".manifest");
    if (!os) return;
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    os << "# generated by " << kToolVersion << " at " << now << "\n";
    os << "[manifest]\n";
    os << "subcommand = " << subcommand << "\n";
    os << "version = " << kToolVersion << "\n";
    for (const auto& [k, v] : entries) os << k << " = " << v << "\n";
}

ihc::Method parse_method(const std::string& name) {
    if (name == "HC") return ihc::Method::HC;
    if (name == "HC-a") return ihc::Method::HCa;
    if (name == "HC-b") return ihc::Method::HCb;
    throw CliError{2, "unknown method '" + name + "' (expected HC, HC-a or HC-b)"};
}

// ---- boundary ----------------------------------------------------------

int cmd_boundary(const std::vector<double>& betas, std::optional<double> gamma,
                 const std::string& config_path, const std::string& out_path,
                 const std::string& svg_path, int precision) {
    double cf = 1.0;
    std::string source = "gamma";
    if (!config_path.empty()) {
        const ihc::Config cfg = ihc::parse_config_file(config_path);
        const auto it = cfg.find("density");
        if (it == cfg.end()) throw CliError{2, "config has no [density] section"};
        cf = ihc::wiener_rate(parse_density(it->second).density());
        source = "density:" + config_path;
    } else if (gamma) {
        cf = *gamma;
        if (cf <= 0.0) throw CliError{2, "gamma must be positive"};
    }

    std::ostringstream csv;
    csv << "beta,rho_star,boundary\n";
    std::vector<std::pair<double, double>> uncorr, scaled;
    for (double beta : betas) {
        const double rs = ihc::rho_star(beta);
        csv << ihc::detail::format_value(beta, precision) << ","
            << ihc::detail::format_value(rs, precision) << ","
            << ihc::detail::format_value(rs / cf, precision) << "\n";
        uncorr.emplace_back(beta, rs);
        scaled.emplace_back(beta, rs / cf);
    }
    if (out_path.empty()) {
        std::cout << csv.str();
    } else {
        open_output(out_path) << csv.str();
        write_manifest(out_path, "boundary",
                       {{"source", source}, {"c_f", std::to_string(cf)}});
    }
    if (!svg_path.empty()) {
        ihc::SvgPlot plot("Detection boundary", "beta", "r");
        plot.add_region(scaled, "#fce8e8");
        plot.add_series("rho*(beta)", uncorr);
        plot.add_series("rho*(beta)/C(f)", scaled);
        std::ofstream os(svg_path);
        plot.render(os);
    }
    return 0;
}

// ---- detect ------------------------------------------------------------

int cmd_detect(const std::string& data_path, const std::string& sigma_path,
               const std::string& config_path, const std::string& method_name,
               std::optional<std::size_t> bandwidth, double a_const,
               std::optional<double> user_threshold, int precision) {
    std::ifstream data_is(data_path);
    if (!data_is) throw CliError{2, "cannot open data file '" + data_path + "'"};
    const ihc::Vec x = ihc::read_dataset_csv(data_is);
    const std::size_t n = x.size();

    std::optional<ihc::CorrelationMatrix> sigma;
    if (!sigma_path.empty()) {
        std::ifstream ms(sigma_path);
        if (!ms) throw CliError{2, "cannot open matrix file '" + sigma_path + "'"};
        sigma = ihc::CorrelationMatrix::from_dense(ihc::read_matrix_csv(ms));
    } else if (!config_path.empty()) {
        const ihc::Config cfg = ihc::parse_config_file(config_path);
        const auto it = cfg.find("density");
        if (it == cfg.end()) throw CliError{2, "config has no [density] section"};
        const auto coeffs = parse_density(it->second).toeplitz_coeffs(n);
        sigma = ihc::toeplitz_from_coeffs(coeffs, n);
    } else {
        sigma = ihc::CorrelationMatrix::from_dense(ihc::Matrix::identity(n));
    }
    if (sigma->n() != n)
        throw CliError{3, "data has n=" + std::to_string(n) + " but matrix has n=" +
                              std::to_string(sigma->n())};

    const ihc::Method method = parse_method(method_name);
    ihc::HcScore score;
    double threshold = 0.0;
    if (method == ihc::Method::HC) {
        score = ihc::hc_statistic(ihc::p_values(x));
        threshold = ihc::hc_threshold(n, a_const);
    } else {
        const std::size_t b = bandwidth.value_or(
            method == ihc::Method::HCa
                ? 1
                : static_cast<std::size_t>(std::ceil(std::log(static_cast<double>(n)))));
        score = ihc::ihc_statistic(x, *sigma, b);
        threshold = ihc::ihc_threshold(n);
    }
    if (user_threshold) threshold = *user_threshold;
    const ihc::DetectionResult res = ihc::make_detection_result(score, threshold, method);

    std::cout << std::setprecision(precision);
    std::cout << "method      " << method_name << "\n";
    if (res.empty_range)
        std::cout << "statistic   empty-maximization-range\n";
    else
        std::cout << "statistic   " << res.statistic << "\n";
    std::cout << "threshold   " << res.threshold << "\n";
    std::cout << "decision    " << (res.reject ? "reject" : "no-reject") << "\n";
    return 0;
}

// ---- simulate ----------------------------------------------------------

ihc::ExperimentConfig load_experiment(const std::string& preset_name,
                                      const std::string& config_path) {
    ihc::ExperimentConfig ec;
    ihc::ConfigSection sec;
    if (!config_path.empty()) {
        const ihc::Config cfg = ihc::parse_config_file(config_path);
        const auto it = cfg.find("experiment");
        if (it == cfg.end()) throw CliError{2, "config has no [experiment] section"};
        sec = it->second;
    }
    std::string preset = preset_name;
    if (preset.empty()) {
        const auto it = sec.find("preset");
        preset = it == sec.end() ? "a" : it->second;
    }
    if (preset == "a")
        ec.preset = ihc::Preset::A;
    else if (preset == "b")
        ec.preset = ihc::Preset::B;
    else if (preset == "c")
        ec.preset = ihc::Preset::C;
    else if (preset == "custom")
        ec.preset = ihc::Preset::Custom;
    else
        throw CliError{2, "unknown preset '" + preset + "'"};

    auto num = [&](const char* key) -> std::optional<double> {
        const auto it = sec.find(key);
        if (it == sec.end()) return std::nullopt;
        return ihc::detail::parse_double(it->second, std::string("experiment key ") + key);
    };
    if (const auto v = num("n")) ec.n = static_cast<std::size_t>(*v);
    if (const auto v = num("replicates")) ec.replicates = static_cast<std::size_t>(*v);
    if (const auto v = num("seed")) ec.base_seed = static_cast<std::uint64_t>(*v);
    if (const auto v = num("q")) ec.q = *v;
    if (const auto beta = num("beta")) {
        const auto r = num("r");
        if (!r) throw CliError{2, "experiment key 'beta' requires key 'r'"};
        ec.beta_r = {{*beta, *r}};
    }
    if (const auto it = sec.find("rho"); it != sec.end())
        for (const auto& tok : ihc::detail::split(it->second, ','))
            ec.rho_grid.push_back(ihc::detail::parse_double(tok, "experiment rho"));
    if (const auto it = sec.find("methods"); it != sec.end()) {
        ec.methods.clear();
        for (const auto& tok : ihc::detail::split(it->second, ','))
            ec.methods.push_back(parse_method(tok));
    }
    if (ec.preset == ihc::Preset::Custom) {
        const auto kind = sec.find("kind");
        if (kind == sec.end())
            throw CliError{2, "custom experiment needs key 'kind' (trigpoly or strong)"};
        if (kind->second == "strong") {
            ec.matrix_kind = ihc::MatrixKind::Strong;
            const auto a = num("alpha"), a0 = num("alpha0");
            if (!a || !a0) throw CliError{2, "strong experiment needs 'alpha' and 'alpha0'"};
            ec.alpha = *a;
            ec.alpha0 = *a0;
        } else if (kind->second == "trigpoly") {
            const auto it = sec.find("coeffs");
            if (it == sec.end()) throw CliError{2, "trigpoly experiment needs 'coeffs'"};
            for (const auto& tok : ihc::detail::split(it->second, ','))
                ec.coeffs.push_back(ihc::detail::parse_double(tok, "experiment coeffs"));
        } else {
            throw CliError{2, "unknown experiment kind '" + kind->second + "'"};
        }
        if (ec.beta_r.size() != 1)
            ec.beta_r = {{0.5, 0.2}};
    }
    return ec;
}

int cmd_simulate(ihc::ExperimentConfig ec, const std::string& out_path,
                 const std::string& svg_path, int precision) {
    const auto reports = ihc::run_experiment(ec);
    std::size_t ok = 0;
    for (const auto& rep : reports)
        if (rep.error.empty()) ++ok;

    std::ostringstream csv;
    ihc::write_report_csv(csv, reports, precision);
    if (out_path.empty()) {
        std::cout << csv.str();
    } else {
        open_output(out_path) << csv.str();
        write_manifest(out_path, "simulate",
                       {{"preset", ihc::preset_name(ec.preset)},
                        {"n", std::to_string(ec.n)},
                        {"replicates", std::to_string(ec.replicates)},
                        {"seed", std::to_string(ec.base_seed)},
                        {"q", std::to_string(ec.q)}});
    }
    if (!svg_path.empty()) {
        // error-vs-rho curves, one per method, first (beta, r) pair
        ihc::SvgPlot plot("Sum of type I and II errors", "rho", "min total error");
        for (const char* m : {"HC", "HC-a", "HC-b"}) {
            std::vector<std::pair<double, double>> pts;
            for (const auto& rep : reports)
                if (rep.error.empty() && rep.method == m && rep.beta == reports.front().beta &&
                    rep.r == reports.front().r)
                    pts.emplace_back(rep.rho_or_alpha, rep.min_total_error);
            if (!pts.empty()) plot.add_series(m, std::move(pts));
        }
        std::ofstream os(svg_path);
        plot.render(os);
    }
    if (ok == 0) return 4;
    return 0;
}

// ---- matrix ------------------------------------------------------------

int cmd_matrix(const std::string& config_path, std::optional<double> strong_alpha,
               std::optional<double> strong_alpha0, std::size_t n, const std::string& out_path,
               int precision) {
    std::optional<ihc::CorrelationMatrix> sigma;
    std::optional<double> cf;
    std::string source;
    try {
        if (strong_alpha) {
            if (!strong_alpha0) throw CliError{2, "--strong-alpha requires --strong-alpha0"};
            sigma = ihc::strong_dependence_matrix(n, *strong_alpha, *strong_alpha0);
            source = "strong";
        } else {
            if (config_path.empty())
                throw CliError{2, "matrix needs --config with a [density] section "
                                  "or --strong-alpha/--strong-alpha0"};
            const ihc::Config cfg = ihc::parse_config_file(config_path);
            const auto it = cfg.find("density");
            if (it == cfg.end()) throw CliError{2, "config has no [density] section"};
            const DensitySpec spec = parse_density(it->second);
            cf = ihc::wiener_rate(spec.density());
            sigma = ihc::toeplitz_from_coeffs(spec.toeplitz_coeffs(n), n);
            source = "density:" + config_path;
        }
    } catch (const ihc::NotPositiveDefinite&) {
        // Report the offending smallest eigenvalue with the failure.
        ihc::Matrix raw(n, n);
        if (strong_alpha) {
            const double scale = std::pow(static_cast<double>(n), -*strong_alpha0);
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = 0; k < n; ++k)
                    raw(j, k) = std::max(0.0, 1.0 - std::pow(std::fabs(double(j) - double(k)),
                                                             *strong_alpha) *
                                                      scale);
        } else {
            const ihc::Config cfg = ihc::parse_config_file(config_path);
            const auto coeffs = parse_density(cfg.at("density")).toeplitz_coeffs(n);
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = 0; k < n; ++k) {
                    const std::size_t d = j > k ? j - k : k - j;
                    raw(j, k) = d < coeffs.size() ? coeffs[d] : 0.0;
                }
        }
        const double lam = ihc::sym_smallest_eigenvalue(raw);
        std::cerr << "error: matrix is not positive definite (smallest eigenvalue "
                  << std::setprecision(precision) << lam << ")\n";
        return 5;
    }

    std::ostringstream csv;
    ihc::write_matrix_csv(csv, sigma->matrix());
    if (out_path.empty()) {
        std::cout << csv.str();
    } else {
        open_output(out_path) << csv.str();
        write_manifest(out_path, "matrix", {{"source", source}, {"n", std::to_string(n)}});
    }

    const double min_eig = ihc::sym_smallest_eigenvalue(sigma->matrix());
    const auto [glo, ghi] = ihc::diag_inverse_range(*sigma);
    const auto chol = ihc::cholesky_inverse(*sigma);
    std::ostream& diag = out_path.empty() ? std::cerr : std::cout;
    diag << std::setprecision(precision);
    diag << "min_eigenvalue      " << min_eig << "\n";
    diag << "diag_inverse_range  [" << glo << ", " << ghi << "]\n";
    if (cf) diag << "wiener_rate_C(f)    " << *cf << "\n";
    if (n >= 24) {
        diag << "decay_slope_inv     "
             << ihc::offdiag_decay_slope(
                    (chol.whitener.m.transpose() * chol.whitener.m), 5, n / 4)
             << "\n";
        diag << "decay_slope_U       " << ihc::offdiag_decay_slope(chol.whitener.m, 5, n / 4)
             << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Innovated higher criticism toolkit: sparse signal detection in "
                 "correlated Gaussian noise"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);

    int precision = 6;
    app.add_option("--precision", precision, "significant digits in numeric output")
        ->capture_default_str();

    // boundary
    auto* boundary = app.add_subcommand("boundary", "detection-boundary curves");
    double beta_min = 0.55, beta_max = 0.95, beta_step = 0.05;
    std::vector<double> beta_list;
    std::optional<double> gamma;
    std::string b_config, b_out, b_svg;
    boundary->add_option("--beta-min", beta_min)->capture_default_str();
    boundary->add_option("--beta-max", beta_max)->capture_default_str();
    boundary->add_option("--beta-step", beta_step)->capture_default_str();
    boundary->add_option("--betas", beta_list, "explicit beta grid (overrides min/max/step)");
    boundary->add_option("--gamma", gamma, "diagonal limit gamma (C(f) for Toeplitz)");
    boundary->add_option("--config", b_config, "config file with a [density] section");
    boundary->add_option("--out", b_out, "output CSV path (default stdout)");
    boundary->add_option("--svg", b_svg, "optional SVG plot path");

    // detect
    auto* detect = app.add_subcommand("detect", "run detection on a dataset file");
    std::string d_data, d_sigma, d_config, d_method = "HC";
    std::optional<std::size_t> d_bandwidth;
    std::optional<double> d_threshold;
    double d_a = 0.5;
    detect->add_option("--data", d_data, "dataset CSV")->required();
    detect->add_option("--sigma", d_sigma, "correlation matrix CSV");
    detect->add_option("--config", d_config, "config file with a [density] section");
    detect->add_option("--method", d_method, "HC, HC-a or HC-b")->capture_default_str();
    detect->add_option("--bandwidth", d_bandwidth, "iHC bandwidth override");
    detect->add_option("--a", d_a, "HC threshold constant a")->capture_default_str();
    detect->add_option("--threshold", d_threshold, "user-supplied (empirical) threshold");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "run a Monte Carlo experiment");
    std::string s_preset, s_config, s_out, s_svg;
    std::optional<std::size_t> s_R, s_jobs, s_n;
    std::optional<std::uint64_t> s_seed;
    simulate->add_option("--preset", s_preset, "a, b, c or custom");
    simulate->add_option("--config", s_config, "config file with an [experiment] section");
    simulate->add_option("--replicates", s_R, "replicates per hypothesis");
    simulate->add_option("--seed", s_seed, "base seed");
    simulate->add_option("--n", s_n, "problem dimension override");
    simulate->add_option("--jobs", s_jobs, "worker threads (does not affect results)");
    simulate->add_option("--out", s_out, "report CSV path (default stdout)");
    simulate->add_option("--svg", s_svg, "optional SVG plot path");

    // matrix
    auto* matrix = app.add_subcommand("matrix", "build a correlation matrix + diagnostics");
    std::string m_config, m_out;
    std::optional<double> m_alpha, m_alpha0;
    std::size_t m_n = 100;
    matrix->add_option("--config", m_config, "config file with a [density] section");
    matrix->add_option("--strong-alpha", m_alpha, "strong-dependence alpha");
    matrix->add_option("--strong-alpha0", m_alpha0, "strong-dependence alpha0");
    matrix->add_option("--n", m_n, "dimension")->capture_default_str();
    matrix->add_option("--out", m_out, "matrix CSV path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*boundary) {
            std::vector<double> betas = beta_list;
            if (betas.empty())
                for (double b = beta_min; b <= beta_max + 1e-9; b += beta_step)
                    betas.push_back(b);
            return cmd_boundary(betas, gamma, b_config, b_out, b_svg, precision);
        }
        if (*detect)
            return cmd_detect(d_data, d_sigma, d_config, d_method, d_bandwidth, d_a,
                              d_threshold, precision);
        if (*simulate) {
            ihc::ExperimentConfig ec = load_experiment(s_preset, s_config);
            if (s_R) ec.replicates = *s_R;
            if (s_seed) ec.base_seed = *s_seed;
            if (s_n) ec.n = *s_n;
            if (s_jobs) ec.jobs = *s_jobs;
            return cmd_simulate(std::move(ec), s_out, s_svg, precision);
        }
        if (*matrix) return cmd_matrix(m_config, m_alpha, m_alpha0, m_n, m_out, precision);
    } catch (const CliError& e) {
        std::cerr << "error: " << e.message << "\n";
        return e.code;
    } catch (const ihc::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ihc::DimensionMismatch& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const ihc::NotPositiveDefinite& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 5;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
