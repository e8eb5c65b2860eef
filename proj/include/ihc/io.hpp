#ifndef IHC_IO_HPP
#define IHC_IO_HPP

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "ihc/corr.hpp"
#include "ihc/errors.hpp"
#include "ihc/signal.hpp"
#include "ihc/simlab.hpp"

namespace ihc {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(trim(item));
    return out;
}

inline double parse_double(const std::string& s, const std::string& where) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError("bad numeric value '" + s + "' in " + where);
    }
}

inline std::string format_value(double v, int precision) {
    std::ostringstream os;
    os << std::setprecision(precision) << v;
    return os.str();
}

} // namespace detail

// ---- matrix CSV: header "n=<int>", then n rows of n comma-separated reals.

inline void write_matrix_csv(std::ostream& os, const Matrix& m, int precision = 17) {
    os << "n=" << m.rows() << "\n";
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) os << ",";
            os << detail::format_value(m(i, j), precision);
        }
        os << "\n";
    }
}

inline Matrix read_matrix_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("n=", 0) != 0)
        throw ParseError("matrix file must start with an 'n=<int>' header");
    std::size_t n = 0;
    try {
        n = std::stoul(line.substr(2));
    } catch (const std::exception&) {
        throw ParseError("bad matrix header '" + line + "'");
    }
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::getline(is, line))
            throw ParseError("matrix file truncated at row " + std::to_string(i + 1));
        const auto cells = detail::split(line, ',');
        if (cells.size() != n)
            throw ParseError("row " + std::to_string(i + 1) + " has " +
                             std::to_string(cells.size()) + " fields, expected " +
                             std::to_string(n));
        for (std::size_t j = 0; j < n; ++j)
            m(i, j) = detail::parse_double(cells[j], "matrix row " + std::to_string(i + 1));
    }
    return m;
}

// ---- dataset CSV: single column with a metadata header row.

inline void write_dataset_csv(std::ostream& os, const Vec& x, Hypothesis hypothesis,
                              std::uint64_t seed, int precision = 17) {
    os << "n=" << x.size() << ",hypothesis="
       << (hypothesis == Hypothesis::Null ? "null" : "alternative") << ",seed=" << seed << "\n";
    for (double v : x) os << detail::format_value(v, precision) << "\n";
}

inline Vec read_dataset_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("n=", 0) != 0)
        throw ParseError("dataset file must start with an 'n=...' header");
    const auto fields = detail::split(line, ',');
    std::size_t n = 0;
    try {
        n = std::stoul(fields.at(0).substr(2));
    } catch (const std::exception&) {
        throw ParseError("bad dataset header '" + line + "'");
    }
    Vec x;
    x.reserve(n);
    std::size_t row = 1;
    while (std::getline(is, line)) {
        ++row;
        const std::string t = detail::trim(line);
        if (t.empty()) continue;
        x.push_back(detail::parse_double(t, "dataset line " + std::to_string(row)));
    }
    if (x.size() != n)
        throw ParseError("dataset declares n=" + std::to_string(n) + " but has " +
                         std::to_string(x.size()) + " values");
    return x;
}

// ---- flat INI-like config: [section] lines and key = value pairs.

using ConfigSection = std::map<std::string, std::string>;
using Config = std::map<std::string, ConfigSection>;

inline Config parse_config(std::istream& is) {
    Config cfg;
    std::string section = "";
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const std::string t = detail::trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw ParseError("line " + std::to_string(lineno) + ": unterminated section");
            section = detail::trim(t.substr(1, t.size() - 2));
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ParseError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = detail::trim(t.substr(0, eq));
        if (key.empty())
            throw ParseError("line " + std::to_string(lineno) + ": empty key");
        cfg[section][key] = detail::trim(t.substr(eq + 1));
    }
    return cfg;
}

inline Config parse_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ParseError("cannot open config file '" + path + "'");
    return parse_config(is);
}

// ---- report CSV, one row per sweep cell per method.

inline void write_report_csv(std::ostream& os, const std::vector<ErrorReport>& reports,
                             int precision = 6) {
    os << "preset,method,beta,r,rho_or_alpha,n,R,seed,min_total_error,empirical_threshold,"
          "power,error\n";
    for (const auto& rep : reports) {
        os << rep.preset << "," << rep.method << ","
           << detail::format_value(rep.beta, precision) << ","
           << detail::format_value(rep.r, precision) << ","
           << detail::format_value(rep.rho_or_alpha, precision) << "," << rep.n << ","
           << rep.replicates << "," << rep.seed << ",";
        if (rep.error.empty())
            os << detail::format_value(rep.min_total_error, precision) << ","
               << detail::format_value(rep.empirical_threshold, precision) << ","
               << detail::format_value(rep.power, precision) << ",";
        else
            os << ",,,";
        os << rep.error << "\n";
    }
}

} // namespace ihc

#endif // IHC_IO_HPP
