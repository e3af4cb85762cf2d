#pragma once

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <initializer_list>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gamow/checks.hpp"
#include "gamow/common.hpp"
#include "gamow/harmonics.hpp"
#include "gamow/kernel.hpp"
#include "gamow/minimize.hpp"
#include "gamow/shape.hpp"

namespace gamow {

// ---------------------------------------------------------------- config

// Ordered key=value store; '#' starts a comment, keys are single tokens.
// Commands declare their allowed keys so typos fail loudly.
struct RunConfig {
    std::vector<std::pair<std::string, std::string>> items;

    void set(const std::string& key, const std::string& value) {
        for (auto& kv : items)
            if (kv.first == key) {
                kv.second = value;
                return;
            }
        items.emplace_back(key, value);
    }
    bool has(const std::string& key) const {
        for (const auto& kv : items)
            if (kv.first == key) return true;
        return false;
    }
    std::string raw(const std::string& key) const {
        for (const auto& kv : items)
            if (kv.first == key) return kv.second;
        throw ConfigError("missing config key: " + key);
    }
    std::string str(const std::string& key, const std::string& fallback) const {
        return has(key) ? raw(key) : fallback;
    }
    double num(const std::string& key, double fallback) const {
        if (!has(key)) return fallback;
        return parse_num(key, raw(key));
    }
    long integer(const std::string& key, long fallback) const {
        if (!has(key)) return fallback;
        const std::string& v = raw(key);
        char* end = nullptr;
        long out = std::strtol(v.c_str(), &end, 10);
        if (end == v.c_str() || *end != '\0')
            throw ConfigError("config key " + key + " needs an integer, got '" + v + "'");
        return out;
    }
    std::vector<double> num_list(const std::string& key) const {
        std::vector<double> out;
        std::string v = raw(key);
        std::stringstream ss(v);
        std::string piece;
        while (std::getline(ss, piece, ','))
            out.push_back(parse_num(key, piece));
        if (out.empty()) throw ConfigError("config key " + key + " needs values");
        return out;
    }
    void restrict_keys(std::initializer_list<const char*> allowed) const {
        for (const auto& kv : items) {
            bool ok = false;
            for (const char* a : allowed) ok = ok || (kv.first == a);
            if (!ok) throw ConfigError("unknown config key: " + kv.first);
        }
    }

  private:
    static double parse_num(const std::string& key, const std::string& v) {
        char* end = nullptr;
        double out = std::strtod(v.c_str(), &end);
        while (end && *end && std::isspace(static_cast<unsigned char>(*end))) ++end;
        if (end == v.c_str() || *end != '\0')
            throw ConfigError("config key " + key + " needs a number, got '" + v + "'");
        return out;
    }
};

inline std::string trim_ws(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

inline RunConfig read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    RunConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim_ws(line);
        if (t.empty() || t[0] == '#') continue;
        std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + " is not key = value");
        std::string key = trim_ws(t.substr(0, eq));
        std::string val = trim_ws(t.substr(eq + 1));
        if (key.empty())
            throw ConfigError("config line " + std::to_string(lineno) + " has an empty key");
        cfg.set(key, val);
    }
    return cfg;
}

// ---------------------------------------------------------------- headers

using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

inline void write_header(std::ostream& os, const std::string& kind, const ConfigEcho& echo) {
    os << "# format = gamow-" << kind << "-v1\n";
    for (const auto& kv : echo) os << "# config." << kv.first << " = " << kv.second << "\n";
}

// ---------------------------------------------------------------- check reports

inline void write_check_reports(std::ostream& os, const std::vector<CheckReport>& reports) {
    for (const CheckReport& r : reports) {
        os << "check_name = " << r.check_name << "\n";
        os << "kernel = " << r.kernel_spec << "\n";
        os << "N = " << r.N << "\n";
        os << "m = " << r.m << "\n";
        os << "seed = " << r.seed << "\n";
        os << "param = " << r.param << "\n";
        os << "lhs = " << format_number(r.lhs) << "\n";
        os << "rhs_scale = " << format_number(r.rhs_scale) << "\n";
        os << "empirical_constant = " << format_number(r.empirical_constant) << "\n";
        os << "ceiling = " << format_number(r.ceiling) << "\n";
        os << "degenerate = " << (r.degenerate ? 1 : 0) << "\n";
        for (const auto& ex : r.extras)
            os << "extra." << ex.first << " = " << format_number(ex.second) << "\n";
        os << "error = " << r.error << "\n";
        os << "pass = " << (r.pass ? 1 : 0) << "\n";
        os << "\n";
    }
    CheckSummary s = summarize_checks(reports);
    os << "summary.total = " << s.total << "\n";
    os << "summary.failed = " << s.failed << "\n";
    os << "summary.errors = " << s.errors << "\n";
    os << "summary.degenerate = " << s.degenerate << "\n";
}

// ---------------------------------------------------------------- energy report

inline void write_energy_report(std::ostream& os, const EnergyReport& r) {
    os << "perimeter = " << format_number(r.perimeter) << "\n";
    os << "riesz = " << format_number(r.riesz) << "\n";
    os << "f_eps = " << format_number(r.f_eps) << "\n";
    os << "epsilon = " << format_number(r.epsilon) << "\n";
    os << "ball_perimeter = " << format_number(r.ball_perimeter) << "\n";
    os << "ball_riesz = " << format_number(r.ball_riesz) << "\n";
    os << "quadrature_error_estimate = " << format_number(r.quadrature_error_estimate) << "\n";
}

// ---------------------------------------------------------------- shape files

struct ShapeFileData {
    int N = 0, m = 0, L = 0;
    std::vector<double> coeffs;
};

inline void write_shape_file(std::ostream& os, const RadialGraph& g, const ConfigEcho& echo) {
    write_header(os, "shape", echo);
    os << g.N() << " " << g.grid().m << " " << g.space.L() << "\n";
    for (double c : g.coeffs) os << format_number(c) << "\n";
}

inline ShapeFileData read_shape_file(std::istream& in) {
    ShapeFileData out;
    std::string line;
    bool have_dims = false;
    int expected = 0;
    while (std::getline(in, line)) {
        std::string t = trim_ws(line);
        if (t.empty() || t[0] == '#') continue;
        if (!have_dims) {
            std::stringstream ss(t);
            std::string tail;
            if (!(ss >> out.N >> out.m >> out.L) || (ss >> tail))
                throw ShapeParseError("shape file: first data line must be 'N m L'");
            if (out.N < 2 || out.N > 3) throw ShapeParseError("shape file: N must be 2 or 3");
            if (out.m < 8) throw ShapeParseError("shape file: m must be at least 8");
            if (out.L < 0) throw ShapeParseError("shape file: L must be nonnegative");
            expected = basis_count(out.N, out.L);
            have_dims = true;
            continue;
        }
        char* end = nullptr;
        double v = std::strtod(t.c_str(), &end);
        while (end && *end && std::isspace(static_cast<unsigned char>(*end))) ++end;
        if (end == t.c_str() || *end != '\0')
            throw ShapeParseError("shape file: bad coefficient line '" + t + "'");
        if (static_cast<int>(out.coeffs.size()) >= expected)
            throw ShapeParseError("shape file: more coefficients than the header admits");
        out.coeffs.push_back(v);
    }
    if (!have_dims) throw ShapeParseError("shape file: missing 'N m L' line");
    if (static_cast<int>(out.coeffs.size()) != expected)
        throw ShapeParseError("shape file: expected " + std::to_string(expected) +
                              " coefficients, got " + std::to_string(out.coeffs.size()));
    return out;
}

inline ShapeFileData read_shape_file_path(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ShapeParseError("cannot open shape file: " + path);
    return read_shape_file(in);
}

// ---------------------------------------------------------------- CSV tables

inline void write_sweep_csv(std::ostream& os, const SweepResult& r, const ConfigEcho& echo) {
    write_header(os, "sweep", echo);
    os << "# eps_hat = " << (r.has_eps_hat ? format_number(r.eps_hat) : std::string("none"))
       << "\n";
    os << "epsilon,deviation,energy_gap,iters,converged\n";
    for (const SweepRow& row : r.rows)
        os << format_number(row.eps) << "," << format_number(row.deviation) << ","
           << format_number(row.energy_gap) << "," << row.iters << ","
           << (row.converged ? 1 : 0) << "\n";
}

inline void write_trace_csv(std::ostream& os, const std::vector<TraceRow>& trace,
                            const ConfigEcho& echo) {
    write_header(os, "trace", echo);
    os << "iter,energy,grad_norm,step\n";
    for (const TraceRow& t : trace)
        os << t.iter << "," << format_number(t.energy) << "," << format_number(t.grad_norm)
           << "," << format_number(t.step) << "\n";
}

inline void write_plot_data(std::ostream& os, const SweepResult& r, const ConfigEcho& echo) {
    write_header(os, "plotdata", echo);
    for (const SweepRow& row : r.rows)
        os << format_number(row.eps) << " " << format_number(row.deviation) << "\n";
}

} // namespace gamow
