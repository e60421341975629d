#pragma once

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "qecov/cat.hpp"
#include "qecov/gaussian.hpp"
#include "qecov/measures.hpp"

namespace qecov::bench {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kCsvHeader = "parameter,code,f_cw,concurrence";

struct SweepConfig {
    enum class Experiment { fig1_gamma, fig2_alpha, gaussian_nogo };
    Experiment experiment = Experiment::fig1_gamma;
    std::vector<double> grid;
    std::vector<std::string> codes;
    measures::SphereSampling sampling;
    double gamma = 0.32;  // fixed channel for fig2
    std::uint64_t seed = 0;
    std::string output_path;
};

struct SweepRow {
    double parameter;
    std::string code;
    double f_cw;
    double concurrence;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::vector<std::pair<std::string, std::string>> metadata;
};

inline std::vector<double> default_fig1_grid() {
    std::vector<double> g;
    for (int i = 0; i <= 50; ++i) g.push_back(0.02 * i);
    return g;
}

inline std::vector<double> default_fig2_grid() {
    std::vector<double> g;
    for (int i = 1; i <= 60; ++i) g.push_back(0.05 * i);
    return g;
}

inline std::vector<std::string> default_fig1_codes() {
    return {"dual_rail", "three_qubit", "bosonic", "four_qubit_approx"};
}

inline std::vector<std::string> default_fig2_codes() {
    return {"direct", "rep3", "rep5", "rep11", "rep51"};
}

/// "a:step:b" (inclusive) or a comma-separated list.
inline std::vector<double> parse_grid(const std::string& spec) {
    std::vector<double> out;
    if (spec.find(':') != std::string::npos) {
        double a, step, b;
        char c1, c2;
        std::istringstream is(spec);
        if (!(is >> a >> c1 >> step >> c2 >> b) || c1 != ':' || c2 != ':' || step <= 0.0)
            throw std::invalid_argument("parse_grid: expected start:step:stop, got " + spec);
        const int n = int(std::lround((b - a) / step));
        for (int i = 0; i <= n; ++i) out.push_back(a + i * step);
        if (!out.empty()) out.back() = std::min(out.back(), b);
    } else {
        std::istringstream is(spec);
        std::string tok;
        while (std::getline(is, tok, ','))
            if (!tok.empty()) out.push_back(std::stod(tok));
    }
    if (out.empty()) throw std::invalid_argument("parse_grid: empty grid");
    return out;
}

inline std::vector<std::string> parse_code_list(const std::string& spec) {
    std::vector<std::string> out;
    std::istringstream is(spec);
    std::string tok;
    while (std::getline(is, tok, ','))
        if (!tok.empty()) out.push_back(tok);
    if (out.empty()) throw std::invalid_argument("parse_code_list: empty list");
    return out;
}

/// cat code id: "direct" or "repN" with odd N.
inline int cat_modes_from_string(const std::string& s) {
    if (s == "direct") return 1;
    if (s.rfind("rep", 0) == 0) {
        const int n = std::atoi(s.c_str() + 3);
        if (n >= 1 && n % 2 == 1) return n;
    }
    throw std::invalid_argument("unknown coherent-state code id: " + s);
}

namespace detail {

inline int worker_count() {
    if (const char* env = std::getenv("QECOV_WORKERS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? int(hc) : 1;
}

/// Index-parallel map with results stored by slot; output order never
/// depends on scheduling.
template <typename Fn>
inline void parallel_for(std::size_t n, Fn&& fn) {
    const int workers = std::min<std::size_t>(worker_count(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers) fn(i);
        });
    for (auto& t : pool) t.join();
}

inline std::string fmt12(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

inline void sort_rows(std::vector<SweepRow>& rows) {
    std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
        if (a.parameter != b.parameter) return a.parameter < b.parameter;
        return a.code < b.code;
    });
}

inline void common_metadata(SweepResult& res, const SweepConfig& cfg, const char* experiment) {
    res.metadata.emplace_back("experiment", experiment);
    res.metadata.emplace_back("version", kVersion);
    res.metadata.emplace_back("sampling", cfg.sampling.scheme ==
                                                  measures::SphereSampling::Scheme::quadrature
                                              ? "quadrature"
                                              : "monte_carlo");
    res.metadata.emplace_back("points", std::to_string(cfg.sampling.n_points));
    res.metadata.emplace_back("seed", std::to_string(cfg.seed));
    std::string codes;
    for (const auto& c : cfg.codes) codes += (codes.empty() ? "" : ",") + c;
    res.metadata.emplace_back("codes", codes);
}

}  // namespace detail

/// Codeword overlap and safeguarded concurrence for the discrete codes over
/// a gamma grid.
inline SweepResult run_fig1(const SweepConfig& cfg_in) {
    SweepConfig cfg = cfg_in;
    if (cfg.grid.empty()) cfg.grid = default_fig1_grid();
    if (cfg.codes.empty()) cfg.codes = default_fig1_codes();
    std::vector<codes::CodeSpec> specs;
    for (const auto& name : cfg.codes) {
        const auto id = codes::code_from_string(name);
        if (!id) throw std::invalid_argument("unknown code id: " + name);
        specs.push_back(codes::CodeSpec::make(*id));
    }
    for (double g : cfg.grid)
        if (g < 0.0 || g > 1.0)
            throw std::invalid_argument("fig1: gamma grid must lie in [0,1]");

    measures::SphereSampling sampling = cfg.sampling;
    sampling.seed = cfg.seed;
    SweepResult res;
    res.rows.resize(cfg.grid.size() * specs.size());
    detail::parallel_for(res.rows.size(), [&](std::size_t i) {
        const double g = cfg.grid[i / specs.size()];
        const auto& spec = specs[i % specs.size()];
        SweepRow row;
        row.parameter = g;
        row.code = codes::to_string(spec.id);
        row.f_cw = measures::codeword_overlap(spec, g, sampling).value;
        row.concurrence = measures::safeguarded_concurrence(spec, g);
        res.rows[i] = std::move(row);
    });
    detail::sort_rows(res.rows);
    detail::common_metadata(res, cfg, "fig1_gamma");
    return res;
}

/// Coherent-state codes over an alpha grid at fixed channel gamma.
inline SweepResult run_fig2(const SweepConfig& cfg_in) {
    SweepConfig cfg = cfg_in;
    if (cfg.grid.empty()) cfg.grid = default_fig2_grid();
    if (cfg.codes.empty()) cfg.codes = default_fig2_codes();
    if (!(cfg.gamma >= 0.0 && cfg.gamma <= 1.0))
        throw std::invalid_argument("fig2: gamma must lie in [0,1]");
    std::vector<int> modes;
    for (const auto& name : cfg.codes) modes.push_back(cat_modes_from_string(name));
    for (double a : cfg.grid)
        if (a < 0.0) throw std::invalid_argument("fig2: alpha grid must be nonnegative");

    measures::SphereSampling sampling = cfg.sampling;
    sampling.seed = cfg.seed;
    SweepResult res;
    res.rows.resize(cfg.grid.size() * modes.size());
    detail::parallel_for(res.rows.size(), [&](std::size_t i) {
        const double a = cfg.grid[i / modes.size()];
        const std::size_t c = i % modes.size();
        const cat::CatCode code{modes[c], a};
        SweepRow row;
        row.parameter = a;
        row.code = cfg.codes[c];
        row.f_cw = cat::cat_codeword_overlap(code, cfg.gamma, sampling).value;
        row.concurrence = cat::cat_concurrence(code, cfg.gamma);
        res.rows[i] = std::move(row);
    });
    detail::sort_rows(res.rows);
    detail::common_metadata(res, cfg, "fig2_alpha");
    res.metadata.emplace_back("gamma", detail::fmt12(cfg.gamma));
    return res;
}

inline void write_csv(const SweepResult& res, std::ostream& os) {
    os << kCsvHeader << "\n";
    for (const auto& r : res.rows)
        os << detail::fmt12(r.parameter) << "," << r.code << "," << detail::fmt12(r.f_cw)
           << "," << detail::fmt12(r.concurrence) << "\n";
}

inline std::string csv_string(const SweepResult& res) {
    std::ostringstream os;
    write_csv(res, os);
    return os.str();
}

inline SweepResult read_csv(std::istream& is) {
    SweepResult res;
    std::string line;
    if (!std::getline(is, line) || line != kCsvHeader)
        throw std::invalid_argument("read_csv: missing header line");
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string param, code, fcw, conc;
        if (!std::getline(ls, param, ',') || !std::getline(ls, code, ',') ||
            !std::getline(ls, fcw, ',') || !std::getline(ls, conc))
            throw std::invalid_argument("read_csv: malformed row: " + line);
        res.rows.push_back({std::stod(param), code, std::stod(fcw), std::stod(conc)});
    }
    return res;
}

/// Flat key=value file; '#' starts a comment.
inline std::map<std::string, std::string> read_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open config file: " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        const auto b = s.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    while (std::getline(is, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line is not key=value: " + line);
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

}  // namespace qecov::bench
