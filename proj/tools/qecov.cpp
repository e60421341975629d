// Command-line runner for the photonic-code benchmarks: overlap/concurrence
// sweeps, the Gaussian no-go verification, and SVG rendering of sweep CSVs.

#include <CLI11.hpp>
#include <cstring>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "qecov/plot.hpp"
#include "qecov/sweep.hpp"

namespace {

using qecov::bench::SweepConfig;
using qecov::bench::SweepResult;

struct SweepFlags {
    std::string grid;
    std::string codes;
    std::string sampling = "quadrature";
    int points = 1024;
    std::uint64_t seed = 0;
    double gamma = 0.32;
    std::string out;
    std::string config_path;
};

qecov::measures::SphereSampling make_sampling(const SweepFlags& f) {
    qecov::measures::SphereSampling s;
    if (f.sampling == "quadrature")
        s.scheme = qecov::measures::SphereSampling::Scheme::quadrature;
    else if (f.sampling == "monte_carlo")
        s.scheme = qecov::measures::SphereSampling::Scheme::monte_carlo;
    else
        throw std::invalid_argument("--sampling must be quadrature or monte_carlo");
    s.n_points = f.points;
    s.seed = f.seed;
    return s;
}

void write_result(const SweepResult& res, const std::string& out) {
    if (out.empty()) {
        qecov::bench::write_csv(res, std::cout);
        for (const auto& [k, v] : res.metadata) std::cerr << "# " << k << ": " << v << "\n";
        return;
    }
    std::ofstream os(out, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open output file: " + out);
    qecov::bench::write_csv(res, os);
    std::ofstream meta(out + ".meta", std::ios::binary);
    for (const auto& [k, v] : res.metadata) meta << k << " = " << v << "\n";
    std::cout << "wrote " << out << " (" << res.rows.size() << " rows)\n";
}

void add_sweep_flags(CLI::App* cmd, SweepFlags& f,
                     const std::map<std::string, std::string>& cfg, bool fig2) {
    auto def = [&](const char* key, auto fallback) {
        using T = decltype(fallback);
        auto it = cfg.find(key);
        if (it == cfg.end()) return fallback;
        if constexpr (std::is_same_v<T, std::string>) return it->second;
        else if constexpr (std::is_same_v<T, int>) return std::stoi(it->second);
        else if constexpr (std::is_same_v<T, double>) return std::stod(it->second);
        else if constexpr (std::is_same_v<T, std::uint64_t>)
            return std::uint64_t(std::stoull(it->second));
        else return fallback;
    };
    f.grid = def(fig2 ? "alpha-grid" : "gamma-grid", std::string());
    f.codes = def("codes", std::string());
    f.sampling = def("sampling", std::string("quadrature"));
    f.points = def("points", 1024);
    f.seed = def("seed", std::uint64_t(0));
    f.out = def("out", std::string());
    if (fig2) {
        f.gamma = def("gamma", 0.32);
        cmd->add_option("--alpha-grid", f.grid, "alpha grid, start:step:stop or comma list");
        cmd->add_option("--gamma", f.gamma, "fixed channel loss parameter");
    } else {
        cmd->add_option("--gamma-grid", f.grid, "gamma grid, start:step:stop or comma list");
    }
    cmd->add_option("--codes", f.codes, "comma-separated code ids");
    cmd->add_option("--sampling", f.sampling, "quadrature or monte_carlo");
    cmd->add_option("--points", f.points, "sphere sample count");
    cmd->add_option("--seed", f.seed, "RNG seed (monte_carlo sampling)");
    cmd->add_option("--out", f.out, "output CSV path (stdout when omitted)");
    cmd->add_option("--config", f.config_path, "flat key=value config file; flags win");
}

SweepConfig make_config(const SweepFlags& f, bool fig2) {
    SweepConfig cfg;
    cfg.experiment = fig2 ? SweepConfig::Experiment::fig2_alpha
                          : SweepConfig::Experiment::fig1_gamma;
    if (!f.grid.empty()) cfg.grid = qecov::bench::parse_grid(f.grid);
    if (!f.codes.empty()) cfg.codes = qecov::bench::parse_code_list(f.codes);
    cfg.sampling = make_sampling(f);
    cfg.seed = f.seed;
    cfg.gamma = f.gamma;
    cfg.output_path = f.out;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"codeword-overlap and entanglement benchmarks for lossy photonic codes"};
    app.require_subcommand(1);

    // config file values act as defaults; explicit flags always win
    std::map<std::string, std::string> cfgmap;
    for (int i = 1; i + 1 < argc; ++i)
        if (std::strcmp(argv[i], "--config") == 0)
            cfgmap = qecov::bench::read_config_file(argv[i + 1]);

    SweepFlags fig1_flags, fig2_flags;
    auto* fig1 = app.add_subcommand(
        "fig1", "overlap and concurrence vs gamma for the discrete photon-loss codes");
    add_sweep_flags(fig1, fig1_flags, cfgmap, false);
    auto* fig2 = app.add_subcommand(
        "fig2", "overlap and concurrence vs alpha for the coherent-state codes");
    add_sweep_flags(fig2, fig2_flags, cfgmap, true);

    auto* nogo = app.add_subcommand(
        "nogo", "randomized verification that Gaussian channels never reduce fidelity");
    qecov::gaussian::NogoOptions nopt;
    std::string nogo_out, nogo_config;
    {
        auto it = cfgmap.find("samples");
        if (it != cfgmap.end()) nopt.n_samples = std::stoull(it->second);
        it = cfgmap.find("seed");
        if (it != cfgmap.end()) nopt.seed = std::stoull(it->second);
        it = cfgmap.find("out");
        if (it != cfgmap.end()) nogo_out = it->second;
    }
    nogo->add_option("--samples", nopt.n_samples, "number of random instances");
    nogo->add_option("--seed", nopt.seed, "RNG seed");
    nogo->add_option("--boundary-fraction", nopt.boundary_fraction,
                     "fraction of quantum-limited channels det N = (det M - 1)^2");
    nogo->add_option("--symplectic-fraction", nopt.symplectic_fraction,
                     "fraction of symplectic channels (N = 0, det M = 1)");
    nogo->add_flag("--symplectic-only", nopt.symplectic_only,
                   "restrict all samples to symplectic channels");
    nogo->add_option("--out", nogo_out, "report path (stdout when omitted)");
    nogo->add_option("--config", nogo_config, "flat key=value config file; flags win");

    auto* plot = app.add_subcommand("plot", "render a sweep CSV as SVG panels");
    std::string plot_in, plot_prefix, plot_xlabel = "parameter";
    plot->add_option("--in", plot_in, "input CSV from fig1/fig2")->required();
    plot->add_option("--out", plot_prefix, "output path prefix")->required();
    plot->add_option("--x-label", plot_xlabel, "x axis label");

    CLI11_PARSE(app, argc, argv);

    try {
        if (fig1->parsed()) {
            write_result(qecov::bench::run_fig1(make_config(fig1_flags, false)),
                         fig1_flags.out);
        } else if (fig2->parsed()) {
            write_result(qecov::bench::run_fig2(make_config(fig2_flags, true)),
                         fig2_flags.out);
        } else if (nogo->parsed()) {
            const auto report = qecov::gaussian::verify_nogo(nopt);
            if (nogo_out.empty()) {
                std::cout << report.to_text();
            } else {
                std::ofstream os(nogo_out, std::ios::binary);
                if (!os) throw std::runtime_error("cannot open output file: " + nogo_out);
                os << report.to_text();
                std::cout << "wrote " << nogo_out << "\n";
            }
            if (report.violations > 0) {
                std::cerr << "no-go violations found: " << report.violations << "\n";
                return 3;
            }
        } else if (plot->parsed()) {
            std::ifstream is(plot_in);
            if (!is) throw std::runtime_error("cannot open input file: " + plot_in);
            const SweepResult res = qecov::bench::read_csv(is);
            qecov::bench::emit_plot(res, plot_prefix, plot_xlabel);
            std::cout << "wrote " << plot_prefix << "_overlap.svg and " << plot_prefix
                      << "_concurrence.svg\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
