// qplab: command-line front end to the q-parabolic laboratory. Talks to the
// core exclusively through the C API in qplab.h.

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "qplab.h"

namespace {

std::string g17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string resolve_out_root(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("QPLAB_OUT_ROOT"); env && *env) return env;
    return "out";
}

int die(const std::string& message, int code) {
    std::cerr << "qplab: " << message << "\n";
    return code;
}

const char* regime_name(int regime) {
    switch (regime) {
        case 0: return "slow";
        case 1: return "linear";
        case 2: return "fast";
    }
    return "?";
}

int cmd_params(int n, double p, double q) {
    qpl_derived ex{};
    if (qpl_params_derive(n, p, q, &ex) != QPL_OK) return die(qpl_last_error(), 2);
    std::cout << "n = " << n << "\np = " << g17(p) << "\nq = " << g17(q) << "\n"
              << "d = " << g17(ex.d) << "\nlambda = " << g17(ex.lambda) << "\n"
              << "alpha = " << g17(ex.alpha) << "\nspread = " << g17(ex.spread) << "\n"
              << "sigma = " << g17(ex.sigma) << "\nmu = " << g17(ex.mu) << "\n"
              << "range_condition = " << (ex.range_condition ? "true" : "false") << "\n"
              << "regime = " << regime_name(ex.regime) << "\n";
    return 0;
}

int cmd_barenblatt(int n, double p, double q, double C, double t_delay, double t,
                   double rmax, int points, const std::string& out_path) {
    qpl_derived ex{};
    if (qpl_params_derive(n, p, q, &ex) != QPL_OK) return die(qpl_last_error(), 2);

    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!out_path.empty()) {
        std::filesystem::path parent = std::filesystem::path(out_path).parent_path();
        if (!parent.empty()) std::filesystem::create_directories(parent);
        file.open(out_path, std::ios::binary);
        if (!file) return die("cannot open " + out_path, 2);
        os = &file;
    }

    *os << "# n = " << n << "\n# p = " << g17(p) << "\n# q = " << g17(q)
        << "\n# C = " << g17(C) << "\n# t_delay = " << g17(t_delay)
        << "\n# t = " << g17(t) << "\n";
    double support = 0.0;
    if (qpl_barenblatt_support(n, p, q, C, t_delay, t, &support) == QPL_OK)
        *os << "# support = " << g17(support) << "\n";
    double mass = 0.0;
    if (qpl_barenblatt_mass(n, p, q, C, &mass) != QPL_OK)
        return die(qpl_last_error(), 2);
    *os << "# d_mass = " << g17(mass) << "\n";
    *os << "r,u\n";
    for (int k = 0; k < points; ++k) {
        const double r = rmax * k / (points - 1);
        double u = 0.0;
        if (qpl_barenblatt_eval(n, p, q, C, t_delay, r, t, &u) != QPL_OK)
            return die(qpl_last_error(), 2);
        *os << g17(r) << "," << g17(u) << "\n";
    }
    if (!out_path.empty()) std::cout << "wrote " << out_path << "\n";
    return 0;
}

int cmd_giant(int n, double p, double q, int nodes, double tol, int max_iter,
              const std::string& out_path) {
    qpl_giant* handle = nullptr;
    if (qpl_giant_solve(n, p, q, nodes, tol, max_iter, &handle) != QPL_OK)
        return die(qpl_last_error(), 2);
    qpl_giant_report report{};
    qpl_giant_get_report(handle, &report);
    int node_count = 0;
    qpl_giant_nodes(handle, &node_count);
    std::cout << "nodes = " << node_count << "\n"
              << "iterations = " << report.iterations << "\n"
              << "final_change = " << g17(report.final_change) << "\n"
              << "integral_residual = " << g17(report.integral_residual) << "\n"
              << "ode_residual = " << g17(report.ode_residual) << "\n"
              << "value_at_origin = " << g17(report.value_at_origin) << "\n";
    int rc = 0;
    if (!out_path.empty()) {
        std::filesystem::path parent = std::filesystem::path(out_path).parent_path();
        if (!parent.empty()) std::filesystem::create_directories(parent);
        if (qpl_giant_export_csv(handle, out_path.c_str()) != QPL_OK)
            rc = die(qpl_last_error(), 2);
        else
            std::cout << "wrote " << out_path << "\n";
    }
    qpl_giant_free(handle);
    return rc;
}

// Prints the check lines and verdict from a finished run's summary.txt.
void print_run_summary(const std::string& out_dir) {
    std::ifstream summary(std::filesystem::path(out_dir) / "summary.txt");
    std::string line;
    while (std::getline(summary, line)) {
        if (line.rfind("check ", 0) == 0 || line.rfind("overall ", 0) == 0)
            std::cout << line << "\n";
    }
}

int run_one(const std::string& config, const std::string& out_root, long long seed,
            bool strict, bool quiet) {
    char out_dir[4096];
    const int rc =
        qpl_scenario_run(config.c_str(), out_root.c_str(), seed, strict ? 1 : 0,
                         out_dir, sizeof out_dir);
    if (rc == 2) return die(std::string("config error: ") + qpl_last_error(), 2);
    if (rc == 3) return die(std::string("solver failure: ") + qpl_last_error(), 3);
    if (!quiet) {
        std::cout << "artifacts: " << out_dir << "\n";
        print_run_summary(out_dir);
    }
    return rc;
}

int cmd_simulate(const std::string& config, const std::string& out_flag, long long seed,
                 bool strict) {
    return run_one(config, resolve_out_root(out_flag), seed, strict, false);
}

int cmd_sweep(const std::string& dir, const std::string& out_flag, long long seed,
              bool strict, int jobs) {
    namespace fs = std::filesystem;
    std::vector<std::string> configs;
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(dir, ec)) {
        if (!entry.is_regular_file()) continue;
        const std::string ext = entry.path().extension().string();
        if (ext == ".ini" || ext == ".cfg" || ext == ".scenario")
            configs.push_back(entry.path().string());
    }
    if (ec) return die("cannot read directory " + dir, 2);
    if (configs.empty()) return die("no scenario files (*.ini, *.cfg) in " + dir, 2);
    std::sort(configs.begin(), configs.end());

    const std::string out_root = resolve_out_root(out_flag);
    std::vector<int> codes(configs.size(), 0);
    std::vector<std::string> reasons(configs.size());

    const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(configs.size())));
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t k = next.fetch_add(1); k < configs.size(); k = next.fetch_add(1)) {
            char out_dir[4096];
            codes[k] = qpl_scenario_run(configs[k].c_str(), out_root.c_str(), seed,
                                        strict ? 1 : 0, out_dir, sizeof out_dir);
            if (codes[k] != 0) reasons[k] = qpl_last_error();
        }
    };
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (std::thread& th : pool) th.join();
    }

    int worst = 0;
    for (size_t k = 0; k < configs.size(); ++k) {
        std::cout << (codes[k] == 0 ? "PASS " : "FAIL ") << configs[k];
        if (codes[k] != 0) std::cout << " (exit " << codes[k] << ": " << reasons[k] << ")";
        std::cout << "\n";
        worst = std::max(worst, codes[k]);
    }
    std::cout << "sweep: " << configs.size() << " scenarios, "
              << std::count(codes.begin(), codes.end(), 0) << " passed\n";
    return worst;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for the gradient-diffusion equation "
                 "u_t = |Du|^{q-2} (Lap u + (p-2) Lap_inf u)"};
    app.set_version_flag("--version", std::string(qpl_version()));
    app.require_subcommand(1);

    int n = 3;
    double p = 3.0, q = 4.0;
    const auto add_params = [&](CLI::App* cmd) {
        cmd->add_option("-n,--dimension", n, "spatial dimension")->capture_default_str();
        cmd->add_option("-p,--p", p, "ellipticity parameter p > 1")->capture_default_str();
        cmd->add_option("-q,--q", q, "gradient exponent q > 1")->capture_default_str();
    };

    CLI::App* params_cmd = app.add_subcommand("params", "derived exponents for (n, p, q)");
    add_params(params_cmd);

    CLI::App* bb_cmd =
        app.add_subcommand("barenblatt", "sample a source-type solution profile");
    add_params(bb_cmd);
    double C = 1.0, t_delay = 0.0, t = 1.0, rmax = 4.0;
    int points = 201;
    std::string bb_out;
    bb_cmd->add_option("--C", C, "mass constant")->capture_default_str();
    bb_cmd->add_option("--t-delay", t_delay, "age offset")->capture_default_str();
    bb_cmd->add_option("--t", t, "sample time")->capture_default_str();
    bb_cmd->add_option("--rmax", rmax, "largest radius")->capture_default_str();
    bb_cmd->add_option("--points", points, "sample count")
        ->check(CLI::Range(2, 1000000))
        ->capture_default_str();
    bb_cmd->add_option("-o,--out", bb_out, "write CSV here instead of stdout");

    CLI::App* giant_cmd =
        app.add_subcommand("giant", "friendly-giant profile on the unit ball (q > 2)");
    add_params(giant_cmd);
    int nodes = 0, max_iter = 0;
    double tol = 0.0;
    std::string giant_out;
    giant_cmd->add_option("--nodes", nodes, "radial nodes (0 = default 1024)")
        ->capture_default_str();
    giant_cmd->add_option("--tol", tol, "stopping tolerance (0 = default 1e-10)")
        ->capture_default_str();
    giant_cmd->add_option("--max-iter", max_iter, "iteration cap (0 = default 200)")
        ->capture_default_str();
    giant_cmd->add_option("-o,--out", giant_out, "write the profile CSV here");

    CLI::App* sim_cmd = app.add_subcommand("simulate", "run one scenario file");
    std::string config, out_flag;
    long long seed = -1;
    bool strict = false;
    sim_cmd->add_option("config", config, "scenario file")->required();
    sim_cmd->add_option("-o,--out", out_flag,
                        "artifact root (default: $QPLAB_OUT_ROOT or ./out)");
    sim_cmd->add_option("--seed", seed, "override the scenario seed");
    sim_cmd->add_flag("--strict", strict, "reserved: promote warnings to failures");

    CLI::App* sweep_cmd =
        app.add_subcommand("sweep", "run every scenario file in a directory");
    std::string sweep_dir, sweep_out;
    long long sweep_seed = -1;
    bool sweep_strict = false;
    int jobs = 1;
    sweep_cmd->add_option("dir", sweep_dir, "directory of scenario files")->required();
    sweep_cmd->add_option("-o,--out", sweep_out,
                          "artifact root (default: $QPLAB_OUT_ROOT or ./out)");
    sweep_cmd->add_option("-j,--jobs", jobs, "parallel workers")
        ->check(CLI::Range(1, 256))
        ->capture_default_str();
    sweep_cmd->add_option("--seed", sweep_seed, "override every scenario seed");
    sweep_cmd->add_flag("--strict", sweep_strict, "reserved: promote warnings to failures");

    CLI11_PARSE(app, argc, argv);

    if (params_cmd->parsed()) return cmd_params(n, p, q);
    if (bb_cmd->parsed()) return cmd_barenblatt(n, p, q, C, t_delay, t, rmax, points, bb_out);
    if (giant_cmd->parsed()) return cmd_giant(n, p, q, nodes, tol, max_iter, giant_out);
    if (sim_cmd->parsed()) return cmd_simulate(config, out_flag, seed, strict);
    if (sweep_cmd->parsed())
        return cmd_sweep(sweep_dir, sweep_out, sweep_seed, sweep_strict, jobs);
    return 0;
}
