// Acceptance gate: one self-contained criterion per line, PASS/FAIL with the
// measured values. Run with no argument for the full battery or with a single
// criterion number (1..11) to run that criterion alone.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qplab/analysis.hpp"
#include "qplab/closed_forms.hpp"
#include "qplab/giant.hpp"
#include "qplab/params.hpp"
#include "qplab/scenario.hpp"
#include "qplab/solver1d.hpp"

namespace {

using namespace qplab;

struct Result {
    bool ok;
    std::string detail;
};

std::string g3(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

const EquationParams kSlow(3, 3.0, 4.0);

// Bump profile height (1 - ((r - center)/width)^2)_+^2 shared by several runs.
std::function<double(double)> bump(double center, double width, double height) {
    return [=](double r) {
        const double s = (r - center) / width;
        const double b = 1.0 - s * s;
        return b > 0.0 ? height * b * b : 0.0;
    };
}

// Sample times {1, 2, 5, 20, 40} merged with 12 log-spaced points on [10, 100],
// the layout shared by the decay, spread, and convergence-surrogate criteria.
std::vector<double> decay_samples() {
    std::vector<double> s = {1.0, 2.0, 5.0, 20.0, 40.0};
    for (int k = 0; k < 12; ++k) s.push_back(10.0 * std::pow(10.0, k / 11.0));
    std::sort(s.begin(), s.end());
    return s;
}

// The (3,3,4) bump relaxation run behind criteria 3, 4, and 11.
Trajectory run_slow_bump(RadialState& state, double T_end,
                         const std::vector<double>& samples, bool snapshots) {
    SolverConfig cfg;
    return run_until(state, T_end, cfg, kSlow, samples, snapshots);
}

// ------------------------------------------------------------- criterion 1

Result exponent_identities() {
    int points = 0, bad = 0;
    for (int n = 1; n <= 10; ++n) {
        for (int j = 0; j < 40; ++j) {
            const double p = 1.05 * std::pow(8.0 / 1.05, j / 39.0);
            for (int k = 0; k < 25; ++k) {
                const double q = 1.05 * std::pow(8.0 / 1.05, k / 24.0);
                ++points;
                const EquationParams params(n, p, q);
                const DerivedExponents ex = derive(params);
                const double d_f = (n - 1) * (q - 1.0) / (p - 1.0) + 1.0;
                const double l_f = d_f * (q - 2.0) + q;
                bool ok = std::abs(ex.d - d_f) <= 1e-12 * std::max(1.0, std::abs(d_f)) &&
                          std::abs(ex.lambda - l_f) <= 1e-12 * std::max(1.0, std::abs(l_f)) &&
                          std::abs(ex.sigma - (ex.d - n)) <= 1e-12;
                if (std::abs(ex.lambda) > 1e-9) {
                    ok = ok &&
                         std::abs(ex.alpha * ex.lambda - ex.d) <= 1e-12 * std::max(1.0, ex.d) &&
                         std::abs(ex.spread * ex.lambda - 1.0) <= 1e-12 &&
                         std::abs(ex.mu * ex.lambda - ex.sigma) <= 1e-12;
                    const bool direct = 2.0 * n < q * (n - 1) + 2.0 * p;
                    const bool via_lambda = ex.lambda > 0.0;
                    const bool via_d = q > 2.0 * ex.d / (ex.d + 1.0);
                    ok = ok && direct == via_lambda && via_lambda == via_d;
                }
                if (!ok) ++bad;
            }
        }
    }
    return {bad == 0, "points=" + std::to_string(points) +
                          " mismatches=" + std::to_string(bad)};
}

// ------------------------------------------------------------- criterion 2

Result barenblatt_exactness() {
    const BarenblattSpec spec{kSlow, 1.0, 1.5, 0.0};
    double err[2] = {0.0, 0.0};
    double drift = 0.0;
    const int cells[2] = {2000, 4000};
    for (int c = 0; c < 2; ++c) {
        const Grid grid = build_grid(8.0, cells[c], derive(kSlow).d);
        RadialState state = project([&](double r) { return barenblatt_eval(spec, r, 0.0); }, grid);
        const double m0 = d_mass(state);
        SolverConfig cfg;
        const Trajectory traj =
            run_until(state, 1.5, cfg, kSlow, {0.375, 0.75, 1.125, 1.5});
        for (double m : traj.mass) drift = std::max(drift, std::abs(m - m0) / m0);
        err[c] = sup_distance(state, [&](double r) { return barenblatt_eval(spec, r, state.t); });
    }
    const double ratio = err[0] / err[1];
    const bool ok = err[0] <= 2e-2 && ratio >= 1.6 && drift <= 1e-10;
    return {ok, "err_2000=" + g3(err[0]) + " err_4000=" + g3(err[1]) +
                    " ratio=" + g3(ratio) + " (>=1.6) mass_drift=" + g3(drift) +
                    " (<=1e-10)"};
}

// ------------------------------------------------------------- criterion 3

Result decay_and_spread() {
    const Grid grid = build_grid(10.0, 1600, derive(kSlow).d);
    RadialState state = project(bump(0.0, 1.0, 1.0), grid);
    const Trajectory traj = run_slow_bump(state, 100.0, decay_samples(), false);
    const FitResult dec = fit_decay_exponent(traj, 10.0, 100.0);
    const FitResult sup = fit_support_exponent(traj, kSlow, grid.R, 10.0, 100.0);

    const EquationParams heat(2, 2.0, 2.0);
    const Grid hgrid = build_grid(80.0, 800, derive(heat).d);
    RadialState hstate = project(bump(0.0, 1.0, 1.0), hgrid);
    std::vector<double> hsamples;
    for (int k = 0; k < 12; ++k) hsamples.push_back(10.0 * std::pow(10.0, k / 11.0));
    SolverConfig cfg;
    const Trajectory htraj = run_until(hstate, 100.0, cfg, heat, hsamples);
    const FitResult hdec = fit_decay_exponent(htraj, 10.0, 100.0);
    const double halpha = derive(heat).alpha;

    const bool ok = std::abs(dec.exponent - 1.0 / 3.0) <= 0.02 &&
                    std::abs(sup.exponent - 1.0 / 12.0) <= 0.012 &&
                    std::abs(hdec.exponent - halpha) <= 0.02;
    return {ok, "alpha_hat=" + g3(dec.exponent) + " (1/3 +- 0.02) spread_hat=" +
                    g3(sup.exponent) + " (1/12 +- 0.012) heat_alpha_hat=" +
                    g3(hdec.exponent) + " (alpha(2,2,2)=" + g3(halpha) + " +- 0.02)"};
}

// ------------------------------------------------------------- criterion 4

Result convergence_surrogate() {
    const Grid grid = build_grid(10.0, 1600, derive(kSlow).d);
    RadialState state = project(bump(0.0, 1.0, 1.0), grid);
    const Trajectory traj = run_slow_bump(state, 100.0, decay_samples(), true);
    const std::vector<double> picks = {5.0, 10.0, 20.0, 40.0};
    std::vector<double> cstar, renorm;
    for (double t : picks) {
        for (size_t k = 0; k < traj.times.size(); ++k) {
            if (std::abs(traj.times[k] - t) > 1e-9) continue;
            const RadialState at{grid, traj.snapshots[k], traj.times[k]};
            const BarenblattFit fit = best_fit_barenblatt(at, kSlow, t, 0.2, 0.7);
            cstar.push_back(fit.C_star);
            renorm.push_back(fit.renorm_error);
        }
    }
    bool ok = cstar.size() == picks.size();
    for (size_t k = 0; ok && k + 1 < renorm.size(); ++k)
        ok = renorm[k + 1] <= 1.05 * renorm[k];
    const double c_change = std::abs(cstar.back() - cstar[cstar.size() - 2]) /
                            cstar[cstar.size() - 2];
    ok = ok && c_change < 0.02;
    std::string detail = "renorm_err=";
    for (size_t k = 0; k < renorm.size(); ++k) detail += (k ? "|" : "") + g3(renorm[k]);
    detail += " (nonincreasing, 5% slack) C_star=" + g3(cstar.back()) +
              " change=" + g3(c_change) + " (<2% over 20->40)";
    return {ok, detail};
}

// ------------------------------------------------------------- criterion 5

Result fast_tail() {
    const EquationParams fast(3, 3.0, 1.5);
    const Grid grid = build_grid(80.0, 1600, derive(fast).d);
    RadialState state = project(bump(0.0, 1.0, 1.0), grid);
    SolverConfig cfg;
    cfg.outer_bc = OuterBC::DirichletZero;
    cfg.cfl_safety = 0.25;
    cfg.delta = 1e-6;
    run_until(state, 0.1, cfg, fast, {0.025, 0.05, 0.075, 0.1});
    const FitResult fit = tail_exponent(state, fast, 2.0, 6.0, cfg.delta);
    const bool ok = std::abs(fit.exponent - (-3.0)) <= 0.15;
    return {ok, "tail_hat=" + g3(fit.exponent) +
                    " (-3 +- 0.15) window=[2,6] of R=80 (floor and boundary "
                    "guards enforced by the fit)"};
}

// ------------------------------------------------------------- criterion 6

Result friendly_giant() {
    const GiantProfile prof = fixed_point(kSlow, 1e-10, 200, 1024);
    const double h_node = prof.radii[1] - prof.radii[0];
    const double v1 = prof.values.back();
    const double vp0 = std::abs(prof.values[1] - prof.values[0]) / h_node;
    const bool integral_ok = prof.report.integral_residual < 1e-8;
    const bool ode_ok = prof.report.ode_residual < 1e-6;
    const bool boundary_ok = v1 == 0.0;
    const bool slope_ok = vp0 <= 10.0 * h_node;

    const Grid grid = build_grid(1.0, 2000, derive(kSlow).d);
    RadialState state = project([&](double r) { return separable_eval(prof, r, 2.0); }, grid);
    SolverConfig cfg;
    cfg.outer_bc = OuterBC::DirichletZero;
    cfg.cfl_safety = 0.5;
    run_until(state, 2.0, cfg, kSlow, {0.5, 1.0, 1.5, 2.0});
    const double track = 2.0 * sup_distance(state, [&](double r) {
                             return separable_eval(prof, r, 4.0);
                         });
    const bool track_ok = track <= 5e-2;

    const bool ok = integral_ok && ode_ok && boundary_ok && slope_ok && track_ok;
    return {ok, "integral_res=" + g3(prof.report.integral_residual) +
                    " (<1e-8) ode_res=" + g3(prof.report.ode_residual) +
                    " (<1e-6) V(1)=" + g3(v1) + " |V'(0)|=" + g3(vp0) +
                    " (<=10h=" + g3(10.0 * h_node) + ") track_err=" + g3(track) +
                    " (<=5e-2)"};
}

// ------------------------------------------------------------- criterion 7

Result monotonicity_three_data() {
    const std::vector<std::function<double(double)>> data = {
        [](double r) { return 0.15 * (1.0 - r * r); },
        [](double r) { return 0.25 * (1.0 - r * r) * (1.0 - r * r); },
        [](double r) {
            return 0.10 * (1.0 - r * r * r * r) +
                   0.05 * (1.0 - r * r) * (1.0 - r * r);
        }};
    const Grid grid = build_grid(1.0, 400, derive(kSlow).d);
    SolverConfig cfg;
    cfg.outer_bc = OuterBC::DirichletZero;
    bool ok = true;
    std::string detail = "min_defect/scale=";
    for (size_t j = 0; j < data.size(); ++j) {
        RadialState state = project(data[j], grid);
        const Trajectory traj =
            run_until(state, 8.0, cfg, kSlow, {0.5, 1.0, 2.0, 4.0, 8.0}, true);
        const MonotonicityReport rep = monotonicity_defect(traj, kSlow);
        ok = ok && rep.defect >= -1e-6 * rep.scale;
        detail += (j ? "|" : "") + g3(rep.defect / rep.scale);
    }
    return {ok, detail + " (>= -1e-6 each)"};
}

// ------------------------------------------------------------- criterion 8

Result contraction_comparison() {
    std::mt19937_64 rng(8);
    const auto uniform = [&rng]() { return (rng() >> 11) * 0x1.0p-53; };
    const Grid grid = build_grid(4.0, 200, derive(kSlow).d);
    SolverConfig cfg;
    const std::vector<double> samples = {0.125, 0.25, 0.375, 0.5};
    const auto l2w = [&](const std::vector<double>& a, const std::vector<double>& b) {
        double acc = 0.0;
        for (int i = 0; i < grid.cells; ++i) {
            const double dv = b[i] - a[i];
            acc += dv * dv * grid.w[i];
        }
        return std::sqrt(acc);
    };
    const auto l4w = [&](const std::vector<double>& a, const std::vector<double>& b) {
        double acc = 0.0;
        for (int i = 0; i < grid.cells; ++i) {
            const double dv = b[i] - a[i];
            acc += dv * dv * dv * dv * grid.w[i];
        }
        return std::pow(acc, 0.25);
    };
    int order_bad = 0, l2_bad = 0, l4_bad = 0;
    for (int pair = 0; pair < 20; ++pair) {
        std::vector<std::function<double(double)>> lows;
        for (int b = 0; b < 2; ++b)
            lows.push_back(bump(2.2 * uniform(), 0.4 + 0.8 * uniform(),
                                0.15 + 0.6 * uniform()));
        const auto extra = bump(2.2 * uniform(), 0.4 + 0.8 * uniform(),
                                0.15 + 0.6 * uniform());
        RadialState lo = project([&](double r) { return lows[0](r) + lows[1](r); }, grid);
        RadialState hi = project(
            [&](double r) { return lows[0](r) + lows[1](r) + extra(r); }, grid);
        double d2 = l2w(lo.u, hi.u), d4 = l4w(lo.u, hi.u);
        const auto [ta, tb] = run_pair(lo, hi, 0.5, cfg, kSlow, samples, true);
        for (size_t k = 0; k < ta.times.size(); ++k) {
            for (int i = 0; i < grid.cells; ++i)
                if (ta.snapshots[k][i] > tb.snapshots[k][i]) ++order_bad;
            const double n2 = l2w(ta.snapshots[k], tb.snapshots[k]);
            const double n4 = l4w(ta.snapshots[k], tb.snapshots[k]);
            if (n2 > d2 * (1.0 + 1e-8)) ++l2_bad;
            if (n4 > d4 * (1.0 + 1e-8)) ++l4_bad;
            d2 = n2;
            d4 = n4;
        }
    }
    const bool ok = order_bad == 0 && l2_bad == 0 && l4_bad == 0;
    return {ok, "pairs=20 order_violations=" + std::to_string(order_bad) +
                    " l2w_increases=" + std::to_string(l2_bad) +
                    " l4w_increases=" + std::to_string(l4_bad) +
                    " (1e-8 relative slack)"};
}

// ------------------------------------------------------------- criterion 9

Result sturmian_suite() {
    namespace fs = std::filesystem;
    const fs::path dir = QPLAB_SCENARIO_DIR;
    const fs::path out_root = fs::temp_directory_path() / "qplab_acceptance_sturmian";
    fs::remove_all(out_root);
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.path().extension() == ".ini") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    int ran = 0, sturmian_ok = 0, sturmian_all = 0;
    bool change_seen = false, change_ok = false, clean = true;
    for (const fs::path& f : files) {
        const Scenario sc = parse_scenario(f.string());
        bool relevant = false;
        for (const CheckSpec& c : sc.checks)
            relevant = relevant || c.name == "sturmian_nonincreasing" || c.name == "change_once";
        if (!relevant) continue;
        ++ran;
        const RunOutcome outcome = run_scenario(sc, out_root.string());
        if (outcome.exit_code >= 2) clean = false;
        for (const CheckOutcome& c : outcome.checks) {
            if (c.line.rfind("sturmian_nonincreasing:", 0) == 0) {
                ++sturmian_all;
                if (c.passed) ++sturmian_ok;
            }
            if (c.line.rfind("change_once:", 0) == 0) {
                change_seen = true;
                change_ok = c.passed;
            }
        }
    }
    const bool ok = clean && ran > 0 && sturmian_ok == sturmian_all &&
                    change_seen && change_ok;
    return {ok, "scenarios=" + std::to_string(ran) + " sturmian_checks=" +
                    std::to_string(sturmian_ok) + "/" + std::to_string(sturmian_all) +
                    " change_once(-+,+-)=" +
                    (change_seen ? (change_ok ? "PASS" : "FAIL") : "missing")};
}

// ------------------------------------------------------------ criterion 10

Result extinction_boundary() {
    const EquationParams low(3, 1.3, 1.3);
    const Grid ball = build_grid(1.0, 24, derive(low).d);
    RadialState state = project(bump(0.0, 1.0, 1.0), ball);
    SolverConfig cfg;
    cfg.outer_bc = OuterBC::DirichletZero;
    cfg.cfl_safety = 0.3;
    cfg.delta = 1e-8;
    std::vector<double> samples;
    for (int k = 1; k <= 10; ++k) samples.push_back(k);
    const Trajectory traj = run_until(state, 10.0, cfg, low, samples, false, 5e-7);
    const std::optional<double> t_ext = extinction_time(traj, 1e-6);

    const EquationParams high(3, 1.7, 1.7);
    const Grid wide = build_grid(32.0, 800, derive(high).d);
    RadialState free_state = project(bump(0.0, 1.0, 1.0), wide);
    SolverConfig wcfg;
    wcfg.outer_bc = OuterBC::DirichletZero;
    wcfg.cfl_safety = 0.25;
    wcfg.delta = 3e-5;
    const double m0 = d_mass(free_state);
    const Trajectory wtraj =
        run_until(free_state, 0.5, wcfg, high, {0.125, 0.25, 0.375, 0.5});
    double drift = 0.0;
    for (double m : wtraj.mass) drift = std::max(drift, std::abs(m - m0) / m0);

    const bool ok = t_ext.has_value() && *t_ext < 10.0 && drift <= 1e-4;
    return {ok, "p=q=1.3 extinct_at=" + (t_ext ? g3(*t_ext) : std::string("none")) +
                    " (finite, sup<1e-6) p=q=1.7 mass_drift=" + g3(drift) +
                    " (<=1e-4, delta=3e-5 slack included)"};
}

// ------------------------------------------------------------ criterion 11

Result harnack_stability() {
    const std::vector<double> probes = {0.1, 0.35, 0.6, 0.85, 1.1};
    std::vector<double> mu[2];
    const int cells[2] = {800, 1600};
    SolverConfig cfg;
    for (int c = 0; c < 2; ++c) {
        const Grid grid = build_grid(6.0, cells[c], derive(kSlow).d);
        RadialState state = project(bump(0.0, 1.0, 1.0), grid);
        run_until(state, 5.0, cfg, kSlow, {5.0});
        for (double x0 : probes) {
            const int idx = static_cast<int>(std::lround(x0 / grid.h - 0.5));
            const HarnackReport rep =
                harnack_probe(state, kSlow, cfg, idx, 0.1, 1.0, 10.0);
            mu[c].push_back(rep.mu);
        }
    }
    bool ok = true;
    double worst = 0.0;
    std::string detail = "mu=";
    for (size_t j = 0; j < probes.size(); ++j) {
        ok = ok && std::isfinite(mu[0][j]) && std::isfinite(mu[1][j]);
        const double rel = std::abs(mu[0][j] - mu[1][j]) / mu[1][j];
        worst = std::max(worst, rel);
        detail += (j ? "|" : "") + g3(mu[1][j]);
    }
    ok = ok && worst < 0.2;
    return {ok, detail + " mesh_800_vs_1600_max_rel=" + g3(worst) + " (<20%)"};
}

// -------------------------------------------------------------------- main

struct Criterion {
    int id;
    const char* name;
    Result (*run)();
};

const Criterion kCriteria[] = {
    {1, "exponent identities", exponent_identities},
    {2, "barenblatt exactness", barenblatt_exactness},
    {3, "decay and spread rates", decay_and_spread},
    {4, "convergence surrogate", convergence_surrogate},
    {5, "fast-regime tail", fast_tail},
    {6, "friendly giant", friendly_giant},
    {7, "monotonicity estimate", monotonicity_three_data},
    {8, "contraction and comparison", contraction_comparison},
    {9, "sturmian suite", sturmian_suite},
    {10, "extinction boundary", extinction_boundary},
    {11, "harnack probe", harnack_stability},
};

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    if (argc > 1) {
        only = std::atoi(argv[1]);
        if (argc > 2 || only < 1 || only > 11) {
            std::fprintf(stderr, "usage: %s [criterion 1..11]\n", argv[0]);
            return 2;
        }
    }
    int ran = 0, passed = 0;
    for (const Criterion& c : kCriteria) {
        if (only && c.id != only) continue;
        ++ran;
        Result res{false, ""};
        try {
            res = c.run();
        } catch (const std::exception& e) {
            res.detail = std::string("exception: ") + e.what();
        }
        if (res.ok) ++passed;
        std::printf("criterion %2d (%s): %s %s\n", c.id, c.name,
                    res.ok ? "PASS" : "FAIL", res.detail.c_str());
        std::fflush(stdout);
    }
    if (!only) std::printf("acceptance: %d/%d criteria passed\n", passed, ran);
    return passed == ran ? 0 : 1;
}
