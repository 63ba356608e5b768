#include "qplab/scenario.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <utility>

#include "qplab/analysis.hpp"
#include "qplab/closed_forms.hpp"
#include "qplab/csv.hpp"
#include "qplab/giant.hpp"
#include "qplab/lap_number.hpp"

namespace qplab {

namespace {

// ---------------------------------------------------------------- parsing

struct Entry {
    std::string section, key, value;
};

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<Entry> tokenize(const std::string& text) {
    std::vector<Entry> entries;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(lineno) + ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        entries.push_back({section, trim(line.substr(0, eq)), trim(line.substr(eq + 1))});
    }
    return entries;
}

double to_number(const Entry& e) {
    try {
        size_t used = 0;
        const double v = std::stod(e.value, &used);
        if (trim(e.value.substr(used)).empty()) return v;
    } catch (const std::exception&) {
    }
    throw ConfigError(e.section + "." + e.key + ": '" + e.value + "' is not a number");
}

int to_int(const Entry& e) {
    const double v = to_number(e);
    if (v != std::floor(v)) throw ConfigError(e.section + "." + e.key + ": expected an integer");
    return static_cast<int>(v);
}

std::vector<double> to_numbers(const Entry& e) {
    std::istringstream ss(e.value);
    std::vector<double> out;
    std::string tok;
    while (ss >> tok) {
        try {
            size_t used = 0;
            const double v = std::stod(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            out.push_back(v);
        } catch (const std::exception&) {
            throw ConfigError(e.section + "." + e.key + ": '" + tok + "' is not a number");
        }
    }
    return out;
}

struct ArgSpec {
    size_t min_args, max_args;
};

const std::pair<const char*, ArgSpec> kKnownChecks[] = {
    {"d_mass_conserved", {1, 1}},    // rel_tol
    {"track_barenblatt", {1, 1}},    // sup_tol
    {"track_giant", {1, 1}},         // sup_tol on t'^{1/(q-2)} u - V
    {"decay_exponent", {4, 4}},      // t_min t_max expected tol
    {"support_exponent", {4, 4}},    // t_min t_max expected tol
    {"tail_exponent", {4, 4}},       // r_lo r_hi expected tol
    {"extinction", {1, 1}},          // threshold
    {"no_extinction", {1, 1}},       // threshold
    {"monotonicity", {1, 1}},        // tol_factor on -defect/scale
    {"alexandrov", {2, 2}},          // R0 tol_factor
    {"sturmian_nonincreasing", {1, 8}},  // one or more delays
    {"change_once", {4, 5}},         // t1_lo t1_hi t2_lo t2_hi [grid_count]
};

void validate_check_preconditions(const Scenario& sc) {
    const Regime reg = regime(sc.params);
    for (const CheckSpec& c : sc.checks) {
        bool known = false;
        for (const auto& [name, spec] : kKnownChecks) {
            if (c.name != name) continue;
            known = true;
            if (c.args.size() < spec.min_args || c.args.size() > spec.max_args)
                throw ConfigError("check " + c.name + ": wrong argument count");
        }
        if (!known) throw ConfigError("unknown check '" + c.name + "'");

        if (c.name == "tail_exponent" && (reg != Regime::Fast || !range_condition(sc.params)))
            throw ConfigError("check tail_exponent: requires the fast regime under the range condition");
        if (c.name == "support_exponent" && reg != Regime::Slow)
            throw ConfigError("check support_exponent: requires the slow regime");
        if ((c.name == "monotonicity" || c.name == "track_giant") && !(sc.params.q > 2.0))
            throw ConfigError("check " + c.name + ": requires q > 2");
        if (c.name == "monotonicity" && sc.solver.outer_bc != OuterBC::DirichletZero)
            throw ConfigError("check monotonicity: requires a DirichletZero run");
        if (c.name == "track_barenblatt" && sc.initial.kind != InitialSpec::Kind::Barenblatt)
            throw ConfigError("check track_barenblatt: initial data must be barenblatt");
        if (c.name == "track_giant" && sc.initial.kind != InitialSpec::Kind::Giant)
            throw ConfigError("check track_giant: initial data must be giant");
        if ((c.name == "sturmian_nonincreasing" || c.name == "change_once")) {
            if (reg != Regime::Linear && !range_condition(sc.params))
                throw ConfigError("check " + c.name + ": no source-type family below the range condition");
            if (sc.samples.size() < 3)
                throw ConfigError("check " + c.name + ": needs at least 3 sample times");
        }
        if (c.name == "change_once" && reg != Regime::Slow)
            throw ConfigError("check change_once: requires the slow regime");
        if (c.name == "alexandrov" && !(c.args[0] < (sc.ball ? 1.0 : sc.R)))
            throw ConfigError("check alexandrov: R0 must lie inside the grid");
    }
}

}  // namespace

Scenario parse_scenario_text(const std::string& text, const std::string& fallback_name) {
    const std::vector<Entry> entries = tokenize(text);

    // [params] first: everything else hangs off a valid parameter set.
    int n = 0;
    double p = 0.0, q = 0.0;
    bool have_n = false, have_p = false, have_q = false;
    for (const Entry& e : entries) {
        if (e.section != "params") continue;
        if (e.key == "n") n = to_int(e), have_n = true;
        else if (e.key == "p") p = to_number(e), have_p = true;
        else if (e.key == "q") q = to_number(e), have_q = true;
        else throw ConfigError("params." + e.key + ": unknown key");
    }
    if (!have_n || !have_p || !have_q)
        throw ConfigError("params: n, p, q are all required");
    Scenario sc = [&] {
        try {
            return Scenario(EquationParams(n, p, q));
        } catch (const std::exception& e) {
            throw ConfigError(e.what());
        }
    }();
    sc.name = fallback_name;

    std::vector<double> log_samples;
    bool bc_explicit = false;
    for (const Entry& e : entries) {
        if (e.section == "params") continue;
        if (e.section.empty() || e.section == "scenario") {
            if (e.key == "name") sc.name = e.value;
            else if (e.key == "seed") sc.seed = static_cast<std::uint64_t>(to_number(e));
            else throw ConfigError("scenario." + e.key + ": unknown key");
        } else if (e.section == "domain") {
            if (e.key == "kind") {
                if (e.value == "ball") sc.ball = true;
                else if (e.value == "radial") sc.ball = false;
                else throw ConfigError("domain.kind: expected 'radial' or 'ball'");
            } else if (e.key == "R") sc.R = to_number(e);
            else if (e.key == "cells") sc.cells = to_int(e);
            else throw ConfigError("domain." + e.key + ": unknown key");
        } else if (e.section == "solver") {
            if (e.key == "bc") {
                if (e.value == "dirichlet") sc.solver.outer_bc = OuterBC::DirichletZero;
                else if (e.value == "zeroflux") sc.solver.outer_bc = OuterBC::ZeroFlux;
                else throw ConfigError("solver.bc: expected 'dirichlet' or 'zeroflux'");
                bc_explicit = true;
            } else if (e.key == "cfl") sc.solver.cfl_safety = to_number(e);
            else if (e.key == "delta") sc.solver.delta = to_number(e);
            else throw ConfigError("solver." + e.key + ": unknown key");
        } else if (e.section == "initial") {
            if (e.key == "kind") {
                if (e.value == "barenblatt") sc.initial.kind = InitialSpec::Kind::Barenblatt;
                else if (e.value == "giant") sc.initial.kind = InitialSpec::Kind::Giant;
                else if (e.value == "bump") sc.initial.kind = InitialSpec::Kind::Bump;
                else if (e.value == "custom") sc.initial.kind = InitialSpec::Kind::Custom;
                else if (e.value == "random_bumps") sc.initial.kind = InitialSpec::Kind::RandomBumps;
                else throw ConfigError("initial.kind: unknown kind '" + e.value + "'");
            } else if (e.key == "C") sc.initial.C = to_number(e);
            else if (e.key == "t_delay") sc.initial.t_delay = to_number(e);
            else if (e.key == "t0") sc.initial.t0 = to_number(e);
            else if (e.key == "center") sc.initial.center = to_number(e);
            else if (e.key == "width") sc.initial.width = to_number(e);
            else if (e.key == "height") sc.initial.height = to_number(e);
            else if (e.key == "csv") sc.initial.csv_path = e.value;
            else if (e.key == "seed") sc.initial.seed = static_cast<std::uint64_t>(to_number(e));
            else if (e.key == "count") sc.initial.count = to_int(e);
            else throw ConfigError("initial." + e.key + ": unknown key");
        } else if (e.section == "run") {
            if (e.key == "T_end") sc.T_end = to_number(e);
            else if (e.key == "samples") {
                const std::vector<double> v = to_numbers(e);
                sc.samples.insert(sc.samples.end(), v.begin(), v.end());
            } else if (e.key == "samples_log") {
                const std::vector<double> v = to_numbers(e);
                if (v.size() != 3 || !(v[0] > 0.0) || !(v[1] > v[0]) || v[2] < 2)
                    throw ConfigError("run.samples_log: expected 'lo hi count' with 0 < lo < hi, count >= 2");
                const int count = static_cast<int>(v[2]);
                for (int k = 0; k < count; ++k)
                    log_samples.push_back(v[0] * std::pow(v[1] / v[0], double(k) / (count - 1)));
            } else if (e.key == "stop_sup") sc.stop_sup = to_number(e);
            else throw ConfigError("run." + e.key + ": unknown key");
        } else if (e.section == "analysis") {
            if (e.key == "check") {
                std::istringstream ss(e.value);
                CheckSpec check;
                ss >> check.name;
                double a = 0.0;
                while (ss >> a) check.args.push_back(a);
                if (check.name.empty()) throw ConfigError("analysis.check: empty check line");
                sc.checks.push_back(std::move(check));
            } else throw ConfigError("analysis." + e.key + ": unknown key");
        } else if (e.section == "output") {
            if (e.key == "dir") sc.out_dir = e.value;
            else throw ConfigError("output." + e.key + ": unknown key");
        } else {
            throw ConfigError("unknown section [" + e.section + "]");
        }
    }

    sc.samples.insert(sc.samples.end(), log_samples.begin(), log_samples.end());
    std::sort(sc.samples.begin(), sc.samples.end());
    sc.samples.erase(std::unique(sc.samples.begin(), sc.samples.end()), sc.samples.end());

    if (sc.ball) {
        sc.R = 1.0;
        if (!bc_explicit) sc.solver.outer_bc = OuterBC::DirichletZero;
    }
    if (sc.name.empty()) throw ConfigError("scenario needs a name");
    if (!(sc.T_end > 0.0)) throw ConfigError("run.T_end must be positive");
    if (sc.samples.empty()) throw ConfigError("run needs at least one sample time");
    for (double s : sc.samples)
        if (!(s > 0.0) || s > sc.T_end * (1.0 + 1e-12))
            throw ConfigError("sample times must lie in (0, T_end]");
    if (sc.out_dir.empty()) sc.out_dir = sc.name;
    validate_check_preconditions(sc);
    return sc;
}

Scenario parse_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    std::string name = std::filesystem::path(path).stem().string();
    return parse_scenario_text(buf.str(), name);
}

namespace {

// ------------------------------------------------------------- initial data

double bump_value(double r, double center, double width, double height) {
    const double x = (r - center) / width;
    const double b = 1.0 - x * x;
    return b > 0.0 ? height * b * b : 0.0;
}

double unit_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0,1), engine-defined bits only
}

}  // namespace

RadialState build_initial_state(const Scenario& sc, const Grid& grid, std::uint64_t seed,
                                std::unique_ptr<GiantProfile>* giant) {
    std::unique_ptr<GiantProfile> local;
    std::unique_ptr<GiantProfile>& giant_holder = giant ? *giant : local;
    switch (sc.initial.kind) {
        case InitialSpec::Kind::Barenblatt: {
            const BarenblattSpec spec{sc.params, sc.initial.C, sc.initial.t_delay, 0.0};
            return project([&](double r) { return barenblatt_eval(spec, r, 0.0); }, grid);
        }
        case InitialSpec::Kind::Giant: {
            if (!sc.ball) throw ConfigError("giant initial data requires the ball domain");
            if (!(sc.initial.t0 > 0.0)) throw ConfigError("initial.t0 must be positive");
            giant_holder = std::make_unique<GiantProfile>(fixed_point(sc.params));
            return project(
                [&](double r) { return separable_eval(*giant_holder, r, sc.initial.t0); },
                grid);
        }
        case InitialSpec::Kind::Bump: {
            if (!(sc.initial.width > 0.0)) throw ConfigError("initial.width must be positive");
            if (!(sc.initial.height > 0.0)) throw ConfigError("initial.height must be positive");
            return project(
                [&](double r) {
                    return bump_value(r, sc.initial.center, sc.initial.width, sc.initial.height);
                },
                grid);
        }
        case InitialSpec::Kind::Custom: {
            std::vector<std::pair<double, double>> rows;
            try {
                rows = read_csv_pairs(sc.initial.csv_path);
            } catch (const std::exception& e) {
                throw ConfigError(e.what());
            }
            if (rows.size() < 2) throw ConfigError("custom initial data needs at least 2 rows");
            for (size_t i = 1; i < rows.size(); ++i)
                if (!(rows[i].first > rows[i - 1].first))
                    throw ConfigError("custom initial data radii must be strictly increasing");
            return project(
                [&](double r) {
                    if (r <= rows.front().first) return rows.front().second;
                    if (r >= rows.back().first) return rows.back().second;
                    const auto it = std::lower_bound(
                        rows.begin(), rows.end(), r,
                        [](const auto& row, double x) { return row.first < x; });
                    const auto lo = it - 1;
                    const double w = (r - lo->first) / (it->first - lo->first);
                    return (1.0 - w) * lo->second + w * it->second;
                },
                grid);
        }
        case InitialSpec::Kind::RandomBumps: {
            if (sc.initial.count < 1) throw ConfigError("initial.count must be at least 1");
            std::mt19937_64 rng(sc.initial.seed ? sc.initial.seed : seed);
            std::vector<std::array<double, 3>> bumps;
            for (int k = 0; k < sc.initial.count; ++k) {
                const double center = 0.4 * sc.R * unit_uniform(rng);
                const double width = sc.R * (0.1 + 0.2 * unit_uniform(rng));
                const double height = 0.2 + 0.8 * unit_uniform(rng);
                bumps.push_back({center, width, height});
            }
            return project(
                [&](double r) {
                    double acc = 0.0;
                    for (const auto& b : bumps) acc += bump_value(r, b[0], b[1], b[2]);
                    return acc;
                },
                grid);
        }
    }
    throw ConfigError("unhandled initial kind");
}

namespace {

// ----------------------------------------------------------------- checks

struct CheckContext {
    const Scenario& sc;
    const Grid& grid;
    const Trajectory& traj;
    double initial_mass;
    double delta;  // resolved regularization
    const GiantProfile* giant;
};

std::string fmt(double v) { return format_g17(v); }

CheckOutcome eval_check(const CheckSpec& c, const CheckContext& ctx) {
    const Scenario& sc = ctx.sc;
    const auto state_at = [&](size_t k) {
        return RadialState{ctx.grid, ctx.traj.snapshots[k], ctx.traj.times[k]};
    };
    const auto outcome = [&](bool ok, const std::string& detail) {
        return CheckOutcome{c.name + ": " + (ok ? "PASS " : "FAIL ") + detail, ok};
    };

    if (c.name == "d_mass_conserved") {
        double drift = 0.0;
        for (double m : ctx.traj.mass)
            drift = std::max(drift, std::abs(m - ctx.initial_mass) / std::abs(ctx.initial_mass));
        return outcome(drift <= c.args[0],
                       "max_rel_drift=" + fmt(drift) + " tol=" + fmt(c.args[0]));
    }
    if (c.name == "track_barenblatt") {
        const BarenblattSpec spec{sc.params, sc.initial.C, sc.initial.t_delay, 0.0};
        double err = 0.0;
        for (size_t k = 0; k < ctx.traj.times.size(); ++k) {
            const double t = ctx.traj.times[k];
            err = std::max(err, sup_distance(state_at(k), [&](double r) {
                               return barenblatt_eval(spec, r, t);
                           }));
        }
        return outcome(err <= c.args[0], "max_sup_error=" + fmt(err) + " tol=" + fmt(c.args[0]));
    }
    if (c.name == "track_giant") {
        const double e = 1.0 / (sc.params.q - 2.0);
        double err = 0.0;
        for (size_t k = 0; k < ctx.traj.times.size(); ++k) {
            const double f = std::pow(ctx.traj.times[k] + sc.initial.t0, e);
            const RadialState s = state_at(k);
            err = std::max(err, sup_distance(s, [&](double r) {
                               return separable_eval(*ctx.giant, r, 1.0) / f;
                           }) * f);
        }
        return outcome(err <= c.args[0],
                       "max_profile_error=" + fmt(err) + " tol=" + fmt(c.args[0]));
    }
    if (c.name == "decay_exponent" || c.name == "support_exponent") {
        const FitResult fit =
            c.name == "decay_exponent"
                ? fit_decay_exponent(ctx.traj, c.args[0], c.args[1])
                : fit_support_exponent(ctx.traj, sc.params, ctx.grid.R, c.args[0], c.args[1]);
        const double err = std::abs(fit.exponent - c.args[2]);
        return outcome(err <= c.args[3], "fitted=" + fmt(fit.exponent) + " expected=" +
                                             fmt(c.args[2]) + " tol=" + fmt(c.args[3]) +
                                             " stderr=" + fmt(fit.std_error));
    }
    if (c.name == "tail_exponent") {
        const RadialState last = state_at(ctx.traj.times.size() - 1);
        const FitResult fit = tail_exponent(last, sc.params, c.args[0], c.args[1], ctx.delta);
        const double err = std::abs(fit.exponent - c.args[2]);
        return outcome(err <= c.args[3], "fitted=" + fmt(fit.exponent) + " expected=" +
                                             fmt(c.args[2]) + " tol=" + fmt(c.args[3]));
    }
    if (c.name == "extinction" || c.name == "no_extinction") {
        const std::optional<double> t_ext = extinction_time(ctx.traj, c.args[0]);
        const bool want = c.name == "extinction";
        const std::string detail = t_ext ? "extinct_at=" + fmt(*t_ext)
                                         : std::string("no_extinction_detected");
        return outcome(t_ext.has_value() == want, detail + " threshold=" + fmt(c.args[0]));
    }
    if (c.name == "monotonicity") {
        const MonotonicityReport rep = monotonicity_defect(ctx.traj, sc.params);
        return outcome(rep.defect >= -c.args[0] * rep.scale,
                       "min_defect=" + fmt(rep.defect) + " scale=" + fmt(rep.scale) +
                           " tol_factor=" + fmt(c.args[0]));
    }
    if (c.name == "alexandrov") {
        double worst = 0.0;
        bool ok = true;
        for (size_t k = 0; k < ctx.traj.times.size(); ++k) {
            const RadialState s = state_at(k);
            const double defect = alexandrov_defect(s, c.args[0]);
            worst = std::max(worst, defect);
            ok = ok && defect <= c.args[1] * sup_norm(s);
        }
        return outcome(ok, "max_defect=" + fmt(worst) + " tol_factor=" + fmt(c.args[1]));
    }
    if (c.name == "sturmian_nonincreasing") {
        const double C_m = barenblatt_C_for_mass(sc.params, ctx.initial_mass);
        std::string detail = "C=" + fmt(C_m);
        bool ok = true;
        for (double delay : c.args) {
            const BarenblattSpec ref{sc.params, C_m, delay, 0.0};
            const SturmianResult res = sturmian_monotonicity(
                ctx.grid, ctx.traj,
                [&](double t, double r) { return barenblatt_eval(ref, r, t); });
            ok = ok && res.nonincreasing;
            detail += " delay=" + fmt(delay) + " counts=";
            for (size_t k = 0; k < res.counts.size(); ++k)
                detail += (k ? "|" : "") + std::to_string(res.counts[k]);
        }
        return outcome(ok, detail);
    }
    if (c.name == "change_once") {
        const double C_m = barenblatt_C_for_mass(sc.params, ctx.initial_mass);
        const BarenblattSpec ref{sc.params, C_m, 0.0, 0.0};
        const int count = c.args.size() > 4 ? static_cast<int>(c.args[4]) : 10;
        const auto grid_of = [count](double lo, double hi) {
            std::vector<double> g;
            for (int k = 0; k < count; ++k)
                g.push_back(lo * std::pow(hi / lo, double(k) / (count - 1)));
            return g;
        };
        const double t1 = find_sturmian_delay(ctx.grid, ctx.traj, ref,
                                              grid_of(c.args[0], c.args[1]), "-+");
        const double t2 = find_sturmian_delay(ctx.grid, ctx.traj, ref,
                                              grid_of(c.args[2], c.args[3]), "+-");
        return outcome(t1 < t2, "C=" + fmt(C_m) + " t1=" + fmt(t1) + " t2=" + fmt(t2) +
                                    " patterns=-+,+-");
    }
    return CheckOutcome{c.name + ": FAIL unknown check", false};
}

// ----------------------------------------------------------------- artifacts

std::vector<std::pair<std::string, std::string>> provenance_block(
    const Scenario& sc, std::uint64_t seed, double delta) {
    const DerivedExponents ex = derive(sc.params);
    std::vector<std::pair<std::string, std::string>> prov;
    prov.emplace_back("scenario", sc.name);
    prov.emplace_back("version", kVersion);
    prov.emplace_back("n", std::to_string(sc.params.n));
    prov.emplace_back("p", fmt(sc.params.p));
    prov.emplace_back("q", fmt(sc.params.q));
    prov.emplace_back("d", fmt(ex.d));
    prov.emplace_back("lambda", fmt(ex.lambda));
    prov.emplace_back("alpha", fmt(ex.alpha));
    prov.emplace_back("spread", fmt(ex.spread));
    prov.emplace_back("sigma", fmt(ex.sigma));
    prov.emplace_back("mu", fmt(ex.mu));
    prov.emplace_back("range_condition", range_condition(sc.params) ? "true" : "false");
    prov.emplace_back("domain", sc.ball ? "ball" : "radial");
    prov.emplace_back("R", fmt(sc.R));
    prov.emplace_back("cells", std::to_string(sc.cells));
    prov.emplace_back("bc", sc.solver.outer_bc == OuterBC::DirichletZero ? "dirichlet" : "zeroflux");
    prov.emplace_back("cfl", fmt(sc.solver.cfl_safety));
    prov.emplace_back("delta", fmt(delta));
    prov.emplace_back("T_end", fmt(sc.T_end));
    {
        std::string s;
        for (size_t k = 0; k < sc.samples.size(); ++k) s += (k ? " " : "") + fmt(sc.samples[k]);
        prov.emplace_back("samples", s);
    }
    if (sc.stop_sup > 0.0) prov.emplace_back("stop_sup", fmt(sc.stop_sup));
    switch (sc.initial.kind) {
        case InitialSpec::Kind::Barenblatt:
            prov.emplace_back("initial", "barenblatt C=" + fmt(sc.initial.C) +
                                             " t_delay=" + fmt(sc.initial.t_delay));
            break;
        case InitialSpec::Kind::Giant:
            prov.emplace_back("initial", "giant t0=" + fmt(sc.initial.t0));
            break;
        case InitialSpec::Kind::Bump:
            prov.emplace_back("initial", "bump center=" + fmt(sc.initial.center) +
                                             " width=" + fmt(sc.initial.width) +
                                             " height=" + fmt(sc.initial.height));
            break;
        case InitialSpec::Kind::Custom:
            prov.emplace_back("initial", "custom csv=" + sc.initial.csv_path);
            break;
        case InitialSpec::Kind::RandomBumps:
            prov.emplace_back("initial",
                              "random_bumps seed=" +
                                  std::to_string(sc.initial.seed ? sc.initial.seed : seed) +
                                  " count=" + std::to_string(sc.initial.count));
            break;
    }
    prov.emplace_back("seed", std::to_string(seed));
    for (const CheckSpec& c : sc.checks) {
        std::string line = c.name;
        for (double a : c.args) line += " " + fmt(a);
        prov.emplace_back("check", line);
    }
    return prov;
}

void write_artifacts(const std::filesystem::path& dir,
                     const std::vector<std::pair<std::string, std::string>>& prov,
                     const Grid& grid, const RadialState& initial, const Trajectory& traj,
                     const std::vector<CheckOutcome>& checks, bool overall_pass) {
    namespace fs = std::filesystem;
    fs::create_directories(dir / "profiles");

    const auto profile_rows = [&](const std::vector<double>& u) {
        std::vector<std::vector<double>> rows;
        rows.reserve(grid.cells);
        for (int i = 0; i < grid.cells; ++i) rows.push_back({grid.mid(i), u[i]});
        return rows;
    };
    write_csv((dir / "profiles" / "initial.csv").string(), prov, {"r", "u"},
              profile_rows(initial.u));
    for (size_t k = 0; k < traj.snapshots.size(); ++k) {
        char name[32];
        std::snprintf(name, sizeof name, "sample_%04zu.csv", k);
        auto prov_k = prov;
        prov_k.emplace_back("t", format_g17(traj.times[k]));
        write_csv((dir / "profiles" / name).string(), prov_k, {"r", "u"},
                  profile_rows(traj.snapshots[k]));
    }

    std::vector<std::vector<double>> series;
    for (size_t k = 0; k < traj.times.size(); ++k)
        series.push_back({traj.times[k], traj.sup[k], traj.mass[k], traj.support[k], traj.l2w[k]});
    write_csv((dir / "series.csv").string(), prov, {"t", "sup", "d_mass", "support", "L2w"},
              series);

    std::ofstream summary(dir / "summary.txt", std::ios::binary);
    if (!summary) throw std::runtime_error("cannot write summary.txt");
    for (const auto& [k, v] : prov) summary << k << " = " << v << "\n";
    summary << "stopped_early = " << (traj.stopped_early ? "true" : "false") << "\n";
    for (const CheckOutcome& c : checks) summary << "check " << c.line << "\n";
    summary << "overall = " << (overall_pass ? "PASS" : "FAIL") << "\n";
}

}  // namespace

RunOutcome run_scenario(const Scenario& scenario, const std::string& out_root,
                        std::int64_t seed_override, bool strict) {
    (void)strict;  // no warnings to promote yet
    RunOutcome out;
    const std::uint64_t seed =
        seed_override >= 0 ? static_cast<std::uint64_t>(seed_override) : scenario.seed;

    // Stage 1: configuration (exit 2 on anything wrong before time starts).
    Grid grid;
    RadialState state;
    std::unique_ptr<GiantProfile> giant;
    double delta = 0.0;
    try {
        validate_check_preconditions(scenario);
        grid = build_grid(scenario.ball ? 1.0 : scenario.R, scenario.cells,
                          derive(scenario.params).d);
        delta = resolve_delta(scenario.solver, scenario.params);
        if (!(scenario.solver.cfl_safety > 0.0 && scenario.solver.cfl_safety < 1.0))
            throw ConfigError("solver.cfl must lie in (0, 1)");
        state = build_initial_state(scenario, grid, seed, &giant);
        for (double s : scenario.samples)
            if (!(s > 0.0) || s > scenario.T_end * (1.0 + 1e-12))
                throw ConfigError("sample times must lie in (0, T_end]");
    } catch (const std::exception& e) {
        out.exit_code = 2;
        out.reason = std::string("config error: ") + e.what();
        return out;
    }

    const double initial_mass = d_mass(state);

    // Stage 2: time integration (exit 3 on solver failure).
    const RadialState initial_state = state;
    Trajectory traj;
    try {
        traj = run_until(state, scenario.T_end, scenario.solver, scenario.params,
                         scenario.samples, true, scenario.stop_sup);
    } catch (const std::exception& e) {
        out.exit_code = 3;
        out.reason = std::string("solver failure: ") + e.what();
        return out;
    }

    // Stage 3: checks, then artifacts (artifacts written even on check failure).
    const CheckContext ctx{scenario, grid, traj, initial_mass, delta, giant.get()};
    bool all_pass = true;
    std::string first_failure;
    for (const CheckSpec& c : scenario.checks) {
        CheckOutcome oc = [&] {
            try {
                return eval_check(c, ctx);
            } catch (const std::exception& e) {
                return CheckOutcome{c.name + ": FAIL " + e.what(), false};
            }
        }();
        if (!oc.passed && all_pass) {
            all_pass = false;
            first_failure = oc.line;
        }
        out.checks.push_back(std::move(oc));
    }

    try {
        namespace fs = std::filesystem;
        const fs::path root = out_root.empty() ? fs::path("out") : fs::path(out_root);
        const fs::path dir = fs::path(scenario.out_dir).is_absolute()
                                 ? fs::path(scenario.out_dir)
                                 : root / scenario.out_dir;
        write_artifacts(dir, provenance_block(scenario, seed, delta), grid, initial_state,
                        traj, out.checks, all_pass);
        out.out_dir = dir.string();
    } catch (const std::exception& e) {
        out.exit_code = 3;
        out.reason = std::string("solver failure: cannot write artifacts: ") + e.what();
        return out;
    }

    if (!all_pass) {
        out.exit_code = 1;
        out.reason = "check failed: " + first_failure;
    }
    return out;
}

RunOutcome run_scenario_file(const std::string& path, const std::string& out_root,
                             std::int64_t seed_override, bool strict) {
    try {
        const Scenario sc = parse_scenario(path);
        return run_scenario(sc, out_root, seed_override, strict);
    } catch (const ConfigError& e) {
        RunOutcome out;
        out.exit_code = 2;
        out.reason = std::string("config error: ") + e.what();
        return out;
    }
}

}  // namespace qplab
