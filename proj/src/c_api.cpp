#include "qplab.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <memory>
#include <new>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qplab/closed_forms.hpp"
#include "qplab/csv.hpp"
#include "qplab/giant.hpp"
#include "qplab/params.hpp"
#include "qplab/scenario.hpp"
#include "qplab/solver1d.hpp"

struct qpl_giant {
    qplab::GiantProfile profile;

    explicit qpl_giant(qplab::GiantProfile p) : profile(std::move(p)) {}
};

struct qpl_sim {
    qplab::Scenario scenario;
    qplab::RadialState state;
    std::unique_ptr<qplab::GiantProfile> giant;

    explicit qpl_sim(qplab::Scenario sc) : scenario(std::move(sc)) {}
};

namespace {

thread_local std::string t_error;

qpl_status fail(qpl_status code, const std::string& message) {
    t_error = message;
    return code;
}

// Exceptions from the core map onto the exit-code convention: invalid
// parameters or domains are configuration errors; everything else is a
// breakdown of the numerics.
template <typename F>
qpl_status guarded(F&& f) {
    t_error.clear();
    try {
        return f();
    } catch (const qplab::ConfigError& e) {
        return fail(QPL_CONFIG_ERROR, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(QPL_CONFIG_ERROR, e.what());
    } catch (const std::domain_error& e) {
        return fail(QPL_CONFIG_ERROR, e.what());
    } catch (const std::bad_alloc&) {
        return fail(QPL_SOLVER_FAILURE, "out of memory");
    } catch (const std::exception& e) {
        return fail(QPL_SOLVER_FAILURE, e.what());
    }
}

}  // namespace

extern "C" {

const char* qpl_version(void) { return qplab::kVersion; }

const char* qpl_last_error(void) { return t_error.c_str(); }

qpl_status qpl_params_derive(int n, double p, double q, qpl_derived* out) {
    if (!out) return fail(QPL_INVALID_ARGUMENT, "out is null");
    return guarded([&] {
        const qplab::EquationParams params(n, p, q);
        const qplab::DerivedExponents ex = qplab::derive(params);
        out->d = ex.d;
        out->lambda = ex.lambda;
        out->alpha = ex.alpha;
        out->spread = ex.spread;
        out->sigma = ex.sigma;
        out->mu = ex.mu;
        out->range_condition = qplab::range_condition(params) ? 1 : 0;
        switch (qplab::regime(params)) {
            case qplab::Regime::Slow: out->regime = 0; break;
            case qplab::Regime::Linear: out->regime = 1; break;
            case qplab::Regime::Fast: out->regime = 2; break;
        }
        return QPL_OK;
    });
}

qpl_status qpl_barenblatt_eval(int n, double p, double q, double C, double t_delay,
                               double r, double t, double* out) {
    if (!out) return fail(QPL_INVALID_ARGUMENT, "out is null");
    return guarded([&] {
        const qplab::BarenblattSpec spec{qplab::EquationParams(n, p, q), C, t_delay, 0.0};
        *out = qplab::barenblatt_eval(spec, r, t);
        return QPL_OK;
    });
}

qpl_status qpl_barenblatt_support(int n, double p, double q, double C, double t_delay,
                                  double t, double* out) {
    if (!out) return fail(QPL_INVALID_ARGUMENT, "out is null");
    return guarded([&] {
        const qplab::BarenblattSpec spec{qplab::EquationParams(n, p, q), C, t_delay, 0.0};
        *out = qplab::support_radius(spec, t);
        return QPL_OK;
    });
}

qpl_status qpl_barenblatt_mass(int n, double p, double q, double C, double* out) {
    if (!out) return fail(QPL_INVALID_ARGUMENT, "out is null");
    return guarded([&] {
        const qplab::BarenblattSpec spec{qplab::EquationParams(n, p, q), C, 0.0, 0.0};
        *out = qplab::d_mass(spec, 1.0);
        return QPL_OK;
    });
}

qpl_status qpl_barenblatt_c_for_mass(int n, double p, double q, double mass,
                                     double* out) {
    if (!out) return fail(QPL_INVALID_ARGUMENT, "out is null");
    return guarded([&] {
        *out = qplab::barenblatt_C_for_mass(qplab::EquationParams(n, p, q), mass);
        return QPL_OK;
    });
}

qpl_status qpl_giant_solve(int n, double p, double q, int nodes, double tol,
                           int max_iter, qpl_giant** out) {
    if (!out) return fail(QPL_INVALID_ARGUMENT, "out is null");
    *out = nullptr;
    return guarded([&] {
        const qplab::EquationParams params(n, p, q);
        auto handle = std::make_unique<qpl_giant>(
            qplab::fixed_point(params, tol > 0.0 ? tol : 1e-10,
                               max_iter > 0 ? max_iter : 200, nodes > 0 ? nodes : 1024));
        *out = handle.release();
        return QPL_OK;
    });
}

void qpl_giant_free(qpl_giant* g) { delete g; }

qpl_status qpl_giant_get_report(const qpl_giant* g, qpl_giant_report* out) {
    if (!g || !out) return fail(QPL_INVALID_ARGUMENT, "null handle or out");
    t_error.clear();
    out->iterations = g->profile.report.iterations;
    out->final_change = g->profile.report.final_change;
    out->integral_residual = g->profile.report.integral_residual;
    out->ode_residual = g->profile.report.ode_residual;
    out->value_at_origin = g->profile.values.front();
    return QPL_OK;
}

qpl_status qpl_giant_nodes(const qpl_giant* g, int* out) {
    if (!g || !out) return fail(QPL_INVALID_ARGUMENT, "null handle or out");
    t_error.clear();
    *out = static_cast<int>(g->profile.values.size());
    return QPL_OK;
}

qpl_status qpl_giant_eval(const qpl_giant* g, double r, double t, double* out) {
    if (!g || !out) return fail(QPL_INVALID_ARGUMENT, "null handle or out");
    return guarded([&] {
        *out = qplab::separable_eval(g->profile, r, t);
        return QPL_OK;
    });
}

qpl_status qpl_giant_export_csv(const qpl_giant* g, const char* path) {
    if (!g || !path) return fail(QPL_INVALID_ARGUMENT, "null handle or path");
    return guarded([&] {
        const qplab::GiantProfile& prof = g->profile;
        std::vector<std::pair<std::string, std::string>> prov;
        prov.emplace_back("version", qplab::kVersion);
        prov.emplace_back("n", std::to_string(prof.params.n));
        prov.emplace_back("p", qplab::format_g17(prof.params.p));
        prov.emplace_back("q", qplab::format_g17(prof.params.q));
        prov.emplace_back("nodes", std::to_string(prof.values.size()));
        prov.emplace_back("iterations", std::to_string(prof.report.iterations));
        prov.emplace_back("integral_residual",
                          qplab::format_g17(prof.report.integral_residual));
        prov.emplace_back("ode_residual", qplab::format_g17(prof.report.ode_residual));
        std::vector<std::vector<double>> rows;
        rows.reserve(prof.radii.size());
        for (size_t i = 0; i < prof.radii.size(); ++i)
            rows.push_back({prof.radii[i], prof.values[i]});
        qplab::write_csv(path, prov, {"r", "V"}, rows);
        return QPL_OK;
    });
}

qpl_status qpl_sim_create(const char* scenario_text, qpl_sim** out) {
    if (!out) return fail(QPL_INVALID_ARGUMENT, "out is null");
    *out = nullptr;
    if (!scenario_text) return fail(QPL_INVALID_ARGUMENT, "scenario_text is null");
    return guarded([&] {
        qplab::Scenario sc = qplab::parse_scenario_text(scenario_text, "api");
        auto handle = std::make_unique<qpl_sim>(std::move(sc));
        const qplab::Grid grid =
            qplab::build_grid(handle->scenario.ball ? 1.0 : handle->scenario.R,
                              handle->scenario.cells,
                              qplab::derive(handle->scenario.params).d);
        handle->state = qplab::build_initial_state(handle->scenario, grid,
                                                   handle->scenario.seed, &handle->giant);
        *out = handle.release();
        return QPL_OK;
    });
}

void qpl_sim_free(qpl_sim* s) { delete s; }

qpl_status qpl_sim_cells(const qpl_sim* s, int* out) {
    if (!s || !out) return fail(QPL_INVALID_ARGUMENT, "null handle or out");
    t_error.clear();
    *out = s->state.grid.cells;
    return QPL_OK;
}

qpl_status qpl_sim_time(const qpl_sim* s, double* out) {
    if (!s || !out) return fail(QPL_INVALID_ARGUMENT, "null handle or out");
    t_error.clear();
    *out = s->state.t;
    return QPL_OK;
}

qpl_status qpl_sim_sup(const qpl_sim* s, double* out) {
    if (!s || !out) return fail(QPL_INVALID_ARGUMENT, "null handle or out");
    t_error.clear();
    *out = qplab::sup_norm(s->state);
    return QPL_OK;
}

qpl_status qpl_sim_mass(const qpl_sim* s, double* out) {
    if (!s || !out) return fail(QPL_INVALID_ARGUMENT, "null handle or out");
    t_error.clear();
    *out = qplab::d_mass(s->state);
    return QPL_OK;
}

qpl_status qpl_sim_support(const qpl_sim* s, double* out) {
    if (!s || !out) return fail(QPL_INVALID_ARGUMENT, "null handle or out");
    t_error.clear();
    *out = qplab::support_radius(s->state);
    return QPL_OK;
}

qpl_status qpl_sim_profile(const qpl_sim* s, double* r_out, double* u_out,
                           size_t capacity) {
    if (!s) return fail(QPL_INVALID_ARGUMENT, "null handle");
    if (capacity < static_cast<size_t>(s->state.grid.cells))
        return fail(QPL_INVALID_ARGUMENT, "capacity below the cell count");
    t_error.clear();
    for (int i = 0; i < s->state.grid.cells; ++i) {
        if (r_out) r_out[i] = s->state.grid.mid(i);
        if (u_out) u_out[i] = s->state.u[i];
    }
    return QPL_OK;
}

qpl_status qpl_sim_advance(qpl_sim* s, double t_target) {
    if (!s) return fail(QPL_INVALID_ARGUMENT, "null handle");
    return guarded([&] {
        const double eps = 1e-14 * std::max(1.0, std::abs(t_target));
        if (t_target < s->state.t - eps)
            throw qplab::ConfigError("cannot advance backwards in time");
        while (s->state.t < t_target - eps)
            qplab::step(s->state, s->scenario.solver, s->scenario.params, t_target);
        return QPL_OK;
    });
}

int qpl_scenario_run(const char* config_path, const char* out_root,
                     long long seed_override, int strict, char* out_dir,
                     size_t out_dir_capacity) {
    t_error.clear();
    if (out_dir && out_dir_capacity > 0) out_dir[0] = '\0';
    if (!config_path) {
        fail(QPL_CONFIG_ERROR, "config_path is null");
        return QPL_CONFIG_ERROR;
    }
    qplab::RunOutcome outcome;
    try {
        outcome = qplab::run_scenario_file(config_path, out_root ? out_root : "",
                                           seed_override, strict != 0);
    } catch (const std::exception& e) {
        fail(QPL_SOLVER_FAILURE, e.what());
        return QPL_SOLVER_FAILURE;
    }
    if (!outcome.reason.empty()) t_error = outcome.reason;
    if (out_dir && out_dir_capacity > 0 && !outcome.out_dir.empty()) {
        std::strncpy(out_dir, outcome.out_dir.c_str(), out_dir_capacity - 1);
        out_dir[out_dir_capacity - 1] = '\0';
    }
    return outcome.exit_code;
}

}  // extern "C"
