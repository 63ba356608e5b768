#include "qplab/solver1d.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qplab {

namespace {

// Flux kernel selection: the generic path pays a pow() per face, so the two
// exactly representable special cases get dedicated loops.
enum class FluxKind { General, Cubic, Linear };

FluxKind classify(const EquationParams& params, double delta) {
    if (std::abs(params.q - 2.0) <= kLinearTol) return FluxKind::Linear;  // Phi = s for any delta
    if (delta == 0.0 && std::abs(params.q - 4.0) <= kLinearTol) return FluxKind::Cubic;
    return FluxKind::General;
}

// m = (s^2 + delta^2)^{(q-2)/2}, so Phi = m s and a_face = (q-1) m.
template <FluxKind kind>
inline double mobility(double s, double delta, double e2) {
    if constexpr (kind == FluxKind::Linear) return 1.0;
    if constexpr (kind == FluxKind::Cubic) return s * s;
    return std::pow(s * s + delta * delta, e2);
}

struct StepWorkspace {
    std::vector<double> flux;  // cells+1 face fluxes
    std::vector<double> rpow;  // cells+1 face r^{d-1}
};

void prepare(StepWorkspace& ws, const Grid& grid) {
    ws.flux.assign(grid.cells + 1, 0.0);
    ws.rpow.resize(grid.cells + 1);
    for (int i = 0; i <= grid.cells; ++i) ws.rpow[i] = std::pow(grid.face_r[i], grid.d - 1.0);
}

template <FluxKind kind>
double step_kernel(RadialState& state, const SolverConfig& config, const EquationParams& params,
                   double delta, StepWorkspace& ws, double t_limit) {
    const Grid& g = state.grid;
    const int N = g.cells;
    const double q = params.q, p = params.p;
    const double e2 = 0.5 * (q - 2.0);
    const double inv_h = 1.0 / g.h;

    double m_max = 0.0;
    ws.flux[0] = 0.0;  // structural zero flux at r = 0
    for (int i = 1; i < N; ++i) {
        const double s = (state.u[i] - state.u[i - 1]) * inv_h;
        const double m = mobility<kind>(s, delta, e2);
        m_max = std::max(m_max, m);
        ws.flux[i] = ws.rpow[i] * m * s;
    }
    if (config.outer_bc == OuterBC::DirichletZero) {
        const double s = (0.0 - state.u[N - 1]) / (0.5 * g.h);
        const double m = mobility<kind>(s, delta, e2);
        m_max = std::max(m_max, m);
        ws.flux[N] = ws.rpow[N] * m * s;
    } else {
        ws.flux[N] = 0.0;
    }

    const double a_max = (q - 1.0) * m_max;
    double dt_cfl = config.max_dt;
    if (a_max > 0.0) {
        dt_cfl = std::min(dt_cfl, config.cfl_safety * g.h * g.h * (q - 1.0) /
                                      ((p - 1.0) * std::max(1.0, q - 1.0) * a_max));
    }
    const double t_scale = std::max({1.0, std::abs(state.t),
                                     std::isfinite(t_limit) ? std::abs(t_limit) : 0.0});
    if (dt_cfl < 1e-15 * t_scale)
        throw std::runtime_error("dt underflow at t = " + std::to_string(state.t));
    double dt = dt_cfl;
    if (std::isfinite(t_limit)) dt = std::min(dt, t_limit - state.t);
    if (!(dt > 0.0)) return 0.0;
    if (!std::isfinite(dt))
        throw std::invalid_argument("step needs a finite time bound when the state is flat");

    const double c_pre = (p - 1.0) / (q - 1.0);
    for (int i = 0; i < N; ++i)
        state.u[i] += dt * c_pre * (ws.flux[i + 1] - ws.flux[i]) / g.w[i];
    state.t += dt;

    if (config.nan_guard) {
        for (int i = 0; i < N; ++i)
            if (!std::isfinite(state.u[i]))
                throw std::runtime_error("nonfinite value in cell " + std::to_string(i) +
                                         " at t = " + std::to_string(state.t));
    }
    return dt;
}

double dispatch_step(RadialState& state, const SolverConfig& config,
                     const EquationParams& params, double delta, StepWorkspace& ws,
                     double t_limit) {
    switch (classify(params, delta)) {
        case FluxKind::Linear: return step_kernel<FluxKind::Linear>(state, config, params, delta, ws, t_limit);
        case FluxKind::Cubic: return step_kernel<FluxKind::Cubic>(state, config, params, delta, ws, t_limit);
        default: return step_kernel<FluxKind::General>(state, config, params, delta, ws, t_limit);
    }
}

void record(Trajectory& traj, const RadialState& state, bool want_snapshots) {
    traj.times.push_back(state.t);
    traj.sup.push_back(sup_norm(state));
    traj.mass.push_back(d_mass(state));
    traj.support.push_back(support_radius(state));
    double acc = 0.0;
    for (int i = 0; i < state.grid.cells; ++i) acc += state.u[i] * state.u[i] * state.grid.w[i];
    traj.l2w.push_back(std::sqrt(acc));
    if (want_snapshots) traj.snapshots.push_back(state.u);
}

void check_samples(const RadialState& state, double T_end, const std::vector<double>& samples) {
    if (!(T_end > state.t)) throw std::invalid_argument("T_end must exceed the current time");
    if (samples.empty()) throw std::invalid_argument("a run needs at least one sample time");
    double prev = state.t;
    for (double s : samples) {
        if (!(s > prev)) throw std::invalid_argument("sample times must be strictly increasing");
        if (s > T_end + 1e-12 * std::max(1.0, T_end))
            throw std::invalid_argument("sample times must not exceed T_end");
        prev = s;
    }
}

}  // namespace

Grid build_grid(double R, int cells, double d) {
    if (!(R > 0.0)) throw std::invalid_argument("grid radius must be positive");
    if (cells < 16) throw std::invalid_argument("grid needs at least 16 cells");
    if (!(d >= 1.0)) throw std::invalid_argument("fictitious dimension must be at least 1");
    Grid g;
    g.R = R;
    g.cells = cells;
    g.h = R / cells;
    g.d = d;
    g.face_r.resize(cells + 1);
    for (int i = 0; i <= cells; ++i) g.face_r[i] = R * i / cells;
    g.w.resize(cells);
    for (int i = 0; i < cells; ++i)
        g.w[i] = (std::pow(g.face_r[i + 1], d) - std::pow(g.face_r[i], d)) / d;
    return g;
}

double resolve_delta(const SolverConfig& config, const EquationParams& params) {
    double delta = config.delta;
    if (delta < 0.0) delta = params.q < 2.0 ? 1e-8 : 0.0;
    if (params.q < 2.0 && delta == 0.0)
        throw std::invalid_argument("delta must be positive for q < 2");
    return delta;
}

double face_flux(double r_face, double u_left, double u_right, double h,
                 const EquationParams& params, double d, double delta) {
    if (!(h > 0.0)) throw std::invalid_argument("face spacing must be positive");
    const double s = (u_right - u_left) / h;
    const double m = std::pow(s * s + delta * delta, 0.5 * (params.q - 2.0));
    return std::pow(r_face, d - 1.0) * m * s;
}

double step(RadialState& state, const SolverConfig& config, const EquationParams& params,
            double t_limit) {
    const double delta = resolve_delta(config, params);
    StepWorkspace ws;
    prepare(ws, state.grid);
    return dispatch_step(state, config, params, delta, ws, t_limit);
}

Trajectory run_until(RadialState& state, double T_end, const SolverConfig& config,
                     const EquationParams& params, const std::vector<double>& sample_times,
                     bool want_snapshots, double stop_sup) {
    check_samples(state, T_end, sample_times);
    const double delta = resolve_delta(config, params);
    StepWorkspace ws;
    prepare(ws, state.grid);

    Trajectory traj;
    size_t next = 0;
    while (state.t < T_end - 1e-14 * std::max(1.0, T_end)) {
        const double target = next < sample_times.size() ? sample_times[next] : T_end;
        dispatch_step(state, config, params, delta, ws, target);
        if (stop_sup > 0.0 && sup_norm(state) < stop_sup) {
            record(traj, state, want_snapshots);
            traj.stopped_early = true;
            return traj;
        }
        if (state.t >= target - 1e-14 * std::max(1.0, target)) {
            if (next < sample_times.size()) record(traj, state, want_snapshots);
            ++next;
        }
    }
    return traj;
}

std::pair<Trajectory, Trajectory> run_pair(RadialState& a, RadialState& b, double T_end,
                                           const SolverConfig& config,
                                           const EquationParams& params,
                                           const std::vector<double>& sample_times,
                                           bool want_snapshots) {
    check_samples(a, T_end, sample_times);
    if (a.grid.cells != b.grid.cells || a.grid.R != b.grid.R || a.t != b.t)
        throw std::invalid_argument("paired run needs matching grids and start times");
    const double delta = resolve_delta(config, params);
    StepWorkspace wsa, wsb;
    prepare(wsa, a.grid);
    prepare(wsb, b.grid);

    // Probe each state's CFL step without committing, then advance both by
    // the smaller one. The probe uses a throwaway copy; cheap relative to the
    // experiments this mode exists for.
    Trajectory ta, tb;
    size_t next = 0;
    while (a.t < T_end - 1e-14 * std::max(1.0, T_end)) {
        const double target = next < sample_times.size() ? sample_times[next] : T_end;
        RadialState probe_a = a, probe_b = b;
        const double dta = dispatch_step(probe_a, config, params, delta, wsa, target);
        const double dtb = dispatch_step(probe_b, config, params, delta, wsb, target);
        const double dt = std::min(dta, dtb);
        SolverConfig locked = config;
        locked.max_dt = dt;
        dispatch_step(a, locked, params, delta, wsa, target);
        dispatch_step(b, locked, params, delta, wsb, target);
        if (a.t >= target - 1e-14 * std::max(1.0, target)) {
            if (next < sample_times.size()) {
                record(ta, a, want_snapshots);
                record(tb, b, want_snapshots);
            }
            ++next;
        }
    }
    return {std::move(ta), std::move(tb)};
}

double d_mass(const RadialState& state) {
    double acc = 0.0;
    for (int i = 0; i < state.grid.cells; ++i) acc += state.u[i] * state.grid.w[i];
    return acc;
}

double sup_norm(const RadialState& state) {
    double m = 0.0;
    for (double v : state.u) m = std::max(m, std::abs(v));
    return m;
}

double support_radius(const RadialState& state) {
    const double thr = 1e-12 * sup_norm(state);
    for (int i = state.grid.cells - 1; i >= 0; --i)
        if (std::abs(state.u[i]) > thr) return state.grid.face_r[i + 1];
    return 0.0;
}

RadialState project(const std::function<double(double)>& profile, const Grid& grid) {
    RadialState state;
    state.grid = grid;
    state.u.resize(grid.cells);
    for (int i = 0; i < grid.cells; ++i) {
        state.u[i] = profile(grid.mid(i));
        if (!std::isfinite(state.u[i]))
            throw std::invalid_argument("profile sample is not finite at r = " +
                                        std::to_string(grid.mid(i)));
    }
    return state;
}

double sup_distance(const RadialState& state, const std::function<double(double)>& reference) {
    double m = 0.0;
    for (int i = 0; i < state.grid.cells; ++i)
        m = std::max(m, std::abs(state.u[i] - reference(state.grid.mid(i))));
    return m;
}

}  // namespace qplab
