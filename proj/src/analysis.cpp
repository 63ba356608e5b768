#include "qplab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace qplab {

namespace {

FitResult loglog_fit(const std::vector<double>& xs, const std::vector<double>& ys,
                     double lo, double hi) {
    const int n = static_cast<int>(xs.size());
    double mx = 0.0, my = 0.0;
    std::vector<double> X(n), Y(n);
    for (int i = 0; i < n; ++i) {
        X[i] = std::log(xs[i]);
        Y[i] = std::log(ys[i]);
        mx += X[i];
        my += Y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < n; ++i) {
        sxx += (X[i] - mx) * (X[i] - mx);
        sxy += (X[i] - mx) * (Y[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("fit window has no spread");
    const double slope = sxy / sxx;
    double ssr = 0.0;
    for (int i = 0; i < n; ++i) {
        const double e = Y[i] - my - slope * (X[i] - mx);
        ssr += e * e;
    }
    const double se = n > 2 ? std::sqrt(ssr / (n - 2) / sxx) : 0.0;
    return FitResult{slope, se, lo, hi, n};
}

void window_samples(const std::vector<double>& t, const std::vector<double>& v,
                    double lo, double hi, std::vector<double>& ts,
                    std::vector<double>& vs) {
    for (size_t k = 0; k < t.size(); ++k) {
        if (t[k] < lo || t[k] > hi) continue;
        ts.push_back(t[k]);
        vs.push_back(v[k]);
    }
}

// Piecewise-linear read of a cell-centered profile, tapering to zero at the
// outer face.
double sample_state(const RadialState& state, double x) {
    const Grid& g = state.grid;
    const int N = g.cells;
    if (x <= g.mid(0)) return state.u[0];
    const double last_mid = g.mid(N - 1);
    if (x >= last_mid) {
        if (x >= g.R) return 0.0;
        return state.u[N - 1] * (g.R - x) / (g.R - last_mid);
    }
    const int i = std::min(N - 2, static_cast<int>((x - g.mid(0)) / g.h));
    const double w = (x - g.mid(i)) / g.h;
    return (1.0 - w) * state.u[i] + w * state.u[i + 1];
}

double oscillation(const Trajectory& traj, const Grid& grid, double x_lo, double x_hi,
                   double t_from) {
    double vmax = -std::numeric_limits<double>::infinity();
    double vmin = std::numeric_limits<double>::infinity();
    const double eps = 1e-9 * std::max(1.0, std::abs(t_from));
    for (size_t k = 0; k < traj.times.size(); ++k) {
        if (traj.times[k] < t_from - eps) continue;
        const auto& u = traj.snapshots[k];
        for (int i = 0; i < grid.cells; ++i) {
            const double m = grid.mid(i);
            if (m < x_lo || m > x_hi) continue;
            vmax = std::max(vmax, u[i]);
            vmin = std::min(vmin, u[i]);
        }
    }
    if (!(vmax >= vmin)) throw std::runtime_error("empty oscillation cylinder");
    return vmax - vmin;
}

std::vector<double> uniform_times(double lo, double hi, int count) {
    std::vector<double> out;
    out.reserve(count);
    for (int k = 1; k <= count; ++k) out.push_back(lo + (hi - lo) * k / count);
    return out;
}

}  // namespace

FitResult fit_decay_exponent(const Trajectory& traj, double t_min, double t_max) {
    std::vector<double> ts, vs;
    window_samples(traj.times, traj.sup, t_min, t_max, ts, vs);
    if (ts.size() < 5) throw std::invalid_argument("fit needs at least 5 window samples");
    for (double v : vs)
        if (!(v > 0.0)) throw std::invalid_argument("sup norm must stay positive in the window");
    FitResult fit = loglog_fit(ts, vs, t_min, t_max);
    fit.exponent = -fit.exponent;
    return fit;
}

FitResult fit_support_exponent(const Trajectory& traj, const EquationParams& params,
                               double grid_R, double t_min, double t_max) {
    if (regime(params) != Regime::Slow)
        throw std::domain_error("support growth law requires the slow regime");
    std::vector<double> ts, vs;
    window_samples(traj.times, traj.support, t_min, t_max, ts, vs);
    if (ts.size() < 5) throw std::invalid_argument("fit needs at least 5 window samples");
    for (double v : vs) {
        if (!(v > 0.0)) throw std::invalid_argument("support must be positive in the window");
        if (v >= grid_R) throw std::runtime_error("support saturated the domain");
    }
    return loglog_fit(ts, vs, t_min, t_max);
}

FitResult tail_exponent(const RadialState& state, const EquationParams& params,
                        double r_lo, double r_hi, double delta) {
    if (regime(params) != Regime::Fast || !range_condition(params))
        throw std::domain_error("tail law requires the fast regime under the range condition");
    if (!(r_lo > 0.0 && r_hi > r_lo)) throw std::invalid_argument("bad tail window");
    const double sup = sup_norm(state);
    if (std::abs(state.u.back()) > 1e-8 * sup)
        throw std::runtime_error("tail contaminated by boundary truncation");
    std::vector<double> rs, vs;
    for (int i = 0; i < state.grid.cells; ++i) {
        const double m = state.grid.mid(i);
        if (m < r_lo || m > r_hi) continue;
        if (!(state.u[i] > 10.0 * delta))
            throw std::runtime_error("tail value below the regularization floor");
        rs.push_back(m);
        vs.push_back(state.u[i]);
    }
    if (rs.size() < 5) throw std::invalid_argument("fit needs at least 5 window samples");
    return loglog_fit(rs, vs, r_lo, r_hi);
}

BarenblattFit best_fit_barenblatt(const RadialState& state, const EquationParams& params,
                                  double t, double C_lo, double C_hi) {
    if (!(C_lo > 0.0 && C_hi > C_lo)) throw std::invalid_argument("bad C bracket");
    const double sup = sup_norm(state);
    if (sup == 0.0) throw std::invalid_argument("state is identically zero");
    for (double v : state.u)
        if (v < -1e-12 * sup) throw std::invalid_argument("state must be nonnegative");

    const auto objective = [&](double C) {
        const BarenblattSpec spec{params, C, 0.0, 0.0};
        return sup_distance(state, [&](double r) { return barenblatt_eval(spec, r, t); });
    };

    const double phi = 0.6180339887498949;
    double a = C_lo, b = C_hi;
    double c = b - phi * (b - a), d = a + phi * (b - a);
    double fc = objective(c), fd = objective(d);
    while (b - a > 1e-6 * b) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = objective(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = objective(d);
        }
    }
    const double C_star = 0.5 * (a + b);
    const double span = C_hi - C_lo;
    if (C_star - C_lo < 4e-6 * span || C_hi - C_star < 4e-6 * span)
        throw std::runtime_error("objective is monotone over the bracket");
    const double alpha = derive(params).alpha;
    return BarenblattFit{C_star, std::pow(t, alpha) * objective(C_star)};
}

RadialState rescaled_orbit(const RadialState& state, const EquationParams& params,
                           double kappa) {
    if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
    const DerivedExponents ex = derive(params);
    const double sfac = std::pow(kappa, 1.0 / ex.lambda);
    const double afac = std::pow(kappa, ex.d / ex.lambda);
    if (support_radius(state) > sfac * state.grid.R * (1.0 + 1e-12))
        throw std::runtime_error("support escapes the rescaled domain");
    RadialState out;
    out.grid = state.grid;
    out.t = state.t / kappa;
    out.u.resize(state.grid.cells);
    for (int i = 0; i < state.grid.cells; ++i)
        out.u[i] = afac * sample_state(state, sfac * state.grid.mid(i));
    return out;
}

double alexandrov_defect(const RadialState& state, double R0) {
    if (!(R0 < state.grid.R)) throw std::invalid_argument("R0 must lie inside the grid");
    double worst = 0.0;
    for (int i = 0; i + 1 < state.grid.cells; ++i) {
        if (state.grid.mid(i) < R0) continue;
        worst = std::max(worst, state.u[i + 1] - state.u[i]);
    }
    return worst;
}

std::optional<double> extinction_time(const Trajectory& traj, double threshold) {
    if (!(threshold > 0.0)) throw std::invalid_argument("threshold must be positive");
    for (size_t k = 0; k < traj.times.size(); ++k)
        if (traj.sup[k] < threshold) return traj.times[k];
    return std::nullopt;
}

MonotonicityReport monotonicity_defect(const Trajectory& traj,
                                       const EquationParams& params) {
    if (!(params.q > 2.0 + kLinearTol))
        throw std::domain_error("monotonicity estimate requires q > 2");
    if (traj.snapshots.size() < 2 || traj.snapshots.size() != traj.times.size())
        throw std::invalid_argument("trajectory needs at least 2 snapshots");
    const double e = 1.0 / (params.q - 2.0);
    double defect = std::numeric_limits<double>::infinity();
    double scale = 0.0;
    std::vector<double> prev;
    for (size_t k = 0; k < traj.snapshots.size(); ++k) {
        const double f = std::pow(traj.times[k], e);
        std::vector<double> cur(traj.snapshots[k].size());
        for (size_t i = 0; i < cur.size(); ++i) {
            cur[i] = f * traj.snapshots[k][i];
            scale = std::max(scale, cur[i]);
            if (k > 0) defect = std::min(defect, cur[i] - prev[i]);
        }
        prev = std::move(cur);
    }
    return MonotonicityReport{defect, scale};
}

HarnackReport harnack_probe(const RadialState& at_t0, const EquationParams& params,
                            const SolverConfig& config, int index, double r,
                            double C_theta, double horizon) {
    if (index < 0 || index >= at_t0.grid.cells)
        throw std::invalid_argument("probe index outside the grid");
    if (!(r > 0.0 && C_theta > 0.0)) throw std::invalid_argument("r and C_theta must be positive");
    const double u0 = at_t0.u[index];
    if (!(u0 > 0.0)) throw std::invalid_argument("probe at a zero of the solution");
    const double theta = C_theta * std::pow(r, params.q) / std::pow(u0, params.q - 2.0);
    const double t0 = at_t0.t;
    const double x0 = at_t0.grid.mid(index);
    if (t0 - 4.0 * theta < 0.0 || t0 + 4.0 * theta > horizon ||
        x0 + 4.0 * r > at_t0.grid.R)
        throw std::invalid_argument("probe cylinder is not contained in the run");

    RadialState probe = at_t0;
    run_until(probe, t0 + theta, config, params, {t0 + theta});
    double inf = std::numeric_limits<double>::infinity();
    for (int i = 0; i < probe.grid.cells; ++i) {
        const double m = probe.grid.mid(i);
        if (m < x0 - r || m > x0 + r) continue;
        inf = std::min(inf, probe.u[i]);
    }
    const double mu = inf > 0.0 ? u0 / inf : std::numeric_limits<double>::infinity();
    return HarnackReport{index, t0, r, theta, u0, inf, mu};
}

OscillationScan oscillation_scan(const RadialState& base, const EquationParams& params,
                                 const SolverConfig& config, int index, double t0,
                                 const std::vector<double>& radii) {
    if (index < 0 || index >= base.grid.cells)
        throw std::invalid_argument("probe index outside the grid");
    if (radii.empty()) throw std::invalid_argument("radii sequence is empty");
    for (size_t j = 0; j < radii.size(); ++j) {
        if (!(radii[j] > 0.0)) throw std::invalid_argument("radii must be positive");
        if (j > 0 && !(radii[j] < radii[j - 1]))
            throw std::invalid_argument("radii must be strictly decreasing");
    }
    const double x0 = base.grid.mid(index);
    const double r_max = radii.front();
    if (x0 + r_max > base.grid.R)
        throw std::invalid_argument("scan cylinder is not contained in the run");
    const double ref_depth = std::pow(r_max, params.q);
    if (!(t0 - ref_depth > base.t))
        throw std::invalid_argument("reference cylinder starts before the available history");

    OscillationScan out;
    out.radii = radii;
    out.osc.assign(radii.size(), 0.0);
    out.zero_oscillation = false;

    // Calibration pass: oscillation over the reference cylinder of depth r_max^q.
    {
        RadialState run = base;
        Trajectory traj = run_until(run, t0, config, params,
                                    uniform_times(t0 - ref_depth, t0, 32), true);
        out.omega0 = oscillation(traj, base.grid, x0 - r_max, x0 + r_max, t0 - ref_depth);
    }
    if (out.omega0 == 0.0) {
        out.a0 = std::numeric_limits<double>::quiet_NaN();
        out.exponent = std::numeric_limits<double>::quiet_NaN();
        out.std_error = std::numeric_limits<double>::quiet_NaN();
        out.zero_oscillation = true;
        return out;
    }
    out.a0 = std::pow(1.0 / out.omega0, params.q - 2.0);

    const double depth_max = out.a0 * ref_depth;
    if (!(t0 - depth_max > base.t))
        throw std::runtime_error("intrinsic cylinder starts before the available history");

    RadialState run = base;
    Trajectory traj = run_until(run, t0, config, params,
                                uniform_times(t0 - depth_max, t0, 64), true);
    std::vector<double> rs, os;
    for (size_t j = 0; j < radii.size(); ++j) {
        const double depth = out.a0 * std::pow(radii[j], params.q);
        out.osc[j] = oscillation(traj, base.grid, x0 - radii[j], x0 + radii[j],
                                 t0 - depth);
        if (out.osc[j] > 0.0) {
            rs.push_back(radii[j]);
            os.push_back(out.osc[j]);
        }
    }
    if (rs.size() < 2) {
        out.exponent = std::numeric_limits<double>::quiet_NaN();
        out.std_error = std::numeric_limits<double>::quiet_NaN();
        out.zero_oscillation = true;
        return out;
    }
    const FitResult fit = loglog_fit(rs, os, radii.back(), radii.front());
    out.exponent = fit.exponent;
    out.std_error = fit.std_error;
    return out;
}

}  // namespace qplab
