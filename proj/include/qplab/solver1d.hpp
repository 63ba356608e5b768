#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "qplab/params.hpp"

namespace qplab {

// Uniform finite-volume grid on [0, R] with cell weights
// w_i = (r_{i+1/2}^d - r_{i-1/2}^d)/d, the discrete version of the measure
// r^{d-1} dr. Sum of the weights telescopes to R^d/d.
struct Grid {
    double R = 0.0;
    int cells = 0;
    double h = 0.0;
    double d = 1.0;
    std::vector<double> face_r;  // cells+1 face radii
    std::vector<double> w;       // cells positive weights

    double mid(int i) const { return (i + 0.5) * h; }
};

Grid build_grid(double R, int cells, double d);

struct RadialState {
    Grid grid;
    std::vector<double> u;  // cell averages
    double t = 0.0;
};

enum class OuterBC { DirichletZero, ZeroFlux };

struct SolverConfig {
    double cfl_safety = 0.4;
    OuterBC outer_bc = OuterBC::ZeroFlux;
    // delta < 0 picks the default: 1e-8 for q < 2, 0 for q >= 2. delta = 0 is
    // rejected for q < 2 (the flux derivative would be unbounded).
    double delta = -1.0;
    double max_dt = std::numeric_limits<double>::infinity();
    bool nan_guard = true;
};

double resolve_delta(const SolverConfig& config, const EquationParams& params);

// Regularized face flux r_face^{d-1} Phi_delta(s), s = (u_right - u_left)/h,
// Phi_delta(s) = (s^2 + delta^2)^{(q-2)/2} s. Odd and nondecreasing in s.
double face_flux(double r_face, double u_left, double u_right, double h,
                 const EquationParams& params, double d, double delta);

// Per-sample diagnostics of a run; snapshots are optional copies of u.
struct Trajectory {
    std::vector<double> times;
    std::vector<double> sup;
    std::vector<double> mass;       // discrete d-mass
    std::vector<double> support;    // outermost face of cells above 1e-12*sup
    std::vector<double> l2w;        // sqrt(sum u_i^2 w_i)
    std::vector<std::vector<double>> snapshots;
    bool stopped_early = false;
};

// One forward-Euler step with the adaptive CFL time step
//   dt = cfl_safety h^2 (q-1) / ((p-1) max(1, q-1) max_face a_face),
//   a_face = (q-1)(s^2 + delta^2)^{(q-2)/2},
// clamped to max_dt and to t_limit - t. Returns the dt taken. The innermost
// face always carries zero flux; the outer face follows config.outer_bc
// (DirichletZero uses a ghost value 0 at distance h/2 past the last midpoint).
double step(RadialState& state, const SolverConfig& config, const EquationParams& params,
            double t_limit = std::numeric_limits<double>::infinity());

// Advance to T_end, recording diagnostics exactly at the sample times (the
// step before each sample is clamped to land on it). sample_times must be
// strictly increasing, inside (state.t, T_end]. If stop_sup > 0 the run halts
// once the sup norm falls below it, appending a final sample at that moment.
Trajectory run_until(RadialState& state, double T_end, const SolverConfig& config,
                     const EquationParams& params, const std::vector<double>& sample_times,
                     bool want_snapshots = false, double stop_sup = 0.0);

// Advance two states in lockstep (shared dt = min of their CFL steps), for
// comparison and contraction experiments where step-by-step ordering matters.
std::pair<Trajectory, Trajectory> run_pair(RadialState& a, RadialState& b, double T_end,
                                           const SolverConfig& config,
                                           const EquationParams& params,
                                           const std::vector<double>& sample_times,
                                           bool want_snapshots = false);

double d_mass(const RadialState& state);
double sup_norm(const RadialState& state);
double support_radius(const RadialState& state);

// Cell-midpoint sampling of a profile onto a grid.
RadialState project(const std::function<double(double)>& profile, const Grid& grid);

double sup_distance(const RadialState& state, const std::function<double(double)>& reference);

}  // namespace qplab
