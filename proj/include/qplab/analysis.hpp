#pragma once

#include <optional>
#include <vector>

#include "qplab/closed_forms.hpp"
#include "qplab/params.hpp"
#include "qplab/solver1d.hpp"

namespace qplab {

// Least-squares power-law fit on log-log samples.
struct FitResult {
    double exponent;    // fitted exponent (sign convention per operation)
    double std_error;   // standard error of the fitted slope
    double window_lo;   // fit window (time or radius, per operation)
    double window_hi;
    int samples;
};

// sup u ~ t^{-alpha_hat} over trajectory samples with t in [t_min, t_max].
// Returns alpha_hat (positive for decaying data): the negated slope of
// log sup vs log t. Requires at least 5 window samples, all sup > 0.
FitResult fit_decay_exponent(const Trajectory& traj, double t_min, double t_max);

// support radius ~ t^{1/lambda} over the same kind of window. Slow regime
// only, and the support must stay strictly inside the grid throughout the
// window (a saturated support fits the box, not the solution).
FitResult fit_support_exponent(const Trajectory& traj, const EquationParams& params,
                               double grid_R, double t_min, double t_max);

// u ~ r^{-q/(2-q)} over cell midpoints with r in [r_lo, r_hi] at one sample.
// Fast regime under the range condition only. Guards: every window value
// must exceed 10x the solver's gradient-regularization floor delta, and the
// last cell must hold less than 1e-8 of the sup (boundary contamination).
FitResult tail_exponent(const RadialState& state, const EquationParams& params,
                        double r_lo, double r_hi, double delta);

struct BarenblattFit {
    double C_star;        // argmin C of sup|u - B(., t; C)|
    double renorm_error;  // t^alpha * minimized sup distance
};

// Golden-section search for the best-matching source solution at time t,
// 1e-6 relative tolerance on C. The bracket [C_lo, C_hi] must contain an
// interior minimum.
BarenblattFit best_fit_barenblatt(const RadialState& state, const EquationParams& params,
                                  double t, double C_lo, double C_hi);

// The mass-preserving zoom u_k(r) = k^{d/lambda} u(k^{1/lambda} r) at time
// t/k, resampled onto the same grid by linear interpolation. The support of
// u must fit inside the sampled window [0, k^{1/lambda} R].
RadialState rescaled_orbit(const RadialState& state, const EquationParams& params,
                           double kappa);

// Radial monotonicity outside the initial support: max(0, largest increase
// of u across consecutive cells with r >= R0). Zero for profiles that are
// nonincreasing beyond R0.
double alexandrov_defect(const RadialState& state, double R0);

// First sample time with sup < threshold, if any. The caller should note
// that delta-regularization biases late-time decay when interpreting this.
std::optional<double> extinction_time(const Trajectory& traj, double threshold);

struct MonotonicityReport {
    double defect;  // min over cells and consecutive samples of the increment
    double scale;   // max of t^{1/(q-2)} u over all samples, for tolerances
};

// Discrete check that t^{1/(q-2)} u_i(t) is nondecreasing in t, over a
// snapshot trajectory of a bounded-domain (DirichletZero) run with q > 2
// and nonnegative data.
MonotonicityReport monotonicity_defect(const Trajectory& traj,
                                       const EquationParams& params);

struct HarnackReport {
    int index;        // probe cell
    double t0;
    double r;
    double theta;     // C_theta r^q / u0^{q-2}
    double u0;        // u at the probe at t0
    double inf_ball;  // inf over |x - x0| <= r at t0 + theta
    double mu;        // u0 / inf_ball (infinity when the inf vanishes)
};

// Evolves a copy of `at_t0` forward by the intrinsic waiting time theta and
// measures mu = u(x0,t0) / inf ball. Containment preconditions: the probe
// must have history t0 >= 4 theta behind it, room t0 + 4 theta <= horizon
// ahead, and x0 + 4r inside the grid. mu is reported, never asserted against
// a theoretical value.
HarnackReport harnack_probe(const RadialState& at_t0, const EquationParams& params,
                            const SolverConfig& config, int index, double r,
                            double C_theta, double horizon);

struct OscillationScan {
    std::vector<double> radii;
    std::vector<double> osc;  // max - min over each intrinsic cylinder
    double omega0;            // oscillation over the reference cylinder (depth r_max^q)
    double a0;                // (1/omega0)^{q-2}
    double exponent;          // slope of log osc vs log r (NaN when degenerate)
    double std_error;
    bool zero_oscillation;
};

// Measures oscillation over shrinking intrinsic cylinders
// [x0 - r, x0 + r] x [t0 - a0 r^q, t0] ending at t0, with a0 = (1/omega0)^{q-2}
// calibrated from the oscillation omega0 over the reference cylinder of depth
// r_max^q. Two solver passes from `base` (t_base < t0): one to calibrate
// omega0, one to record the intrinsic window. radii must be decreasing and
// every cylinder contained in the run.
OscillationScan oscillation_scan(const RadialState& base, const EquationParams& params,
                                 const SolverConfig& config, int index, double t0,
                                 const std::vector<double>& radii);

}  // namespace qplab
