#pragma once

#include <vector>

#include "qplab/params.hpp"

namespace qplab {

// Convergence and self-consistency record of a fixed-point run.
struct GiantReport {
    int iterations = 0;
    double final_change = 0.0;       // sup|V_{k+1} - V_k| at the stopping step
    double integral_residual = 0.0;  // sup|TV - V| of the returned profile
    double ode_residual = 0.0;       // first-order equation residual (see below)
};

// Profile V of the separable solution t^{-1/(q-2)} V(r) with V = 0 on the
// boundary sphere. Nodes are uniform; the native domain is [0, 1] and
// rescale() produces copies on [0, R].
struct GiantProfile {
    EquationParams params;
    std::vector<double> radii;
    std::vector<double> values;
    GiantReport report;
};

// One application of the integral operator
//
//   (TV)(R) = int_R^1 ( (q-1)/(p-1) * int_0^r (V(y)/(q-2)) (y/r)^{d-1} dy )^{1/(q-1)} dr
//
// on a uniform nodal profile over [0, 1]. The inner integral is accumulated
// once as a running trapezoid sum of V(y) y^{d-1} and divided by r^{d-1};
// the outer integral is a trapezoid sweep from r = 1 leftward, so
// (TV)(1) = 0 exactly. Requires q > 2 and V >= 0.
std::vector<double> apply_T(const std::vector<double>& values,
                            const EquationParams& params);

// Starting constant for the monotone iteration: any M with
// (c M / d)^{1/(q-1)} <= M, c = (q-1)/((p-1)(q-2)), makes T map [0, M] into
// itself. Returns max(1, 2 (c/d)^{1/(q-2)}).
double giant_upper_start(const EquationParams& params);

// Nontriviality floor for sup V, from the closed-form evaluation of
// m^{(q-2)/(q-1)} <= int_{1/2}^1 (r (q-1)/(d (q-2)(p-1)))^{1/(q-1)} dr.
double giant_lower_bound(const EquationParams& params);

// Monotone iteration V_0 = giant_upper_start, V_{k+1} = T V_k, stopping when
// sup|V_{k+1} - V_k| < tol. The sequence must decrease pointwise at every
// step (T is order-preserving); a violation or a collapse of sup V below
// giant_lower_bound()/2 aborts, as does running past max_iter.
GiantProfile fixed_point(const EquationParams& params, double tol = 1e-10,
                         int max_iter = 200, int nodes = 1024);

// Residual of the gradient equation V'(r) = -(c r^{1-d} int_0^r V y^{d-1} dy)^{1/(q-1)}:
// max over interior nodes with r >= R/8 of |central-difference V' + rhs|.
// The inner eighth is excluded because V'' has a cusp at the origin
// (V ~ V(0) - const r^{q/(q-1)}) that degrades the central difference there
// while the equation itself forces V'(0) = 0.
double ode_residual(const GiantProfile& profile);

// Separable profile on the ball of radius R: V_R(r) = R^{q/(q-2)} V(r/R).
// Input must live on [0, 1].
GiantProfile rescale(const GiantProfile& profile, double R_target);

// t^{-1/(q-2)} * V(r) with linear interpolation between nodes. Requires
// t > 0 and r within the profile domain.
double separable_eval(const GiantProfile& profile, double r, double t);

}  // namespace qplab
