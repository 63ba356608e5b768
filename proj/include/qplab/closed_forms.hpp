#pragma once

#include "qplab/params.hpp"

namespace qplab {

// A Barenblatt-type reference solution. All branches share the rescaled time
// s = ((p-1)/(q-1)) (t + t_delay); the profile variable is xi = r / s^{1/lambda}.
//
//   slow (q > 2):  s^{-d/lambda} ( C - ((q-2)/q) lambda^{1/(1-q)} xi^{q/(q-1)} )_+^{(q-1)/(q-2)}
//   fast (q < 2):  s^{-d/lambda} ( C + ((2-q)/q) lambda^{1/(1-q)} xi^{q/(q-1)} )^{-(q-1)/(2-q)}
//   linear (q = 2): C tt^{-d/2} exp(-r^2 / (4 (p-1) tt)),  tt = t + t_delay
//
// The fast branch is only valid above the range condition (lambda > 0).
struct BarenblattSpec {
    EquationParams params;
    double C = 1.0;         // mass constant, > 0
    double t_delay = 0.0;   // time shift, >= 0
    double r_center = 0.0;  // radial offset of the profile peak
};

double barenblatt_eval(const BarenblattSpec& spec, double r, double t);

// Edge of the support (slow regime only): the radius where the bracket above
// vanishes, r_center + s^{1/lambda} (C q/(q-2))^{(q-1)/q} lambda^{1/q}.
// Throws std::domain_error for fast/linear specs (unbounded support).
double support_radius(const BarenblattSpec& spec, double t);

// integral of B(r,t) r^{d-1} dr over [0, inf), by adaptive composite Simpson.
// Slow: panels graded into the free-boundary cusp. Fast: tail truncated where
// the integrand falls below 1e-14 of its peak, with geometrically growing
// panels. Result is accepted only if doubling the panel count moves it by
// less than 1e-9 relative; otherwise throws.
double d_mass(const BarenblattSpec& spec, double t, int quad_cells = 256);

// integral of B(r,t) r^{n-1} dr; across times the ratio follows (t1/t2)^{-mu}.
double n_moment(const BarenblattSpec& spec, double t, int quad_cells = 256);

// The C whose profile carries the given d-mass. Linear branch in closed form
// (mass = C (4(p-1))^{d/2} Gamma(d/2) / 2); slow and fast branches invert the
// scaling law mass(C) = mass(1) C^{(q-1) lambda / (q (q-2))}.
double barenblatt_C_for_mass(const EquationParams& params, double mass);

// Planar traveling wave u(x1, t) = c_amp (a t + x1 - b)_+^{(q-1)/(q-2)}, q > 2.
// c_amp is calibrated numerically: a root find drives the finite-difference
// residual of u_t = (p-1)|u_x|^{q-2} u_xx to zero at a reference point.
struct TravelingWaveSpec {
    EquationParams params;
    double a;      // front speed, > 0
    double b;      // phase offset
    double c_amp;  // calibrated amplitude
};

TravelingWaveSpec make_traveling_wave(const EquationParams& params, double a, double b);
double traveling_wave_eval(const TravelingWaveSpec& spec, double x1, double t);

// Central finite-difference residual (step h in both r and t) of
//   u_t - ((p-1)/(q-1)) |u_r|^{q-2} ( (q-1) u_rr + ((d-1)/r) u_r )
// evaluated on barenblatt_eval. O(h^2) at interior points of the positivity
// set; throws if the stencil touches r <= 0 or the free boundary.
double self_similar_residual(const BarenblattSpec& spec, double r, double t, double h);

}  // namespace qplab
