#pragma once

#include <utility>

namespace qplab {

// Diffusion regime, classified by q relative to 2.
enum class Regime { Slow, Linear, Fast };

// Parameters of the gradient-diffusion equation
//
//     u_t = |Du|^{q-2} (Lap u + (p-2) Lap_inf^N u)
//
// in spatial dimension n. Radial solutions of this equation solve a weighted
// one-dimensional q-parabolic equation in the fictitious dimension
// d = (n-1)(q-1)/(p-1) + 1; everything downstream works on that 1-D form.
struct EquationParams {
    int n;      // spatial dimension, >= 1 (n = 1 collapses to d = 1)
    double p;   // > 1
    double q;   // > 1

    EquationParams(int n_, double p_, double q_);
};

// Exponents derived from (n, p, q). lambda may be <= 0 below the range
// condition; the fields are reported as computed either way.
struct DerivedExponents {
    double d;        // fictitious dimension (n-1)(q-1)/(p-1) + 1
    double lambda;   // d(q-2) + q
    double alpha;    // d/lambda: sup-norm decay exponent, sup u ~ t^{-alpha}
    double spread;   // 1/lambda: support growth exponent (slow regime)
    double sigma;    // d - n
    double mu;       // sigma/lambda: n-moment exponent, moment ~ t^{-mu}
};

// q values within this distance of 2 are routed to the linear (heat) branch.
inline constexpr double kLinearTol = 1e-12;

DerivedExponents derive(const EquationParams& params);

// True iff 2n < q(n-1) + 2p. Equivalent to lambda > 0 and to q > 2d/(d+1);
// all three are evaluated and must agree (up to roundoff at the boundary).
bool range_condition(const EquationParams& params);

Regime regime(const EquationParams& params);

// u(x,t) -> A u(Bx, Ct) maps solutions to solutions when C = A^{q-2} B^q.
double scaling_transform(const EquationParams& params, double A, double B);

// The (A, C) pair with A = B^d, C = B^lambda that additionally preserves the
// d-mass integral u r^{d-1} dr.
std::pair<double, double> mass_preserving_scaling(const EquationParams& params,
                                                  double B);

}  // namespace qplab
