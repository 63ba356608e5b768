#include "qplab/params.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qplab {

EquationParams::EquationParams(int n_, double p_, double q_) : n(n_), p(p_), q(q_) {
    if (n < 1) throw std::invalid_argument("n must be a positive integer");
    if (!(p > 1.0)) throw std::invalid_argument("p must exceed 1");
    if (!(q > 1.0)) throw std::invalid_argument("q must exceed 1");
    if (!std::isfinite(p) || !std::isfinite(q))
        throw std::invalid_argument("p and q must be finite");
}

DerivedExponents derive(const EquationParams& params) {
    DerivedExponents e;
    e.d = (params.n - 1) * (params.q - 1) / (params.p - 1) + 1.0;
    e.lambda = e.d * (params.q - 2.0) + params.q;
    e.alpha = e.d / e.lambda;
    e.spread = 1.0 / e.lambda;
    e.sigma = e.d - params.n;
    e.mu = e.sigma / e.lambda;
    return e;
}

bool range_condition(const EquationParams& params) {
    const DerivedExponents e = derive(params);
    const bool by_inequality = 2.0 * params.n < params.q * (params.n - 1) + 2.0 * params.p;
    const bool by_lambda = e.lambda > 0.0;
    const bool by_q = params.q > 2.0 * e.d / (e.d + 1.0);
    // The three are the same condition algebraically; a disagreement away from
    // the lambda = 0 boundary means the formulas were mangled.
    if ((by_inequality != by_lambda || by_inequality != by_q) &&
        std::abs(e.lambda) > 1e-9 * (std::abs(params.q) + std::abs(e.d)))
        throw std::logic_error("range-condition formulations disagree");
    return by_inequality;
}

Regime regime(const EquationParams& params) {
    if (std::abs(params.q - 2.0) <= kLinearTol) return Regime::Linear;
    return params.q > 2.0 ? Regime::Slow : Regime::Fast;
}

double scaling_transform(const EquationParams& params, double A, double B) {
    if (!(A > 0.0) || !(B > 0.0))
        throw std::invalid_argument("scaling factors must be positive");
    return std::pow(A, params.q - 2.0) * std::pow(B, params.q);
}

std::pair<double, double> mass_preserving_scaling(const EquationParams& params, double B) {
    if (!(B > 0.0)) throw std::invalid_argument("scaling factor must be positive");
    const DerivedExponents e = derive(params);
    return {std::pow(B, e.d), std::pow(B, e.lambda)};
}

}  // namespace qplab
