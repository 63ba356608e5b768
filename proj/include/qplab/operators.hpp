#pragma once

#include <functional>
#include <vector>

#include "qplab/params.hpp"

namespace qplab {

// A radial profile sampled on strictly increasing radii > 0. When the
// analytic derivative callbacks are present they are used directly; otherwise
// derivatives come from second-order finite differences on the samples
// (interior points only).
struct SampledProfile {
    std::vector<double> radii;
    std::vector<double> values;
    std::function<double(double)> du;   // optional: u_r(r)
    std::function<double(double)> d2u;  // optional: u_rr(r)
};

SampledProfile sample_profile(const std::function<double(double)>& f,
                              std::vector<double> radii);

// Values of u_r below this are treated as a vanishing gradient: the q >= 2
// operators return 0 there (degenerate diffusivity), the q < 2 operators
// refuse (the diffusivity blows up).
inline constexpr double kGradientFloor = 1e-12;

// |u_r|^{q-2} ( (p-1) u_rr + ((n-1)/r) u_r ): the n-dimensional radial form.
double radial_rhs(const SampledProfile& profile, int index, const EquationParams& params);
double radial_rhs_at(const SampledProfile& profile, double radius, const EquationParams& params);

// ((p-1)/(q-1)) r^{1-d} ( |u_r|^{q-2} u_r r^{d-1} )_r: the weighted 1-D
// divergence form in the fictitious dimension d. With analytic callbacks the
// derivative is expanded by the product rule; otherwise the flux
// |u_r|^{q-2} u_r r^{d-1} is assembled at neighboring samples and
// differentiated numerically.
double divergence_rhs(const SampledProfile& profile, int index, const EquationParams& params);

// Max relative discrepancy between the two forms over the given radii
// (skipping points under the gradient floor). Analytic profiles agree to
// roundoff; finite-difference profiles to O(h^2).
double equivalence_check(const SampledProfile& profile, const EquationParams& params,
                         const std::vector<double>& sample_radii);

}  // namespace qplab
