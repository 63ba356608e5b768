#include "qplab/operators.hpp"

#include <cmath>
#include <stdexcept>

namespace qplab {

namespace {

void check_profile(const SampledProfile& profile) {
    if (profile.radii.size() != profile.values.size() || profile.radii.size() < 3)
        throw std::invalid_argument("profile needs at least 3 matching radius/value samples");
    for (size_t i = 0; i < profile.radii.size(); ++i) {
        if (!std::isfinite(profile.values[i]))
            throw std::invalid_argument("profile values must be finite");
        if (i > 0 && !(profile.radii[i] > profile.radii[i - 1]))
            throw std::invalid_argument("profile radii must be strictly increasing");
    }
    if (!(profile.radii.front() > 0.0))
        throw std::invalid_argument("profile radii must be positive");
}

struct Derivs {
    double ur;
    double urr;
};

// Second-order three-point formulas on a possibly nonuniform grid.
Derivs fd_derivs(const SampledProfile& profile, int i) {
    const int last = static_cast<int>(profile.radii.size()) - 1;
    if (i < 1 || i > last - 1)
        throw std::domain_error("finite-difference derivatives need an interior sample");
    const double a = profile.radii[i] - profile.radii[i - 1];
    const double b = profile.radii[i + 1] - profile.radii[i];
    const double um = profile.values[i - 1], u0 = profile.values[i], up = profile.values[i + 1];
    Derivs d;
    d.ur = (up * a * a - um * b * b + u0 * (b * b - a * a)) / (a * b * (a + b));
    d.urr = 2.0 * (um * b + up * a - u0 * (a + b)) / (a * b * (a + b));
    return d;
}

Derivs get_derivs(const SampledProfile& profile, int i) {
    if (profile.du && profile.d2u)
        return {profile.du(profile.radii[i]), profile.d2u(profile.radii[i])};
    return fd_derivs(profile, i);
}

double degenerate_or_throw(double q) {
    if (q >= 2.0) return 0.0;  // 0^{q-2} * bounded -> 0
    throw std::domain_error("singular point: vanishing gradient with q < 2");
}

}  // namespace

SampledProfile sample_profile(const std::function<double(double)>& f,
                              std::vector<double> radii) {
    SampledProfile profile;
    profile.radii = std::move(radii);
    profile.values.reserve(profile.radii.size());
    for (double r : profile.radii) profile.values.push_back(f(r));
    check_profile(profile);
    return profile;
}

double radial_rhs(const SampledProfile& profile, int index, const EquationParams& params) {
    check_profile(profile);
    if (index < 0 || index >= static_cast<int>(profile.radii.size()))
        throw std::out_of_range("profile index out of range");
    const double r = profile.radii[index];
    if (!(r > 0.0)) throw std::domain_error("radial operator requires r > 0");
    const Derivs d = get_derivs(profile, index);
    if (std::abs(d.ur) < kGradientFloor) return degenerate_or_throw(params.q);
    return std::pow(std::abs(d.ur), params.q - 2.0) *
           ((params.p - 1.0) * d.urr + (params.n - 1.0) / r * d.ur);
}

double radial_rhs_at(const SampledProfile& profile, double radius, const EquationParams& params) {
    check_profile(profile);
    int best = 1;
    double best_dist = std::abs(profile.radii[1] - radius);
    for (int i = 1; i + 1 < static_cast<int>(profile.radii.size()); ++i) {
        const double dist = std::abs(profile.radii[i] - radius);
        if (dist < best_dist) { best = i; best_dist = dist; }
    }
    return radial_rhs(profile, best, params);
}

double divergence_rhs(const SampledProfile& profile, int index, const EquationParams& params) {
    check_profile(profile);
    if (index < 0 || index >= static_cast<int>(profile.radii.size()))
        throw std::out_of_range("profile index out of range");
    const double r = profile.radii[index];
    if (!(r > 0.0)) throw std::domain_error("radial operator requires r > 0");
    const double q = params.q;
    const DerivedExponents e = derive(params);
    const double c_pre = (params.p - 1.0) / (q - 1.0);

    if (profile.du && profile.d2u) {
        const double ur = profile.du(r), urr = profile.d2u(r);
        if (std::abs(ur) < kGradientFloor) return degenerate_or_throw(q);
        // Product rule on |u_r|^{q-2} u_r r^{d-1}, then times r^{1-d}.
        const double m = std::pow(std::abs(ur), q - 2.0);
        return c_pre * ((q - 1.0) * m * urr + (e.d - 1.0) / r * m * ur);
    }

    // Numeric path: assemble the flux G = |u_r|^{q-2} u_r r^{d-1} at the
    // neighboring samples and differentiate it.
    const int last = static_cast<int>(profile.radii.size()) - 1;
    if (index < 2 || index > last - 2)
        throw std::domain_error("numeric divergence form needs two interior neighbors");
    double G[3];
    for (int k = -1; k <= 1; ++k) {
        const Derivs d = fd_derivs(profile, index + k);
        if (std::abs(d.ur) < kGradientFloor) return degenerate_or_throw(q);
        G[k + 1] = std::pow(std::abs(d.ur), q - 2.0) * d.ur *
                   std::pow(profile.radii[index + k], e.d - 1.0);
    }
    const double a = profile.radii[index] - profile.radii[index - 1];
    const double b = profile.radii[index + 1] - profile.radii[index];
    const double dG = (G[2] * a * a - G[0] * b * b + G[1] * (b * b - a * a)) / (a * b * (a + b));
    return c_pre * std::pow(r, 1.0 - e.d) * dG;
}

double equivalence_check(const SampledProfile& profile, const EquationParams& params,
                         const std::vector<double>& sample_radii) {
    check_profile(profile);
    double worst = 0.0;
    int admitted = 0;
    for (double r : sample_radii) {
        int i = 0;
        double dist = std::abs(profile.radii[0] - r);
        for (int k = 1; k < static_cast<int>(profile.radii.size()); ++k) {
            const double dk = std::abs(profile.radii[k] - r);
            if (dk < dist) { i = k; dist = dk; }
        }
        const int last = static_cast<int>(profile.radii.size()) - 1;
        if (i < 2 || i > last - 2) continue;
        double lhs, rhs;
        try {
            lhs = radial_rhs(profile, i, params);
            rhs = divergence_rhs(profile, i, params);
        } catch (const std::domain_error&) {
            continue;  // gradient floor: not an admissible comparison point
        }
        const double denom = std::max({std::abs(lhs), std::abs(rhs), 1e-30});
        worst = std::max(worst, std::abs(lhs - rhs) / denom);
        ++admitted;
    }
    if (admitted == 0) throw std::invalid_argument("no admissible sample radii");
    return worst;
}

}  // namespace qplab
