#include "qplab/giant.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qplab {

namespace {

double operator_constant(const EquationParams& params) {
    return (params.q - 1.0) / ((params.p - 1.0) * (params.q - 2.0));
}

void require_slow(const EquationParams& params) {
    if (!(params.q > 2.0 + kLinearTol))
        throw std::domain_error("separable profile requires q > 2");
}

// Running trapezoid of V(y) y^{d-1} over uniform nodes r_j = j h.
std::vector<double> inner_cumulative(const std::vector<double>& values,
                                     const std::vector<double>& radii, double d) {
    const size_t N = values.size();
    std::vector<double> I(N, 0.0);
    double prev = values[0] * std::pow(radii[0], d - 1.0);
    for (size_t j = 1; j < N; ++j) {
        const double cur = values[j] * std::pow(radii[j], d - 1.0);
        I[j] = I[j - 1] + 0.5 * (radii[j] - radii[j - 1]) * (prev + cur);
        prev = cur;
    }
    return I;
}

// (c I(r) / r^{d-1})^{1/(q-1)}, with the removable 0/0 at r = 0 set to its
// limit 0 (I ~ V(0) r^d / d there).
std::vector<double> gradient_magnitude(const std::vector<double>& I,
                                       const std::vector<double>& radii,
                                       const EquationParams& params, double d) {
    const double c = operator_constant(params);
    const double inv = 1.0 / (params.q - 1.0);
    std::vector<double> g(I.size(), 0.0);
    for (size_t j = 1; j < I.size(); ++j)
        g[j] = std::pow(c * I[j] / std::pow(radii[j], d - 1.0), inv);
    return g;
}

std::vector<double> unit_nodes(size_t N) {
    std::vector<double> r(N);
    for (size_t j = 0; j < N; ++j) r[j] = static_cast<double>(j) / (N - 1);
    r.back() = 1.0;
    return r;
}

}  // namespace

std::vector<double> apply_T(const std::vector<double>& values,
                            const EquationParams& params) {
    require_slow(params);
    if (values.size() < 2) throw std::invalid_argument("profile needs at least 2 nodes");
    for (double v : values) {
        if (!(v >= 0.0)) throw std::invalid_argument("profile values must be nonnegative");
        if (!std::isfinite(v)) throw std::invalid_argument("profile values must be finite");
    }
    const double d = derive(params).d;
    const std::vector<double> radii = unit_nodes(values.size());
    const std::vector<double> g = gradient_magnitude(inner_cumulative(values, radii, d),
                                                     radii, params, d);

    const size_t N = values.size();
    std::vector<double> TV(N, 0.0);
    for (size_t j = N - 1; j-- > 0;)
        TV[j] = TV[j + 1] + 0.5 * (radii[j + 1] - radii[j]) * (g[j] + g[j + 1]);
    return TV;
}

double giant_upper_start(const EquationParams& params) {
    require_slow(params);
    const double d = derive(params).d;
    const double c = operator_constant(params);
    return std::max(1.0, 2.0 * std::pow(c / d, 1.0 / (params.q - 2.0)));
}

double giant_lower_bound(const EquationParams& params) {
    require_slow(params);
    const double q = params.q;
    const double d = derive(params).d;
    const double k = (q - 1.0) / (d * (q - 2.0) * (params.p - 1.0));
    // int_{1/2}^1 (k r)^{1/(q-1)} dr in closed form (power integrand)
    const double integral = std::pow(k, 1.0 / (q - 1.0)) * ((q - 1.0) / q) *
                            (1.0 - std::pow(0.5, q / (q - 1.0)));
    return std::pow(integral, (q - 1.0) / (q - 2.0));
}

GiantProfile fixed_point(const EquationParams& params, double tol, int max_iter,
                         int nodes) {
    require_slow(params);
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
    if (max_iter < 1) throw std::invalid_argument("max_iter must be at least 1");
    if (nodes < 16) throw std::invalid_argument("profile needs at least 16 nodes");

    const double M = giant_upper_start(params);
    const double floor = 0.5 * giant_lower_bound(params);

    std::vector<double> V(static_cast<size_t>(nodes), M);
    GiantReport report;
    for (int k = 1; k <= max_iter; ++k) {
        std::vector<double> next = apply_T(V, params);
        double change = 0.0;
        for (size_t j = 0; j < V.size(); ++j) {
            if (next[j] > V[j] + 1e-14 * M)
                throw std::logic_error("iteration is not pointwise decreasing");
            change = std::max(change, std::abs(next[j] - V[j]));
        }
        V = std::move(next);
        report.iterations = k;
        report.final_change = change;
        const double sup = *std::max_element(V.begin(), V.end());
        if (sup < floor)
            throw std::runtime_error("iteration collapsed toward the trivial fixed point");
        if (change < tol) break;
        if (k == max_iter)
            throw std::runtime_error("fixed point did not converge within " +
                                     std::to_string(max_iter) + " iterations");
    }

    GiantProfile profile{params, unit_nodes(V.size()), std::move(V), report};
    const std::vector<double> check = apply_T(profile.values, params);
    double res = 0.0;
    for (size_t j = 0; j < check.size(); ++j)
        res = std::max(res, std::abs(check[j] - profile.values[j]));
    profile.report.integral_residual = res;
    profile.report.ode_residual = ode_residual(profile);
    return profile;
}

double ode_residual(const GiantProfile& profile) {
    const size_t N = profile.values.size();
    if (N < 3) throw std::invalid_argument("profile needs at least 3 nodes");
    const double d = derive(profile.params).d;
    const std::vector<double> g = gradient_magnitude(
        inner_cumulative(profile.values, profile.radii, d), profile.radii,
        profile.params, d);

    const double r_lo = profile.radii.back() / 8.0;
    double res = 0.0;
    for (size_t j = 1; j + 1 < N; ++j) {
        if (profile.radii[j] < r_lo) continue;
        const double dv = (profile.values[j + 1] - profile.values[j - 1]) /
                          (profile.radii[j + 1] - profile.radii[j - 1]);
        res = std::max(res, std::abs(dv + g[j]));
    }
    return res;
}

GiantProfile rescale(const GiantProfile& profile, double R_target) {
    if (!(R_target > 0.0)) throw std::invalid_argument("target radius must be positive");
    if (std::abs(profile.radii.back() - 1.0) > 1e-12)
        throw std::invalid_argument("rescale expects a profile on [0, 1]");
    const double amp = std::pow(R_target, profile.params.q / (profile.params.q - 2.0));
    GiantProfile out = profile;
    for (double& r : out.radii) r *= R_target;
    for (double& v : out.values) v *= amp;
    return out;
}

double separable_eval(const GiantProfile& profile, double r, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("time must be positive");
    const double R = profile.radii.back();
    if (!(r >= 0.0 && r <= R))
        throw std::invalid_argument("radius outside the profile domain");
    const size_t N = profile.radii.size();
    const double h = R / (N - 1);
    const size_t j = std::min(static_cast<size_t>(r / h), N - 2);
    // Snap node hits to the nodal value so roundoff in r / h cannot leak a
    // spurious contribution; in particular the boundary zero at r = R is exact.
    double w = (r - profile.radii[j]) / h;
    if (r <= profile.radii[j]) w = 0.0;
    else if (r >= profile.radii[j + 1]) w = 1.0;
    const double V = (1.0 - w) * profile.values[j] + w * profile.values[j + 1];
    return std::pow(t, -1.0 / (profile.params.q - 2.0)) * V;
}

}  // namespace qplab
