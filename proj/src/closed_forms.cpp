#include "qplab/closed_forms.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace qplab {

namespace {

void validate(const BarenblattSpec& spec) {
    if (!(spec.C > 0.0)) throw std::invalid_argument("Barenblatt mass constant C must be positive");
    if (spec.t_delay < 0.0) throw std::invalid_argument("t_delay must be nonnegative");
    if (spec.r_center < 0.0) throw std::invalid_argument("r_center must be nonnegative");
    if (regime(spec.params) == Regime::Fast && !range_condition(spec.params))
        throw std::invalid_argument("fast Barenblatt branch requires the range condition");
}

double rescaled_time(const BarenblattSpec& spec, double t) {
    const double tt = t + spec.t_delay;
    if (!(tt > 0.0)) throw std::domain_error("time plus delay must be positive");
    return tt;
}

// Composite Simpson over explicit panel breakpoints.
double simpson(const std::function<double(double)>& f, const std::vector<double>& xs) {
    double acc = 0.0;
    for (size_t j = 0; j + 1 < xs.size(); ++j) {
        const double a = xs[j], b = xs[j + 1];
        acc += (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b));
    }
    return acc;
}

// Panels on [lo, hi] clustered toward hi with cubic grading. The grading
// equidistributes the Simpson error for integrands behaving like
// (hi - x)^beta with beta > 1, which covers every slow-branch cusp.
std::vector<double> graded_panels(double lo, double hi, int count) {
    std::vector<double> xs(count + 1);
    for (int j = 0; j <= count; ++j) {
        const double v = static_cast<double>(count - j) / count;
        xs[j] = hi - (hi - lo) * v * v * v;
    }
    xs.front() = lo;
    xs.back() = hi;
    return xs;
}

std::vector<double> uniform_panels(double lo, double hi, int count) {
    std::vector<double> xs(count + 1);
    for (int j = 0; j <= count; ++j) xs[j] = lo + (hi - lo) * j / count;
    return xs;
}

// Quartic grading into the origin near the core (the weight r^{d-1} has a
// cusp there for fractional d), log-spaced further out for power-law tails.
std::vector<double> core_tail_panels(double core, double hi, int count) {
    const int half = count / 2;
    std::vector<double> xs(half + 1);
    for (int j = 0; j <= half; ++j) {
        const double v = static_cast<double>(j) / half;
        xs[j] = core * v * v * v * v;
    }
    const double ratio = std::pow(hi / core, 1.0 / (count - half));
    double x = core;
    for (int j = 0; j < count - half; ++j) {
        x *= ratio;
        xs.push_back(x);
    }
    xs.back() = hi;
    return xs;
}

// Integrates B(r,t) r^{weight_exp} dr with panel-count doubling until two
// successive refinements agree to 1e-9 relative.
double integrate_profile(const BarenblattSpec& spec, double t, double weight_exp,
                         int quad_cells) {
    if (quad_cells < 64) throw std::invalid_argument("quad_cells must be at least 64");
    const DerivedExponents e = derive(spec.params);
    const Regime reg = regime(spec.params);
    const double tt = rescaled_time(spec, t);

    const auto f = [&](double r) {
        return barenblatt_eval(spec, r, t) * std::pow(r, weight_exp);
    };

    // Domain and panel layout per branch.
    double lo = 0.0, hi = 0.0;
    bool inner_cusp = false;
    std::function<std::vector<double>(int)> panels;
    if (reg == Regime::Slow) {
        const double edge = support_radius(spec, t) - spec.r_center;
        lo = std::max(0.0, spec.r_center - edge);
        hi = spec.r_center + edge;
        inner_cusp = lo > 0.0;
        if (inner_cusp) {
            // Free boundary on both sides of an annular profile: grade into each.
            // graded_panels clusters toward its hi argument; the left half is
            // its mirror image, clustered toward lo.
            panels = [lo, hi](int k) {
                const double mid = 0.5 * (lo + hi);
                const std::vector<double> right = graded_panels(mid, hi, k / 2);
                std::vector<double> xs(k / 2 + 1);
                for (int j = 0; j <= k / 2; ++j) xs[j] = lo + (hi - right[k / 2 - j]);
                xs.insert(xs.end(), right.begin() + 1, right.end());
                return xs;
            };
        } else {
            panels = [lo, hi](int k) { return graded_panels(lo, hi, k); };
        }
    } else if (reg == Regime::Linear) {
        const double width = std::sqrt(4.0 * (spec.params.p - 1.0) * tt * 37.0);
        lo = std::max(0.0, spec.r_center - width);
        hi = spec.r_center + width;
        panels = [lo, hi](int k) { return uniform_panels(lo, hi, k); };
    } else {
        // Fast branch: locate the integrand peak, then extend until the
        // integrand drops below 1e-14 of it.
        const double s = (spec.params.p - 1.0) / (spec.params.q - 1.0) * tt;
        const double rscale = std::max(std::pow(s, 1.0 / e.lambda), 1e-12) + spec.r_center;
        double peak = 0.0;
        for (int j = 0; j <= 50; ++j) {
            const double r = rscale * std::pow(10.0, -3.0 + 4.0 * j / 50.0);
            peak = std::max(peak, f(r));
        }
        double rcut = rscale;
        while (f(rcut) > 1e-14 * peak) {
            rcut *= 1.25;
            if (rcut > 1e12 * rscale)
                throw std::runtime_error("fast-branch tail truncation diverged");
        }
        const double core = std::min(2.0 * rscale, 0.5 * rcut);
        panels = [core, rcut](int k) { return core_tail_panels(core, rcut, k); };
        hi = rcut;
    }

    double prev = simpson(f, panels(quad_cells));
    int k = quad_cells;
    for (int round = 0; round < 6; ++round) {
        k *= 2;
        const double cur = simpson(f, panels(k));
        if (std::abs(cur - prev) <= 1e-9 * std::max(std::abs(cur), 1e-300)) return cur;
        prev = cur;
    }
    throw std::runtime_error("quadrature did not converge");
}

}  // namespace

double barenblatt_eval(const BarenblattSpec& spec, double r, double t) {
    validate(spec);
    const double tt = rescaled_time(spec, t);
    const DerivedExponents e = derive(spec.params);
    const double p = spec.params.p, q = spec.params.q;
    const double rr = std::abs(r - spec.r_center);

    switch (regime(spec.params)) {
        case Regime::Linear:
            return spec.C * std::pow(tt, -0.5 * e.d) *
                   std::exp(-rr * rr / (4.0 * (p - 1.0) * tt));
        case Regime::Slow: {
            const double s = (p - 1.0) / (q - 1.0) * tt;
            const double xi = rr * std::pow(s, -1.0 / e.lambda);
            const double bracket = spec.C - (q - 2.0) / q * std::pow(e.lambda, 1.0 / (1.0 - q)) *
                                                std::pow(xi, q / (q - 1.0));
            if (bracket <= 0.0) return 0.0;
            return std::pow(s, -e.d / e.lambda) * std::pow(bracket, (q - 1.0) / (q - 2.0));
        }
        case Regime::Fast: {
            const double s = (p - 1.0) / (q - 1.0) * tt;
            const double xi = rr * std::pow(s, -1.0 / e.lambda);
            const double bracket = spec.C + (2.0 - q) / q * std::pow(e.lambda, 1.0 / (1.0 - q)) *
                                                std::pow(xi, q / (q - 1.0));
            return std::pow(s, -e.d / e.lambda) * std::pow(bracket, -(q - 1.0) / (2.0 - q));
        }
    }
    return 0.0;  // unreachable
}

double support_radius(const BarenblattSpec& spec, double t) {
    validate(spec);
    if (regime(spec.params) != Regime::Slow)
        throw std::domain_error("unbounded support: support_radius requires the slow regime");
    const double tt = rescaled_time(spec, t);
    const DerivedExponents e = derive(spec.params);
    const double p = spec.params.p, q = spec.params.q;
    const double s = (p - 1.0) / (q - 1.0) * tt;
    const double xi_edge = std::pow(spec.C * q / (q - 2.0), (q - 1.0) / q) *
                           std::pow(e.lambda, 1.0 / q);
    return spec.r_center + std::pow(s, 1.0 / e.lambda) * xi_edge;
}

double d_mass(const BarenblattSpec& spec, double t, int quad_cells) {
    validate(spec);
    return integrate_profile(spec, t, derive(spec.params).d - 1.0, quad_cells);
}

double n_moment(const BarenblattSpec& spec, double t, int quad_cells) {
    validate(spec);
    return integrate_profile(spec, t, spec.params.n - 1.0, quad_cells);
}

double barenblatt_C_for_mass(const EquationParams& params, double mass) {
    if (!(mass > 0.0)) throw std::invalid_argument("mass must be positive");
    const DerivedExponents e = derive(params);
    if (regime(params) == Regime::Linear)
        return mass * 2.0 / (std::pow(4.0 * (params.p - 1.0), 0.5 * e.d) *
                             std::tgamma(0.5 * e.d));
    if (!range_condition(params))
        throw std::domain_error("no source-type family below the range condition");
    const BarenblattSpec unit{params, 1.0, 0.0, 0.0};
    const double mass_1 = d_mass(unit, 1.0);
    const double expo = (params.q - 1.0) * e.lambda / (params.q * (params.q - 2.0));
    return std::pow(mass / mass_1, 1.0 / expo);
}

TravelingWaveSpec make_traveling_wave(const EquationParams& params, double a, double b) {
    if (!(params.q > 2.0)) throw std::domain_error("traveling wave requires q > 2");
    if (!(a > 0.0)) throw std::invalid_argument("wave speed must be positive");
    const double p = params.p, q = params.q;
    const double m = (q - 1.0) / (q - 2.0);

    // Finite-difference residual of u_t = (p-1)|u_x|^{q-2} u_xx at the
    // reference point with a t + x - b = 1 (t = 1).
    const auto wave = [&](double c, double x, double t) {
        const double z = a * t + x - b;
        return z <= 0.0 ? 0.0 : c * std::pow(z, m);
    };
    const double x_ref = b + 1.0 - a, t_ref = 1.0, h = 1e-5;
    const auto residual = [&](double c) {
        const double ut = (wave(c, x_ref, t_ref + h) - wave(c, x_ref, t_ref - h)) / (2.0 * h);
        const double ux = (wave(c, x_ref + h, t_ref) - wave(c, x_ref - h, t_ref)) / (2.0 * h);
        const double uxx = (wave(c, x_ref + h, t_ref) - 2.0 * wave(c, x_ref, t_ref) +
                            wave(c, x_ref - h, t_ref)) / (h * h);
        return ut - (p - 1.0) * std::pow(std::abs(ux), q - 2.0) * uxx;
    };

    // residual(c) = c (a m + O(h^2)) - (p-1) c^{q-1} (...): positive for small c,
    // negative for large c, with a single root in between.
    double lo = 1e-8, hi = 1.0;
    int guard = 0;
    while (residual(hi) > 0.0) {
        hi *= 2.0;
        if (++guard > 200) throw std::runtime_error("traveling-wave calibration failed to bracket");
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (residual(mid) > 0.0 ? lo : hi) = mid;
    }
    return TravelingWaveSpec{params, a, b, 0.5 * (lo + hi)};
}

double traveling_wave_eval(const TravelingWaveSpec& spec, double x1, double t) {
    if (!(spec.params.q > 2.0)) throw std::domain_error("traveling wave requires q > 2");
    const double z = spec.a * t + x1 - spec.b;
    if (z <= 0.0) return 0.0;
    return spec.c_amp * std::pow(z, (spec.params.q - 1.0) / (spec.params.q - 2.0));
}

double self_similar_residual(const BarenblattSpec& spec, double r, double t, double h) {
    validate(spec);
    if (!(h > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
    if (r - 2.0 * h <= 0.0) throw std::domain_error("stencil touches r <= 0");
    if (barenblatt_eval(spec, r, t) <= 0.0)
        throw std::domain_error("residual point must lie inside the positivity set");
    if (regime(spec.params) == Regime::Slow &&
        barenblatt_eval(spec, r + 2.0 * h, t - h) <= 0.0)
        throw std::domain_error("stencil touches the free boundary");

    const DerivedExponents e = derive(spec.params);
    const double p = spec.params.p, q = spec.params.q;
    const double ut = (barenblatt_eval(spec, r, t + h) - barenblatt_eval(spec, r, t - h)) / (2.0 * h);
    const double up = barenblatt_eval(spec, r + h, t);
    const double um = barenblatt_eval(spec, r - h, t);
    const double u0 = barenblatt_eval(spec, r, t);
    const double ur = (up - um) / (2.0 * h);
    const double urr = (up - 2.0 * u0 + um) / (h * h);
    return ut - (p - 1.0) / (q - 1.0) * std::pow(std::abs(ur), q - 2.0) *
                    ((q - 1.0) * urr + (e.d - 1.0) / r * ur);
}

}  // namespace qplab
