#include "qplab/lap_number.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qplab {

namespace {

double resolve_band(const std::vector<double>& samples, const SignChangeConfig& config) {
    if (config.zero_band >= 0.0) return config.zero_band;
    double sup = 0.0;
    for (double v : samples) sup = std::max(sup, std::abs(v));
    return 1e-8 * sup;
}

std::string block_pattern(const std::vector<double>& samples, double band) {
    std::string pattern;
    for (double v : samples) {
        if (!std::isfinite(v)) throw std::invalid_argument("samples must be finite");
        if (std::abs(v) <= band) continue;
        const char s = v > 0.0 ? '+' : '-';
        if (pattern.empty() || pattern.back() != s) pattern.push_back(s);
    }
    return pattern;
}

std::vector<double> midpoint_difference(const RadialState& state,
                                        const std::function<double(double)>& reference) {
    std::vector<double> diff(state.grid.cells);
    for (int i = 0; i < state.grid.cells; ++i)
        diff[i] = state.u[i] - reference(state.grid.mid(i));
    return diff;
}

}  // namespace

int sign_changes(const std::vector<double>& samples, const SignChangeConfig& config) {
    const std::string pattern = block_pattern(samples, resolve_band(samples, config));
    return pattern.empty() ? 0 : static_cast<int>(pattern.size()) - 1;
}

IntersectionCount intersection_count(const RadialState& state,
                                     const std::function<double(double)>& reference,
                                     const SignChangeConfig& config) {
    const std::vector<double> diff = midpoint_difference(state, reference);
    const std::string pattern = block_pattern(diff, resolve_band(diff, config));
    const int count = pattern.empty() ? 0 : static_cast<int>(pattern.size()) - 1;
    return IntersectionCount{count, pattern};
}

SturmianResult sturmian_monotonicity(const Grid& grid, const Trajectory& traj,
                                     const std::function<double(double, double)>& family,
                                     const SignChangeConfig& config) {
    if (traj.snapshots.size() < 3)
        throw std::invalid_argument("needs snapshots at 3 or more times");
    if (traj.snapshots.size() != traj.times.size())
        throw std::invalid_argument("snapshot and time counts disagree");

    SturmianResult out;
    out.nonincreasing = true;
    for (size_t k = 0; k < traj.snapshots.size(); ++k) {
        RadialState state{grid, traj.snapshots[k], traj.times[k]};
        const double t = traj.times[k];
        const IntersectionCount ic =
            intersection_count(state, [&](double r) { return family(t, r); }, config);
        out.times.push_back(t);
        out.counts.push_back(ic.count);
        out.patterns.push_back(ic.pattern);
        if (k > 0 && ic.count > out.counts[k - 1]) out.nonincreasing = false;
    }
    return out;
}

double find_sturmian_delay(const Grid& grid, const Trajectory& traj,
                           const BarenblattSpec& base, const std::vector<double>& delays,
                           const std::string& wanted_pattern,
                           const SignChangeConfig& config) {
    if (delays.empty()) throw std::invalid_argument("delay list is empty");
    if (traj.snapshots.empty() || traj.snapshots.size() != traj.times.size())
        throw std::invalid_argument("trajectory needs snapshots");
    for (double delay : delays) {
        BarenblattSpec shifted = base;
        shifted.t_delay = delay;
        bool all = true;
        for (size_t k = 0; k < traj.snapshots.size() && all; ++k) {
            RadialState state{grid, traj.snapshots[k], traj.times[k]};
            const double t = traj.times[k];
            const IntersectionCount ic = intersection_count(
                state, [&](double r) { return barenblatt_eval(shifted, r, t); }, config);
            all = ic.pattern == wanted_pattern;
        }
        if (all) return delay;
    }
    throw std::runtime_error("no scanned delay produced the wanted sign pattern");
}

}  // namespace qplab
