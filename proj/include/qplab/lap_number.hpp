#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qplab/closed_forms.hpp"
#include "qplab/solver1d.hpp"

namespace qplab {

// Tolerance policy for the sign-change counter. Values with |w| <= band are
// sign-neutral and skipped; a negative band selects the adaptive default
// 1e-8 * sup|w| (discrete profiles graze zero at free boundaries, and
// without a band the counter flickers).
struct SignChangeConfig {
    double zero_band = -1.0;
};

// Number of strict sign alternations in the band-filtered sequence.
int sign_changes(const std::vector<double>& samples, const SignChangeConfig& config = {});

struct IntersectionCount {
    int count;            // sign changes of u - reference at cell midpoints
    std::string pattern;  // ordered block signs, e.g. "-+" (empty: all neutral)
};

IntersectionCount intersection_count(const RadialState& state,
                                     const std::function<double(double)>& reference,
                                     const SignChangeConfig& config = {});

struct SturmianResult {
    std::vector<double> times;
    std::vector<int> counts;
    std::vector<std::string> patterns;
    bool nonincreasing;
};

// Counts intersections of each snapshot against a moving reference
// family(t, r) and checks that the count never increases in time.
SturmianResult sturmian_monotonicity(const Grid& grid, const Trajectory& traj,
                                     const std::function<double(double, double)>& family,
                                     const SignChangeConfig& config = {});

// Scans the given delays for the first one whose delayed source solution
// B(r, t + delay; C of `base`) shows exactly the wanted block pattern
// against every snapshot. Existence is guaranteed by theory for large and
// small delays but with no construction, hence the search. Throws when no
// delay in the list qualifies.
double find_sturmian_delay(const Grid& grid, const Trajectory& traj,
                           const BarenblattSpec& base, const std::vector<double>& delays,
                           const std::string& wanted_pattern,
                           const SignChangeConfig& config = {});

}  // namespace qplab
