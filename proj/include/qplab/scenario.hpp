#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "qplab/params.hpp"
#include "qplab/solver1d.hpp"

namespace qplab {

inline constexpr const char* kVersion = "1.0.0";

// Unparsable or invalid configuration; mapped to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InitialSpec {
    enum class Kind { Barenblatt, Giant, Bump, Custom, RandomBumps };
    Kind kind = Kind::Bump;
    double C = 1.0;         // barenblatt: mass constant
    double t_delay = 0.0;   // barenblatt: age of the profile at run start
    double t0 = 1.0;        // giant: separable clock at run start
    double center = 0.0;    // bump: height (1 - ((r-center)/width)^2)_+^2
    double width = 1.0;
    double height = 1.0;
    std::string csv_path;   // custom: two-column r,u file
    std::uint64_t seed = 0; // random_bumps: 0 = inherit the scenario seed
    int count = 3;          // random_bumps
};

struct CheckSpec {
    std::string name;
    std::vector<double> args;
};

struct Scenario {
    std::string name;
    EquationParams params;
    bool ball = false;  // unit ball: R = 1, DirichletZero
    double R = 8.0;
    int cells = 500;
    SolverConfig solver;
    double T_end = 1.0;
    std::vector<double> samples;  // strictly increasing, in (0, T_end]
    double stop_sup = 0.0;        // early stop once sup falls below (0 = off)
    InitialSpec initial;
    std::vector<CheckSpec> checks;
    std::string out_dir;  // defaults to the scenario name
    std::uint64_t seed = 12345;

    explicit Scenario(const EquationParams& p) : params(p) {}
};

// Parses the flat [section] / key = value format. Repeated `check = ...`
// lines accumulate. Throws ConfigError with a one-line message.
Scenario parse_scenario(const std::string& path);
Scenario parse_scenario_text(const std::string& text, const std::string& fallback_name);

struct GiantProfile;

// Cell-average initial data of a scenario on `grid`. Throws ConfigError on
// invalid initial sections. For giant initial data the computed profile is
// handed back through `giant` when non-null (track_giant reuses it).
RadialState build_initial_state(const Scenario& scenario, const Grid& grid,
                                std::uint64_t seed,
                                std::unique_ptr<GiantProfile>* giant = nullptr);

struct CheckOutcome {
    std::string line;  // "<name>: PASS|FAIL <details>"
    bool passed;
};

struct RunOutcome {
    int exit_code = 0;   // 0 ok, 1 check failed, 2 config error, 3 solver failure
    std::string reason;  // one-line machine-parseable reason; empty on success
    std::vector<CheckOutcome> checks;
    std::string out_dir;  // resolved artifact directory (empty if never reached)
};

// Validate, build initial data, integrate, write artifacts (profiles/*.csv,
// series.csv, summary.txt, each with a full provenance echo), evaluate the
// requested checks. out_root resolves relative output directories ("out"
// when empty); seed_override >= 0 replaces the scenario seed; strict is
// reserved for promoting warnings (currently none) to failures.
RunOutcome run_scenario(const Scenario& scenario, const std::string& out_root,
                        std::int64_t seed_override = -1, bool strict = false);

// parse_scenario + run_scenario with parse errors folded into exit code 2.
RunOutcome run_scenario_file(const std::string& path, const std::string& out_root,
                             std::int64_t seed_override = -1, bool strict = false);

}  // namespace qplab
