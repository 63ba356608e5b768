#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "qplab/scenario.hpp"

using namespace qplab;

namespace {

const char* kMinimal = R"(
name = tiny
[params]
n = 3
p = 3
q = 4
[domain]
R = 4
cells = 64
[initial]
kind = bump
width = 1
height = 1
[run]
T_end = 0.25
samples = 0.125 0.25
)";

std::filesystem::path temp_dir() {
    const auto dir = std::filesystem::temp_directory_path() / "qplab_scenario_test";
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("minimal scenario parses with defaults") {
    const Scenario sc = parse_scenario_text(kMinimal, "fallback");
    CHECK(sc.name == "tiny");
    CHECK(sc.params.n == 3);
    CHECK(sc.params.q == doctest::Approx(4.0));
    CHECK(sc.R == doctest::Approx(4.0));
    CHECK(sc.cells == 64);
    CHECK_FALSE(sc.ball);
    CHECK(sc.solver.outer_bc == OuterBC::ZeroFlux);
    CHECK(sc.T_end == doctest::Approx(0.25));
    REQUIRE(sc.samples.size() == 2);
    CHECK(sc.samples[1] == doctest::Approx(0.25));
    CHECK(sc.out_dir == "tiny");
    CHECK(sc.checks.empty());
}

TEST_CASE("full grammar round trip") {
    const char* text = R"(
name = full
seed = 99
[params]
n = 3
p = 3
q = 1.5
[domain]
kind = radial
R = 20
cells = 128
[solver]
bc = dirichlet
cfl = 0.25
delta = 1e-6
[initial]
kind = bump
center = 0.5
width = 2
height = 0.3
[run]
T_end = 1
samples = 0.5
samples_log = 0.0625 1 3   # 0.0625, 0.25, 1
stop_sup = 1e-9
[analysis]
check = d_mass_conserved 1e-4
check = tail_exponent 2 6 -3 0.2
[output]
dir = custom_dir
)";
    const Scenario sc = parse_scenario_text(text, "x");
    CHECK(sc.seed == 99);
    CHECK(sc.solver.outer_bc == OuterBC::DirichletZero);
    CHECK(sc.solver.cfl_safety == doctest::Approx(0.25));
    CHECK(sc.solver.delta == doctest::Approx(1e-6));
    CHECK(sc.initial.center == doctest::Approx(0.5));
    CHECK(sc.stop_sup == doctest::Approx(1e-9));
    // samples merge sorted and unique: 0.0625, 0.25, 0.5, 1.
    REQUIRE(sc.samples.size() == 4);
    CHECK(sc.samples[0] == doctest::Approx(0.0625));
    CHECK(sc.samples[3] == doctest::Approx(1.0));
    REQUIRE(sc.checks.size() == 2);
    CHECK(sc.checks[1].name == "tail_exponent");
    REQUIRE(sc.checks[1].args.size() == 4);
    CHECK(sc.checks[1].args[2] == doctest::Approx(-3.0));
    CHECK(sc.out_dir == "custom_dir");
}

TEST_CASE("ball domain forces R = 1 and dirichlet") {
    const char* text = R"(
[params]
n = 3
p = 3
q = 4
[domain]
kind = ball
cells = 32
[initial]
kind = giant
t0 = 2
[run]
T_end = 1
samples = 1
)";
    const Scenario sc = parse_scenario_text(text, "ball");
    CHECK(sc.ball);
    CHECK(sc.R == doctest::Approx(1.0));
    CHECK(sc.solver.outer_bc == OuterBC::DirichletZero);
    CHECK(sc.initial.kind == InitialSpec::Kind::Giant);
}

TEST_CASE("config errors carry one-line reasons") {
    // q below the admissible range: the parameter ctor's message survives.
    CHECK_THROWS_WITH_AS(
        parse_scenario_text("[params]\nn = 3\np = 3\nq = 0.5\n"
                            "[run]\nT_end = 1\nsamples = 1\n",
                            "x"),
        doctest::Contains("q must exceed 1"), ConfigError);
    CHECK_THROWS_AS(parse_scenario_text("[params]\nn = 3\np = 3\n"
                                        "[run]\nT_end = 1\nsamples = 1\n",
                                        "x"),
                    ConfigError);
    CHECK_THROWS_WITH_AS(
        parse_scenario_text("[params]\nn = 3\np = 3\nq = 4\nbogus = 1\n"
                            "[run]\nT_end = 1\nsamples = 1\n",
                            "x"),
        doctest::Contains("unknown key"), ConfigError);
    CHECK_THROWS_WITH_AS(
        parse_scenario_text("[mystery]\nx = 1\n[params]\nn = 3\np = 3\nq = 4\n"
                            "[run]\nT_end = 1\nsamples = 1\n",
                            "x"),
        doctest::Contains("unknown section"), ConfigError);
    CHECK_THROWS_AS(parse_scenario_text("[params]\nn = 3\np = 3\nq = 4\n"
                                        "[run]\nT_end = 1\nsamples = 2\n",
                                        "x"),
                    ConfigError);  // sample beyond T_end
}

TEST_CASE("static preconditions reject mismatched checks") {
    // tail_exponent needs the fast regime: a slow run is a config error
    // before any time stepping happens.
    const char* tail_under_slow = R"(
[params]
n = 3
p = 3
q = 4
[domain]
R = 4
cells = 32
[initial]
kind = bump
[run]
T_end = 0.5
samples = 0.5
[analysis]
check = tail_exponent 1 2 -3 0.2
)";
    CHECK_THROWS_WITH_AS(parse_scenario_text(tail_under_slow, "x"),
                         doctest::Contains("fast regime"), ConfigError);

    const char* monotone_zeroflux = R"(
[params]
n = 3
p = 3
q = 4
[domain]
R = 4
cells = 32
[solver]
bc = zeroflux
[initial]
kind = bump
[run]
T_end = 0.5
samples = 0.1 0.3 0.5
[analysis]
check = monotonicity 1e-6
)";
    CHECK_THROWS_WITH_AS(parse_scenario_text(monotone_zeroflux, "x"),
                         doctest::Contains("DirichletZero"), ConfigError);

    CHECK_THROWS_WITH_AS(
        parse_scenario_text("[params]\nn = 3\np = 3\nq = 4\n[domain]\nR = 4\ncells = 32\n"
                            "[initial]\nkind = bump\n[run]\nT_end = 0.5\nsamples = 0.5\n"
                            "[analysis]\ncheck = made_up 1\n",
                            "x"),
        doctest::Contains("unknown check"), ConfigError);
}

TEST_CASE("run produces the artifact tree and passes its checks") {
    const char* text = R"(
name = artifact_probe
[params]
n = 3
p = 3
q = 4
[domain]
R = 4
cells = 64
[initial]
kind = bump
[run]
T_end = 0.25
samples = 0.125 0.25
[analysis]
check = d_mass_conserved 1e-9
)";
    const Scenario sc = parse_scenario_text(text, "x");
    const auto root = temp_dir();
    const RunOutcome outcome = run_scenario(sc, root.string());
    CHECK(outcome.exit_code == 0);
    CHECK(outcome.reason.empty());
    REQUIRE(outcome.checks.size() == 1);
    CHECK(outcome.checks[0].passed);
    namespace fs = std::filesystem;
    const fs::path dir = outcome.out_dir;
    CHECK(fs::exists(dir / "series.csv"));
    CHECK(fs::exists(dir / "summary.txt"));
    CHECK(fs::exists(dir / "profiles" / "initial.csv"));
    CHECK(fs::exists(dir / "profiles" / "sample_0000.csv"));
    CHECK(fs::exists(dir / "profiles" / "sample_0001.csv"));
    // Summary records the verdict.
    std::ifstream summary(dir / "summary.txt");
    std::string all((std::istreambuf_iterator<char>(summary)),
                    std::istreambuf_iterator<char>());
    CHECK(all.find("overall = PASS") != std::string::npos);
    CHECK(all.find("scenario = artifact_probe") != std::string::npos);
}

TEST_CASE("failing checks map to exit code 1 with a reason") {
    const char* text = R"(
name = too_tight
[params]
n = 3
p = 3
q = 4
[domain]
R = 4
cells = 64
[initial]
kind = bump
[run]
T_end = 0.25
samples = 0.25
[analysis]
check = decay_exponent 0.01 0.25 0.3333 0.0001
)";
    // decay fit needs 5 samples in the window; a single sample makes the
    // check fail (errors inside checks are failures, not crashes).
    const Scenario sc = parse_scenario_text(text, "x");
    const RunOutcome outcome = run_scenario(sc, temp_dir().string());
    CHECK(outcome.exit_code == 1);
    CHECK_FALSE(outcome.reason.empty());
}

TEST_CASE("solver failures map to exit code 3") {
    const char* text = R"(
name = blowup
[params]
n = 3
p = 3
q = 4
[domain]
R = 1
cells = 16
[initial]
kind = custom
csv = CSVPATH
[run]
T_end = 1
samples = 1
)";
    // Steep custom data drive the CFL step under the underflow guard.
    const auto dir = temp_dir();
    const auto csv = dir / "steep.csv";
    {
        std::ofstream f(csv);
        f << "r,u\n0,1e9\n1,0\n";
    }
    std::string patched(text);
    patched.replace(patched.find("CSVPATH"), 7, csv.string());
    const Scenario sc = parse_scenario_text(patched, "x");
    const RunOutcome outcome = run_scenario(sc, dir.string());
    CHECK(outcome.exit_code == 3);
    CHECK(outcome.reason.find("solver failure") != std::string::npos);
}

TEST_CASE("run_scenario_file folds parse errors into exit 2") {
    const auto dir = temp_dir();
    const auto bad = dir / "bad.ini";
    {
        std::ofstream f(bad);
        f << "[params]\nn = 3\np = 3\nq = 0.5\n[run]\nT_end = 1\nsamples = 1\n";
    }
    const RunOutcome outcome = run_scenario_file(bad.string(), dir.string());
    CHECK(outcome.exit_code == 2);
    CHECK(outcome.reason.find("q must exceed 1") != std::string::npos);
    const RunOutcome missing = run_scenario_file((dir / "nope.ini").string(),
                                                 dir.string());
    CHECK(missing.exit_code == 2);
}

TEST_CASE("identical runs are byte identical") {
    const char* text = R"(
name = deterministic
[params]
n = 3
p = 3
q = 4
[domain]
R = 4
cells = 48
[initial]
kind = random_bumps
count = 3
[run]
T_end = 0.125
samples = 0.125
)";
    const Scenario sc = parse_scenario_text(text, "x");
    const auto dir = temp_dir();
    Scenario a = sc, b = sc;
    a.out_dir = "det_a";
    b.out_dir = "det_b";
    REQUIRE(run_scenario(a, dir.string()).exit_code == 0);
    REQUIRE(run_scenario(b, dir.string()).exit_code == 0);
    for (const char* file : {"series.csv", "summary.txt"}) {
        std::ifstream fa(dir / "det_a" / file, std::ios::binary);
        std::ifstream fb(dir / "det_b" / file, std::ios::binary);
        std::string sa((std::istreambuf_iterator<char>(fa)),
                       std::istreambuf_iterator<char>());
        std::string sb((std::istreambuf_iterator<char>(fb)),
                       std::istreambuf_iterator<char>());
        // out_dir naming does not enter the artifacts; only the scenario name
        // does, which is shared.
        CHECK(sa == sb);
        CHECK_FALSE(sa.empty());
    }
    // A different seed genuinely changes random initial data.
    Scenario c = sc;
    c.out_dir = "det_c";
    c.seed = 777;
    REQUIRE(run_scenario(c, dir.string()).exit_code == 0);
    std::ifstream fa(dir / "det_a" / "series.csv", std::ios::binary);
    std::ifstream fc(dir / "det_c" / "series.csv", std::ios::binary);
    std::string sa((std::istreambuf_iterator<char>(fa)),
                   std::istreambuf_iterator<char>());
    std::string scs((std::istreambuf_iterator<char>(fc)),
                    std::istreambuf_iterator<char>());
    CHECK(sa != scs);
}

TEST_CASE("seed override changes the provenance echo") {
    const char* text = R"(
name = seeded
[params]
n = 3
p = 3
q = 4
[domain]
R = 4
cells = 48
[initial]
kind = random_bumps
[run]
T_end = 0.0625
samples = 0.0625
)";
    const Scenario sc = parse_scenario_text(text, "x");
    const auto dir = temp_dir();
    const RunOutcome outcome = run_scenario(sc, dir.string(), 424242);
    REQUIRE(outcome.exit_code == 0);
    std::ifstream summary(std::filesystem::path(outcome.out_dir) / "summary.txt");
    std::string all((std::istreambuf_iterator<char>(summary)),
                    std::istreambuf_iterator<char>());
    CHECK(all.find("seed = 424242") != std::string::npos);
}
