#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "qplab/closed_forms.hpp"

using namespace qplab;

namespace {
const EquationParams kSlow(3, 3, 4);     // d = 4, lambda = 12
const EquationParams kFast(3, 3, 1.5);   // d = 1.5, lambda = 0.75
const EquationParams kHeat(2, 2, 2);     // d = 2
}  // namespace

TEST_CASE("slow profile closed form at hand-checked points") {
    // At (3,3,4), C=1, t=1: s = 2/3, xi = r s^{-1/12}, bracket
    // C - (1/2) 12^{-1/3} xi^{4/3}, exponent 3/2.
    const BarenblattSpec spec{kSlow, 1.0, 0.0, 0.0};
    const double s = 2.0 / 3.0;
    const double r = 1.0;
    const double xi = r / std::pow(s, 1.0 / 12.0);
    const double bracket = 1.0 - 0.5 * std::pow(12.0, -1.0 / 3.0) * std::pow(xi, 4.0 / 3.0);
    const double expected = std::pow(s, -4.0 / 12.0) * std::pow(bracket, 1.5);
    CHECK(barenblatt_eval(spec, r, 1.0) == doctest::Approx(expected).epsilon(1e-14));
    // Far outside the support the profile vanishes identically.
    CHECK(barenblatt_eval(spec, 50.0, 1.0) == 0.0);
}

TEST_CASE("support radius closed form") {
    const BarenblattSpec spec{kSlow, 1.0, 0.0, 0.0};
    // (C q/(q-2))^{(q-1)/q} lambda^{1/q} = 2^{3/4} 12^{1/4}, scaled by s^{1/12}.
    const double expected =
        std::pow(2.0 / 3.0, 1.0 / 12.0) * std::pow(2.0, 0.75) * std::pow(12.0, 0.25);
    CHECK(support_radius(spec, 1.0) == doctest::Approx(expected).epsilon(1e-14));
    // Profile is positive just inside and zero just outside.
    const double edge = support_radius(spec, 1.0);
    CHECK(barenblatt_eval(spec, edge * 0.999, 1.0) > 0.0);
    CHECK(barenblatt_eval(spec, edge * 1.001, 1.0) == 0.0);
    CHECK_THROWS_AS(support_radius(BarenblattSpec{kFast, 1.0, 0.0, 0.0}, 1.0),
                    std::domain_error);
}

TEST_CASE("d-mass oracle 128/35 at (3, 3, 4)") {
    // Substituting y = xi^{4/3}/(2 * 12^{1/3}) turns the mass integral into a
    // Beta function; the closed result for C = 1 is 128/35.
    const BarenblattSpec spec{kSlow, 1.0, 0.0, 0.0};
    CHECK(d_mass(spec, 1.0) == doctest::Approx(128.0 / 35.0).epsilon(1e-9));
}

TEST_CASE("d-mass is conserved across time") {
    for (const EquationParams& params : {kSlow, kFast, kHeat}) {
        const BarenblattSpec spec{params, 0.7, 0.5, 0.0};
        const double m1 = d_mass(spec, 0.5);
        const double m2 = d_mass(spec, 4.0);
        CHECK(m2 == doctest::Approx(m1).epsilon(1e-8));
    }
}

TEST_CASE("mass scales like C^{(q-1) lambda / (q (q-2))}") {
    // Slow: exponent (3*12)/(4*2) = 4.5. Fast: (0.5*0.75)/(1.5*(-0.5)) = -0.5,
    // the same formula with both signs flipped inside.
    for (const EquationParams& params : {kSlow, kFast}) {
        const DerivedExponents ex = derive(params);
        const double expo =
            (params.q - 1.0) * ex.lambda / (params.q * (params.q - 2.0));
        const double m1 = d_mass(BarenblattSpec{params, 1.0, 0.0, 0.0}, 1.0);
        const double m3 = d_mass(BarenblattSpec{params, 3.0, 0.0, 0.0}, 1.0);
        CHECK(m3 / m1 == doctest::Approx(std::pow(3.0, expo)).epsilon(1e-7));
    }
}

TEST_CASE("linear-branch mass in closed form") {
    // integral of C t^{-d/2} exp(-r^2/(4(p-1)t)) r^{d-1} dr
    //   = C (4(p-1))^{d/2} Gamma(d/2) / 2.
    const BarenblattSpec spec{kHeat, 0.8, 0.0, 0.0};
    const double expected = 0.8 * std::pow(4.0, 1.0) * std::tgamma(1.0) / 2.0;
    CHECK(d_mass(spec, 1.0) == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("barenblatt_C_for_mass inverts d_mass") {
    for (const EquationParams& params : {kSlow, kFast, kHeat}) {
        const double target = 2.375;
        const double C = barenblatt_C_for_mass(params, target);
        CHECK(d_mass(BarenblattSpec{params, C, 0.0, 0.0}, 1.0) ==
              doctest::Approx(target).epsilon(1e-7));
    }
    CHECK_THROWS_AS(barenblatt_C_for_mass(EquationParams(3, 1.3, 1.3), 1.0),
                    std::domain_error);
    CHECK_THROWS_AS(barenblatt_C_for_mass(kSlow, -1.0), std::invalid_argument);
}

TEST_CASE("n-moment ratio follows (t1/t2)^{-mu}") {
    const BarenblattSpec spec{kSlow, 1.0, 0.0, 0.0};
    const double mu = derive(kSlow).mu;
    const double ratio = n_moment(spec, 2.0) / n_moment(spec, 8.0);
    CHECK(ratio == doctest::Approx(std::pow(2.0 / 8.0, -mu)).epsilon(1e-7));
}

TEST_CASE("traveling-wave amplitude against its closed form") {
    // u = c (a t + x - b)_+^{(q-1)/(q-2)} solves u_t = (p-1)|u_x|^{q-2} u_xx
    // iff c = ((q-2)/(q-1)) (a (q-2)/(p-1))^{1/(q-2)}.
    const EquationParams params(3, 3, 4);
    const double a = 2.0;
    const TravelingWaveSpec wave = make_traveling_wave(params, a, 0.5);
    const double expected =
        ((params.q - 2.0) / (params.q - 1.0)) *
        std::pow(a * (params.q - 2.0) / (params.p - 1.0), 1.0 / (params.q - 2.0));
    CHECK(wave.c_amp == doctest::Approx(expected).epsilon(1e-4));
    // Profile vanishes behind the front and follows the power law ahead.
    CHECK(traveling_wave_eval(wave, 0.5 - 3.0 * a, 1.0) == 0.0);
    const double x = 0.5 + 1.3 - a;  // a t + x - b = 1.3 at t = 1
    CHECK(traveling_wave_eval(wave, x, 1.0) ==
          doctest::Approx(wave.c_amp * std::pow(1.3, 1.5)).epsilon(1e-12));
}

TEST_CASE("self-similar residual vanishes at second order") {
    const BarenblattSpec spec{kSlow, 0.1, 0.0, 0.0};
    const double r = 0.5, t = 1.0;
    const double res1 = std::abs(self_similar_residual(spec, r, t, 1e-4));
    CHECK(res1 < 1e-8);
    // Richardson: quadrupling h should grow the residual ~16x (allow slack).
    const double res2 = std::abs(self_similar_residual(spec, r, t, 4e-4));
    CHECK(res2 / res1 > 8.0);
    CHECK(res2 / res1 < 32.0);
}

TEST_CASE("fast-branch residual also vanishes") {
    const BarenblattSpec spec{kFast, 1.0, 0.0, 0.0};
    CHECK(std::abs(self_similar_residual(spec, 0.8, 1.0, 1e-4)) < 1e-7);
}

TEST_CASE("heat-branch residual also vanishes") {
    const BarenblattSpec spec{kHeat, 0.5, 0.0, 0.0};
    CHECK(std::abs(self_similar_residual(spec, 0.7, 1.0, 1e-4)) < 1e-8);
}

TEST_CASE("delay shifts time exactly") {
    const BarenblattSpec aged{kSlow, 1.0, 2.5, 0.0};
    const BarenblattSpec fresh{kSlow, 1.0, 0.0, 0.0};
    CHECK(barenblatt_eval(aged, 0.8, 1.0) ==
          doctest::Approx(barenblatt_eval(fresh, 0.8, 3.5)).epsilon(1e-15));
}
