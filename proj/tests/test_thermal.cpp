#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "pvhires/thermal.hpp"

using namespace pvhires;
using Catch::Matchers::WithinAbs;

namespace {
constexpr double K0 = 273.15;
}

TEST_CASE("convection scale reproduces the INOCT point", "[thermal]") {
    const ThermalParams p;
    CHECK_THAT(detail::convection_scale(p), WithinAbs(1.6713332709111588, 1e-12));
    const ThermalEnv noct{800, K0 + 20, 1.0, {}};
    CHECK_THAT(steady_state_temp(noct, p), WithinAbs(K0 + 48.0, 1e-8));
}

TEST_CASE("steady state against an independent root search", "[thermal]") {
    const ThermalParams p;
    struct Ref {
        ThermalEnv env;
        double tc;
    };
    const Ref refs[] = {
        {{1000, 303.15, 2.0, {}}, 332.5530338892693},
        {{0, 283.15, 3.0, {}}, 280.1768122572926},
        {{300, 278.15, 0.5, {}}, 288.54307005471844},
    };
    for (const auto& r : refs) {
        const double tc = steady_state_temp(r.env, p);
        CHECK_THAT(tc, WithinAbs(r.tc, 1e-8));
        CHECK(std::abs(thermal_balance(tc, r.env, p)) < 1e-6);
    }
}

TEST_CASE("zero forcing leaves the cell at air temperature", "[thermal]") {
    const ThermalParams p;
    const ThermalEnv env{0, 290.0, 2.0, 290.0};
    CHECK_THAT(steady_state_temp(env, p), WithinAbs(290.0, 1e-9));
    CHECK_THAT(fuentes_step(290.0, env, 60, p), WithinAbs(290.0, 1e-6));
}

TEST_CASE("dark cell cools toward the air", "[thermal]") {
    const FuentesModel m{ThermalParams{}};
    const ThermalEnv env{0, 290.0, 1.0, 290.0};
    double tc = 320.0;
    for (int k = 0; k < 100; ++k) {
        const double next = m.step(tc, env, 60);
        CHECK(next < tc);
        CHECK(next > 290.0);
        tc = next;
    }
}

TEST_CASE("transient converges monotonically to the steady state", "[thermal]") {
    const FuentesModel m{ThermalParams{}};
    const ThermalEnv env{800, K0 + 20, 1.0, {}};
    const double ss = steady_state_temp(env, m.params());
    double tc = K0 + 25;
    double gap = std::abs(tc - ss);
    for (int k = 0; k < 600; ++k) {
        const double next = m.step(tc, env, 60);
        CHECK(next >= tc - 1e-6);  // no overshoot beyond solver tolerance
        const double g = std::abs(next - ss);
        CHECK(g <= gap + 1e-6);
        gap = g;
        tc = next;
    }
    CHECK_THAT(tc, WithinAbs(ss, 0.1));
}

TEST_CASE("implicit step satisfies the discretised balance", "[thermal]") {
    const FuentesModel m{ThermalParams{}};
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0, 1);
    for (int k = 0; k < 200; ++k) {
        const ThermalEnv env{1100 * u(rng), 260 + 50 * u(rng), 8 * u(rng), {}};
        const double prev = 250 + 100 * u(rng);
        const double dt = 10 + 3590 * u(rng);
        const double tc = m.step(prev, env, dt);
        const double r = m.params().thermal_mass * (tc - prev) / dt + m.balance(tc, env);
        CHECK(std::abs(r) < 1e-2);
    }
}

TEST_CASE("temperature monotonicity in forcing", "[thermal]") {
    const ThermalParams p;
    const ThermalEnv base{500, 295, 2, {}};
    const double t0 = steady_state_temp(base, p);
    ThermalEnv e = base;
    e.e_eff = 1000;
    CHECK(steady_state_temp(e, p) > t0);
    e = base;
    e.temp_air = 300;
    CHECK(steady_state_temp(e, p) > t0);
    e = base;
    e.wind_speed = 5;
    CHECK(steady_state_temp(e, p) < t0);
}

TEST_CASE("thermal input validation", "[thermal]") {
    ThermalParams bad;
    bad.emissivity = 0;
    CHECK_THROWS_AS(FuentesModel{bad}, ConfigError);
    const FuentesModel m{ThermalParams{}};
    CHECK_THROWS_AS(m.step(300, {100, 290, 1, {}}, 0), DataError);
    CHECK_THROWS_AS(m.step(500, {100, 290, 1, {}}, 60), DataError);
    CHECK_THROWS_AS(m.step(300, {-1, 290, 1, {}}, 60), DataError);
}

TEST_CASE("temperature chain starts from air temperature", "[thermal]") {
    const FuentesModel m{ThermalParams{}};
    const std::vector<ThermalEnv> envs(5, ThermalEnv{0, 288.0, 1.0, 288.0});
    const auto tcs = m.run(envs, 60);
    REQUIRE(tcs.size() == 5);
    for (double t : tcs) CHECK_THAT(t, WithinAbs(288.0, 1e-6));
}
