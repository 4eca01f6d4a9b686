#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "pvhires/cell_electrical.hpp"
#include "pvhires/mlpe.hpp"

using namespace pvhires;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

IVCurve line_curve(double isc, double voc, int n = 201) {
    std::vector<IVPoint> pts;
    for (int k = 0; k < n; ++k) {
        const double v = voc * k / (n - 1);
        pts.push_back({v, isc * (1 - v / voc)});
    }
    return IVCurve(pts, CurveLevel::Module);
}

// 60 identical cells in series at uniform irradiance.
IVCurve uniform_module(double e_eff, double tc = 298.15) {
    static const auto db = ModuleDatabase::bundled();
    static const auto& spec = db.lookup("GermanSolar USA GSM6-60-300W");
    static const auto params = calibrate_two_diode(spec);
    const auto cell = cell_iv_curve(operating_params(params, spec, e_eff, tc), 64);
    std::vector<IVPoint> pts;
    for (const auto& p : cell.points()) {
        if (p.i >= 0) pts.push_back({60 * p.v, p.i});
    }
    return IVCurve(pts, CurveLevel::Module);
}

// Reference loss model written out longhand.
double reference_efficiency(double v_in, double i_in, double d, const LossParams& l) {
    const double p_in = v_in * i_in;
    const double i_out = i_in / d;
    const double loss = l.switch_coeff * d * p_in + l.conduction_r * i_out * i_out +
                        l.capacitor_esr * (0.2 * i_out) * (0.2 * i_out) + l.control_power;
    return std::min(1.0, std::max(0.0, (p_in - loss) / p_in));
}

}  // namespace

TEST_CASE("mode selection and duty", "[mlpe]") {
    CHECK(select_mode(9.0, 7.5) == OptimizerMode::Buck);
    CHECK(select_mode(6.0, 7.5) == OptimizerMode::Conductive);
    CHECK(select_mode(7.5, 7.5) == OptimizerMode::Conductive);
    CHECK(select_mode(0.0, 7.5) == OptimizerMode::Conductive);

    CHECK(required_duty(200, 50, OptimizerMode::Buck) == 0.5);
    CHECK(required_duty(42, 42, OptimizerMode::Buck) == 1.0);
    CHECK(required_duty(1, 100, OptimizerMode::Conductive) == 1.0);
    CHECK_THROWS_AS(required_duty(0, 1, OptimizerMode::Buck), DataError);

    OptimizerSpec s;
    CHECK(clamp_duty(0.05, s) == 0.1);
    CHECK(clamp_duty(0.99, s) == 0.95);
    CHECK(clamp_duty(0.5, s) == 0.5);
    for (double d = 0; d <= 1.2; d += 0.01) {
        CHECK(clamp_duty(clamp_duty(d, s), s) == clamp_duty(d, s));
        CHECK(clamp_duty(d + 0.01, s) >= clamp_duty(d, s));
    }
}

TEST_CASE("converter efficiency", "[mlpe]") {
    CHECK(converter_efficiency(30, 1, 0.4, LossParams{0, 0, 0, 0}) == 1.0);
    CHECK_THAT(converter_efficiency(50, 2, 0.5, LossParams{0, 0, 0, 1.0}), WithinRel(0.99, 1e-14));
    CHECK(converter_efficiency(0, 2, 0.5, LossParams{}) == 0.0);
    CHECK(converter_efficiency(10, 0.001, 0.5, LossParams{}) == 0.0);

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> v(5, 50), i(0.2, 10), d(0.1, 1), c(0, 0.1);
    for (int k = 0; k < 500; ++k) {
        const LossParams l{c(rng) * 0.1, c(rng), c(rng), c(rng) * 5};
        const double vv = v(rng), ii = i(rng), dd = d(rng);
        CHECK_THAT(converter_efficiency(vv, ii, dd, l), WithinAbs(reference_efficiency(vv, ii, dd, l), 1e-13));
    }
}

TEST_CASE("optimizer output on a line curve", "[mlpe]") {
    const auto curve = line_curve(4.0, 40.0);
    const auto mpp = find_mpp(curve);
    REQUIRE(mpp.p == 40.0);
    const auto lossless = OptimizerSpec::lossless();

    CHECK(optimizer_output(mpp, 0.0, lossless, curve).p == 0.0);

    // Conductive: pass-through.
    const auto c = optimizer_output(mpp, 1.0, lossless, curve);
    CHECK(c.mode == OptimizerMode::Conductive);
    CHECK_THAT(c.v, WithinAbs(30.0, 1e-12));
    CHECK_THAT(c.p, WithinAbs(30.0, 1e-12));

    // Buck, lossless: constant power at the MPP.
    for (double i = 2.05; i < 15; i += 0.37) {
        const auto b = optimizer_output(mpp, i, lossless, curve);
        CHECK(b.mode == OptimizerMode::Buck);
        CHECK_THAT(b.p, WithinRel(40.0, 1e-12));
        CHECK_THAT(b.v * i, WithinRel(40.0, 1e-12));
        CHECK_THAT(b.duty, WithinRel(2.0 / i, 1e-12));
    }

    // Demand above the rating.
    const auto over = optimizer_output(mpp, 16.0, lossless, curve);
    CHECK(over.demand_infeasible);
    CHECK(over.p == 0);

    CHECK_THROWS_AS(optimizer_output(mpp, -1.0, lossless, curve), DataError);
}

TEST_CASE("duty floor pulls the module off its MPP", "[mlpe]") {
    const auto curve = line_curve(4.0, 40.0);
    const auto mpp = find_mpp(curve);
    OptimizerSpec s = OptimizerSpec::lossless();
    s.d_min = 0.25;
    // Unclamped duty would be 2/10 = 0.2.
    const auto o = optimizer_output(mpp, 10.0, s, curve);
    CHECK(o.duty == 0.25);
    CHECK_THAT(o.i_in, WithinAbs(2.5, 1e-12));
    CHECK_THAT(o.v_in, WithinAbs(15.0, 1e-9));
    CHECK_THAT(o.p, WithinAbs(37.5, 1e-9));
    CHECK(o.p < mpp.p);
}

TEST_CASE("optimizer never creates power", "[mlpe]") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> e(100, 1000), frac(0, 1);
    for (int trial = 0; trial < 6; ++trial) {
        const auto curve = uniform_module(e(rng));
        const auto mpp = find_mpp(curve);
        for (int k = 0; k < 60; ++k) {
            const double i = frac(rng) * 2.5 * curve.i_max();
            const auto o = optimizer_output(mpp, i, OptimizerSpec{}, curve);
            CHECK(o.p <= mpp.p * (1 + 1e-12));
            const auto l = optimizer_output(mpp, i, OptimizerSpec::lossless(), curve);
            CHECK(l.p <= mpp.p * (1 + 1e-12));
            CHECK(o.p <= l.p + 1e-12);
        }
    }
}

TEST_CASE("optimized curve shape", "[mlpe]") {
    const auto curve = uniform_module(400);
    const auto mpp = find_mpp(curve);
    const auto grid = linear_grid(0, 2.5 * curve.i_max(), 1001);
    std::vector<OptimizerMode> modes;

    const auto ideal = build_optimized_curve(curve, OptimizerSpec::lossless(), grid, &modes);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double v_orig = curve.voltage_at(grid[k]);
        if (grid[k] <= mpp.i) {
            CHECK(modes[k] == OptimizerMode::Conductive);
            CHECK_THAT(ideal.voltage_at(grid[k]), WithinAbs(v_orig, 1e-9));
        } else {
            CHECK(modes[k] == OptimizerMode::Buck);
            CHECK_THAT(ideal.voltage_at(grid[k]) * grid[k], WithinRel(mpp.p, 1e-12));
        }
    }

    const auto lossy = build_optimized_curve(curve, OptimizerSpec{}, grid, &modes);
    double prev_p = -1;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double v = lossy.voltage_at(grid[k]);
        CHECK(v >= curve.voltage_at(grid[k]) - 1e-12);  // dominates the module
        if (grid[k] <= mpp.i) {
            CHECK(v * grid[k] >= prev_p - 1e-9);
            prev_p = v * grid[k];
        } else {
            CHECK(v * grid[k] <= mpp.p);
        }
    }
}

namespace {

// Uniform irradiance at which the module MPP equals p_target.
double irradiance_for_mpp(double p_target) {
    double lo = 20, hi = 1200;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (find_mpp(uniform_module(mid)).p < p_target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("buck point of a shaded module beside a bright neighbour", "[mlpe]") {
    // Shaded module with a 30.69 W MPP; the unshaded neighbour (96.25 W MPP)
    // sets the string current at its 94.80 W operating point right of its MPP.
    const auto curve = uniform_module(irradiance_for_mpp(30.69));
    const auto mpp = find_mpp(curve);
    REQUIRE_THAT(mpp.p, WithinAbs(30.69, 1e-6));
    const auto neighbour = uniform_module(irradiance_for_mpp(96.25));
    const auto n_mpp = find_mpp(neighbour);
    double lo = 0, hi = n_mpp.i;
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        (mid * neighbour.voltage_at(mid) < 94.80 ? lo : hi) = mid;
    }
    const double i_string = 0.5 * (lo + hi);
    REQUIRE(i_string > mpp.i);

    const auto o = optimizer_output(mpp, i_string, OptimizerSpec{}, curve);
    CHECK(o.mode == OptimizerMode::Buck);
    CHECK_FALSE(o.demand_infeasible);
    CHECK_THAT(o.p, WithinAbs(30.23, 0.05));
    CHECK_THAT(o.efficiency, WithinAbs(0.985, 0.002));
    CHECK_THAT(o.v * o.i, WithinRel(o.p, 1e-12));

    // The neighbour itself stays in pass-through.
    const auto pass = optimizer_output(n_mpp, i_string, OptimizerSpec{}, neighbour);
    CHECK(pass.mode == OptimizerMode::Conductive);
    CHECK_THAT(pass.p, WithinAbs(94.80, 1e-6));
    CHECK(pass.p / n_mpp.p > 0.97);
}

TEST_CASE("microinverter harvest", "[mlpe]") {
    CHECK_THAT(microinverter_harvest(line_curve(1.0, 10.0)), WithinAbs(2.5, 1e-12));
    CHECK(microinverter_harvest(IVCurve({{-2.1, 5.0}, {-2.0, 0.0}}, CurveLevel::Module)) == 0.0);

    // Two humps: 10 A up to 10 V then 3 A up to 40 V.
    const IVCurve humps({{0, 10}, {10, 10}, {10.01, 3}, {40, 3}, {40.5, 0}}, CurveLevel::Module);
    double brute = 0;
    for (double v = 0; v <= 40.5; v += 1e-3) brute = std::max(brute, v * humps.current_at(v));
    CHECK_THAT(microinverter_harvest(humps), WithinAbs(120.0, 1e-9));
    CHECK(microinverter_harvest(humps) >= brute - 1e-9);

    const auto curve = uniform_module(650);
    const double harvest = microinverter_harvest(curve);
    for (double i = 0; i < curve.i_max(); i += 0.05) CHECK(harvest >= i * curve.voltage_at(i) - 1e-12);
}
