#include <catch_amalgamated.hpp>

#include <random>
#include <vector>

#include "pvhires/iv_curve.hpp"
#include "pvhires/mpp.hpp"

using namespace pvhires;
using Catch::Matchers::WithinAbs;

TEST_CASE("curve invariants are enforced", "[iv_curve]") {
    CHECK_THROWS_AS(IVCurve({{0, 1}}), DataError);
    CHECK_THROWS_AS(IVCurve({{0, 1}, {0, 0}}), DataError);
    CHECK_THROWS_AS(IVCurve({{0, 1}, {1, 2}}), DataError);
    CHECK_NOTHROW(IVCurve({{0, 1}, {1, 1}, {2, 0}}));
}

TEST_CASE("interpolation in both directions", "[iv_curve]") {
    const IVCurve c({{-1, 5}, {0, 4}, {2, 2}, {3, 0}});
    CHECK_THAT(c.current_at(1), WithinAbs(3, 1e-15));
    CHECK_THAT(c.current_at(-5), WithinAbs(5, 0));
    CHECK_THAT(c.current_at(10), WithinAbs(0, 0));
    CHECK_THAT(c.voltage_at(3), WithinAbs(1, 1e-15));
    CHECK_THAT(c.voltage_at(1), WithinAbs(2.5, 1e-15));
    CHECK(c.voltage_at(9) == -1);
    CHECK(c.voltage_at(-1) == 3);

    const std::vector<double> grid{-1, 0, 1, 3, 4.5, 6};
    std::vector<double> out(grid.size());
    c.voltages_at(grid, out);
    for (std::size_t k = 0; k < grid.size(); ++k) CHECK(out[k] == c.voltage_at(grid[k]));
}

TEST_CASE("merged sweep agrees with point queries on random curves", "[iv_curve]") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<IVPoint> pts;
        double v = -3 * u(rng), i = 10 * u(rng) + 1;
        for (int k = 0; k < 40; ++k) {
            pts.push_back({v, i});
            v += 0.01 + u(rng);
            i -= (u(rng) < 0.2) ? 0.0 : 0.3 * u(rng);
        }
        const IVCurve c(pts);
        const auto grid = linear_grid(-1, 12, 257);
        std::vector<double> out(grid.size());
        c.voltages_at(grid, out);
        for (std::size_t k = 0; k < grid.size(); ++k) CHECK_THAT(out[k], WithinAbs(c.voltage_at(grid[k]), 1e-12));
    }
}

TEST_CASE("vertical runs collapse when built from current samples", "[iv_curve]") {
    const std::vector<double> is{0, 1, 2, 3, 4};
    const std::vector<double> vs{5, 3, -1, -1, -1};
    const auto c = IVCurve::from_current_samples(is, vs, CurveLevel::Module);
    REQUIRE(c.size() == 3);
    CHECK(c.points()[0].v == -1);
    CHECK(c.points()[0].i == 2);
    CHECK(c.level() == CurveLevel::Module);
    CHECK(c.voltage_at(3.5) == -1);
}

TEST_CASE("linear grid endpoints are exact", "[iv_curve]") {
    const auto g = linear_grid(0, 0.3, 7);
    CHECK(g.front() == 0);
    CHECK(g.back() == 0.3);
    CHECK_THROWS(linear_grid(0, 1, 1));
}

TEST_CASE("global maximum power on a piecewise-linear curve", "[mpp]") {
    // Single segment from (0, 2) to (4, 0): p = 2v - v^2/2, peak at v = 2.
    const IVCurve line({{0, 2}, {4, 0}});
    const auto m = find_mpp(line);
    CHECK_THAT(m.v, WithinAbs(2, 1e-14));
    CHECK_THAT(m.i, WithinAbs(1, 1e-14));
    CHECK_THAT(m.p, WithinAbs(2, 1e-14));

    // Two humps; the second is higher.
    const IVCurve twin({{0, 3}, {1, 3}, {1.1, 1.2}, {4, 1.2}, {4.2, 0}});
    const auto g = find_mpp(twin);
    CHECK_THAT(g.p, WithinAbs(4.8, 1e-12));
    CHECK_THAT(g.v, WithinAbs(4, 1e-12));

    CHECK_THROWS_AS(find_mpp(std::span<const IVPoint>{}), EmptyInput);
}

TEST_CASE("maximum power dominates dense sampling", "[mpp]") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<IVPoint> pts;
        double v = -1, i = 9;
        for (int k = 0; k < 12; ++k) {
            pts.push_back({v, i});
            v += 0.2 + 3 * u(rng);
            i = std::max(0.0, i - 2 * u(rng));
        }
        const IVCurve c(pts);
        const auto m = find_mpp(c);
        for (double x = c.v_min(); x <= c.v_max(); x += 1e-3) CHECK(x * c.current_at(x) <= m.p + 1e-12);
        CHECK_THAT(m.p, WithinAbs(m.v * m.i, 1e-12));
        CHECK_THAT(m.i, WithinAbs(c.current_at(m.v), 1e-12));
    }
}
