#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "gritquit/boundary.hpp"
#include "support.hpp"

using namespace gq;

namespace {
Boundary solve_fixture(const testsupport::Fixture& fx, SolveOptions opts = {}) {
    return solve_boundary(fx.params, fx.profit, opts);
}
}  // namespace

TEST_CASE("benchmark boundary reproduces frozen cutoffs and nodes") {
    auto b = solve_fixture(testsupport::benchmark());
    CHECK(b.m0 == 0.0);
    CHECK(b.m1 == doctest::Approx(1.5911900251739).epsilon(1e-8));
    CHECK(b.m_star == 3.0);
    CHECK(b.z_at(0.0) == doctest::Approx(-0.6344669952546).epsilon(1e-8));
    CHECK(b.z_at(b.m1) == doctest::Approx(-0.46260056867537).epsilon(1e-8));
    CHECK(b.z_at(0.5) == doctest::Approx(-0.569832455738).epsilon(1e-7));
    CHECK(b.z_at(0.8) == doctest::Approx(-0.536307574537).epsilon(1e-7));
    CHECK(b.z_at(1.0) == doctest::Approx(-0.515816075573).epsilon(1e-7));
    CHECK(b.z_at(2.0) == doctest::Approx(-0.26884308165).epsilon(1e-7));
    CHECK(b.z_at(2.3) == doctest::Approx(-0.1687298484).epsilon(1e-7));
    CHECK(b.z_at(2.5) == doctest::Approx(-0.113678984055).epsilon(1e-7));
    CHECK(std::isnan(b.residual_m0));
    CHECK(std::abs(b.residual_m1) <= 1e-8);
}

TEST_CASE("deep boundary has all three stages with frozen cutoffs") {
    // Solve on a 1e-3 grid so every probe m below is an exact node; the default
    // auto grid for qbar=8 has spacing 8/3000 and would interpolate at m=7.5.
    auto b = solve_fixture(testsupport::deep(), {1e-3});
    CHECK(b.m0 == doctest::Approx(0.128374479192).epsilon(1e-8));
    CHECK(b.m1 == doctest::Approx(6.5911900251739).epsilon(1e-8));
    CHECK(b.z_at(0.0) == doctest::Approx(-4.57959876819).epsilon(2e-9));
    CHECK(b.z_at(b.m0) == doctest::Approx(-4.70797324738376).epsilon(2e-9));
    CHECK(b.z_at(b.m1) == doctest::Approx(-0.462600568675365).epsilon(1e-8));
    CHECK(b.z_at(1.0) == doctest::Approx(-2.481108028098).epsilon(1e-7));
    CHECK(b.z_at(2.0) == doctest::Approx(-1.550007986861).epsilon(1e-7));
    CHECK(b.z_at(4.0) == doctest::Approx(-0.809050134203).epsilon(1e-7));
    CHECK(b.z_at(6.0) == doctest::Approx(-0.515816075573).epsilon(1e-7));
    CHECK(b.z_at(7.0) == doctest::Approx(-0.268843081637).epsilon(1e-7));
    CHECK(b.z_at(7.5) == doctest::Approx(-0.113678984057).epsilon(1e-7));
    CHECK(std::abs(b.residual_m0) <= 1e-8);
    CHECK(std::abs(b.residual_m1) <= 1e-8);
}

TEST_CASE("large prize removes the exploration stage") {
    auto b = solve_fixture(testsupport::bigprize());
    CHECK(b.m0 == 0.0);
    CHECK(b.m1 == doctest::Approx(5.29491652474739).epsilon(1e-8));
    CHECK(b.z_at(0.0) == doctest::Approx(-0.338176391892922).epsilon(1e-8));
    CHECK(b.terminal_slope == doctest::Approx(0.049994034804205834).epsilon(1e-12));
}

TEST_CASE("flat market throws NoLaunchRegion") {
    CHECK_THROWS_AS((void)solve_fixture(testsupport::flat()), NoLaunchRegion);
}

TEST_CASE("boundary translates with the peak for the quadratic family") {
    // Same explicit step on both solves so the probe points are nodes of each
    // grid and no interpolation error enters the comparison.
    auto bench = solve_fixture(testsupport::benchmark(), {1e-3});
    auto deep = solve_fixture(testsupport::deep(), {1e-3});
    CHECK(deep.m1 - bench.m1 == doctest::Approx(5.0).epsilon(1e-9));
    CHECK(deep.z_at(deep.m1) == doctest::Approx(bench.z_at(bench.m1)).epsilon(1e-8));
    for (double m : {5.2, 6.0, 6.8, 7.3, 7.9}) {
        CHECK(deep.z_at(m) == doctest::Approx(bench.z_at(m - 5.0)).epsilon(1e-8));
    }
}

TEST_CASE("boundary shape: nonpositive, zero at the peak, stagewise monotone") {
    auto b = solve_fixture(testsupport::deep());
    CHECK(b.grid_m.front() == 0.0);
    CHECK(b.grid_m.back() == b.m_star);
    CHECK(b.grid_z.back() == 0.0);
    for (std::size_t i = 0; i + 1 < b.grid_m.size(); ++i) {
        CHECK(b.grid_m[i] < b.grid_m[i + 1]);
        CHECK(b.grid_z[i] <= 1e-15);
        if (b.grid_m[i] >= b.m0 - 1e-12) {
            CHECK(b.grid_z[i + 1] >= b.grid_z[i] - 1e-12);  // rising after the abort cutoff
        } else if (b.grid_m[i + 1] <= b.m0 + 1e-12) {
            CHECK(b.grid_z[i + 1] <= b.grid_z[i] + 1e-12);  // falling before it
        }
    }
}

TEST_CASE("exploration segment has exact unit slope") {
    auto b = solve_fixture(testsupport::deep());
    const double z_m0 = b.z_at(b.m0);
    for (double f : {0.0, 0.25, 0.5, 0.75}) {
        const double m = f * b.m0;
        CHECK(b.z_at(m) == doctest::Approx(z_m0 + (b.m0 - m)).epsilon(1e-10));
    }
    CHECK(b.z_at(0.0) - b.z_at(b.m0) == doctest::Approx(b.m0).epsilon(1e-9));
}

TEST_CASE("cutoffs are grid nodes and stage_of is consistent") {
    auto b = solve_fixture(testsupport::deep());
    bool has_m0 = false, has_m1 = false;
    for (double m : b.grid_m) {
        if (m == b.m0) has_m0 = true;
        if (m == b.m1) has_m1 = true;
    }
    CHECK(has_m0);
    CHECK(has_m1);
    CHECK(b.stage_of(0.5 * b.m0) == Stage::Exploration);
    CHECK(b.stage_of(b.m0) == Stage::Iteration);
    CHECK(b.stage_of(0.5 * (b.m0 + b.m1)) == Stage::Iteration);
    CHECK(b.stage_of(b.m1) == Stage::FinalPush);
    CHECK(b.stage_of(0.5 * (b.m1 + b.m_star)) == Stage::FinalPush);
    CHECK(b.stage_of(b.m_star) == Stage::PostPeak);
    CHECK(b.stage_of(b.m_star + 2.0) == Stage::PostPeak);
    CHECK(b.z_at(b.m_star + 2.0) == 0.0);
}

TEST_CASE("independent RK4 oracle agrees with the production solver") {
    for (auto fx : {testsupport::benchmark(), testsupport::deep()}) {
        auto b = solve_fixture(fx);
        std::vector<double> eval;
        for (std::size_t i = 0; i < b.grid_m.size(); i += 25) eval.push_back(b.grid_m[i]);
        eval.push_back(b.m1);
        if (b.m0 > 0.0) eval.push_back(b.m0);
        auto oracle = testsupport::rk4_boundary(fx.params, fx.profit, eval, 5e-5);
        std::vector<double> sorted_eval = eval;
        std::sort(sorted_eval.begin(), sorted_eval.end());
        double worst = 0.0;
        for (std::size_t i = 0; i < sorted_eval.size(); ++i)
            worst = std::max(worst, std::abs(b.z_at(sorted_eval[i]) - oracle.z[i]));
        CHECK(worst <= 1e-6);
        CHECK(b.m1 == doctest::Approx(oracle.m1).epsilon(1e-7));
        if (b.m0 > 0.0) CHECK(b.m0 == doctest::Approx(oracle.m0).epsilon(1e-7));
    }
}

TEST_CASE("coarser grids reproduce the same trajectory at shared nodes") {
    auto fx = testsupport::benchmark();
    SolveOptions coarse;
    coarse.grid_step = 1e-2;
    auto bc = solve_fixture(fx, coarse);
    auto bf = solve_fixture(fx);
    for (double m : {0.0, 0.5, 1.0, 2.0, 2.5}) {
        CHECK(bc.z_at(m) == doctest::Approx(bf.z_at(m)).epsilon(1e-8));
    }
    CHECK(bc.m1 == doctest::Approx(bf.m1).epsilon(1e-9));
}

TEST_CASE("solver rejects bad resolution requests") {
    auto fx = testsupport::benchmark();
    SolveOptions bad;
    bad.grid_step = fx.profit.qbar / 100.0;  // coarser than qbar/200
    CHECK_THROWS_AS((void)solve_fixture(fx, bad), std::invalid_argument);
    SolveOptions bad_tol;
    bad_tol.tol = 0.0;
    CHECK_THROWS_AS((void)solve_fixture(fx, bad_tol), std::invalid_argument);
    SolveOptions big_tol;
    big_tol.tol = 1e-3;
    CHECK_THROWS_AS((void)solve_fixture(fx, big_tol), std::invalid_argument);
}

TEST_CASE("stage names are stable identifiers") {
    CHECK(std::string(stage_name(Stage::Exploration)) == "exploration");
    CHECK(std::string(stage_name(Stage::Iteration)) == "iteration");
    CHECK(std::string(stage_name(Stage::FinalPush)) == "final_push");
    CHECK(std::string(stage_name(Stage::PostPeak)) == "post_peak");
}
