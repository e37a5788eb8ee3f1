#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rivalnet/analytic.hpp"
#include "rivalnet/trajectory.hpp"
#include "oracles.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <vector>

using namespace rivalnet;
namespace fs = std::filesystem;

namespace {

const InitialState kSplit{40.0, 16.0, 24.0};

std::vector<double> linear_grid(double a, double b, int n) {
    std::vector<double> g(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1);
    return g;
}

} // namespace

TEST_CASE("parameter validation") {
    CHECK_NOTHROW((PowerPair{1.0, 2.0}.validate()));
    CHECK_THROWS_AS((PowerPair{0.0, 2.0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((PowerPair{1.0, -1.0}.validate()), std::invalid_argument);

    CHECK_NOTHROW(kSplit.validate());
    CHECK_THROWS_WITH_AS((InitialState{40.0, 16.0, 23.0}.validate()),
                         doctest::Contains("x1 + x2 must equal t0"), std::invalid_argument);
    CHECK_THROWS_AS((InitialState{0.0, 0.0, 0.0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((InitialState{40.0, -16.0, 56.0}.validate()), std::invalid_argument);

    const double grid[] = {30.0, 50.0};
    CHECK_THROWS_WITH_AS(pre_overload({1.0, 2.0}, kSplit, grid),
                         doctest::Contains("precedes"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(post_overload({1.0, 2.0}, 10.0, kSplit, grid),
                         doctest::Contains("precedes"), std::invalid_argument);
}

TEST_CASE("growth before overload") {
    const PowerPair uneven{1.0, 2.0};

    SUBCASE("reference point") {
        const double grid[] = {100.0};
        Trajectory traj = pre_overload(uneven, kSplit, grid);
        REQUIRE(traj.points.size() == 1);
        CHECK(traj.points[0].x1 == doctest::Approx(27.759129722642285).epsilon(1e-10));
        CHECK(traj.points[0].x2 == doctest::Approx(72.240870277357715).epsilon(1e-10));
    }
    SUBCASE("counts add up to the clock and never shrink") {
        auto grid = linear_grid(40.0, 4000.0, 200);
        Trajectory traj = pre_overload(uneven, kSplit, grid);
        double prev1 = 0.0, prev2 = 0.0;
        for (const auto& p : traj.points) {
            CHECK(std::fabs(p.x1 + p.x2 - p.t) <= 1e-6 * p.t);
            CHECK(p.x1 >= prev1);
            CHECK(p.x2 >= prev2);
            prev1 = p.x1;
            prev2 = p.x2;
        }
    }
    SUBCASE("equal powers keep the split") {
        auto grid = linear_grid(40.0, 4000.0, 50);
        Trajectory traj = pre_overload({1.5, 1.5}, kSplit, grid);
        for (const auto& p : traj.points) {
            CHECK(std::fabs(p.share1() - 0.4) < 1e-9);
        }
    }
    SUBCASE("trajectory stays on its invariant curve") {
        // x2 = K1 * x1^{b/a} with K1 pinned by the initial state
        const double k1 = 24.0 / std::pow(16.0, 2.0);
        auto grid = linear_grid(40.0, 2000.0, 30);
        Trajectory traj = pre_overload(uneven, kSplit, grid);
        for (const auto& p : traj.points) {
            CHECK(p.x2 == doctest::Approx(k1 * std::pow(p.x1, 2.0)).epsilon(1e-8));
        }
    }
    SUBCASE("the stronger influence takes everything") {
        const double grid[] = {1e6};
        Trajectory traj = pre_overload(uneven, kSplit, grid);
        CHECK(traj.points[0].share2() > 0.99);
    }
    SUBCASE("loser count grows like a power of the clock") {
        // a=2, b=1: the losing count follows t^{1/2}, so x2/sqrt(t)
        // settles down; compare two decades.
        const double grid[] = {1e4, 1e6};
        Trajectory traj = pre_overload({2.0, 1.0}, {40.0, 24.0, 16.0}, grid);
        double r0 = traj.points[0].x2 / std::sqrt(traj.points[0].t);
        double r1 = traj.points[1].x2 / std::sqrt(traj.points[1].t);
        CHECK(r1 / r0 == doctest::Approx(1.0).epsilon(0.02));
    }
    SUBCASE("matches a straight integration of the rate equations") {
        oracle::Counts end = oracle::integrate_pre(1.0, 2.0, {16.0, 24.0}, 40.0, 400.0);
        const double grid[] = {400.0};
        Trajectory traj = pre_overload(uneven, kSplit, grid);
        CHECK(traj.points[0].x1 == doctest::Approx(end.x1).epsilon(1e-4));
        CHECK(traj.points[0].x2 == doctest::Approx(end.x2).epsilon(1e-4));
    }
}

TEST_CASE("closed forms at the three simple power ratios") {
    SUBCASE("equal powers") {
        TrajectoryPoint p = corollary_closed_form(ClosedFormRatio::One, kSplit, 200.0);
        CHECK(p.x1 == doctest::Approx(80.0).epsilon(1e-12));
        CHECK(p.x2 == doctest::Approx(120.0).epsilon(1e-12));
    }
    SUBCASE("first influence at half power") {
        TrajectoryPoint p = corollary_closed_form(ClosedFormRatio::Half, kSplit, 100.0);
        CHECK(p.x1 == doctest::Approx(27.759129722642285).epsilon(1e-12));
        CHECK(p.x2 == doctest::Approx(72.240870277357715).epsilon(1e-12));
    }
    SUBCASE("first influence at double power mirrors it") {
        TrajectoryPoint p =
            corollary_closed_form(ClosedFormRatio::Two, {40.0, 24.0, 16.0}, 100.0);
        CHECK(p.x2 == doctest::Approx(27.759129722642285).epsilon(1e-12));
        CHECK(p.x1 == doctest::Approx(72.240870277357715).epsilon(1e-12));
    }
    SUBCASE("agrees with the root finder") {
        struct Case {
            ClosedFormRatio ratio;
            PowerPair powers;
            InitialState init;
        };
        const Case cases[] = {
            {ClosedFormRatio::Half, {1.0, 2.0}, kSplit},
            {ClosedFormRatio::One, {2.0, 2.0}, kSplit},
            {ClosedFormRatio::Two, {2.0, 1.0}, {40.0, 24.0, 16.0}},
        };
        auto grid = linear_grid(40.0, 4000.0, 40);
        for (const Case& c : cases) {
            Trajectory traj = pre_overload(c.powers, c.init, grid);
            for (std::size_t i = 0; i < grid.size(); ++i) {
                TrajectoryPoint p = corollary_closed_form(c.ratio, c.init, grid[i]);
                CHECK(p.x1 == doctest::Approx(traj.points[i].x1).epsilon(1e-8));
                CHECK(p.x2 == doctest::Approx(traj.points[i].x2).epsilon(1e-8));
            }
        }
    }
    SUBCASE("rejects times before the anchor") {
        CHECK_THROWS_WITH_AS(corollary_closed_form(ClosedFormRatio::One, kSplit, 39.0),
                             doctest::Contains("precedes t0"), std::invalid_argument);
    }
}

TEST_CASE("discrimination probability") {
    CHECK(discrimination_prob(100.0, 10.0, 100.0, false) == 1.0);
    CHECK(discrimination_prob(100.0, 10.0, 100.0, true) == 1.0);
    // 100.1 - 100.0 carries the usual binary representation error, so the
    // exponent is not exactly -1; allow for it.
    CHECK(discrimination_prob(100.1, 10.0, 100.0, false) ==
          doctest::Approx(0.36787944117144233).epsilon(1e-12));
    CHECK(discrimination_prob(100.05, 10.0, 100.0, true) == doctest::Approx(0.5));
    SUBCASE("linearized form hits zero at the window edge") {
        // mu = 8 and t - t_c = 0.125 are exactly representable, so the edge
        // lands on 0 without rounding noise.
        CHECK(discrimination_prob(100.125, 8.0, 100.0, true) == 0.0);
        CHECK(discrimination_prob(250.0, 8.0, 100.0, true) == 0.0);
        CHECK(discrimination_prob(150.0, 8.0, 100.0, false) > 0.0);
    }
    SUBCASE("domain errors") {
        CHECK_THROWS_AS(discrimination_prob(99.0, 10.0, 100.0, false), std::domain_error);
        CHECK_THROWS_AS(discrimination_prob(100.0, 0.0, 100.0, false), std::domain_error);
        CHECK_THROWS_AS(discrimination_prob(100.0, -1.0, 100.0, true), std::domain_error);
    }
}

TEST_CASE("growth after overload") {
    const PowerPair uneven{1.0, 2.0};
    const InitialState at_tc{100.0, 30.0, 70.0};
    const double mu = 10.0;
    const double kink = 100.0 + 1.0 / mu;

    SUBCASE("anchor constants satisfy their defining equations") {
        OverloadRegime reg = OverloadRegime::anchor(uneven, mu, at_tc);
        CHECK(reg.mu == mu);
        CHECK(reg.t_c == at_tc.t0);
        double e1 = (uneven.b - uneven.a) / uneven.a * mu * at_tc.t0;
        double e2 = (uneven.a - uneven.b) / uneven.a * mu;
        double lhs1 = std::exp(reg.log_c3 + e1 * std::log(at_tc.t0) + e2 * at_tc.t0) *
                          std::pow(at_tc.x1, uneven.b / uneven.a) +
                      at_tc.x1;
        CHECK(lhs1 == doctest::Approx(at_tc.t0).epsilon(1e-9));
        double f1 = (uneven.a - uneven.b) / uneven.b * mu * at_tc.t0;
        double f2 = (uneven.b - uneven.a) / uneven.b * mu;
        double lhs2 = std::exp(reg.log_c4 + f1 * std::log(at_tc.t0) + f2 * at_tc.t0) *
                          std::pow(at_tc.x2, uneven.a / uneven.b) +
                      at_tc.x2;
        CHECK(lhs2 == doctest::Approx(at_tc.t0).epsilon(1e-9));
    }
    SUBCASE("grid value at the onset returns the anchor state") {
        const double grid[] = {100.0, 100.05};
        Trajectory traj = post_overload(uneven, mu, at_tc, grid);
        CHECK(traj.points[0].x1 == at_tc.x1);
        CHECK(traj.points[0].x2 == at_tc.x2);
    }
    SUBCASE("window points satisfy the implicit equation") {
        OverloadRegime reg = OverloadRegime::anchor(uneven, mu, at_tc);
        double e1 = (uneven.b - uneven.a) / uneven.a * mu * at_tc.t0;
        double e2 = (uneven.a - uneven.b) / uneven.a * mu;
        auto grid = linear_grid(100.0, kink, 21);
        Trajectory traj = post_overload(uneven, mu, at_tc, grid);
        for (const auto& p : traj.points) {
            double lhs = std::exp(reg.log_c3 + e1 * std::log(p.t) + e2 * p.t) *
                             std::pow(p.x1, 2.0) +
                         p.x1;
            CHECK(std::fabs(lhs - p.t) <= 1e-6 * p.t);
            CHECK(std::fabs(p.x1 + p.x2 - p.t) <= 1e-6 * p.t);
        }
    }
    SUBCASE("shares freeze once nobody discriminates") {
        const double grid[] = {kink, 150.0, 400.0, 10000.0};
        Trajectory traj = post_overload(uneven, mu, at_tc, grid);
        double share_at_kink = traj.points[0].share1();
        for (std::size_t i = 1; i < traj.points.size(); ++i) {
            CHECK(traj.points[i].share1() ==
                  doctest::Approx(share_at_kink).epsilon(1e-9));
            CHECK(traj.points[i].x1 ==
                  doctest::Approx(traj.points[0].x1 * traj.points[i].t / kink).epsilon(1e-9));
        }
    }
    SUBCASE("branches meet at the window edge") {
        const double eps = 1e-7;
        const double grid[] = {kink - eps, kink + eps};
        Trajectory traj = post_overload(uneven, mu, at_tc, grid);
        CHECK(traj.points[0].x1 == doctest::Approx(traj.points[1].x1).epsilon(1e-6));
        CHECK(traj.points[0].x2 == doctest::Approx(traj.points[1].x2).epsilon(1e-6));
    }
    SUBCASE("counts never shrink") {
        auto grid = linear_grid(100.0, 1000.0, 200);
        Trajectory traj = post_overload(uneven, mu, at_tc, grid);
        double prev1 = 0.0, prev2 = 0.0;
        for (const auto& p : traj.points) {
            CHECK(p.x1 >= prev1);
            CHECK(p.x2 >= prev2);
            prev1 = p.x1;
            prev2 = p.x2;
        }
    }
    SUBCASE("equal powers keep the anchor split everywhere") {
        auto grid = linear_grid(100.0, 500.0, 40);
        Trajectory traj = post_overload({2.0, 2.0}, mu, at_tc, grid);
        for (const auto& p : traj.points) {
            CHECK(std::fabs(p.share1() - 0.3) < 1e-9);
        }
    }
    SUBCASE("matches a straight integration of the rate equations") {
        oracle::Counts end =
            oracle::integrate_post(1.0, 2.0, mu, 100.0, {30.0, 70.0}, 1000.0);
        const double grid[] = {1000.0};
        Trajectory traj = post_overload(uneven, mu, at_tc, grid);
        CHECK(traj.points[0].x1 == doctest::Approx(end.x1).epsilon(1e-4));
        CHECK(traj.points[0].x2 == doctest::Approx(end.x2).epsilon(1e-4));
    }
}

TEST_CASE("early-overload advantage factor") {
    const PowerPair strong_first{2.0, 1.0};
    CHECK(rho(0.0, 100.0, 10.0, strong_first) == doctest::Approx(1.0));
    CHECK(rho(0.05, 100.0, 10.0, {1.5, 1.5}) == doctest::Approx(1.0));
    CHECK(rho(0.1, 100.0, 10.0, strong_first) ==
          doctest::Approx(1.0002498646692111).epsilon(1e-13));
    SUBCASE("grows with the elapsed window and never drops below one") {
        double prev = 1.0;
        for (double delta = 0.01; delta <= 0.1; delta += 0.01) {
            double value = rho(delta, 100.0, 10.0, strong_first);
            CHECK(value >= prev);
            CHECK(value >= 1.0);
            prev = value;
        }
    }
    SUBCASE("domain errors") {
        CHECK_THROWS_AS(rho(-0.01, 100.0, 10.0, strong_first), std::domain_error);
        CHECK_THROWS_AS(rho(0.2, 100.0, 10.0, strong_first), std::domain_error);
        CHECK_THROWS_AS(rho(0.05, 100.0, 0.0, strong_first), std::domain_error);
        CHECK_THROWS_AS(rho(0.05, 0.0, 10.0, strong_first), std::domain_error);
    }
}

TEST_CASE("overload only ever helps the weaker influence") {
    auto grid = log_spaced_grid(40.0, 4000.0, 200);
    SUBCASE("second influence stronger") {
        OrderingReport rep = theorem4_check({1.0, 2.0}, 10.0, kSplit, grid);
        CHECK(rep.violations == 0);
        CHECK(rep.rows.size() == grid.size());
        CHECK(rep.max_violation <= rep.tolerance);
    }
    SUBCASE("first influence stronger") {
        OrderingReport rep = theorem4_check({2.0, 1.0}, 10.0, kSplit, grid);
        CHECK(rep.violations == 0);
        CHECK(rep.rows.size() == grid.size());
    }
    SUBCASE("equal powers give identical trajectories") {
        OrderingReport rep = theorem4_check({2.0, 2.0}, 10.0, kSplit, grid);
        CHECK(rep.violations == 0);
        CHECK(rep.max_violation < 1e-10);
        for (const auto& row : rep.rows) {
            CHECK(row.x1_post == doctest::Approx(row.x1_pre).epsilon(1e-9));
        }
    }
}

TEST_CASE("log spaced grid") {
    auto grid = log_spaced_grid(40.0, 4000.0, 11);
    REQUIRE(grid.size() == 11);
    CHECK(grid.front() == 40.0);
    CHECK(grid.back() == 4000.0);
    CHECK(grid[5] == doctest::Approx(400.0).epsilon(1e-12));
    for (std::size_t i = 1; i < grid.size(); ++i) CHECK(grid[i] > grid[i - 1]);

    CHECK_THROWS_AS(log_spaced_grid(0.0, 10.0, 5), std::invalid_argument);
    CHECK_THROWS_AS(log_spaced_grid(10.0, 5.0, 5), std::invalid_argument);
    CHECK_THROWS_AS(log_spaced_grid(1.0, 10.0, 1), std::invalid_argument);
}

TEST_CASE("trajectory files round trip") {
    auto grid = linear_grid(40.0, 123.456, 7);
    Trajectory traj = pre_overload({1.0, 2.0}, kSplit, grid);
    fs::path p = fs::temp_directory_path() / "rivalnet_traj.csv";
    write_trajectory_csv(p.string(), traj, {{"powers", "1,2"}, {"seed", "7"}});

    std::vector<std::pair<std::string, std::string>> meta;
    Trajectory back = read_trajectory_csv(p.string(), &meta);
    REQUIRE(back.points.size() == traj.points.size());
    for (std::size_t i = 0; i < traj.points.size(); ++i) {
        CHECK(back.points[i].t == traj.points[i].t);
        CHECK(back.points[i].x1 == traj.points[i].x1);
        CHECK(back.points[i].x2 == traj.points[i].x2);
    }
    REQUIRE(meta.size() == 2);
    CHECK(meta[0].first == "powers");
    CHECK(meta[0].second == "1,2");
    CHECK(meta[1].second == "7");
    fs::remove(p);

    SUBCASE("read errors") {
        CHECK_THROWS_WITH_AS(read_trajectory_csv((p / "missing.csv").string()),
                             doctest::Contains("cannot open"), std::runtime_error);
        fs::path q = fs::temp_directory_path() / "rivalnet_traj_bad.csv";
        {
            std::ofstream out(q);
            out << "# only=comments\n";
        }
        CHECK_THROWS_WITH_AS(read_trajectory_csv(q.string()),
                             doctest::Contains("has no header row"), std::runtime_error);
        {
            std::ofstream out(q);
            out << "time,x1,x2\n";
        }
        CHECK_THROWS_WITH_AS(read_trajectory_csv(q.string()),
                             doctest::Contains("unexpected header"), std::runtime_error);
        {
            std::ofstream out(q);
            out << "t,x1,x2,share1,share2\n40,16,oops\n";
        }
        CHECK_THROWS_WITH_AS(read_trajectory_csv(q.string()),
                             doctest::Contains("line 2"), std::runtime_error);
        fs::remove(q);
    }
}
