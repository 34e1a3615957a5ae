#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ricci/barriers.hpp"
#include "ricci/bryant.hpp"

using namespace ricci;

namespace {
const BryantProfile& deep_profile() {
    static const BryantProfile b = solve_bryant(120.0, 1e-10);
    return b;
}
}  // namespace

TEST_CASE("barrier values against the far-field expansion") {
    const auto bar = build_barrier(50.0, deep_profile());
    SUBCASE("the a^-2 term vanishes at u = sqrt(2)") {
        const double v = barrier_eval(bar, std::sqrt(2.0));
        CHECK(std::abs(v) < 10.0 / (50.0 * 50.0 * 50.0 * 50.0));
    }
    SUBCASE("at u = 1 the leading term is a^-2") {
        CHECK(barrier_eval(bar, 1.0) == doctest::Approx(4e-4).epsilon(2.5e-2));
        CHECK(std::abs(barrier_eval(bar, 1.0) - 4e-4) < 1e-5);
    }
    SUBCASE("inner endpoint is O(1)") {
        const double v = bar.Ya.front();  // u = r*/a, rho = r*/sqrt(2)
        CHECK(v > 0.5);
        CHECK(v < 0.9);
    }
}

TEST_CASE("leading-term remainder is O(a^-4) with a stable constant") {
    auto fitC = [&](double a) {
        const auto bar = build_barrier(a, deep_profile());
        double C = 0.0;
        for (std::size_t i = 0; i < bar.u.size(); ++i) {
            const double u = bar.u[i];
            if (u < std::sqrt(2.0) - 0.1 || u > std::sqrt(2.0) + 0.1) continue;
            const double lead = (2.0 / (u * u) - 1.0) / (a * a);
            C = std::max(C, std::abs(bar.Ya[i] - lead) * a * a * a * a);
        }
        return C;
    };
    const double c30 = fitC(30.0), c50 = fitC(50.0);
    CHECK(c30 < 10.0);
    CHECK(c50 / c30 == doctest::Approx(1.0).epsilon(0.25));  // stable under refinement
}

TEST_CASE("elliptic operator value") {
    SUBCASE("identically zero curve gives zero") {
        BarrierCurve z;
        z.a = 30.0;
        z.r_star = 2.0;
        for (int i = 0; i < 1001; ++i) {
            z.u.push_back(0.5 + i * 1e-3);
            z.Ya.push_back(0.0);
        }
        const auto rep = supersolution_residual(z);
        for (double v : rep.residual) CHECK(v == 0.0);
    }
    SUBCASE("sign and magnitude on the inspection window") {
        // The residual of the leading-order curve is a^-4 (8 u^-4 - 2 u^-2)
        // + O(a^-6): positive on the window.  The report must say so and
        // name the first violation honestly.
        const auto bar = build_barrier(50.0, deep_profile());
        const auto rep = supersolution_residual(bar);
        CHECK_FALSE(rep.negative_in_window);
        CHECK(rep.first_violation_u > 0.0);
        CHECK(rep.sup_in_window > 0.0);
        // compare against the analytic order at u = 1
        double at_u1 = 0.0;
        for (std::size_t i = 0; i < rep.u.size(); ++i)
            if (std::abs(rep.u[i] - 1.0) < 2e-3) at_u1 = rep.residual[i];
        const double predict = (8.0 - 2.0) / (50.0 * 50.0 * 50.0 * 50.0);
        CHECK(at_u1 == doctest::Approx(predict).epsilon(0.3));
    }
    SUBCASE("residual at fixed u decays like a^-4 when a doubles") {
        auto at_u = [&](double a, double u0) {
            const auto rep = supersolution_residual(build_barrier(a, deep_profile()));
            double best = 1e300, val = 0.0;
            for (std::size_t i = 0; i < rep.u.size(); ++i)
                if (std::abs(rep.u[i] - u0) < best) {
                    best = std::abs(rep.u[i] - u0);
                    val = rep.residual[i];
                }
            return val;
        };
        const double r40 = at_u(40.0, 1.0), r80 = at_u(80.0, 1.0);
        const double p = std::log(r40 / r80) / std::log(2.0);
        CHECK(p > 2.0);  // decays at least quadratically in a
        CHECK(p == doctest::Approx(4.0).epsilon(0.15));
    }
}

TEST_CASE("comparison of flow values against the barrier") {
    SUBCASE("near-cylinder slope law stays below the matching barrier") {
        // Y(u) = (1/(2|tau|))(2u^-2 - 1) + 1/(4 tau^2) at tau = -220 against
        // a = sqrt(2|tau|/(1+delta)), delta = 0.1 (a = 20 exactly)
        const double tau = -220.0, delta = 0.1;
        const double a = std::sqrt(2.0 * std::abs(tau) / (1.0 + delta));
        CHECK(a == doctest::Approx(20.0).epsilon(1e-12));
        const auto bar = build_barrier(a, deep_profile());
        auto flowY = [&](double u) {
            return (2.0 / (u * u) - 1.0) / (2.0 * std::abs(tau)) +
                   1.0 / (4.0 * tau * tau);
        };
        CHECK(barrier_dominates(flowY, bar, 0.8, 1.3));
    }
    SUBCASE("zero is below any barrier") {
        const auto bar = build_barrier(50.0, deep_profile());
        CHECK(barrier_dominates([](double) { return 0.0; }, bar, 0.8, 1.3));
    }
    SUBCASE("one exceeds an O(a^-2) barrier") {
        const auto bar = build_barrier(50.0, deep_profile());
        CHECK_FALSE(barrier_dominates([](double) { return 1.0; }, bar, 0.8, 1.3));
    }
    SUBCASE("monotone in slack") {
        const auto bar = build_barrier(50.0, deep_profile());
        auto nudged = [&](double u) { return barrier_eval(bar, u) + 2e-8; };
        CHECK_FALSE(barrier_dominates(nudged, bar, 0.8, 1.3, 1e-8));
        CHECK(barrier_dominates(nudged, bar, 0.8, 1.3, 3e-8));
    }
    SUBCASE("domain mismatch throws") {
        const auto bar = build_barrier(50.0, deep_profile());
        CHECK_THROWS_AS(barrier_dominates([](double) { return 0.0; }, bar, 0.0, 1.0),
                        std::invalid_argument);
    }
}

TEST_CASE("construction preconditions") {
    CHECK_THROWS_AS(build_barrier(10.0, deep_profile()), std::invalid_argument);
    const auto shallow = solve_bryant(20.0, 1e-8);
    CHECK_THROWS_AS(build_barrier(50.0, shallow), std::invalid_argument);
}
