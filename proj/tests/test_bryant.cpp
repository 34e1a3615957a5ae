#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ricci/bryant.hpp"

using namespace ricci;

namespace {
const BryantProfile& shared_profile() {
    static const BryantProfile b = solve_bryant(50.0, 1e-10);
    return b;
}
}  // namespace

TEST_CASE("origin series values") {
    CHECK(series_origin(0.0) == 1.0);
    // 1 - 0.015 + (2/5)(1/36)(0.0081)
    CHECK(series_origin(0.3) == doctest::Approx(0.985090).epsilon(1e-5));
}

TEST_CASE("profile matches the origin expansion") {
    const auto& b = shared_profile();
    CHECK(std::abs(bryant_eval(b, 0.1) - (1.0 - 0.01 / 6.0)) < 1e-5);
    CHECK(std::abs(bryant_eval(b, 0.2) - series_origin(0.2)) < 1e-5);
    CHECK(b.Z.front() > 1.0 - 1e-6);  // series launch keeps Z(0+) at 1
}

TEST_CASE("far field: rho^2 Z -> 1") {
    const auto& b = shared_profile();
    CHECK(900.0 * bryant_eval(b, 30.0) == doctest::Approx(1.0).epsilon(5e-3));
}

TEST_CASE("Z is strictly decreasing") {
    const auto& b = shared_profile();
    for (std::size_t i = 0; i < b.rho.size(); ++i) CHECK(b.Zp[i] < 0.0);
    for (std::size_t i = 0; i < b.Z.size(); ++i) {
        CHECK(b.Z[i] > 0.0);
        CHECK(b.Z[i] <= 1.0);
    }
}

TEST_CASE("C0 integral") {
    const auto& b = shared_profile();
    const auto c0 = compute_C0(b);

    SUBCASE("corrected total is -1") {
        CHECK(c0.C0 == doctest::Approx(-1.0).epsilon(1e-3));
        CHECK_FALSE(c0.tail_warning);
    }
    SUBCASE("far-field coefficient measures to 1") {
        CHECK(c0.c0_measured == doctest::Approx(1.0).epsilon(2e-3));
    }
    SUBCASE("integrand approaches 2 b0 = -1/3 near the origin") {
        const double g = bryant_eval_deriv(b, 0.1) /
                         (0.1 * std::sqrt(bryant_eval(b, 0.1)));
        CHECK(g == doctest::Approx(-1.0 / 3.0).epsilon(3e-2));
    }
    SUBCASE("truncating at rho = 5 without tails overshoots -1") {
        // trapezoid of the integrand on [rho_min, 5] only
        double acc = 0.0;
        for (std::size_t i = 1; i < b.rho.size() && b.rho[i] <= 5.0; ++i) {
            auto g = [&](std::size_t k) {
                return b.Zp[k] / (b.rho[k] * std::sqrt(b.Z[k]));
            };
            acc += 0.5 * (b.rho[i] - b.rho[i - 1]) * (g(i) + g(i - 1));
        }
        CHECK(acc > -1.0);                       // missing negative tail
        CHECK(acc < -0.9);                       // but most of the mass is in
        CHECK(acc - (-1.0) < 2.0 / (5.0 * 5.0));  // bounded by the rho^-2 tail
    }
}

TEST_CASE("refinement: halving the tolerance moves C0 by less than 10x tol") {
    const double tol = 1e-8;
    const auto a = compute_C0(solve_bryant(40.0, tol));
    const auto b = compute_C0(solve_bryant(40.0, 0.5 * tol));
    CHECK(std::abs(a.C0 - b.C0) < 10.0 * tol);
}

TEST_CASE("divergence identity") {
    // fine fixed-step grid (1e-3 spacing)
    const auto b = solve_bryant(30.0, 1e-10, 1e-3);
    const auto rep = divergence_residual(b);

    SUBCASE("interior residual") { CHECK(rep.sup_interior < 1e-4); }
    SUBCASE("boundary functional limits") {
        // flux B(rho) = Psi_rho + (Psi - 1/Psi)/rho: B -> 0 at 0 like -rho/3
        auto B = [&](double rho) {
            const double Z = bryant_eval(b, rho);
            const double Zp = bryant_eval_deriv(b, rho);
            const double Psi = std::sqrt(Z);
            return Zp / (2.0 * Psi) + (Psi - 1.0 / Psi) / rho;
        };
        CHECK(std::abs(B(0.02)) < 1e-2);
        CHECK(B(0.05) == doctest::Approx(-0.05 / 3.0).epsilon(5e-2));
        CHECK(rep.boundary_hi == doctest::Approx(-1.0).epsilon(1e-2));
    }
}

TEST_CASE("pressure-equation equivalence is an algebraic identity") {
    // any smooth positive Z (not a solution): residual of the Z-form equals
    // 2 Psi^3 times the residual of the Psi-form
    auto Z = [](double r) { return 1.0 / (1.0 + r * r); };
    auto Zp = [](double r) {
        const double d = 1.0 + r * r;
        return -2.0 * r / (d * d);
    };
    auto Zpp = [](double r) {
        const double d = 1.0 + r * r;
        return (6.0 * r * r - 2.0) / (d * d * d);
    };
    for (double r : {0.3, 0.7, 1.3, 2.9}) {
        const double z = Z(r), zp = Zp(r), zpp = Zpp(r);
        const double F = z * zpp - 0.5 * zp * zp + (1 - z) * zp / r +
                         2.0 * (1 - z) * z / (r * r);
        const double psi = std::sqrt(z);
        const double psip = zp / (2 * psi);
        const double psipp = zpp / (2 * psi) - zp * zp / (4 * z * psi);
        const double G = psipp + (1.0 / z - 1.0) * psip / r +
                         (1.0 / psi - psi) / (r * r);
        CHECK(F == doctest::Approx(2.0 * psi * psi * psi * G).epsilon(1e-12));
    }
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(solve_bryant(5.0, 1e-10), std::invalid_argument);
    CHECK_THROWS_AS(solve_bryant(40.0, 1e-3), std::invalid_argument);
    CHECK_THROWS_AS(solve_bryant(40.0, 1e-15), std::invalid_argument);
    const auto& b = shared_profile();
    CHECK_THROWS_AS(bryant_eval(b, 1e9), std::out_of_range);
}
