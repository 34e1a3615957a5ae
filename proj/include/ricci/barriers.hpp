#pragma once

#include <functional>
#include <vector>

#include "ricci/bryant.hpp"

// One-parameter comparison family Y_a(u) = Z0(a u / sqrt(2)) - a^-2 built
// from the Bryant profile, used against the Y-equation near the cylinder.
namespace ricci {

struct BarrierCurve {
    double a = 0.0;
    double r_star = 2.0;
    std::vector<double> u;   // uniform grid on [r_star/a, (9/8) sqrt(2)]
    std::vector<double> Ya;
};

// Requires a >= 20 and a Bryant grid reaching (9/8)*a.
BarrierCurve build_barrier(double a, const BryantProfile& bryant,
                           double r_star = 2.0, int n = 4001);

struct SupersolutionReport {
    std::vector<double> u;         // interior evaluation grid
    std::vector<double> residual;  // elliptic operator value, required < 0
    double window_lo = 0.0;        // inspection window [2 sqrt(2) r*/a, sqrt(2)-eta]
    double window_hi = 0.0;
    double sup_in_window = 0.0;
    bool negative_in_window = false;
    double first_violation_u = 0.0;  // 0 when none
};

// Pointwise value of
//   Ya Ya'' - (u/2) Ya' - (1/2)(Ya')^2 + (1-Ya) Ya'/u + 2 (1-Ya) Ya/u^2
// by centered differences on the sampled curve.
SupersolutionReport supersolution_residual(const BarrierCurve& b, double eta = 0.1);

// True iff flow_Y(u) <= Ya(u) + slack over [lo, hi] (sampled densely).
// Throws if [lo, hi] leaves the barrier domain.
bool barrier_dominates(const std::function<double(double)>& flow_Y,
                       const BarrierCurve& b, double lo, double hi,
                       double slack = 1e-8);

double barrier_eval(const BarrierCurve& b, double u);

}  // namespace ricci
