#pragma once

#include <vector>

// The Bryant steady soliton profile Z0(rho) normalized to maximal scalar
// curvature one: solution of
//   Z0 Z0'' - (1/2)(Z0')^2 + (1-Z0) Z0'/rho + 2 (1-Z0) Z0 / rho^2 = 0
// with Z0(0) = 1, which fixes the origin expansion 1 - rho^2/6 + ... and the
// far field rho^-2 + O(rho^-4).
namespace ricci {

struct BryantProfile {
    std::vector<double> rho;  // strictly increasing from the launch point
    std::vector<double> Z;    // Z0 values in (0, 1]
    std::vector<double> Zp;   // stored derivative dZ0/drho
};

inline constexpr double kBryantB0 = -1.0 / 6.0;

// Origin series 1 + b0 f^2 + (2/5) b0^2 f^4 with b0 = -1/6, valid |f| <= 0.5.
double series_origin(double f);
double series_origin_deriv(double f);

// Adaptive RK45 integration from a series launch at rho0 = 1e-3 out to
// rho_max.  `tol` is the local relative error target; `max_step` of 0 lets
// the controller choose (pass e.g. 1e-3 to force a fine uniform grid).
// Throws std::runtime_error on integration failure or if Z leaves (0, 1].
BryantProfile solve_bryant(double rho_max, double tol, double max_step = 0.0);

// Cubic Hermite evaluation off the stored grid; clamps to the series below
// the launch point.
double bryant_eval(const BryantProfile& b, double rho);
double bryant_eval_deriv(const BryantProfile& b, double rho);

struct C0Result {
    double C0 = 0.0;         // corrected total of the integral of Z'/(rho sqrt(Z))
    double quad_part = 0.0;  // grid quadrature contribution
    double tail_lo = 0.0;    // series correction below the launch point
    double tail_hi = 0.0;    // far-field correction beyond the grid
    double c0_measured = 0.0;  // far-field coefficient of rho^-2, expected 1
    bool tail_warning = false; // tails exceed 10% of the total
};

// Integral C0 = int_0^inf Z0'/(rho sqrt(Z0)) drho.  Composite Simpson on a
// log-uniform resampling of the grid, with endpoint corrections from the two
// asymptotic expansions.  Requires rho to reach at least 30.
C0Result compute_C0(const BryantProfile& b);

struct DivergenceReport {
    std::vector<double> rho;       // interior evaluation points
    std::vector<double> residual;  // lhs - rhs of the divergence identity
    double sup_interior = 0.0;
    double boundary_lo = 0.0;  // Psi_rho + (Psi - 1/Psi)/rho near the origin
    double boundary_hi = 0.0;  // same functional at the far end (limit -1)
    double rho_lo = 0.0;
    double rho_hi = 0.0;
};

// Pointwise residual of (2/rho) Psi_rho = d/drho [Psi_rho + (Psi - 1/Psi)/rho]
// for Psi = sqrt(Z0), with the outer derivative taken by centered differences
// on the profile grid.  Also evaluates the boundary functional at both ends.
DivergenceReport divergence_residual(const BryantProfile& b);

}  // namespace ricci
