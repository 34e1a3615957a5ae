#pragma once

#include <vector>

#include "ricci/bryant.hpp"
#include "ricci/flow.hpp"

// Three-region model of the backward-in-time profile: a parabolic cylinder
// perturbation sqrt(2)(1 - (sigma^2-2)/(8|tau|)) for |sigma| <= L, the
// transport profile sqrt(2 - z^2/2) in z = sigma/sqrt|tau|, and a tip piece
// reconstructed from the Bryant profile at curvature scale kappa ~ |tau|,
// glued with C^1 blends.  Harnesses measure seams, equation residuals, and
// the predicted curvature/diameter laws.
namespace ricci {

struct MatchedAnsatz {
    double tau = -400.0;
    double parabolic_L = 5.0;  // parabolic window half-width
    double theta = 0.3;        // intermediate floor in u
    double kappa_model = 0.0;  // 0 -> |tau|
    double kappa_log_coeff = 0.0;   // optional kappa = |tau| + c log|tau|
    double seam_overlap = 0.0;      // parabolic/intermediate blend width; 0 -> L/2
    double tip_blend_width = 0.1;   // blend width in u at the tip seam
};

double kappa_of(const MatchedAnsatz& a);

// sqrt(2) (1 - (sigma^2 - 2)/(8 |tau|)); requires tau <= -10.
double parabolic_ansatz(double sigma, double tau);

// sqrt(2 - z^2/2) on |z| <= 2.
double intermediate_profile(double z);

// The glued profile on a symmetric uniform grid of n points (n forced odd).
RescaledProfile matched_profile(const MatchedAnsatz& a, const BryantProfile& bz,
                                int n = 4001);

struct SeamReport {
    double parabolic_jump = 0.0;  // |parabolic - intermediate| at sigma = L
    double tip_slope = 0.0;       // u_sigma at the reconstructed tip
    double sigma_plus = 0.0;
    double diameter_ratio = 0.0;  // sigma_plus / (2 sqrt|tau|)
};
SeamReport seam_report(const MatchedAnsatz& a, const BryantProfile& bz);

enum class Region { Parabolic, Intermediate, Tip };

struct ResidualReport {
    Region region{};
    std::vector<double> tau_ladder;
    std::vector<double> sup_norm;   // one per ladder point
    double fitted_exponent = 0.0;   // sup ~ |tau|^-p
};

// Residual of u_tau = u_ss - (s/2) u_s - J u_s + u_s^2/u - 1/u + u/2 on the
// region, with J taken from the glued profile.  u_tau is symbolic for the
// parabolic and intermediate pieces and a centered tau-difference for the
// tip piece.
ResidualReport pde_residual(Region region, const std::vector<double>& tau_ladder,
                            const MatchedAnsatz& base, const BryantProfile& bz);

struct Predictions {
    double k = 0.0;  // log|t| / |t|
    double d = 0.0;  // 4 sqrt(|t| log|t|)
};
Predictions predictions(double t);  // requires t <= -e^2

struct TipConsistency {
    double lemma_gap_rel = 0.0;       // slope law vs (2u^-2-1)/(2|tau|) + 1/(4 tau^2)
    bool upper_bound_ok = false;      // Y <= (1+delta)/(2|tau|)(2u^-2 - 1)
    double upper_bound_margin = 0.0;  // min of bound - Y over the checked range
    double J_over_sqrt_kappa = 0.0;
    double sigma_plus_ratio = 0.0;    // sigma_+/(2 sqrt|tau|)
    double tip_slope = 0.0;
};
TipConsistency tip_consistency(const MatchedAnsatz& a, const BryantProfile& bz,
                               double delta = 0.5);

}  // namespace ricci
