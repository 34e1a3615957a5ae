#pragma once

#include <limits>
#include <string>
#include <vector>

#include "ricci/geometry.hpp"

// Time stepping for the rotationally symmetric flow in two charts:
//   unrescaled  psi_t = psi_ss - (1 - psi_s^2)/psi        (material grid)
//   rescaled    u_tau = u_ss - (s/2 + J) u_s + u_s^2/u - 1/u + u/2
// where J(s) = 2 int_0^s u_ss/u, computed in commuting variables.  Both use
// an IMEX step: implicit diffusion, explicit reaction, the nonlocal term
// lagged.  Grid nodes are material: the node index is the Lagrangian
// coordinate and the arclength positions stretch by ds_t = 2 (psi_ss/psi) ds.
namespace ricci {

struct RescaledProfile {
    std::vector<double> sigma;
    std::vector<double> u;
    double tau = 0.0;
    double sigma_minus = 0.0;  // tip positions (== grid ends up to remap slack)
    double sigma_plus = 0.0;
    bool has_tips = true;  // false: cylinder-type window, ends frozen
};

struct TipChart {
    std::vector<double> u;  // ascending, from the tip inward
    std::vector<double> Y;  // u_sigma^2 at matching samples
    double tau = 0.0;
};

struct FlowMonitors {
    double t = 0.0;
    double tau = 0.0;
    double Q_max = 0.0;
    double R_max = 0.0;
    bool R_max_at_tip = false;
    double psi_max = 0.0;
    double psi_min = 0.0;
    double J_tip = std::numeric_limits<double>::quiet_NaN();
    double kappa = std::numeric_limits<double>::quiet_NaN();
};

struct StepResult {
    ProfileGrid profile;
    bool accepted = true;
    double t_death_estimate = 0.0;  // populated when the step is rejected
};

// Largest dt the explicit pieces tolerate (reaction and stretch scale with
// the curvature): 0.25 / max|R|.
double stability_bound(const ProfileGrid& p);

// One IMEX step; requires dt <= stability_bound and closing residual < 1e-2.
// Rejects (accepted = false) when the interior radius would cross zero.
StepResult step_unrescaled(const ProfileGrid& p, double dt);

// Map to rescaled variables around extinction time T:
//   u = psi/sqrt(T-t), sigma = (s - s_mid)/sqrt(T-t), tau = -log(T-t).
RescaledProfile rescale(const ProfileGrid& p, double T);

// J(sigma) = 2 int_0^sigma u_ss/u, trapezoid with the tip collar evaluated
// from the odd-series fit.  Throws if the integrand overflows.
std::vector<double> compute_J_field(const RescaledProfile& r);
double compute_J(const RescaledProfile& r, double sigma);

RescaledProfile step_rescaled(const RescaledProfile& r, double dtau);

// sigma/2 + J(sigma) at the tip on the given side (+1 right, -1 left).
// Throws when the tip slope residual exceeds 0.05.
double tip_ode_rhs(const RescaledProfile& r, int side = +1);

// Y(u) = u_sigma^2 between the tip on `side` and the first slope reversal
// (or u_cut if positive).
TipChart to_tip_chart(const RescaledProfile& r, int side, double u_cut = 0.0);

FlowMonitors monitors_unrescaled(const ProfileGrid& p);

struct FlowConfig {
    std::string fixture = "sphere";
    double r = 2.0;
    double neck = 1.1;
    double bulb = 1.15;
    double barrel = 2.0;
    int n = 201;
    double dt_factor = 0.2;  // dt = dt_factor * h^2, capped by stability
    double t_end = std::numeric_limits<double>::infinity();
    int output_every = 25;
    bool symmetric = true;
    std::string output_dir;  // empty: no trajectory files
};

struct FlowRun {
    std::vector<FlowMonitors> monitors;      // one per output time
    std::vector<RescaledProfile> snapshots;  // rescaled with T_estimate
    double T_estimate = 0.0;
    double t_final = 0.0;
    bool extinct = false;
    ProfileGrid final_profile;
};

FlowRun run_flow(const FlowConfig& cfg);

}  // namespace ricci
