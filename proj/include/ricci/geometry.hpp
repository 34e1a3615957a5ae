#pragma once

#include <map>
#include <string>
#include <vector>

// Rotationally symmetric metric profiles g = ds^2 + psi^2 g_can on S^3 and
// their curvature fields.  A profile is the radius psi sampled on an
// arclength grid running pole to pole; smooth closing requires slope +1/-1
// and vanishing even derivatives at the poles.
namespace ricci {

struct ProfileGrid {
    std::vector<double> s;    // arclength, strictly increasing
    std::vector<double> psi;  // radius, 0 at both ends, > 0 inside
    double t = 0.0;           // unrescaled time
};

struct CurvatureFields {
    std::vector<double> K0;  // radial sectional curvature  -psi_ss/psi
    std::vector<double> K1;  // orbital sectional curvature (1-psi_s^2)/psi^2
    std::vector<double> R;   // scalar curvature 4*K0 + 2*K1
    std::vector<double> Q;   // ratio K0/K1 (1 at poles by the limit value)
};

struct ClosingResidual {
    double r_minus = 0.0;       // |psi_s(s-) - 1|
    double r_plus = 0.0;        // |psi_s(s+) + 1|
    double psi_ss_minus = 0.0;  // |psi_ss| at the left pole
    double psi_ss_plus = 0.0;   // |psi_ss| at the right pole
};

// Throws std::invalid_argument when the grid violates the profile invariants
// (non-monotone s, negative interior radius, nonzero endpoints, too short).
void validate(const ProfileGrid& p);

// Curvatures on the full grid.  Interior points use index-space stencils
// (4th order for psi_s, 2nd for psi_ss); within a small collar of each pole
// both curvatures are evaluated from an odd-series fit
// psi = eta + c3 eta^3 + c5 eta^5 with the closing slope pinned, which keeps
// K1 = (1-psi_s^2)/psi^2 well conditioned where psi -> 0.  At the poles
// themselves K1 := K0 (the l'Hospital limit).
CurvatureFields curvatures(const ProfileGrid& p);

ClosingResidual closing_residual(const ProfileGrid& p);

// Analytic test profiles sampled on n uniformly spaced arclength points.
ProfileGrid make_sphere(double r, int n);
// Cylinder of radius r and length `barrel` closed by two hemispherical caps.
ProfileGrid make_capsule(double r, double barrel, int n);
// Two bulbs joined by a neck; psi = A(sin(s/A) - beta sin^3(s/A)) with
// (A, beta) solved from the requested neck and bulb radii (neck < bulb).
ProfileGrid make_dumbbell(double neck, double bulb, int n);

// String-keyed dispatch used by the CLI; throws on unknown kind.
ProfileGrid fixture(const std::string& kind, const std::map<std::string, double>& params);

// Slope field psi_s on the grid (index-space 4th order over d s).
std::vector<double> profile_slope(const ProfileGrid& p);

}  // namespace ricci
