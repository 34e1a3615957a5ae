#pragma once

#include <span>

// Odd-series model of a profile near a closing pole/tip:
//   f(eta) = eta + c3 eta^3 + c5 eta^5,  eta = distance to the pole,
// the slope pinned to the closing value.  Both curvature ratios that are
// 0/0 at the pole evaluate from the fit in cancellation-free form.
namespace ricci {

struct OddSeriesFit {
    double c3 = 0.0;
    double c5 = 0.0;
};

// Least-squares fit of (f - eta) against (eta^3, eta^5).
OddSeriesFit fit_odd_series(std::span<const double> eta, std::span<const double> f);

// K0 = -f''/f and K1 = (1 - f'^2)/f^2 of the fitted model at distance eta.
void odd_series_curvatures(const OddSeriesFit& fit, double eta, double& K0, double& K1);

// Even model for the squared radius near a pole:
//   w(eta) = c2 eta^2 + c4 eta^4 + c6 eta^6.
struct EvenSeriesFit {
    double c2 = 0.0;
    double c4 = 0.0;
    double c6 = 0.0;

    double wss(double eta) const {
        const double e2 = eta * eta;
        return 2.0 * c2 + 12.0 * c4 * e2 + 30.0 * c6 * e2 * e2;
    }
};

EvenSeriesFit fit_even_series(std::span<const double> eta, std::span<const double> w);

}  // namespace ricci
