#include "ricci/pole_series.hpp"

#include <cmath>

namespace ricci {

OddSeriesFit fit_odd_series(std::span<const double> eta, std::span<const double> f) {
    double a11 = 0, a12 = 0, a22 = 0, b1 = 0, b2 = 0;
    for (std::size_t i = 0; i < eta.size(); ++i) {
        const double e3 = eta[i] * eta[i] * eta[i];
        const double e5 = e3 * eta[i] * eta[i];
        const double r = f[i] - eta[i];
        a11 += e3 * e3;
        a12 += e3 * e5;
        a22 += e5 * e5;
        b1 += e3 * r;
        b2 += e5 * r;
    }
    const double det = a11 * a22 - a12 * a12;
    OddSeriesFit fit;
    if (std::abs(det) < 1e-300) return fit;
    fit.c3 = (b1 * a22 - b2 * a12) / det;
    fit.c5 = (a11 * b2 - a12 * b1) / det;
    return fit;
}

void odd_series_curvatures(const OddSeriesFit& fit, double eta, double& K0, double& K1) {
    const double e2 = eta * eta;
    const double den = 1.0 + fit.c3 * e2 + fit.c5 * e2 * e2;
    K0 = -(6.0 * fit.c3 + 20.0 * fit.c5 * e2) / den;
    const double s = 3.0 * fit.c3 + 5.0 * fit.c5 * e2;  // f' = 1 + s*eta^2
    K1 = -((6.0 * fit.c3 + 10.0 * fit.c5 * e2) + e2 * s * s) / (den * den);
}

EvenSeriesFit fit_even_series(std::span<const double> eta, std::span<const double> w) {
    // normal equations for the basis (eta^2, eta^4, eta^6)
    double a[3][3] = {};
    double b[3] = {};
    for (std::size_t i = 0; i < eta.size(); ++i) {
        const double e2 = eta[i] * eta[i];
        const double p[3] = {e2, e2 * e2, e2 * e2 * e2};
        for (int r = 0; r < 3; ++r) {
            b[r] += p[r] * w[i];
            for (int c = 0; c < 3; ++c) a[r][c] += p[r] * p[c];
        }
    }
    // Gaussian elimination with partial pivoting on the 3x3 system
    int idx[3] = {0, 1, 2};
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(a[idx[r]][col]) > std::abs(a[idx[piv]][col])) piv = r;
        std::swap(idx[col], idx[piv]);
        const double d = a[idx[col]][col];
        if (std::abs(d) < 1e-300) return {};
        for (int r = col + 1; r < 3; ++r) {
            const double f = a[idx[r]][col] / d;
            for (int c = col; c < 3; ++c) a[idx[r]][c] -= f * a[idx[col]][c];
            b[idx[r]] -= f * b[idx[col]];
        }
    }
    double x[3];
    for (int r = 2; r >= 0; --r) {
        double acc = b[idx[r]];
        for (int c = r + 1; c < 3; ++c) acc -= a[idx[r]][c] * x[c];
        x[r] = acc / a[idx[r]][r];
    }
    return {x[0], x[1], x[2]};
}

}  // namespace ricci
