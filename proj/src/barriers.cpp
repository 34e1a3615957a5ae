#include "ricci/barriers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ricci/numerics.hpp"

namespace ricci {

BarrierCurve build_barrier(double a, const BryantProfile& bryant, double r_star, int n) {
    if (a < 20.0) throw std::invalid_argument("build_barrier: a >= 20 required");
    if (n < 101) throw std::invalid_argument("build_barrier: grid too coarse");
    const double u_lo = r_star / a;
    const double u_hi = 1.125 * std::sqrt(2.0);
    const double rho_needed = a * u_hi / std::sqrt(2.0);
    if (bryant.rho.back() < rho_needed)
        throw std::invalid_argument("build_barrier: bryant grid too short for this a");

    CubicHermite z(bryant.rho, bryant.Z, bryant.Zp);
    BarrierCurve b;
    b.a = a;
    b.r_star = r_star;
    b.u.resize(n);
    b.Ya.resize(n);
    const double inv_a2 = 1.0 / (a * a);
    for (int i = 0; i < n; ++i) {
        const double u = u_lo + (u_hi - u_lo) * i / double(n - 1);
        b.u[i] = u;
        b.Ya[i] = z(a * u / std::sqrt(2.0)) - inv_a2;
    }
    return b;
}

SupersolutionReport supersolution_residual(const BarrierCurve& b, double eta) {
    const std::size_t n = b.u.size();
    if (n < 5) throw std::invalid_argument("supersolution_residual: grid too coarse");
    const double h = b.u[1] - b.u[0];

    SupersolutionReport rep;
    rep.u.reserve(n - 2);
    rep.residual.reserve(n - 2);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double u = b.u[i];
        const double Y = b.Ya[i];
        const double Yp = (b.Ya[i + 1] - b.Ya[i - 1]) / (2.0 * h);
        const double Ypp = (b.Ya[i + 1] - 2.0 * Y + b.Ya[i - 1]) / (h * h);
        const double val = Y * Ypp - 0.5 * u * Yp - 0.5 * Yp * Yp +
                           (1.0 - Y) * Yp / u + 2.0 * (1.0 - Y) * Y / (u * u);
        rep.u.push_back(u);
        rep.residual.push_back(val);
    }

    rep.window_lo = 2.0 * std::sqrt(2.0) * b.r_star / b.a;
    rep.window_hi = std::sqrt(2.0) - eta;
    rep.sup_in_window = -std::numeric_limits<double>::infinity();
    rep.first_violation_u = 0.0;
    for (std::size_t i = 0; i < rep.u.size(); ++i) {
        if (rep.u[i] < rep.window_lo || rep.u[i] > rep.window_hi) continue;
        if (rep.residual[i] > rep.sup_in_window) rep.sup_in_window = rep.residual[i];
        if (rep.residual[i] >= 0.0 && rep.first_violation_u == 0.0)
            rep.first_violation_u = rep.u[i];
    }
    rep.negative_in_window = rep.sup_in_window < 0.0;
    return rep;
}

double barrier_eval(const BarrierCurve& b, double u) {
    if (u < b.u.front() - 1e-12 || u > b.u.back() + 1e-12)
        throw std::out_of_range("barrier_eval: u outside the curve domain");
    const double h = b.u[1] - b.u[0];
    const double pos = (u - b.u.front()) / h;
    std::size_t i = std::min<std::size_t>(std::size_t(std::max(pos, 0.0)), b.u.size() - 2);
    const double t = (u - b.u[i]) / h;
    return (1.0 - t) * b.Ya[i] + t * b.Ya[i + 1];
}

bool barrier_dominates(const std::function<double(double)>& flow_Y,
                       const BarrierCurve& b, double lo, double hi, double slack) {
    if (lo >= hi) throw std::invalid_argument("barrier_dominates: empty window");
    if (lo < b.u.front() || hi > b.u.back())
        throw std::invalid_argument("barrier_dominates: window outside barrier domain");
    const int m = 2001;
    for (int i = 0; i < m; ++i) {
        const double u = lo + (hi - lo) * i / double(m - 1);
        if (flow_Y(u) > barrier_eval(b, u) + slack) return false;
    }
    return true;
}

}  // namespace ricci
