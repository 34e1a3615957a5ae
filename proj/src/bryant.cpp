#include "ricci/bryant.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ricci/numerics.hpp"

namespace ricci {

namespace {
constexpr double kLaunch = 1e-3;

void bryant_rhs(double rho, std::span<const double> y, std::span<double> dy) {
    const double Z = y[0], W = y[1];
    dy[0] = W;
    dy[1] = (0.5 * W * W - (1.0 - Z) * W / rho - 2.0 * (1.0 - Z) * Z / (rho * rho)) / Z;
}
}  // namespace

double series_origin(double f) {
    const double f2 = f * f;
    return 1.0 + kBryantB0 * f2 + 0.4 * kBryantB0 * kBryantB0 * f2 * f2;
}

double series_origin_deriv(double f) {
    const double f2 = f * f;
    return 2.0 * kBryantB0 * f + 1.6 * kBryantB0 * kBryantB0 * f2 * f;
}

BryantProfile solve_bryant(double rho_max, double tol, double max_step) {
    if (rho_max < 10.0) throw std::invalid_argument("solve_bryant: rho_max >= 10 required");
    if (!(tol > 1e-14 && tol < 1e-4))
        throw std::invalid_argument("solve_bryant: tol must lie in (1e-14, 1e-4)");

    BryantProfile b;
    Rk45Options opt;
    opt.rtol = tol;
    opt.atol = tol * 1e-2;
    opt.max_step = max_step;

    auto observe = [&](double x, std::span<const double> y) {
        b.rho.push_back(x);
        b.Z.push_back(y[0]);
        b.Zp.push_back(y[1]);
        if (!(y[0] > 0.0 && y[0] <= 1.0 + 1e-12))
            throw std::runtime_error("solve_bryant: profile blow-up, Z left (0,1] at rho=" +
                                     std::to_string(x));
        return true;
    };

    const auto st = integrate_rk45(bryant_rhs, {series_origin(kLaunch), series_origin_deriv(kLaunch)},
                                   kLaunch, rho_max, opt, observe);
    if (!st.ok)
        throw std::runtime_error("solve_bryant: " + st.message + " at rho=" +
                                 std::to_string(st.x_reached));
    return b;
}

namespace {
void check(const BryantProfile& b) {
    if (b.rho.size() < 4) throw std::invalid_argument("bryant profile too short");
}

std::size_t segment_of(const std::vector<double>& x, double v) {
    auto it = std::upper_bound(x.begin(), x.end(), v);
    std::size_t i = (it == x.begin()) ? 0 : std::size_t(it - x.begin()) - 1;
    return std::min(i, x.size() - 2);
}
}  // namespace

double bryant_eval(const BryantProfile& b, double rho) {
    check(b);
    if (rho <= b.rho.front()) return series_origin(rho);
    if (rho > b.rho.back()) throw std::out_of_range("bryant_eval: rho beyond grid");
    const std::size_t i = segment_of(b.rho, rho);
    const double h = b.rho[i + 1] - b.rho[i];
    const double t = (rho - b.rho[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * b.Z[i] + (t3 - 2 * t2 + t) * h * b.Zp[i] +
           (-2 * t3 + 3 * t2) * b.Z[i + 1] + (t3 - t2) * h * b.Zp[i + 1];
}

double bryant_eval_deriv(const BryantProfile& b, double rho) {
    check(b);
    if (rho <= b.rho.front()) return series_origin_deriv(rho);
    if (rho > b.rho.back()) throw std::out_of_range("bryant_eval_deriv: rho beyond grid");
    const std::size_t i = segment_of(b.rho, rho);
    const double h = b.rho[i + 1] - b.rho[i];
    const double t = (rho - b.rho[i]) / h;
    const double t2 = t * t;
    return (6 * t2 - 6 * t) * b.Z[i] / h + (3 * t2 - 4 * t + 1) * b.Zp[i] +
           (-6 * t2 + 6 * t) * b.Z[i + 1] / h + (3 * t2 - 2 * t) * b.Zp[i + 1];
}

C0Result compute_C0(const BryantProfile& b) {
    check(b);
    if (b.rho.back() < 30.0)
        throw std::invalid_argument("compute_C0: profile must reach rho >= 30");

    const double lo = b.rho.front(), hi = b.rho.back();
    CubicHermite hz(b.rho, b.Z, b.Zp);

    // log-uniform resampling; the integrand decays like rho^-3
    const int m = 8001;
    std::vector<double> g(m);
    const double la = std::log(lo), lb = std::log(hi);
    const double dl = (lb - la) / (m - 1);
    for (int i = 0; i < m; ++i) {
        const double r = std::exp(la + i * dl);
        const double Z = hz(r);
        const double Zp = hz.deriv(r);
        // d rho = rho d(log rho): fold the Jacobian into the integrand
        g[i] = Zp / (r * std::sqrt(Z)) * r;
    }
    C0Result out;
    out.quad_part = simpson_uniform(g, dl);
    out.tail_lo = 2.0 * kBryantB0 * lo;              // integrand -> 2 b0 near 0
    out.tail_hi = -1.0 / (hi * hi) - 1.5 / (hi * hi * hi * hi);  // -2 r^-3 - 6 r^-5 tail
    out.C0 = out.quad_part + out.tail_lo + out.tail_hi;
    out.tail_warning =
        std::abs(out.tail_lo) + std::abs(out.tail_hi) > 0.1 * std::abs(out.C0);

    const double zr2 = b.Z.back() * hi * hi;  // c0 + 2 c0^2 / rho^2 + ...
    out.c0_measured = zr2 - 2.0 * zr2 * zr2 / (hi * hi);
    return out;
}

DivergenceReport divergence_residual(const BryantProfile& b) {
    check(b);
    const std::size_t n = b.rho.size();
    std::vector<double> psi(n), flux(n);
    for (std::size_t i = 0; i < n; ++i) {
        psi[i] = std::sqrt(b.Z[i]);
        const double psip = b.Zp[i] / (2.0 * psi[i]);
        flux[i] = psip + (psi[i] - 1.0 / psi[i]) / b.rho[i];
    }

    DivergenceReport rep;
    rep.rho.reserve(n - 2);
    rep.residual.reserve(n - 2);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double hl = b.rho[i] - b.rho[i - 1];
        const double hr = b.rho[i + 1] - b.rho[i];
        // nonuniform centered first derivative of the flux
        const double d = (flux[i + 1] * hl * hl - flux[i - 1] * hr * hr +
                          flux[i] * (hr * hr - hl * hl)) /
                         (hl * hr * (hl + hr));
        const double lhs = b.Zp[i] / (b.rho[i] * psi[i]);  // (2/rho) Psi_rho
        rep.rho.push_back(b.rho[i]);
        rep.residual.push_back(lhs - d);
    }
    rep.sup_interior = 0.0;
    for (double r : rep.residual) rep.sup_interior = std::max(rep.sup_interior, std::abs(r));
    rep.boundary_lo = flux.front();
    rep.boundary_hi = flux.back();
    rep.rho_lo = b.rho.front();
    rep.rho_hi = b.rho.back();
    return rep;
}

}  // namespace ricci
