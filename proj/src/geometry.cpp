#include "ricci/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ricci/numerics.hpp"
#include "ricci/pole_series.hpp"

namespace ricci {

namespace {
constexpr int kPoleCollar = 6;   // nodes per pole evaluated from the series fit
constexpr int kPoleFitLen = 13;  // nodes entering the fit
}  // namespace

void validate(const ProfileGrid& p) {
    const std::size_t n = p.s.size();
    if (n != p.psi.size()) throw std::invalid_argument("profile: size mismatch");
    if (n < 7) throw std::invalid_argument("profile: fewer than 5 interior points");
    if (!all_finite(p.s) || !all_finite(p.psi))
        throw std::invalid_argument("profile: non-finite values");
    for (std::size_t i = 1; i < n; ++i)
        if (!(p.s[i] > p.s[i - 1]))
            throw std::invalid_argument("profile: s not strictly increasing");
    if (p.psi.front() != 0.0 || p.psi.back() != 0.0)
        throw std::invalid_argument("profile: psi must vanish at the poles");
    for (std::size_t i = 1; i + 1 < n; ++i)
        if (!(p.psi[i] > 0.0))
            throw std::invalid_argument("profile: interior psi must be positive");
}

std::vector<double> profile_slope(const ProfileGrid& p) {
    const auto ds = index_deriv1(p.s);
    const auto dpsi = index_deriv1(p.psi);
    std::vector<double> out(p.s.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = dpsi[i] / ds[i];
    return out;
}

CurvatureFields curvatures(const ProfileGrid& p) {
    validate(p);
    const std::size_t n = p.s.size();
    const auto phi = index_deriv1(p.s);  // ds/dindex
    const auto psx = index_deriv1(p.psi);

    std::vector<double> psi_s(n);
    for (std::size_t i = 0; i < n; ++i) psi_s[i] = psx[i] / phi[i];
    const auto psix2 = index_deriv1(psi_s);
    std::vector<double> psi_ss(n);
    for (std::size_t i = 0; i < n; ++i) psi_ss[i] = psix2[i] / phi[i];

    CurvatureFields c;
    c.K0.assign(n, 0.0);
    c.K1.assign(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        c.K0[i] = -psi_ss[i] / p.psi[i];
        c.K1[i] = (1.0 - psi_s[i] * psi_s[i]) / (p.psi[i] * p.psi[i]);
    }

    const int m = std::min<int>(kPoleFitLen, int(n));
    const int collar = std::min<int>(kPoleCollar, int(n) / 2);
    {  // left pole
        std::vector<double> eta(m), val(m);
        for (int i = 0; i < m; ++i) {
            eta[i] = p.s[i] - p.s.front();
            val[i] = p.psi[i];
        }
        const OddSeriesFit f = fit_odd_series(eta, val);
        for (int i = 0; i < collar; ++i)
            odd_series_curvatures(f, p.s[i] - p.s.front(), c.K0[i], c.K1[i]);
    }
    {  // right pole
        std::vector<double> eta(m), val(m);
        for (int i = 0; i < m; ++i) {
            eta[i] = p.s.back() - p.s[n - 1 - i];
            val[i] = p.psi[n - 1 - i];
        }
        const OddSeriesFit f = fit_odd_series(eta, val);
        for (int i = 0; i < collar; ++i)
            odd_series_curvatures(f, p.s.back() - p.s[n - 1 - i], c.K0[n - 1 - i],
                                  c.K1[n - 1 - i]);
    }

    c.R.resize(n);
    c.Q.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        c.R[i] = 4.0 * c.K0[i] + 2.0 * c.K1[i];
        c.Q[i] = (c.K1[i] != 0.0) ? c.K0[i] / c.K1[i]
                                  : std::numeric_limits<double>::quiet_NaN();
    }
    if (!all_finite(c.K0) || !all_finite(c.K1))
        throw std::runtime_error("curvatures: non-finite result");
    return c;
}

ClosingResidual closing_residual(const ProfileGrid& p) {
    validate(p);
    const auto phi = index_deriv1(p.s);
    const auto psx = index_deriv1(p.psi);
    const auto s2 = index_deriv2(p.s);
    const auto p2 = index_deriv2(p.psi);

    const std::size_t n = p.s.size();
    ClosingResidual r;
    const double slope_lo = psx.front() / phi.front();
    const double slope_hi = psx.back() / phi.back();
    r.r_minus = std::abs(slope_lo - 1.0);
    r.r_plus = std::abs(slope_hi + 1.0);
    // psi_ss = (psi_xx - psi_s * s_xx) / phi^2
    r.psi_ss_minus = std::abs((p2.front() - slope_lo * s2.front()) / (phi.front() * phi.front()));
    r.psi_ss_plus = std::abs((p2[n - 1] - slope_hi * s2[n - 1]) / (phi[n - 1] * phi[n - 1]));
    return r;
}

ProfileGrid make_sphere(double r, int n) {
    if (r <= 0 || n < 7) throw std::invalid_argument("make_sphere: bad params");
    ProfileGrid p;
    p.s.resize(n);
    p.psi.resize(n);
    const double L = M_PI * r;
    for (int i = 0; i < n; ++i) {
        p.s[i] = L * i / double(n - 1);
        p.psi[i] = r * std::sin(p.s[i] / r);
    }
    p.psi.front() = p.psi.back() = 0.0;
    return p;
}

ProfileGrid make_capsule(double r, double barrel, int n) {
    if (r <= 0 || barrel < 0 || n < 7) throw std::invalid_argument("make_capsule: bad params");
    ProfileGrid p;
    p.s.resize(n);
    p.psi.resize(n);
    const double cap = 0.5 * M_PI * r;
    const double L = 2 * cap + barrel;
    for (int i = 0; i < n; ++i) {
        const double s = L * i / double(n - 1);
        p.s[i] = s;
        if (s < cap)
            p.psi[i] = r * std::sin(s / r);
        else if (s <= cap + barrel)
            p.psi[i] = r;
        else
            p.psi[i] = r * std::sin((L - s) / r);
    }
    p.psi.front() = p.psi.back() = 0.0;
    return p;
}

ProfileGrid make_dumbbell(double neck, double bulb, int n) {
    if (!(neck > 0) || !(bulb > neck) || n < 7)
        throw std::invalid_argument("make_dumbbell: need 0 < neck < bulb");
    // neck/bulb = 3*sqrt(3 beta)(1-beta)/2, monotone decreasing on (1/3, 1)
    const double target = neck / bulb;
    auto ratio = [](double beta) {
        return 1.5 * std::sqrt(3.0 * beta) * (1.0 - beta);
    };
    if (target >= ratio(1.0 / 3.0 + 1e-12))
        throw std::invalid_argument("make_dumbbell: neck too close to bulb");
    double lo = 1.0 / 3.0 + 1e-12, hi = 1.0 - 1e-12;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (ratio(mid) > target ? lo : hi) = mid;
    }
    const double beta = 0.5 * (lo + hi);
    const double A = neck / (1.0 - beta);

    ProfileGrid p;
    p.s.resize(n);
    p.psi.resize(n);
    const double L = A * M_PI;
    for (int i = 0; i < n; ++i) {
        p.s[i] = L * i / double(n - 1);
        const double x = p.s[i] / A;
        const double sx = std::sin(x);
        p.psi[i] = A * (sx - beta * sx * sx * sx);
    }
    p.psi.front() = p.psi.back() = 0.0;
    return p;
}

ProfileGrid fixture(const std::string& kind, const std::map<std::string, double>& params) {
    auto get = [&](const std::string& key, double dflt) {
        auto it = params.find(key);
        return it == params.end() ? dflt : it->second;
    };
    const int n = int(get("n", 201));
    if (kind == "sphere") return make_sphere(get("r", 1.0), n);
    if (kind == "capsule") return make_capsule(get("r", 1.0), get("barrel", 2.0), n);
    if (kind == "dumbbell") return make_dumbbell(get("neck", 1.1), get("bulb", 1.15), n);
    throw std::invalid_argument("fixture: unknown kind '" + kind + "'");
}

}  // namespace ricci
