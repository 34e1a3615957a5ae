#include "ricci/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <stdexcept>

#include "ricci/numerics.hpp"

namespace ricci {

namespace {
double smoothstep(double t) {
    t = std::clamp(t, 0.0, 1.0);
    return t * t * (3.0 - 2.0 * t);
}
}  // namespace

double kappa_of(const MatchedAnsatz& a) {
    const double at = std::abs(a.tau);
    if (a.kappa_model > 0.0) return a.kappa_model;
    return at + a.kappa_log_coeff * std::log(at);
}

double parabolic_ansatz(double sigma, double tau) {
    if (tau > -10.0) throw std::invalid_argument("parabolic_ansatz: tau <= -10 required");
    return std::sqrt(2.0) * (1.0 - (sigma * sigma - 2.0) / (8.0 * std::abs(tau)));
}

double intermediate_profile(double z) {
    if (std::abs(z) > 2.0)
        throw std::invalid_argument("intermediate_profile: |z| <= 2 required");
    return std::sqrt(2.0 - 0.5 * z * z);
}

namespace {

// blended slope-squared law in the tip region:
// Y(u) = w * Z0(sqrt(kappa) u) + (1-w) * (2/u^2 - 1)/(2|tau|)
struct TipModel {
    const MatchedAnsatz* a;
    const BryantProfile* bz;
    double kappa;

    double weight(double u) const {  // 1 at u <= theta, 0 at u >= theta + width
        return 1.0 - smoothstep((u - a->theta) / a->tip_blend_width);
    }
    double Y(double u) const {
        const double w = weight(u);
        const double zb = (u > 0) ? bryant_eval(*bz, std::sqrt(kappa) * u) : 1.0;
        const double yi = (u > 0) ? (2.0 / (u * u) - 1.0) / (2.0 * std::abs(a->tau)) : 1.0;
        return w * zb + (1.0 - w) * yi;
    }
};

// integrate dsigma/du = 1/sqrt(Y(u)) from u_top down to 0 (right half);
// returns ascending-sigma table from (sigma_top, u_top) to the tip.
struct TipTable {
    std::vector<double> sigma, u;
    double sigma_plus;
};

TipTable integrate_tip(const TipModel& model, double u_top, double sigma_top, int m = 4001) {
    TipTable t;
    t.sigma.reserve(m);
    t.u.reserve(m);
    const double du = u_top / double(m - 1);
    double sig = sigma_top;
    t.sigma.push_back(sig);
    t.u.push_back(u_top);
    auto f = [&](double u) { return 1.0 / std::sqrt(std::max(model.Y(u), 1e-14)); };
    for (int i = 1; i < m; ++i) {
        const double u1 = u_top - (i - 1) * du;
        const double u2 = u_top - i * du;
        const double um = 0.5 * (u1 + u2);
        // RK4 in u
        const double k1 = f(u1), k2 = f(um), k3 = f(um), k4 = f(std::max(u2, 0.0));
        sig += du * (k1 + 2 * k2 + 2 * k3 + k4) / 6.0;
        t.sigma.push_back(sig);
        t.u.push_back(std::max(u2, 0.0));
    }
    t.sigma_plus = sig;
    return t;
}

struct GlueData {
    double L, w, tau, at, kappa;
    double u_top;       // theta + blend width: start of the tip table
    double sigma_top;   // where the intermediate piece reaches u_top
    TipTable tip;
};

GlueData make_glue(const MatchedAnsatz& a, const BryantProfile& bz) {
    GlueData g;
    g.tau = a.tau;
    g.at = std::abs(a.tau);
    g.L = a.parabolic_L;
    g.w = (a.seam_overlap > 0) ? a.seam_overlap : 0.5 * a.parabolic_L;
    g.kappa = kappa_of(a);
    g.u_top = a.theta + a.tip_blend_width;
    const double z_top = std::sqrt(4.0 - 2.0 * g.u_top * g.u_top);
    g.sigma_top = z_top * std::sqrt(g.at);
    TipModel model{&a, &bz, g.kappa};
    g.tip = integrate_tip(model, g.u_top, g.sigma_top);
    return g;
}

// right-half value of the glued profile
double glue_eval(const GlueData& g, double sigma) {
    const double s = std::abs(sigma);
    const double para = std::sqrt(2.0) * (1.0 - (s * s - 2.0) / (8.0 * g.at));
    if (s <= g.L) return para;
    const double z = s / std::sqrt(g.at);
    if (s <= g.L + g.w) {
        const double inter = std::sqrt(2.0 - 0.5 * z * z);
        const double c = smoothstep((s - g.L) / g.w);
        return (1.0 - c) * para + c * inter;
    }
    if (s <= g.sigma_top) return std::sqrt(2.0 - 0.5 * z * z);
    if (s >= g.tip.sigma_plus) return 0.0;
    // invert the tip table (sigma ascending, u descending)
    const auto& ts = g.tip.sigma;
    auto it = std::upper_bound(ts.begin(), ts.end(), s);
    std::size_t i = (it == ts.begin()) ? 0 : std::size_t(it - ts.begin()) - 1;
    i = std::min(i, ts.size() - 2);
    const double t = (s - ts[i]) / (ts[i + 1] - ts[i]);
    return (1.0 - t) * g.tip.u[i] + t * g.tip.u[i + 1];
}

}  // namespace

RescaledProfile matched_profile(const MatchedAnsatz& a, const BryantProfile& bz, int n) {
    const GlueData g = make_glue(a, bz);
    n |= 1;
    RescaledProfile r;
    r.tau = a.tau;
    r.has_tips = true;
    r.sigma_plus = g.tip.sigma_plus;
    r.sigma_minus = -g.tip.sigma_plus;
    r.sigma.resize(n);
    r.u.resize(n);
    for (int i = 0; i < n; ++i) {
        const double s = r.sigma_minus +
                         (r.sigma_plus - r.sigma_minus) * i / double(n - 1);
        r.sigma[i] = s;
        r.u[i] = glue_eval(g, s);
    }
    r.u.front() = r.u.back() = 0.0;
    return r;
}

SeamReport seam_report(const MatchedAnsatz& a, const BryantProfile& bz) {
    const GlueData g = make_glue(a, bz);
    SeamReport rep;
    const double zL = g.L / std::sqrt(g.at);
    rep.parabolic_jump =
        std::abs(parabolic_ansatz(g.L, a.tau) - intermediate_profile(zL));
    rep.sigma_plus = g.tip.sigma_plus;
    rep.diameter_ratio = g.tip.sigma_plus / (2.0 * std::sqrt(g.at));
    // slope at the tip from the blended law: u_sigma = -sqrt(Y(0)) = -sqrt(Z0(0))
    TipModel model{&a, &bz, g.kappa};
    rep.tip_slope = -std::sqrt(model.Y(0.0));
    return rep;
}

namespace {

struct RegionSample {
    std::vector<double> sigma, u, us, uss, ut;
};

// analytic derivatives per region; J interpolated from the glued profile
RegionSample sample_region(Region region, const MatchedAnsatz& a,
                           const BryantProfile& bz, const GlueData& g) {
    RegionSample rs;
    const double at = g.at;
    const double rt2 = std::sqrt(2.0);
    if (region == Region::Parabolic) {
        const int m = 801;
        for (int i = 0; i < m; ++i) {
            const double s = -g.L + 2.0 * g.L * i / double(m - 1);
            rs.sigma.push_back(s);
            rs.u.push_back(parabolic_ansatz(s, a.tau));
            rs.us.push_back(-rt2 * s / (4.0 * at));
            rs.uss.push_back(-rt2 / (4.0 * at));
            // d/dtau [ -(sigma^2-2)/(8|tau|) ] at fixed sigma, tau < 0
            rs.ut.push_back(-rt2 * (s * s - 2.0) / (8.0 * a.tau * a.tau));
        }
    } else if (region == Region::Intermediate) {
        const int m = 801;
        const double z_lo = std::max(1.5 * g.L / std::sqrt(at), 0.4);
        const double z_hi = std::sqrt(4.0 - 2.0 * g.u_top * g.u_top) * 0.98;
        for (int i = 0; i < m; ++i) {
            const double z = z_lo + (z_hi - z_lo) * i / double(m - 1);
            const double ub = std::sqrt(2.0 - 0.5 * z * z);
            const double uz = -0.5 * z / ub;
            const double uzz = -0.5 / ub - 0.25 * z * z / (ub * ub * ub);
            rs.sigma.push_back(z * std::sqrt(at));
            rs.u.push_back(ub);
            rs.us.push_back(uz / std::sqrt(at));
            rs.uss.push_back(uzz / at);
            rs.ut.push_back(uz * z / (2.0 * at));
        }
    } else {
        // tip region: u in [0.05, theta]; derivatives from the blended law,
        // u_tau by centered tau-difference of the construction.  Samples
        // whose sigma falls within the tip's own swing between the two
        // staggered constructions are skipped (there the difference would
        // read zero across a moving boundary, not a time derivative).
        const int m = 401;
        TipModel model{&a, &bz, g.kappa};
        const double dtau = 1e-3 * at;
        MatchedAnsatz ap = a, am = a;
        ap.tau = a.tau + dtau;  // less negative
        am.tau = a.tau - dtau;
        const GlueData gp = make_glue(ap, bz);
        const GlueData gm = make_glue(am, bz);
        const double tip_swing =
            std::abs(gp.tip.sigma_plus - gm.tip.sigma_plus) + 1e-3;
        const double s_safe =
            std::min({g.tip.sigma_plus, gp.tip.sigma_plus, gm.tip.sigma_plus}) -
            3.0 * tip_swing;
        for (int i = 0; i < m; ++i) {
            const double u = 0.05 + (a.theta - 0.05) * i / double(m - 1);
            // sigma at this u from the tip table
            const auto& tu = g.tip.u;
            auto it = std::lower_bound(tu.rbegin(), tu.rend(), u);
            std::size_t k = tu.size() - 1 - std::size_t(it - tu.rbegin());
            k = std::min(std::max<std::size_t>(k, 1), tu.size() - 1);
            const double t = (u - tu[k - 1]) / (tu[k] - tu[k - 1]);
            const double s = (1.0 - t) * g.tip.sigma[k - 1] + t * g.tip.sigma[k];
            if (s > s_safe) continue;
            const double Y = model.Y(u);
            const double du = 1e-5;
            const double Yp = (model.Y(u + du) - model.Y(u - du)) / (2.0 * du);
            rs.sigma.push_back(s);
            rs.u.push_back(u);
            rs.us.push_back(-std::sqrt(Y));
            rs.uss.push_back(0.5 * Yp);  // d(-sqrt(Y))/dsigma = Y'/2
            rs.ut.push_back((glue_eval(gp, s) - glue_eval(gm, s)) / (2.0 * dtau));
        }
    }
    return rs;
}

}  // namespace

ResidualReport pde_residual(Region region, const std::vector<double>& tau_ladder,
                            const MatchedAnsatz& base, const BryantProfile& bz) {
    ResidualReport rep;
    rep.region = region;
    auto eval_one = [&](double tau) {
        MatchedAnsatz a = base;
        a.tau = -std::abs(tau);
        const GlueData g = make_glue(a, bz);
        RescaledProfile prof = matched_profile(a, bz, 8001);
        const auto J = compute_J_field(prof);
        CubicSpline jfit(prof.sigma, J);

        const RegionSample rs = sample_region(region, a, bz, g);
        double sup = 0.0;
        for (std::size_t i = 0; i < rs.sigma.size(); ++i) {
            const double u = rs.u[i];
            const double Jv = jfit(rs.sigma[i]);
            const double rhs = rs.uss[i] - (0.5 * rs.sigma[i] + Jv) * rs.us[i] +
                               rs.us[i] * rs.us[i] / u - 1.0 / u + 0.5 * u;
            sup = std::max(sup, std::abs(rs.ut[i] - rhs));
        }
        return sup;
    };
    // ladder points are independent; fan out
    std::vector<std::future<double>> jobs;
    jobs.reserve(tau_ladder.size());
    for (double tau : tau_ladder)
        jobs.push_back(std::async(std::launch::async, eval_one, tau));
    for (std::size_t i = 0; i < tau_ladder.size(); ++i) {
        rep.tau_ladder.push_back(-std::abs(tau_ladder[i]));
        rep.sup_norm.push_back(jobs[i].get());
    }
    if (rep.tau_ladder.size() >= 2) {
        std::vector<double> lx, ly;
        for (std::size_t i = 0; i < rep.tau_ladder.size(); ++i) {
            lx.push_back(std::log(std::abs(rep.tau_ladder[i])));
            ly.push_back(std::log(std::max(rep.sup_norm[i], 1e-300)));
        }
        rep.fitted_exponent = -fit_line(lx, ly).slope;
    }
    return rep;
}

Predictions predictions(double t) {
    if (!(t <= -std::exp(2.0)))
        throw std::invalid_argument("predictions: t <= -e^2 required");
    Predictions p;
    const double at = std::abs(t);
    p.k = std::log(at) / at;
    p.d = 4.0 * std::sqrt(at * std::log(at));
    return p;
}

TipConsistency tip_consistency(const MatchedAnsatz& a, const BryantProfile& bz,
                               double delta) {
    TipConsistency tc;
    const double at = std::abs(a.tau);
    const GlueData g = make_glue(a, bz);

    // (1) slope law on the parabolic window sigma in [1, L]
    double gap = 0.0;
    for (int i = 0; i < 401; ++i) {
        const double s = 1.0 + (a.parabolic_L - 1.0) * i / 400.0;
        const double u = parabolic_ansatz(s, a.tau);
        const double Ya = (std::sqrt(2.0) * s / (4.0 * at)) * (std::sqrt(2.0) * s / (4.0 * at));
        const double Yl = (2.0 / (u * u) - 1.0) / (2.0 * at) + 1.0 / (4.0 * at * at);
        gap = std::max(gap, std::abs(Ya - Yl) / std::abs(Yl));
    }
    tc.lemma_gap_rel = gap;

    // (2) upper bound on theta <= u <= u(M_delta, tau), M_delta = sqrt(2 + 4/delta)
    const double M = std::sqrt(2.0 + 4.0 / delta);
    const double u_hi = parabolic_ansatz(M, a.tau);
    RescaledProfile prof = matched_profile(a, bz, 8001);
    const auto us = [&] {
        const auto d1 = index_deriv1(prof.u);
        const double h = prof.sigma[1] - prof.sigma[0];
        std::vector<double> out(prof.u.size());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = d1[i] / h;
        return out;
    }();
    tc.upper_bound_margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = prof.u.size() / 2; i + 1 < prof.u.size(); ++i) {
        const double u = prof.u[i];
        if (u < a.theta || u > u_hi) continue;
        const double bound = (1.0 + delta) / (2.0 * at) * (2.0 / (u * u) - 1.0);
        tc.upper_bound_margin = std::min(tc.upper_bound_margin, bound - us[i] * us[i]);
    }
    tc.upper_bound_ok = tc.upper_bound_margin > 0.0;

    // (3) J at the tip against -sqrt(kappa)
    const auto J = compute_J_field(prof);
    tc.J_over_sqrt_kappa = J.back() / std::sqrt(g.kappa);
    tc.sigma_plus_ratio = prof.sigma_plus / (2.0 * std::sqrt(at));
    tc.tip_slope = seam_report(a, bz).tip_slope;
    return tc;
}

}  // namespace ricci
