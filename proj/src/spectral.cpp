#include "ricci/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ricci/numerics.hpp"

namespace ricci {

// ---------------------------------------------------------------- quadrature

GaussHermite::GaussHermite(int n) {
    if (n < 2 || n > 300) throw std::invalid_argument("GaussHermite: bad node count");
    x_.assign(n, 0.0);
    w_.assign(n, 0.0);
    const double pim4 = 0.7511255444649425;  // pi^(-1/4)
    const int m = (n + 1) / 2;
    double z = 0.0;
    for (int i = 0; i < m; ++i) {
        // initial guesses, then Newton on the orthonormal recurrence
        if (i == 0)
            z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
        else if (i == 1)
            z -= 1.14 * std::pow(double(n), 0.426) / z;
        else if (i == 2)
            z = 1.86 * z - 0.86 * x_[0];
        else if (i == 3)
            z = 1.91 * z - 0.91 * x_[1];
        else
            z = 2.0 * z - x_[i - 2];
        double pp = 0.0;
        for (int it = 0; it < 200; ++it) {
            double p1 = pim4, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(double(j) / (j + 1)) * p3;
            }
            pp = std::sqrt(2.0 * n) * p2;
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) <= 1e-15) break;
        }
        x_[i] = z;
        x_[n - 1 - i] = -z;
        w_[i] = 2.0 / (pp * pp);
        w_[n - 1 - i] = w_[i];
    }
    std::sort(x_.begin(), x_.end());
}

double weighted_inner(const std::function<double(double)>& f,
                      const std::function<double(double)>& g,
                      const GaussHermite& rule) {
    double s = 0.0;
    for (int i = 0; i < rule.size(); ++i) {
        const double sig = 2.0 * rule.nodes()[i];
        s += rule.weights()[i] * f(sig) * g(sig);
    }
    return 2.0 * s;  // dsigma = 2 dx
}

double weighted_inner_sampled(std::span<const double> sigma,
                              std::span<const double> f,
                              std::span<const double> g,
                              bool require_coverage) {
    if (sigma.size() != f.size() || sigma.size() != g.size() || sigma.size() < 5)
        throw std::invalid_argument("weighted_inner_sampled: bad sizes");
    if (require_coverage && (sigma.front() > -12.0 || sigma.back() < 12.0))
        throw std::invalid_argument(
            "weighted_inner_sampled: grid too narrow, weight mass truncation > 1e-12");
    const double h = sigma[1] - sigma[0];
    const double h_last = sigma[sigma.size() - 1] - sigma[sigma.size() - 2];
    if (std::abs(h_last - h) > 1e-9 * std::abs(h))
        throw std::invalid_argument("weighted_inner_sampled: grid must be uniform");
    std::vector<double> integrand(sigma.size());
    for (std::size_t i = 0; i < sigma.size(); ++i)
        integrand[i] = f[i] * g[i] * std::exp(-sigma[i] * sigma[i] / 4.0);
    return simpson_uniform(integrand, h);
}

// --------------------------------------------------------------- polynomials

double Poly::operator()(double x) const {
    double acc = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
    return acc;
}

Poly Poly::deriv() const {
    Poly d;
    if (c.size() <= 1) {
        d.c = {0.0};
        return d;
    }
    d.c.resize(c.size() - 1);
    for (std::size_t i = 1; i < c.size(); ++i) d.c[i - 1] = c[i] * double(i);
    return d;
}

Poly Poly::mul(const Poly& a, const Poly& b) {
    Poly out;
    out.c.assign(a.c.size() + b.c.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.c.size(); ++i)
        for (std::size_t j = 0; j < b.c.size(); ++j) out.c[i + j] += a.c[i] * b.c[j];
    return out;
}

Poly Poly::add(const Poly& a, const Poly& b) {
    Poly out;
    out.c.assign(std::max(a.c.size(), b.c.size()), 0.0);
    for (std::size_t i = 0; i < a.c.size(); ++i) out.c[i] += a.c[i];
    for (std::size_t i = 0; i < b.c.size(); ++i) out.c[i] += b.c[i];
    return out;
}

Poly Poly::scale(const Poly& a, double k) {
    Poly out = a;
    for (double& v : out.c) v *= k;
    return out;
}

// ------------------------------------------------------------------- basis

namespace {
// p_{n+1} = sigma p_n - 2n p_{n-1}; p_0 = 1, p_1 = sigma.  Integer-exact.
std::vector<std::vector<long long>> hermite_rows(int n_max) {
    std::vector<std::vector<long long>> rows(n_max + 1);
    rows[0] = {1};
    if (n_max >= 1) rows[1] = {0, 1};
    for (int n = 1; n < n_max; ++n) {
        std::vector<long long> next(n + 2, 0);
        for (std::size_t i = 0; i < rows[n].size(); ++i) next[i + 1] += rows[n][i];
        for (std::size_t i = 0; i < rows[n - 1].size(); ++i)
            next[i] -= 2LL * n * rows[n - 1][i];
        rows[n + 1] = std::move(next);
    }
    return rows;
}
}  // namespace

HermiteBasis::HermiteBasis(int max_even_index) : max_even_(max_even_index) {
    if (max_even_index < 2 || max_even_index % 2 != 0 || max_even_index > 40)
        throw std::invalid_argument("HermiteBasis: max_even_index must be even, in [2,40]");
    const auto rows = hermite_rows(max_even_index);
    even_.resize(max_even_index / 2 + 1);
    for (int k = 0; k <= max_even_index / 2; ++k) {
        even_[k].c.assign(rows[2 * k].begin(), rows[2 * k].end());
    }
}

const Poly& HermiteBasis::h(int even_index) const {
    if (even_index < 0 || even_index % 2 != 0 || even_index > max_even_)
        throw std::out_of_range("HermiteBasis::h: bad index");
    return even_[even_index / 2];
}

std::vector<long long> HermiteBasis::h_exact(int even_index) const {
    const auto rows = hermite_rows(even_index);
    return rows[even_index];
}

double HermiteBasis::norm_sq(int even_index) {
    // 2 sqrt(pi) * 4^k * (2k)!
    const int k = even_index / 2;
    double out = 2.0 * std::sqrt(M_PI);
    for (int j = 0; j < k; ++j) out *= 4.0;
    for (int j = 2; j <= 2 * k; ++j) out *= double(j);
    return out;
}

Poly apply_L(const Poly& p) {
    const Poly d1 = p.deriv();
    const Poly d2 = d1.deriv();
    // -(sigma/2) p'
    Poly drift;
    drift.c.assign(d1.c.size() + 1, 0.0);
    for (std::size_t i = 0; i < d1.c.size(); ++i) drift.c[i + 1] = -0.5 * d1.c[i];
    return Poly::add(Poly::add(d2, drift), p);
}

std::vector<double> apply_L_sampled(std::span<const double> sigma,
                                    std::span<const double> v) {
    if (sigma.size() != v.size() || sigma.size() < 5)
        throw std::invalid_argument("apply_L_sampled: bad sizes");
    const double h = sigma[1] - sigma[0];
    const auto d1 = index_deriv1(v);
    const auto d2 = index_deriv2(v);
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        out[i] = d2[i] / (h * h) - 0.5 * sigma[i] * d1[i] / h + v[i];
    return out;
}

HermiteIdentityReport hermite_identities(int quad_nodes) {
    HermiteIdentityReport rep;
    HermiteBasis basis(4);
    const auto h0 = basis.h_exact(0);
    const auto h2 = basis.h_exact(2);
    const auto h4 = basis.h_exact(4);

    auto mul_ll = [](const std::vector<long long>& a, const std::vector<long long>& b) {
        std::vector<long long> out(a.size() + b.size() - 1, 0);
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
        return out;
    };
    auto axpy_ll = [](std::vector<long long>& acc, long long k,
                      const std::vector<long long>& v) {
        if (acc.size() < v.size()) acc.resize(v.size(), 0);
        for (std::size_t i = 0; i < v.size(); ++i) acc[i] -= k * v[i];
    };
    auto is_zero = [](const std::vector<long long>& v) {
        return std::all_of(v.begin(), v.end(), [](long long x) { return x == 0; });
    };

    {  // h2^2 - (h4 + 8 h2 + 8 h0) == 0
        auto lhs = mul_ll(h2, h2);
        axpy_ll(lhs, 1, h4);
        axpy_ll(lhs, 8, h2);
        axpy_ll(lhs, 8, h0);
        rep.sq_identity_exact = is_zero(lhs);
    }
    {  // (h2')^2 - (4 h2 + 8 h0) == 0
        std::vector<long long> d2{0, 2};  // d/dsigma (sigma^2 - 2) = 2 sigma
        auto lhs = mul_ll(d2, d2);
        axpy_ll(lhs, 4, h2);
        axpy_ll(lhs, 8, h0);
        rep.deriv_identity_exact = is_zero(lhs);
    }

    const GaussHermite rule(quad_nodes);
    const Poly& p2 = basis.h(2);
    const Poly p2d = p2.deriv();
    auto integrand = [&](double s) {
        const double v = p2(s);
        const double d = p2d(s);
        return 0.5 * v * v * v + d * d * v;
    };
    rep.cubic_integral = weighted_inner(integrand, [](double) { return 1.0; }, rule);
    rep.cubic_expected = 8.0 * HermiteBasis::norm_sq(2);
    rep.cubic_rel_err = std::abs(rep.cubic_integral - rep.cubic_expected) /
                        std::abs(rep.cubic_expected);
    return rep;
}

// ------------------------------------------------------------------- cutoff

double Cutoff::bump(double t) {
    const double a = std::abs(t);
    if (a <= 0.5) return 1.0;
    if (a >= 1.0) return 0.0;
    const double r = 2.0 * a - 1.0;  // in (0,1)
    const double A = std::exp(-1.0 / (1.0 - r));
    const double B = std::exp(-1.0 / r);
    return A / (A + B);
}

namespace {
// S(r) = m(1-r)/(m(1-r)+m(r)) with m(x) = exp(-1/x); derivatives in r.
void bump_core(double r, double& S, double& S1, double& S2) {
    const double x = 1.0 - r;
    const double A = std::exp(-1.0 / x), B = std::exp(-1.0 / r);
    const double A1 = -A / (x * x);            // dA/dr
    const double B1 = B / (r * r);
    const double A2 = A * (1.0 / (x * x * x * x) - 2.0 / (x * x * x));
    const double B2 = B * (1.0 / (r * r * r * r) - 2.0 / (r * r * r));
    const double T = A + B;
    S = A / T;
    S1 = (A1 * B - A * B1) / (T * T);
    S2 = (A2 * B - A * B2) / (T * T) - 2.0 * (A1 * B - A * B1) * (A1 + B1) / (T * T * T);
}
}  // namespace

double Cutoff::bump1(double t) {
    const double a = std::abs(t);
    if (a <= 0.5 || a >= 1.0) return 0.0;
    double S, S1, S2;
    bump_core(2.0 * a - 1.0, S, S1, S2);
    return 2.0 * S1 * (t >= 0 ? 1.0 : -1.0);
}

double Cutoff::bump2(double t) {
    const double a = std::abs(t);
    if (a <= 0.5 || a >= 1.0) return 0.0;
    double S, S1, S2;
    bump_core(2.0 * a - 1.0, S, S1, S2);
    return 4.0 * S2;
}

Cutoff::Cutoff(double delta, double theta, double delta_prime)
    : delta_(delta), theta_(theta), delta_prime_(delta_prime) {
    if (!(delta > 0.0 && delta <= 1.0)) throw std::invalid_argument("Cutoff: delta in (0,1]");
    if (!(theta > 0.0 && theta < 1.0)) throw std::invalid_argument("Cutoff: theta in (0,1)");
    scale_ = std::pow(delta_, theta_);
}

double Cutoff::chi(double sigma) const { return bump(scale_ * sigma); }
double Cutoff::chi_sigma(double sigma) const { return scale_ * bump1(scale_ * sigma); }
double Cutoff::chi_sigmasigma(double sigma) const {
    return scale_ * scale_ * bump2(scale_ * sigma);
}
double Cutoff::chi_tau(double sigma) const {
    // d/dtau chihat(delta^theta sigma) = chihat' * sigma * theta delta^(theta-1) delta'
    return bump1(scale_ * sigma) * sigma * theta_ * std::pow(delta_, theta_ - 1.0) *
           delta_prime_;
}

std::vector<double> truncate(std::span<const double> sigma,
                             std::span<const double> v, const Cutoff& cut) {
    if (sigma.size() != v.size()) throw std::invalid_argument("truncate: size mismatch");
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] * cut.chi(sigma[i]);
    return out;
}

// --------------------------------------------------------------- projections

Projection project(const std::function<double(double)>& vbar, const GaussHermite& rule) {
    static const HermiteBasis basis(2);
    const Poly& h2 = basis.h(2);
    auto one = [](double) { return 1.0; };
    Projection pr;
    pr.alpha_raw = weighted_inner(vbar, [&](double s) { return h2(s); }, rule);
    pr.plus_raw = weighted_inner(vbar, one, rule);
    pr.alpha = pr.alpha_raw / HermiteBasis::norm_sq(2);
    pr.plus = pr.plus_raw / HermiteBasis::norm_sq(0);
    auto rem = [&](double s) { return vbar(s) - pr.plus - pr.alpha * h2(s); };
    pr.minus_norm = std::sqrt(std::max(0.0, weighted_inner(rem, rem, rule)));
    pr.norm = std::sqrt(std::max(0.0, weighted_inner(vbar, vbar, rule)));
    return pr;
}

Projection project_sampled(std::span<const double> sigma, std::span<const double> vbar) {
    static const HermiteBasis basis(2);
    const Poly& h2 = basis.h(2);
    std::vector<double> h2v(sigma.size()), ones(sigma.size(), 1.0);
    for (std::size_t i = 0; i < sigma.size(); ++i) h2v[i] = h2(sigma[i]);
    Projection pr;
    pr.alpha_raw = weighted_inner_sampled(sigma, vbar, h2v, false);
    pr.plus_raw = weighted_inner_sampled(sigma, vbar, ones, false);
    pr.alpha = pr.alpha_raw / HermiteBasis::norm_sq(2);
    pr.plus = pr.plus_raw / HermiteBasis::norm_sq(0);
    std::vector<double> rem(sigma.size());
    for (std::size_t i = 0; i < sigma.size(); ++i)
        rem[i] = vbar[i] - pr.plus - pr.alpha * h2v[i];
    pr.minus_norm =
        std::sqrt(std::max(0.0, weighted_inner_sampled(sigma, rem, rem, false)));
    pr.norm = std::sqrt(std::max(0.0, weighted_inner_sampled(sigma, vbar, vbar, false)));
    return pr;
}

// --------------------------------------------------------- error functionals

ErrorFunctionals error_functionals(std::span<const double> sigma,
                                   std::span<const double> v,
                                   std::span<const double> vbar,
                                   const Cutoff& cut) {
    const std::size_t n = sigma.size();
    if (v.size() != n || vbar.size() != n || n < 7)
        throw std::invalid_argument("error_functionals: bad sizes");
    for (double x : v)
        if (x <= -1.0) throw std::domain_error("error_functionals: 1+v became nonpositive");

    const double h = sigma[1] - sigma[0];
    const auto dvi = index_deriv1(v);
    const auto dvbi = index_deriv1(vbar);
    std::vector<double> vs(n), vbs(n);
    for (std::size_t i = 0; i < n; ++i) {
        vs[i] = dvi[i] / h;
        vbs[i] = dvbi[i] / h;
    }

    // cumulative integral of v_s^2/(1+v)^2 from sigma = 0
    std::vector<double> q(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = 1.0 + v[i];
        q[i] = vs[i] * vs[i] / (d * d);
    }
    const auto cumq = cumulative_trapezoid(sigma, q);
    // index nearest sigma = 0
    std::size_t i0 = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (std::abs(sigma[i]) < std::abs(sigma[i0])) i0 = i;
    const double q0 = cumq[i0];

    ErrorFunctionals ef;
    ef.E.resize(n);
    ef.E_chi.resize(n);
    ef.E_nl.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double s = sigma[i];
        const double d = 1.0 + v[i];
        const double chi = cut.chi(s);
        const double chs = cut.chi_sigma(s);
        const double chss = cut.chi_sigmasigma(s);
        const double cht = cut.chi_tau(s);
        const double omc = 1.0 - chi;

        ef.E[i] = vbar[i] * vbs[i] * vbs[i] / d + vbar[i] * vbar[i] * vbar[i] / (2.0 * d);

        ef.E_chi[i] = -2.0 * vs[i] * chs - v[i] * chss + 0.5 * s * v[i] * chs -
                      omc * vs[i] * vbs[i] + chs * v[i] * vbs[i] + chs * vs[i] * vs[i] -
                      0.5 * v[i] * vbar[i] * omc + vbar[i] * omc * omc * vs[i] * vs[i] / d +
                      vbar[i] * chs * chs * v[i] * v[i] / d +
                      vbar[i] * v[i] * v[i] * omc * omc / (2.0 * d) +
                      vbar[i] * vbar[i] * v[i] * omc / d +
                      2.0 * vbar[i] / d *
                          (vbs[i] * vs[i] * omc - v[i] * vbs[i] * chs -
                           chs * omc * v[i] * vs[i]) +
                      v[i] * cht;

        ef.E_nl[i] = -2.0 * chi * vs[i] * (cumq[i] - q0);
    }

    static const HermiteBasis basis(2);
    const Poly& h2 = basis.h(2);
    std::vector<double> h2v(n), qf(n);
    for (std::size_t i = 0; i < n; ++i) {
        h2v[i] = h2(sigma[i]);
        qf[i] = 0.5 * vbar[i] * vbar[i] + vbs[i] * vbs[i];
    }
    std::vector<double> ones(n, 1.0);
    ef.pair_E = weighted_inner_sampled(sigma, ef.E, h2v, false);
    ef.pair_chi = weighted_inner_sampled(sigma, ef.E_chi, h2v, false);
    ef.pair_nl = weighted_inner_sampled(sigma, ef.E_nl, h2v, false);
    ef.quad_form = weighted_inner_sampled(sigma, qf, h2v, false);
    return ef;
}

}  // namespace ricci
