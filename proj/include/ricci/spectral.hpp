#pragma once

#include <functional>
#include <span>
#include <vector>

// Hermite toolkit for the linearized cylinder operator
//   L[v] = v_ss - (s/2) v_s + v
// on L^2(R, exp(-s^2/4) ds).  Restricted to even functions the eigenpairs are
// h_{2k} with eigenvalue 1-k, where h_0 = 1, h_2 = s^2 - 2, ...
namespace ricci {

// Gauss-Hermite rule for the weight exp(-x^2): nodes/weights by Newton
// iteration on the orthonormal recurrence.
class GaussHermite {
public:
    explicit GaussHermite(int n);
    const std::vector<double>& nodes() const { return x_; }
    const std::vector<double>& weights() const { return w_; }
    int size() const { return int(x_.size()); }

private:
    std::vector<double> x_, w_;
};

// Dense polynomial in the sigma variable, coefficient order c[i]*sigma^i.
struct Poly {
    std::vector<double> c;

    double operator()(double x) const;
    Poly deriv() const;
    int degree() const { return int(c.size()) - 1; }

    static Poly mul(const Poly& a, const Poly& b);
    static Poly add(const Poly& a, const Poly& b);
    static Poly scale(const Poly& a, double k);
};

class HermiteBasis {
public:
    // Builds h_0 .. h_{max_even_index} (even indices only are exposed).
    explicit HermiteBasis(int max_even_index = 12);
    const Poly& h(int even_index) const;
    // Exact integer coefficients (the recurrence preserves integrality).
    std::vector<long long> h_exact(int even_index) const;
    // ||h_{2k}||^2 = 2 sqrt(pi) 4^k (2k)!
    static double norm_sq(int even_index);
    int max_even_index() const { return max_even_; }

private:
    int max_even_;
    std::vector<Poly> even_;  // even_[k] = h_{2k}
};

// Weighted inner product <f,g> = int f g exp(-sigma^2/4) dsigma via the rule
// (substitution sigma = 2x).  Exact for polynomial integrands of degree
// <= 2*nodes - 1.
double weighted_inner(const std::function<double(double)>& f,
                      const std::function<double(double)>& g,
                      const GaussHermite& rule);

// Same product for functions sampled on a uniform grid: composite Simpson
// against the weight.  The grid must either reach |sigma| >= 12 or the caller
// guarantees the integrand vanishes outside it (truncated functions).
double weighted_inner_sampled(std::span<const double> sigma,
                              std::span<const double> f,
                              std::span<const double> g,
                              bool require_coverage = true);

Poly apply_L(const Poly& p);
// Sampled L via 4th-order first and 2nd-order second index-space stencils.
std::vector<double> apply_L_sampled(std::span<const double> sigma,
                                    std::span<const double> v);

struct HermiteIdentityReport {
    bool sq_identity_exact = false;     // h2^2 == h4 + 8 h2 + 8 h0
    bool deriv_identity_exact = false;  // (h2')^2 == 4 h2 + 8 h0
    double cubic_integral = 0.0;        // int (h2^3/2 + (h2')^2 h2) dmu
    double cubic_expected = 0.0;        // 8 ||h2||^2
    double cubic_rel_err = 0.0;
};
HermiteIdentityReport hermite_identities(int quad_nodes = 64);

// Smooth cutoff chi(sigma) = chihat(delta^theta * sigma): chihat is the
// exp(-1/x) bump, identically 1 on [-1/2,1/2] and 0 outside [-1,1], so the
// support radius is delta^-theta.  delta_prime feeds chi_tau.
class Cutoff {
public:
    explicit Cutoff(double delta, double theta = 0.01, double delta_prime = 0.0);
    double chi(double sigma) const;
    double chi_sigma(double sigma) const;
    double chi_sigmasigma(double sigma) const;
    double chi_tau(double sigma) const;
    double support_radius() const { return 1.0 / scale_; }
    double delta() const { return delta_; }
    double theta() const { return theta_; }

    // The reference bump and its first two derivatives.
    static double bump(double t);
    static double bump1(double t);
    static double bump2(double t);

private:
    double delta_, theta_, delta_prime_, scale_;  // scale_ = delta^theta
};

// vbar = v * chi on the given grid.
std::vector<double> truncate(std::span<const double> sigma,
                             std::span<const double> v, const Cutoff& cut);

struct Projection {
    double alpha = 0.0;      // <vbar, h2>/||h2||^2
    double alpha_raw = 0.0;  // <vbar, h2>
    double plus = 0.0;       // <vbar, h0>/||h0||^2
    double plus_raw = 0.0;
    double minus_norm = 0.0;  // || vbar - plus h0 - alpha h2 ||
    double norm = 0.0;        // || vbar ||
};

Projection project(const std::function<double(double)>& vbar, const GaussHermite& rule);
Projection project_sampled(std::span<const double> sigma, std::span<const double> vbar);

struct ErrorFunctionals {
    std::vector<double> E;      // quadratic-and-higher local error
    std::vector<double> E_chi;  // cutoff commutator error
    std::vector<double> E_nl;   // nonlocal error
    double pair_E = 0.0;        // int E h2 dmu
    double pair_chi = 0.0;
    double pair_nl = 0.0;
    double quad_form = 0.0;     // int (vbar^2/2 + vbar_s^2) h2 dmu
};

// All fields evaluated on the supplied uniform grid; v must stay > -1.
ErrorFunctionals error_functionals(std::span<const double> sigma,
                                   std::span<const double> v,
                                   std::span<const double> vbar,
                                   const Cutoff& cut);

}  // namespace ricci
