#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

// Shared low-level numerics: finite-difference stencils in index space,
// a tridiagonal solver, cubic Hermite interpolation, composite quadrature,
// an adaptive Dormand-Prince RK45 driver, and least-squares line fits.
namespace ricci {

// First derivative w.r.t. the node index, 4th order.  Interior points use the
// centered 5-point stencil, the two points at each end use offset stencils of
// the same order.  Grids of 5..n points required.
std::vector<double> index_deriv1(std::span<const double> f);

// Second derivative w.r.t. the node index, centered 2nd order; one-sided
// 2nd-order stencils at the ends.
std::vector<double> index_deriv2(std::span<const double> f);

// Solve a tridiagonal system in place.  `lower[0]` and `upper[n-1]` ignored.
std::vector<double> solve_tridiagonal(std::span<const double> lower,
                                      std::span<const double> diag,
                                      std::span<const double> upper,
                                      std::span<const double> rhs);

// Piecewise cubic Hermite interpolation on a strictly increasing grid.
class CubicHermite {
public:
    CubicHermite(std::vector<double> x, std::vector<double> y,
                 std::vector<double> dy);
    double operator()(double x) const;
    double deriv(double x) const;
    double x_min() const { return x_.front(); }
    double x_max() const { return x_.back(); }

private:
    std::size_t segment(double x) const;
    std::vector<double> x_, y_, dy_;
};

// Natural cubic spline (used where no derivative data exists).
class CubicSpline {
public:
    CubicSpline(std::vector<double> x, std::vector<double> y);
    double operator()(double x) const;
    double x_min() const { return x_.front(); }
    double x_max() const { return x_.back(); }

private:
    std::vector<double> x_, y_, m_;  // m_ = second derivatives at knots
};

// Composite Simpson on a uniform grid (n odd preferred; a trapezoid panel
// patches even n).
double simpson_uniform(std::span<const double> f, double h);

// Cumulative trapezoid: out[i] = integral of f from x[0] to x[i].
std::vector<double> cumulative_trapezoid(std::span<const double> x,
                                         std::span<const double> f);

// Dormand-Prince 5(4) adaptive step integrator for small ODE systems.
// Calls `observe(x, y)` after the initial point and every accepted step.
struct Rk45Options {
    double rtol = 1e-10;
    double atol = 1e-12;
    double max_step = 0.0;   // 0 = unlimited
    double min_step = 1e-14;
};

struct Rk45Status {
    bool ok = true;
    double x_reached = 0.0;
    std::string message;
};

Rk45Status integrate_rk45(
    const std::function<void(double, std::span<const double>, std::span<double>)>& f,
    std::vector<double> y, double x0, double x1, const Rk45Options& opt,
    const std::function<bool(double, std::span<const double>)>& observe);

// Least-squares slope/intercept of y against x.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);

inline bool all_finite(std::span<const double> v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

}  // namespace ricci
