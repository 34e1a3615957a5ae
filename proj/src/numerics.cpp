#include "ricci/numerics.hpp"

#include <algorithm>

namespace ricci {

std::vector<double> index_deriv1(std::span<const double> f) {
    const std::size_t n = f.size();
    if (n < 5) throw std::invalid_argument("index_deriv1: need at least 5 points");
    std::vector<double> d(n);
    for (std::size_t i = 2; i + 2 < n; ++i)
        d[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / 12.0;
    // offset 4th-order stencils at the boundary
    d[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / 12.0;
    d[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / 12.0;
    d[n - 1] = (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4] + 3.0 * f[n - 5]) / 12.0;
    d[n - 2] = (3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4] - f[n - 5]) / 12.0;
    return d;
}

std::vector<double> index_deriv2(std::span<const double> f) {
    const std::size_t n = f.size();
    if (n < 4) throw std::invalid_argument("index_deriv2: need at least 4 points");
    std::vector<double> d(n);
    for (std::size_t i = 1; i + 1 < n; ++i)
        d[i] = f[i - 1] - 2.0 * f[i] + f[i + 1];
    d[0] = 2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3];
    d[n - 1] = 2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4];
    return d;
}

std::vector<double> solve_tridiagonal(std::span<const double> lower,
                                      std::span<const double> diag,
                                      std::span<const double> upper,
                                      std::span<const double> rhs) {
    const std::size_t n = diag.size();
    std::vector<double> cp(n), dp(n), x(n);
    cp[0] = upper[0] / diag[0];
    dp[0] = rhs[0] / diag[0];
    for (std::size_t i = 1; i < n; ++i) {
        const double m = diag[i] - lower[i] * cp[i - 1];
        cp[i] = upper[i] / m;
        dp[i] = (rhs[i] - lower[i] * dp[i - 1]) / m;
    }
    x[n - 1] = dp[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = dp[i] - cp[i] * x[i + 1];
    return x;
}

CubicHermite::CubicHermite(std::vector<double> x, std::vector<double> y,
                           std::vector<double> dy)
    : x_(std::move(x)), y_(std::move(y)), dy_(std::move(dy)) {
    if (x_.size() != y_.size() || x_.size() != dy_.size() || x_.size() < 2)
        throw std::invalid_argument("CubicHermite: bad sizes");
}

std::size_t CubicHermite::segment(double x) const {
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    std::size_t i = (it == x_.begin()) ? 0 : std::size_t(it - x_.begin()) - 1;
    return std::min(i, x_.size() - 2);
}

double CubicHermite::operator()(double x) const {
    const std::size_t i = segment(x);
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * y_[i] + (t3 - 2 * t2 + t) * h * dy_[i] +
           (-2 * t3 + 3 * t2) * y_[i + 1] + (t3 - t2) * h * dy_[i + 1];
}

double CubicHermite::deriv(double x) const {
    const std::size_t i = segment(x);
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double t2 = t * t;
    return ((6 * t2 - 6 * t) * y_[i] / h + (3 * t2 - 4 * t + 1) * dy_[i] +
            (-6 * t2 + 6 * t) * y_[i + 1] / h + (3 * t2 - 2 * t) * dy_[i + 1]);
}

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 3 || y_.size() != n) throw std::invalid_argument("CubicSpline: bad sizes");
    std::vector<double> lo(n, 0.0), di(n, 1.0), up(n, 0.0), rhs(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double hl = x_[i] - x_[i - 1], hr = x_[i + 1] - x_[i];
        lo[i] = hl / 6.0;
        di[i] = (hl + hr) / 3.0;
        up[i] = hr / 6.0;
        rhs[i] = (y_[i + 1] - y_[i]) / hr - (y_[i] - y_[i - 1]) / hl;
    }
    m_ = solve_tridiagonal(lo, di, up, rhs);  // natural: m=0 at the ends
}

double CubicSpline::operator()(double x) const {
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    std::size_t i = (it == x_.begin()) ? 0 : std::size_t(it - x_.begin()) - 1;
    i = std::min(i, x_.size() - 2);
    const double h = x_[i + 1] - x_[i];
    const double a = (x_[i + 1] - x) / h, b = (x - x_[i]) / h;
    return a * y_[i] + b * y_[i + 1] +
           ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
}

double simpson_uniform(std::span<const double> f, double h) {
    const std::size_t n = f.size();
    if (n < 2) return 0.0;
    std::size_t m = n;
    double extra = 0.0;
    if (n % 2 == 0) {  // trapezoid patch on the last panel
        extra = 0.5 * h * (f[n - 2] + f[n - 1]);
        m = n - 1;
    }
    double s = f[0] + f[m - 1];
    for (std::size_t i = 1; i + 1 < m; i += 2) s += 4.0 * f[i];
    for (std::size_t i = 2; i + 1 < m; i += 2) s += 2.0 * f[i];
    return s * h / 3.0 + extra;
}

std::vector<double> cumulative_trapezoid(std::span<const double> x,
                                         std::span<const double> f) {
    std::vector<double> out(x.size(), 0.0);
    for (std::size_t i = 1; i < x.size(); ++i)
        out[i] = out[i - 1] + 0.5 * (x[i] - x[i - 1]) * (f[i] + f[i - 1]);
    return out;
}

namespace {
// Dormand-Prince coefficients
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
}  // namespace

Rk45Status integrate_rk45(
    const std::function<void(double, std::span<const double>, std::span<double>)>& f,
    std::vector<double> y, double x0, double x1, const Rk45Options& opt,
    const std::function<bool(double, std::span<const double>)>& observe) {
    const std::size_t n = y.size();
    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), yt(n), ynew(n);
    double x = x0;
    double h = (opt.max_step > 0) ? opt.max_step : (x1 - x0) / 100.0;
    h = std::min(h, x1 - x0);

    Rk45Status st;
    if (observe && !observe(x, y)) {
        st.x_reached = x;
        return st;
    }
    f(x, y, k1);
    int consecutive_rejects = 0;
    while (x < x1) {
        h = std::min(h, x1 - x);
        if (h < opt.min_step) {
            st.ok = false;
            st.message = "step underflow";
            st.x_reached = x;
            return st;
        }
        auto stage = [&](std::span<double> k, double c, auto&&... aw) {
            for (std::size_t i = 0; i < n; ++i) {
                double acc = 0.0;
                ((acc += aw.first * aw.second[i]), ...);
                yt[i] = y[i] + h * acc;
            }
            f(x + c * h, yt, k);
        };
        using P = std::pair<double, std::span<const double>>;
        stage(k2, c2, P{a21, k1});
        stage(k3, c3, P{a31, k1}, P{a32, k2});
        stage(k4, c4, P{a41, k1}, P{a42, k2}, P{a43, k3});
        stage(k5, c5, P{a51, k1}, P{a52, k2}, P{a53, k3}, P{a54, k4});
        stage(k6, 1.0, P{a61, k1}, P{a62, k2}, P{a63, k3}, P{a64, k4}, P{a65, k5});
        for (std::size_t i = 0; i < n; ++i)
            ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        f(x + h, ynew, k7);

        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double sk = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                   e6 * k6[i] + e7 * k7[i]);
            err += (ei / sk) * (ei / sk);
        }
        err = std::sqrt(err / double(n));

        if (err <= 1.0 || h <= opt.min_step * 2.0) {
            x += h;
            y = ynew;
            k1 = k7;  // FSAL
            consecutive_rejects = 0;
            if (observe && !observe(x, y)) {
                st.x_reached = x;
                return st;
            }
        } else if (++consecutive_rejects > 50) {
            st.ok = false;
            st.message = "too many rejected steps";
            st.x_reached = x;
            return st;
        }
        double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
        fac = std::clamp(fac, 0.2, 5.0);
        h *= fac;
        if (opt.max_step > 0) h = std::min(h, opt.max_step);
    }
    st.x_reached = x;
    return st;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double d = n * sxx - sx * sx;
    LineFit out;
    out.slope = (n * sxy - sx * sy) / d;
    out.intercept = (sy - out.slope * sx) / n;
    return out;
}

}  // namespace ricci
