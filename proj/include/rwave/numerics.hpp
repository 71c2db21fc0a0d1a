#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "rwave/errors.hpp"

namespace rwave {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline double minmod(double p, double q) {
    if (p > 0.0 && q > 0.0) return std::min(p, q);
    if (p < 0.0 && q < 0.0) return std::max(p, q);
    return 0.0;
}

/// Standard normal distribution function and density.
inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }
inline double normal_pdf(double z) {
    static const double inv_sqrt_2pi = 0.3989422804014326779;
    return inv_sqrt_2pi * std::exp(-0.5 * z * z);
}

/// Adaptive Simpson quadrature on [lo, hi].
namespace detail {
inline double simpson_rec(const std::function<double(double)>& f, double lo, double hi,
                          double flo, double fmid, double fhi, double whole, double tol,
                          int depth) {
    const double mid = 0.5 * (lo + hi);
    const double lmid = 0.5 * (lo + mid);
    const double rmid = 0.5 * (mid + hi);
    const double fl = f(lmid);
    const double fr = f(rmid);
    const double left = (mid - lo) / 6.0 * (flo + 4.0 * fl + fmid);
    const double right = (hi - mid) / 6.0 * (fmid + 4.0 * fr + fhi);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return simpson_rec(f, lo, mid, flo, fl, fmid, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, mid, hi, fmid, fr, fhi, right, 0.5 * tol, depth - 1);
}
} // namespace detail

inline double integrate(const std::function<double(double)>& f, double lo, double hi,
                        double tol = 1e-12, int max_depth = 40) {
    if (lo == hi) return 0.0;
    const double mid = 0.5 * (lo + hi);
    const double flo = f(lo), fmid = f(mid), fhi = f(hi);
    const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
    return detail::simpson_rec(f, lo, hi, flo, fmid, fhi, whole, tol, max_depth);
}

/// Least-squares slope/intercept of y against x.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};

inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw UsageError("fit_line: need at least two samples");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sx += x[k];
        sy += y[k];
        sxx += x[k] * x[k];
        sxy += x[k] * y[k];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw UsageError("fit_line: degenerate abscissae");
    LineFit fit;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    return fit;
}

/// Power-law exponent of v(t) ~ (1+t)^q from log-log least squares.
inline double fit_decay_exponent(const std::vector<double>& t, const std::vector<double>& v) {
    std::vector<double> lx, ly;
    for (std::size_t k = 0; k < t.size(); ++k) {
        if (v[k] > 0.0) {
            lx.push_back(std::log1p(t[k]));
            ly.push_back(std::log(v[k]));
        }
    }
    return fit_line(lx, ly).slope;
}

/// Bisection for a scalar root of f on [lo, hi]; f(lo), f(hi) must differ in sign.
inline double bisect(const std::function<double(double)>& f, double lo, double hi,
                     double tol = 1e-13, int max_iter = 200) {
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0) == (fhi > 0)) throw UsageError("bisect: endpoints do not bracket a root");
    for (int k = 0; k < max_iter && hi - lo > tol * (1.0 + std::abs(lo) + std::abs(hi)); ++k) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0) == (flo > 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// Adaptive Dormand-Prince 5(4) integration with stored accepted steps.
// ---------------------------------------------------------------------------

struct OdeOrbit {
    std::vector<double> xi;       // accepted nodes, ascending in integration variable
    std::vector<Vec> y;           // states at nodes
    std::vector<Vec> f;           // RHS at nodes
};

struct OdeOptions {
    double rtol = 1e-11;
    double atol = 1e-13;
    double h_init = 1e-3;
    double h_max = std::numeric_limits<double>::infinity();
    std::size_t max_steps = 2000000;
};

/// Integrates y' = rhs(y) from (x0, y0) until stop(y, x) returns true.
/// Throws ConvergenceError if the step budget is exhausted.
inline OdeOrbit integrate_ode(const std::function<Vec(const Vec&)>& rhs, double x0, Vec y0,
                              const std::function<bool(const Vec&, double)>& stop,
                              const OdeOptions& opt = {}) {
    // Dormand-Prince coefficients
    static const double c2 = 1. / 5, c3 = 3. / 10, c4 = 4. / 5, c5 = 8. / 9;
    static const double a21 = 1. / 5;
    static const double a31 = 3. / 40, a32 = 9. / 40;
    static const double a41 = 44. / 45, a42 = -56. / 15, a43 = 32. / 9;
    static const double a51 = 19372. / 6561, a52 = -25360. / 2187, a53 = 64448. / 6561,
                        a54 = -212. / 729;
    static const double a61 = 9017. / 3168, a62 = -355. / 33, a63 = 46732. / 5247,
                        a64 = 49. / 176, a65 = -5103. / 18656;
    static const double b1 = 35. / 384, b3 = 500. / 1113, b4 = 125. / 192, b5 = -2187. / 6784,
                        b6 = 11. / 84;
    static const double e1 = 71. / 57600, e3 = -71. / 16695, e4 = 71. / 1920,
                        e5 = -17253. / 339200, e6 = 22. / 525, e7 = -1. / 40;
    (void)c2; (void)c3; (void)c4; (void)c5;

    OdeOrbit orbit;
    double x = x0;
    Vec y = std::move(y0);
    Vec k1 = rhs(y);
    orbit.xi.push_back(x);
    orbit.y.push_back(y);
    orbit.f.push_back(k1);

    double h = opt.h_init;
    for (std::size_t n = 0; n < opt.max_steps; ++n) {
        if (stop(y, x)) return orbit;
        h = std::min(h, opt.h_max);
        Vec k2 = rhs(y + h * (a21 * k1));
        Vec k3 = rhs(y + h * (a31 * k1 + a32 * k2));
        Vec k4 = rhs(y + h * (a41 * k1 + a42 * k2 + a43 * k3));
        Vec k5 = rhs(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        Vec k6 = rhs(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        Vec y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        Vec k7 = rhs(y5);
        Vec err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        double scale = 0.0;
        for (int i = 0; i < y.size(); ++i) {
            const double s = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
            scale = std::max(scale, std::abs(err[i]) / s);
        }
        if (scale <= 1.0) {
            x += h;
            y = std::move(y5);
            k1 = std::move(k7); // FSAL
            orbit.xi.push_back(x);
            orbit.y.push_back(y);
            orbit.f.push_back(k1);
        }
        const double fac = (scale > 0.0) ? 0.9 * std::pow(scale, -0.2) : 5.0;
        h *= std::clamp(fac, 0.2, 5.0);
        if (!(h > 0.0) || !std::isfinite(h))
            throw ConvergenceError("integrate_ode: step size collapsed");
    }
    throw ConvergenceError("integrate_ode: exceeded step budget");
}

// ---------------------------------------------------------------------------
// Cubic Hermite interpolation table with Fritsch-Carlson limited derivatives.
// ---------------------------------------------------------------------------

/// Vector-valued table on an ascending (possibly graded) grid. Derivatives are
/// supplied exactly and clamped per component where the data is locally
/// non-monotone, so the interpolant cannot overshoot between nodes.
class HermiteTable {
public:
    HermiteTable() = default;
    HermiteTable(std::vector<double> xs, std::vector<Vec> vals, std::vector<Vec> ders)
        : x_(std::move(xs)), v_(std::move(vals)), d_(std::move(ders)) {
        if (x_.size() < 2 || x_.size() != v_.size() || x_.size() != d_.size())
            throw UsageError("HermiteTable: inconsistent node data");
        limit_derivatives();
    }

    std::size_t size() const { return x_.size(); }
    double x_min() const { return x_.front(); }
    double x_max() const { return x_.back(); }
    const std::vector<double>& nodes() const { return x_; }
    const Vec& node_value(std::size_t k) const { return v_[k]; }
    const Vec& node_deriv(std::size_t k) const { return d_[k]; }

    Vec value(double x) const {
        if (x <= x_.front()) return v_.front();
        if (x >= x_.back()) return v_.back();
        const std::size_t j = interval(x);
        const double h = x_[j + 1] - x_[j];
        const double s = (x - x_[j]) / h;
        const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
        const double h10 = s * (1 - s) * (1 - s);
        const double h01 = s * s * (3 - 2 * s);
        const double h11 = s * s * (s - 1);
        return h00 * v_[j] + h10 * h * d_[j] + h01 * v_[j + 1] + h11 * h * d_[j + 1];
    }

    Vec derivative(double x) const {
        if (x <= x_.front()) return Vec::Zero(v_.front().size());
        if (x >= x_.back()) return Vec::Zero(v_.front().size());
        const std::size_t j = interval(x);
        const double h = x_[j + 1] - x_[j];
        const double s = (x - x_[j]) / h;
        const double g00 = 6 * s * (s - 1) / h;
        const double g10 = (1 - s) * (1 - 3 * s);
        const double g01 = -g00;
        const double g11 = s * (3 * s - 2);
        return g00 * v_[j] + g10 * d_[j] + g01 * v_[j + 1] + g11 * d_[j + 1];
    }

private:
    std::size_t interval(double x) const {
        const auto it = std::upper_bound(x_.begin(), x_.end(), x);
        const std::size_t j = static_cast<std::size_t>(it - x_.begin());
        return std::min(std::max<std::size_t>(j, 1), x_.size() - 1) - 1;
    }

    void limit_derivatives() {
        const int n = static_cast<int>(v_.front().size());
        for (int c = 0; c < n; ++c) {
            for (std::size_t j = 0; j + 1 < x_.size(); ++j) {
                const double h = x_[j + 1] - x_[j];
                const double sec = (v_[j + 1][c] - v_[j][c]) / h;
                if (sec == 0.0) continue;
                for (std::size_t k : {j, j + 1}) {
                    double& d = d_[k][c];
                    if (d * sec < 0.0)
                        d = 0.0;
                    else if (std::abs(d) > 3.0 * std::abs(sec))
                        d = 3.0 * sec;
                }
            }
        }
    }

    std::vector<double> x_;
    std::vector<Vec> v_;
    std::vector<Vec> d_;
};

/// Graded symmetric grid xi_j = w*sinh(sigma_j) covering [-span, span].
inline std::vector<double> sinh_grid(double width, double span, std::size_t count) {
    if (count < 3 || span <= 0.0 || width <= 0.0)
        throw UsageError("sinh_grid: bad parameters");
    const double smax = std::asinh(span / width);
    std::vector<double> xs(count);
    const std::size_t half = count / 2;
    for (std::size_t j = 0; j < count; ++j) {
        const double sigma = smax * (static_cast<double>(j) - static_cast<double>(half)) /
                             static_cast<double>(half);
        xs[j] = width * std::sinh(sigma);
    }
    xs[half] = 0.0;
    return xs;
}

} // namespace rwave
