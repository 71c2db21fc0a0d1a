#pragma once

#include <optional>
#include <sstream>
#include <vector>

#include "rwave/eigen_system.hpp"

namespace rwave {

enum class WaveType { Shock, Contact };

inline const char* to_string(WaveType t) {
    return t == WaveType::Shock ? "shock" : "contact";
}

/// Riemann solution skeleton: n+1 constant states separated by n waves.
struct WaveFan {
    std::vector<Vec> states;     // u_1..u_{n+1}, states[0] = u_-
    Vec speeds;                  // ascending
    Vec strengths;               // delta_i = |u_{i+1} - u_i|
    double delta = 0.0;          // min_i delta_i
    double same_order_c2 = 0.0;  // sum(delta_i) / delta
    std::vector<WaveType> types;
    int p = 0;                   // 1-based contact field, 0 when none/ambiguous
    double newton_residual = 0.0;
    Vec rh_residuals;            // per wave (0 for contacts: same identity)
    Vec lax_margins;             // per wave; contacts store -|lambda_p - s_p|

    const Vec& left() const { return states.front(); }
    const Vec& right() const { return states.back(); }
    int n() const { return static_cast<int>(speeds.size()); }
};

struct FanOptions {
    int contact_field = -1;      // -1: auto-detect the unique LD field
    double max_jump = 0.5;       // cap on |u_+ - u_-|
    double newton_tol = 1e-12;
    int max_iter = 80;
    double pattern_tol = 1e-9;   // positive shock parameter beyond this => rarefaction
    double rh_tol = 1e-10;
    double contact_speed_tol = 1e-8;
    double classify_tol = 1e-4;
};

namespace detail {

/// Shock-curve orientation: moving along +dir increases lambda_i, so Lax
/// shocks sit at negative parameter values.
inline Vec oriented_direction(const FluxModel& model, const Vec& u, int field) {
    const EigenData eig = eigensystem(model, u);
    Vec dir = eig.right.col(field - 1);
    const double g = grad_lambda_dot_r(model, u, field);
    if (g < 0.0) dir = -dir;
    return dir;
}

struct HugoniotPoint {
    Vec u;
    double s;
};

/// Point on the Hugoniot locus through u_base at parameter eps along dir:
/// f(u) - f(u_base) = s (u - u_base),  dir . (u - u_base) = eps.
inline HugoniotPoint hugoniot_point(const FluxModel& model, const Vec& u_base, int field,
                                    double eps, const Vec& dir) {
    const int n = model.n;
    const EigenData base = eigensystem(model, u_base);
    HugoniotPoint out{u_base, base.lambdas[field - 1]};
    if (std::abs(eps) < 1e-14) return out;

    const double g = grad_lambda_dot_r(model, u_base, field);
    Vec z(n + 1);
    z.head(n) = u_base + eps * dir;
    z[n] = base.lambdas[field - 1] + 0.5 * eps * std::abs(g);
    const Vec f_base = model.flux(u_base);

    for (int it = 0; it < 40; ++it) {
        const Vec u = z.head(n);
        const double s = z[n];
        model.check_admissible(u);
        Vec res(n + 1);
        res.head(n) = model.flux(u) - f_base - s * (u - u_base);
        res[n] = dir.dot(u - u_base) - eps;
        const double rn = res.lpNorm<Eigen::Infinity>();
        if (rn < 1e-13 * (1.0 + u.lpNorm<Eigen::Infinity>())) break;
        Mat jac = Mat::Zero(n + 1, n + 1);
        jac.topLeftCorner(n, n) = model.jacobian(u) - s * Mat::Identity(n, n);
        jac.topRightCorner(n, 1) = -(u - u_base);
        jac.bottomLeftCorner(1, n) = dir.transpose();
        z -= jac.partialPivLu().solve(res);
        if (it == 39)
            throw ConvergenceError("hugoniot_point: inner Newton stalled at field " +
                                   std::to_string(field));
    }
    out.u = z.head(n);
    out.s = z[n];
    return out;
}

/// Step of length eps along the integral curve of r_field from u0.
inline Vec integral_curve_step(const FluxModel& model, const Vec& u0, int field, double eps) {
    if (std::abs(eps) < 1e-14) return u0;
    const bool affine = std::find(model.affine_fields.begin(), model.affine_fields.end(),
                                  field) != model.affine_fields.end();
    Vec dir0 = eigensystem(model, u0).right.col(field - 1);
    if (affine) return u0 + eps * dir0;

    const int steps = std::max(8, static_cast<int>(std::ceil(std::abs(eps) / 0.01)));
    const double h = eps / steps;
    Vec u = u0;
    Vec prev = dir0;
    const auto rhs = [&](const Vec& y) {
        Vec r = eigensystem(model, y).right.col(field - 1);
        if (r.dot(prev) < 0.0) r = -r;
        return r;
    };
    for (int k = 0; k < steps; ++k) {
        const Vec k1 = rhs(u);
        prev = k1;
        const Vec k2 = rhs(u + 0.5 * h * k1);
        const Vec k3 = rhs(u + 0.5 * h * k2);
        const Vec k4 = rhs(u + h * k3);
        u += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        prev = k4;
    }
    return u;
}

struct WaveCurvePoint {
    Vec u;
    double s;
};

/// One wave-curve step from a left state; shocks for GN fields (parameter
/// measured along the oriented direction at the left state), integral-curve
/// steps for LD fields.
inline WaveCurvePoint wave_curve_step(const FluxModel& model, const Vec& u_left, int field,
                                      double eps, WaveType type) {
    if (type == WaveType::Contact) {
        const Vec u = integral_curve_step(model, u_left, field, eps);
        return {u, eigensystem(model, u_left).lambdas[field - 1]};
    }
    const Vec dir = oriented_direction(model, u_left, field);
    const HugoniotPoint hp = hugoniot_point(model, u_left, field, eps, dir);
    return {hp.u, hp.s};
}

} // namespace detail

/// Wave types from classification at a reference state.
inline std::vector<WaveType> fan_wave_types(const FluxModel& model, const Vec& u_ref,
                                            double classify_tol = 1e-4) {
    std::vector<WaveType> types;
    for (int i = 1; i <= model.n; ++i) {
        const double g = grad_lambda_dot_r(model, u_ref, i);
        types.push_back(std::abs(g) <= classify_tol ? WaveType::Contact : WaveType::Shock);
    }
    return types;
}

/// Solves the Riemann problem for data producing shocks on genuinely
/// nonlinear fields and contacts on linearly degenerate ones, by Newton
/// iteration on the composed wave-curve map.
inline WaveFan solve_riemann_fan(const FluxModel& model, const Vec& u_minus,
                                 const Vec& u_plus, const FanOptions& opts = {}) {
    const int n = model.n;
    if (u_minus.size() != n || u_plus.size() != n)
        throw UsageError("solve_riemann_fan: state dimension mismatch");
    model.check_admissible(u_minus);
    model.check_admissible(u_plus);
    if ((u_plus - u_minus).norm() > opts.max_jump)
        throw UsageError("solve_riemann_fan: |u_+ - u_-| exceeds the wave-curve cap " +
                         std::to_string(opts.max_jump));

    const std::vector<WaveType> types = fan_wave_types(model, u_minus, opts.classify_tol);
    if (opts.contact_field >= 1) {
        if (opts.contact_field > n)
            throw UsageError("solve_riemann_fan: contact field index out of range");
        if (types[opts.contact_field - 1] != WaveType::Contact)
            throw PatternError("solve_riemann_fan: field " +
                               std::to_string(opts.contact_field) +
                               " is genuinely nonlinear, cannot carry the contact");
    }

    // composed wave-curve map
    const auto compose = [&](const Vec& eps, std::vector<Vec>* states_out,
                             Vec* speeds_out) -> Vec {
        Vec u = u_minus;
        for (int i = 1; i <= n; ++i) {
            const auto pt = detail::wave_curve_step(model, u, i, eps[i - 1], types[i - 1]);
            if (states_out) states_out->push_back(pt.u);
            if (speeds_out) (*speeds_out)[i - 1] = pt.s;
            u = pt.u;
        }
        return u;
    };

    // initial guess from the eigen-decomposition of the jump at the mean state
    Vec eps(n);
    {
        const Vec mid = 0.5 * (u_minus + u_plus);
        const EigenData eig = eigensystem(model, mid);
        const Vec coeff = eig.left * (u_plus - u_minus);
        for (int i = 1; i <= n; ++i) {
            double sign = 1.0;
            if (types[i - 1] == WaveType::Shock) {
                const double g = grad_lambda_dot_r(model, mid, i);
                sign = g < 0.0 ? -1.0 : 1.0;
            }
            eps[i - 1] = coeff[i - 1] * sign;
        }
    }

    std::vector<double> history;
    Vec res = compose(eps, nullptr, nullptr) - u_plus;
    double rnorm = res.lpNorm<Eigen::Infinity>();
    history.push_back(rnorm);
    for (int it = 0; it < opts.max_iter && rnorm > opts.newton_tol; ++it) {
        Mat jac(n, n);
        const double h = std::sqrt(std::numeric_limits<double>::epsilon()) *
                         (1.0 + eps.lpNorm<Eigen::Infinity>());
        for (int k = 0; k < n; ++k) {
            Vec ep = eps;
            ep[k] += h;
            jac.col(k) = (compose(ep, nullptr, nullptr) - u_plus - res) / h;
        }
        const Vec delta = jac.partialPivLu().solve(res);
        double damp = 1.0;
        for (int half = 0; half < 10; ++half) {
            const Vec trial = eps - damp * delta;
            Vec trial_res;
            try {
                trial_res = compose(trial, nullptr, nullptr) - u_plus;
            } catch (const Error&) {
                damp *= 0.5;
                continue;
            }
            const double trial_norm = trial_res.lpNorm<Eigen::Infinity>();
            if (trial_norm < rnorm || half == 9) {
                eps = trial;
                res = trial_res;
                rnorm = trial_norm;
                break;
            }
            damp *= 0.5;
        }
        history.push_back(rnorm);
    }
    if (rnorm > opts.newton_tol) {
        std::ostringstream msg;
        msg << "solve_riemann_fan: Newton failed to reach " << opts.newton_tol
            << "; residual history:";
        for (double r : history) msg << " " << r;
        throw ConvergenceError(msg.str());
    }

    for (int i = 0; i < n; ++i) {
        if (types[i] == WaveType::Shock && eps[i] > opts.pattern_tol)
            throw PatternError("solve_riemann_fan: field " + std::to_string(i + 1) +
                               " requires a rarefaction (wave-curve parameter " +
                               std::to_string(eps[i]) + " > 0)");
    }

    WaveFan fan;
    fan.states.push_back(u_minus);
    fan.speeds.resize(n);
    compose(eps, &fan.states, &fan.speeds);
    fan.types = types;
    fan.strengths.resize(n);
    for (int i = 0; i < n; ++i) fan.strengths[i] = (fan.states[i + 1] - fan.states[i]).norm();
    fan.delta = fan.strengths.minCoeff();
    fan.same_order_c2 = fan.delta > 0.0 ? fan.strengths.sum() / fan.delta
                                        : std::numeric_limits<double>::infinity();
    fan.newton_residual = rnorm;

    int contact_count = 0, contact_idx = 0;
    for (int i = 0; i < n; ++i) {
        if (types[i] == WaveType::Contact) {
            ++contact_count;
            contact_idx = i + 1;
        }
    }
    fan.p = contact_count == 1 ? contact_idx : 0;
    if (opts.contact_field >= 1) fan.p = opts.contact_field;

    // Rankine-Hugoniot residuals, Lax margins, contact speed consistency
    fan.rh_residuals.resize(n);
    fan.lax_margins.resize(n);
    for (int i = 0; i < n; ++i) {
        const Vec& ul = fan.states[i];
        const Vec& ur = fan.states[i + 1];
        const double s = fan.speeds[i];
        fan.rh_residuals[i] =
            (model.flux(ul) - model.flux(ur) - s * (ul - ur)).lpNorm<Eigen::Infinity>();
        const double lam_l = eigensystem(model, ul).lambdas[i];
        const double lam_r = eigensystem(model, ur).lambdas[i];
        if (types[i] == WaveType::Shock) {
            fan.lax_margins[i] = std::min(lam_l - s, s - lam_r);
            if (fan.strengths[i] > opts.pattern_tol && fan.lax_margins[i] <= -1e-12)
                throw PatternError("solve_riemann_fan: Lax inequality violated at field " +
                                   std::to_string(i + 1));
        } else {
            const double dev = std::max(std::abs(lam_l - s), std::abs(lam_r - s));
            fan.lax_margins[i] = -dev;
            if (dev > opts.contact_speed_tol)
                throw PatternError("solve_riemann_fan: contact speed inconsistent at field " +
                                   std::to_string(i + 1));
        }
        if (types[i] == WaveType::Shock && fan.rh_residuals[i] > opts.rh_tol)
            throw ConvergenceError("solve_riemann_fan: Rankine-Hugoniot residual " +
                                   std::to_string(fan.rh_residuals[i]) + " at field " +
                                   std::to_string(i + 1));
    }
    for (int i = 0; i + 1 < n; ++i) {
        if (fan.speeds[i] >= fan.speeds[i + 1])
            throw PatternError("solve_riemann_fan: wave speeds not strictly ascending");
    }
    return fan;
}

/// Forward generator: builds the n+1 fan states from the state immediately
/// left of wave `anchor_field`, walking the wave curves outward with the
/// given signed parameter distances. Used to manufacture Riemann data whose
/// solution pattern and frame are known in advance.
struct FanBuildSpec {
    Vec anchor_state;    // becomes states[anchor_field - 1]
    int anchor_field = 1;
    Vec strengths;       // parameter distance per field (shocks take |.|)
};

inline std::vector<Vec> build_fan_states(const FluxModel& model, const FanBuildSpec& spec,
                                         double classify_tol = 1e-4) {
    const int n = model.n;
    if (spec.strengths.size() != n)
        throw UsageError("build_fan_states: need one strength per field");
    if (spec.anchor_field < 1 || spec.anchor_field > n)
        throw UsageError("build_fan_states: anchor field out of range");
    const std::vector<WaveType> types = fan_wave_types(model, spec.anchor_state, classify_tol);

    std::vector<Vec> states(n + 1);
    states[spec.anchor_field - 1] = spec.anchor_state;
    // forward: waves anchor..n produce states to the right
    for (int i = spec.anchor_field; i <= n; ++i) {
        const double eps = types[i - 1] == WaveType::Shock ? -std::abs(spec.strengths[i - 1])
                                                           : spec.strengths[i - 1];
        states[i] = detail::wave_curve_step(model, states[i - 1], i, eps, types[i - 1]).u;
    }
    // backward: waves anchor-1..1 produce states to the left; for a shock the
    // left state sits at positive parameter along the locus through the right
    // state (lambda increases toward the left state).
    for (int i = spec.anchor_field - 1; i >= 1; --i) {
        const Vec& ur = states[i];
        if (types[i - 1] == WaveType::Shock) {
            const Vec dir = detail::oriented_direction(model, ur, i);
            states[i - 1] =
                detail::hugoniot_point(model, ur, i, std::abs(spec.strengths[i - 1]), dir).u;
        } else {
            states[i - 1] = detail::integral_curve_step(model, ur, i, -spec.strengths[i - 1]);
        }
    }
    return states;
}

} // namespace rwave
