#pragma once

#include <memory>

#include "rwave/riemann.hpp"

namespace rwave {

struct ProfileOptions {
    std::size_t table_nodes = 1601;
    double span_widths = 40.0;   // table covers [-span_widths/kappa, +span_widths/kappa]
    double eps0_rel = 1e-7;      // shooting offset relative to the wave strength
    double stop_tol = 1e-9;      // distance to the far endpoint that ends the shot
    double tube_radius_rel = 0.75;
    double ode_rtol = 1e-11;
    double ode_atol = 1e-13;
};

/// Traveling-wave profile of the relaxation system for one shock family:
/// (a^2 - s^2) phi' = f(phi) - f(u_l) - s (phi - u_l), phi(-inf)=u_l,
/// phi(+inf)=u_r, centered so that lambda_i(phi(0)) = s. Tabulated on a
/// graded grid with monotone cubic interpolation; exponential tails beyond.
class ShockProfile {
public:
    ShockProfile(FluxModel model, int field, double a, Vec u_left, Vec u_right, double speed,
                 const ProfileOptions& opt = {})
        : model_(std::move(model)),
          field_(field),
          a_(a),
          speed_(speed),
          u_left_(std::move(u_left)),
          u_right_(std::move(u_right)) {
        build(opt);
    }

    int field() const { return field_; }
    double speed() const { return speed_; }
    double relaxation_speed() const { return a_; }
    const Vec& left_state() const { return u_left_; }
    const Vec& right_state() const { return u_right_; }
    double strength() const { return (u_right_ - u_left_).norm(); }
    double kappa_left() const { return kappa_left_; }
    double kappa_right() const { return kappa_right_; }
    double fitted_rate_left() const { return fitted_left_; }
    double fitted_rate_right() const { return fitted_right_; }
    double width() const { return width_; }
    double span() const { return span_; }
    const HermiteTable& table() const { return table_; }

    Vec value(double xi) const {
        if (xi < table_.x_min())
            return u_left_ + std::exp(kappa_left_ * (xi - table_.x_min())) * edge_left_;
        if (xi > table_.x_max())
            return u_right_ + std::exp(-kappa_right_ * (xi - table_.x_max())) * edge_right_;
        return table_.value(xi);
    }

    /// phi' from the profile ODE evaluated on the interpolated value.
    Vec deriv(double xi) const { return ode_rhs(value(xi)); }

    /// phi'' = (f'(phi) - s I) phi' / (a^2 - s^2).
    Vec second(double xi) const {
        const Vec phi = value(xi);
        const Vec dphi = ode_rhs(phi);
        return (model_.jacobian(phi) * dphi - speed_ * dphi) / denom_;
    }

    Vec ode_rhs(const Vec& phi) const {
        return (model_.flux(phi) - f_left_ - speed_ * (phi - u_left_)) / denom_;
    }

    /// Max over interior table nodes of the once-integrated ODE residual,
    /// with phi' taken from second-order differences of the tabulated values.
    double ode_residual_max() const {
        const auto& xs = table_.nodes();
        double worst = 0.0;
        for (std::size_t k = 1; k + 1 < xs.size(); ++k) {
            const double h0 = xs[k] - xs[k - 1];
            const double h1 = xs[k + 1] - xs[k];
            const Vec fd = -h1 / (h0 * (h0 + h1)) * table_.node_value(k - 1) +
                           (h1 - h0) / (h0 * h1) * table_.node_value(k) +
                           h0 / (h1 * (h0 + h1)) * table_.node_value(k + 1);
            const Vec res = denom_ * fd -
                            (model_.flux(table_.node_value(k)) - f_left_ -
                             speed_ * (table_.node_value(k) - u_left_));
            worst = std::max(worst, res.lpNorm<Eigen::Infinity>());
        }
        return worst;
    }

private:
    void build(const ProfileOptions& opt) {
        const int n = model_.n;
        const double delta = strength();
        if (!(delta > 0.0)) throw UsageError("shock_profile: zero-strength wave");
        denom_ = a_ * a_ - speed_ * speed_;
        if (!(denom_ > 0.0))
            throw UsageError("shock_profile: sub-characteristic condition fails, a <= |s|");
        for (const Vec* u : {&u_left_, &u_right_}) {
            const EigenData eig = eigensystem(model_, *u);
            if (eig.lambdas.cwiseAbs().maxCoeff() > a_ * (1.0 + 1e-12))
                throw UsageError("shock_profile: sub-characteristic condition fails at an "
                                 "endpoint state");
        }
        f_left_ = model_.flux(u_left_);

        const double lam_l = eigensystem(model_, u_left_).lambdas[field_ - 1];
        const double lam_r = eigensystem(model_, u_right_).lambdas[field_ - 1];
        kappa_left_ = (lam_l - speed_) / denom_;
        kappa_right_ = (speed_ - lam_r) / denom_;
        if (!(kappa_left_ > 0.0) || !(kappa_right_ > 0.0))
            throw ProfileError("shock_profile: Lax inequalities fail, no connecting orbit");
        width_ = 1.0 / std::min(kappa_left_, kappa_right_);
        span_ = opt.span_widths * width_;

        // The connection leaves the endpoint whose escaping manifold is one
        // dimensional: forward from u_l for the fastest family, backward from
        // u_r for the slowest. Intermediate families would need a manifold
        // BVP and are not supported.
        const bool forward = field_ == n;
        if (!forward && field_ != 1)
            throw ProfileError("shock_profile: field " + std::to_string(field_) +
                               " is an intermediate family; no one-dimensional shooting "
                               "direction exists");

        const Vec& start = forward ? u_left_ : u_right_;
        const Vec& target = forward ? u_right_ : u_left_;
        Vec dir = eigensystem(model_, start).right.col(field_ - 1);
        if (dir.dot(target - start) < 0.0) dir = -dir;

        const double eps0 = opt.eps0_rel * delta;
        const Vec chord = u_right_ - u_left_;
        const double chord2 = chord.squaredNorm();
        const double tube = opt.tube_radius_rel * delta;
        const double span_cap = 10.0 * span_;

        const auto rhs_xi = [this](const Vec& y) { return ode_rhs(y); };
        const auto rhs = [&](const Vec& y) -> Vec {
            return forward ? rhs_xi(y) : Vec(-rhs_xi(y));
        };
        const auto stop = [&](const Vec& y, double x) {
            const double t = std::clamp((y - u_left_).dot(chord) / chord2, 0.0, 1.0);
            const double off_chord = (y - u_left_ - t * chord).norm();
            if (off_chord > tube)
                throw ProfileError("shock_profile: orbit escaped the tube around the chord "
                                   "(off-chord distance " + std::to_string(off_chord) + ")");
            if (x > span_cap)
                throw ProfileError("shock_profile: orbit failed to connect within the span cap");
            return (y - target).norm() <= opt.stop_tol;
        };

        OdeOptions ode;
        ode.rtol = opt.ode_rtol;
        ode.atol = opt.ode_atol * (1.0 + u_left_.lpNorm<Eigen::Infinity>());
        ode.h_init = 1e-3 * width_;
        ode.h_max = 2.0 * width_;
        const OdeOrbit shot = integrate_ode(rhs, 0.0, start + eps0 * dir, stop, ode);
        if ((shot.y.back() - target).norm() > opt.stop_tol)
            throw ProfileError("shock_profile: orbit terminated before reaching the far state");

        // orbit in xi coordinates, ascending
        std::vector<double> oxi(shot.xi.size());
        std::vector<Vec> oval(shot.y.size()), oder(shot.y.size());
        for (std::size_t k = 0; k < shot.xi.size(); ++k) {
            const std::size_t j = forward ? k : shot.xi.size() - 1 - k;
            oxi[k] = forward ? shot.xi[j] : -shot.xi[j];
            oval[k] = shot.y[j];
            oder[k] = rhs_xi(shot.y[j]);
        }
        HermiteTable orbit(oxi, oval, oder);

        // center: lambda_i(phi(0)) = s
        const auto lam_gap = [&](double xi) {
            return eigensystem(model_, orbit.value(xi)).lambdas[field_ - 1] - speed_;
        };
        double lo = oxi.front(), hi = oxi.back();
        double glo = lam_gap(lo);
        bool bracketed = false;
        for (std::size_t k = 1; k < oxi.size(); ++k) {
            const double g = lam_gap(oxi[k]);
            if ((g > 0) != (glo > 0)) {
                lo = oxi[k - 1];
                hi = oxi[k];
                bracketed = true;
                break;
            }
            lo = oxi[k];
            glo = g;
        }
        if (!bracketed)
            throw ProfileError("shock_profile: lambda_i never crosses the wave speed along "
                               "the orbit");
        const double center = bisect(lam_gap, lo, hi, 1e-14);

        // tabulate on the graded grid; analytic tails outside the orbit range
        const double orbit_lo = oxi.front() - center;
        const double orbit_hi = oxi.back() - center;
        const Vec anchor_lo = oval.front() - u_left_;
        const Vec anchor_hi = oval.back() - u_right_;
        std::vector<double> grid = sinh_grid(width_, span_, opt.table_nodes);
        std::vector<Vec> vals(grid.size());
        std::vector<Vec> ders(grid.size());
        for (std::size_t k = 0; k < grid.size(); ++k) {
            const double xi = grid[k];
            if (xi < orbit_lo)
                vals[k] = u_left_ + std::exp(kappa_left_ * (xi - orbit_lo)) * anchor_lo;
            else if (xi > orbit_hi)
                vals[k] = u_right_ + std::exp(-kappa_right_ * (xi - orbit_hi)) * anchor_hi;
            else
                vals[k] = orbit.value(xi + center);
            ders[k] = rhs_xi(vals[k]);
        }
        table_ = HermiteTable(std::move(grid), std::move(vals), std::move(ders));
        edge_left_ = table_.node_value(0) - u_left_;
        edge_right_ = table_.node_value(table_.size() - 1) - u_right_;

        fit_tails(orbit, center, delta);

        const double endpoint_tol = 1e-8 * (1.0 + delta);
        if (edge_left_.norm() > endpoint_tol || edge_right_.norm() > endpoint_tol)
            throw ProfileError("shock_profile: table endpoints do not reach the fan states");
    }

    void fit_tails(const HermiteTable& orbit, double center, double delta) {
        const auto fit_side = [&](bool left) {
            std::vector<double> xs, ys;
            for (std::size_t k = 0; k < orbit.size(); ++k) {
                const Vec& v = orbit.node_value(k);
                const double dist = left ? (v - u_left_).norm() : (v - u_right_).norm();
                if (dist > 1e-6 * delta && dist < 3e-2 * delta) {
                    xs.push_back(orbit.nodes()[k] - center);
                    ys.push_back(std::log(dist));
                }
            }
            if (xs.size() < 4) return left ? kappa_left_ : kappa_right_;
            return std::abs(fit_line(xs, ys).slope);
        };
        fitted_left_ = fit_side(true);
        fitted_right_ = fit_side(false);
    }

    FluxModel model_;
    int field_;
    double a_;
    double speed_;
    Vec u_left_, u_right_;
    Vec f_left_;
    double denom_ = 0.0;
    double kappa_left_ = 0.0, kappa_right_ = 0.0;
    double fitted_left_ = 0.0, fitted_right_ = 0.0;
    double width_ = 0.0, span_ = 0.0;
    HermiteTable table_;
    Vec edge_left_, edge_right_;
};

/// Builds the relaxation shock profile for fan field i (1-based).
inline ShockProfile shock_profile(const FluxModel& model, double a, const WaveFan& fan,
                                  int field, const ProfileOptions& opt = {}) {
    if (field < 1 || field > fan.n())
        throw UsageError("shock_profile: field index out of range");
    if (fan.types[field - 1] != WaveType::Shock)
        throw UsageError("shock_profile: field " + std::to_string(field) +
                         " is not a shock in this fan");
    return ShockProfile(model, field, a, fan.states[field - 1], fan.states[field],
                        fan.speeds[field - 1], opt);
}

} // namespace rwave
