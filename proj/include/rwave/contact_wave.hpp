#pragma once

#include <optional>

#include "rwave/riemann.hpp"

namespace rwave {

/// rho(x,t) and its partials, where rho solves rho_t + c rho_x = a^2 rho_xx
/// with step data at t = -1: an error-function ramp of variance 2a^2(1+t).
struct RhoDerivs {
    double rho = 0, x = 0, t = 0, xx = 0, xt = 0, tt = 0, xxx = 0, xxt = 0;
};

/// Integral curve of r_p through u_p, parametrized by arclength offset from
/// rho_minus. Affine curves are evaluated in closed form.
class ContactCurve {
public:
    static ContactCurve affine(Vec base, Vec dir, double rho_minus) {
        ContactCurve c;
        c.affine_ = true;
        c.base_ = std::move(base);
        c.dir_ = std::move(dir);
        c.rho_minus_ = rho_minus;
        return c;
    }
    static ContactCurve tabulated(HermiteTable table) {
        ContactCurve c;
        c.affine_ = false;
        c.table_ = std::move(table);
        c.rho_minus_ = c.table_.x_min();
        return c;
    }

    bool is_affine() const { return affine_; }

    Vec u(double rho) const {
        if (affine_) return base_ + (rho - rho_minus_) * dir_;
        return table_.value(clamp(rho));
    }
    Vec du(double rho) const {
        if (affine_) return dir_;
        return table_.derivative(clamp(rho));
    }
    Vec ddu(double rho) const {
        if (affine_) return Vec::Zero(base_.size());
        const double h = 1e-5 * (table_.x_max() - table_.x_min());
        return (du(clamp(rho) + h) - du(clamp(rho) - h)) / (2.0 * h);
    }
    Vec dddu(double rho) const {
        if (affine_) return Vec::Zero(base_.size());
        const double h = 1e-4 * (table_.x_max() - table_.x_min());
        return (ddu(clamp(rho) + h) - ddu(clamp(rho) - h)) / (2.0 * h);
    }

private:
    double clamp(double rho) const {
        return std::min(std::max(rho, table_.x_min()), table_.x_max());
    }
    bool affine_ = true;
    Vec base_, dir_;
    double rho_minus_ = 0.0;
    HermiteTable table_;
};

struct ContactOptions {
    double rho_minus = 1.0;       // base value of the curve parameter
    double structural_tol = 1e-6; // warn threshold for |grad r_p . r_p|
    double endpoint_tol = 1e-9;
    int curve_samples = 33;       // for the structural-condition check
};

/// The relaxation contact wave u^p(x,t) = u(rho(x,t)) on the contact curve
/// C_p, with rho the smoothed step. Immutable; evaluators are pure.
class ContactWave {
public:
    ContactWave(FluxModel model, int field, double a, double speed, Vec u_left, Vec u_right,
                const ContactOptions& opt = {})
        : model_(std::move(model)),
          field_(field),
          a_(a),
          speed_(speed),
          u_left_(std::move(u_left)),
          u_right_(std::move(u_right)),
          rho_minus_(opt.rho_minus) {
        build(opt);
    }

    int field() const { return field_; }
    double speed() const { return speed_; }
    double relaxation_speed() const { return a_; }
    double rho_minus() const { return rho_minus_; }
    double rho_plus() const { return rho_plus_; }
    double strength() const { return (u_right_ - u_left_).norm(); }
    const Vec& left_state() const { return u_left_; }
    const Vec& right_state() const { return u_right_; }
    const ContactCurve& curve() const { return curve_; }
    double structural_deviation() const { return structural_deviation_; }
    bool structural_ok() const { return structural_ok_; }

    RhoDerivs rho(double x, double t) const {
        RhoDerivs d;
        const double tau = 1.0 + t;
        const double stilde = a_ * std::sqrt(2.0 * tau);
        const double z = (x - speed_ * t) / stilde;
        const double drho = rho_plus_ - rho_minus_;
        const double pdf = normal_pdf(z);
        d.rho = rho_minus_ + drho * normal_cdf(z);
        d.x = drho * pdf / stilde;
        d.xx = -drho * z * pdf / (stilde * stilde);
        d.xxx = drho * (z * z - 1.0) * pdf / (stilde * stilde * stilde);
        const double xxxx = drho * (3.0 * z - z * z * z) * pdf / (stilde * stilde * stilde * stilde);
        const double a2 = a_ * a_;
        d.t = a2 * d.xx - speed_ * d.x;
        d.xt = a2 * d.xxx - speed_ * d.xx;
        d.xxt = a2 * xxxx - speed_ * d.xxx;
        d.tt = a2 * d.xxt - speed_ * d.xt;
        return d;
    }

    double eta(double x, double t) const { return rho(x, t).rho / rho_plus_; }

    struct Eval {
        Vec u, ux, ut, uxx, uxt, utt, uxxt;
        double rho = 0, eta = 0;
    };

    Eval eval(double x, double t) const {
        const RhoDerivs d = rho(x, t);
        Eval e;
        e.rho = d.rho;
        e.eta = d.rho / rho_plus_;
        e.u = curve_.u(d.rho);
        const Vec du = curve_.du(d.rho);
        const Vec ddu = curve_.ddu(d.rho);
        e.ux = du * d.x;
        e.ut = du * d.t;
        e.uxx = ddu * d.x * d.x + du * d.xx;
        e.uxt = ddu * d.x * d.t + du * d.xt;
        e.utt = ddu * d.t * d.t + du * d.tt;
        e.uxxt = curve_.dddu(d.rho) * d.x * d.x * d.t +
                 ddu * (d.xx * d.t + 2.0 * d.x * d.xt) + du * d.xxt;
        return e;
    }

    Vec value(double x, double t) const { return curve_.u(rho(x, t).rho); }

    /// u^p_t + f(u^p)_x - a^2 u^p_xx by central differences of the evaluators.
    Vec pde_residual_fd(double x, double t, double h = 1e-4) const {
        const Vec ut = (value(x, t + h) - value(x, t - h)) / (2.0 * h);
        const Vec fx = (model_.flux(value(x + h, t)) - model_.flux(value(x - h, t))) / (2.0 * h);
        const Vec uxx =
            (value(x + h, t) - 2.0 * value(x, t) + value(x - h, t)) / (h * h);
        return ut + fx - a_ * a_ * uxx;
    }

    /// Curve samples for structural-condition checks and export.
    std::vector<Vec> curve_points(int count) const {
        std::vector<Vec> pts;
        for (int k = 0; k < count; ++k)
            pts.push_back(curve_.u(rho_minus_ + (rho_plus_ - rho_minus_) * k / (count - 1.0)));
        return pts;
    }

private:
    void build(const ContactOptions& opt) {
        const double delta = strength();
        if (!(delta > 0.0)) throw UsageError("contact_wave: zero-strength contact");
        const bool affine = std::find(model_.affine_fields.begin(), model_.affine_fields.end(),
                                      field_) != model_.affine_fields.end();
        if (affine) {
            rho_plus_ = rho_minus_ + delta;
            curve_ = ContactCurve::affine(u_left_, (u_right_ - u_left_) / delta, rho_minus_);
        } else {
            build_numeric_curve(opt, delta);
        }

        structural_deviation_ =
            check_structural_condition(model_, field_, curve_points(opt.curve_samples));
        structural_ok_ = structural_deviation_ <= opt.structural_tol;

        if ((curve_.u(rho_plus_) - u_right_).norm() > opt.endpoint_tol * (1.0 + delta))
            throw CurveError("contact_wave: integral curve missed the right fan state");
    }

    void build_numeric_curve(const ContactOptions& opt, double delta) {
        // integrate du/drho = r_p(u) by arclength, oriented from u_left toward
        // u_right, overshooting slightly so the endpoint lies inside the table
        Vec dir0 = eigensystem(model_, u_left_).right.col(field_ - 1);
        if (dir0.dot(u_right_ - u_left_) < 0.0) dir0 = -dir0;
        Vec prev = dir0;
        const auto rhs = [&](const Vec& y) {
            Vec r = eigensystem(model_, y).right.col(field_ - 1);
            if (r.dot(prev) < 0.0) r = -r;
            return r;
        };
        const double margin = 0.2 * delta;
        std::vector<double> rr;
        std::vector<Vec> vv, dd;
        Vec u = u_left_;
        const int steps = 200;
        const double h = (delta + margin) / steps;
        rr.push_back(rho_minus_);
        vv.push_back(u);
        dd.push_back(dir0);
        for (int k = 0; k < steps; ++k) {
            const Vec k1 = rhs(u);
            prev = k1;
            const Vec k2 = rhs(u + 0.5 * h * k1);
            const Vec k3 = rhs(u + 0.5 * h * k2);
            const Vec k4 = rhs(u + h * k3);
            u += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            prev = rhs(u);
            rr.push_back(rho_minus_ + (k + 1) * h);
            vv.push_back(u);
            dd.push_back(prev);
        }
        HermiteTable table(rr, vv, dd);

        // locate the arclength at which the curve meets u_right
        const Vec tangent = (u_right_ - u_left_).normalized();
        const auto gap = [&](double rho) {
            return (table.value(rho) - u_right_).dot(tangent);
        };
        double rp;
        try {
            rp = bisect(gap, rho_minus_, rho_minus_ + delta + margin, 1e-14);
        } catch (const UsageError&) {
            throw CurveError("contact_wave: integral curve does not reach the right state");
        }
        rho_plus_ = rp;
        curve_ = ContactCurve::tabulated(std::move(table));
    }

    FluxModel model_;
    int field_;
    double a_;
    double speed_;
    Vec u_left_, u_right_;
    double rho_minus_ = 1.0, rho_plus_ = 1.0;
    ContactCurve curve_;
    double structural_deviation_ = 0.0;
    bool structural_ok_ = true;
};

/// Builds the relaxation contact wave for the fan's designated contact field.
inline ContactWave contact_wave(const FluxModel& model, double a, const WaveFan& fan,
                                const ContactOptions& opt = {}) {
    if (fan.p < 1)
        throw UsageError("contact_wave: fan has no designated contact field");
    const int p = fan.p;
    if (fan.types[p - 1] != WaveType::Contact)
        throw UsageError("contact_wave: designated field is not a contact");
    return ContactWave(model, p, a, fan.speeds[p - 1], fan.states[p - 1], fan.states[p], opt);
}

} // namespace rwave
