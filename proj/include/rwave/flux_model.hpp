#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>

#include "rwave/numerics.hpp"

namespace rwave {

/// A strictly hyperbolic system u_t + f(u)_x = 0 given by its flux, Jacobian
/// and admissibility predicate. Immutable after construction.
struct FluxModel {
    int n = 0;
    std::string label;
    std::map<std::string, double> parameters;
    std::function<Vec(const Vec&)> flux;
    std::function<Mat(const Vec&)> jacobian;
    /// Throws DomainError for states outside the admissible region.
    std::function<void(const Vec&)> check_admissible;
    /// 1-based fields whose integral curves are straight lines in conserved
    /// variables (contact curves evaluated in closed form).
    std::vector<int> affine_fields;
};

/// Central-difference Jacobian with step sqrt(eps)*(1+|u|).
inline Mat fd_jacobian(const std::function<Vec(const Vec&)>& flux, const Vec& u) {
    const int n = static_cast<int>(u.size());
    const double h = std::sqrt(std::numeric_limits<double>::epsilon()) *
                     (1.0 + u.lpNorm<Eigen::Infinity>());
    Mat jac(n, n);
    Vec up = u, um = u;
    for (int k = 0; k < n; ++k) {
        up[k] = u[k] + h;
        um[k] = u[k] - h;
        jac.col(k) = (flux(up) - flux(um)) / (2.0 * h);
        up[k] = u[k];
        um[k] = u[k];
    }
    return jac;
}

inline Vec evaluate_flux(const FluxModel& model, const Vec& u) {
    if (u.size() != model.n)
        throw UsageError("evaluate_flux: state has dimension " + std::to_string(u.size()) +
                         ", model expects " + std::to_string(model.n));
    model.check_admissible(u);
    return model.flux(u);
}

inline FluxModel make_burgers() {
    FluxModel m;
    m.n = 1;
    m.label = "burgers";
    m.flux = [](const Vec& u) {
        Vec f(1);
        f[0] = 0.5 * u[0] * u[0];
        return f;
    };
    m.jacobian = [](const Vec& u) {
        Mat j(1, 1);
        j(0, 0) = u[0];
        return j;
    };
    m.check_admissible = [](const Vec&) {};
    return m;
}

inline FluxModel make_linear(const Mat& coeff) {
    if (coeff.rows() != coeff.cols() || coeff.rows() < 1)
        throw ConfigError("make_linear: coefficient matrix must be square");
    FluxModel m;
    m.n = static_cast<int>(coeff.rows());
    m.label = "linear";
    m.flux = [coeff](const Vec& u) { return Vec(coeff * u); };
    m.jacobian = [coeff](const Vec&) { return coeff; };
    m.check_admissible = [](const Vec&) {};
    for (int i = 1; i <= m.n; ++i) m.affine_fields.push_back(i);
    return m;
}

namespace detail {
inline double euler_pressure(double gamma, const Vec& u) {
    return (gamma - 1.0) * (u[2] - 0.5 * u[1] * u[1] / u[0]);
}
} // namespace detail

/// gamma-law compressible Euler in conserved variables (rho, rho*u, E).
inline FluxModel make_euler(double gamma) {
    if (!(gamma > 1.0)) throw ConfigError("make_euler: gamma must exceed 1");
    FluxModel m;
    m.n = 3;
    m.label = "euler";
    m.parameters["gamma"] = gamma;
    m.check_admissible = [gamma](const Vec& u) {
        if (!(u[0] > 0.0))
            throw DomainError("euler: nonpositive density rho=" + std::to_string(u[0]));
        const double p = detail::euler_pressure(gamma, u);
        if (!(p > 0.0))
            throw DomainError("euler: nonpositive pressure p=" + std::to_string(p) +
                              " (energy component)");
    };
    m.flux = [gamma](const Vec& u) {
        const double vel = u[1] / u[0];
        const double p = detail::euler_pressure(gamma, u);
        Vec f(3);
        f[0] = u[1];
        f[1] = u[1] * vel + p;
        f[2] = vel * (u[2] + p);
        return f;
    };
    m.jacobian = [gamma](const Vec& u) {
        const double vel = u[1] / u[0];
        const double E = u[2];
        const double rho = u[0];
        const double g1 = gamma - 1.0;
        Mat j(3, 3);
        j(0, 0) = 0.0;
        j(0, 1) = 1.0;
        j(0, 2) = 0.0;
        j(1, 0) = 0.5 * (gamma - 3.0) * vel * vel;
        j(1, 1) = (3.0 - gamma) * vel;
        j(1, 2) = g1;
        j(2, 0) = vel * (g1 * vel * vel - gamma * E / rho);
        j(2, 1) = gamma * E / rho - 1.5 * g1 * vel * vel;
        j(2, 2) = gamma * vel;
        return j;
    };
    m.affine_fields = {2}; // the contact field: integral curve is a straight line
    return m;
}

/// Catalog lookup by label. "linear" expects row-major entries M00,M01,...
/// in the parameter map keyed m00,m01,... plus "dim".
inline FluxModel make_model(const std::string& label,
                            const std::map<std::string, double>& params) {
    if (label == "burgers") return make_burgers();
    if (label == "euler") {
        const auto it = params.find("gamma");
        return make_euler(it == params.end() ? 1.4 : it->second);
    }
    if (label == "linear") {
        const auto d = params.find("dim");
        if (d == params.end()) throw ConfigError("linear model requires parameter 'dim'");
        const int n = static_cast<int>(d->second);
        Mat coeff(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                const std::string key = "m" + std::to_string(i) + std::to_string(j);
                const auto it = params.find(key);
                if (it == params.end())
                    throw ConfigError("linear model missing parameter '" + key + "'");
                coeff(i, j) = it->second;
            }
        }
        return make_linear(coeff);
    }
    throw ConfigError("unknown model label '" + label + "'");
}

} // namespace rwave
