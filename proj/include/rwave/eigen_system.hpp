#pragma once

#include <Eigen/Eigenvalues>

#include <sstream>
#include <vector>

#include "rwave/flux_model.hpp"

namespace rwave {

/// Eigen-decomposition of f'(u): ascending real eigenvalues, unit right
/// eigenvectors with the largest-magnitude component positive, L = R^{-1}.
struct EigenData {
    Vec lambdas; // ascending
    Mat left;    // rows l_i
    Mat right;   // columns r_i
};

inline EigenData eigensystem(const FluxModel& model, const Vec& u,
                             double separation_factor = 1e-10) {
    model.check_admissible(u);
    const Mat jac = model.jacobian(u);
    Eigen::EigenSolver<Mat> solver(jac);
    if (solver.info() != Eigen::Success)
        throw HyperbolicityError("eigensystem: decomposition failed at state");

    const int n = model.n;
    const auto evals = solver.eigenvalues();
    const auto evecs = solver.eigenvectors();
    double lam_scale = 0.0;
    for (int i = 0; i < n; ++i) lam_scale = std::max(lam_scale, std::abs(evals[i].real()));
    const double imag_tol = 1e-9 * (1.0 + lam_scale);
    for (int i = 0; i < n; ++i) {
        if (std::abs(evals[i].imag()) > imag_tol) {
            std::ostringstream msg;
            msg << "eigensystem: complex eigenvalue " << evals[i].real() << "+"
                << evals[i].imag() << "i (hyperbolicity failure)";
            throw HyperbolicityError(msg.str());
        }
    }

    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return evals[a].real() < evals[b].real(); });

    EigenData data;
    data.lambdas.resize(n);
    data.right.resize(n, n);
    for (int i = 0; i < n; ++i) {
        data.lambdas[i] = evals[order[i]].real();
        Vec r = evecs.col(order[i]).real();
        const double imag_part = evecs.col(order[i]).imag().norm();
        if (imag_part > imag_tol * std::max(1.0, r.norm()))
            throw HyperbolicityError("eigensystem: complex eigenvector");
        r.normalize();
        int arg = 0;
        r.cwiseAbs().maxCoeff(&arg);
        if (r[arg] < 0.0) r = -r;
        data.right.col(i) = r;
    }

    const double sep_tol = separation_factor * (1.0 + lam_scale);
    for (int i = 0; i + 1 < n; ++i) {
        if (data.lambdas[i + 1] - data.lambdas[i] <= sep_tol) {
            std::ostringstream msg;
            msg << "eigensystem: eigenvalue collision lambda_" << (i + 1) << "="
                << data.lambdas[i] << ", lambda_" << (i + 2) << "=" << data.lambdas[i + 1];
            throw HyperbolicityError(msg.str());
        }
    }

    data.left = data.right.inverse();
    return data;
}

/// Directional derivative grad(lambda_i) . r_i by central differences of the
/// eigensystem output. Field index i is 1-based.
inline double grad_lambda_dot_r(const FluxModel& model, const Vec& u, int field) {
    if (field < 1 || field > model.n)
        throw UsageError("grad_lambda_dot_r: field index out of range");
    const EigenData base = eigensystem(model, u);
    const Vec dir = base.right.col(field - 1);
    const double h = std::cbrt(std::numeric_limits<double>::epsilon()) *
                     (1.0 + u.lpNorm<Eigen::Infinity>());
    const EigenData plus = eigensystem(model, u + h * dir);
    const EigenData minus = eigensystem(model, u - h * dir);
    return (plus.lambdas[field - 1] - minus.lambdas[field - 1]) / (2.0 * h);
}

enum class FieldTag { GenuinelyNonlinear, LinearlyDegenerate, Indeterminate };

inline const char* to_string(FieldTag tag) {
    switch (tag) {
        case FieldTag::GenuinelyNonlinear: return "genuinely-nonlinear";
        case FieldTag::LinearlyDegenerate: return "linearly-degenerate";
        default: return "indeterminate";
    }
}

struct FieldClassification {
    std::vector<FieldTag> tags;
    std::string region;
    Mat samples; // (field, sample) -> grad(lambda_i).r_i
};

inline FieldClassification classify_fields(const FluxModel& model,
                                           const std::vector<Vec>& states,
                                           double tol = 1e-4,
                                           std::string region = "user samples") {
    if (states.empty()) throw UsageError("classify_fields: empty sample list");
    FieldClassification out;
    out.region = std::move(region);
    out.samples.resize(model.n, static_cast<Eigen::Index>(states.size()));
    for (std::size_t k = 0; k < states.size(); ++k)
        for (int i = 1; i <= model.n; ++i)
            out.samples(i - 1, static_cast<Eigen::Index>(k)) =
                grad_lambda_dot_r(model, states[k], i);

    for (int i = 0; i < model.n; ++i) {
        bool all_above = true, all_below = true, mixed_sign = false;
        double first_sign = 0.0;
        for (Eigen::Index k = 0; k < out.samples.cols(); ++k) {
            const double g = out.samples(i, k);
            if (std::abs(g) <= tol) all_above = false;
            if (std::abs(g) >= tol) all_below = false;
            if (std::abs(g) > tol) {
                const double s = g > 0 ? 1.0 : -1.0;
                if (first_sign == 0.0)
                    first_sign = s;
                else if (s != first_sign)
                    mixed_sign = true;
            }
        }
        if (all_above && !mixed_sign)
            out.tags.push_back(FieldTag::GenuinelyNonlinear);
        else if (all_below)
            out.tags.push_back(FieldTag::LinearlyDegenerate);
        else
            out.tags.push_back(FieldTag::Indeterminate);
    }
    return out;
}

/// Sub-characteristic margin min over samples and fields of (a - |lambda_i|).
struct MarginReport {
    double margin = std::numeric_limits<double>::infinity();
    bool pass = false;
    int worst_field = 0;   // 1-based
    int worst_sample = -1;
};

inline MarginReport check_subcharacteristic(const FluxModel& model,
                                            const std::vector<Vec>& states, double a) {
    if (!(a > 0.0)) throw UsageError("check_subcharacteristic: a must be positive");
    if (states.empty()) throw UsageError("check_subcharacteristic: empty sample list");
    MarginReport rep;
    for (std::size_t k = 0; k < states.size(); ++k) {
        const EigenData eig = eigensystem(model, states[k]);
        for (int i = 0; i < model.n; ++i) {
            const double m = a - std::abs(eig.lambdas[i]);
            if (m < rep.margin) {
                rep.margin = m;
                rep.worst_field = i + 1;
                rep.worst_sample = static_cast<int>(k);
            }
        }
    }
    rep.pass = rep.margin > 0.0;
    return rep;
}

/// Max |grad(r_p).r_p| along a curve that follows the p-th eigenvector field,
/// by central differences of the normalized eigenvector between curve points.
inline double check_structural_condition(const FluxModel& model, int p,
                                         const std::vector<Vec>& curve,
                                         double gn_tol = 1e-4) {
    if (p < 1 || p > model.n)
        throw UsageError("check_structural_condition: field index out of range");
    if (curve.size() < 3)
        throw UsageError("check_structural_condition: need at least three curve points");
    if (std::abs(grad_lambda_dot_r(model, curve.front(), p)) > gn_tol)
        throw UsageError("check_structural_condition: field " + std::to_string(p) +
                         " is genuinely nonlinear, not a contact family");

    std::vector<Vec> r(curve.size());
    std::vector<double> arc(curve.size(), 0.0);
    for (std::size_t k = 0; k < curve.size(); ++k) {
        r[k] = eigensystem(model, curve[k]).right.col(p - 1);
        if (k > 0) {
            if (r[k].dot(r[k - 1]) < 0.0) r[k] = -r[k]; // keep orientation continuous
            arc[k] = arc[k - 1] + (curve[k] - curve[k - 1]).norm();
        }
    }
    double worst = 0.0;
    for (std::size_t k = 1; k + 1 < curve.size(); ++k) {
        const double ds = arc[k + 1] - arc[k - 1];
        if (ds <= 0.0) throw UsageError("check_structural_condition: repeated curve points");
        worst = std::max(worst, ((r[k + 1] - r[k - 1]) / ds).norm());
    }
    return worst;
}

} // namespace rwave
