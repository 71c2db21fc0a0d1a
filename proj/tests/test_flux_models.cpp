#include <catch2/catch_amalgamated.hpp>

#include "rwave/eigen_system.hpp"
#include "rwave/flux_model.hpp"

#include "oracles.hpp"

using namespace rwave;
using Catch::Approx;

namespace {
Vec vec1(double a) {
    Vec v(1);
    v << a;
    return v;
}
Vec vec2(double a, double b) {
    Vec v(2);
    v << a, b;
    return v;
}
Vec vec3(double a, double b, double c) {
    Vec v(3);
    v << a, b, c;
    return v;
}
Mat swap_matrix() {
    Mat m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}
} // namespace

TEST_CASE("flux evaluation on the catalog") {
    const FluxModel burgers = make_burgers();
    CHECK(evaluate_flux(burgers, vec1(2.0))[0] == Approx(2.0));

    const FluxModel euler = make_euler(1.4);
    const Vec rest = vec3(1.0, 0.0, 2.5); // velocity 0, pressure 1
    const Vec f = evaluate_flux(euler, rest);
    CHECK(f[0] == Approx(0.0).margin(1e-15));
    CHECK(f[1] == Approx(1.0)); // momentum flux = pressure
    CHECK(f[2] == Approx(0.0).margin(1e-15));

    const FluxModel lin = make_linear(swap_matrix());
    const Vec g = evaluate_flux(lin, vec2(3.0, 4.0));
    CHECK(g[0] == Approx(4.0));
    CHECK(g[1] == Approx(3.0));
}

TEST_CASE("inadmissible states are rejected with the offending component") {
    const FluxModel euler = make_euler(1.4);
    CHECK_THROWS_MATCHES(evaluate_flux(euler, vec3(-1.0, 0.0, 2.5)), DomainError,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("density")));
    // internal energy negative => nonpositive pressure
    CHECK_THROWS_MATCHES(evaluate_flux(euler, vec3(1.0, 2.0, 1.0)), DomainError,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("pressure")));
    CHECK_THROWS_AS(evaluate_flux(euler, vec2(1.0, 0.0)), UsageError);
}

TEST_CASE("analytic Jacobians match central differences at 1e-6 relative") {
    for (const std::string label : {"burgers", "euler", "linear"}) {
        const FluxModel model = label == "linear" ? make_linear(swap_matrix())
                                                  : make_model(label, {{"gamma", 1.4}});
        for (const Vec& u : oracles::random_states(label, 100, 20240521)) {
            const Mat analytic = model.jacobian(u);
            const Mat fd = fd_jacobian(model.flux, u);
            const double scale = std::max(1.0, analytic.lpNorm<Eigen::Infinity>());
            REQUIRE((analytic - fd).lpNorm<Eigen::Infinity>() / scale < 1e-6);
        }
    }
}

TEST_CASE("eigensystem: scalar case and defining identities") {
    const FluxModel burgers = make_burgers();
    const EigenData eig = eigensystem(burgers, vec1(3.0));
    CHECK(eig.lambdas[0] == Approx(3.0));
    CHECK(eig.left(0, 0) == Approx(1.0));
    CHECK(eig.right(0, 0) == Approx(1.0));

    for (const std::string label : {"burgers", "euler", "linear"}) {
        const FluxModel model = label == "linear" ? make_linear(swap_matrix())
                                                  : make_model(label, {{"gamma", 1.4}});
        for (const Vec& u : oracles::random_states(label, 100, 771)) {
            const EigenData e = eigensystem(model, u);
            const Mat id = e.left * e.right;
            REQUIRE((id - Mat::Identity(model.n, model.n)).lpNorm<Eigen::Infinity>() < 1e-10);
            const Mat diag = e.left * model.jacobian(u) * e.right;
            Mat expected = Mat::Zero(model.n, model.n);
            expected.diagonal() = e.lambdas;
            REQUIRE((diag - expected).lpNorm<Eigen::Infinity>() < 1e-8);
            for (int i = 0; i + 1 < model.n; ++i)
                REQUIRE(e.lambdas[i] < e.lambdas[i + 1]);
        }
    }
}

TEST_CASE("Euler rest-state eigenvalues against the characteristic-polynomial oracle") {
    const FluxModel euler = make_euler(1.4);
    const Vec rest = vec3(1.0, 0.0, 2.5);
    const EigenData eig = eigensystem(euler, rest);

    const auto oracle = oracles::eigenvalues_3x3_charpoly(euler.jacobian(rest));
    for (int i = 0; i < 3; ++i) REQUIRE(eig.lambdas[i] == Approx(oracle[i]).margin(1e-10));

    const double c = std::sqrt(1.4);
    CHECK(eig.lambdas[0] == Approx(-c));
    CHECK(eig.lambdas[1] == Approx(0.0).margin(1e-12));
    CHECK(eig.lambdas[2] == Approx(c));

    // eigenvectors against the analytic formulas (same normalization)
    const Mat r_oracle = oracles::euler_right_eigenvectors(1.4, rest);
    REQUIRE((eig.right - r_oracle).lpNorm<Eigen::Infinity>() < 1e-9);
}

TEST_CASE("eigenvalue collision raises a hyperbolicity error") {
    const FluxModel degenerate = make_linear(Mat::Identity(2, 2));
    CHECK_THROWS_AS(eigensystem(degenerate, vec2(0.0, 0.0)), HyperbolicityError);
}

TEST_CASE("field classification on the catalog") {
    const FluxModel burgers = make_burgers();
    std::vector<Vec> bs;
    for (double u = -1.0; u <= 1.0; u += 0.25) bs.push_back(vec1(u));
    const auto bc = classify_fields(burgers, bs);
    REQUIRE(bc.tags[0] == FieldTag::GenuinelyNonlinear);

    const FluxModel lin = make_linear(swap_matrix());
    const auto lc = classify_fields(lin, oracles::random_states("linear", 20, 5));
    REQUIRE(lc.tags[0] == FieldTag::LinearlyDegenerate);
    REQUIRE(lc.tags[1] == FieldTag::LinearlyDegenerate);

    const FluxModel euler = make_euler(1.4);
    std::vector<Vec> es;
    for (double drho : {-0.1, 0.0, 0.1})
        for (double dv : {-0.05, 0.0, 0.05})
            for (double dp : {-0.1, 0.0, 0.1})
                es.push_back(oracles::euler_conserved(1.0 + drho, dv, 1.0 + dp, 1.4));
    const auto ec = classify_fields(euler, es);
    REQUIRE(ec.tags[0] == FieldTag::GenuinelyNonlinear);
    REQUIRE(ec.tags[1] == FieldTag::LinearlyDegenerate);
    REQUIRE(ec.tags[2] == FieldTag::GenuinelyNonlinear);

    // oracle: finite differences of the analytic primitive-variable
    // eigenvalues along the analytic eigenvectors
    for (const Vec& u : es) {
        const Mat r = oracles::euler_right_eigenvectors(1.4, u);
        for (int i = 0; i < 3; ++i) {
            const double h = 1e-6;
            const auto lp = oracles::euler_eigenvalues_primitive(1.4, u + h * r.col(i));
            const auto lm = oracles::euler_eigenvalues_primitive(1.4, u - h * r.col(i));
            const double g = (lp[i] - lm[i]) / (2.0 * h);
            const double lib = grad_lambda_dot_r(euler, u, i + 1);
            REQUIRE(lib == Approx(g).margin(1e-5));
        }
    }
}

TEST_CASE("sub-characteristic margins") {
    const FluxModel burgers = make_burgers();
    std::vector<Vec> samples;
    for (double u = -1.0; u <= 1.0; u += 0.125) samples.push_back(vec1(u));

    const auto pass = check_subcharacteristic(burgers, samples, 2.0);
    CHECK(pass.margin == Approx(1.0));
    CHECK(pass.pass);

    const auto fail = check_subcharacteristic(burgers, samples, 0.5);
    CHECK(fail.margin == Approx(-0.5));
    CHECK_FALSE(fail.pass);

    const FluxModel euler = make_euler(1.4);
    std::vector<Vec> rest = {oracles::euler_conserved(1.0, 0.0, 1.0, 1.4)};
    const auto er = check_subcharacteristic(euler, rest, 2.0);
    CHECK(er.margin == Approx(2.0 - std::sqrt(1.4)));
}

TEST_CASE("structural condition along contact curves") {
    const FluxModel lin = make_linear(swap_matrix());
    std::vector<Vec> lcurve;
    const Vec r2 = eigensystem(lin, vec2(0.3, -0.1)).right.col(1);
    for (int k = 0; k <= 10; ++k) lcurve.push_back(vec2(0.3, -0.1) + 0.02 * k * r2);
    CHECK(check_structural_condition(lin, 2, lcurve) < 1e-10);

    const FluxModel euler = make_euler(1.4);
    std::vector<Vec> ecurve;
    for (int k = 0; k <= 20; ++k) {
        Vec u = vec3(1.0, 0.0, 2.5);
        u[0] += 0.0025 * k; // straight line in conserved variables, velocity 0
        ecurve.push_back(u);
    }
    CHECK(check_structural_condition(euler, 2, ecurve) <= 1e-8);

    const FluxModel burgers = make_burgers();
    std::vector<Vec> bcurve = {vec1(0.2), vec1(0.3), vec1(0.4)};
    CHECK_THROWS_AS(check_structural_condition(burgers, 1, bcurve), UsageError);
    CHECK_THROWS_AS(check_structural_condition(euler, 5, ecurve), UsageError);
}
