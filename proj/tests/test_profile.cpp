#include <catch2/catch_amalgamated.hpp>

#include "rwave/shock_profile.hpp"

#include "oracles.hpp"

using namespace rwave;
using Catch::Approx;

namespace {
Vec vec1(double a) {
    Vec v(1);
    v << a;
    return v;
}

WaveFan burgers_fan(double ul, double ur) {
    return solve_riemann_fan(make_burgers(), vec1(ul), vec1(ur), {.max_jump = 3.0});
}

WaveFan euler_fan(double strength, double a_unused = 0.0) {
    (void)a_unused;
    const FluxModel model = make_euler(1.4);
    FanBuildSpec spec;
    spec.anchor_state = oracles::euler_conserved(1.0, 0.0, 1.0, 1.4);
    spec.anchor_field = 2;
    spec.strengths = Vec(3);
    spec.strengths << strength, strength, strength;
    const auto states = build_fan_states(model, spec);
    return solve_riemann_fan(model, states.front(), states.back());
}
} // namespace

TEST_CASE("Burgers profile matches the logistic closed form") {
    // Integrated ODE for (u_l,u_r,a)=(1,0,1), s=1/2:
    //   (3/4) phi' = (phi^2 - phi)/2, i.e. the logistic phi = 1/(1+e^{2 xi/3}).
    const FluxModel model = make_burgers();
    const WaveFan fan = burgers_fan(1.0, 0.0);
    const ShockProfile prof = shock_profile(model, 1.0, fan, 1);

    CHECK(prof.value(0.0)[0] == Approx(0.5).margin(1e-9)); // centering lambda(phi(0)) = s
    double worst = 0.0;
    for (double xi = -30.0; xi <= 30.0; xi += 0.37) {
        const double exact = 1.0 / (1.0 + std::exp(2.0 * xi / 3.0));
        worst = std::max(worst, std::abs(prof.value(xi)[0] - exact));
    }
    CHECK(worst < 1e-8);

    // the closed form satisfies the integrated ODE (symbolic identity check)
    for (double xi : {-3.0, -0.5, 0.0, 1.2, 4.0}) {
        const double phi = 1.0 / (1.0 + std::exp(2.0 * xi / 3.0));
        const double dphi = -(2.0 / 3.0) * phi * (1.0 - phi);
        CHECK(0.75 * dphi == Approx(0.5 * phi * (phi - 1.0)).margin(1e-14));
    }

    CHECK(prof.kappa_left() == Approx(2.0 / 3.0));
    CHECK(prof.fitted_rate_left() == Approx(2.0 / 3.0).epsilon(0.02));
    CHECK(prof.fitted_rate_right() == Approx(2.0 / 3.0).epsilon(0.02));
}

TEST_CASE("profile endpoints and residual") {
    const FluxModel model = make_burgers();
    const WaveFan fan = burgers_fan(0.5, -0.5);
    const ShockProfile prof = shock_profile(model, 1.0, fan, 1);

    CHECK((prof.value(-prof.span()) - fan.states[0]).norm() < 1e-8);
    CHECK((prof.value(prof.span()) - fan.states[1]).norm() < 1e-8);
    CHECK(prof.ode_residual_max() < 1e-6);

    // far tails continue exponentially past the table
    CHECK((prof.value(-2.0 * prof.span()) - fan.states[0]).norm() < 1e-12);
    CHECK((prof.value(2.0 * prof.span()) - fan.states[1]).norm() < 1e-12);
}

TEST_CASE("profile rejects non-shock or super-characteristic requests") {
    const FluxModel model = make_burgers();
    const WaveFan fan = burgers_fan(1.0, 0.0);
    CHECK_THROWS_AS(shock_profile(model, 0.4, fan, 1), UsageError); // a < |lambda|
    CHECK_THROWS_AS(shock_profile(model, 1.0, fan, 2), UsageError); // no such field

    const FluxModel euler = make_euler(1.4);
    const WaveFan efan = euler_fan(0.05);
    CHECK_THROWS_AS(shock_profile(euler, 2.0, efan, 2), UsageError); // contact field
}

TEST_CASE("Euler shock profiles: monotone characteristic speed along the orbit") {
    const FluxModel model = make_euler(1.4);
    for (double strength : {0.025, 0.05, 0.1}) {
        const WaveFan fan = euler_fan(strength);
        for (int field : {1, 3}) {
            const ShockProfile prof = shock_profile(model, 2.0, fan, field);
            const auto& xs = prof.table().nodes();
            double prev = std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < xs.size(); k += 4) {
                const double lam =
                    eigensystem(model, prof.table().node_value(k)).lambdas[field - 1];
                REQUIRE(lam < prev + 1e-13);
                prev = lam;
            }
            CHECK((prof.value(-prof.span()) - fan.states[field - 1]).norm() < 1e-8);
            CHECK((prof.value(prof.span()) - fan.states[field]).norm() < 1e-8);
        }
    }
}

TEST_CASE("derivative bound |d lambda/d xi| <= C |phi'| along profiles") {
    const FluxModel model = make_euler(1.4);
    const WaveFan fan = euler_fan(0.05);
    for (int field : {1, 3}) {
        const ShockProfile prof = shock_profile(model, 2.0, fan, field);
        double C = 0.0;
        const double dphi_floor = 1e-8 * prof.deriv(0.0).norm();
        for (double xi = -15.0 * prof.width(); xi <= 15.0 * prof.width();
             xi += 0.11 * prof.width()) {
            const double h = 1e-3 * prof.width();
            const double lam_p = eigensystem(model, prof.value(xi + h)).lambdas[field - 1];
            const double lam_m = eigensystem(model, prof.value(xi - h)).lambdas[field - 1];
            const double dlam = std::abs(lam_p - lam_m) / (2.0 * h);
            const double dphi = prof.deriv(xi).norm();
            if (dphi > dphi_floor) C = std::max(C, dlam / dphi);
        }
        CHECK(C > 0.0);
        CHECK(std::isfinite(C));
        CHECK(C < 10.0); // O(1) for weak waves
    }
}

TEST_CASE("tail decay rates scale linearly with the wave strength") {
    const FluxModel model = make_euler(1.4);
    std::vector<double> strengths = {0.025, 0.05, 0.1};
    for (int field : {1, 3}) {
        std::vector<double> ratios;
        for (double strength : strengths) {
            const WaveFan fan = euler_fan(strength);
            const ShockProfile prof = shock_profile(model, 2.0, fan, field);
            const double rate = 0.5 * (prof.fitted_rate_left() + prof.fitted_rate_right());
            ratios.push_back(rate / fan.strengths[field - 1]);
        }
        const double rmin = *std::min_element(ratios.begin(), ratios.end());
        const double rmax = *std::max_element(ratios.begin(), ratios.end());
        CHECK(rmax / rmin < 1.3);
    }
}

TEST_CASE("second-derivative bound |phi''| <= C delta |phi'|") {
    const FluxModel model = make_euler(1.4);
    const WaveFan fan = euler_fan(0.05);
    const ShockProfile prof = shock_profile(model, 2.0, fan, 3);
    const double delta = fan.strengths[2];
    double C = 0.0;
    const double dphi_floor = 1e-10 * prof.deriv(0.0).norm();
    for (double xi = -2.0 * prof.width(); xi <= 2.0 * prof.width(); xi += 0.13 * prof.width()) {
        const double dphi = prof.deriv(xi).norm();
        if (dphi > dphi_floor) C = std::max(C, prof.second(xi).norm() / (delta * dphi));
    }
    CHECK(std::isfinite(C));
    CHECK(C < 50.0);
}
