#include <cmath>
#include <doctest.h>

#include "crit/bd_engine.hpp"
#include "crit/errors.hpp"
#include "crit/reference_models.hpp"
#include "crit/rng.hpp"

using namespace crit;
using namespace crit::bd;

namespace {

RateSchedule zero_rates() { return RateSchedule::constant({{-1, 0.0}, {1, 0.0}}); }

RateSchedule pure_death() { return RateSchedule::constant({{-1, 1.0}}); }

} // namespace

TEST_CASE("mean and gamma: closed forms") {
    auto linear = continuous_reference("linear_critical");
    auto mg = mean_and_gamma(linear, TimeGrid::uniform(5.0, 10));
    for (double m : mg.M) CHECK(m == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(mg.Gamma.back() == doctest::Approx(5.0).epsilon(1e-10));

    auto death = mean_and_gamma(pure_death(), TimeGrid::uniform(1.0, 4));
    CHECK(death.M.back() == doctest::Approx(std::exp(-1.0)).epsilon(1e-10));
    CHECK(death.Gamma.back() == doctest::Approx((std::exp(1.0) - 1.0) / 2.0).epsilon(1e-9));

    auto frozen = mean_and_gamma(zero_rates(), TimeGrid::uniform(3.0, 6));
    for (double m : frozen.M) CHECK(m == doctest::Approx(1.0));
    CHECK(frozen.Gamma.back() == 0.0);
}

TEST_CASE("moment curves solve the triangular system") {
    auto linear = continuous_reference("linear_critical");
    auto mc = moment_curves(linear, TimeGrid::uniform(5.0, 10), 3);
    CHECK(mc.values.back()[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(mc.values.back()[1] == doctest::Approx(11.0).epsilon(1e-8));  // M2 = 1 + 2t
    CHECK(mc.values.back()[2] == doctest::Approx(181.0).epsilon(1e-8)); // M3 = 1 + 6t + 6t^2

    auto frozen = moment_curves(zero_rates(), TimeGrid::uniform(4.0, 8), 4);
    for (const auto& row : frozen.values)
        for (double v : row) CHECK(v == doctest::Approx(1.0));
}

TEST_CASE("backward survival: riccati and pure-death closed forms") {
    auto linear = continuous_reference("linear_critical");
    CHECK(survival_backward(linear, 0.0, 4.0) == doctest::Approx(0.2).epsilon(1e-8));
    CHECK(survival_backward(linear, 2.0, 2.0) == 1.0);
    CHECK(survival_backward(pure_death(), 0.0, 3.0) == doctest::Approx(std::exp(-3.0)).epsilon(1e-8));
}

TEST_CASE("survival slice matches 1/(1+t-s) on the whole grid") {
    auto linear = continuous_reference("linear_critical");
    auto slice = survival_slice(linear, 10.0, TimeGrid::uniform(10.0, 20));
    for (size_t i = 0; i < slice.s.size(); ++i) {
        double expected = 1.0 / (1.0 + 10.0 - slice.s[i]);
        CHECK(slice.phi[i] == doctest::Approx(expected).epsilon(1e-8));
    }
    CHECK(slice.max_domain_escape <= 1e-9);
}

TEST_CASE("second-order bounds coincide for the linear model and bracket otherwise") {
    auto linear = continuous_reference("linear_critical");
    auto cm = survival_bounds(linear, 10.0);
    CHECK(cm.second_order_lower == doctest::Approx(1.0 / 11.0).epsilon(1e-9));
    CHECK(cm.second_order_upper == doctest::Approx(1.0 / 11.0).epsilon(1e-9));
    CHECK(cm.exact_phi == doctest::Approx(1.0 / 11.0).epsilon(1e-8));
    CHECK(cm.formula_residual < 1e-8);
    CHECK(std::abs(cm.second_order_upper - cm.second_order_lower) < 1e-9);

    auto frozen = survival_bounds(zero_rates(), 3.0);
    CHECK(frozen.exact_phi == doctest::Approx(1.0));
    CHECK(frozen.second_order_lower == doctest::Approx(1.0));
    CHECK(frozen.second_order_upper == doctest::Approx(1.0));

    // a genuinely nonlinear g'': the bracket opens but still contains phi
    auto wide = RateSchedule::constant({{-1, 1.0}, {1, 1.0}, {2, 0.1}});
    auto cmw = survival_bounds(wide, 5.0);
    CHECK(cmw.second_order_upper - cmw.second_order_lower > 1e-4);
    CHECK(cmw.second_order_lower <= cmw.exact_phi + 1e-9);
    CHECK(cmw.exact_phi <= cmw.second_order_upper + 1e-9);
    CHECK(cmw.formula_residual < 1e-6);

    auto narrow = survival_bounds(RateSchedule::constant({{-1, 1.0}, {1, 1.0}, {2, 0.0}}), 5.0);
    CHECK(narrow.second_order_upper - narrow.second_order_lower < 1e-9);
}

TEST_CASE("gamma identity residual vanishes") {
    auto linear = continuous_reference("linear_critical");
    CHECK(gamma_identity_residual(linear, 7.0) < 1e-8);
    CHECK(gamma_identity_residual(zero_rates(), 5.0) <= 1e-12);

    std::map<int, Expression> exprs;
    exprs.emplace(-1, Expression::constant(1.0));
    exprs.emplace(1, Expression::parse("1/(1+t)"));
    RateSchedule decaying(1, std::move(exprs));
    CHECK(gamma_identity_residual(decaying, 3.0) < 1e-8);
}

TEST_CASE("master equation oracle: closed-form cross-checks") {
    auto linear = continuous_reference("linear_critical");
    auto r = master_equation_oracle(linear, 10.0, 400);
    CHECK(r.survival() == doctest::Approx(1.0 / 11.0).epsilon(1e-3));
    CHECK(std::abs(r.survival() - 1.0 / 11.0) < 1e-4);
    CHECK_FALSE(r.truncation_warning);

    auto frozen = master_equation_oracle(zero_rates(), 2.0, 16);
    CHECK(frozen.p[1] == doctest::Approx(1.0));

    auto r5 = master_equation_oracle(linear, 5.0, 400);
    CHECK(std::abs(r5.moment(1) - 1.0) < 1e-4);
    CHECK(std::abs(r5.moment(2) - 11.0) < 1e-3);

    // a starved state space reports its leak
    auto tight = master_equation_oracle(linear, 10.0, 20);
    CHECK(tight.leaked_mass > 1e-6);
    CHECK(tight.truncation_warning);
}

TEST_CASE("backward equation agrees with the master equation for expression rates") {
    auto drift = continuous_reference("decaying_drift");
    auto oracle = master_equation_oracle(drift, 5.0, 300);
    double phi = survival_backward(drift, 0.0, 5.0);
    CHECK(std::abs(phi - oracle.survival()) < 1e-4);
}

TEST_CASE("property: random constant-rate models keep every invariant") {
    crit::SplitMix64 rng(24601);
    for (int trial = 0; trial < 8; ++trial) {
        int max_jump = 1 + static_cast<int>(rng() % 3);
        std::map<int, double> r;
        r[-1] = 0.3 + uniform01(rng);
        for (int k = 1; k <= max_jump; ++k) r[k] = uniform01(rng) * 0.6 / max_jump;
        auto rates = RateSchedule::constant(r);

        double t = 3.0;
        auto bounds = survival_bounds(rates, t);
        // the second-order bracket is ordered and contains the exact value
        CHECK(bounds.second_order_lower <= bounds.second_order_upper + 1e-12);
        CHECK(bounds.second_order_lower <= bounds.exact_phi + 1e-8);
        CHECK(bounds.exact_phi <= bounds.second_order_upper + 1e-8);
        // the exact survival formula is an identity
        CHECK(bounds.formula_residual < 1e-6);
        // the moment-integral identity holds
        CHECK(gamma_identity_residual(rates, t) < 1e-8);
        // and the master equation sees the same survival probability
        auto oracle = master_equation_oracle(rates, t, 600);
        CHECK(std::abs(bounds.exact_phi - oracle.survival()) < 1e-4 + oracle.leaked_mass);
    }
}

TEST_CASE("quadrature mean and first-moment ODE agree on two routes") {
    // M from exp(int E X) by quadrature; M_1 from the moment ODE system.
    auto drift = continuous_reference("decaying_drift");
    auto grid = TimeGrid::uniform(10.0, 20);
    auto mg = mean_and_gamma(drift, grid);
    auto mc = moment_curves(drift, grid, 1);
    for (size_t i = 0; i < grid.size(); ++i) {
        double closed = 1.0 + grid.knots[i]; // exp(int 1/(1+s)) = 1 + t
        CHECK(mg.M[i] == doctest::Approx(closed).epsilon(1e-9));
        CHECK(mc.values[i][0] == doctest::Approx(closed).epsilon(1e-8));
    }
}

TEST_CASE("limit diagnostics on the linear model") {
    auto linear = continuous_reference("linear_critical");
    auto diag = limit_diagnostics_continuous(linear, TimeGrid::uniform(100.0, 100), 3);
    CHECK_FALSE(diag.not_applicable);
    CHECK(diag.phi_gamma.back() == doctest::Approx(100.0 / 101.0).epsilon(1e-6));
    CHECK(diag.ratios.back()[0] == doctest::Approx(2.01).epsilon(1e-4));
    CHECK(diag.ratios.back()[1] == doctest::Approx(6.0601).epsilon(0.03)); // within 3% of 6
    CHECK(diag.m_gamma.back() == doctest::Approx(100.0).epsilon(1e-8));

    auto frozen = limit_diagnostics_continuous(zero_rates(), TimeGrid::uniform(3.0, 16), 2);
    CHECK(frozen.not_applicable);
    CHECK(std::isnan(frozen.ratios.back()[0]));
}

TEST_CASE("grid-convergence: halving every solver step moves results below 1e-6") {
    auto two = continuous_reference("two_birth");
    OdeOptions coarse;
    OdeOptions fine;
    fine.initial_steps_per_unit = coarse.initial_steps_per_unit * 2;
    auto a = moment_curves(two, TimeGrid::uniform(5.0, 10), 3, coarse);
    auto b = moment_curves(two, TimeGrid::uniform(5.0, 10), 3, fine);
    for (size_t i = 0; i < a.values.size(); ++i)
        for (int r = 0; r < 3; ++r)
            CHECK(std::abs(a.values[i][r] - b.values[i][r]) / std::abs(b.values[i][r]) < 1e-6);

    double pa = survival_backward(two, 0.0, 10.0, coarse);
    double pb = survival_backward(two, 0.0, 10.0, fine);
    CHECK(std::abs(pa - pb) / pb < 1e-6);
}
