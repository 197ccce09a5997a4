#include <cmath>
#include <doctest.h>

#include "crit/errors.hpp"
#include "crit/ode.hpp"

using namespace crit;

TEST_CASE("adaptive simpson on smooth integrands") {
    auto sq = [](double x) { return x * x; };
    CHECK(adaptive_simpson(sq, 0.0, 1.0, 1e-12) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

    auto s = [](double x) { return std::sin(x); };
    CHECK(adaptive_simpson(s, 0.0, std::acos(-1.0), 1e-12) == doctest::Approx(2.0).epsilon(1e-11));

    CHECK(adaptive_simpson(sq, 2.0, 2.0, 1e-12) == 0.0);
}

TEST_CASE("adaptive simpson reports an unreachable tolerance") {
    auto rough = [](double x) { return 1.0 / std::sqrt(std::abs(x - 0.3141) + 1e-300); };
    CHECK_THROWS_AS(adaptive_simpson(rough, 0.0, 1.0, 1e-14, 6), Error);
    try {
        adaptive_simpson(rough, 0.0, 1.0, 1e-14, 6);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::QuadratureFailure);
    }
}

TEST_CASE("rk4 path on exponential growth") {
    OdeField f = [](double, std::span<const double> y, std::span<double> dy) { dy[0] = y[0]; };
    auto rows = rk4_path(f, {1.0}, {0.0, 0.5, 1.0});
    CHECK(rows[2][0] == doctest::Approx(std::exp(1.0)).epsilon(1e-9));
    CHECK(rows[1][0] == doctest::Approx(std::exp(0.5)).epsilon(1e-9));
}

TEST_CASE("rk4 path on the rotation system") {
    OdeField f = [](double, std::span<const double> y, std::span<double> dy) {
        dy[0] = y[1];
        dy[1] = -y[0];
    };
    double pi = std::acos(-1.0);
    auto rows = rk4_path(f, {1.0, 0.0}, {0.0, pi / 2.0, pi});
    CHECK(std::abs(rows[1][0]) <= 1e-8);
    CHECK(rows[2][0] == doctest::Approx(-1.0).epsilon(1e-8));
}

TEST_CASE("halving the base step changes accepted answers below tolerance") {
    OdeField f = [](double t, std::span<const double> y, std::span<double> dy) {
        dy[0] = std::sin(t) * y[0];
    };
    OdeOptions coarse;
    OdeOptions fine;
    fine.initial_steps_per_unit = coarse.initial_steps_per_unit * 2;
    auto a = rk4_path(f, {1.0}, {0.0, 5.0}, coarse);
    auto b = rk4_path(f, {1.0}, {0.0, 5.0}, fine);
    CHECK(std::abs(a[1][0] - b[1][0]) / std::abs(b[1][0]) < 1e-6);
}

TEST_CASE("refinement that cannot converge raises StepUnderflow") {
    OdeField f = [](double, std::span<const double> y, std::span<double> dy) { dy[0] = y[0]; };
    OdeOptions opts;
    opts.rel_tol = 1e-300;
    opts.abs_tol = 0.0;
    opts.max_doublings = 3;
    CHECK_THROWS_AS(rk4_path(f, {1.0}, {0.0, 1.0}, opts), Error);
}
