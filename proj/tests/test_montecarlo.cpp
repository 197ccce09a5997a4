#include <cmath>
#include <doctest.h>

#include "crit/bd_engine.hpp"
#include "crit/errors.hpp"
#include "crit/montecarlo.hpp"
#include "crit/pgf_engine.hpp"
#include "crit/reference_models.hpp"
#include "test_support.hpp"

using namespace crit;
using namespace crit::mc;

TEST_CASE("unit offspring is frozen at 1") {
    SimConfig cfg;
    cfg.master_seed = 7;
    cfg.replicates = 100;
    cfg.checkpoints = {50};
    auto batch = simulate_discrete(OffspringSchedule::constant(1), cfg);
    for (auto z : batch.values[0]) CHECK(z == 1);
    CHECK(batch.survivor_fraction(0) == 1.0);
}

TEST_CASE("bit-for-bit reproducibility independent of thread count") {
    auto binary = discrete_reference("binary_critical");
    SimConfig serial;
    serial.master_seed = 99;
    serial.replicates = 4000;
    serial.checkpoints = {5, 20};
    serial.threads = 1;
    SimConfig parallel = serial;
    parallel.threads = 8;

    auto a = simulate_discrete(binary, serial);
    auto b = simulate_discrete(binary, parallel);
    CHECK(a.values == b.values);
    CHECK(a.excluded == b.excluded);

    auto linear = continuous_reference("linear_critical");
    SimConfig cs = serial;
    cs.checkpoints = {2.5, 5.0};
    SimConfig cp = cs;
    cp.threads = 8;
    auto ca = simulate_continuous(linear, cs);
    auto cb = simulate_continuous(linear, cp);
    CHECK(ca.values == cb.values);

    SimConfig other = serial;
    other.master_seed = 100;
    auto c = simulate_discrete(binary, other);
    CHECK(a.values != c.values);
}

TEST_CASE("discrete survivor fraction matches the exact engine") {
    auto binary = discrete_reference("binary_critical");
    SimConfig cfg;
    cfg.master_seed = 20240801;
    cfg.replicates = 100000;
    cfg.checkpoints = {10};
    auto batch = simulate_discrete(binary, cfg);

    double phi = testsupport::phi_two_atom(0.5, 10);
    double sigma = std::sqrt(phi * (1.0 - phi) / static_cast<double>(cfg.replicates));
    CHECK(std::abs(batch.survivor_fraction(0) - phi) < 4.0 * sigma);
    CHECK(batch.survivor_fraction(0) == doctest::Approx(0.1389).epsilon(0.03));
}

TEST_CASE("discrete sample mean matches m_n with an exact-variance band") {
    auto paper = discrete_reference("paper_example");
    SimConfig cfg;
    cfg.master_seed = 31337;
    cfg.replicates = 10000;
    cfg.checkpoints = {10};
    auto batch = simulate_discrete(paper, cfg);

    auto fm = pgf::factorial_moment_curve(paper, 10, 2, {10});
    double m = fm.value(0, 1);
    double var = fm.value(0, 2) + m - m * m; // E Z^2 - m^2
    double mean = 0.0;
    for (auto z : batch.values[0]) mean += static_cast<double>(z);
    mean /= static_cast<double>(cfg.replicates);
    CHECK(std::abs(mean - 10.0) < 4.0 * std::sqrt(var / static_cast<double>(cfg.replicates)));
    CHECK(m == doctest::Approx(10.0).epsilon(1e-12));
}

TEST_CASE("continuous thinning: frozen and linear-critical checks") {
    auto frozen = RateSchedule::constant({{-1, 0.0}, {1, 0.0}});
    SimConfig cfg;
    cfg.master_seed = 5;
    cfg.replicates = 200;
    cfg.checkpoints = {1.0, 3.0};
    auto batch = simulate_continuous(frozen, cfg);
    for (const auto& col : batch.values)
        for (auto z : col) CHECK(z == 1);

    auto linear = continuous_reference("linear_critical");
    SimConfig big;
    big.master_seed = 424242;
    big.replicates = 100000;
    big.checkpoints = {5.0, 10.0};
    auto lb = simulate_continuous(linear, big);

    double phi10 = 1.0 / 11.0;
    double sigma10 = std::sqrt(phi10 * (1.0 - phi10) / static_cast<double>(big.replicates));
    CHECK(std::abs(lb.survivor_fraction(1) - phi10) < 4.0 * sigma10);

    // survivor-conditioned mean at t = 5 is M/phi = 6
    lb.normalizers[0] = 1.0;
    auto survivors = conditioned_scaled_samples(lb, 0);
    double mean = 0.0, var = 0.0;
    for (double x : survivors) mean += x;
    mean /= static_cast<double>(survivors.size());
    for (double x : survivors) var += (x - mean) * (x - mean);
    var /= static_cast<double>(survivors.size());
    CHECK(std::abs(mean - 6.0) < 4.0 * std::sqrt(var / static_cast<double>(survivors.size())));
}

TEST_CASE("conditioned scaled samples") {
    SimConfig cfg;
    cfg.master_seed = 1;
    cfg.replicates = 50;
    cfg.checkpoints = {10};
    auto batch = simulate_discrete(OffspringSchedule::constant(1), cfg);
    batch.normalizers[0] = 1.0;
    auto scaled = conditioned_scaled_samples(batch, 0);
    CHECK(scaled.size() == 50);
    for (double x : scaled) CHECK(x == 1.0);

    // all-extinct batch raises NoSurvivors
    auto dying = OffspringSchedule::table({1.0});
    SimConfig dcfg;
    dcfg.master_seed = 2;
    dcfg.replicates = 20;
    dcfg.checkpoints = {3};
    auto dead = simulate_discrete(dying, dcfg);
    dead.normalizers[0] = 1.0;
    CHECK_THROWS_AS(conditioned_scaled_samples(dead, 0), Error);
    try {
        conditioned_scaled_samples(dead, 0);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NoSurvivors);
    }
}

TEST_CASE("binomial fast path and generic inverse-CDF sampling agree in law") {
    auto binary = discrete_reference("binary_critical");
    SimConfig fast;
    fast.master_seed = 1001;
    fast.replicates = 100000;
    fast.checkpoints = {10};
    SimConfig generic = fast;
    generic.master_seed = 2002;
    generic.force_generic_sampling = true;

    auto a = simulate_discrete(binary, fast);
    auto b = simulate_discrete(binary, generic);
    std::vector<double> xa, xb;
    for (auto z : a.values[0]) xa.push_back(static_cast<double>(z));
    for (auto z : b.values[0]) xb.push_back(static_cast<double>(z));
    CHECK(testsupport::ks_two_sample(xa, xb) < 0.01);
}

TEST_CASE("wide-support law: inverse-CDF sampling tracks the exact engine") {
    auto wide = OffspringSchedule::table({0.35, 0.3, 0.2, 0.1, 0.05});
    SimConfig cfg;
    cfg.master_seed = 86753;
    cfg.replicates = 50000;
    cfg.checkpoints = {8};
    auto batch = simulate_discrete(wide, cfg);

    pgf::DiscreteCurveOptions copts;
    copts.phi_checkpoints = {8};
    auto curves = pgf::discrete_curves(wide, 8, copts);
    double phi = curves.phi.back();
    double sigma = std::sqrt(phi * (1.0 - phi) / static_cast<double>(cfg.replicates));
    CHECK(std::abs(batch.survivor_fraction(0) - phi) < 4.0 * sigma);

    // sample mean against m_8 with the exact variance from the jet engine
    auto fm = pgf::factorial_moment_curve(wide, 8, 2, {8});
    double m = fm.value(0, 1);
    double var = fm.value(0, 2) + m - m * m;
    double mean = 0.0;
    for (auto z : batch.values[0]) mean += static_cast<double>(z);
    mean /= static_cast<double>(cfg.replicates);
    CHECK(std::abs(mean - m) < 4.0 * std::sqrt(var / static_cast<double>(cfg.replicates)));
}

TEST_CASE("population cap excludes runaway replicates with a count") {
    auto doubling = OffspringSchedule::table({0.0, 0.0, 1.0});
    SimConfig cfg;
    cfg.master_seed = 3;
    cfg.replicates = 10;
    cfg.checkpoints = {40};
    cfg.population_cap = 1000.0;
    auto batch = simulate_discrete(doubling, cfg);
    CHECK(batch.excluded_count == 10);
    CHECK(batch.active_replicates() == 0);

    // supercritical continuous model: the event budget runs out the same way
    auto growing = RateSchedule::constant({{-1, 0.1}, {2, 2.0}});
    SimConfig ccfg;
    ccfg.master_seed = 4;
    ccfg.replicates = 10;
    ccfg.checkpoints = {30.0};
    ccfg.population_cap = 500.0;
    auto cbatch = simulate_continuous(growing, ccfg);
    CHECK(cbatch.excluded_count > 0);
}

TEST_CASE("continuous simulator matches master-equation conditioned moments") {
    auto linear = continuous_reference("linear_critical");
    SimConfig cfg;
    cfg.master_seed = 90210;
    cfg.replicates = 100000;
    cfg.checkpoints = {5.0, 10.0};
    auto batch = simulate_continuous(linear, cfg);

    for (int c = 0; c < 2; ++c) {
        double t = cfg.checkpoints[c];
        auto oracle = bd::master_equation_oracle(linear, t, 400);
        double phi = oracle.survival();
        double target_mean = oracle.moment(1) / phi;   // E[Z | Z != 0]
        double target_second = oracle.moment(2) / phi; // E[Z^2 | Z != 0]

        batch.normalizers[c] = 1.0;
        auto survivors = conditioned_scaled_samples(batch, c);
        double m = static_cast<double>(survivors.size());
        double mean = 0.0, second = 0.0;
        for (double x : survivors) {
            mean += x;
            second += x * x;
        }
        mean /= m;
        second /= m;
        double var_mean = 0.0, var_second = 0.0;
        for (double x : survivors) {
            var_mean += (x - mean) * (x - mean);
            var_second += (x * x - second) * (x * x - second);
        }
        var_mean /= m;
        var_second /= m;
        CHECK(std::abs(mean - target_mean) < 4.0 * std::sqrt(var_mean / m));
        CHECK(std::abs(second - target_second) < 4.0 * std::sqrt(var_second / m));
    }
}

TEST_CASE("continuous survivor fraction for the two-birth model") {
    auto two = continuous_reference("two_birth");
    SimConfig cfg;
    cfg.master_seed = 777;
    cfg.replicates = 50000;
    cfg.checkpoints = {5.0};
    auto batch = simulate_continuous(two, cfg);
    double phi = bd::survival_backward(two, 0.0, 5.0);
    double sigma = std::sqrt(phi * (1.0 - phi) / static_cast<double>(cfg.replicates));
    CHECK(std::abs(batch.survivor_fraction(0) - phi) < 4.0 * sigma);
}
