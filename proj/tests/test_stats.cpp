#include <algorithm>
#include <cmath>
#include <doctest.h>

#include "crit/errors.hpp"
#include "crit/rng.hpp"
#include "crit/stats.hpp"
#include "test_support.hpp"

using namespace crit;
using namespace crit::stats;

TEST_CASE("KS distance against the exponential target") {
    // plug-in quantiles of the target itself: D <= 1/(2m)
    auto q = testsupport::exp_quantile_sample(1000);
    auto r = ks_vs_exponential(q);
    CHECK(r.ks_distance <= 0.5 / 1000.0 + 1e-12);
    CHECK(r.p_value > 0.999);

    // degenerate point mass at 1
    std::vector<double> ones(100, 1.0);
    auto d = ks_vs_exponential(ones);
    CHECK(d.ks_distance == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));

    std::vector<double> seven(7, 0.5);
    CHECK_THROWS_AS(ks_vs_exponential(seven), Error);
}

TEST_CASE("KS distance is permutation invariant") {
    auto q = testsupport::exp_quantile_sample(257);
    auto base = ks_vs_exponential(q);
    SplitMix64 rng(11);
    for (int round = 0; round < 3; ++round) {
        for (size_t i = q.size(); i > 1; --i) std::swap(q[i - 1], q[rng() % i]);
        CHECK(ks_vs_exponential(q).ks_distance == base.ks_distance);
    }
}

TEST_CASE("seeded true-exponential trials rarely exceed the 1% critical value") {
    const long m = 10000;
    const double critical = 1.63 / std::sqrt(static_cast<double>(m));
    int exceedances = 0;
    for (int trial = 0; trial < 200; ++trial) {
        SplitMix64 rng(1000 + trial);
        std::vector<double> sample;
        sample.reserve(m);
        for (long i = 0; i < m; ++i) sample.push_back(exponential1(rng));
        if (ks_vs_exponential(std::move(sample)).ks_distance > critical) ++exceedances;
    }
    CHECK(exceedances <= 4);
}

TEST_CASE("empirical moment tables") {
    std::vector<double> ones(64, 1.0);
    auto table = empirical_moments_ci(ones, 3);
    for (const auto& mo : table) {
        CHECK(mo.mean == doctest::Approx(1.0));
        CHECK(mo.half_width == doctest::Approx(0.0));
    }

    auto q = testsupport::exp_quantile_sample(100000);
    auto big = empirical_moments_ci(q, 3);
    CHECK(big[1].mean >= 1.9);
    CHECK(big[1].mean <= 2.1);
    CHECK(big[2].mean >= 5.4);
    CHECK(big[2].mean <= 6.6);
    // the 3-sigma intervals contain r! for r <= 3
    CHECK(big[0].contains(1.0));
    CHECK(big[1].contains(2.0));
    CHECK(big[2].contains(6.0));

    std::vector<double> few(29, 1.0);
    CHECK_THROWS_AS(empirical_moments_ci(few, 2), Error);
    CHECK_THROWS_AS(empirical_moments_ci(ones, 7), Error);
}

TEST_CASE("sequence trends: the canonical shapes") {
    // Gamma of the worked example: (H_n - 1)/2, slow logarithmic divergence
    std::vector<double> gamma;
    double h = 0.0;
    for (long n = 1; n <= 10000; ++n) {
        h += 1.0 / static_cast<double>(n);
        gamma.push_back(0.5 * (h - 1.0));
    }
    CHECK(sequence_trend(gamma).kind == TrendKind::Diverging);

    // mu_n = (n+1)/n converges to 1
    std::vector<double> mu;
    for (long n = 1; n <= 10000; ++n) mu.push_back((static_cast<double>(n) + 1.0) / static_cast<double>(n));
    auto t = sequence_trend(mu);
    CHECK(t.kind == TrendKind::Converging);
    CHECK(t.tail_estimate == doctest::Approx(1.0).epsilon(1e-3));

    // alternating +-1 has no trend
    std::vector<double> alt;
    for (int i = 0; i < 500; ++i) alt.push_back(i % 2 == 0 ? 1.0 : -1.0);
    CHECK(sequence_trend(alt).kind == TrendKind::Inconclusive);

    // linear growth
    std::vector<double> lin;
    for (int i = 0; i < 400; ++i) lin.push_back(0.5 * i);
    CHECK(sequence_trend(lin).kind == TrendKind::Diverging);

    // constant sequence has converged
    std::vector<double> flat(64, 2.0);
    auto tf = sequence_trend(flat);
    CHECK(tf.kind == TrendKind::Converging);
    CHECK(tf.tail_estimate == doctest::Approx(2.0));

    // geometric saturation (the subcritical m_n Gamma_n shape)
    std::vector<double> sat;
    double p = 0.0;
    for (int n = 0; n < 1000; ++n) {
        p = 0.8 * p + 0.5;
        sat.push_back(p);
    }
    auto ts = sequence_trend(sat);
    CHECK(ts.kind == TrendKind::Converging);
    CHECK(ts.tail_estimate == doctest::Approx(2.5).epsilon(1e-6));

    std::vector<double> tiny(15, 1.0);
    CHECK_THROWS_AS(sequence_trend(tiny), Error);
}

TEST_CASE("decreasing-to-one sequences converge from either side") {
    std::vector<double> below;
    for (long n = 1; n <= 10000; ++n) below.push_back(static_cast<double>(n) / (static_cast<double>(n) + 1.0));
    auto t = sequence_trend(below);
    CHECK(t.kind == TrendKind::Converging);
    CHECK(t.tail_estimate == doctest::Approx(1.0).epsilon(1e-3));
}
