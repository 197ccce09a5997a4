// Serial-vs-OpenMP comparison for the data-parallel kernels: Monte Carlo
// replicates, survival checkpoint passes, and per-target backward sweeps.
// The serial runs double as a reference: results must match bit for bit.

#include <chrono>
#include <cstdio>
#include <functional>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "crit/bd_engine.hpp"
#include "crit/montecarlo.hpp"
#include "crit/pgf_engine.hpp"
#include "crit/reference_models.hpp"

using namespace crit;

namespace {

double time_once(const std::function<void()>& fn) {
    auto start = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void report(const char* name, double serial, double parallel, bool identical) {
    std::printf("%-34s serial %8.3fs  omp(%d) %8.3fs  speedup %5.2fx  identical %s\n", name, serial,
                max_threads(), parallel, serial / parallel, identical ? "yes" : "NO");
}

} // namespace

int main() {
    std::printf("kernel benchmark, %d threads available\n\n", max_threads());

    {
        auto binary = discrete_reference("binary_critical");
        mc::SimConfig cfg;
        cfg.master_seed = 11;
        cfg.replicates = 200000;
        cfg.checkpoints = {200};
        mc::SampleBatch a, b;
        cfg.threads = 1;
        double ts = time_once([&] { a = mc::simulate_discrete(binary, cfg); });
        cfg.threads = 0;
        double tp = time_once([&] { b = mc::simulate_discrete(binary, cfg); });
        report("discrete MC (2e5 reps, n=200)", ts, tp, a.values == b.values);
    }
    {
        auto linear = continuous_reference("linear_critical");
        mc::SimConfig cfg;
        cfg.master_seed = 12;
        cfg.replicates = 100000;
        cfg.checkpoints = {10.0};
        mc::SampleBatch a, b;
        cfg.threads = 1;
        double ts = time_once([&] { a = mc::simulate_continuous(linear, cfg); });
        cfg.threads = 0;
        double tp = time_once([&] { b = mc::simulate_continuous(linear, cfg); });
        report("continuous MC (1e5 reps, t=10)", ts, tp, a.values == b.values);
    }
    {
        auto paper = discrete_reference("paper_example");
        pgf::DiscreteCurves a, b;
        pgf::DiscreteCurveOptions opts;
        opts.threads = 1;
        double ts = time_once([&] { a = pgf::discrete_curves(paper, 5000, opts); });
        opts.threads = 0;
        double tp = time_once([&] { b = pgf::discrete_curves(paper, 5000, opts); });
        report("survival curve (N=5000, full phi)", ts, tp, a.phi == b.phi);
    }
    {
        auto two = continuous_reference("two_birth");
        auto grid = TimeGrid::uniform(50.0, 100);
        bd::ContinuousDiagnostics a, b;
        double ts = time_once([&] { a = bd::limit_diagnostics_continuous(two, grid, 3, {}, 1); });
        double tp = time_once([&] { b = bd::limit_diagnostics_continuous(two, grid, 3, {}, 0); });
        report("backward sweeps (100 targets)", ts, tp, a.phi == b.phi);
    }
    return 0;
}
