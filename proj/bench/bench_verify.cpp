// Compares the serial reference runner against the OpenMP runner on the
// trial-parallel suites and the blocked spectral integral. Both paths must
// return identical results; only the wall time differs.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "frechet/distribution.hpp"
#include "frechet/risk_measures.hpp"
#include "frechet/verify.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace frechet;

namespace {

template <typename Fn>
double time_seconds(Fn&& fn) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void row(const char* name, double serial_s, double parallel_s, bool identical) {
    std::printf("%-24s %10.3fs %10.3fs %8.2fx   %s\n", name, serial_s, parallel_s,
                serial_s / parallel_s, identical ? "identical" : "MISMATCH");
}

} // namespace

int main(int argc, char** argv) {
    const int trials = argc > 1 ? std::atoi(argv[1]) : 2000;
    const long steps = argc > 2 ? std::atol(argv[2]) : 20000000;

#ifdef _OPENMP
    std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP disabled at build time; both columns run serially\n");
#endif
    std::printf("%-24s %11s %11s %9s\n", "kernel", "serial", "parallel", "speedup");

    for (const char* suite : {"thm11-forward", "thm12-forward", "lemma22"}) {
        std::string serial_json, parallel_json;
        const double ts = time_seconds(
            [&] { serial_json = run_named_suite(suite, 1, trials, RunMode::serial).to_json(); });
        const double tp = time_seconds([&] {
            parallel_json = run_named_suite(suite, 1, trials, RunMode::parallel).to_json();
        });
        row(suite, ts, tp, serial_json == parallel_json);
    }

    const auto d = DiscreteDistribution::make({-3, -1, 0, 2, 5, 8},
                                              {0.125, 0.25, 0.1875, 0.1875, 0.125, 0.125});
    const auto g = DistortionFunction::proportional_hazard(0.5);
    double serial_value = 0.0, parallel_value = 0.0;
    const double ts = time_seconds([&] { serial_value = rho_spectral_serial(g, d, steps); });
    const double tp = time_seconds([&] { parallel_value = rho_spectral(g, d, steps); });
    row("rho_spectral", ts, tp, serial_value == parallel_value);
    return 0;
}
