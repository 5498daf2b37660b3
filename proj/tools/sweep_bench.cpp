// Times the threshold sweep: serial reference vs the OpenMP kernel.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <utility>
#include <vector>

#include "kmit/tightness.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using clock_type = std::chrono::steady_clock;

static double ms_since(clock_type::time_point t0) {
    return std::chrono::duration<double, std::milli>(clock_type::now() - t0).count();
}

int main(int argc, char** argv) {
    int n = argc > 1 ? std::atoi(argv[1]) : 24;
    double tol = 1e-6;
    int phi_steps = 30;

    std::vector<std::pair<double, double>> samples;
    samples.reserve(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            samples.emplace_back((i + 0.5) / n, (j + 0.5) / n);

    std::vector<double> serial(samples.size()), parallel(samples.size());

    auto t0 = clock_type::now();
    kmit::lambda_tilde_sweep_serial(samples, tol, phi_steps, serial);
    double t_serial = ms_since(t0);

    t0 = clock_type::now();
    kmit::lambda_tilde_sweep_parallel(samples, tol, phi_steps, parallel);
    double t_parallel = ms_since(t0);

    bool identical = serial == parallel;

#ifdef _OPENMP
    int threads = omp_get_max_threads();
#else
    int threads = 1;
#endif
    std::printf("threshold sweep over %dx%d grid, %d angles, tol %.1e\n", n, n, phi_steps, tol);
    std::printf("serial   : %10.2f ms\n", t_serial);
    std::printf("parallel : %10.2f ms  (%d threads)\n", t_parallel, threads);
    std::printf("speedup  : %10.2fx\n", t_serial / t_parallel);
    std::printf("outputs  : %s\n", identical ? "identical" : "MISMATCH");
    return identical ? 0 : 1;
}
