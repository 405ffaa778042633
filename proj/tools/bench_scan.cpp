// Compares the serial reference zero-set scan against the OpenMP scan:
// timings, speedup, and bitwise agreement of the classification grids.
#include <chrono>
#include <cstdio>
#include <memory>

#include "kforge/geomio.hpp"
#include "kforge/parallel.hpp"

using Clock = std::chrono::steady_clock;

static double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

int main(int argc, char** argv) {
    int nu = 1024, nv = 256;
    if (argc == 3) {
        nu = std::atoi(argv[1]);
        nv = std::atoi(argv[2]);
    }
    auto sol = std::make_shared<kforge::ProfileSolution>(
        kforge::assemble_profile(kforge::ProfileParams::defaults()));
    kforge::ImmersionMap map(sol);
    const kforge::GridSpec grid = kforge::GridSpec::full(nu, nv);

    std::printf("grid %dx%d, workers %d\n", nu, nv, kforge::worker_count());

    auto t0 = Clock::now();
    const auto serial = kforge::zero_set_scan_serial(map, grid, 1e-10);
    const double ts = seconds_since(t0);

    t0 = Clock::now();
    const auto parallel = kforge::zero_set_scan(map, grid, 1e-10);
    const double tp = seconds_since(t0);

    const bool identical = serial.classes == parallel.classes &&
                           serial.zero_count == parallel.zero_count &&
                           serial.negative_count == parallel.negative_count;
    std::printf("serial   %.3f s\n", ts);
    std::printf("parallel %.3f s  (speedup %.2fx)\n", tp, ts / tp);
    std::printf("bitwise identical: %s\n", identical ? "yes" : "NO");
    std::printf("zero %lld  positive %lld  negative %lld\n",
                static_cast<long long>(serial.zero_count),
                static_cast<long long>(serial.positive_count),
                static_cast<long long>(serial.negative_count));
    return identical ? 0 : 1;
}
