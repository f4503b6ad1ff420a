// Timing comparison of the FFT/OpenMP kernels against the serial naive-DFT
// reference at a few transform sizes. Not part of the test suite.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>

#include "fkdv/petviashvili.hpp"
#include "fkdv/spectral.hpp"

using namespace fkdv;

namespace {

double time_ms(const std::function<void()>& fn, int reps) {
    const auto t0 = std::chrono::steady_clock::now();
    for (int r = 0; r < reps; ++r) fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

Field test_field(const GridPtr& grid) {
    Field f(grid);
    for (std::size_t j = 0; j < f.size(); ++j) {
        const double x = grid->node(j);
        const double s = 1.0 / std::cosh(0.5 * x);
        f[j] = 3.0 * s * s;
    }
    return f;
}

} // namespace

int main() {
    const DispersionSymbol symbol = DispersionSymbol::fractional(0.7);
    std::printf("%8s %6s %18s %18s %10s\n", "N", "reps", "parallel (ms)",
                "serial ref (ms)", "speedup");
    for (std::size_t n : {1024, 4096, 16384}) {
        const GridPtr grid = make_grid(256.0, n);
        const Field f = test_field(grid);
        const int reps = n <= 4096 ? 20 : 5;
        const double par = time_ms([&] { apply_operator(f, symbol); }, reps);
        const double ser = time_ms([&] { ref::apply_operator(f, symbol); }, n <= 4096 ? 3 : 1);
        std::printf("%8zu %6d %18.3f %18.3f %9.1fx\n", n, reps, par, ser, ser / par);
    }

    // one full accelerated base step at desk scale
    const GridPtr grid = make_grid(256.0, 4096);
    ProblemSpec spec(1, 1.0, symbol, grid);
    const Field guess = initial_guess(spec);
    const double step_ms = time_ms([&] { petviashvili_step(guess, spec); }, 50);
    std::printf("\npetviashvili_step at N=4096: %.3f ms\n", step_ms);
    return 0;
}
