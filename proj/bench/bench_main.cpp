// Compares the OpenMP kernels against their serial references:
// the solver's support-candidate scan, the sweep harness, and polyhedron
// vertex enumeration.

#include <chrono>
#include <cstdio>
#include <vector>

#include "advclass/experiments.hpp"
#include "advclass/oracle.hpp"

using namespace advclass;

namespace {

template <typename F>
double time_s(F&& f, int reps) {
  const auto start = std::chrono::steady_clock::now();
  for (int r = 0; r < reps; ++r) f();
  const auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(stop - start).count() / reps;
}

void report(const char* name, double serial_s, double parallel_s) {
  std::printf("%-28s serial %9.4f ms   parallel %9.4f ms   speedup %.2fx\n",
              name, serial_s * 1e3, parallel_s * 1e3, serial_s / parallel_s);
}

}  // namespace

int main() {
  {
    // A binomial this large would underflow to zero tail mass, so build a
    // uniform-noise game of the same shape directly.
    ReducedGame big;
    const std::size_t n = 6001;
    big.p = 0.2;
    big.c_d = 120.0;
    big.c_fa = 140.0;
    for (std::size_t i = 0; i < n; ++i) {
      big.rewards.push_back(static_cast<double>(i));
      big.noise.push_back(1.0 / static_cast<double>(n));
      big.sources.push_back({{std::to_string(i), big.noise.back()}});
    }
    const GameMatrices m = build_matrices(big, 1.0);
    volatile double sink = 0.0;
    const double serial = time_s(
        [&] { sink = scan_support_values_serial(big, m).back().value; }, 3);
    const double parallel =
        time_s([&] { sink = scan_support_values(big, m).back().value; }, 3);
    (void)sink;
    report("candidate scan (n=6001)", serial, parallel);
  }
  {
    const ReducedGame base = binomial_game({100, 0.2, 1.0}, 0.2, 120.0, 140.0);
    std::vector<double> grid;
    for (int i = 0; i < 256; ++i) grid.push_back(40.0 + 1.25 * i);
    volatile double sink = 0.0;
    const double serial = time_s(
        [&] {
          sink = sweep_serial(base, SweepParameter::kFalseAlarmCost, grid)
                     .rows.back()
                     .defender;
        },
        3);
    const double parallel = time_s(
        [&] {
          sink = sweep(base, SweepParameter::kFalseAlarmCost, grid)
                     .rows.back()
                     .defender;
        },
        3);
    (void)sink;
    report("c_fa sweep (256 x n=101)", serial, parallel);
  }
  {
    const ReducedGame g = random_reduced_game(5);  // 2..8 levels
    const GameMatrices m = build_matrices(g, 1.0);
    volatile std::size_t sink = 0;
    const double serial =
        time_s([&] { sink = enumerate_polyhedron_vertices_serial(m).size(); }, 5);
    const double parallel =
        time_s([&] { sink = enumerate_polyhedron_vertices(m).size(); }, 5);
    (void)sink;
    report("vertex enumeration", serial, parallel);
  }
  return 0;
}
