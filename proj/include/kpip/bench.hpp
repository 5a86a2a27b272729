#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <vector>

#include "kpip/instance_io.hpp"
#include "kpip/plane_graph.hpp"
#include "kpip/tri_insert.hpp"

namespace kpip::bench {

struct Sample {
  int n = 0;
  double millis = 0;  // median over the runs
};

/// Stacked triangulation on n vertices with up to n/10 apex-pair F-edges, feasible, k = 1.
inline Instance scaling_instance(int n, std::uint64_t seed) {
  PlaneGraph g = generate_stacked_triangulation(n, seed);
  auto F = sample_disjoint_apex_pairs(g, std::max(1, n / 10), seed + 1);
  return make_instance(std::move(g), std::move(F), 1);
}

inline double median_solve_millis(const Instance& inst, int runs) {
  std::vector<double> times;
  for (int r = 0; r < runs; ++r) {
    const auto start = std::chrono::steady_clock::now();
    auto res = tri::solve(inst);
    const auto stop = std::chrono::steady_clock::now();
    (void)res;
    times.push_back(std::chrono::duration<double, std::milli>(stop - start).count());
  }
  std::sort(times.begin(), times.end());
  return times[times.size() / 2];
}

/// Instance generation is not timed.
inline std::vector<Sample> solve_scaling(const std::vector<int>& sizes, int runs = 5, std::uint64_t seed = 1) {
  std::vector<Sample> out;
  for (int n : sizes) out.push_back({n, median_solve_millis(scaling_instance(n, seed), runs)});
  return out;
}

/// 1000, 10000, ... up to max_n, plus max_n itself.
inline std::vector<int> decades(int max_n) {
  std::vector<int> out;
  for (long long n = 1000; n <= max_n; n *= 10) out.push_back(static_cast<int>(n));
  if (out.empty() || out.back() != max_n) out.push_back(max_n);
  return out;
}

}  // namespace kpip::bench
