#include <gtest/gtest.h>

#include <algorithm>
#include <chrono>

#include "kpip/rng.hpp"
#include "kpip/twosat.hpp"

using namespace kpip;
using namespace kpip::twosat;

namespace {

bool brute_force(const Formula& f) {
  std::vector<bool> m(f.variable_count);
  for (unsigned mask = 0; mask < (1u << f.variable_count); ++mask) {
    for (int i = 0; i < f.variable_count; ++i) m[i] = (mask >> i) & 1u;
    if (satisfies(f, m)) return true;
  }
  return false;
}

Formula random_formula(Rng& rng) {
  Formula f(1 + static_cast<int>(rng.below(12)));
  int m = static_cast<int>(rng.below(4 * f.variable_count + 1));
  auto lit = [&] { return Literal{static_cast<int>(rng.below(f.variable_count)), rng.below(2) == 0}; };
  for (int i = 0; i < m; ++i) f.add(lit(), lit());
  return f;
}

Formula chain(int n) {
  Formula f(n);
  for (int i = 0; i + 1 < n; ++i) f.add(neg(i), pos(i + 1));
  f.add(pos(0), pos(0));
  return f;
}

}  // namespace

TEST(TwoSat, SmallSatisfiable) {
  Formula f(2);
  f.add(pos(0), pos(1));
  f.add(neg(0), pos(1));
  f.add(pos(0), neg(1));
  auto m = solve(f);
  ASSERT_TRUE(m);
  EXPECT_TRUE(satisfies(f, *m));
  EXPECT_TRUE((*m)[0]);
  EXPECT_TRUE((*m)[1]);
}

TEST(TwoSat, Contradiction) {
  Formula f(1);
  f.add(pos(0), pos(0));
  f.add(neg(0), neg(0));
  EXPECT_FALSE(solve(f));
}

TEST(TwoSat, Empty) {
  Formula f(3);
  auto m = solve(f);
  ASSERT_TRUE(m);
  EXPECT_EQ(m->size(), 3u);
  EXPECT_TRUE(solve(Formula(0)));
}

TEST(TwoSat, Deterministic) {
  Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    auto f = random_formula(rng);
    EXPECT_EQ(solve(f), solve(f));
  }
}

TEST(TwoSat, AgreesWithBruteForce) {
  Rng rng(2024);
  for (int i = 0; i < 1000; ++i) {
    auto f = random_formula(rng);
    auto m = solve(f);
    ASSERT_EQ(m.has_value(), brute_force(f)) << "formula " << i;
    if (m) EXPECT_TRUE(satisfies(f, *m));
  }
}

TEST(TwoSat, ChainScalesLinearly) {
  auto time = [](int n) {
    auto f = chain(n);
    auto t0 = std::chrono::steady_clock::now();
    auto m = solve(f);
    auto t1 = std::chrono::steady_clock::now();
    EXPECT_TRUE(m && satisfies(f, *m));
    return std::chrono::duration<double>(t1 - t0).count();
  };
  auto median = [&](int n) {
    std::vector<double> runs;
    for (int i = 0; i < 5; ++i) runs.push_back(time(n));
    std::sort(runs.begin(), runs.end());
    return runs[2];
  };
  double small = std::max(median(100000), 1e-3);
  double large = median(1000000);
  EXPECT_LE(large, 10 * small) << small << "s vs " << large << "s";
}
