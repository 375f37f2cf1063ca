#include <doctest.h>

#include <random>
#include <stdexcept>

#include "dctopo/dnn_sim.hpp"

using namespace dctopo;

namespace {
constexpr double kAlpha = 10e-6;
constexpr double kB = 100e9;
}  // namespace

TEST_CASE("single layer at time zero") {
  LayerTrace t{{{0.0, 8e6}}};
  auto r = simulate(t, 3, 0.75, kAlpha, kB);
  CHECK(r.f_max == 2.0 * (kAlpha * 3 + 8e6 / kB * 0.75));
}

TEST_CASE("a late layer is not queued behind an idle window") {
  LayerTrace t{{{0.0, 8e6}, {10.0, 8e6}}};
  auto r = simulate(t, 3, 0.75, kAlpha, kB);
  CHECK(r.finish_s[1] == 10.0 + r.duration_s[1]);
}

TEST_CASE("constant-size trace stacks the recurrence exactly") {
  const int k = 17;
  LayerTrace t;
  for (int i = 0; i < k; ++i) t.layers.push_back({0.0, 64e6});
  long n = 1024;
  auto r = simulate(t, n - 1, static_cast<double>(n - 1) / n, kAlpha, kB);
  // Same-order stacked sum as an oracle.
  double f = 0.0;
  for (int i = 0; i < k; ++i)
    f += 2.0 * (kAlpha * (n - 1) + 64e6 / kB * (static_cast<double>(n - 1) / n));
  CHECK(r.f_max == f);
}

TEST_CASE("monotonicity in sizes, ready times, and costs") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> sz(1e3, 1e7), rd(0.0, 1e-3);
  LayerTrace t;
  double r0 = 0;
  for (int i = 0; i < 12; ++i) {
    r0 += rd(rng);
    t.layers.push_back({r0, sz(rng)});
  }
  auto base = simulate(t, 10, 1.0, kAlpha, kB);
  LayerTrace bigger = t;
  bigger.layers[4].size_bits *= 2;
  CHECK(simulate(bigger, 10, 1.0, kAlpha, kB).f_max >= base.f_max);
  LayerTrace later = t;
  for (auto& l : later.layers) l.ready_s += 1e-4;
  CHECK(simulate(later, 10, 1.0, kAlpha, kB).f_max >= base.f_max);
  CHECK(simulate(t, 11, 1.0, kAlpha, kB).f_max >= base.f_max);
  CHECK(simulate(t, 10, 1.1, kAlpha, kB).f_max >= base.f_max);
  CHECK(simulate(t, 10, 1.0, kAlpha * 2, kB).f_max >= base.f_max);
}

TEST_CASE("unsorted traces and empty traces") {
  LayerTrace bad{{{1.0, 8e6}, {0.5, 8e6}}};
  CHECK_THROWS_AS(simulate(bad, 1, 1.0, kAlpha, kB), std::invalid_argument);
  LayerTrace empty;
  auto r = simulate(empty, 1, 1.0, kAlpha, kB);
  CHECK(r.f_max == 0.0);
}

TEST_CASE("compare emits one row per entry with a dominated lower bound") {
  LayerTrace t;
  for (int i = 0; i < 8; ++i) t.layers.push_back({i * 1e-4, 1e6 * (i + 1)});
  std::vector<SimEntry> entries = {
      {"best", 11, 1.0},
      {"ring", 1023, 1023.0 / 1024.0},
      {"lower-bound", 5, 1023.0 / 1024.0},
  };
  auto rows = compare(t, entries, kAlpha, kB);
  REQUIRE(rows.size() == 3);
  CHECK(rows[2].f_max_s <= rows[0].f_max_s);
  CHECK(rows[2].f_max_s <= rows[1].f_max_s);
  CHECK(rows[0].f_max_s <= rows[1].f_max_s);  // best beats ring on this trace
}
