#include <doctest.h>

#include <stdexcept>
#include <vector>

#include "dctopo/digraph.hpp"

using namespace dctopo;

namespace {

Digraph uni_ring3() { return build_digraph(3, {{0, 1}, {1, 2}, {2, 0}}); }

Digraph complete5() {
  std::vector<std::pair<int, int>> arcs;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      if (i != j) arcs.push_back({i, j});
  return build_digraph(5, arcs);
}

Digraph k22() {
  // Bipartition {0,1} vs {2,3}, arcs both ways.
  std::vector<std::pair<int, int>> arcs;
  for (int x : {0, 1})
    for (int y : {2, 3}) {
      arcs.push_back({x, y});
      arcs.push_back({y, x});
    }
  return build_digraph(4, arcs);
}

// The synthesized 8-node degree-2 graph, arcs as constants.
Digraph diamond() {
  return build_digraph(8, {{0, 3}, {0, 4}, {1, 2}, {1, 7}, {2, 3}, {2, 4}, {3, 6}, {3, 7},
                           {4, 1}, {4, 5}, {5, 0}, {5, 1}, {6, 2}, {6, 5}, {7, 0}, {7, 6}});
}

// Independent oracle: Floyd-Warshall hop distances.
std::vector<std::vector<int>> fw_distances(const Digraph& g) {
  const int n = g.node_count();
  const int inf = 1 << 28;
  std::vector<std::vector<int>> d(n, std::vector<int>(n, inf));
  for (int i = 0; i < n; ++i) d[i][i] = 0;
  for (const auto& a : g.arcs())
    if (a.src != a.dst) d[a.src][a.dst] = 1;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
  return d;
}

}  // namespace

TEST_CASE("build_digraph assigns dense ids in input order") {
  auto g = uni_ring3();
  CHECK(g.node_count() == 3);
  CHECK(g.arc_count() == 3);
  CHECK(g.arc(0).src == 0);
  CHECK(g.arc(2).dst == 0);
  CHECK_THROWS_AS(build_digraph(2, {{0, 2}}), std::out_of_range);
}

TEST_CASE("self loops and parallel arcs are allowed") {
  auto loop = build_digraph(1, {{0, 0}});
  CHECK(loop.arc_count() == 1);
  auto multi = build_digraph(2, {{0, 1}, {0, 1}});
  CHECK(multi.out_degree(0) == 2);
  CHECK(multi.in_degree(1) == 2);
}

TEST_CASE("regular_degree") {
  CHECK(regular_degree(complete5()) == 4);
  CHECK(regular_degree(uni_ring3()) == 1);
  auto star = build_digraph(3, {{1, 0}, {2, 0}});
  CHECK(!regular_degree(star).has_value());
  // Self-loop counts once toward in and once toward out.
  auto loop = build_digraph(1, {{0, 0}});
  CHECK(regular_degree(loop) == 1);
}

TEST_CASE("transpose reverses arcs, keeps ids, and is an involution") {
  auto g = uni_ring3();
  auto gt = transpose(g);
  CHECK(gt.arc(0).src == 1);
  CHECK(gt.arc(0).dst == 0);
  CHECK(transpose(gt) == g);
}

TEST_CASE("distances_from matches Floyd-Warshall oracle") {
  for (const Digraph& g : {uni_ring3(), complete5(), k22(), diamond()}) {
    auto fw = fw_distances(g);
    for (int u = 0; u < g.node_count(); ++u) {
      auto d = distances_from(g, u);
      for (int v = 0; v < g.node_count(); ++v) CHECK(d[v] == fw[u][v]);
    }
  }
}

TEST_CASE("distances on a 5-ring") {
  auto g = build_digraph(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}});
  CHECK(distances_from(g, 0) == std::vector<int>{0, 1, 2, 3, 4});
}

TEST_CASE("unreachable nodes get the infinity sentinel") {
  auto g = build_digraph(2, {{0, 1}});
  CHECK(distances_from(g, 1)[0] == kUnreachable);
  CHECK(!strongly_connected(g));
  CHECK_THROWS_AS(diameter(g), std::domain_error);
}

TEST_CASE("diameter of Diamond is 3") { CHECK(diameter(diamond()) == 3); }

TEST_CASE("neighborhood sizes") {
  auto ring5 = build_digraph(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}});
  CHECK(neighborhood_sizes(ring5, 0) == std::vector<long>{1, 1, 1, 1});
  CHECK(neighborhood_sizes(k22(), 0) == std::vector<long>{2, 1});
  CHECK(neighborhood_sizes(complete5(), 2) == std::vector<long>{4});
  // Sums to N-1 on strongly connected graphs.
  for (int u = 0; u < 8; ++u) {
    long total = 0;
    for (long c : neighborhood_sizes(diamond(), u)) total += c;
    CHECK(total == 7);
  }
}

TEST_CASE("moore bound") {
  CHECK(moore_bound(2, 2) == 7);
  CHECK(moore_bound(4, 4) == 341);
  CHECK(moore_bound(7, 0) == 1);
  CHECK(moore_bound(1, 6) == 7);
}

TEST_CASE("verify_isomorphism") {
  auto g = uni_ring3();
  IsoMap id{{0, 1, 2}};
  CHECK(verify_isomorphism(g, g, id));
  // Reversal maps the transposed ring back onto the ring.
  IsoMap rev{{0, 2, 1}};
  CHECK(verify_isomorphism(transpose(g), g, rev));
  // K_3 vs 3-ring: arc counts differ.
  std::vector<std::pair<int, int>> k3arcs;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) k3arcs.push_back({i, j});
  CHECK(!verify_isomorphism(build_digraph(3, k3arcs), g, id));
}

TEST_CASE("skew symmetry witnesses") {
  // Rings admit the reversal witness.
  auto ring5 = build_digraph(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}});
  auto r = find_skew_symmetry(ring5);
  REQUIRE(r.status == SkewSearchStatus::Found);
  CHECK(verify_isomorphism(transpose(ring5), ring5, *r.witness));

  // K_{2,2} is symmetric, so some witness (identity works) must exist.
  auto rk = find_skew_symmetry(k22());
  REQUIRE(rk.status == SkewSearchStatus::Found);
  CHECK(verify_isomorphism(transpose(k22()), k22(), *rk.witness));

  // Diamond is not skew-symmetric.
  CHECK(find_skew_symmetry(diamond()).status == SkewSearchStatus::Absent);
}

TEST_CASE("skew search budget is reported separately from absence") {
  auto g = diamond();
  auto r = find_skew_symmetry(g, 3);
  CHECK(r.status == SkewSearchStatus::BudgetExceeded);
}
