#include <doctest.h>

#include <map>
#include <random>

#include "dctopo/base_graphs.hpp"
#include "dctopo/expansions.hpp"
#include "dctopo/sp_scheduler.hpp"

using namespace dctopo;

TEST_CASE("solve_lp on hand instances") {
  // One destination, two usable arcs: an even split, U = 1/2.
  SpLpInstance even;
  even.arc_ids = {0, 1};
  even.dests.push_back({1, {0, 1}});
  auto sol = solve_lp(even);
  CHECK(sol.objective == Rat(1, 2));
  CHECK(sol.fractions[0][0] == Rat(1, 2));
  CHECK(sol.fractions[0][1] == Rat(1, 2));

  // One destination, one arc: everything on it, U = 1.
  SpLpInstance single;
  single.arc_ids = {0, 1};
  single.dests.push_back({1, {0}});
  auto sol2 = solve_lp(single);
  CHECK(sol2.objective == Rat(1));
  CHECK(sol2.fractions[0][0] == Rat(1));

  // Three destinations on two arcs, one pinned: loads balance at 3/2.
  SpLpInstance mix;
  mix.arc_ids = {0, 1};
  mix.dests.push_back({1, {0}});
  mix.dests.push_back({2, {0, 1}});
  mix.dests.push_back({3, {0, 1}});
  auto sol3 = solve_lp(mix);
  CHECK(sol3.objective == Rat(3, 2));
}

TEST_CASE("lp text dump is well formed") {
  SpLpInstance inst;
  inst.vertex = 0;
  inst.step = 1;
  inst.arc_ids = {0, 1};
  inst.dests.push_back({1, {0, 1}});
  auto txt = lp_instance_text(inst);
  CHECK(txt.find("Minimize") != std::string::npos);
  CHECK(txt.find("Subject To") != std::string::npos);
  CHECK(txt.find("End") != std::string::npos);
}

TEST_CASE("ring LP reproduces the classic schedule") {
  auto r = build_uni_ring(1, 5);
  auto res = lp_schedule(r.graph);
  CHECK(res.cost.x == 4);
  CHECK(res.cost.y == Rat(4, 5));
  CHECK(validate(res.schedule, r.graph).ok);
  CHECK(is_shortest_path_schedule(res.schedule, r.graph));
  CHECK(check_bandwidth_optimal(res.schedule, r.graph).optimal);
  CHECK(check_sp_bandwidth_optimal(r.graph, res.schedule));
}

TEST_CASE("circulant(4,2) LP matches the hand schedule") {
  auto c = build_circulant(4, 2);
  auto res = lp_schedule(c.graph);
  CHECK(res.cost.x == 2);
  CHECK(res.cost.y == Rat(3, 4));
  // Step 1 (distance class 2): each node splits one shard across both arcs.
  CHECK(res.step_u[0] == Rat(1, 2));
  CHECK(res.step_u[1] == Rat(1));
  CHECK(validate(res.schedule, c.graph).ok);
  CHECK(check_bandwidth_optimal(res.schedule, c.graph).optimal);
}

TEST_CASE("de Bruijn LP is integral thanks to unique shortest paths") {
  auto db = build_de_bruijn(2, 3);
  auto res = lp_schedule(db.graph);
  CHECK(res.cost.x == 3);
  for (const auto& tr : res.schedule.transfers) CHECK(tr.chunk == ChunkSet::full());
  CHECK(validate(res.schedule, db.graph).ok);
  CHECK(is_shortest_path_schedule(res.schedule, db.graph));
  // Not bandwidth optimal beyond tiny dimensions.
  CHECK(!check_sp_bandwidth_optimal(db.graph, res.schedule));
  // A self-loop-free optimal case for contrast.
  auto k5 = build_complete(5);
  CHECK(check_sp_bandwidth_optimal(k5.graph, lp_schedule(k5.graph).schedule));
}

TEST_CASE("brute-force oracle on unique-shortest-path graphs") {
  // With unique shortest paths the LP optimum per (u,t) equals the forced
  // per-arc destination count.
  for (long n : {2L, 3L}) {
    auto db = build_de_bruijn(2, n);
    const auto& g = db.graph;
    std::vector<std::vector<int>> dist;
    for (int u = 0; u < g.node_count(); ++u) dist.push_back(distances_from(g, u));
    int D = diameter(g);
    Rat total(0);
    for (int t = 1; t <= D; ++t) {
      int x = D + 1 - t;
      long best = 0;
      for (int u = 0; u < g.node_count(); ++u) {
        std::map<int, long> per_arc;
        for (int v = 0; v < g.node_count(); ++v) {
          if (v == u || dist[u][v] != x) continue;
          for (int arc : g.out_arcs(u))
            if (dist[g.arc(arc).dst][v] == x - 1) per_arc[arc] += 1;
        }
        for (auto& [arc, cnt] : per_arc) best = std::max(best, cnt);
      }
      total += Rat(best);
    }
    Rat oracle_y = total * Rat(2, g.node_count());
    CHECK(lp_cost(g).y == oracle_y);
  }
}

TEST_CASE("hamming LP is shortest-path bandwidth optimal") {
  auto h = build_hamming(2, 3);
  auto res = lp_schedule(h.graph);
  CHECK(res.cost.y == Rat(8, 9));
  CHECK(check_sp_bandwidth_optimal(h.graph, res.schedule));
}

TEST_CASE("bidirectional ring LP splits the antipodal shard") {
  auto b = build_bi_ring(2, 4);
  auto res = lp_schedule(b.graph);
  CHECK(res.cost.x == 2);
  CHECK(res.cost.y == Rat(3, 4));
  CHECK(check_bandwidth_optimal(res.schedule, b.graph).optimal);
  auto b5 = build_bi_ring(2, 5);
  CHECK(lp_cost(b5.graph).y == Rat(4, 5));
}

TEST_CASE("line expansion equality for optimal shortest-path schedules") {
  auto k5 = build_complete(5);
  Rat base_y = lp_cost(k5.graph).y;
  CHECK(base_y == Rat(4, 5));
  Rat line_y = lp_cost(line_graph(k5.graph)).y;
  CHECK(line_y == base_y + Rat(1, 5));
}

TEST_CASE("eq-13 cost agrees with the materialized schedule") {
  std::vector<Digraph> graphs;
  graphs.push_back(build_uni_ring(1, 6).graph);
  graphs.push_back(build_uni_ring(2, 4).graph);
  graphs.push_back(build_circulant(6, 2).graph);
  graphs.push_back(build_gen_kautz(2, 12).graph);
  graphs.push_back(build_de_bruijn(2, 3).graph);
  graphs.push_back(build_bi_ring(2, 7).graph);
  graphs.push_back(build_diamond().graph);
  for (const auto& g : graphs) {
    auto res = lp_schedule(g);
    CHECK(res.cost.y == bandwidth_coeff(res.schedule, g).coefficient);
    CHECK(validate(res.schedule, g).ok);
    CHECK(is_shortest_path_schedule(res.schedule, g));
  }
}

TEST_CASE("integer approximation") {
  // Already-integral LP: P=1 changes nothing.
  auto db = build_de_bruijn(2, 3);
  auto lp = lp_schedule(db.graph);
  auto ip = integer_schedule(db.graph, 1);
  CHECK(ip.cost.y == lp.cost.y);
  CHECK(validate(ip.schedule, db.graph).ok);

  // Ring with P=4: the exact schedule, zero gap.
  auto r = build_uni_ring(1, 4);
  auto rl = lp_schedule(r.graph);
  auto ri = integer_schedule(r.graph, 4);
  CHECK(ri.cost.y == rl.cost.y);

  // Kautz graph with small P: gap bounded by d/P (Moore-optimal case).
  auto k = build_gen_kautz(2, 12);
  auto kl = lp_schedule(k.graph);
  for (int P : {4, 8, 16}) {
    auto ki = integer_schedule(k.graph, P);
    CHECK(validate(ki.schedule, k.graph).ok);
    CHECK(is_shortest_path_schedule(ki.schedule, k.graph));
    CHECK(ki.cost.y <= kl.cost.y + Rat(2, P));
    // Chunks are multiples of 1/P.
    for (const auto& tr : ki.schedule.transfers)
      for (const auto& iv : tr.chunk.intervals()) {
        CHECK(P % iv.lo.den() == 0);
        CHECK(P % iv.hi.den() == 0);
      }
  }
  CHECK_THROWS_AS(integer_schedule(k.graph, 0), std::invalid_argument);
}

TEST_CASE("simplex agrees with the combinatorial optimum on random instances") {
  // For these load-balancing programs the optimum is
  //   max over arc subsets S of (#destinations whose arc set fits in S) / |S|
  // (LP duality); an independent oracle for the solver.
  std::mt19937 rng(4242);
  for (int trial = 0; trial < 150; ++trial) {
    std::uniform_int_distribution<int> arcs_d(2, 4), dests_d(1, 12);
    int n_arcs = arcs_d(rng);
    SpLpInstance inst;
    for (int a = 0; a < n_arcs; ++a) inst.arc_ids.push_back(a);
    int n_dests = dests_d(rng);
    std::uniform_int_distribution<int> mask_d(1, (1 << n_arcs) - 1);
    std::vector<int> masks;
    for (int i = 0; i < n_dests; ++i) {
      int mask = mask_d(rng);
      masks.push_back(mask);
      SpLpInstance::Dest dest;
      dest.node = i + 1;
      for (int a = 0; a < n_arcs; ++a)
        if (mask >> a & 1) dest.arcs.push_back(a);
      inst.dests.push_back(std::move(dest));
    }
    Rat oracle(0);
    for (int sub = 1; sub < (1 << n_arcs); ++sub) {
      long covered = 0;
      for (int mask : masks)
        if ((mask & ~sub) == 0) ++covered;
      int size = 0;
      for (int a = 0; a < n_arcs; ++a) size += sub >> a & 1;
      Rat cand(covered, size);
      if (oracle < cand) oracle = cand;
    }
    auto sol = solve_lp(inst);
    CAPTURE(trial);
    CHECK(sol.objective == oracle);
    // Every destination's fractions sum to one exactly.
    for (std::size_t di = 0; di < inst.dests.size(); ++di) {
      Rat sum(0);
      for (const auto& f : sol.fractions[di]) sum += f;
      CHECK(sum == Rat(1));
    }
  }
}

TEST_CASE("lp_schedule rejects disconnected graphs") {
  auto g = build_digraph(4, {{0, 1}, {1, 0}, {2, 3}, {3, 2}});  // regular, two components
  CHECK_THROWS_AS(lp_schedule(g), std::domain_error);
}
