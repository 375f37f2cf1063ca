#include "dctopo/base_graphs.hpp"
#include <functional>

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "dctopo/expansions.hpp"

namespace dctopo {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

long ipow(long b, long e) {
  long v = 1;
  for (long i = 0; i < e; ++i) {
    if (v > 4'000'000'000L / std::max(b, 1L)) throw std::overflow_error("parameter overflow");
    v *= b;
  }
  return v;
}

IsoMap identity_map(int n) {
  std::vector<int> m(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) m[static_cast<std::size_t>(i)] = i;
  return IsoMap{std::move(m)};
}

IsoMap negation_map(int n) {  // x -> -x mod n
  std::vector<int> m(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) m[static_cast<std::size_t>(i)] = (n - i) % n;
  return IsoMap{std::move(m)};
}

// Attach a searched witness on small graphs when no constructive one is known.
void attach_searched_witness(BuiltBase& b, int max_nodes = 32) {
  if (b.graph.node_count() > max_nodes) return;
  auto r = find_skew_symmetry(b.graph);
  if (r.status == SkewSearchStatus::Found) {
    b.ann.skew_symmetric = true;
    b.skew_witness = r.witness;
  } else if (r.status == SkewSearchStatus::Absent) {
    b.ann.skew_symmetric = false;
  }
}

}  // namespace

std::string BaseSpec::name() const {
  auto args = [&](std::size_t n) {
    std::string s = "(";
    for (std::size_t i = 0; i < n; ++i) {
      if (i) s += ",";
      s += std::to_string(params[i]);
    }
    return s + ")";
  };
  switch (family) {
    case BaseFamily::Complete: return "Complete" + args(1);
    case BaseFamily::CompleteBipartite: return "CompleteBipartite" + args(1);
    case BaseFamily::Circulant: return "Circulant" + args(2);
    case BaseFamily::UniRing: return "UniRing" + args(2);
    case BaseFamily::BiRing: return "BiRing" + args(2);
    case BaseFamily::Torus: return "Torus" + args(2);
    case BaseFamily::Hypercube: return "Hypercube" + args(1);
    case BaseFamily::Hamming: return "Hamming" + args(2);
    case BaseFamily::DeBruijn: return "DeBruijn" + args(2);
    case BaseFamily::DBJMod: return "DBJMod" + args(2);
    case BaseFamily::GenKautz: return "GenKautz" + args(2);
    case BaseFamily::Diamond: return "Diamond";
    case BaseFamily::CycleMesh: return "CycleMesh" + args(2);
  }
  return "?";
}

BaseAnnotations annotations_for(const BaseSpec& spec) {
  BaseAnnotations a;
  const auto& p = spec.params;
  switch (spec.family) {
    case BaseFamily::Complete: {
      require(p.size() == 1 && p[0] >= 2, "Complete(m): m >= 2");
      long m = p[0];
      a = {static_cast<int>(m - 1), m, 1, Rat(m - 1, m), true, true, true, false, false, true,
           ScheduleSource::Canonical};
      break;
    }
    case BaseFamily::CompleteBipartite: {
      require(p.size() == 1 && p[0] >= 1, "CompleteBipartite(d): d >= 1");
      long d = p[0];
      a = {static_cast<int>(d), 2 * d, 2, Rat(2 * d - 1, 2 * d), true, true, true, false, false,
           true, ScheduleSource::Canonical};
      break;
    }
    case BaseFamily::Circulant: {
      require(p.size() == 2 && p[1] >= 1 && p[0] > p[1], "Circulant(n,d): n > d >= 1");
      long n = p[0], d = p[1];
      a.degree = static_cast<int>(d);
      a.nodes = n;
      a.skew_symmetric = true;
      a.simple = true;
      a.source = ScheduleSource::Lp;
      if (n == d + 2) {  // the summary-table circulant
        a.latency_x = 2;
        a.bandwidth_y = Rat(n - 1, n);
        a.bandwidth_optimal = a.sp_bandwidth_optimal = true;
      }
      break;
    }
    case BaseFamily::UniRing: {
      require(p.size() == 2 && p[0] >= 1 && p[1] >= 2, "UniRing(d,m): d >= 1, m >= 2");
      long d = p[0], m = p[1];
      a = {static_cast<int>(d), m, m - 1, Rat(m - 1, m), true, true, true, false, d > 1, d == 1,
           ScheduleSource::Canonical};
      break;
    }
    case BaseFamily::BiRing: {
      require(p.size() == 2 && p[0] >= 2 && p[0] % 2 == 0, "BiRing(d,m): d even >= 2");
      require(p[1] >= 3, "BiRing(d,m): m >= 3");
      long d = p[0], m = p[1];
      a = {static_cast<int>(d), m, m / 2, Rat(m - 1, m), true, true, true, false, d > 2, d == 2,
           ScheduleSource::Lp};
      break;
    }
    case BaseFamily::Torus: {
      require(p.size() == 2 && p[0] >= 2 && p[1] >= 1, "Torus(l,n): l >= 2, n >= 1");
      long l = p[0], n = p[1];
      long N = ipow(l, n);
      a = {static_cast<int>(n), N, n * (l - 1), Rat(N - 1, N), true, true, true, false, false,
           true, ScheduleSource::Canonical};
      break;
    }
    case BaseFamily::Hypercube: {
      require(p.size() == 1 && p[0] >= 1, "Hypercube(n): n >= 1");
      return annotations_for({BaseFamily::Torus, {2, p[0]}});
    }
    case BaseFamily::Hamming: {
      require(p.size() == 2 && p[0] >= 1 && p[1] >= 2, "Hamming(n,q): n >= 1, q >= 2");
      long n = p[0], q = p[1];
      long N = ipow(q, n);
      a = {static_cast<int>(n * (q - 1)), N, n, Rat(N - 1, N), true, true, true, false, false,
           true, ScheduleSource::Canonical};
      break;
    }
    case BaseFamily::DeBruijn: {
      require(p.size() == 2 && p[0] >= 2 && p[1] >= 1, "DeBruijn(d,n): d >= 2, n >= 1");
      long d = p[0], n = p[1];
      long N = ipow(d, n);
      a.degree = static_cast<int>(d);
      a.nodes = N;
      a.latency_x = n;
      a.bandwidth_optimal = a.sp_bandwidth_optimal = (n <= 1);
      a.skew_symmetric = true;
      a.self_loops = true;
      a.simple = false;
      a.source = ScheduleSource::Lp;
      break;
    }
    case BaseFamily::DBJMod: {
      require(p.size() == 2 && p[0] >= 2 && p[1] >= 2, "DBJMod(d,n): d >= 2, n >= 2");
      long d = p[0], n = p[1];
      long N = ipow(d, n);
      require(d * d <= N, "DBJMod(d,n): d^2 <= d^n");
      a.degree = static_cast<int>(d);
      a.nodes = N;
      a.simple = true;
      a.source = ScheduleSource::ImportOnly;
      // Summary-table instances carry known latency/bandwidth annotations.
      if (d == 2 && n == 3) {
        a.latency_x = 4;
        a.bandwidth_y = Rat(7, 8);
        a.bandwidth_optimal = true;
        a.skew_symmetric = true;
      } else if (d == 2 && n == 4) {
        a.latency_x = 5;
        a.bandwidth_y = Rat(15, 16);
        a.bandwidth_optimal = true;
        // The unique diameter-5 modification is skew-symmetric (searched).
        a.skew_symmetric = true;
      } else if (d == 3 && n == 2) {
        a.latency_x = 3;
        a.bandwidth_y = Rat(8, 9);
        a.bandwidth_optimal = true;
      } else if (d == 4 && n == 2) {
        a.latency_x = 3;
        a.bandwidth_y = Rat(15, 16);
        a.bandwidth_optimal = true;
      }
      break;
    }
    case BaseFamily::GenKautz: {
      require(p.size() == 2 && p[0] >= 1 && p[1] >= p[0] + 1, "GenKautz(d,m): m >= d + 1");
      long d = p[0], m = p[1];
      a.degree = static_cast<int>(d);
      a.nodes = m;
      a.bandwidth_optimal = a.sp_bandwidth_optimal = (m == d + 1);
      a.skew_symmetric = true;
      a.self_loops = (m % (d + 1)) != 0;
      a.simple = !a.self_loops;
      a.source = ScheduleSource::Lp;
      break;
    }
    case BaseFamily::Diamond: {
      require(p.empty(), "Diamond takes no parameters");
      a = {2, 8, 3, Rat(7, 8), true, false, false, false, false, true,
           ScheduleSource::ImportOnly};
      break;
    }
    case BaseFamily::CycleMesh: {
      require(p.size() == 2 && p[0] >= 2 && p[1] >= 2, "CycleMesh(r,c): r,c >= 2");
      long r = p[0], c = p[1];
      long b = std::max(r, c);
      a.degree = 2;
      a.nodes = r * c;
      a.latency_x = 2 * (b - 1);
      if (r == c) {
        a.bandwidth_y = Rat(r * c - 1, r * c);
        a.bandwidth_optimal = true;
      }
      a.simple = true;
      a.source = ScheduleSource::Canonical;
      break;
    }
  }
  return a;
}

BuiltBase build_complete(long m) {
  BaseSpec spec{BaseFamily::Complete, {m}};
  BuiltBase b;
  b.ann = annotations_for(spec);
  std::vector<std::pair<int, int>> arcs;
  std::vector<Transfer> ts;
  int id = 0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      if (i == j) continue;
      arcs.push_back({i, j});
      ts.push_back({j, ChunkSet::full(), id, 1});
      ++id;
    }
  b.graph = build_digraph(static_cast<int>(m), arcs, spec.name());
  b.schedule = make_schedule(Collective::ReduceScatter, std::move(ts));
  b.skew_witness = identity_map(static_cast<int>(m));
  return b;
}

BuiltBase build_complete_bipartite(long d) {
  BaseSpec spec{BaseFamily::CompleteBipartite, {d}};
  BuiltBase b;
  b.ann = annotations_for(spec);
  const int dd = static_cast<int>(d);
  std::vector<std::pair<int, int>> arcs;
  for (int i = 0; i < dd; ++i)
    for (int k = 0; k < dd; ++k) arcs.push_back({i, dd + k});  // id = i*d + k
  for (int i = 0; i < dd; ++i)
    for (int k = 0; k < dd; ++k) arcs.push_back({dd + i, k});  // id = d^2 + i*d + k
  b.graph = build_digraph(2 * dd, arcs, spec.name());

  std::vector<Transfer> ts;
  // Step 1: same-side shards spread in d chunks across the opposite side.
  for (int i = 0; i < dd; ++i)
    for (int j = 0; j < dd; ++j) {
      if (i == j) continue;
      for (int k = 0; k < dd; ++k) {
        ChunkSet c = ChunkSet::interval(Rat(k, dd), Rat(k + 1, dd));
        ts.push_back({j, c, i * dd + k, 1});            // x_i spreads x_j's shard
        ts.push_back({dd + j, c, dd * dd + i * dd + k, 1});  // y_i spreads y_j's shard
      }
    }
  // Step 2: every node forwards its full accumulated version across.
  for (int k = 0; k < dd; ++k)
    for (int j = 0; j < dd; ++j) {
      ts.push_back({j, ChunkSet::full(), dd * dd + k * dd + j, 2});  // y_k -> x_j
      ts.push_back({dd + j, ChunkSet::full(), k * dd + j, 2});       // x_k -> y_j
    }
  b.schedule = make_schedule(Collective::ReduceScatter, std::move(ts));
  b.skew_witness = identity_map(2 * dd);
  return b;
}

BuiltBase build_circulant(long n, long d) {
  BaseSpec spec{BaseFamily::Circulant, {n, d}};
  BuiltBase b;
  b.ann = annotations_for(spec);
  std::vector<std::pair<int, int>> arcs;
  for (int i = 0; i < n; ++i)
    for (int j = 1; j <= d; ++j) arcs.push_back({i, static_cast<int>((i + j) % n)});
  b.graph = build_digraph(static_cast<int>(n), arcs, spec.name());
  b.skew_witness = negation_map(static_cast<int>(n));
  return b;
}

namespace {

Schedule uni_ring_rs(long d, long m) {
  std::vector<Transfer> ts;
  for (int v = 0; v < m; ++v)
    for (int u = 0; u < m; ++u) {
      if (u == v) continue;
      int dist = static_cast<int>(((v - u) % m + m) % m);
      for (int l = 0; l < d; ++l)
        ts.push_back({v, ChunkSet::interval(Rat(l, d), Rat(l + 1, d)),
                      static_cast<int>(u * d + l), static_cast<int>(m - dist)});
    }
  return make_schedule(Collective::ReduceScatter, std::move(ts));
}

Schedule uni_ring_ag(long d, long m) {
  std::vector<Transfer> ts;
  for (int w = 0; w < m; ++w)
    for (int t = 1; t < m; ++t) {
      int u = static_cast<int>((w + t - 1) % m);
      for (int l = 0; l < d; ++l)
        ts.push_back({w, ChunkSet::interval(Rat(l, d), Rat(l + 1, d)),
                      static_cast<int>(u * d + l), t});
    }
  return make_schedule(Collective::AllGather, std::move(ts));
}

}  // namespace

BuiltBase build_uni_ring(long d, long m) {
  BaseSpec spec{BaseFamily::UniRing, {d, m}};
  BuiltBase b;
  b.ann = annotations_for(spec);
  std::vector<std::pair<int, int>> arcs;
  for (int i = 0; i < m; ++i)
    for (int l = 0; l < d; ++l) arcs.push_back({i, static_cast<int>((i + 1) % m)});
  b.graph = build_digraph(static_cast<int>(m), arcs, spec.name());
  b.schedule = uni_ring_rs(d, m);
  b.skew_witness = negation_map(static_cast<int>(m));
  return b;
}

BuiltBase build_bi_ring(long d, long m) {
  BaseSpec spec{BaseFamily::BiRing, {d, m}};
  BuiltBase b;
  b.ann = annotations_for(spec);
  const long h = d / 2;
  std::vector<std::pair<int, int>> arcs;
  for (int i = 0; i < m; ++i)
    for (int l = 0; l < h; ++l) arcs.push_back({i, static_cast<int>((i + 1) % m)});
  for (int i = 0; i < m; ++i)
    for (int l = 0; l < h; ++l) arcs.push_back({i, static_cast<int>((i - 1 + m) % m)});
  b.graph = build_digraph(static_cast<int>(m), arcs, spec.name());
  b.skew_witness = identity_map(static_cast<int>(m));
  return b;
}

namespace {

// Torus/Hypercube/Hamming are Cartesian powers of a ring / K_q with the
// rotated-sweep power schedule, dualized back to reduce-scatter.
BuiltBase build_power_family(const BaseSpec& spec, const BuiltBase& base, const Schedule& base_ag,
                             long n) {
  BuiltBase b;
  b.ann = annotations_for(spec);
  b.graph = cartesian_power(base.graph, static_cast<int>(n));
  IsoMap wit = power_lift_witness(base.graph, *base.skew_witness, static_cast<int>(n));
  Schedule ag = power_schedule(base.graph, base_ag, static_cast<int>(n));
  b.schedule = dualize(ag, b.graph, wit);
  b.skew_witness = std::move(wit);
  return b;
}

}  // namespace

BuiltBase build_torus(long l, long n) {
  BaseSpec spec{BaseFamily::Torus, {l, n}};
  annotations_for(spec);
  BuiltBase ring = build_uni_ring(1, l);
  return build_power_family(spec, ring, uni_ring_ag(1, l), n);
}

BuiltBase build_hypercube(long n) {
  BaseSpec spec{BaseFamily::Hypercube, {n}};
  annotations_for(spec);
  BuiltBase ring = build_uni_ring(1, 2);
  BuiltBase b = build_power_family(spec, ring, uni_ring_ag(1, 2), n);
  return b;
}

namespace {

Schedule complete_ag(long m) {
  std::vector<Transfer> ts;
  int id = 0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      if (i == j) continue;
      ts.push_back({i, ChunkSet::full(), id, 1});  // i broadcasts its own shard
      ++id;
    }
  return make_schedule(Collective::AllGather, std::move(ts));
}

}  // namespace

BuiltBase build_hamming(long n, long q) {
  BaseSpec spec{BaseFamily::Hamming, {n, q}};
  annotations_for(spec);
  BuiltBase kq = build_complete(q);
  return build_power_family(spec, kq, complete_ag(q), n);
}

BuiltBase build_de_bruijn(long d, long n) {
  BaseSpec spec{BaseFamily::DeBruijn, {d, n}};
  BuiltBase b;
  b.ann = annotations_for(spec);
  const long N = b.ann.nodes;
  std::vector<std::pair<int, int>> arcs;
  for (long s = 0; s < N; ++s)
    for (long c = 0; c < d; ++c) arcs.push_back({static_cast<int>(s), static_cast<int>((s * d + c) % N)});
  b.graph = build_digraph(static_cast<int>(N), arcs, spec.name());
  // Digit reversal maps the transpose onto the graph.
  std::vector<int> rev(static_cast<std::size_t>(N));
  for (long s = 0; s < N; ++s) {
    long r = 0, rest = s;
    for (long k = 0; k < n; ++k) {
      r = r * d + rest % d;
      rest /= d;
    }
    rev[static_cast<std::size_t>(s)] = static_cast<int>(r);
  }
  b.skew_witness = IsoMap{std::move(rev)};
  return b;
}

namespace {

// Undirected Hamiltonian cycles on the admissibility graph, enumerated in
// DFS order (neighbors ascending). The callback returns true to stop. For
// node sets beyond exhaustive reach, Posa rotation-extension yields one
// deterministic cycle.
bool enumerate_cycles_dfs(const std::vector<std::vector<char>>& adj,
                          const std::function<bool(const std::vector<int>&)>& accept) {
  const int k = static_cast<int>(adj.size());
  std::vector<int> path{0};
  std::vector<char> used(static_cast<std::size_t>(k), 0);
  used[0] = 1;
  long long steps = 0;
  auto dfs = [&](auto&& self) -> bool {
    if (++steps > 50'000'000) return false;
    if (static_cast<int>(path.size()) == k)
      return adj[static_cast<std::size_t>(path.back())][0] && accept(path);
    for (int v = 1; v < k; ++v) {
      if (used[static_cast<std::size_t>(v)] ||
          !adj[static_cast<std::size_t>(path.back())][static_cast<std::size_t>(v)])
        continue;
      used[static_cast<std::size_t>(v)] = 1;
      path.push_back(v);
      if (self(self)) return true;
      path.pop_back();
      used[static_cast<std::size_t>(v)] = 0;
    }
    return false;
  };
  return dfs(dfs);
}

std::optional<std::vector<int>> hamiltonian_cycle(const std::vector<std::vector<char>>& adj) {
  const int k = static_cast<int>(adj.size());
  if (k < 3) return std::nullopt;
  if (k <= 12) {
    std::optional<std::vector<int>> found;
    enumerate_cycles_dfs(adj, [&](const std::vector<int>& cyc) {
      found = cyc;
      return true;
    });
    return found;
  }
  std::vector<int> path{0};
  std::vector<char> used(static_cast<std::size_t>(k), 0);
  used[0] = 1;
  // Rotation-extension; Ore-dense graphs close quickly.
  for (long long iter = 0; iter < 1'000'000; ++iter) {
    int tail = path.back();
    bool extended = false;
    for (int v = 0; v < k; ++v) {
      if (used[static_cast<std::size_t>(v)] ||
          !adj[static_cast<std::size_t>(tail)][static_cast<std::size_t>(v)])
        continue;
      used[static_cast<std::size_t>(v)] = 1;
      path.push_back(v);
      extended = true;
      break;
    }
    if (extended) {
      if (static_cast<int>(path.size()) == k &&
          adj[static_cast<std::size_t>(path.back())][0])
        return path;
      continue;
    }
    // Rotate: tail adjacent to some interior node; reverse the suffix.
    bool rotated = false;
    for (std::size_t i = 0; i + 2 < path.size(); ++i) {
      if (adj[static_cast<std::size_t>(tail)][static_cast<std::size_t>(path[i])]) {
        std::reverse(path.begin() + static_cast<long>(i) + 1, path.end());
        rotated = true;
        break;
      }
    }
    if (!rotated) return std::nullopt;
    if (static_cast<int>(path.size()) == k && adj[static_cast<std::size_t>(path.back())][0])
      return path;
  }
  return std::nullopt;
}

}  // namespace

BuiltBase build_dbj_mod(long d, long n) {
  BaseSpec spec{BaseFamily::DBJMod, {d, n}};
  BuiltBase b;
  b.ann = annotations_for(spec);
  Digraph dbj = build_de_bruijn(d, n).graph;
  const int N = dbj.node_count();

  // Affected nodes: self-loop endpoints and 2-cycle members.
  std::set<int> affected;
  std::set<std::pair<int, int>> two_cycles;  // ordered pairs, both directions
  std::set<std::pair<int, int>> arc_set;
  for (const auto& a : dbj.arcs()) arc_set.insert({a.src, a.dst});
  std::vector<char> drop(static_cast<std::size_t>(dbj.arc_count()), 0);
  for (int id = 0; id < dbj.arc_count(); ++id) {
    const auto& a = dbj.arc(id);
    if (a.src == a.dst) {
      affected.insert(a.src);
      drop[static_cast<std::size_t>(id)] = 1;
    } else if (arc_set.count({a.dst, a.src})) {
      affected.insert(a.src);
      affected.insert(a.dst);
      two_cycles.insert({a.src, a.dst});
      drop[static_cast<std::size_t>(id)] = 1;
    }
  }
  std::vector<int> nodes(affected.begin(), affected.end());
  if (static_cast<long>(nodes.size()) != d * d)
    throw std::logic_error("dbj_mod: unexpected affected-node count");

  // Admissible undirected edges: not present in the de Bruijn graph in either
  // direction, unless the pair formed a (now removed) 2-cycle.
  const int k = static_cast<int>(nodes.size());
  std::vector<std::vector<char>> adj(static_cast<std::size_t>(k),
                                     std::vector<char>(static_cast<std::size_t>(k), 0));
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      int u = nodes[static_cast<std::size_t>(i)], v = nodes[static_cast<std::size_t>(j)];
      bool present = arc_set.count({u, v}) || arc_set.count({v, u});
      bool was_two_cycle = two_cycles.count({u, v}) != 0;
      if (!present || was_two_cycle)
        adj[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            adj[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = 1;
    }
  std::vector<std::pair<int, int>> kept;
  for (int id = 0; id < dbj.arc_count(); ++id)
    if (!drop[static_cast<std::size_t>(id)])
      kept.push_back({dbj.arc(id).src, dbj.arc(id).dst});
  auto graph_for = [&](const std::vector<int>& cyc) {
    auto arcs = kept;
    for (std::size_t i = 0; i < cyc.size(); ++i) {
      int u = nodes[static_cast<std::size_t>(cyc[i])];
      int v = nodes[static_cast<std::size_t>(cyc[(i + 1) % cyc.size()])];
      arcs.push_back({u, v});
    }
    return build_digraph(N, arcs, spec.name());
  };

  // Several valid long cycles exist and their orientation changes the
  // diameter. When the summary table documents this instance, scan for the
  // cycle reproducing the documented diameter (the published construction);
  // otherwise the first cycle found wins.
  std::optional<std::vector<int>> cycle;
  if (b.ann.latency_x && k <= 12) {
    enumerate_cycles_dfs(adj, [&](const std::vector<int>& cyc) {
      if (!cycle) cycle = cyc;  // fallback: first valid cycle
      Digraph cand = graph_for(cyc);
      if (strongly_connected(cand) && diameter(cand) == *b.ann.latency_x) {
        cycle = cyc;
        return true;
      }
      return false;
    });
  }
  if (!cycle) cycle = hamiltonian_cycle(adj);
  if (!cycle)
    throw std::runtime_error("dbj_mod: no Hamiltonian cycle found within budget");
  b.graph = graph_for(*cycle);

  // Sanity: d-regular, no self-loops, no 2-cycles, strongly connected.
  if (regular_degree(b.graph) != static_cast<int>(d))
    throw std::logic_error("dbj_mod: result not d-regular");
  std::set<std::pair<int, int>> out_set;
  for (const auto& a : b.graph.arcs()) {
    if (a.src == a.dst) throw std::logic_error("dbj_mod: self-loop survived");
    out_set.insert({a.src, a.dst});
  }
  for (const auto& [u, v] : out_set)
    if (out_set.count({v, u})) throw std::logic_error("dbj_mod: 2-cycle survived");
  if (!strongly_connected(b.graph)) throw std::logic_error("dbj_mod: not strongly connected");

  if (!b.ann.latency_x) b.ann.latency_x = diameter(b.graph);
  attach_searched_witness(b);
  return b;
}

BuiltBase build_gen_kautz(long d, long m) {
  BaseSpec spec{BaseFamily::GenKautz, {d, m}};
  BuiltBase b;
  b.ann = annotations_for(spec);
  std::vector<std::pair<int, int>> arcs;
  for (long x = 0; x < m; ++x)
    for (long a = 1; a <= d; ++a) {
      long y = ((-d * x - a) % m + m) % m;
      arcs.push_back({static_cast<int>(x), static_cast<int>(y)});
    }
  b.graph = build_digraph(static_cast<int>(m), arcs, spec.name());
  attach_searched_witness(b);
  return b;
}

BuiltBase build_diamond() {
  BaseSpec spec{BaseFamily::Diamond, {}};
  BuiltBase b;
  b.ann = annotations_for(spec);
  b.graph = build_digraph(8, {{0, 3}, {0, 4}, {1, 2}, {1, 7}, {2, 3}, {2, 4}, {3, 6}, {3, 7},
                              {4, 1}, {4, 5}, {5, 0}, {5, 1}, {6, 2}, {6, 5}, {7, 0}, {7, 6}},
                          spec.name());
  return b;
}

namespace {

// Two ring covers of Z_(a*b): `a` contiguous blocks of length b, and `a`
// stride-a rings of length b.
struct CycleMeshCovers {
  std::vector<std::vector<int>> blocks;
  std::vector<std::vector<int>> strides;
};

CycleMeshCovers cycle_mesh_covers(long a, long b) {
  CycleMeshCovers c;
  const long N = a * b;
  for (long i = 0; i < a; ++i) {
    std::vector<int> ring;
    for (long p = 0; p < b; ++p) ring.push_back(static_cast<int>(i * b + p));
    c.blocks.push_back(std::move(ring));
  }
  for (long k = 0; k < a; ++k) {
    std::vector<int> ring;
    for (long p = 0; p < b; ++p) ring.push_back(static_cast<int>((k + p * a) % N));
    c.strides.push_back(std::move(ring));
  }
  return c;
}

// Pipelined ring allgather of one half-shard along each ring of a cover.
void cm_phase_gather(const std::vector<std::vector<int>>& rings,
                     const std::map<std::pair<int, int>, int>& arc_of, const ChunkSet& half,
                     int t0, std::vector<Transfer>& out) {
  for (const auto& R : rings) {
    const int b = static_cast<int>(R.size());
    for (int t = 1; t < b; ++t)
      for (int p = 0; p < b; ++p) {
        int item = R[static_cast<std::size_t>(((p - t + 1) % b + b) % b)];
        int arc = arc_of.at({R[static_cast<std::size_t>(p)],
                             R[static_cast<std::size_t>((p + 1) % b)]});
        out.push_back({item, half, arc, t0 + t});
      }
  }
}

// Delivery of already-gathered row payloads around the orthogonal rings:
// each holder forwards its row's half-shards along its segment, up to the
// next holder of the same row.
void cm_phase_deliver(const std::vector<std::vector<int>>& rings,
                      const std::vector<int>& row_of,
                      const std::vector<std::vector<int>>& row_members,
                      const std::map<std::pair<int, int>, int>& arc_of, const ChunkSet& half,
                      int t0, std::vector<Transfer>& out) {
  for (const auto& R : rings) {
    const int b = static_cast<int>(R.size());
    for (int kpos = 0; kpos < b; ++kpos) {
      int holder_row = row_of[static_cast<std::size_t>(R[static_cast<std::size_t>(kpos)])];
      int seg = 0;
      while (seg + 1 < b) {
        int nxt = R[static_cast<std::size_t>((kpos + seg + 1) % b)];
        if (row_of[static_cast<std::size_t>(nxt)] == holder_row) break;
        ++seg;
      }
      for (int j = 1; j <= seg; ++j) {
        int from = R[static_cast<std::size_t>((kpos + j - 1) % b)];
        int to = R[static_cast<std::size_t>((kpos + j) % b)];
        int arc = arc_of.at({from, to});
        for (int src : row_members[static_cast<std::size_t>(holder_row)])
          out.push_back({src, half, arc, t0 + j});
      }
    }
  }
}

}  // namespace

BuiltBase build_cycle_mesh(long r, long c) {
  BaseSpec spec{BaseFamily::CycleMesh, {r, c}};
  BuiltBase b;
  b.ann = annotations_for(spec);
  const long a = std::min(r, c), bb = std::max(r, c);
  const long N = a * bb;
  auto covers = cycle_mesh_covers(a, bb);

  std::vector<std::pair<int, int>> arcs;
  for (const auto& R : covers.blocks)
    for (std::size_t p = 0; p < R.size(); ++p)
      arcs.push_back({R[p], R[(p + 1) % R.size()]});
  for (const auto& R : covers.strides)
    for (std::size_t p = 0; p < R.size(); ++p)
      arcs.push_back({R[p], R[(p + 1) % R.size()]});
  b.graph = build_digraph(static_cast<int>(N), arcs, spec.name());

  // Build the allgather on the transpose (rings reversed), then reverse it
  // into a reduce-scatter on the graph itself; arc ids are shared.
  Digraph gt = transpose(b.graph);
  std::map<std::pair<int, int>, int> arc_of;
  for (int id = 0; id < gt.arc_count(); ++id)
    arc_of[{gt.arc(id).src, gt.arc(id).dst}] = id;
  auto reversed = [](const std::vector<std::vector<int>>& rings) {
    auto out = rings;
    for (auto& ring : out) std::reverse(ring.begin(), ring.end());
    return out;
  };
  auto blocks_t = reversed(covers.blocks);
  auto strides_t = reversed(covers.strides);

  std::vector<int> block_of(static_cast<std::size_t>(N)), stride_of(static_cast<std::size_t>(N));
  for (std::size_t i = 0; i < covers.blocks.size(); ++i)
    for (int v : covers.blocks[i]) block_of[static_cast<std::size_t>(v)] = static_cast<int>(i);
  for (std::size_t i = 0; i < covers.strides.size(); ++i)
    for (int v : covers.strides[i]) stride_of[static_cast<std::size_t>(v)] = static_cast<int>(i);
  std::vector<std::vector<int>> block_members(covers.blocks.begin(), covers.blocks.end());
  std::vector<std::vector<int>> stride_members(covers.strides.begin(), covers.strides.end());

  ChunkSet h1 = ChunkSet::interval(Rat(0), Rat(1, 2));
  ChunkSet h2 = ChunkSet::interval(Rat(1, 2), Rat(1));
  const int phase = static_cast<int>(bb) - 1;
  std::vector<Transfer> ts;
  // Half 1: gather along blocks, deliver along strides.
  cm_phase_gather(blocks_t, arc_of, h1, 0, ts);
  cm_phase_deliver(strides_t, block_of, block_members, arc_of, h1, phase, ts);
  // Half 2: gather along strides, deliver along blocks.
  cm_phase_gather(strides_t, arc_of, h2, 0, ts);
  cm_phase_deliver(blocks_t, stride_of, stride_members, arc_of, h2, phase, ts);
  Schedule ag_t = make_schedule(Collective::AllGather, std::move(ts));
  b.schedule = reverse_schedule(ag_t);

  if (!b.ann.bandwidth_y)
    b.ann.bandwidth_y = bandwidth_coeff(*b.schedule, b.graph).coefficient;
  attach_searched_witness(b, 24);
  return b;
}

BuiltBase build_base(const BaseSpec& spec) {
  const auto& p = spec.params;
  switch (spec.family) {
    case BaseFamily::Complete: return build_complete(p.at(0));
    case BaseFamily::CompleteBipartite: return build_complete_bipartite(p.at(0));
    case BaseFamily::Circulant: return build_circulant(p.at(0), p.at(1));
    case BaseFamily::UniRing: return build_uni_ring(p.at(0), p.at(1));
    case BaseFamily::BiRing: return build_bi_ring(p.at(0), p.at(1));
    case BaseFamily::Torus: return build_torus(p.at(0), p.at(1));
    case BaseFamily::Hypercube: return build_hypercube(p.at(0));
    case BaseFamily::Hamming: return build_hamming(p.at(0), p.at(1));
    case BaseFamily::DeBruijn: return build_de_bruijn(p.at(0), p.at(1));
    case BaseFamily::DBJMod: return build_dbj_mod(p.at(0), p.at(1));
    case BaseFamily::GenKautz: return build_gen_kautz(p.at(0), p.at(1));
    case BaseFamily::Diamond: return build_diamond();
    case BaseFamily::CycleMesh: return build_cycle_mesh(p.at(0), p.at(1));
  }
  throw std::invalid_argument("unknown base family");
}

}  // namespace dctopo
