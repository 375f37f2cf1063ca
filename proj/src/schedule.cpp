#include "dctopo/schedule.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>

#include "dctopo/parallel.hpp"

namespace dctopo {

std::string collective_name(Collective c) {
  return c == Collective::ReduceScatter ? "reduce-scatter" : "allgather";
}

Schedule make_schedule(Collective kind, std::vector<Transfer> transfers) {
  Schedule s;
  s.kind = kind;
  s.transfers = std::move(transfers);
  int tmax = 0;
  for (const auto& tr : s.transfers) {
    if (tr.step < 1) throw std::invalid_argument("schedule: step must be >= 1");
    if (tr.chunk.is_empty()) throw std::invalid_argument("schedule: empty chunk");
    tmax = std::max(tmax, tr.step);
  }
  s.t_max = tmax;
  return s;
}

void check_schedule_well_formed(const Schedule& s, const Digraph& g) {
  for (const auto& tr : s.transfers) {
    if (tr.arc < 0 || tr.arc >= g.arc_count())
      throw std::out_of_range("schedule: arc id not in graph");
    if (tr.root < 0 || tr.root >= g.node_count())
      throw std::out_of_range("schedule: root out of range");
    if (tr.step < 1 || tr.step > s.t_max)
      throw std::out_of_range("schedule: step outside [1, t_max]");
    if (tr.chunk.is_empty()) throw std::invalid_argument("schedule: empty chunk");
  }
}

double latency_T_L(const Schedule& s, const CostModel& cm) { return cm.alpha * s.t_max; }

namespace {

BandwidthBreakdown bandwidth_impl(const Schedule& s, const Digraph& g) {
  auto dopt = regular_degree(g);
  if (!dopt) throw std::domain_error("bandwidth_coeff: graph is not regular");
  const int d = *dopt;
  BandwidthBreakdown out;
  out.per_step.assign(static_cast<std::size_t>(s.t_max), Rat(0));
  // Per-step max over arcs of the total chunk measure carried.
  std::vector<std::map<int, Rat>> step_arc(static_cast<std::size_t>(s.t_max));
  for (const auto& tr : s.transfers) {
    auto& m = step_arc[static_cast<std::size_t>(tr.step - 1)];
    auto [it, inserted] = m.try_emplace(tr.arc, Rat(0));
    it->second += tr.chunk.measure();
  }
  Rat total(0);
  for (int t = 0; t < s.t_max; ++t) {
    Rat mx(0);
    for (const auto& [arc, load] : step_arc[static_cast<std::size_t>(t)])
      if (mx < load) mx = load;
    out.per_step[static_cast<std::size_t>(t)] = mx;
    total += mx;
  }
  out.coefficient = total * Rat(d, g.node_count());
  return out;
}

}  // namespace

BandwidthBreakdown bandwidth_coeff(const Schedule& s, const Digraph& g) {
  check_schedule_well_formed(s, g);
  return bandwidth_impl(s, g);
}

double bandwidth_T_B(const Schedule& s, const Digraph& g, const CostModel& cm) {
  auto bb = bandwidth_coeff(s, g);
  return cm.model_bits / cm.bandwidth_bps * bb.coefficient.to_double();
}

namespace {

// Allgather coverage: per root v, propagate which parts of v's shard each
// node holds, one step at a time, reading only pre-step state.
void allgather_cover_for_root(const Schedule& s, const Digraph& g, int root,
                              std::vector<ChunkSet>& cover) {
  const auto full = ChunkSet::full();
  cover.assign(static_cast<std::size_t>(g.node_count()), ChunkSet::empty());
  cover[static_cast<std::size_t>(root)] = full;
  // Transfers for this root, grouped by step.
  std::vector<std::vector<const Transfer*>> by_step(static_cast<std::size_t>(s.t_max + 1));
  for (const auto& tr : s.transfers)
    if (tr.root == root) by_step[static_cast<std::size_t>(tr.step)].push_back(&tr);
  std::vector<std::pair<int, ChunkSet>> additions;
  for (int t = 1; t <= s.t_max; ++t) {
    additions.clear();
    for (const Transfer* tr : by_step[static_cast<std::size_t>(t)]) {
      const auto& arc = g.arc(tr->arc);
      ChunkSet gained = cover[static_cast<std::size_t>(arc.src)].intersect(tr->chunk);
      if (!gained.is_empty()) additions.emplace_back(arc.dst, std::move(gained));
    }
    for (auto& [dst, gained] : additions)
      cover[static_cast<std::size_t>(dst)] =
          cover[static_cast<std::size_t>(dst)].unite(gained);
  }
}

ValidationReport validate_allgather(const Schedule& s, const Digraph& g) {
  const int n = g.node_count();
  const auto full = ChunkSet::full();
  std::vector<std::vector<ValidationReport::Missing>> per_root(static_cast<std::size_t>(n));
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t root) {
    std::vector<ChunkSet> cover;
    allgather_cover_for_root(s, g, static_cast<int>(root), cover);
    for (int w = 0; w < n; ++w) {
      if (w == static_cast<int>(root)) continue;
      ChunkSet missing = full.subtract(cover[static_cast<std::size_t>(w)]);
      if (!missing.is_empty())
        per_root[root].push_back({static_cast<int>(root), w, std::move(missing)});
    }
  });
  ValidationReport rep;
  for (auto& v : per_root)
    for (auto& m : v) {
      rep.ok = false;
      rep.missing.push_back(std::move(m));
    }
  return rep;
}

}  // namespace

ValidationReport validate(const Schedule& s, const Digraph& g) {
  check_schedule_well_formed(s, g);
  if (s.kind == Collective::AllGather) return validate_allgather(s, g);
  // Reduce-scatter: sources u must reach root v along increasing-step paths.
  // Exactly the allgather condition for the reverse schedule on transpose(g):
  // the reverse of "u covers v's shard at v" is "v's shard reaches u".
  Schedule rev = reverse_schedule(s);
  ValidationReport rep = validate_allgather(rev, transpose(g));
  // In the reversed view the uncovered node is the reduce-scatter source.
  return rep;
}

Schedule reverse_schedule(const Schedule& s) {
  Schedule out;
  out.kind = s.kind == Collective::ReduceScatter ? Collective::AllGather
                                                 : Collective::ReduceScatter;
  out.t_max = s.t_max;
  out.transfers.reserve(s.transfers.size());
  for (const auto& tr : s.transfers)
    out.transfers.push_back({tr.root, tr.chunk, tr.arc, s.t_max - tr.step + 1});
  return out;
}

std::vector<int> arc_isomorphism(const Digraph& g_from, const IsoMap& f, const Digraph& g_to) {
  if (g_from.node_count() != g_to.node_count() || g_from.arc_count() != g_to.arc_count())
    throw std::invalid_argument("map_schedule: graph shape mismatch");
  if (static_cast<int>(f.mapping.size()) != g_from.node_count() || !f.is_permutation())
    throw std::invalid_argument("map_schedule: bad isomorphism");
  std::map<std::pair<int, int>, std::vector<int>> to_slots;
  for (int id = 0; id < g_to.arc_count(); ++id) {
    const auto& a = g_to.arc(id);
    to_slots[{a.src, a.dst}].push_back(id);
  }
  std::map<std::pair<int, int>, std::size_t> next;
  std::vector<int> m(static_cast<std::size_t>(g_from.arc_count()), -1);
  for (int id = 0; id < g_from.arc_count(); ++id) {
    const auto& a = g_from.arc(id);
    std::pair<int, int> key{f.mapping[static_cast<std::size_t>(a.src)],
                            f.mapping[static_cast<std::size_t>(a.dst)]};
    auto it = to_slots.find(key);
    std::size_t& pos = next[key];
    if (it == to_slots.end() || pos >= it->second.size())
      throw std::invalid_argument("map_schedule: f is not an isomorphism");
    m[static_cast<std::size_t>(id)] = it->second[pos++];
  }
  return m;
}

Schedule map_schedule(const Schedule& s, const Digraph& g_from, const IsoMap& f,
                      const Digraph& g_to) {
  auto m = arc_isomorphism(g_from, f, g_to);
  Schedule out;
  out.kind = s.kind;
  out.t_max = s.t_max;
  out.transfers.reserve(s.transfers.size());
  for (const auto& tr : s.transfers)
    out.transfers.push_back({f.mapping[static_cast<std::size_t>(tr.root)], tr.chunk,
                             m[static_cast<std::size_t>(tr.arc)], tr.step});
  return out;
}

Schedule dualize(const Schedule& s, const Digraph& g, const IsoMap& f) {
  Digraph gt = transpose(g);
  if (!verify_isomorphism(gt, g, f))
    throw std::invalid_argument("dualize: f is not an isomorphism from transpose(g) to g");
  return map_schedule(reverse_schedule(s), gt, f, g);
}

namespace {

BandwidthOptimalityReport check_bw_optimal_rs(const Schedule& s, const Digraph& g) {
  BandwidthOptimalityReport rep;
  const int n = g.node_count();
  const auto full = ChunkSet::full();
  // (1) every arc carries the same load at every step.
  std::vector<std::vector<Rat>> loads(static_cast<std::size_t>(s.t_max),
                                      std::vector<Rat>(static_cast<std::size_t>(g.arc_count()), Rat(0)));
  for (const auto& tr : s.transfers)
    loads[static_cast<std::size_t>(tr.step - 1)][static_cast<std::size_t>(tr.arc)] +=
        tr.chunk.measure();
  for (int t = 0; t < s.t_max; ++t) {
    const auto& row = loads[static_cast<std::size_t>(t)];
    for (int a = 1; a < g.arc_count(); ++a) {
      if (row[static_cast<std::size_t>(a)] != row[0]) {
        rep.optimal = false;
        rep.violations.push_back("unequal arc loads at step " + std::to_string(t + 1));
        break;
      }
    }
  }
  // (2) per (sender, root): disjoint chunks with union the full shard.
  std::map<std::pair<int, int>, std::pair<ChunkSet, Rat>> sends;  // union, total measure
  for (const auto& tr : s.transfers) {
    int u = g.arc(tr.arc).src;
    auto& slot = sends[{u, tr.root}];
    slot.first = slot.first.unite(tr.chunk);
    slot.second += tr.chunk.measure();
  }
  for (int u = 0; u < n && rep.violations.size() < 16; ++u) {
    for (int w = 0; w < n; ++w) {
      if (u == w) continue;
      auto it = sends.find({u, w});
      if (it == sends.end()) {
        rep.optimal = false;
        rep.violations.push_back("node " + std::to_string(u) + " never sends root " +
                                 std::to_string(w));
        continue;
      }
      if (it->second.first != full || it->second.second != Rat(1)) {
        rep.optimal = false;
        rep.violations.push_back("sends of node " + std::to_string(u) + " for root " +
                                 std::to_string(w) + " do not tile the shard");
      }
    }
  }
  // Cross-check: y == (N-1)/N.
  auto bb = bandwidth_impl(s, g);
  if (bb.coefficient != Rat(n - 1, n)) {
    rep.optimal = false;
    rep.violations.push_back("bandwidth coefficient " + bb.coefficient.str() + " != " +
                             Rat(n - 1, n).str());
  }
  return rep;
}

}  // namespace

BandwidthOptimalityReport check_bandwidth_optimal(const Schedule& s, const Digraph& g) {
  check_schedule_well_formed(s, g);
  if (s.kind == Collective::AllGather)
    return check_bw_optimal_rs(reverse_schedule(s), transpose(g));
  return check_bw_optimal_rs(s, g);
}

bool check_moore_optimal(const Schedule& s, const Digraph& g) {
  auto d = regular_degree(g);
  if (!d) throw std::domain_error("check_moore_optimal: graph is not regular");
  if (s.t_max < 1) return false;
  return g.node_count() > moore_bound(*d, s.t_max - 1);
}

namespace {

bool is_sp_schedule_rs(const Schedule& s, const Digraph& g) {
  const int n = g.node_count();
  const int D = diameter(g);
  if (s.t_max != D) return false;
  // Distances toward each root: d(x, v) = distance from v in transpose.
  Digraph gt = transpose(g);
  std::vector<std::vector<int>> dist_to(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) dist_to[static_cast<std::size_t>(v)] = distances_from(gt, v);
  for (const auto& tr : s.transfers) {
    const auto& arc = g.arc(tr.arc);
    const auto& dv = dist_to[static_cast<std::size_t>(tr.root)];
    int du = dv[static_cast<std::size_t>(arc.src)];
    int dw = dv[static_cast<std::size_t>(arc.dst)];
    if (du != dw + 1 || du != D + 1 - tr.step) return false;
  }
  // Coverage: per (source u, root v), the chunks u sends for v tile the shard.
  const auto full = ChunkSet::full();
  std::map<std::pair<int, int>, ChunkSet> sent;
  for (const auto& tr : s.transfers) {
    auto& slot = sent[{g.arc(tr.arc).src, tr.root}];
    slot = slot.unite(tr.chunk);
  }
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) {
      if (u == v) continue;
      auto it = sent.find({u, v});
      if (it == sent.end() || it->second != full) return false;
    }
  return true;
}

}  // namespace

bool is_shortest_path_schedule(const Schedule& s, const Digraph& g) {
  check_schedule_well_formed(s, g);
  if (s.kind == Collective::AllGather)
    return is_sp_schedule_rs(reverse_schedule(s), transpose(g));
  return is_sp_schedule_rs(s, g);
}

}  // namespace dctopo
