#include "dctopo/expansions.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace dctopo {

namespace {

int require_regular(const Digraph& g, const char* who) {
  auto d = regular_degree(g);
  if (!d) throw std::domain_error(std::string(who) + ": graph is not regular");
  return *d;
}

void require_rs(const Schedule& s, const char* who) {
  if (s.kind != Collective::ReduceScatter)
    throw std::invalid_argument(std::string(who) + ": reduce-scatter schedule required");
}

}  // namespace

Digraph line_graph(const Digraph& g) {
  std::vector<Digraph::Arc> arcs;
  for (int a = 0; a < g.arc_count(); ++a)
    for (int b : g.out_arcs(g.arc(a).dst)) arcs.push_back({a, b});
  return Digraph(std::max(g.arc_count(), 1), std::move(arcs), "L(" + g.label() + ")");
}

namespace {

// Line-arc id of (a -> b); line arcs are emitted a-major, b ascending within
// out_arcs(head(a)).
struct LineArcIndex {
  std::vector<int> offset;
  const Digraph* base;
  explicit LineArcIndex(const Digraph& g) : base(&g) {
    offset.resize(static_cast<std::size_t>(g.arc_count()) + 1, 0);
    for (int a = 0; a < g.arc_count(); ++a)
      offset[static_cast<std::size_t>(a) + 1] =
          offset[static_cast<std::size_t>(a)] + g.out_degree(g.arc(a).dst);
  }
  int id(int a, int b) const {
    const auto& outs = base->out_arcs(base->arc(a).dst);
    auto it = std::lower_bound(outs.begin(), outs.end(), b);
    if (it == outs.end() || *it != b) throw std::logic_error("line arc lookup failed");
    return offset[static_cast<std::size_t>(a)] + static_cast<int>(it - outs.begin());
  }
};

}  // namespace

Schedule line_expand_schedule(const Digraph& g, const Schedule& s) {
  require_rs(s, "line_expand_schedule");
  require_regular(g, "line_expand_schedule");
  check_schedule_well_formed(s, g);
  LineArcIndex idx(g);
  std::vector<Transfer> out;
  // Replay each base transfer for every (root out-arc, sender in-arc) pair,
  // skipping the combination where the sender line node is the root itself.
  for (const auto& tr : s.transfers) {
    const auto& arc = g.arc(tr.arc);
    for (int root_arc : g.out_arcs(tr.root)) {
      for (int snd_arc : g.in_arcs(arc.src)) {
        if (snd_arc == root_arc) continue;
        out.push_back({root_arc, tr.chunk, idx.id(snd_arc, tr.arc), tr.step});
      }
    }
  }
  // One extra step delivers the full shard over every non-loop line arc.
  const auto full = ChunkSet::full();
  for (int a = 0; a < g.arc_count(); ++a)
    for (int b : g.out_arcs(g.arc(a).dst)) {
      if (a == b) continue;
      out.push_back({b, full, idx.id(a, b), s.t_max + 1});
    }
  return make_schedule(Collective::ReduceScatter, std::move(out));
}

IsoMap line_lift_witness(const Digraph& g, const IsoMap& f) {
  return IsoMap{arc_isomorphism(transpose(g), f, g)};
}

Digraph degree_expand(const Digraph& g, int n) {
  if (n < 1) throw std::invalid_argument("degree_expand: n must be >= 1");
  for (const auto& a : g.arcs())
    if (a.src == a.dst) throw std::invalid_argument("degree_expand: self-loops not allowed");
  std::vector<Digraph::Arc> arcs;
  arcs.reserve(static_cast<std::size_t>(g.arc_count()) * n * n);
  for (const auto& a : g.arcs())
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) arcs.push_back({a.src * n + i, a.dst * n + j});
  return Digraph(g.node_count() * n, std::move(arcs), g.label() + "*" + std::to_string(n));
}

Schedule degree_expand_schedule(const Digraph& g, const Schedule& s, int n) {
  require_rs(s, "degree_expand_schedule");
  int d = require_regular(g, "degree_expand_schedule");
  check_schedule_well_formed(s, g);
  Digraph gx = degree_expand(g, n);
  const int nd = n * d;
  std::vector<Transfer> out;
  // Step 1: u_i scatters each sibling-rooted shard u_j (j != i) in nd equal
  // chunks over its out-arcs, ordered by (neighbor, arc id).
  for (int u = 0; u < g.node_count(); ++u) {
    for (int i = 0; i < n; ++i) {
      int ui = u * n + i;
      std::vector<int> outs = gx.out_arcs(ui);
      std::sort(outs.begin(), outs.end(), [&](int a, int b) {
        return std::make_pair(gx.arc(a).dst, a) < std::make_pair(gx.arc(b).dst, b);
      });
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        int root = u * n + j;
        for (int k = 0; k < nd; ++k)
          out.push_back({root, ChunkSet::interval(Rat(k, nd), Rat(k + 1, nd)),
                         outs[static_cast<std::size_t>(k)], 1});
      }
    }
  }
  // Base transfers shift one step and replay for every (i, j) copy pair.
  for (const auto& tr : s.transfers) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        int arc_id = tr.arc * n * n + i * n + j;
        out.push_back({tr.root * n + j, tr.chunk, arc_id, tr.step + 1});
      }
  }
  return make_schedule(Collective::ReduceScatter, std::move(out));
}

IsoMap degree_lift_witness(const Digraph& g, const IsoMap& f, int n) {
  std::vector<int> m(static_cast<std::size_t>(g.node_count()) * n);
  for (int u = 0; u < g.node_count(); ++u)
    for (int i = 0; i < n; ++i)
      m[static_cast<std::size_t>(u * n + i)] = f.mapping[static_cast<std::size_t>(u)] * n + i;
  return IsoMap{std::move(m)};
}

Digraph cartesian_product(const Digraph& g1, const Digraph& g2) {
  const int n2 = g2.node_count();
  std::vector<Digraph::Arc> arcs;
  for (const auto& a : g1.arcs())
    for (int y = 0; y < n2; ++y) arcs.push_back({a.src * n2 + y, a.dst * n2 + y});
  for (const auto& a : g2.arcs())
    for (int x = 0; x < g1.node_count(); ++x)
      arcs.push_back({x * n2 + a.src, x * n2 + a.dst});
  return Digraph(g1.node_count() * n2, std::move(arcs),
                 "(" + g1.label() + ")x(" + g2.label() + ")");
}

IsoMap product_lift_witness(const Digraph& g1, const IsoMap& f1, const Digraph& g2,
                            const IsoMap& f2) {
  const int n2 = g2.node_count();
  std::vector<int> m(static_cast<std::size_t>(g1.node_count()) * n2);
  for (int x = 0; x < g1.node_count(); ++x)
    for (int y = 0; y < n2; ++y)
      m[static_cast<std::size_t>(x * n2 + y)] =
          f1.mapping[static_cast<std::size_t>(x)] * n2 + f2.mapping[static_cast<std::size_t>(y)];
  return IsoMap{std::move(m)};
}

namespace {

// Coordinates for g^square-n, axis 0 most significant.
struct PowerIndex {
  int base_n;
  int n;
  std::vector<long> pow;
  PowerIndex(int N, int n_axes) : base_n(N), n(n_axes) {
    pow.resize(static_cast<std::size_t>(n) + 1, 1);
    for (int k = 1; k <= n; ++k)
      pow[static_cast<std::size_t>(k)] = pow[static_cast<std::size_t>(k - 1)] * N;
  }
  long nodes() const { return pow[static_cast<std::size_t>(n)]; }
  long encode(const std::vector<int>& coords) const {
    long v = 0;
    for (int k = 0; k < n; ++k) v = v * base_n + coords[static_cast<std::size_t>(k)];
    return v;
  }
};

}  // namespace

Digraph cartesian_power(const Digraph& g, int n) {
  if (n < 1) throw std::invalid_argument("cartesian_power: n must be >= 1");
  PowerIndex pi(g.node_count(), n);
  long total = pi.nodes();
  if (total > 2'000'000) throw std::overflow_error("cartesian_power: graph too large");
  std::vector<Digraph::Arc> arcs;
  long ctx_count = total / g.node_count();
  std::vector<int> coords(static_cast<std::size_t>(n), 0);
  for (int ax = 0; ax < n; ++ax) {
    for (const auto& a : g.arcs()) {
      for (long ctx = 0; ctx < ctx_count; ++ctx) {
        long rest = ctx;
        for (int k = n - 1; k >= 0; --k) {
          if (k == ax) continue;
          coords[static_cast<std::size_t>(k)] = static_cast<int>(rest % g.node_count());
          rest /= g.node_count();
        }
        coords[static_cast<std::size_t>(ax)] = a.src;
        long from = pi.encode(coords);
        coords[static_cast<std::size_t>(ax)] = a.dst;
        long to = pi.encode(coords);
        arcs.push_back({static_cast<int>(from), static_cast<int>(to)});
      }
    }
  }
  return Digraph(static_cast<int>(total), std::move(arcs),
                 "(" + g.label() + ")^" + std::to_string(n));
}

Schedule power_schedule(const Digraph& g, const Schedule& ag, int n) {
  if (ag.kind != Collective::AllGather)
    throw std::invalid_argument("power_schedule: allgather schedule required");
  require_regular(g, "power_schedule");
  check_schedule_well_formed(ag, g);
  if (n < 1) throw std::invalid_argument("power_schedule: n must be >= 1");
  const int N = g.node_count();
  PowerIndex pi(N, n);
  if (pi.nodes() > 200'000) throw std::overflow_error("power_schedule: graph too large");
  const long ctx_count = pi.nodes() / N;

  // Arc ids follow cartesian_power's layout: axis-major, base arc id, then
  // the packed coordinates of the remaining axes.
  auto arc_id_of = [&](int ax, int base_arc, const std::vector<int>& coords) {
    long ctx = 0;
    for (int k = 0; k < n; ++k) {
      if (k == ax) continue;
      ctx = ctx * N + coords[static_cast<std::size_t>(k)];
    }
    return static_cast<int>((static_cast<long>(ax) * g.arc_count() + base_arc) * ctx_count +
                            ctx);
  };

  const int T = ag.t_max;
  std::vector<Transfer> out;
  std::vector<int> coords(static_cast<std::size_t>(n), 0);
  auto fill = [&](const std::vector<int>& axes, long packed) {
    for (auto it = axes.rbegin(); it != axes.rend(); ++it) {
      coords[static_cast<std::size_t>(*it)] = static_cast<int>(packed % N);
      packed /= N;
    }
  };
  // Subshard i is swept along axes i, i+1, ..., wrapping; at any phase the n
  // sweeps occupy pairwise distinct axes, so no arc is shared.
  for (int i = 0; i < n; ++i) {
    Rat scale(1, n), offset(i, n);
    std::vector<int> sweep(static_cast<std::size_t>(n));
    for (int p = 0; p < n; ++p) sweep[static_cast<std::size_t>(p)] = (i + p) % n;
    for (int p = 0; p < n; ++p) {
      int ax = sweep[static_cast<std::size_t>(p)];
      std::vector<int> prev(sweep.begin(), sweep.begin() + p);
      std::vector<int> future(sweep.begin() + p + 1, sweep.end());
      long prev_count = 1;
      for (std::size_t k = 0; k < prev.size(); ++k) prev_count *= N;
      long future_count = 1;
      for (std::size_t k = 0; k < future.size(); ++k) future_count *= N;
      for (const auto& tr : ag.transfers) {
        const auto& arc = g.arc(tr.arc);
        ChunkSet chunk = tr.chunk.affine(scale, offset);
        int step = tr.step + p * T;
        for (long zi = 0; zi < future_count; ++zi) {
          for (long yi = 0; yi < prev_count; ++yi) {
            fill(future, zi);
            fill(prev, yi);
            coords[static_cast<std::size_t>(ax)] = arc.src;
            int arc_id = arc_id_of(ax, tr.arc, coords);
            // Roots range over the already-gathered axes independently of the
            // arc context.
            for (long xi = 0; xi < prev_count; ++xi) {
              fill(prev, xi);
              coords[static_cast<std::size_t>(ax)] = tr.root;
              long root = pi.encode(coords);
              out.push_back({static_cast<int>(root), chunk, arc_id, step});
            }
          }
        }
      }
    }
  }
  return make_schedule(Collective::AllGather, std::move(out));
}

IsoMap power_lift_witness(const Digraph& g, const IsoMap& f, int n) {
  PowerIndex pi(g.node_count(), n);
  std::vector<int> m(static_cast<std::size_t>(pi.nodes()));
  std::vector<int> coords(static_cast<std::size_t>(n));
  for (long v = 0; v < pi.nodes(); ++v) {
    long rest = v;
    for (int k = n - 1; k >= 0; --k) {
      coords[static_cast<std::size_t>(k)] =
          f.mapping[static_cast<std::size_t>(rest % g.node_count())];
      rest /= g.node_count();
    }
    m[static_cast<std::size_t>(v)] = static_cast<int>(pi.encode(coords));
  }
  return IsoMap{std::move(m)};
}

std::pair<Digraph, Schedule> to_undirected(const Digraph& g, const Schedule& rs,
                                           const IsoMap& f) {
  require_rs(rs, "to_undirected");
  check_schedule_well_formed(rs, g);
  Digraph gt = transpose(g);
  if (!verify_isomorphism(gt, g, f))
    throw std::invalid_argument("to_undirected: f is not a skew-symmetry witness");
  const int E = g.arc_count();
  std::vector<Digraph::Arc> arcs = g.arcs();
  for (const auto& a : gt.arcs()) arcs.push_back(a);
  Digraph undirected(g.node_count(), std::move(arcs), "undir(" + g.label() + ")");

  // Half one follows the original schedule; half two follows the image of
  // the schedule under the inverse witness, on the reverse-arc copies.
  std::vector<int> inv(f.mapping.size());
  for (std::size_t i = 0; i < f.mapping.size(); ++i)
    inv[static_cast<std::size_t>(f.mapping[i])] = static_cast<int>(i);
  Schedule mirrored = map_schedule(rs, g, IsoMap{inv}, gt);

  std::vector<Transfer> out;
  out.reserve(rs.transfers.size() * 2);
  for (const auto& tr : rs.transfers)
    out.push_back({tr.root, tr.chunk.affine(Rat(1, 2), Rat(0)), tr.arc, tr.step});
  for (const auto& tr : mirrored.transfers)
    out.push_back({tr.root, tr.chunk.affine(Rat(1, 2), Rat(1, 2)), tr.arc + E, tr.step});
  return {std::move(undirected), make_schedule(Collective::ReduceScatter, std::move(out))};
}

}  // namespace dctopo
