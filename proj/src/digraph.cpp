#include "dctopo/digraph.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <stdexcept>

namespace dctopo {

Digraph::Digraph(int node_count, std::vector<Arc> arcs, std::string label)
    : n_(node_count), arcs_(std::move(arcs)), label_(std::move(label)) {
  if (n_ <= 0) throw std::invalid_argument("digraph: node count must be positive");
  out_.resize(static_cast<std::size_t>(n_));
  in_.resize(static_cast<std::size_t>(n_));
  for (std::size_t id = 0; id < arcs_.size(); ++id) {
    const Arc& a = arcs_[id];
    if (a.src < 0 || a.src >= n_ || a.dst < 0 || a.dst >= n_)
      throw std::out_of_range("digraph: arc endpoint out of range");
    out_[static_cast<std::size_t>(a.src)].push_back(static_cast<int>(id));
    in_[static_cast<std::size_t>(a.dst)].push_back(static_cast<int>(id));
  }
}

bool Digraph::operator==(const Digraph& o) const {
  if (n_ != o.n_ || arcs_.size() != o.arcs_.size()) return false;
  for (std::size_t i = 0; i < arcs_.size(); ++i)
    if (arcs_[i].src != o.arcs_[i].src || arcs_[i].dst != o.arcs_[i].dst) return false;
  return true;
}

bool IsoMap::is_permutation() const {
  std::vector<char> seen(mapping.size(), 0);
  for (int v : mapping) {
    if (v < 0 || v >= static_cast<int>(mapping.size()) || seen[static_cast<std::size_t>(v)]) return false;
    seen[static_cast<std::size_t>(v)] = 1;
  }
  return true;
}

Digraph build_digraph(int node_count, const std::vector<std::pair<int, int>>& arc_pairs,
                      std::string label) {
  std::vector<Digraph::Arc> arcs;
  arcs.reserve(arc_pairs.size());
  for (const auto& [s, d] : arc_pairs) arcs.push_back({s, d});
  return Digraph(node_count, std::move(arcs), std::move(label));
}

std::optional<int> regular_degree(const Digraph& g) {
  if (g.node_count() == 0) return std::nullopt;
  int d = g.out_degree(0);
  for (int u = 0; u < g.node_count(); ++u)
    if (g.out_degree(u) != d || g.in_degree(u) != d) return std::nullopt;
  return d;
}

Digraph transpose(const Digraph& g) {
  std::vector<Digraph::Arc> arcs;
  arcs.reserve(static_cast<std::size_t>(g.arc_count()));
  for (const auto& a : g.arcs()) arcs.push_back({a.dst, a.src});
  return Digraph(g.node_count(), std::move(arcs), g.label());
}

std::vector<int> distances_from(const Digraph& g, int u) {
  if (u < 0 || u >= g.node_count()) throw std::out_of_range("distances_from: node out of range");
  std::vector<int> dist(static_cast<std::size_t>(g.node_count()), kUnreachable);
  std::deque<int> q;
  dist[static_cast<std::size_t>(u)] = 0;
  q.push_back(u);
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    for (int id : g.out_arcs(v)) {
      int w = g.arc(id).dst;
      if (dist[static_cast<std::size_t>(w)] == kUnreachable) {
        dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(v)] + 1;
        q.push_back(w);
      }
    }
  }
  return dist;
}

bool strongly_connected(const Digraph& g) {
  auto d = distances_from(g, 0);
  for (int x : d)
    if (x == kUnreachable) return false;
  auto dt = distances_from(transpose(g), 0);
  for (int x : dt)
    if (x == kUnreachable) return false;
  return true;
}

int diameter(const Digraph& g) {
  int best = 0;
  for (int u = 0; u < g.node_count(); ++u) {
    auto d = distances_from(g, u);
    for (int x : d) {
      if (x == kUnreachable) throw std::domain_error("diameter: graph not strongly connected");
      best = std::max(best, x);
    }
  }
  return best;
}

std::vector<long> neighborhood_sizes(const Digraph& g, int u) {
  auto d = distances_from(g, u);
  int ecc = 0;
  for (int x : d) {
    if (x == kUnreachable) throw std::domain_error("neighborhood_sizes: graph not strongly connected");
    ecc = std::max(ecc, x);
  }
  std::vector<long> counts(static_cast<std::size_t>(ecc), 0);
  for (int x : d)
    if (x >= 1) ++counts[static_cast<std::size_t>(x - 1)];
  return counts;
}

long long moore_bound(long long d, int k) {
  if (d < 1 || k < 0) throw std::invalid_argument("moore_bound: need d >= 1, k >= 0");
  long long sum = 0, pw = 1;
  for (int i = 0; i <= k; ++i) {
    sum += pw;
    if (sum < 0) throw std::overflow_error("moore_bound: overflow");
    if (i < k) {
      if (pw > std::numeric_limits<long long>::max() / std::max<long long>(d, 1))
        throw std::overflow_error("moore_bound: overflow");
      pw *= d;
    }
  }
  return sum;
}

namespace {

// Arc-count matrix keyed by (src, dst).
std::map<std::pair<int, int>, int> arc_counts(const Digraph& g) {
  std::map<std::pair<int, int>, int> m;
  for (const auto& a : g.arcs()) ++m[{a.src, a.dst}];
  return m;
}

}  // namespace

bool verify_isomorphism(const Digraph& a, const Digraph& b, const IsoMap& f) {
  if (a.node_count() != b.node_count()) return false;
  if (static_cast<int>(f.mapping.size()) != a.node_count() || !f.is_permutation()) return false;
  if (a.arc_count() != b.arc_count()) return false;
  auto cb = arc_counts(b);
  std::map<std::pair<int, int>, int> ca_mapped;
  for (const auto& arc : a.arcs())
    ++ca_mapped[{f.mapping[static_cast<std::size_t>(arc.src)],
                 f.mapping[static_cast<std::size_t>(arc.dst)]}];
  return ca_mapped == cb;
}

namespace {

struct NodeSig {
  int out_deg;
  int in_deg;
  int self_loops;
  std::vector<long> out_profile;
  std::vector<long> in_profile;
  bool operator==(const NodeSig& o) const = default;
};

std::vector<NodeSig> signatures(const Digraph& g) {
  std::vector<NodeSig> sig(static_cast<std::size_t>(g.node_count()));
  Digraph gt = transpose(g);
  for (int u = 0; u < g.node_count(); ++u) {
    auto& s = sig[static_cast<std::size_t>(u)];
    s.out_deg = g.out_degree(u);
    s.in_deg = g.in_degree(u);
    s.self_loops = 0;
    for (int id : g.out_arcs(u))
      if (g.arc(id).dst == u) ++s.self_loops;
    auto dist_hist = [&](const Digraph& gg) {
      auto d = distances_from(gg, u);
      int ecc = 0;
      for (int x : d)
        if (x != kUnreachable) ecc = std::max(ecc, x);
      std::vector<long> h(static_cast<std::size_t>(ecc + 2), 0);
      for (int x : d) {
        if (x == kUnreachable)
          ++h.back();
        else
          ++h[static_cast<std::size_t>(x)];
      }
      return h;
    };
    s.out_profile = dist_hist(g);
    s.in_profile = dist_hist(gt);
  }
  return sig;
}

}  // namespace

SkewSearchResult find_isomorphism(const Digraph& gt, const Digraph& g, long long budget) {
  if (gt.node_count() != g.node_count() || gt.arc_count() != g.arc_count())
    return {SkewSearchStatus::Absent, std::nullopt};
  const int n = g.node_count();
  // Arc-count matrices for O(1) consistency checks.
  auto src_counts = arc_counts(gt);
  auto dst_counts = arc_counts(g);
  auto src_sig = signatures(gt);
  auto dst_sig = signatures(g);

  // Candidate target lists per source node, ascending for determinism.
  std::vector<std::vector<int>> cand(static_cast<std::size_t>(n));
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v)
      if (src_sig[static_cast<std::size_t>(u)] == dst_sig[static_cast<std::size_t>(v)])
        cand[static_cast<std::size_t>(u)].push_back(v);
    if (cand[static_cast<std::size_t>(u)].empty())
      return {SkewSearchStatus::Absent, std::nullopt};
  }

  std::vector<int> assign(static_cast<std::size_t>(n), -1);
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  long long steps = 0;
  bool exhausted_budget = false;

  auto count_src = [&](int a, int b) {
    auto it = src_counts.find({a, b});
    return it == src_counts.end() ? 0 : it->second;
  };
  auto count_dst = [&](int a, int b) {
    auto it = dst_counts.find({a, b});
    return it == dst_counts.end() ? 0 : it->second;
  };

  // Assign source nodes 0..n-1 in order; candidates ascending, so the first
  // witness found is the lexicographically least assignment.
  auto rec = [&](auto&& self, int u) -> bool {
    if (u == n) return true;
    for (int v : cand[static_cast<std::size_t>(u)]) {
      if (used[static_cast<std::size_t>(v)]) continue;
      if (++steps > budget) {
        exhausted_budget = true;
        return false;
      }
      bool ok = count_src(u, u) == count_dst(v, v);
      if (ok) {
        for (int w = 0; w < u && ok; ++w) {
          int fw = assign[static_cast<std::size_t>(w)];
          ok = count_src(u, w) == count_dst(v, fw) && count_src(w, u) == count_dst(fw, v);
        }
      }
      if (!ok) continue;
      assign[static_cast<std::size_t>(u)] = v;
      used[static_cast<std::size_t>(v)] = 1;
      if (self(self, u + 1)) return true;
      if (exhausted_budget) return false;
      assign[static_cast<std::size_t>(u)] = -1;
      used[static_cast<std::size_t>(v)] = 0;
    }
    return false;
  };

  if (rec(rec, 0)) {
    IsoMap f{assign};
    return {SkewSearchStatus::Found, f};
  }
  if (exhausted_budget) return {SkewSearchStatus::BudgetExceeded, std::nullopt};
  return {SkewSearchStatus::Absent, std::nullopt};
}

SkewSearchResult find_skew_symmetry(const Digraph& g, long long budget) {
  return find_isomorphism(transpose(g), g, budget);
}

}  // namespace dctopo
