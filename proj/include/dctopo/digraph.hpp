#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace dctopo {

/// Hop distance used for unreachable pairs. Never a valid finite distance.
inline constexpr int kUnreachable = std::numeric_limits<int>::max();

/// Directed multigraph. Arcs are identified by dense ids (their position in
/// the arc list); parallel arcs and self-loops are allowed. Immutable after
/// construction.
class Digraph {
 public:
  struct Arc {
    int src;
    int dst;
  };

  Digraph() = default;
  Digraph(int node_count, std::vector<Arc> arcs, std::string label = "");

  int node_count() const { return n_; }
  int arc_count() const { return static_cast<int>(arcs_.size()); }
  const Arc& arc(int id) const { return arcs_[static_cast<std::size_t>(id)]; }
  const std::vector<Arc>& arcs() const { return arcs_; }
  const std::vector<int>& out_arcs(int u) const { return out_[static_cast<std::size_t>(u)]; }
  const std::vector<int>& in_arcs(int u) const { return in_[static_cast<std::size_t>(u)]; }
  int out_degree(int u) const { return static_cast<int>(out_[static_cast<std::size_t>(u)].size()); }
  int in_degree(int u) const { return static_cast<int>(in_[static_cast<std::size_t>(u)].size()); }
  const std::string& label() const { return label_; }

  bool operator==(const Digraph& o) const;

 private:
  int n_ = 0;
  std::vector<Arc> arcs_;
  std::vector<std::vector<int>> out_;  // arc ids, ascending
  std::vector<std::vector<int>> in_;
  std::string label_;
};

/// Node relabeling; mapping[i] is the image of node i.
struct IsoMap {
  std::vector<int> mapping;
  bool is_permutation() const;
};

Digraph build_digraph(int node_count, const std::vector<std::pair<int, int>>& arc_pairs,
                      std::string label = "");

/// d when every node has in-degree == out-degree == d, absent otherwise.
std::optional<int> regular_degree(const Digraph& g);

/// Arcs reversed, arc ids preserved.
Digraph transpose(const Digraph& g);

/// BFS hop counts from u; kUnreachable where no path exists.
std::vector<int> distances_from(const Digraph& g, int u);

/// Max over all ordered pairs; throws if g is not strongly connected.
int diameter(const Digraph& g);

bool strongly_connected(const Digraph& g);

/// [|N_1(u)|, ..., |N_ecc(u)|], counts of nodes at exact distance x.
std::vector<long> neighborhood_sizes(const Digraph& g, int u);

/// Sum_{i=0..k} d^i.
long long moore_bound(long long d, int k);

/// True iff f maps the arcs of a onto the arcs of b with multiplicity.
bool verify_isomorphism(const Digraph& a, const Digraph& b, const IsoMap& f);

enum class SkewSearchStatus { Found, Absent, BudgetExceeded };

struct SkewSearchResult {
  SkewSearchStatus status;
  std::optional<IsoMap> witness;  // from transpose(g) to g when Found
};

/// Backtracking isomorphism search from a onto b, refined by degree and
/// distance-profile signatures; deterministic lowest-index assignment. The
/// budget counts branch steps.
SkewSearchResult find_isomorphism(const Digraph& a, const Digraph& b,
                                  long long budget = 10'000'000);

/// Searches for an isomorphism from transpose(g) onto g (a skew-symmetry
/// witness).
SkewSearchResult find_skew_symmetry(const Digraph& g, long long budget = 10'000'000);

}  // namespace dctopo
