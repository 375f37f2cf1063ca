#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dctopo/chunkset.hpp"
#include "dctopo/digraph.hpp"
#include "dctopo/rational.hpp"

namespace dctopo {

enum class Collective { ReduceScatter, AllGather };

std::string collective_name(Collective c);

/// One timed send: node src(arc) sends root's chunk to dst(arc) at `step`.
/// For reduce-scatter the root is the destination of the data; for allgather
/// it is the source.
struct Transfer {
  int root;
  ChunkSet chunk;
  int arc;
  int step;
};

struct Schedule {
  Collective kind = Collective::ReduceScatter;
  int t_max = 0;
  std::vector<Transfer> transfers;
};

/// Builds a schedule with t_max = max step present; checks basic invariants.
Schedule make_schedule(Collective kind, std::vector<Transfer> transfers);

/// Throws if a transfer references a missing arc, a step outside [1, t_max],
/// or an empty chunk.
void check_schedule_well_formed(const Schedule& s, const Digraph& g);

/// alpha in seconds, bandwidth_bps in bits/s, model_bits in bits.
struct CostModel {
  double alpha;
  double bandwidth_bps;
  double model_bits;
  int degree;
};

/// Modeled runtime alpha*x + (M/B)*y with x in comm steps and y an exact
/// dimensionless bandwidth coefficient.
struct CostVector {
  long long x = 0;
  Rat y;
  double runtime(double alpha, double model_bits, double bandwidth_bps) const {
    return alpha * static_cast<double>(x) + model_bits / bandwidth_bps * y.to_double();
  }
};

double latency_T_L(const Schedule& s, const CostModel& cm);

struct BandwidthBreakdown {
  std::vector<Rat> per_step;  // max per-arc chunk measure, by step (1-based at index 0)
  Rat coefficient;            // y = (d/N) * sum of per-step maxima
};

/// Exact bandwidth coefficient of a schedule on a d-regular graph. Parallel
/// arcs are independent links of bandwidth B/d each.
BandwidthBreakdown bandwidth_coeff(const Schedule& s, const Digraph& g);

double bandwidth_T_B(const Schedule& s, const Digraph& g, const CostModel& cm);

struct ValidationReport {
  bool ok = true;
  struct Missing {
    int root;
    int node;  // uncovered source (reduce-scatter) / destination (allgather)
    ChunkSet uncovered;
  };
  std::vector<Missing> missing;
};

/// Checks the data-path coverage conditions of the collective definitions:
/// reduce-scatter needs every (source u, root v) pair connected by chunkwise
/// increasing-step paths covering the full shard; allgather needs the root's
/// shard to reach every node. Within a step, transfers see only pre-step
/// state.
ValidationReport validate(const Schedule& s, const Digraph& g);

/// Steps mirrored (t -> t_max - t + 1), arcs reversed (valid on transpose(g)),
/// kind flipped.
Schedule reverse_schedule(const Schedule& s);

/// Arc-level image of the node isomorphism f: the k-th parallel (u,v) arc of
/// g_from maps to the k-th parallel (f(u),f(v)) arc of g_to, ids ascending.
/// Throws if f is not an isomorphism.
std::vector<int> arc_isomorphism(const Digraph& g_from, const IsoMap& f, const Digraph& g_to);

/// Relabels roots and arcs through f; f must map g_from onto g_to
/// arc-for-arc (parallel arcs map positionally in ascending id order).
Schedule map_schedule(const Schedule& s, const Digraph& g_from, const IsoMap& f,
                      const Digraph& g_to);

/// reverse + map through a skew-symmetry witness: a schedule of the opposite
/// kind on the same graph, with identical costs.
Schedule dualize(const Schedule& s, const Digraph& g, const IsoMap& f);

struct BandwidthOptimalityReport {
  bool optimal = true;
  std::vector<std::string> violations;
};

/// Equal per-arc loads at every step, and per (node, root) sends that are
/// pairwise disjoint with union the full shard; cross-checked against
/// y == (N-1)/N. Allgather schedules are checked through their reverse.
BandwidthOptimalityReport check_bandwidth_optimal(const Schedule& s, const Digraph& g);

/// N > moore_bound(d, t_max - 1) for d-regular g.
bool check_moore_optimal(const Schedule& s, const Digraph& g);

/// Every transfer obeys the distance/step identity of shortest-path
/// schedules, and per (source, root) the sent chunks cover the shard.
bool is_shortest_path_schedule(const Schedule& s, const Digraph& g);

}  // namespace dctopo
