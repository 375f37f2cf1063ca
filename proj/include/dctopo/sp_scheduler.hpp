#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dctopo/digraph.hpp"
#include "dctopo/schedule.hpp"

namespace dctopo {

/// The per-(vertex, comm step) load-balancing program: split each distance-x
/// destination's unit of data across the out-arcs that lie on shortest paths,
/// minimizing the maximum per-arc total.
struct SpLpInstance {
  int vertex = -1;
  int step = 1;
  int dist_class = 1;            // x = D(G) + 1 - step
  std::vector<int> arc_ids;      // candidate out-arcs, ascending ids
  struct Dest {
    int node;
    std::vector<int> arcs;       // indices into arc_ids (shortest-path arcs)
  };
  std::vector<Dest> dests;
};

struct SpLpSolution {
  std::vector<std::vector<Rat>> fractions;  // per dest, aligned with Dest::arcs
  Rat objective;                            // exact max per-arc load after snapping
};

/// Dense-simplex solve of one instance. Destinations with identical arc sets
/// are aggregated before the solve and split back evenly; floating results
/// are snapped to small-denominator rationals and re-checked exactly.
SpLpSolution solve_lp(const SpLpInstance& inst);

/// Instance in LP text format (for external cross-checking).
std::string lp_instance_text(const SpLpInstance& inst);

struct SpScheduleResult {
  Schedule schedule;       // reduce-scatter
  CostVector cost;         // x = D(G), y = (d/N) * sum_t max_u U_{u,t}
  std::vector<Rat> step_u; // max_u U_{u,t} per step
};

/// Optimal shortest-path reduce-scatter schedule via one LP per (vertex,
/// step). Requires strongly connected, regular g.
SpScheduleResult lp_schedule(const Digraph& g);

/// Cost only (no schedule materialization); same LPs.
CostVector lp_cost(const Digraph& g);

/// Shard divisible into at most P chunks: LP relaxation rounded per
/// destination by largest remainder (ties to the lowest arc id).
SpScheduleResult integer_schedule(const Digraph& g, int granularity);

/// Vertex-independent neighborhood profile and exact per-arc loads
/// (M/N) * N_x / d at every step.
bool check_sp_bandwidth_optimal(const Digraph& g, const Schedule& s);

}  // namespace dctopo
