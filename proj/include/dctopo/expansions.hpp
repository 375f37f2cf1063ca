#pragma once

#include <utility>

#include "dctopo/digraph.hpp"
#include "dctopo/schedule.hpp"

namespace dctopo {

/// Line graph: one node per arc of g; an arc from a to b wherever a's head is
/// b's tail. Self-loops and parallel arcs are handled (line-graph nodes are
/// arc ids).
Digraph line_graph(const Digraph& g);

/// Lifts a reduce-scatter schedule on d-regular g onto line_graph(g):
/// every root/sender arc combination replays the base transfer, plus a final
/// full-shard hop at t_max + 1. Adds exactly one comm step; bandwidth grows
/// by at most (M/B)/N.
Schedule line_expand_schedule(const Digraph& g, const Schedule& s);

/// Skew-symmetry witness for line_graph(g) from a witness for g.
IsoMap line_lift_witness(const Digraph& g, const IsoMap& f);

/// n sibling copies per node, complete bipartite wiring along each original
/// arc. Requires g without self-loops. Node (u, i) has index u*n + i.
Digraph degree_expand(const Digraph& g, int n);

/// Step 1 scatters each sibling-rooted shard in n*d equal chunks across the
/// sender's out-arcs (ascending (neighbor, arc id) order); the base schedule
/// replays shifted one step for every (i, j) copy pair.
Schedule degree_expand_schedule(const Digraph& g, const Schedule& s, int n);

IsoMap degree_lift_witness(const Digraph& g, const IsoMap& f, int n);

/// Row-major product: node (a, b) has index a * |V2| + b. Axis-1 arcs come
/// first, then axis-2 arcs.
Digraph cartesian_product(const Digraph& g1, const Digraph& g2);

IsoMap product_lift_witness(const Digraph& g1, const IsoMap& f1, const Digraph& g2,
                            const IsoMap& f2);

/// n-fold Cartesian power; node = sum coord_i * N^(n-1-i) (axis 0 most
/// significant). Arcs grouped by axis, then base arc id, then context.
Digraph cartesian_power(const Digraph& g, int n);

/// Allgather schedule on g^square-n from an allgather schedule on g: n
/// rotated axis sweeps run simultaneously on the n equal subshards, with no
/// two sweeps sharing an axis in any phase.
Schedule power_schedule(const Digraph& g, const Schedule& ag, int n);

IsoMap power_lift_witness(const Digraph& g, const IsoMap& f, int n);

/// G union G^T as a 2d-regular digraph (reverse arcs appended after the
/// originals) with the shard split in half: one half follows the schedule,
/// the other its witness-mapped image on the reverse arcs. Costs unchanged.
std::pair<Digraph, Schedule> to_undirected(const Digraph& g, const Schedule& rs,
                                           const IsoMap& f);

}  // namespace dctopo
