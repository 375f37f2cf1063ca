#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dctopo/digraph.hpp"
#include "dctopo/schedule.hpp"

namespace dctopo {

enum class BaseFamily {
  Complete,
  CompleteBipartite,
  Circulant,
  UniRing,
  BiRing,
  Torus,
  Hypercube,
  Hamming,
  DeBruijn,
  DBJMod,
  GenKautz,
  Diamond,
  CycleMesh,
};

struct BaseSpec {
  BaseFamily family;
  std::vector<long> params;
  std::string name() const;
  bool operator==(const BaseSpec& o) const = default;
};

enum class ScheduleSource { Canonical, Lp, ImportOnly };

/// Static facts about a base family instance. latency_x/bandwidth_y are the
/// closed-form values where the family has them; absent means "compute by
/// BFS" / "compute by LP". bandwidth_optimal and sp_bandwidth_optimal refer
/// to the best known schedule for the topology (for import-only families
/// that schedule may not be materializable here).
struct BaseAnnotations {
  int degree = 0;
  long nodes = 0;
  std::optional<long> latency_x;
  std::optional<Rat> bandwidth_y;
  bool bandwidth_optimal = false;
  bool sp_bandwidth_optimal = false;  // admits a bandwidth-optimal shortest-path schedule
  bool skew_symmetric = false;
  bool self_loops = false;
  bool multi_edge = false;
  bool simple = false;
  ScheduleSource source = ScheduleSource::Lp;
};

struct BuiltBase {
  Digraph graph;
  std::optional<Schedule> schedule;  // canonical reduce-scatter when the family has one
  std::optional<IsoMap> skew_witness;
  BaseAnnotations ann;
};

/// Annotations without building the graph. Throws on invalid parameters.
BaseAnnotations annotations_for(const BaseSpec& spec);

BuiltBase build_complete(long m);
BuiltBase build_complete_bipartite(long d);
BuiltBase build_circulant(long n, long d);
BuiltBase build_uni_ring(long d, long m);
BuiltBase build_bi_ring(long d, long m);
BuiltBase build_torus(long l, long n);
BuiltBase build_hypercube(long n);
BuiltBase build_hamming(long n, long q);
BuiltBase build_de_bruijn(long d, long n);
BuiltBase build_dbj_mod(long d, long n);
BuiltBase build_gen_kautz(long d, long m);
BuiltBase build_diamond();
BuiltBase build_cycle_mesh(long r, long c);

BuiltBase build_base(const BaseSpec& spec);

}  // namespace dctopo
