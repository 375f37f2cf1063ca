#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dctopo/base_graphs.hpp"
#include "dctopo/schedule.hpp"

namespace dctopo {

struct TopoExpr;
using TopoExprPtr = std::shared_ptr<const TopoExpr>;

/// Construction expression: a base graph or an expansion combinator applied
/// to sub-expressions.
struct TopoExpr {
  enum class Kind { Base, Line, Deg, Pow, Prod, Undir };
  Kind kind = Kind::Base;
  BaseSpec base;
  int param = 0;  // Deg / Pow exponent
  TopoExprPtr a, b;

  static TopoExprPtr make_base(BaseSpec spec);
  static TopoExprPtr line(TopoExprPtr e);
  static TopoExprPtr deg(TopoExprPtr e, int n);
  static TopoExprPtr pow(TopoExprPtr e, int n);
  static TopoExprPtr prod(TopoExprPtr l, TopoExprPtr r);
  static TopoExprPtr undir(TopoExprPtr e);
};

std::string print_expr(const TopoExpr& e);

/// Capabilities tracked through compositions; used for expansion eligibility
/// and Pareto dominance.
struct EntryTraits {
  bool bandwidth_optimal = false;
  bool sp_bandwidth_optimal = false;  // optimal shortest-path schedule is bandwidth optimal
  bool skew_symmetric = false;
  bool self_loops = false;
  bool simple = false;
};

enum class Provenance { Analytic, LpMeasured, Bound };

struct ParetoEntry {
  TopoExprPtr expr;
  long nodes = 0;
  int degree = 0;
  long x = 0;
  Rat y;
  EntryTraits traits;
  Provenance provenance = Provenance::Analytic;
  int depth = 1;       // non-line combinator height
  int line_count = 0;

  double runtime(double alpha, double model_bits, double bandwidth_bps) const {
    return alpha * static_cast<double>(x) + model_bits / bandwidth_bps * y.to_double();
  }
};

/// Memo for LP-derived bandwidth coefficients of lp-sourced bases.
class LpCache {
 public:
  Rat y_for(const BaseSpec& spec);

 private:
  std::map<std::string, Rat> cache_;
};

struct EnumLimits {
  int max_depth = 6;     // non-line combinator height
  int max_pow = 4;
  int max_lines = 6;
};

/// Exhaustive expansion search to the exact target (nodes, degree). The
/// frontier always carries the BiRing (even degree) and GenKautz fallbacks;
/// in fast mode the GenKautz bandwidth coefficient is the 2(N-1)/N upper
/// bound, tagged Provenance::Bound and excluded from winner selection.
std::vector<ParetoEntry> enumerate_frontier(long nodes, int degree, const EnumLimits& limits,
                                            LpCache& cache, bool fast);

struct BestChoice {
  ParetoEntry entry;
  double runtime_s = 0.0;
};

enum class CollectiveKind { RsAg, AllReduce };

/// Minimizes alpha*x + (M/B)*y (doubled for allreduce); ties by smaller x
/// then lexicographic expression.
std::optional<BestChoice> best_for(const std::vector<ParetoEntry>& entries, double alpha,
                                   double model_bits, double bandwidth_bps,
                                   CollectiveKind kind);

struct LowerBound {
  long x_star = 0;
  Rat y;
  double runtime_s = 0.0;
};

/// Moore-bound latency floor plus the (N-1)/N bandwidth floor.
LowerBound theoretical_lower_bound(long nodes, int degree, double alpha, double model_bits,
                                   double bandwidth_bps);

struct BaselineCosts {
  double ring_s = 0.0;
  double dbt_s = 0.0;
};

/// Allreduce closed forms for ring and double binary tree.
BaselineCosts baseline_costs(long nodes, double alpha, double model_bits,
                             double bandwidth_bps);

struct SweepRow {
  long nodes = 0;
  std::optional<BestChoice> best;
  bool fallback_only = false;
  BaselineCosts baselines;
  double lower_bound_s = 0.0;
};

std::vector<SweepRow> sweep(long n_lo, long n_hi, int degree, double alpha, double model_bits,
                            double bandwidth_bps, const EnumLimits& limits, LpCache& cache,
                            bool fast);

struct BuiltTopo {
  Digraph graph;
  Schedule schedule;  // reduce-scatter
  std::optional<IsoMap> skew_witness;
};

/// Builds the graph and a valid reduce-scatter schedule for an expression.
/// Canonical schedules where the family has one, otherwise the LP scheduler;
/// import-only bases (Diamond, DBJMod) fall back to their LP schedule.
BuiltTopo materialize(const TopoExpr& e);

/// (nodes, degree) derived bottom-up without building anything.
std::pair<long, int> derived_shape(const TopoExpr& e);

/// Modeled (x, y) for an arbitrary expression: base annotations (LP where
/// needed) composed through the expansion cost rules. Products of entries
/// without the shortest-path/bandwidth-optimal property are measured by
/// running the LP scheduler on the materialized product.
CostVector cost_for_expr(const TopoExpr& e, LpCache& cache);

}  // namespace dctopo
