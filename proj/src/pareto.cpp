#include "dctopo/pareto.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dctopo/expansions.hpp"
#include "dctopo/sp_scheduler.hpp"

namespace dctopo {

TopoExprPtr TopoExpr::make_base(BaseSpec spec) {
  auto e = std::make_shared<TopoExpr>();
  e->kind = Kind::Base;
  e->base = std::move(spec);
  return e;
}

TopoExprPtr TopoExpr::line(TopoExprPtr e) {
  auto r = std::make_shared<TopoExpr>();
  r->kind = Kind::Line;
  r->a = std::move(e);
  return r;
}

TopoExprPtr TopoExpr::deg(TopoExprPtr e, int n) {
  auto r = std::make_shared<TopoExpr>();
  r->kind = Kind::Deg;
  r->a = std::move(e);
  r->param = n;
  return r;
}

TopoExprPtr TopoExpr::pow(TopoExprPtr e, int n) {
  auto r = std::make_shared<TopoExpr>();
  r->kind = Kind::Pow;
  r->a = std::move(e);
  r->param = n;
  return r;
}

TopoExprPtr TopoExpr::prod(TopoExprPtr l, TopoExprPtr r) {
  auto e = std::make_shared<TopoExpr>();
  e->kind = Kind::Prod;
  e->a = std::move(l);
  e->b = std::move(r);
  return e;
}

TopoExprPtr TopoExpr::undir(TopoExprPtr e) {
  auto r = std::make_shared<TopoExpr>();
  r->kind = Kind::Undir;
  r->a = std::move(e);
  return r;
}

std::string print_expr(const TopoExpr& e) {
  switch (e.kind) {
    case TopoExpr::Kind::Base: return e.base.name();
    case TopoExpr::Kind::Line: return "L(" + print_expr(*e.a) + ")";
    case TopoExpr::Kind::Deg:
      return "Deg(" + print_expr(*e.a) + "," + std::to_string(e.param) + ")";
    case TopoExpr::Kind::Pow:
      return "Pow(" + print_expr(*e.a) + "," + std::to_string(e.param) + ")";
    case TopoExpr::Kind::Prod:
      return "Prod(" + print_expr(*e.a) + "," + print_expr(*e.b) + ")";
    case TopoExpr::Kind::Undir: return "Undir(" + print_expr(*e.a) + ")";
  }
  return "?";
}

std::pair<long, int> derived_shape(const TopoExpr& e) {
  switch (e.kind) {
    case TopoExpr::Kind::Base: {
      auto ann = annotations_for(e.base);
      return {ann.nodes, ann.degree};
    }
    case TopoExpr::Kind::Line: {
      auto [n, d] = derived_shape(*e.a);
      return {n * d, d};
    }
    case TopoExpr::Kind::Deg: {
      auto [n, d] = derived_shape(*e.a);
      return {n * e.param, d * e.param};
    }
    case TopoExpr::Kind::Pow: {
      auto [n, d] = derived_shape(*e.a);
      long nn = 1;
      for (int i = 0; i < e.param; ++i) nn *= n;
      return {nn, d * e.param};
    }
    case TopoExpr::Kind::Prod: {
      auto [n1, d1] = derived_shape(*e.a);
      auto [n2, d2] = derived_shape(*e.b);
      return {n1 * n2, d1 + d2};
    }
    case TopoExpr::Kind::Undir: {
      auto [n, d] = derived_shape(*e.a);
      return {n, 2 * d};
    }
  }
  throw std::logic_error("derived_shape: bad expression");
}

Rat LpCache::y_for(const BaseSpec& spec) {
  auto key = spec.name();
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  auto built = build_base(spec);
  Rat y = lp_cost(built.graph).y;
  cache_.emplace(key, y);
  return y;
}

namespace {

// Traits composition mirrors the expansion cost rules below.
ParetoEntry apply_line(const ParetoEntry& e) {
  ParetoEntry r = e;
  r.expr = TopoExpr::line(e.expr);
  r.nodes = e.nodes * e.degree;
  r.x = e.x + 1;
  r.y = e.y + Rat(1, e.nodes);
  r.line_count = e.line_count + 1;
  r.traits.bandwidth_optimal = false;  // y >= 1 > (N'-1)/N'
  r.traits.sp_bandwidth_optimal = false;
  // Skew-symmetry, self-loops (and hence simplicity) carry over.
  return r;
}

ParetoEntry apply_deg(const ParetoEntry& e, int n) {
  ParetoEntry r = e;
  r.expr = TopoExpr::deg(e.expr, n);
  r.nodes = e.nodes * n;
  r.degree = e.degree * n;
  r.x = e.x + 1;
  r.y = e.y + Rat(n - 1, static_cast<long>(n) * e.nodes);
  r.depth = e.depth + 1;
  r.traits.sp_bandwidth_optimal = false;
  return r;  // bandwidth optimality preserved
}

ParetoEntry apply_pow(const ParetoEntry& e, int n) {
  ParetoEntry r = e;
  r.expr = TopoExpr::pow(e.expr, n);
  long nn = 1;
  for (int i = 0; i < n; ++i) nn *= e.nodes;
  r.nodes = nn;
  r.degree = e.degree * n;
  r.x = e.x * n;
  r.y = e.y * Rat(e.nodes, e.nodes - 1) * Rat(nn - 1, nn);
  r.depth = e.depth + 1;
  r.traits.sp_bandwidth_optimal =
      e.traits.sp_bandwidth_optimal && e.traits.simple && !e.traits.self_loops;
  return r;
}

ParetoEntry apply_prod(const ParetoEntry& a, const ParetoEntry& b) {
  ParetoEntry r;
  r.expr = TopoExpr::prod(a.expr, b.expr);
  r.nodes = a.nodes * b.nodes;
  r.degree = a.degree + b.degree;
  r.x = a.x + b.x;
  r.y = Rat(r.nodes - 1, r.nodes);
  r.depth = std::max(a.depth, b.depth) + 1;
  r.line_count = a.line_count + b.line_count;
  r.provenance = Provenance::Analytic;
  r.traits.bandwidth_optimal = true;
  r.traits.sp_bandwidth_optimal = true;
  r.traits.skew_symmetric = a.traits.skew_symmetric && b.traits.skew_symmetric;
  r.traits.simple = a.traits.simple && b.traits.simple;
  r.traits.self_loops = a.traits.self_loops || b.traits.self_loops;
  return r;
}

ParetoEntry apply_undir(const ParetoEntry& e) {
  ParetoEntry r = e;
  r.expr = TopoExpr::undir(e.expr);
  r.degree = 2 * e.degree;
  r.depth = e.depth + 1;
  r.traits.sp_bandwidth_optimal = false;
  r.traits.skew_symmetric = true;  // G union G^T is its own transpose
  r.traits.simple = false;         // 2-cycles in G become parallel arcs
  return r;
}

bool caps_superset(const EntryTraits& a, const EntryTraits& b) {
  // a offers at least the capabilities of b (self-loops are a liability).
  return (a.bandwidth_optimal || !b.bandwidth_optimal) &&
         (a.sp_bandwidth_optimal || !b.sp_bandwidth_optimal) &&
         (a.skew_symmetric || !b.skew_symmetric) && (a.simple || !b.simple) &&
         (!a.self_loops || b.self_loops);
}

bool dominates(const ParetoEntry& a, const ParetoEntry& b) {
  return a.x <= b.x && a.y <= b.y && caps_superset(a.traits, b.traits) &&
         a.provenance != Provenance::Bound;
}

bool same_key(const ParetoEntry& a, const ParetoEntry& b) {
  return a.x == b.x && a.y == b.y && caps_superset(a.traits, b.traits) &&
         caps_superset(b.traits, a.traits) && a.provenance == b.provenance;
}

struct Frontier {
  std::vector<ParetoEntry> entries;

  bool insert(ParetoEntry e) {
    for (const auto& cur : entries)
      if (same_key(cur, e) || dominates(cur, e)) return false;
    entries.erase(std::remove_if(entries.begin(), entries.end(),
                                 [&](const ParetoEntry& cur) { return dominates(e, cur); }),
                  entries.end());
    entries.push_back(std::move(e));
    return true;
  }
};

ParetoEntry entry_for_base(const BaseSpec& spec, LpCache& cache, bool fast, bool y_bound_ok) {
  auto ann = annotations_for(spec);
  ParetoEntry e;
  e.expr = TopoExpr::make_base(spec);
  e.nodes = ann.nodes;
  e.degree = ann.degree;
  e.traits = {ann.bandwidth_optimal, ann.sp_bandwidth_optimal, ann.skew_symmetric,
              ann.self_loops, ann.simple};
  if (ann.latency_x)
    e.x = *ann.latency_x;
  else
    e.x = diameter(build_base(spec).graph);
  if (ann.bandwidth_y) {
    e.y = *ann.bandwidth_y;
    e.provenance = Provenance::Analytic;
  } else if (fast && y_bound_ok) {
    e.y = Rat(2) * Rat(ann.nodes - 1, ann.nodes);
    e.provenance = Provenance::Bound;
  } else {
    e.y = cache.y_for(spec);
    e.provenance = Provenance::LpMeasured;
  }
  return e;
}

}  // namespace

std::vector<ParetoEntry> enumerate_frontier(long nodes, int degree, const EnumLimits& limits,
                                            LpCache& cache, bool fast) {
  if (nodes < 2 || degree < 1) throw std::invalid_argument("enumerate: need N >= 2, d >= 1");
  // States keyed by (N, d); only sizes dividing the target can ever reach it,
  // because every combinator multiplies the node count by an integer.
  std::map<std::pair<long, int>, Frontier> states;
  auto feasible = [&](long n, int d) {
    return n >= 2 && n <= nodes && nodes % n == 0 && d >= 1 && d <= degree;
  };
  auto add = [&](ParetoEntry e) {
    if (!feasible(e.nodes, e.degree)) return false;
    return states[{e.nodes, e.degree}].insert(std::move(e));
  };

  // Base seeds.
  for (long m = 2; m <= std::min<long>(degree + 1, nodes); ++m)
    add(entry_for_base({BaseFamily::Complete, {m}}, cache, fast, false));
  for (long d0 = 1; d0 <= degree; ++d0)
    if (2 * d0 <= nodes)
      add(entry_for_base({BaseFamily::CompleteBipartite, {d0}}, cache, fast, false));
  for (long d0 = 1; d0 <= degree; ++d0)
    if (d0 + 2 <= nodes)
      add(entry_for_base({BaseFamily::Circulant, {d0 + 2, d0}}, cache, fast, false));
  for (long d0 = 1; d0 <= degree; ++d0)
    for (long m = 2; m <= nodes; ++m)
      if (feasible(m, static_cast<int>(d0)))
        add(entry_for_base({BaseFamily::UniRing, {d0, m}}, cache, fast, false));
  for (long d0 = 2; d0 <= degree; d0 += 2)
    for (long m = 3; m <= nodes; ++m)
      if (feasible(m, static_cast<int>(d0)))
        add(entry_for_base({BaseFamily::BiRing, {d0, m}}, cache, fast, false));
  for (long d0 = 2; d0 <= degree; ++d0) {
    for (long N = d0, k = 1; N <= nodes; N *= d0, ++k)
      if (k >= 1 && feasible(N, static_cast<int>(d0)))
        add(entry_for_base({BaseFamily::DeBruijn, {d0, k}}, cache, fast, false));
  }
  for (const auto& p : {std::pair<long, long>{2, 3}, {2, 4}, {3, 2}, {4, 2}}) {
    auto ann = annotations_for({BaseFamily::DBJMod, {p.first, p.second}});
    if (feasible(ann.nodes, ann.degree))
      add(entry_for_base({BaseFamily::DBJMod, {p.first, p.second}}, cache, fast, false));
  }
  if (feasible(8, 2)) add(entry_for_base({BaseFamily::Diamond, {}}, cache, fast, false));
  // Fallbacks at the exact target size: always present.
  if (degree >= 1 && nodes >= degree + 1)
    add(entry_for_base({BaseFamily::GenKautz, {degree, nodes}}, cache, fast, true));
  if (degree % 2 == 0 && nodes >= 3)
    add(entry_for_base({BaseFamily::BiRing, {degree, nodes}}, cache, fast, false));

  // Fixpoint closure under the expansion combinators.
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<ParetoEntry> snapshot;
    for (const auto& [key, fr] : states)
      snapshot.insert(snapshot.end(), fr.entries.begin(), fr.entries.end());
    for (const auto& e : snapshot) {
      if (e.line_count < limits.max_lines && feasible(e.nodes * e.degree, e.degree))
        changed |= add(apply_line(e));
      if (e.depth < limits.max_depth) {
        if (!e.traits.self_loops)
          for (int n = 2; e.degree * n <= degree; ++n)
            if (feasible(e.nodes * n, e.degree * n)) changed |= add(apply_deg(e, n));
        for (int n = 2; n <= limits.max_pow && e.degree * n <= degree; ++n) {
          long nn = 1;
          bool of = false;
          for (int i = 0; i < n; ++i) {
            if (nn > nodes / std::max(e.nodes, 1L)) {
              of = true;
              break;
            }
            nn *= e.nodes;
          }
          if (!of && feasible(nn, e.degree * n)) changed |= add(apply_pow(e, n));
        }
        if (e.traits.skew_symmetric && feasible(e.nodes, 2 * e.degree))
          changed |= add(apply_undir(e));
      }
    }
    // Products of shortest-path bandwidth-optimal simple entries.
    for (const auto& a : snapshot) {
      if (!a.traits.sp_bandwidth_optimal || !a.traits.simple || a.depth >= limits.max_depth)
        continue;
      for (const auto& b : snapshot) {
        if (!b.traits.sp_bandwidth_optimal || !b.traits.simple || b.depth >= limits.max_depth)
          continue;
        if (a.nodes > b.nodes) continue;  // unordered pairs once
        long nn = a.nodes * b.nodes;
        int dd = a.degree + b.degree;
        if (feasible(nn, dd) && std::max(a.depth, b.depth) < limits.max_depth)
          changed |= add(apply_prod(a, b));
      }
    }
  }

  auto it = states.find({nodes, degree});
  std::vector<ParetoEntry> out;
  if (it != states.end()) out = it->second.entries;
  std::sort(out.begin(), out.end(), [](const ParetoEntry& a, const ParetoEntry& b) {
    if (a.x != b.x) return a.x < b.x;
    if (a.y != b.y) return a.y < b.y;
    return print_expr(*a.expr) < print_expr(*b.expr);
  });
  // The working frontier keeps capability-incomparable entries for further
  // composition; the reported frontier is plain (x, y) Pareto.
  std::vector<ParetoEntry> final_out;
  for (auto& e : out) {
    bool dominated = false;
    for (const auto& kept : final_out)
      if (kept.x <= e.x && kept.y <= e.y) dominated = true;
    if (!dominated) final_out.push_back(std::move(e));
  }
  return final_out;
}

std::optional<BestChoice> best_for(const std::vector<ParetoEntry>& entries, double alpha,
                                   double model_bits, double bandwidth_bps,
                                   CollectiveKind kind) {
  std::optional<BestChoice> best;
  for (const auto& e : entries) {
    if (e.provenance == Provenance::Bound) continue;  // bounds never win selection
    double t = e.runtime(alpha, model_bits, bandwidth_bps);
    if (kind == CollectiveKind::AllReduce) t *= 2.0;
    if (!best || t < best->runtime_s - 1e-15 ||
        (std::fabs(t - best->runtime_s) <= 1e-15 &&
         (e.x < best->entry.x ||
          (e.x == best->entry.x && print_expr(*e.expr) < print_expr(*best->entry.expr))))) {
      best = BestChoice{e, t};
    }
  }
  return best;
}

LowerBound theoretical_lower_bound(long nodes, int degree, double alpha, double model_bits,
                                   double bandwidth_bps) {
  LowerBound lb;
  long k = 0;
  while (moore_bound(degree, static_cast<int>(k)) < nodes) ++k;
  lb.x_star = k;
  lb.y = nodes > 1 ? Rat(nodes - 1, nodes) : Rat(0);
  lb.runtime_s = alpha * static_cast<double>(lb.x_star) +
                 model_bits / bandwidth_bps * lb.y.to_double();
  return lb;
}

BaselineCosts baseline_costs(long nodes, double alpha, double model_bits,
                             double bandwidth_bps) {
  if (nodes < 2) throw std::invalid_argument("baseline_costs: need N >= 2");
  BaselineCosts c;
  double n = static_cast<double>(nodes);
  double mb = model_bits / bandwidth_bps;
  c.ring_s = 2.0 * alpha * (n - 1.0) + 2.0 * (n - 1.0) * model_bits / (n * bandwidth_bps);
  c.dbt_s = 2.0 * alpha * std::log2(n) + 4.0 * mb * std::log2(n);
  return c;
}

std::vector<SweepRow> sweep(long n_lo, long n_hi, int degree, double alpha, double model_bits,
                            double bandwidth_bps, const EnumLimits& limits, LpCache& cache,
                            bool fast) {
  std::vector<SweepRow> rows;
  for (long n = n_lo; n <= n_hi; ++n) {
    SweepRow row;
    row.nodes = n;
    if (n >= 2) {
      auto entries = enumerate_frontier(n, degree, limits, cache, fast);
      row.best = best_for(entries, alpha, model_bits, bandwidth_bps, CollectiveKind::RsAg);
      row.fallback_only = true;
      for (const auto& e : entries)
        if (e.expr->kind != TopoExpr::Kind::Base) row.fallback_only = false;
      row.baselines = baseline_costs(n, alpha, model_bits, bandwidth_bps);
      row.lower_bound_s =
          theoretical_lower_bound(n, degree, alpha, model_bits, bandwidth_bps).runtime_s;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

ParetoEntry entry_for_expr(const TopoExpr& e, LpCache& cache) {
  switch (e.kind) {
    case TopoExpr::Kind::Base: return entry_for_base(e.base, cache, false, false);
    case TopoExpr::Kind::Line: return apply_line(entry_for_expr(*e.a, cache));
    case TopoExpr::Kind::Deg: return apply_deg(entry_for_expr(*e.a, cache), e.param);
    case TopoExpr::Kind::Pow: return apply_pow(entry_for_expr(*e.a, cache), e.param);
    case TopoExpr::Kind::Undir: return apply_undir(entry_for_expr(*e.a, cache));
    case TopoExpr::Kind::Prod: {
      ParetoEntry a = entry_for_expr(*e.a, cache);
      ParetoEntry b = entry_for_expr(*e.b, cache);
      if (a.traits.sp_bandwidth_optimal && a.traits.simple && b.traits.sp_bandwidth_optimal &&
          b.traits.simple)
        return apply_prod(a, b);
      // No closed form: measure the optimal shortest-path schedule.
      BuiltTopo built = materialize(e);
      ParetoEntry r = apply_prod(a, b);
      CostVector measured = lp_cost(built.graph);
      r.x = measured.x;
      r.y = measured.y;
      r.provenance = Provenance::LpMeasured;
      r.traits.bandwidth_optimal = (r.y == Rat(r.nodes - 1, r.nodes));
      r.traits.sp_bandwidth_optimal = r.traits.bandwidth_optimal;
      return r;
    }
  }
  throw std::logic_error("entry_for_expr: bad expression");
}

}  // namespace

CostVector cost_for_expr(const TopoExpr& e, LpCache& cache) {
  ParetoEntry entry = entry_for_expr(e, cache);
  return CostVector{entry.x, entry.y};
}

BuiltTopo materialize(const TopoExpr& e) {
  switch (e.kind) {
    case TopoExpr::Kind::Base: {
      BuiltBase b = build_base(e.base);
      BuiltTopo t;
      t.graph = std::move(b.graph);
      t.skew_witness = std::move(b.skew_witness);
      if (b.schedule)
        t.schedule = std::move(*b.schedule);
      else
        t.schedule = lp_schedule(t.graph).schedule;
      return t;
    }
    case TopoExpr::Kind::Line: {
      BuiltTopo a = materialize(*e.a);
      BuiltTopo t;
      t.graph = line_graph(a.graph);
      t.schedule = line_expand_schedule(a.graph, a.schedule);
      if (a.skew_witness) t.skew_witness = line_lift_witness(a.graph, *a.skew_witness);
      return t;
    }
    case TopoExpr::Kind::Deg: {
      BuiltTopo a = materialize(*e.a);
      BuiltTopo t;
      t.graph = degree_expand(a.graph, e.param);
      t.schedule = degree_expand_schedule(a.graph, a.schedule, e.param);
      if (a.skew_witness) t.skew_witness = degree_lift_witness(a.graph, *a.skew_witness, e.param);
      return t;
    }
    case TopoExpr::Kind::Pow: {
      BuiltTopo a = materialize(*e.a);
      BuiltTopo t;
      t.graph = cartesian_power(a.graph, e.param);
      // Route through the transpose: reverse gives an allgather there, the
      // power schedule lifts it, reversing again lands a reduce-scatter on
      // the power of the original graph (arc ids line up by construction).
      Digraph gt = transpose(a.graph);
      Schedule ag = reverse_schedule(a.schedule);
      Schedule ag_pow = power_schedule(gt, ag, e.param);
      t.schedule = reverse_schedule(ag_pow);
      if (a.skew_witness) t.skew_witness = power_lift_witness(a.graph, *a.skew_witness, e.param);
      return t;
    }
    case TopoExpr::Kind::Prod: {
      BuiltTopo a = materialize(*e.a);
      BuiltTopo b = materialize(*e.b);
      BuiltTopo t;
      t.graph = cartesian_product(a.graph, b.graph);
      t.schedule = lp_schedule(t.graph).schedule;
      if (a.skew_witness && b.skew_witness)
        t.skew_witness = product_lift_witness(a.graph, *a.skew_witness, b.graph, *b.skew_witness);
      return t;
    }
    case TopoExpr::Kind::Undir: {
      BuiltTopo a = materialize(*e.a);
      if (!a.skew_witness) {
        auto found = find_skew_symmetry(a.graph);
        if (found.status != SkewSearchStatus::Found)
          throw std::domain_error("materialize: Undir needs a skew-symmetry witness");
        a.skew_witness = found.witness;
      }
      auto [g, s] = to_undirected(a.graph, a.schedule, *a.skew_witness);
      BuiltTopo t;
      t.graph = std::move(g);
      t.schedule = std::move(s);
      std::vector<int> id(static_cast<std::size_t>(t.graph.node_count()));
      for (std::size_t i = 0; i < id.size(); ++i) id[i] = static_cast<int>(i);
      t.skew_witness = IsoMap{std::move(id)};
      return t;
    }
  }
  throw std::logic_error("materialize: bad expression");
}

}  // namespace dctopo
