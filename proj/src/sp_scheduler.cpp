#include "dctopo/sp_scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>

#include "dctopo/parallel.hpp"

namespace dctopo {

namespace {

constexpr double kTol = 1e-9;
constexpr std::int64_t kSnapDen = 1'000'000;

// Dense primal simplex, two phases, Bland's rule. Minimizes c.x subject to
// A x (= | <=) b, x >= 0. Small instances only.
struct DenseLp {
  int nvars = 0;
  std::vector<std::vector<double>> coeff;
  std::vector<double> rhs;
  std::vector<char> is_eq;
  std::vector<double> objective;
};

struct DenseLpResult {
  std::vector<double> x;
  double obj = 0.0;
};

DenseLpResult simplex_solve(const DenseLp& lp) {
  const int m = static_cast<int>(lp.coeff.size());
  int n_slack = 0;
  for (char e : lp.is_eq)
    if (!e) ++n_slack;
  const int n_art = m;  // one artificial per row keeps phase 1 uniform
  const int total = lp.nvars + n_slack + n_art;
  // Tableau rows: [coeffs | slack | artificial | rhs]
  std::vector<std::vector<double>> tab(static_cast<std::size_t>(m),
                                       std::vector<double>(static_cast<std::size_t>(total) + 1, 0.0));
  std::vector<int> basis(static_cast<std::size_t>(m), -1);
  int slack_at = lp.nvars;
  for (int r = 0; r < m; ++r) {
    double sign = lp.rhs[static_cast<std::size_t>(r)] < 0 ? -1.0 : 1.0;
    for (int c = 0; c < lp.nvars; ++c)
      tab[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] =
          sign * lp.coeff[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
    if (!lp.is_eq[static_cast<std::size_t>(r)]) {
      tab[static_cast<std::size_t>(r)][static_cast<std::size_t>(slack_at)] = sign * 1.0;
      ++slack_at;
    }
    tab[static_cast<std::size_t>(r)][static_cast<std::size_t>(lp.nvars + n_slack + r)] = 1.0;
    tab[static_cast<std::size_t>(r)].back() = sign * lp.rhs[static_cast<std::size_t>(r)];
    basis[static_cast<std::size_t>(r)] = lp.nvars + n_slack + r;
  }

  auto pivot = [&](int row, int col) {
    auto& pr = tab[static_cast<std::size_t>(row)];
    double pv = pr[static_cast<std::size_t>(col)];
    for (double& v : pr) v /= pv;
    for (int r = 0; r < m; ++r) {
      if (r == row) continue;
      auto& rr = tab[static_cast<std::size_t>(r)];
      double f = rr[static_cast<std::size_t>(col)];
      if (std::fabs(f) < 1e-14) continue;
      for (int c = 0; c <= total; ++c)
        rr[static_cast<std::size_t>(c)] -= f * pr[static_cast<std::size_t>(c)];
    }
    basis[static_cast<std::size_t>(row)] = col;
  };

  auto run_phase = [&](const std::vector<double>& cost, int allowed_cols) {
    for (long iter = 0; iter < 200000; ++iter) {
      // Reduced costs c_j - c_B . B^-1 A_j, computed off the tableau.
      std::vector<double> red(static_cast<std::size_t>(allowed_cols), 0.0);
      for (int j = 0; j < allowed_cols; ++j) {
        double v = j < static_cast<int>(cost.size()) ? cost[static_cast<std::size_t>(j)] : 0.0;
        red[static_cast<std::size_t>(j)] = v;
      }
      for (int r = 0; r < m; ++r) {
        int b = basis[static_cast<std::size_t>(r)];
        double cb = b < static_cast<int>(cost.size()) ? cost[static_cast<std::size_t>(b)] : 0.0;
        if (cb == 0.0) continue;
        for (int j = 0; j < allowed_cols; ++j)
          red[static_cast<std::size_t>(j)] -=
              cb * tab[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)];
      }
      int enter = -1;
      for (int j = 0; j < allowed_cols; ++j) {
        bool basic = false;
        for (int r = 0; r < m; ++r)
          if (basis[static_cast<std::size_t>(r)] == j) basic = true;
        if (basic) continue;
        if (red[static_cast<std::size_t>(j)] < -kTol) {
          enter = j;  // Bland: lowest eligible index
          break;
        }
      }
      if (enter < 0) return;
      int leave = -1;
      double best = 0.0;
      for (int r = 0; r < m; ++r) {
        double a = tab[static_cast<std::size_t>(r)][static_cast<std::size_t>(enter)];
        if (a > kTol) {
          double ratio = tab[static_cast<std::size_t>(r)].back() / a;
          if (leave < 0 || ratio < best - 1e-12 ||
              (std::fabs(ratio - best) <= 1e-12 &&
               basis[static_cast<std::size_t>(r)] < basis[static_cast<std::size_t>(leave)])) {
            leave = r;
            best = ratio;
          }
        }
      }
      if (leave < 0) throw std::runtime_error("simplex: unbounded");
      pivot(leave, enter);
    }
    throw std::runtime_error("simplex: iteration limit");
  };

  // Phase 1: drive artificials to zero.
  std::vector<double> phase1(static_cast<std::size_t>(total), 0.0);
  for (int j = lp.nvars + n_slack; j < total; ++j) phase1[static_cast<std::size_t>(j)] = 1.0;
  run_phase(phase1, total);
  double infeas = 0.0;
  for (int r = 0; r < m; ++r)
    if (basis[static_cast<std::size_t>(r)] >= lp.nvars + n_slack)
      infeas += tab[static_cast<std::size_t>(r)].back();
  if (infeas > 1e-7) throw std::runtime_error("simplex: infeasible");
  // Pivot leftover zero-level artificials out of the basis so phase 2 cannot
  // disturb them; rows with no eligible pivot are redundant and cleared.
  for (int r = 0; r < m; ++r) {
    if (basis[static_cast<std::size_t>(r)] < lp.nvars + n_slack) continue;
    int col = -1;
    for (int j = 0; j < lp.nvars + n_slack; ++j)
      if (std::fabs(tab[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)]) > 1e-9) {
        col = j;
        break;
      }
    if (col >= 0)
      pivot(r, col);
    else
      for (int c = 0; c <= total; ++c) tab[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = 0.0;
  }

  // Phase 2 over structural + slack columns only.
  std::vector<double> phase2(static_cast<std::size_t>(lp.nvars + n_slack), 0.0);
  for (int j = 0; j < lp.nvars; ++j)
    phase2[static_cast<std::size_t>(j)] = lp.objective[static_cast<std::size_t>(j)];
  run_phase(phase2, lp.nvars + n_slack);

  DenseLpResult res;
  res.x.assign(static_cast<std::size_t>(lp.nvars), 0.0);
  for (int r = 0; r < m; ++r) {
    int b = basis[static_cast<std::size_t>(r)];
    if (b < lp.nvars) res.x[static_cast<std::size_t>(b)] = tab[static_cast<std::size_t>(r)].back();
  }
  for (int j = 0; j < lp.nvars; ++j)
    res.obj += res.x[static_cast<std::size_t>(j)] * lp.objective[static_cast<std::size_t>(j)];
  return res;
}

// Aggregated view: destinations sharing an arc set are one group.
struct Group {
  std::uint64_t mask;
  std::vector<int> arcs;   // indices into instance.arc_ids
  std::vector<int> dests;  // indices into instance.dests
};

std::vector<Group> group_dests(const SpLpInstance& inst) {
  if (inst.arc_ids.size() > 64) throw std::domain_error("solve_lp: degree > 64 unsupported");
  std::map<std::uint64_t, std::size_t> by_mask;
  std::vector<Group> groups;
  for (std::size_t di = 0; di < inst.dests.size(); ++di) {
    const auto& dest = inst.dests[di];
    if (dest.arcs.empty()) throw std::domain_error("solve_lp: destination with no arcs");
    std::uint64_t mask = 0;
    for (int a : dest.arcs) mask |= std::uint64_t{1} << a;
    auto it = by_mask.find(mask);
    if (it == by_mask.end()) {
      by_mask.emplace(mask, groups.size());
      groups.push_back({mask, dest.arcs, {static_cast<int>(di)}});
    } else {
      groups[it->second].dests.push_back(static_cast<int>(di));
    }
  }
  return groups;
}

// Snap floats to rationals with a bounded denominator, repairing the group
// sum onto the largest entry so per-destination totals stay exactly 1.
std::vector<Rat> snap_group(const std::vector<double>& vals, long count) {
  std::vector<Rat> out;
  out.reserve(vals.size());
  for (double v : vals) out.push_back(Rat::approx(std::max(v, 0.0), kSnapDen));
  Rat target(count);
  Rat sum(0);
  for (const auto& r : out) sum += r;
  Rat diff = target - sum;
  if (!diff.is_zero()) {
    std::size_t big = 0;
    for (std::size_t i = 1; i < out.size(); ++i)
      if (out[big] < out[i]) big = i;
    out[big] += diff;
    if (out[big].is_negative()) throw std::logic_error("solve_lp: snap repair failed");
  }
  return out;
}

}  // namespace

SpLpSolution solve_lp(const SpLpInstance& inst) {
  SpLpSolution sol;
  sol.fractions.resize(inst.dests.size());
  sol.objective = Rat(0);
  if (inst.dests.empty()) return sol;
  auto groups = group_dests(inst);

  // Variables: one per (group, arc) pair, then U last.
  int nv = 0;
  std::vector<std::pair<int, int>> var_of;  // (group, arc slot)
  for (std::size_t gi = 0; gi < groups.size(); ++gi)
    for (std::size_t k = 0; k < groups[gi].arcs.size(); ++k)
      var_of.push_back({static_cast<int>(gi), static_cast<int>(k)}), ++nv;
  const int u_var = nv;

  DenseLp lp;
  lp.nvars = nv + 1;
  lp.objective.assign(static_cast<std::size_t>(lp.nvars), 0.0);
  lp.objective[static_cast<std::size_t>(u_var)] = 1.0;
  // Equality per group: its variables sum to the group size.
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    std::vector<double> row(static_cast<std::size_t>(lp.nvars), 0.0);
    for (int v = 0; v < nv; ++v)
      if (var_of[static_cast<std::size_t>(v)].first == static_cast<int>(gi))
        row[static_cast<std::size_t>(v)] = 1.0;
    lp.coeff.push_back(std::move(row));
    lp.rhs.push_back(static_cast<double>(groups[gi].dests.size()));
    lp.is_eq.push_back(1);
  }
  // Load row per arc: sum of its variables - U <= 0.
  for (std::size_t ai = 0; ai < inst.arc_ids.size(); ++ai) {
    std::vector<double> row(static_cast<std::size_t>(lp.nvars), 0.0);
    bool any = false;
    for (int v = 0; v < nv; ++v) {
      auto [gi, k] = var_of[static_cast<std::size_t>(v)];
      if (groups[static_cast<std::size_t>(gi)].arcs[static_cast<std::size_t>(k)] ==
          static_cast<int>(ai)) {
        row[static_cast<std::size_t>(v)] = 1.0;
        any = true;
      }
    }
    if (!any) continue;
    row[static_cast<std::size_t>(u_var)] = -1.0;
    lp.coeff.push_back(std::move(row));
    lp.rhs.push_back(0.0);
    lp.is_eq.push_back(0);
  }
  auto res = simplex_solve(lp);

  // Exact per-arc loads after snapping.
  std::vector<Rat> arc_load(inst.arc_ids.size(), Rat(0));
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    const auto& grp = groups[gi];
    std::vector<double> vals;
    for (int v = 0; v < nv; ++v)
      if (var_of[static_cast<std::size_t>(v)].first == static_cast<int>(gi))
        vals.push_back(res.x[static_cast<std::size_t>(v)]);
    auto snapped = snap_group(vals, static_cast<long>(grp.dests.size()));
    Rat size(static_cast<long>(grp.dests.size()));
    for (std::size_t k = 0; k < grp.arcs.size(); ++k)
      arc_load[static_cast<std::size_t>(grp.arcs[k])] += snapped[k];
    for (int di : grp.dests) {
      auto& f = sol.fractions[static_cast<std::size_t>(di)];
      f.resize(grp.arcs.size());
      for (std::size_t k = 0; k < grp.arcs.size(); ++k) f[k] = snapped[k] / size;
    }
  }
  for (const auto& l : arc_load)
    if (sol.objective < l) sol.objective = l;
  return sol;
}

std::string lp_instance_text(const SpLpInstance& inst) {
  std::ostringstream os;
  auto var = [&](std::size_t di, std::size_t k) {
    return "x_" + std::to_string(inst.dests[di].node) + "_" + std::to_string(k);
  };
  os << "\\ shortest-path load LP, vertex " << inst.vertex << ", step " << inst.step << "\n";
  os << "Minimize\n obj: U\nSubject To\n";
  for (std::size_t di = 0; di < inst.dests.size(); ++di) {
    os << " d" << di << ":";
    for (std::size_t k = 0; k < inst.dests[di].arcs.size(); ++k) os << " + " << var(di, k);
    os << " = 1\n";
  }
  for (std::size_t ai = 0; ai < inst.arc_ids.size(); ++ai) {
    os << " a" << ai << ":";
    bool any = false;
    for (std::size_t di = 0; di < inst.dests.size(); ++di)
      for (std::size_t k = 0; k < inst.dests[di].arcs.size(); ++k)
        if (inst.dests[di].arcs[k] == static_cast<int>(ai)) {
          os << " + " << var(di, k);
          any = true;
        }
    if (!any) os << " 0 x_none";
    os << " - U <= 0\n";
  }
  os << "Bounds\n";
  for (std::size_t di = 0; di < inst.dests.size(); ++di)
    for (std::size_t k = 0; k < inst.dests[di].arcs.size(); ++k)
      os << " 0 <= " << var(di, k) << " <= 1\n";
  os << "End\n";
  return os.str();
}

namespace {

struct DistTable {
  std::vector<std::vector<int>> rows;
};

DistTable all_pairs(const Digraph& g) {
  DistTable t;
  t.rows.resize(static_cast<std::size_t>(g.node_count()));
  parallel_for(static_cast<std::size_t>(g.node_count()), [&](std::size_t u) {
    t.rows[u] = distances_from(g, static_cast<int>(u));
  });
  for (const auto& row : t.rows)
    for (int v : row)
      if (v == kUnreachable) throw std::domain_error("lp_schedule: graph not strongly connected");
  return t;
}

SpLpInstance build_instance(const Digraph& g, const DistTable& dist, int u, int t, int D) {
  SpLpInstance inst;
  inst.vertex = u;
  inst.step = t;
  inst.dist_class = D + 1 - t;
  inst.arc_ids = g.out_arcs(u);
  const int x = inst.dist_class;
  for (int v = 0; v < g.node_count(); ++v) {
    if (v == u || dist.rows[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] != x)
      continue;
    SpLpInstance::Dest dest;
    dest.node = v;
    for (std::size_t k = 0; k < inst.arc_ids.size(); ++k) {
      int w = g.arc(inst.arc_ids[k]).dst;
      if (dist.rows[static_cast<std::size_t>(w)][static_cast<std::size_t>(v)] == x - 1)
        dest.arcs.push_back(static_cast<int>(k));
    }
    inst.dests.push_back(std::move(dest));
  }
  return inst;
}

struct PerVertexSolve {
  std::vector<SpLpInstance> instances;    // by step-1
  std::vector<SpLpSolution> solutions;
};

// Solve all (u, t) programs; results indexed [u][t-1].
std::vector<PerVertexSolve> solve_all(const Digraph& g, const DistTable& dist, int D) {
  std::vector<PerVertexSolve> all(static_cast<std::size_t>(g.node_count()));
  parallel_for(static_cast<std::size_t>(g.node_count()), [&](std::size_t u) {
    auto& pv = all[u];
    pv.instances.reserve(static_cast<std::size_t>(D));
    pv.solutions.reserve(static_cast<std::size_t>(D));
    for (int t = 1; t <= D; ++t) {
      SpLpInstance inst = build_instance(g, dist, static_cast<int>(u), t, D);
      pv.solutions.push_back(solve_lp(inst));
      pv.instances.push_back(std::move(inst));
    }
  });
  return all;
}

CostVector cost_from(const std::vector<PerVertexSolve>& all, const Digraph& g, int d, int D,
                     std::vector<Rat>* step_u) {
  Rat total(0);
  if (step_u) step_u->assign(static_cast<std::size_t>(D), Rat(0));
  for (int t = 1; t <= D; ++t) {
    Rat mx(0);
    for (const auto& pv : all) {
      const Rat& u = pv.solutions[static_cast<std::size_t>(t - 1)].objective;
      if (mx < u) mx = u;
    }
    if (step_u) (*step_u)[static_cast<std::size_t>(t - 1)] = mx;
    total += mx;
  }
  CostVector cv;
  cv.x = D;
  cv.y = total * Rat(d, g.node_count());
  return cv;
}

Schedule materialize(const std::vector<PerVertexSolve>& all) {
  std::vector<Transfer> ts;
  for (const auto& pv : all) {
    for (std::size_t ti = 0; ti < pv.instances.size(); ++ti) {
      const auto& inst = pv.instances[ti];
      const auto& sol = pv.solutions[ti];
      for (std::size_t di = 0; di < inst.dests.size(); ++di) {
        const auto& dest = inst.dests[di];
        Rat offset(0);
        for (std::size_t k = 0; k < dest.arcs.size(); ++k) {
          Rat f = sol.fractions[di][k];
          if (f.is_zero()) continue;
          ts.push_back({dest.node, ChunkSet::interval(offset, offset + f),
                        inst.arc_ids[static_cast<std::size_t>(dest.arcs[k])], inst.step});
          offset += f;
        }
        if (offset != Rat(1)) throw std::logic_error("lp_schedule: destination not covered");
      }
    }
  }
  return make_schedule(Collective::ReduceScatter, std::move(ts));
}

int require_regular_connected(const Digraph& g) {
  auto d = regular_degree(g);
  if (!d) throw std::domain_error("lp_schedule: graph is not regular");
  return *d;
}

}  // namespace

SpScheduleResult lp_schedule(const Digraph& g) {
  int d = require_regular_connected(g);
  DistTable dist = all_pairs(g);
  int D = 0;
  for (const auto& row : dist.rows)
    for (int v : row) D = std::max(D, v);
  auto all = solve_all(g, dist, D);
  SpScheduleResult res;
  res.cost = cost_from(all, g, d, D, &res.step_u);
  res.schedule = materialize(all);
  return res;
}

CostVector lp_cost(const Digraph& g) {
  int d = require_regular_connected(g);
  DistTable dist = all_pairs(g);
  int D = 0;
  for (const auto& row : dist.rows)
    for (int v : row) D = std::max(D, v);
  auto all = solve_all(g, dist, D);
  return cost_from(all, g, d, D, nullptr);
}

SpScheduleResult integer_schedule(const Digraph& g, int granularity) {
  if (granularity < 1) throw std::invalid_argument("integer_schedule: P must be >= 1");
  const int P = granularity;
  int d = require_regular_connected(g);
  DistTable dist = all_pairs(g);
  int D = 0;
  for (const auto& row : dist.rows)
    for (int v : row) D = std::max(D, v);
  auto all = solve_all(g, dist, D);

  // Round each destination's fractions to multiples of 1/P: floor first,
  // then hand out the remainder by largest fractional part (ties to the
  // lowest arc index).
  std::vector<Transfer> ts;
  std::vector<Rat> step_max(static_cast<std::size_t>(D), Rat(0));
  for (auto& pv : all) {
    for (std::size_t ti = 0; ti < pv.instances.size(); ++ti) {
      const auto& inst = pv.instances[ti];
      const auto& sol = pv.solutions[ti];
      std::vector<long> arc_units(inst.arc_ids.size(), 0);
      for (std::size_t di = 0; di < inst.dests.size(); ++di) {
        const auto& dest = inst.dests[di];
        std::vector<long> units(dest.arcs.size(), 0);
        std::vector<Rat> rema(dest.arcs.size(), Rat(0));
        long assigned = 0;
        for (std::size_t k = 0; k < dest.arcs.size(); ++k) {
          Rat scaled = sol.fractions[di][k] * Rat(P);
          long fl = scaled.num() / scaled.den();  // floor for non-negative values
          units[k] = fl;
          rema[k] = scaled - Rat(fl);
          assigned += fl;
        }
        for (long r = P - assigned; r > 0; --r) {
          std::size_t best = 0;
          for (std::size_t k = 1; k < rema.size(); ++k)
            if (rema[best] < rema[k]) best = k;  // ties keep the lowest index
          units[best] += 1;
          rema[best] = Rat(-1);
        }
        long off = 0;
        for (std::size_t k = 0; k < dest.arcs.size(); ++k) {
          if (units[k] == 0) continue;
          ts.push_back({dest.node, ChunkSet::interval(Rat(off, P), Rat(off + units[k], P)),
                        inst.arc_ids[static_cast<std::size_t>(dest.arcs[k])], inst.step});
          off += units[k];
          arc_units[static_cast<std::size_t>(dest.arcs[k])] += units[k];
        }
        if (off != P) throw std::logic_error("integer_schedule: rounding mismatch");
      }
      long w = 0;
      for (long v : arc_units) w = std::max(w, v);
      Rat wr(w, P);
      auto& mx = step_max[static_cast<std::size_t>(inst.step - 1)];
      if (mx < wr) mx = wr;
    }
  }
  SpScheduleResult res;
  res.schedule = make_schedule(Collective::ReduceScatter, std::move(ts));
  res.step_u = step_max;
  Rat total(0);
  for (const auto& v : step_max) total += v;
  res.cost.x = D;
  res.cost.y = total * Rat(d, g.node_count());
  return res;
}

bool check_sp_bandwidth_optimal(const Digraph& g, const Schedule& s) {
  auto dopt = regular_degree(g);
  if (!dopt) return false;
  const int d = *dopt;
  // Vertex-independent neighborhood profile.
  auto profile = neighborhood_sizes(g, 0);
  for (int u = 1; u < g.node_count(); ++u)
    if (neighborhood_sizes(g, u) != profile) return false;
  const int D = static_cast<int>(profile.size());
  if (s.t_max != D) return false;
  // Exact per-arc loads (M/N) * N_x / d at every step.
  std::vector<std::vector<Rat>> loads(static_cast<std::size_t>(D),
                                      std::vector<Rat>(static_cast<std::size_t>(g.arc_count()), Rat(0)));
  for (const auto& tr : s.transfers)
    loads[static_cast<std::size_t>(tr.step - 1)][static_cast<std::size_t>(tr.arc)] +=
        tr.chunk.measure();
  for (int t = 1; t <= D; ++t) {
    int x = D + 1 - t;
    Rat want(profile[static_cast<std::size_t>(x - 1)], d);
    for (const auto& l : loads[static_cast<std::size_t>(t - 1)])
      if (l != want) return false;
  }
  return true;
}

}  // namespace dctopo
