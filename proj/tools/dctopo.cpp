// Command-line front end: Pareto search, schedule synthesis, validation,
// trace simulation, and MILP model emission for direct-connect collectives.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "dctopo/base_graphs.hpp"
#include "dctopo/dnn_sim.hpp"
#include "dctopo/expr_parse.hpp"
#include "dctopo/io.hpp"
#include "dctopo/milp.hpp"
#include "dctopo/pareto.hpp"
#include "dctopo/sp_scheduler.hpp"

namespace {

using namespace dctopo;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInternal = 3;

[[noreturn]] void fail(int code, const std::string& msg) {
  nlohmann::json j;
  j["error"] = msg;
  j["code"] = code;
  std::cerr << j.dump() << "\n";
  std::exit(code);
}

// "10us", "0.5ms", "2s" or plain seconds.
double parse_seconds(const std::string& s) {
  std::size_t pos = 0;
  double v = std::stod(s, &pos);
  std::string unit = s.substr(pos);
  if (unit.empty() || unit == "s") return v;
  if (unit == "us") return v * 1e-6;
  if (unit == "ms") return v * 1e-3;
  fail(kExitUsage, "unknown time unit '" + unit + "'");
}

// "100MB"/"100MiB" = 100 * 2^20 bytes, "1GB" = 2^30 bytes, plain bytes;
// returns bits.
double parse_model_bits(const std::string& s) {
  std::size_t pos = 0;
  double v = std::stod(s, &pos);
  std::string unit = s.substr(pos);
  double bytes;
  if (unit.empty() || unit == "B")
    bytes = v;
  else if (unit == "KB" || unit == "KiB")
    bytes = v * 1024.0;
  else if (unit == "MB" || unit == "MiB")
    bytes = v * 1024.0 * 1024.0;
  else if (unit == "GB" || unit == "GiB")
    bytes = v * 1024.0 * 1024.0 * 1024.0;
  else
    fail(kExitUsage, "unknown size unit '" + unit + "'");
  return bytes * 8.0;
}

// "100Gbps" = 100e9 bits/s, plain bits/s.
double parse_bandwidth(const std::string& s) {
  std::size_t pos = 0;
  double v = std::stod(s, &pos);
  std::string unit = s.substr(pos);
  if (unit.empty() || unit == "bps") return v;
  if (unit == "Kbps") return v * 1e3;
  if (unit == "Mbps") return v * 1e6;
  if (unit == "Gbps") return v * 1e9;
  fail(kExitUsage, "unknown bandwidth unit '" + unit + "'");
}

std::string fmt3(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

TopoExprPtr parse_expr_or_fail(const std::string& text) {
  try {
    return parse_expr(text);
  } catch (const ParseError& e) {
    fail(kExitUsage, std::string("expression: ") + e.what());
  }
}

struct CostArgs {
  std::string alpha = "10us";
  std::string model = "100MB";
  std::string bandwidth = "100Gbps";
  double alpha_s() const { return parse_seconds(alpha); }
  double model_bits() const { return parse_model_bits(model); }
  double bandwidth_bps() const { return parse_bandwidth(bandwidth); }
};

void add_cost_args(CLI::App* cmd, CostArgs& args) {
  cmd->add_option("--alpha", args.alpha, "per-step latency (us/ms/s suffix)");
  cmd->add_option("--model-bytes", args.model, "model size (B/KB/MB/GB; MB = 2^20 bytes)");
  cmd->add_option("--bandwidth", args.bandwidth, "node bandwidth (bps/Kbps/Mbps/Gbps)");
}

int cmd_pareto(long nodes, int degree, const CostArgs& cost, bool fast) {
  LpCache cache;
  auto entries = enumerate_frontier(nodes, degree, EnumLimits{}, cache, fast);
  double alpha = cost.alpha_s(), M = cost.model_bits(), B = cost.bandwidth_bps();
  std::cout << "expr\tN\td\tx\ty\truntime_ms\ttag\n";
  for (const auto& e : entries) {
    std::string tag = e.provenance == Provenance::Bound        ? "y-upper-bound"
                      : e.provenance == Provenance::LpMeasured ? "lp"
                                                               : "";
    std::cout << print_expr(*e.expr) << "\t" << e.nodes << "\t" << e.degree << "\t" << e.x
              << "\t" << fmt3(e.y.to_double()) << "\t" << fmt3(e.runtime(alpha, M, B) * 1e3)
              << "\t" << tag << "\n";
  }
  auto best = best_for(entries, alpha, M, B, CollectiveKind::RsAg);
  if (best)
    std::cout << print_expr(*best->entry.expr) << "\t" << nodes << "\t" << degree << "\t"
              << best->entry.x << "\t" << fmt3(best->entry.y.to_double()) << "\t"
              << fmt3(best->runtime_s * 1e3) << "\tbest\n";
  auto lb = theoretical_lower_bound(nodes, degree, alpha, M, B);
  std::cout << "lower-bound\t" << nodes << "\t" << degree << "\t" << lb.x_star << "\t"
            << fmt3(lb.y.to_double()) << "\t" << fmt3(lb.runtime_s * 1e3) << "\tlower-bound\n";
  auto bl = baseline_costs(nodes, alpha, M, B);
  std::cout << "ring-allreduce\t" << nodes << "\t1\t" << (nodes - 1) << "\t"
            << fmt3(static_cast<double>(nodes - 1) / static_cast<double>(nodes)) << "\t"
            << fmt3(bl.ring_s * 1e3) << "\tbaseline\n";
  std::cout << "double-binary-tree\t" << nodes << "\t4\t" << std::lround(std::log2(nodes))
            << "\t" << fmt3(2.0 * std::log2(static_cast<double>(nodes))) << "\t"
            << fmt3(bl.dbt_s * 1e3) << "\tbaseline\n";
  return kExitOk;
}

int cmd_graph(const std::string& expr_text, const std::string& out, const std::string& format) {
  auto e = parse_expr_or_fail(expr_text);
  BuiltTopo t = materialize(*e);
  if (format == "json")
    write_file(out, topology_to_json(t.graph));
  else if (format == "edges")
    write_file(out, topology_to_edge_list(t.graph));
  else
    fail(kExitUsage, "unknown format '" + format + "'");
  return kExitOk;
}

int cmd_schedule(const std::string& expr_text, const std::string& collective, int granularity,
                 const std::string& out_base) {
  auto e = parse_expr_or_fail(expr_text);
  BuiltTopo t = materialize(*e);
  if (granularity > 0) {
    auto res = integer_schedule(t.graph, granularity);
    t.schedule = std::move(res.schedule);
  }
  write_file(out_base + ".topology.json", topology_to_json(t.graph));
  auto need_witness = [&]() -> IsoMap {
    if (t.skew_witness) return *t.skew_witness;
    auto r = find_skew_symmetry(t.graph);
    if (r.status != SkewSearchStatus::Found)
      fail(kExitInternal,
           "allgather duality needs a skew-symmetric topology; none found for this expression");
    return *r.witness;
  };
  if (collective == "rs") {
    write_file(out_base + ".rs.jsonl", schedule_to_jsonl(t.schedule, t.graph));
  } else if (collective == "ag") {
    Schedule ag = dualize(t.schedule, t.graph, need_witness());
    write_file(out_base + ".ag.jsonl", schedule_to_jsonl(ag, t.graph));
  } else if (collective == "allreduce") {
    write_file(out_base + ".rs.jsonl", schedule_to_jsonl(t.schedule, t.graph));
    Schedule ag = dualize(t.schedule, t.graph, need_witness());
    write_file(out_base + ".ag.jsonl", schedule_to_jsonl(ag, t.graph));
  } else {
    fail(kExitUsage, "collective must be rs|ag|allreduce");
  }
  return kExitOk;
}

int cmd_validate(const std::string& topology_path, const std::string& schedule_path) {
  Digraph g = topology_from_json(read_file(topology_path));
  Schedule s = schedule_from_jsonl(read_file(schedule_path));
  auto rep = validate(s, g);
  nlohmann::json out;
  out["valid"] = rep.ok;
  out["kind"] = collective_name(s.kind);
  out["t_max"] = s.t_max;
  nlohmann::json missing = nlohmann::json::array();
  for (std::size_t i = 0; i < rep.missing.size() && i < 32; ++i) {
    const auto& m = rep.missing[i];
    missing.push_back({{"root", m.root}, {"node", m.node}, {"uncovered", m.uncovered.str()}});
  }
  out["missing"] = std::move(missing);
  if (rep.ok && regular_degree(g)) {
    auto bb = bandwidth_coeff(s, g);
    out["bandwidth_coefficient"] = bb.coefficient.str();
    out["bandwidth_optimal"] = check_bandwidth_optimal(s, g).optimal;
    out["moore_optimal"] = check_moore_optimal(s, g);
    out["shortest_path_schedule"] = is_shortest_path_schedule(s, g);
  }
  std::cout << out.dump(2) << "\n";
  return rep.ok ? kExitOk : kExitInvalid;
}

int cmd_simulate(const std::string& trace_path, const std::string& expr_text, long x_opt,
                 double y_opt, const CostArgs& cost) {
  LayerTrace trace = trace_from_csv(read_file(trace_path));
  double alpha = cost.alpha_s(), B = cost.bandwidth_bps();
  std::vector<SimEntry> entries;
  long n_for_baselines = 0;
  if (!expr_text.empty()) {
    auto e = parse_expr_or_fail(expr_text);
    LpCache cache;
    auto [n, d] = derived_shape(*e);
    n_for_baselines = n;
    CostVector cv = cost_for_expr(*e, cache);
    entries.push_back({print_expr(*e), cv.x, cv.y.to_double()});
  } else {
    if (x_opt < 0 || y_opt < 0) fail(kExitUsage, "need --expr or both --x and --y");
    entries.push_back({"given", x_opt, y_opt});
  }
  if (n_for_baselines >= 2) {
    double n = static_cast<double>(n_for_baselines);
    entries.push_back({"ring", n_for_baselines - 1, (n - 1.0) / n});
    entries.push_back({"double-binary-tree", std::lround(std::log2(n)), 2.0 * std::log2(n)});
    auto lb = theoretical_lower_bound(n_for_baselines, 4, alpha, 1.0, 1.0);
    entries.push_back({"lower-bound", lb.x_star, (n - 1.0) / n});
  }
  auto rows = compare(trace, entries, alpha, B);
  std::cout << "entry\tf_max_ms\tavg_layer_ms\n";
  for (const auto& r : rows)
    std::cout << r.name << "\t" << fmt3(r.f_max_s * 1e3) << "\t" << fmt3(r.avg_layer_s * 1e3)
              << "\n";
  return kExitOk;
}

int cmd_emit_milp(long nodes, int degree, long capacity, const std::string& out) {
  write_file(out, emit_milp(nodes, degree, capacity));
  return kExitOk;
}

int cmd_lower_bound(long nodes, int degree, const CostArgs& cost) {
  auto lb = theoretical_lower_bound(nodes, degree, cost.alpha_s(), cost.model_bits(),
                                    cost.bandwidth_bps());
  nlohmann::json out;
  out["x_star"] = lb.x_star;
  out["y"] = lb.y.str();
  out["runtime_ms"] = lb.runtime_s * 1e3;
  std::cout << out.dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"direct-connect collective topology and schedule toolkit"};
  app.require_subcommand(1);

  long nodes = 0;
  int degree = 0;
  long capacity = 1;
  int granularity = 0;
  bool fast = false;
  std::string expr_text, out_path, out_base, format = "json";
  std::string topology_path, schedule_path, trace_path, collective = "rs";
  long x_opt = -1;
  double y_opt = -1;
  CostArgs cost;

  auto* pareto = app.add_subcommand("pareto", "enumerate the Pareto frontier for a target");
  pareto->add_option("--nodes", nodes)->required();
  pareto->add_option("--degree", degree)->required();
  pareto->add_flag("--fast", fast, "skip the GenKautz LP; report its 2(N-1)/N bound");
  add_cost_args(pareto, cost);

  auto* schedule = app.add_subcommand("schedule", "materialize a topology and schedule");
  schedule->add_option("--expr", expr_text)->required();
  schedule->add_option("--collective", collective, "rs|ag|allreduce");
  schedule->add_option("--granularity", granularity, "divide each shard into at most P chunks");
  schedule->add_option("--out", out_base)->required();

  auto* validate_cmd = app.add_subcommand("validate", "check a schedule against a topology");
  validate_cmd->add_option("--topology", topology_path)->required();
  validate_cmd->add_option("--schedule", schedule_path)->required();

  auto* graph = app.add_subcommand("graph", "emit a topology file");
  graph->add_option("--expr", expr_text)->required();
  graph->add_option("--out", out_path)->required();
  graph->add_option("--format", format, "json|edges");

  auto* simulate_cmd = app.add_subcommand("simulate", "trace-driven per-layer allreduce");
  simulate_cmd->add_option("--trace", trace_path)->required();
  simulate_cmd->add_option("--expr", expr_text);
  simulate_cmd->add_option("--x", x_opt);
  simulate_cmd->add_option("--y", y_opt);
  add_cost_args(simulate_cmd, cost);

  auto* emit = app.add_subcommand("emit-milp", "write the topology-synthesis MILP model");
  emit->add_option("--nodes", nodes)->required();
  emit->add_option("--degree", degree)->required();
  emit->add_option("--capacity", capacity);
  emit->add_option("--out", out_path)->required();

  auto* lower = app.add_subcommand("lower-bound", "Moore/bandwidth runtime floor");
  lower->add_option("--nodes", nodes)->required();
  lower->add_option("--degree", degree)->required();
  add_cost_args(lower, cost);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    nlohmann::json j;
    j["error"] = e.what();
    j["code"] = kExitUsage;
    std::cerr << j.dump() << "\n";
    return kExitUsage;
  }

  try {
    if (pareto->parsed()) return cmd_pareto(nodes, degree, cost, fast);
    if (schedule->parsed()) return cmd_schedule(expr_text, collective, granularity, out_base);
    if (validate_cmd->parsed()) return cmd_validate(topology_path, schedule_path);
    if (graph->parsed()) return cmd_graph(expr_text, out_path, format);
    if (simulate_cmd->parsed()) return cmd_simulate(trace_path, expr_text, x_opt, y_opt, cost);
    if (emit->parsed()) return cmd_emit_milp(nodes, degree, capacity, out_path);
    if (lower->parsed()) return cmd_lower_bound(nodes, degree, cost);
  } catch (const std::invalid_argument& e) {
    fail(kExitUsage, e.what());
  } catch (const std::exception& e) {
    fail(kExitInternal, e.what());
  }
  return kExitUsage;
}
