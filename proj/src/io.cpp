#include "dctopo/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace dctopo {

using nlohmann::json;

std::string topology_to_json(const Digraph& g) {
  json j;
  j["n"] = g.node_count();
  json arcs = json::array();
  for (const auto& a : g.arcs()) arcs.push_back(json::array({a.src, a.dst}));
  j["arcs"] = std::move(arcs);
  return j.dump();
}

Digraph topology_from_json(const std::string& text) {
  json j = json::parse(text);
  std::vector<std::pair<int, int>> arcs;
  for (const auto& a : j.at("arcs")) arcs.push_back({a.at(0).get<int>(), a.at(1).get<int>()});
  return build_digraph(j.at("n").get<int>(), arcs);
}

std::string topology_to_edge_list(const Digraph& g) {
  std::ostringstream os;
  for (const auto& a : g.arcs()) os << a.src << " " << a.dst << "\n";
  return os.str();
}

std::string schedule_to_jsonl(const Schedule& s, const Digraph& g) {
  check_schedule_well_formed(s, g);
  std::ostringstream os;
  json head;
  head["kind"] = collective_name(s.kind);
  head["t_max"] = s.t_max;
  head["n"] = g.node_count();
  os << head.dump() << "\n";
  for (const auto& tr : s.transfers) {
    json line;
    line["step"] = tr.step;
    line["root"] = tr.root;
    line["src"] = g.arc(tr.arc).src;
    line["dst"] = g.arc(tr.arc).dst;
    line["arc"] = tr.arc;
    json chunk = json::array();
    for (const auto& iv : tr.chunk.intervals()) {
      chunk.push_back(iv.lo.str());
      chunk.push_back(iv.hi.str());
    }
    line["chunk"] = std::move(chunk);
    os << line.dump() << "\n";
  }
  return os.str();
}

Schedule schedule_from_jsonl(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("schedule: empty input");
  json head = json::parse(line);
  std::string kind = head.at("kind").get<std::string>();
  Collective c;
  if (kind == "reduce-scatter")
    c = Collective::ReduceScatter;
  else if (kind == "allgather")
    c = Collective::AllGather;
  else
    throw std::invalid_argument("schedule: unknown kind '" + kind + "'");
  std::vector<Transfer> transfers;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    json j = json::parse(line);
    std::vector<Rat> pts;
    for (const auto& p : j.at("chunk")) pts.push_back(Rat::parse(p.get<std::string>()));
    transfers.push_back({j.at("root").get<int>(), ChunkSet::from_endpoints(pts),
                         j.at("arc").get<int>(), j.at("step").get<int>()});
  }
  Schedule s = make_schedule(c, std::move(transfers));
  int declared = head.at("t_max").get<int>();
  if (declared != s.t_max)
    throw std::invalid_argument("schedule: header t_max does not match transfers");
  return s;
}

LayerTrace trace_from_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("trace: empty input");
  if (line.find("ready_us") == std::string::npos)
    throw std::invalid_argument("trace: missing ready_us,size_bytes header");
  LayerTrace trace;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto comma = line.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("trace: bad row: " + line);
    double ready_us = std::stod(line.substr(0, comma));
    double size_bytes = std::stod(line.substr(comma + 1));
    trace.layers.push_back({ready_us * 1e-6, size_bytes * 8.0});
  }
  return trace;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << content;
}

}  // namespace dctopo
