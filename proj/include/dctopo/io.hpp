#pragma once

#include <string>
#include <vector>

#include "dctopo/digraph.hpp"
#include "dctopo/dnn_sim.hpp"
#include "dctopo/schedule.hpp"

namespace dctopo {

/// {"n": N, "arcs": [[src,dst], ...]} with arc order defining ids.
std::string topology_to_json(const Digraph& g);
Digraph topology_from_json(const std::string& text);

/// One "src dst" line per arc, in id order.
std::string topology_to_edge_list(const Digraph& g);

/// JSONL: a header line {"kind","t_max","n"}, then one line per transfer
/// {"step","root","src","dst","arc","chunk":[flattened "p/q" endpoints]}.
std::string schedule_to_jsonl(const Schedule& s, const Digraph& g);
Schedule schedule_from_jsonl(const std::string& text);

/// CSV with header ready_us,size_bytes.
LayerTrace trace_from_csv(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace dctopo
