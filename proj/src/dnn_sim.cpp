#include "dctopo/dnn_sim.hpp"

#include <algorithm>
#include <stdexcept>

namespace dctopo {

SimResult simulate(const LayerTrace& trace, long x, double y, double alpha,
                   double bandwidth_bps) {
  SimResult res;
  double prev_ready = 0.0;
  double f = 0.0;
  for (const auto& layer : trace.layers) {
    if (layer.ready_s < prev_ready)
      throw std::invalid_argument("simulate: trace not sorted by ready time");
    if (layer.size_bits <= 0.0) throw std::invalid_argument("simulate: non-positive layer size");
    prev_ready = layer.ready_s;
    double duration = 2.0 * (alpha * static_cast<double>(x) +
                             layer.size_bits / bandwidth_bps * y);
    f = std::max(f, layer.ready_s) + duration;
    res.finish_s.push_back(f);
    res.duration_s.push_back(duration);
  }
  res.f_max = f;
  return res;
}

std::vector<CompareRow> compare(const LayerTrace& trace, const std::vector<SimEntry>& entries,
                                double alpha, double bandwidth_bps) {
  std::vector<CompareRow> rows;
  rows.reserve(entries.size());
  for (const auto& e : entries) {
    SimResult r = simulate(trace, e.x, e.y, alpha, bandwidth_bps);
    double avg = 0.0;
    for (double d : r.duration_s) avg += d;
    if (!r.duration_s.empty()) avg /= static_cast<double>(r.duration_s.size());
    rows.push_back({e.name, r.f_max, avg});
  }
  return rows;
}

}  // namespace dctopo
