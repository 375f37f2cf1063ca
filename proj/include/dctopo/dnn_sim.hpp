#pragma once

#include <string>
#include <vector>

namespace dctopo {

/// Per-layer allreduce inputs: ready time (seconds) and size (bits), sorted
/// by ready time.
struct LayerTrace {
  struct Layer {
    double ready_s;
    double size_bits;
  };
  std::vector<Layer> layers;
};

struct SimResult {
  std::vector<double> finish_s;
  std::vector<double> duration_s;  // per-layer allreduce time
  double f_max = 0.0;
};

/// f_i = max(f_{i-1}, r_i) + 2*(alpha*x + (M_i/B)*y); f_0 = 0. Throws on an
/// unsorted trace or non-positive sizes.
SimResult simulate(const LayerTrace& trace, long x, double y, double alpha,
                   double bandwidth_bps);

struct SimEntry {
  std::string name;
  long x;
  double y;
};

struct CompareRow {
  std::string name;
  double f_max_s;
  double avg_layer_s;
};

/// Runs simulate per entry; callers append ring/DBT/lower-bound entries.
std::vector<CompareRow> compare(const LayerTrace& trace, const std::vector<SimEntry>& entries,
                                double alpha, double bandwidth_bps);

}  // namespace dctopo
