#pragma once

#include <string>

namespace dctopo {

struct MilpCounts {
  long binary_vars = 0;   // x_ij, one per ordered node pair
  long flow_vars = 0;     // f_ijc
  long z_vars = 0;        // linearization products
  long capacity_rows = 0;
  long degree_rows = 0;
  long conservation_rows = 0;
  long endpoint_rows = 0;      // source + sink rows
  long linearization_rows = 0;
};

MilpCounts milp_counts(long n, long d);

/// Deterministic LP-format text of the throughput-maximizing topology
/// synthesis MILP: binary link picks x_ij, per-commodity flows f_ijc,
/// linearized products z_ijc, uniform demand k to maximize.
std::string emit_milp(long n, long d, long capacity);

}  // namespace dctopo
