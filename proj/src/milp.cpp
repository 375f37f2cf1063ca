#include "dctopo/milp.hpp"

#include <sstream>
#include <stdexcept>

namespace dctopo {

MilpCounts milp_counts(long n, long d) {
  if (n < 2 || d < 1 || d >= n) throw std::invalid_argument("milp: need n >= 2, 1 <= d < n");
  MilpCounts c;
  long commodities = n * (n - 1);
  c.binary_vars = n * n;
  c.flow_vars = n * n * commodities;
  c.z_vars = n * n * commodities;
  c.capacity_rows = n * n;
  c.degree_rows = 2 * n;
  c.conservation_rows = commodities * (n - 2);
  c.endpoint_rows = 2 * commodities;
  c.linearization_rows = 4 * n * n * commodities;
  return c;
}

std::string emit_milp(long n, long d, long capacity) {
  milp_counts(n, d);  // validates
  std::ostringstream os;
  auto x = [](long i, long j) { return "x_" + std::to_string(i) + "_" + std::to_string(j); };
  auto fv = [](long i, long j, long s, long t) {
    return "f_" + std::to_string(i) + "_" + std::to_string(j) + "_" + std::to_string(s) + "_" +
           std::to_string(t);
  };
  auto zv = [](long i, long j, long s, long t) {
    return "z_" + std::to_string(i) + "_" + std::to_string(j) + "_" + std::to_string(s) + "_" +
           std::to_string(t);
  };
  os << "\\ direct-connect topology synthesis: max uniform all-pairs throughput\n";
  os << "\\ n=" << n << " d=" << d << " cap=" << capacity << "\n";
  os << "Maximize\n obj: k\nSubject To\n";
  // Link capacity over all commodities.
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) {
      os << " cap_" << i << "_" << j << ":";
      for (long s = 0; s < n; ++s)
        for (long t = 0; t < n; ++t) {
          if (s == t) continue;
          os << " + " << zv(i, j, s, t);
        }
      os << " <= " << capacity << "\n";
    }
  // Degree constraints, both orientations.
  for (long j = 0; j < n; ++j) {
    os << " indeg_" << j << ":";
    for (long i = 0; i < n; ++i) os << " + " << x(i, j);
    os << " = " << d << "\n";
  }
  for (long j = 0; j < n; ++j) {
    os << " outdeg_" << j << ":";
    for (long i = 0; i < n; ++i) os << " + " << x(j, i);
    os << " = " << d << "\n";
  }
  // Flow conservation at non-endpoints, in linearized variables.
  for (long s = 0; s < n; ++s)
    for (long t = 0; t < n; ++t) {
      if (s == t) continue;
      for (long j = 0; j < n; ++j) {
        if (j == s || j == t) continue;
        os << " cons_" << s << "_" << t << "_" << j << ":";
        for (long i = 0; i < n; ++i) os << " + " << zv(i, j, s, t);
        for (long i = 0; i < n; ++i) os << " - " << zv(j, i, s, t);
        os << " = 0\n";
      }
      os << " src_" << s << "_" << t << ":";
      for (long i = 0; i < n; ++i) os << " + " << zv(s, i, s, t);
      os << " - k = 0\n";
      os << " snk_" << s << "_" << t << ":";
      for (long i = 0; i < n; ++i) os << " + " << zv(i, t, s, t);
      os << " - k = 0\n";
    }
  // Linearization of z = x * f with 0 <= f <= Cap.
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j)
      for (long s = 0; s < n; ++s)
        for (long t = 0; t < n; ++t) {
          if (s == t) continue;
          os << " lin1_" << i << "_" << j << "_" << s << "_" << t << ": " << zv(i, j, s, t)
             << " - " << capacity << " " << x(i, j) << " <= 0\n";
          os << " lin2_" << i << "_" << j << "_" << s << "_" << t << ": " << zv(i, j, s, t)
             << " >= 0\n";
          os << " lin3_" << i << "_" << j << "_" << s << "_" << t << ": " << zv(i, j, s, t)
             << " - " << fv(i, j, s, t) << " <= 0\n";
          os << " lin4_" << i << "_" << j << "_" << s << "_" << t << ": " << zv(i, j, s, t)
             << " - " << fv(i, j, s, t) << " - " << capacity << " " << x(i, j) << " >= -"
             << capacity << "\n";
        }
  os << "Bounds\n";
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j)
      for (long s = 0; s < n; ++s)
        for (long t = 0; t < n; ++t) {
          if (s == t) continue;
          os << " 0 <= " << fv(i, j, s, t) << " <= " << capacity << "\n";
        }
  os << "Binaries\n";
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) os << " " << x(i, j) << "\n";
  os << "End\n";
  return os.str();
}

}  // namespace dctopo
