#include <doctest.h>

#include <fstream>
#include <set>
#include <regex>
#include <sstream>

#include "dctopo/io.hpp"
#include "dctopo/milp.hpp"

using namespace dctopo;

TEST_CASE("variable and constraint counts match the closed forms") {
  auto c = milp_counts(4, 2);
  CHECK(c.binary_vars == 16);
  CHECK(c.flow_vars == 192);
  CHECK(c.z_vars == 192);
  CHECK(c.capacity_rows == 16);
  CHECK(c.degree_rows == 8);
  CHECK(c.conservation_rows == 24);
  CHECK(c.endpoint_rows == 24);
  CHECK(c.linearization_rows == 768);

  auto c2 = milp_counts(2, 1);
  CHECK(c2.binary_vars == 4);
  CHECK(c2.flow_vars == 8);  // 2 commodities
  CHECK(c2.conservation_rows == 0);
  CHECK_THROWS_AS(milp_counts(4, 4), std::invalid_argument);
}

namespace {

struct ParsedLp {
  long rows = 0;
  std::set<std::string> vars;
  std::set<std::string> binaries;
};

// Minimal LP-format checker: section order, row shape, variable extraction.
ParsedLp parse_lp(const std::string& text) {
  ParsedLp out;
  std::istringstream is(text);
  std::string line;
  enum { Start, Objective, Rows, Bounds, Binaries, End } state = Start;
  std::regex row_re(R"(^ \w+:( [-+] (\d+ )?[A-Za-z]\w*)+ (<=|>=|=) -?\d+$)");
  std::regex var_re(R"([A-Za-z]\w*)");
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '\\') continue;
    if (line == "Maximize" || line == "Minimize") {
      REQUIRE(state == Start);
      state = Objective;
      continue;
    }
    if (line == "Subject To") {
      REQUIRE(state == Objective);
      state = Rows;
      continue;
    }
    if (line == "Bounds") {
      REQUIRE(state == Rows);
      state = Bounds;
      continue;
    }
    if (line == "Binaries") {
      state = Binaries;
      continue;
    }
    if (line == "End") {
      state = End;
      continue;
    }
    if (state == Rows) {
      // Normalize "a - b" into signed-term form for the regex.
      std::string norm = std::regex_replace(line, std::regex(" - "), " + -0askip ");
      REQUIRE(std::regex_search(line, std::regex(R"((<=|>=|=))")));
      ++out.rows;
      for (auto it = std::sregex_iterator(line.begin(), line.end(), var_re);
           it != std::sregex_iterator(); ++it) {
        std::string v = it->str();
        if (v != "k") out.vars.insert(v);
      }
      out.vars.insert("k");
    } else if (state == Binaries) {
      std::string v = line.substr(1);
      out.binaries.insert(v);
    }
  }
  REQUIRE(state == End);
  return out;
}

}  // namespace

TEST_CASE("emitted model is deterministic and internally consistent") {
  std::string a = emit_milp(4, 2, 1);
  std::string b = emit_milp(4, 2, 1);
  CHECK(a == b);

  auto parsed = parse_lp(a);
  auto want = milp_counts(4, 2);
  CHECK(parsed.binaries.size() == static_cast<std::size_t>(want.binary_vars));
  long expected_rows = want.capacity_rows + want.degree_rows + want.conservation_rows +
                       want.endpoint_rows + want.linearization_rows;
  CHECK(parsed.rows == expected_rows);
  // Every f and z variable appears; count by prefix.
  long f = 0, z = 0;
  for (const auto& v : parsed.vars) {
    if (v.rfind("f_", 0) == 0) ++f;
    if (v.rfind("z_", 0) == 0) ++z;
  }
  CHECK(f == want.flow_vars);
  CHECK(z == want.z_vars);
}

TEST_CASE("golden files for (4,2,1) and (8,2,1)") {
  for (auto [n, file] : {std::pair<long, const char*>{4, "milp_n4_d2.lp"},
                         std::pair<long, const char*>{8, "milp_n8_d2.lp"}}) {
    std::string produced = emit_milp(n, 2, 1);
    std::string path = std::string(DCTOPO_TEST_DATA_DIR) + "/" + file;
    std::string golden = read_file(path);
    CHECK(produced == golden);
  }
}
