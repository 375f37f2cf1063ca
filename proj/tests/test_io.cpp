#include <doctest.h>

#include "dctopo/base_graphs.hpp"
#include "dctopo/io.hpp"

using namespace dctopo;

TEST_CASE("topology json round trip") {
  auto d = build_diamond();
  auto text = topology_to_json(d.graph);
  auto back = topology_from_json(text);
  CHECK(back == d.graph);
  auto edges = topology_to_edge_list(d.graph);
  CHECK(edges.rfind("0 3\n0 4\n", 0) == 0);
}

TEST_CASE("schedule jsonl round trip preserves validity and costs") {
  auto r = build_uni_ring(2, 4);
  auto text = schedule_to_jsonl(*r.schedule, r.graph);
  auto back = schedule_from_jsonl(text);
  CHECK(back.kind == Collective::ReduceScatter);
  CHECK(back.t_max == r.schedule->t_max);
  REQUIRE(back.transfers.size() == r.schedule->transfers.size());
  CHECK(validate(back, r.graph).ok);
  CHECK(bandwidth_coeff(back, r.graph).coefficient ==
        bandwidth_coeff(*r.schedule, r.graph).coefficient);
}

TEST_CASE("externally produced schedules import for validation") {
  // A hand-written allgather for the 2-node complete graph.
  std::string text =
      "{\"kind\":\"allgather\",\"t_max\":1,\"n\":2}\n"
      "{\"step\":1,\"root\":0,\"src\":0,\"dst\":1,\"arc\":0,\"chunk\":[\"0/1\",\"1/1\"]}\n"
      "{\"step\":1,\"root\":1,\"src\":1,\"dst\":0,\"arc\":1,\"chunk\":[\"0/1\",\"1/1\"]}\n";
  auto s = schedule_from_jsonl(text);
  auto k2 = build_complete(2);
  CHECK(validate(s, k2.graph).ok);
  // A corrupted header is rejected.
  std::string bad = "{\"kind\":\"allgather\",\"t_max\":2,\"n\":2}\n" + text.substr(text.find('\n') + 1);
  CHECK_THROWS(schedule_from_jsonl(bad));
}

TEST_CASE("trace csv") {
  auto trace = trace_from_csv("ready_us,size_bytes\n0,256\n15.5,943184\n");
  REQUIRE(trace.layers.size() == 2);
  CHECK(trace.layers[0].size_bits == 256 * 8);
  CHECK(trace.layers[1].ready_s == doctest::Approx(15.5e-6));
  CHECK_THROWS(trace_from_csv("nope\n1,2\n"));
}
