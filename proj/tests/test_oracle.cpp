#include "doctest.h"

#include "cismodel/error.hpp"
#include "cismodel/oracle.hpp"
#include "test_support.hpp"

using namespace cis;
using nlohmann::json;

TEST_CASE("enumeration of the binned edge design") {
  const Design d = test::load("fig3_binning.design");
  const OracleTrace o = brute_force_counts(d.graph, d.hardware, d.mapping);
  CHECK(o.stage_windows == std::vector<Count>{0, 256, 196});
  CHECK(o.stage_ops == std::vector<Count>{0, 1024, 1764});
  CHECK(o.array_ops == std::vector<Count>{1024, 256});
  CHECK(o.component_accesses == std::vector<std::vector<Count>>{{1}, {16}});
  CHECK(o.memory_writes == std::vector<Count>{256});
  CHECK(o.memory_reads == std::vector<Count>{1764});
  CHECK(o.unit_cycles == std::vector<Count>{260});
  CHECK(o.digital_latency == doctest::Approx(2.6e-6).epsilon(1e-12));
  CHECK_FALSE(o.events.empty());
}

TEST_CASE("elementwise stage does one op per pixel") {
  json j = test::read_json("stalls/memory_full.design");
  const Design d = test::from_json(j);
  const OracleTrace o = brute_force_counts(d.graph, d.hardware, d.mapping);
  CHECK(o.stage_ops[1] == 16 * 16);
  CHECK(o.stage_windows[1] == 16 * 16);
}

TEST_CASE("analytical and brute-force counts agree on bundled small designs") {
  for (const char* rel : {"fig3_binning.design", "stalls/producer_not_ready.design",
                          "stalls/memory_full.design", "stalls/insufficient_ports.design"}) {
    CAPTURE(rel);
    CHECK(cross_check(test::load(rel)).empty());
  }
}

TEST_CASE("frames beyond desk scale are refused") {
  const Design d = test::load("edgaze/2d_in.design");
  try {
    brute_force_counts(d.graph, d.hardware, d.mapping);
    FAIL("large design accepted");
  } catch (const ModelError& e) {
    CHECK(e.kind() == ErrorKind::TooLarge);
  }
}

TEST_CASE("a sensor-fed memory with two readers is outside the replay") {
  json j = test::read_json("fig3_binning.design");
  j["software"]["stages"].push_back(json::parse(R"(
    {"name": "blur", "kind": "Stencil", "predecessors": ["binning"], "input_size": [16, 16, 1],
     "output_size": [14, 14, 1], "kernel": [3, 3], "stride": [1, 1], "ops_per_window": 9})"));
  json unit = j["hardware"]["digital_units"][0];
  unit["name"] = "blur_unit";
  j["hardware"]["digital_units"].push_back(unit);
  j["mapping"]["stages"]["blur"] = "blur_unit";
  const Design d = test::from_json(j);
  CHECK_THROWS_AS(brute_force_counts(d.graph, d.hardware, d.mapping), ModelError);
}
