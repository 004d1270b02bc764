#include "doctest.h"

#include "cismodel/digital_energy.hpp"
#include "cismodel/error.hpp"
#include "cismodel/timing.hpp"
#include "test_support.hpp"

using namespace cis;
using doctest::Approx;
using nlohmann::json;

namespace {

MemorySpec buffer(double e_read, double e_write, double leak) {
  MemorySpec m;
  m.name = "buf";
  m.read_energy = e_read;
  m.write_energy = e_write;
  m.leakage_power = leak;
  return m;
}

// The binned edge design with a second 3x3 consumer sharing the line buffer.
json shared_buffer_design() {
  json j = test::read_json("fig3_binning.design");
  j["software"]["stages"].push_back(json::parse(R"(
    {"name": "blur", "kind": "Stencil", "predecessors": ["binning"], "input_size": [16, 16, 1],
     "output_size": [14, 14, 1], "kernel": [3, 3], "stride": [1, 1], "ops_per_window": 9})"));
  json unit = j["hardware"]["digital_units"][0];
  unit["name"] = "blur_unit";
  j["hardware"]["digital_units"].push_back(unit);
  j["hardware"]["memories"][0]["ports"] = 3;
  j["mapping"]["stages"]["blur"] = "blur_unit";
  return j;
}

}  // namespace

TEST_CASE("compute energy is energy per cycle times cycles") {
  CHECK(compute_unit_energy(2e-12, 1'000'000) == Approx(2e-6).epsilon(1e-15));
  CHECK(compute_unit_energy(2e-12, 0) == 0.0);
  CHECK(compute_unit_energy(5e-12, 260) == Approx(1.30e-9).epsilon(1e-15));
}

TEST_CASE("memory energy: dynamic plus gated leakage") {
  const MemorySpec m = buffer(1e-12, 1.2e-12, 1e-3);
  CHECK(memory_energy(m, 1'000'000, 500'000, 30.0, 0.5) == Approx(18.27e-6).epsilon(5e-4));
  CHECK(memory_energy(m, 1'000'000, 500'000, 30.0, 0.5) ==
        Approx(1e-6 + 0.6e-6 + 1e-3 / 30.0 * 0.5).epsilon(1e-14));
  CHECK(memory_energy(m, 1'000'000, 500'000, 30.0, 0.0) == Approx(1.6e-6).epsilon(1e-14));
  CHECK(memory_energy(m, 0, 0, 30.0, 1.0) == Approx(1e-3 / 30.0).epsilon(1e-14));
  CHECK_THROWS_AS(memory_energy(m, 1, 1, 30.0), ModelError);
  MemorySpec pinned = m;
  pinned.active_fraction = 0.25;
  CHECK(memory_energy(pinned, 0, 0, 30.0) == Approx(1e-3 / 30.0 / 4).epsilon(1e-14));
}

TEST_CASE("frame-retaining memories never power down") {
  MemoryTraffic t;
  t.busy_time = 1e-3;
  CHECK(default_active_fraction(t, 1.0 / 30) == Approx(0.03).epsilon(1e-12));
  t.retains_frame = true;
  CHECK(default_active_fraction(t, 1.0 / 30) == 1.0);
  MemoryTraffic long_busy;
  long_busy.busy_time = 1.0;
  CHECK(default_active_fraction(long_busy, 1.0 / 30) == 1.0);
}

TEST_CASE("node scaling follows the user table") {
  const std::map<double, double> table = {{65.0, 1.0}, {22.0, 0.25}, {130.0, 2.0}};
  CHECK(scale_energy_across_nodes(100e-12, 65, 65, table) == 100e-12);
  CHECK(scale_energy_across_nodes(100e-12, 65, 22, table) == Approx(25e-12).epsilon(1e-15));
  try {
    scale_energy_across_nodes(1e-12, 65, 7, table);
    FAIL("unknown node accepted");
  } catch (const ModelError& e) {
    CHECK(e.kind() == ErrorKind::UnknownNode);
  }
  const double ab = scale_energy_across_nodes(scale_energy_across_nodes(3e-12, 130, 65, table), 65, 22, table);
  CHECK(ab == Approx(scale_energy_across_nodes(3e-12, 130, 22, table)).epsilon(1e-15));
}

TEST_CASE("binned edge design: accelerator plus line buffer") {
  const Design d = test::load("fig3_binning.design");
  const TimingResult t = compute_timing(d, 30.0);
  const DigitalEnergyBreakdown e = digital_frame_energy(d, t);
  REQUIRE(e.units.size() == 1);
  REQUIRE(e.memories.size() == 1);
  CHECK(e.units[0].cycles == 260);
  CHECK(e.units[0].energy == Approx(1.30e-9).epsilon(1e-12));
  const MemoryEnergy& lb = e.memories[0];
  CHECK(lb.reads == 1764);
  CHECK(lb.writes == 256);
  CHECK(lb.dynamic == Approx(1764 * 1e-12 + 256 * 1.2e-12).epsilon(1e-12));
  CHECK(lb.energy == lb.dynamic + lb.leakage);
  CHECK(e.total == e.units[0].energy + lb.energy);
}

TEST_CASE("two units sharing one memory") {
  const Design d = test::from_json(shared_buffer_design());
  const TimingResult t = compute_timing(d, 30.0);
  const DigitalEnergyBreakdown e = digital_frame_energy(d, t);
  REQUIRE(e.memories.size() == 1);
  CHECK(e.memories[0].reads == 2 * 1764);
  CHECK(e.memories[0].writes == 256);
  CHECK(e.units.size() == 2);
}

TEST_CASE("no digital hardware means no digital energy") {
  json j = test::read_json("fig3_binning.design");
  j["software"]["stages"] = json::array({j["software"]["stages"][0], j["software"]["stages"][1]});
  j["hardware"]["memories"] = json::array();
  j["hardware"]["digital_units"] = json::array();
  j["hardware"]["links"] = json::array();
  j["mapping"] = {{"stages", {{"input", "pixel_array"}, {"binning", "pixel_array"}}}};
  const Design d = test::from_json(j);
  const DigitalEnergyBreakdown e = digital_frame_energy(d, compute_timing(d, 30.0));
  CHECK(e.total == 0.0);
  CHECK(e.units.empty());
}

TEST_CASE("energy_node values are rescaled to the layer node") {
  json j = test::read_json("fig3_binning.design");
  j["globals"]["scaling_table"] = {{"65nm", 1.0}, {"22nm", 0.25}};
  j["hardware"]["digital_units"][0]["energy_node"] = "22nm";
  const Design d = test::from_json(j);
  const DigitalEnergyBreakdown e = digital_frame_energy(d, compute_timing(d, 30.0));
  CHECK(e.units[0].energy_per_cycle == Approx(20e-12).epsilon(1e-15));
}

TEST_CASE("a node missing from the scaling table is a schema error") {
  json j = test::read_json("fig3_binning.design");
  j["globals"]["scaling_table"] = {{"65nm", 1.0}};
  j["hardware"]["digital_units"][0]["energy_node"] = "28nm";
  try {
    test::from_json(j);
    FAIL("unknown node accepted");
  } catch (const ModelError& e) {
    CHECK(e.kind() == ErrorKind::SchemaError);
    CHECK(std::string(e.what()).find("UnknownNode") != std::string::npos);
  }
}
