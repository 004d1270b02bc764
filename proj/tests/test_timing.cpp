#include "doctest.h"

#include "cismodel/error.hpp"
#include "cismodel/timing.hpp"
#include "test_support.hpp"

using namespace cis;
using nlohmann::json;

namespace {

ACellSpec cell(std::string name, std::optional<double> delay = std::nullopt) {
  ACellSpec c;
  c.name = std::move(name);
  c.delay = delay;
  return c;
}

AComponentSpec component(std::vector<ACellSpec> cells) {
  AComponentSpec c;
  c.name = "comp";
  c.cells = std::move(cells);
  return c;
}

std::vector<StallKind> kinds(const std::vector<StallCause>& stalls) {
  std::vector<StallKind> out;
  for (const auto& s : stalls) out.push_back(s.kind);
  return out;
}

}  // namespace

TEST_CASE("edge unit behind a 3-row line buffer takes 260 cycles") {
  const Design d = test::load("fig3_binning.design");
  const DigitalSimulation sim = simulate_digital(d.graph, d.hardware, d.mapping);
  REQUIRE(sim.unit_cycles.size() == 1);
  CHECK(sim.unit_cycles[0] == 16 * 16 + 4);
  CHECK(sim.digital_latency == doctest::Approx(2.60e-6).epsilon(1e-12));
  CHECK(sim.stalls.empty());
  // Every binned pixel is written once; each edge window reads nine.
  CHECK(sim.memories[0].writes == 256);
  CHECK(sim.memories[0].reads == 196 * 9);
}

TEST_CASE("whole-frame unit with one pipeline stage takes one cycle") {
  json j = test::read_json("fig3_binning.design");
  j["software"]["stages"] = json::parse(R"([
    {"name": "input", "kind": "PixelInput", "input_size": [4, 4, 1], "output_size": [4, 4, 1]},
    {"name": "copy", "kind": "Stencil", "predecessors": ["input"], "input_size": [4, 4, 1],
     "output_size": [4, 4, 1], "kernel": [1, 1], "stride": [1, 1], "ops_per_window": 1}])");
  auto& hw = j["hardware"];
  hw["analog_arrays"][0]["num_input"] = {4, 4, 1};
  hw["analog_arrays"][0]["num_output"] = {4, 4, 1};
  hw["analog_arrays"][0]["components"][0]["count"] = 16;
  hw["analog_arrays"][1]["num_input"] = {4, 4, 1};
  hw["analog_arrays"][1]["num_output"] = {4, 4, 1};
  hw["memories"] = json::array();
  hw["links"] = json::array();
  auto& u = hw["digital_units"][0];
  u["inputs"] = {"adc_array"};
  u["input_pixels_per_cycle"] = {4, 4, 1};
  u["output_pixels_per_cycle"] = {4, 4, 1};
  u["num_stages"] = 1;
  j["mapping"] = {{"stages", {{"input", "pixel_array"}, {"copy", "edge_unit"}}}};
  const Design d = test::from_json(j);
  const DigitalSimulation sim = simulate_digital(d.graph, d.hardware, d.mapping);
  CHECK(sim.unit_cycles[0] == 1);
}

TEST_CASE("single-row line buffer under a 3x3 window") {
  const Design d = test::load("stalls/producer_not_ready.design");
  const DigitalSimulation sim = simulate_digital(d.graph, d.hardware, d.mapping);
  REQUIRE(kinds(sim.stalls) == std::vector<StallKind>{StallKind::ProducerNotReady});
  CHECK(sim.stalls[0].unit == "line_buffer");
  CHECK(sim.stalls[0].detail.find("window (0,0)") != std::string::npos);
}

TEST_CASE("stall classification of the constructed designs") {
  auto stalls_of = [](const char* rel) {
    const Design d = test::load(rel);
    return kinds(detect_stalls(simulate_digital(d.graph, d.hardware, d.mapping).trace));
  };
  CHECK(stalls_of("fig3_binning.design").empty());
  CHECK(stalls_of("stalls/memory_full.design") == std::vector<StallKind>{StallKind::MemoryFull});
  CHECK(stalls_of("stalls/insufficient_ports.design") ==
        std::vector<StallKind>{StallKind::InsufficientPorts});
}

TEST_CASE("detect_stalls keeps the first event per memory and kind") {
  SimulationTrace t;
  t.events.push_back({TraceEvent::Type::Overflow, 0, 9, "fifo", 3, 2, "late"});
  t.events.push_back({TraceEvent::Type::Overflow, 0, 4, "fifo", 3, 2, "early"});
  t.events.push_back({TraceEvent::Type::PortConflict, 0, 7, "fifo", 2, 1, "ports"});
  const auto s = detect_stalls(t);
  REQUIRE(s.size() == 2);
  CHECK(s[0].kind == StallKind::MemoryFull);
  CHECK(s[0].cycle == 4);
  CHECK(s[1].kind == StallKind::InsufficientPorts);
  CHECK(detect_stalls({}).empty());
}

TEST_CASE("analog delay from the frame budget") {
  const double t_fr = 1.0 / 30.0;
  CHECK(allocate_analog_delay(t_fr, t_fr / 10.0, 3) == doctest::Approx(10e-3).epsilon(1e-12));
  CHECK_THROWS_AS(allocate_analog_delay(t_fr, t_fr, 3), DigitalTooSlowError);
  CHECK_THROWS_AS(allocate_analog_delay(t_fr, 2 * t_fr, 3), DigitalTooSlowError);
  try {
    allocate_analog_delay(t_fr, t_fr, 3);
  } catch (const DigitalTooSlowError& e) {
    CHECK(e.kind() == ErrorKind::DigitalTooSlow);
    CHECK(e.digital_latency() == t_fr);
  }
}

TEST_CASE("binned edge design has three analog slots") {
  const Design d = test::load("fig3_binning.design");
  CHECK(analog_slot_count(d.graph, d.hardware, d.mapping) == 3);
  const TimingResult t = compute_timing(d, 30.0);
  CHECK(t.analog_slots == 3);
  CHECK(t.analog_delay == (t.frame_time - t.digital_latency) / 3.0);
  CHECK(t.analog_stages == std::vector<std::string>{"pixel_array", "adc_array"});
}

TEST_CASE("cell delays split evenly around pinned cells") {
  const auto even = allocate_cell_delays(10e-3, component({cell("a"), cell("b")}));
  CHECK(even == std::vector<double>{5e-3, 5e-3});
  const auto pinned = allocate_cell_delays(10e-3, component({cell("a", 4e-3), cell("b"), cell("c")}));
  REQUIRE(pinned.size() == 3);
  CHECK(pinned[0] == 4e-3);
  CHECK(pinned[1] == doctest::Approx(3e-3).epsilon(1e-12));
  CHECK(pinned[2] == doctest::Approx(3e-3).epsilon(1e-12));
  try {
    allocate_cell_delays(10e-3, component({cell("a", 6e-3), cell("b", 6e-3)}));
    FAIL("over-committed delays accepted");
  } catch (const ModelError& e) {
    CHECK(e.kind() == ErrorKind::OverCommitted);
  }
}

TEST_CASE("static bias time subtracts upstream cells") {
  const std::vector<double> t = {1e-3, 2e-3, 3e-3};
  CHECK(static_bias_time(6e-3, t, 0) == 6e-3);
  CHECK(static_bias_time(6e-3, t, 1) == doctest::Approx(5e-3));
  CHECK(static_bias_time(6e-3, t, 2) == doctest::Approx(3e-3));
}

TEST_CASE("component timing covers every analog component") {
  const Design d = test::load("fig3_binning.design");
  const TimingResult t = compute_timing(d, 30.0);
  REQUIRE(t.components.size() == 2);
  const ComponentTiming& adc = t.components[1];
  CHECK(adc.array == "adc_array");
  CHECK(adc.access_count == 16);  // 256 conversions over 16 ADCs
  CHECK(adc.access_delay == doctest::Approx(t.analog_delay / 16));
  double sum = 0.0;
  for (double c : adc.cell_delays) sum += c;
  CHECK(sum == doctest::Approx(adc.access_delay));
}
