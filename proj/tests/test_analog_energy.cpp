#include "doctest.h"

#include "cismodel/analog_energy.hpp"
#include "cismodel/error.hpp"
#include "cismodel/timing.hpp"
#include "test_support.hpp"

using namespace cis;
using doctest::Approx;

TEST_CASE("component access counts round up") {
  CHECK(component_access_count(1024, 16) == 64);
  CHECK(component_access_count(1024, 1) == 1024);
  CHECK(component_access_count(100, 16) == 7);
  CHECK(component_access_count(0, 4) == 0);
  CHECK_THROWS_AS(component_access_count(10, 0), ModelError);
}

TEST_CASE("cell access counts") {
  CHECK(cell_access_count(1, 2) == 2);
  CHECK(cell_access_count(4, 1) == 4);
  CHECK(cell_access_count(3, 5) == 15);
}

TEST_CASE("dynamic cell energy") {
  CHECK(energy_dynamic_cell({{100e-15, 1.0}}) == 100e-15);
  CHECK(energy_dynamic_cell({{100e-15, 1.0}, {50e-15, 0.5}}) == Approx(112.5e-15).epsilon(1e-14));
  CHECK(energy_dynamic_cell({}) == 0.0);
}

TEST_CASE("noise-limited capacitance") {
  CHECK(noise_sigma_max(1.0, 8) == Approx(0.651e-3).epsilon(1e-3));
  CHECK(capacitance_from_noise(1.0, 8) == Approx(9.77e-15).epsilon(1e-3));
  CHECK(noise_sigma_max(1.0, 1) == Approx(83.3e-3).epsilon(1e-3));
  CHECK(capacitance_from_noise(1.0, 1) == Approx(0.60e-18).epsilon(1e-2));
  CHECK(capacitance_from_noise(2.0, 8) == Approx(capacitance_from_noise(1.0, 8) / 4).epsilon(1e-14));
  CHECK(capacitance_from_noise(1.0, 8, 600.0) == Approx(2 * capacitance_from_noise(1.0, 8)));
  CHECK_THROWS_AS(capacitance_from_noise(1.0, 0), ModelError);
}

TEST_CASE("direct-drive static energy ignores time") {
  CHECK(energy_static_direct(100e-15, 1.0, 2.5) == Approx(250e-15).epsilon(1e-14));
  CHECK(energy_static_direct(1e-12, 0.5, 1.8) == Approx(900e-15).epsilon(1e-14));
}

TEST_CASE("gm/Id bias current") {
  CHECK(bias_current_gm_id(1e-12, 10e6, 15) == Approx(4.19e-6).epsilon(1e-3));
  CHECK(bias_current_gm_id(1e-12, 10e6, 20) == Approx(bias_current_gm_id(1e-12, 10e6, 10) / 2));
  CHECK(bias_current_gm_id(0.0, 10e6, 15) == 0.0);
  CHECK_THROWS_AS(bias_current_gm_id(1e-12, 10e6, 25), ModelError);
  CHECK_THROWS_AS(bias_current_gm_id(1e-12, 10e6, 5), ModelError);
  CHECK(bias_current_gm_id(1e-12, 10e6, 25, true) > 0.0);
}

TEST_CASE("biased static energy") {
  CHECK(energy_static_biased(2.5, 4.19e-6, 1e-6) == Approx(10.5e-12).epsilon(2e-3));
  CHECK(energy_static_biased(2.5, 4.19e-6, 0.0) == 0.0);
  // Doubling the slot halves the current sized from GBW = gain / delay.
  const double e1 = energy_static_biased(2.5, bias_current_gm_id(1e-12, 1.0 / 1e-6, 15), 1e-6);
  const double e2 = energy_static_biased(2.5, bias_current_gm_id(1e-12, 1.0 / 2e-6, 15), 2e-6);
  CHECK(e1 == Approx(e2).epsilon(1e-12));
}

TEST_CASE("figure-of-merit lookup") {
  const std::vector<FomPoint> one = {{1e6, 1e-12}};
  CHECK(energy_nonlinear_cell(one, 42e6, 1000) == Approx(1e-9).epsilon(1e-12));
  const std::vector<FomPoint> two = {{1e6, 1e-12}, {100e6, 10e-12}};
  CHECK(fom_lookup(two, 10e6) == Approx(3.1623e-12).epsilon(1e-4));
  CHECK(fom_lookup(two, 1e3) == 1e-12);
  CHECK(fom_lookup(two, 1e9) == 10e-12);
  // Unsorted input is accepted.
  CHECK(fom_lookup({{100e6, 10e-12}, {1e6, 1e-12}}, 10e6) == Approx(3.1623e-12).epsilon(1e-4));
  try {
    fom_lookup({}, 1e6);
    FAIL("empty table accepted");
  } catch (const ModelError& e) {
    CHECK(e.kind() == ErrorKind::EmptyFoMTable);
  }
}

TEST_CASE("component energy sums its cells") {
  Globals g;
  AComponentSpec single;
  single.name = "cap";
  ACellSpec c;
  c.name = "node";
  c.nodes = {{100e-15, 1.0}};
  single.cells = {c};
  CHECK(component_energy(single, {1e-6}, g).energy_per_access == 100e-15);

  AComponentSpec aps;
  aps.name = "aps";
  aps.kind = ComponentKind::ApsPixel;
  aps.cells = default_cells(ComponentKind::ApsPixel);
  const auto e = component_energy(aps, {1e-6, 1e-6, 1e-6}, g);
  REQUIRE(e.cells.size() == 3);
  CHECK(e.cells[2].name == "source_follower");
  CHECK(e.cells[2].accesses == 2);
  double sum = 0.0;
  for (const auto& ce : e.cells) sum += ce.energy_per_access * static_cast<double>(ce.accesses);
  CHECK(e.energy_per_access == Approx(sum).epsilon(1e-15));
  CHECK(e.energy_per_access == Approx(e.cells[0].energy_per_access + e.cells[1].energy_per_access +
                                      2 * e.cells[2].energy_per_access));

  AComponentSpec mac;
  mac.name = "mac";
  mac.kind = ComponentKind::Mac;
  mac.cells = default_cells(ComponentKind::Mac);
  const auto m = component_energy(mac, {1e-6, 1e-6}, g);
  REQUIRE(m.cells.size() == 2);
  CHECK(m.cells[0].cls == CellClass::Dynamic);
  CHECK(m.cells[1].cls == CellClass::StaticBiasedGmId);
  CHECK(m.cells[0].energy_per_access > 0.0);
  CHECK(m.cells[1].energy_per_access > 0.0);
}

TEST_CASE("binned edge design: 256 ADC conversions") {
  const Design d = test::load("fig3_binning.design");
  const TimingResult t = compute_timing(d, 30.0);
  const AnalogEnergyBreakdown a = analog_frame_energy(d, t);
  REQUIRE(a.arrays.size() == 2);
  CHECK(a.arrays[0].name == "pixel_array");
  CHECK(a.arrays[1].name == "adc_array");
  const ComponentEnergy& adc = a.arrays[1].components[0];
  CHECK(adc.access_count * adc.num_component == 256);
  CHECK(a.arrays[0].ops == 1024);
  CHECK(a.total == a.arrays[0].energy + a.arrays[1].energy);
}

TEST_CASE("doubling the component count halves accesses, not energy") {
  nlohmann::json j = test::read_json("fig3_binning.design");
  const Design d1 = test::from_json(j);
  j["hardware"]["analog_arrays"][1]["components"][0]["count"] = 32;
  j["hardware"]["analog_arrays"][1]["num_input"] = {1, 32, 1};
  j["hardware"]["analog_arrays"][1]["num_output"] = {1, 32, 1};
  j["hardware"]["analog_arrays"][0]["num_output"] = {1, 32, 1};
  const Design d2 = test::from_json(j);
  const auto a1 = analog_frame_energy(d1, compute_timing(d1, 30.0)).arrays[1];
  const auto a2 = analog_frame_energy(d2, compute_timing(d2, 30.0)).arrays[1];
  CHECK(a2.components[0].access_count * 2 == a1.components[0].access_count);
  // The ADC is clamped on the flat end of its FoM table, so energy is unchanged.
  CHECK(a2.energy == Approx(a1.energy).epsilon(1e-12));
}

TEST_CASE("noise_sigma overrides the half-LSB bound") {
  nlohmann::json j = test::read_json("fig3_binning.design");
  j["hardware"]["analog_arrays"][0]["components"][0]["cell_overrides"] = {
      {"photodiode", {{"nodes", {{{"voltage_swing", "1V"}}}}, {"noise_sigma", "2.6mV"}}}};
  const Design d = test::from_json(j);
  const auto a = analog_frame_energy(d, compute_timing(d, 30.0));
  const CellEnergy& pd = a.arrays[0].components[0].cells[0];
  const double c = kBoltzmann * 300.0 / (2.6e-3 * 2.6e-3);
  CHECK(pd.energy_per_access == Approx(c).epsilon(1e-12));
}
