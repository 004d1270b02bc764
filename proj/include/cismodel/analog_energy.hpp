#pragma once

#include <string>
#include <vector>

#include "cismodel/dataflow.hpp"
#include "cismodel/hardware.hpp"
#include "cismodel/timing.hpp"

namespace cis {

// Operations each analog array performs per frame: ops of the stages mapped
// to it plus one op per element of every stage output streaming through it.
// A PixelInput stage counts one op per pixel only when its output leaves the
// array (otherwise readout is fused into the consumer's ops).
std::vector<Count> analog_array_ops(const AlgorithmGraph& graph, const Hardware& hw,
                                    const DataflowPlan& plan);

// ceil(ops / num_component).
Count component_access_count(Count ops, Count num_component);
Count cell_access_count(Count spatial, Count temporal);

double energy_dynamic_cell(const std::vector<std::pair<double, double>>& nodes);
double capacitance_from_noise(double voltage_swing, int resolution_bits,
                              double temperature = kDefaultTemperature);
// Largest tolerable thermal noise: 3 sigma under half an LSB.
double noise_sigma_max(double voltage_swing, int resolution_bits);
double energy_static_direct(double load_capacitance, double voltage_swing, double supply);
// Throws InvalidArgument when gm/Id is outside [10, 20] and not overridden.
double bias_current_gm_id(double load_capacitance, double gbw, double gm_over_id,
                          bool allow_out_of_range = false);
double energy_static_biased(double supply, double bias_current, double t_static);
// Energy per conversion, log-log interpolated and clamped at the ends.
double fom_lookup(const std::vector<FomPoint>& table, double sample_rate);
double energy_nonlinear_cell(const std::vector<FomPoint>& table, double sample_rate,
                             Count n_conversions);

struct CellEnergy {
  std::string name;
  CellClass cls = CellClass::Dynamic;
  double energy_per_access = 0.0;  // J per cell access
  Count accesses = 0;              // per component access
  double delay = 0.0;              // s

  friend bool operator==(const CellEnergy&, const CellEnergy&) = default;
};

struct ComponentEnergy {
  std::string name;
  ComponentKind kind = ComponentKind::ApsPixel;
  Count num_component = 1;
  double energy_per_access = 0.0;  // J
  Count access_count = 0;          // per component instance
  double energy = 0.0;             // J/frame, all instances
  std::vector<CellEnergy> cells;

  friend bool operator==(const ComponentEnergy&, const ComponentEnergy&) = default;
};

// Energy of one component access given its per-access cell delays.
ComponentEnergy component_energy(const AComponentSpec& component,
                                 const std::vector<double>& cell_delays,
                                 const Globals& globals);

struct ArrayEnergy {
  std::string name;
  Count ops = 0;
  double energy = 0.0;
  std::vector<ComponentEnergy> components;

  friend bool operator==(const ArrayEnergy&, const ArrayEnergy&) = default;
};

struct AnalogEnergyBreakdown {
  std::vector<ArrayEnergy> arrays;
  double total = 0.0;

  friend bool operator==(const AnalogEnergyBreakdown&, const AnalogEnergyBreakdown&) = default;
};

AnalogEnergyBreakdown analog_frame_energy(const Design& design, const TimingResult& timing);

}  // namespace cis
