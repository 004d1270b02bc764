#pragma once

#include <map>
#include <string>
#include <vector>

#include "cismodel/timing.hpp"

namespace cis {

double compute_unit_energy(double energy_per_cycle, Count cycles);

// reads*E_read + writes*E_write + P_leak * (1/frame_rate) * alpha.
double memory_energy(const MemorySpec& spec, Count reads, Count writes, double frame_rate,
                     double alpha);
// Uses spec.active_fraction; throws InvalidArgument when it is unset.
double memory_energy(const MemorySpec& spec, Count reads, Count writes, double frame_rate);

// Default alpha: busy time over frame time, 1 for frame-retaining memories.
double default_active_fraction(const MemoryTraffic& traffic, double frame_time);

// E * factor(to) / factor(from). Throws UnknownNode.
double scale_energy_across_nodes(double energy, double from_node, double to_node,
                                 const std::map<double, double>& scaling_table);

struct UnitEnergy {
  std::string name;
  Count cycles = 0;
  double energy_per_cycle = 0.0;  // J, after node scaling
  double energy = 0.0;

  friend bool operator==(const UnitEnergy&, const UnitEnergy&) = default;
};

struct MemoryEnergy {
  std::string name;
  Count reads = 0;
  Count writes = 0;
  double active_fraction = 0.0;
  double dynamic = 0.0;
  double leakage = 0.0;
  double energy = 0.0;

  friend bool operator==(const MemoryEnergy&, const MemoryEnergy&) = default;
};

struct DigitalEnergyBreakdown {
  std::vector<UnitEnergy> units;
  std::vector<MemoryEnergy> memories;
  double total = 0.0;

  friend bool operator==(const DigitalEnergyBreakdown&, const DigitalEnergyBreakdown&) = default;
};

DigitalEnergyBreakdown digital_frame_energy(const Design& design, const TimingResult& timing);

}  // namespace cis
