#include "cismodel/digital_energy.hpp"

#include <algorithm>

#include "cismodel/error.hpp"

namespace cis {

double compute_unit_energy(double energy_per_cycle, Count cycles) {
  return energy_per_cycle * static_cast<double>(cycles);
}

double memory_energy(const MemorySpec& spec, Count reads, Count writes, double frame_rate,
                     double alpha) {
  if (!(frame_rate > 0.0)) throw ModelError(ErrorKind::InvalidArgument, "frame rate must be positive");
  if (alpha < 0.0 || alpha > 1.0) {
    throw ModelError(ErrorKind::InvalidArgument, "active fraction must lie in [0, 1]");
  }
  const double dynamic = static_cast<double>(reads) * spec.read_energy +
                         static_cast<double>(writes) * spec.write_energy;
  return dynamic + spec.leakage_power * (1.0 / frame_rate) * alpha;
}

double memory_energy(const MemorySpec& spec, Count reads, Count writes, double frame_rate) {
  if (!spec.active_fraction) {
    throw ModelError(ErrorKind::InvalidArgument,
                     "memory '" + spec.name + "' has no active_fraction");
  }
  return memory_energy(spec, reads, writes, frame_rate, *spec.active_fraction);
}

double default_active_fraction(const MemoryTraffic& traffic, double frame_time) {
  if (traffic.retains_frame) return 1.0;
  if (!(frame_time > 0.0)) return 0.0;
  return std::clamp(traffic.busy_time / frame_time, 0.0, 1.0);
}

double scale_energy_across_nodes(double energy, double from_node, double to_node,
                                 const std::map<double, double>& scaling_table) {
  for (double node : {from_node, to_node}) {
    if (!scaling_table.count(node)) {
      throw ModelError(ErrorKind::UnknownNode,
                       "process node " + format_number(node) + " nm is not in the scaling table");
    }
  }
  return energy * scaling_table.at(to_node) / scaling_table.at(from_node);
}

namespace {

std::optional<double> layer_node(const Hardware& hw, const std::string& layer) {
  if (auto li = hw.find_layer(layer)) return hw.layers[*li].process_node;
  return std::nullopt;
}

}  // namespace

DigitalEnergyBreakdown digital_frame_energy(const Design& design, const TimingResult& timing) {
  const Hardware& hw = design.hardware;
  DigitalEnergyBreakdown out;
  for (std::size_t u = 0; u < hw.digital_units.size(); ++u) {
    const DigitalUnitSpec& spec = hw.digital_units[u];
    UnitEnergy ue;
    ue.name = spec.name;
    ue.cycles = u < timing.unit_cycles.size() ? timing.unit_cycles[u] : 0;
    ue.energy_per_cycle =
        spec.energy_per_cycle * node_scale(design.globals, spec.energy_node, layer_node(hw, spec.layer));
    ue.energy = compute_unit_energy(ue.energy_per_cycle, ue.cycles);
    out.total += ue.energy;
    out.units.push_back(ue);
  }
  const double fps = 1.0 / timing.frame_time;
  for (std::size_t m = 0; m < hw.memories.size(); ++m) {
    MemorySpec spec = hw.memories[m];
    const double k = node_scale(design.globals, spec.energy_node, layer_node(hw, spec.layer));
    spec.read_energy *= k;
    spec.write_energy *= k;
    spec.leakage_power *= k;
    MemoryEnergy me;
    me.name = spec.name;
    if (m < timing.memories.size()) {
      me.reads = timing.memories[m].reads;
      me.writes = timing.memories[m].writes;
      me.active_fraction = spec.active_fraction.value_or(
          default_active_fraction(timing.memories[m], timing.frame_time));
    } else {
      me.active_fraction = spec.active_fraction.value_or(0.0);
    }
    me.dynamic = memory_energy(spec, me.reads, me.writes, fps, 0.0);
    me.leakage = memory_energy(spec, 0, 0, fps, me.active_fraction);
    me.energy = me.dynamic + me.leakage;
    out.total += me.energy;
    out.memories.push_back(me);
  }
  return out;
}

}  // namespace cis
