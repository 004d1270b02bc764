#include "cismodel/analog_energy.hpp"

#include <algorithm>
#include <cmath>

#include "cismodel/error.hpp"

namespace cis {

std::vector<Count> analog_array_ops(const AlgorithmGraph& graph, const Hardware& hw,
                                    const DataflowPlan& plan) {
  std::vector<Count> ops(hw.analog_arrays.size(), 0);
  for (std::size_t s = 0; s < graph.size(); ++s) {
    const auto& ref = plan.stage_unit[s];
    if (!ref || ref->cls != UnitClass::Analog) continue;
    const Stage& st = graph.stage(s);
    if (st.kind != StageKind::PixelInput) {
      ops[ref->index] += stage_op_count(st);
      continue;
    }
    bool fused = false;
    for (std::size_t c : graph.successors(s)) {
      const auto& cu = plan.stage_unit[c];
      fused = fused || (cu && *cu == *ref);
    }
    if (!fused) ops[ref->index] += st.shape.output.count();
  }
  const auto pass = analog_pass_through(plan, hw);
  for (std::size_t a = 0; a < pass.size(); ++a) {
    for (std::size_t s : pass[a]) ops[a] += graph.stage(s).shape.output.count();
  }
  return ops;
}

Count component_access_count(Count ops, Count num_component) {
  if (num_component < 1) {
    throw ModelError(ErrorKind::InvalidArgument, "num_component must be at least 1");
  }
  if (ops <= 0) return 0;
  return (ops + num_component - 1) / num_component;
}

Count cell_access_count(Count spatial, Count temporal) {
  if (spatial < 1 || temporal < 1) {
    throw ModelError(ErrorKind::InvalidArgument, "cell spatial and temporal counts must be >= 1");
  }
  return spatial * temporal;
}

double energy_dynamic_cell(const std::vector<std::pair<double, double>>& nodes) {
  double e = 0.0;
  for (const auto& [c, v] : nodes) e += c * v * v;
  return e;
}

double noise_sigma_max(double voltage_swing, int resolution_bits) {
  if (resolution_bits < 1 || !(voltage_swing > 0.0)) {
    throw ModelError(ErrorKind::InvalidArgument,
                     "noise sizing needs a positive swing and at least one bit");
  }
  return voltage_swing / (3.0 * 2.0 * std::ldexp(1.0, resolution_bits));
}

double capacitance_from_noise(double voltage_swing, int resolution_bits, double temperature) {
  const double sigma = noise_sigma_max(voltage_swing, resolution_bits);
  return kBoltzmann * temperature / (sigma * sigma);
}

double energy_static_direct(double load_capacitance, double voltage_swing, double supply) {
  return load_capacitance * voltage_swing * supply;
}

double bias_current_gm_id(double load_capacitance, double gbw, double gm_over_id,
                          bool allow_out_of_range) {
  if (!(gm_over_id > 0.0)) {
    throw ModelError(ErrorKind::InvalidArgument, "gm/Id must be positive");
  }
  if (!allow_out_of_range && (gm_over_id < 10.0 || gm_over_id > 20.0)) {
    throw ModelError(ErrorKind::InvalidArgument,
                     "gm/Id " + format_number(gm_over_id) +
                         " is outside [10, 20]; set allow_gm_id_out_of_range to use it");
  }
  return 2.0 * kPi * load_capacitance * gbw / gm_over_id;
}

double energy_static_biased(double supply, double bias_current, double t_static) {
  return supply * bias_current * t_static;
}

double fom_lookup(const std::vector<FomPoint>& table, double sample_rate) {
  if (table.empty()) throw ModelError(ErrorKind::EmptyFoMTable, "FoM table has no points");
  std::vector<FomPoint> pts = table;
  std::sort(pts.begin(), pts.end(),
            [](const FomPoint& a, const FomPoint& b) { return a.sample_rate < b.sample_rate; });
  if (sample_rate <= pts.front().sample_rate) return pts.front().energy_per_conversion;
  if (sample_rate >= pts.back().sample_rate) return pts.back().energy_per_conversion;
  auto hi = std::upper_bound(pts.begin(), pts.end(), sample_rate,
                             [](double r, const FomPoint& p) { return r < p.sample_rate; });
  auto lo = hi - 1;
  const double x0 = std::log(lo->sample_rate), x1 = std::log(hi->sample_rate);
  const double y0 = std::log(lo->energy_per_conversion), y1 = std::log(hi->energy_per_conversion);
  const double f = (std::log(sample_rate) - x0) / (x1 - x0);
  return std::exp(y0 + f * (y1 - y0));
}

double energy_nonlinear_cell(const std::vector<FomPoint>& table, double sample_rate,
                             Count n_conversions) {
  return fom_lookup(table, sample_rate) * static_cast<double>(n_conversions);
}

namespace {

double cell_energy(const ACellSpec& cell, double delay, double t_static, const Globals& g) {
  const double supply = resolve_supply(cell, g);
  switch (cell.cls) {
    case CellClass::Dynamic: {
      std::vector<std::pair<double, double>> nodes;
      for (const auto& n : cell.nodes) {
        const double v = n.voltage_swing.value_or(resolve_swing(cell, g));
        double c = 0.0;
        if (n.capacitance) {
          c = *n.capacitance;
        } else if (cell.noise_sigma) {
          c = kBoltzmann * g.temperature / (*cell.noise_sigma * *cell.noise_sigma);
        } else {
          c = capacitance_from_noise(v, cell.resolution_bits, g.temperature);
        }
        nodes.emplace_back(c, v);
      }
      return energy_dynamic_cell(nodes);
    }
    case CellClass::StaticBiasedDirect:
      return energy_static_direct(cell.load_capacitance, resolve_swing(cell, g), supply);
    case CellClass::StaticBiasedGmId: {
      if (!(delay > 0.0)) {
        throw ModelError(ErrorKind::InvalidArgument,
                         "cell '" + cell.name + "' needs a positive delay for bias sizing");
      }
      const double gbw = cell.gain / delay;
      const double i = bias_current_gm_id(cell.load_capacitance, gbw, cell.gm_over_id,
                                          cell.allow_gm_id_out_of_range);
      return energy_static_biased(supply, i, t_static);
    }
    case CellClass::NonLinear:
      if (!(delay > 0.0)) {
        throw ModelError(ErrorKind::InvalidArgument,
                         "cell '" + cell.name + "' needs a positive delay for its sample rate");
      }
      return energy_nonlinear_cell(cell.fom_table, 1.0 / delay, 1);
  }
  return 0.0;
}

}  // namespace

ComponentEnergy component_energy(const AComponentSpec& component,
                                 const std::vector<double>& cell_delays, const Globals& globals) {
  if (cell_delays.size() != component.cells.size()) {
    throw ModelError(ErrorKind::InvalidArgument,
                     "component '" + component.name + "' needs one delay per cell");
  }
  ComponentEnergy ce;
  ce.name = component.name;
  ce.kind = component.kind;
  double access_delay = 0.0;
  for (double d : cell_delays) access_delay += d;
  for (std::size_t j = 0; j < component.cells.size(); ++j) {
    const ACellSpec& cell = component.cells[j];
    CellEnergy e;
    e.name = cell.name;
    e.cls = cell.cls;
    e.delay = cell_delays[j];
    e.accesses = cell_access_count(cell.spatial_count, cell.temporal_count);
    e.energy_per_access = cell_energy(cell, cell_delays[j],
                                      static_bias_time(access_delay, cell_delays, j), globals);
    ce.energy_per_access += e.energy_per_access * static_cast<double>(e.accesses);
    ce.cells.push_back(std::move(e));
  }
  return ce;
}

AnalogEnergyBreakdown analog_frame_energy(const Design& design, const TimingResult& timing) {
  const Hardware& hw = design.hardware;
  const DataflowPlan plan = plan_dataflow(design.graph, hw, design.mapping);
  const auto ops = analog_array_ops(design.graph, hw, plan);

  AnalogEnergyBreakdown out;
  for (std::size_t a = 0; a < hw.analog_arrays.size(); ++a) {
    if (ops[a] == 0) continue;
    const AnalogArraySpec& arr = hw.analog_arrays[a];
    ArrayEnergy ae;
    ae.name = arr.name;
    ae.ops = ops[a];
    for (const auto& slot : arr.components) {
      auto t = std::find_if(timing.components.begin(), timing.components.end(),
                            [&](const ComponentTiming& c) {
                              return c.array == arr.name && c.component == slot.component.name;
                            });
      if (t == timing.components.end()) {
        throw ModelError(ErrorKind::InvalidArgument,
                         "no timing for component '" + slot.component.name + "' of '" +
                             arr.name + "'");
      }
      ComponentEnergy ce = component_energy(slot.component, t->cell_delays, design.globals);
      ce.num_component = slot.num_component;
      ce.access_count = t->access_count;
      ce.energy = ce.energy_per_access * static_cast<double>(ce.access_count) *
                  static_cast<double>(ce.num_component);
      ae.energy += ce.energy;
      ae.components.push_back(std::move(ce));
    }
    out.total += ae.energy;
    out.arrays.push_back(std::move(ae));
  }
  return out;
}

}  // namespace cis
