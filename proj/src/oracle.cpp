#include "cismodel/oracle.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "cismodel/analog_energy.hpp"
#include "cismodel/dataflow.hpp"
#include "cismodel/error.hpp"
#include "cismodel/timing.hpp"

namespace cis {

namespace {

using Tick = std::int64_t;

struct Window {
  std::vector<Count> elements;  // input element indices read
  Count last = 0;
};

// Every window of a stage by direct walk over the input geometry.
std::vector<Window> enumerate_windows(const Stage& s) {
  const Dims3 in = s.shape.input;
  std::vector<Window> out;
  if (s.kind == StageKind::DnnLayerList) {
    Window w;
    for (Count e = 0; e < in.count(); ++e) w.elements.push_back(e);
    w.last = in.count() - 1;
    out.push_back(std::move(w));
    return out;
  }
  if (s.kind == StageKind::PixelInput) return out;
  const Dims2 k = s.shape.kernel, st = s.shape.stride;
  for (Count y0 = 0; y0 + k.h <= in.h; y0 += st.h) {
    for (Count x0 = 0; x0 + k.w <= in.w; x0 += st.w) {
      Window w;
      for (Count dy = 0; dy < k.h; ++dy)
        for (Count dx = 0; dx < k.w; ++dx)
          for (Count c = 0; c < in.c; ++c) {
            const Count e = ((y0 + dy) * in.w + (x0 + dx)) * in.c + c;
            w.elements.push_back(e);
            w.last = std::max(w.last, e);
          }
      out.push_back(std::move(w));
    }
  }
  return out;
}

Count enumerate_ops(const Stage& s, const std::vector<Window>& windows) {
  Count ops = 0;
  if (s.kind == StageKind::DnnLayerList) {
    for (const auto& layer : s.layers)
      for (Count o = 0; o < layer.output.count(); ++o) ops += layer.macs_per_output;
    return ops;
  }
  for (std::size_t w = 0; w < windows.size(); ++w)
    for (Count c = 0; c < s.shape.output.c; ++c) ops += s.ops_per_window;
  return ops;
}

Tick next_act(Tick t, Tick period) { return (t + period - 1) / period * period; }

struct Replay {
  std::vector<Tick> intake;  // per input element
  std::vector<Tick> emit;    // per output element
};

}  // namespace

OracleTrace brute_force_counts(const AlgorithmGraph& graph, const Hardware& hw,
                               const MappingTable& mapping) {
  Count total = 0;
  for (const auto& s : graph.stages()) total += s.shape.output.count();
  if (total > kOracleElementLimit) {
    throw ModelError(ErrorKind::TooLarge, "design has " + std::to_string(total) +
                                              " stage output elements; the oracle handles at most " +
                                              std::to_string(kOracleElementLimit));
  }

  OracleTrace tr;
  const DataflowPlan plan = plan_dataflow(graph, hw, mapping);
  std::vector<std::vector<Window>> windows(graph.size());
  for (std::size_t i = 0; i < graph.size(); ++i) {
    windows[i] = enumerate_windows(graph.stage(i));
    tr.stage_windows.push_back(static_cast<Count>(windows[i].size()));
    tr.stage_ops.push_back(enumerate_ops(graph.stage(i), windows[i]));
  }

  // --- analog arrays: ops placed round-robin on component instances ---
  tr.array_ops.assign(hw.analog_arrays.size(), 0);
  for (std::size_t i = 0; i < graph.size(); ++i) {
    const auto& u = plan.stage_unit[i];
    if (!u || u->cls != UnitClass::Analog) continue;
    if (graph.stage(i).kind == StageKind::PixelInput) {
      bool consumer_here = false;
      for (std::size_t c : graph.successors(i)) {
        consumer_here = consumer_here || (plan.stage_unit[c] && *plan.stage_unit[c] == *u);
      }
      if (!consumer_here) {
        for (Count e = 0; e < graph.stage(i).shape.output.count(); ++e) ++tr.array_ops[u->index];
      }
    } else {
      tr.array_ops[u->index] += tr.stage_ops[i];
    }
  }
  std::set<std::pair<std::size_t, std::size_t>> crossing;  // (array, stage)
  for (const auto& e : plan.edges) {
    for (std::size_t h = 1; h + 1 < e.path.size(); ++h) {
      if (e.path[h].cls == UnitClass::Analog) crossing.insert({e.path[h].index, e.producer});
    }
  }
  for (const auto& l : plan.link_routes) {
    for (std::size_t h = 1; h < l.path.size(); ++h) {
      if (l.path[h].cls == UnitClass::Analog) crossing.insert({l.path[h].index, l.stage});
    }
  }
  for (const auto& [a, s] : crossing) {
    for (Count e = 0; e < graph.stage(s).shape.output.count(); ++e) ++tr.array_ops[a];
  }
  for (std::size_t a = 0; a < hw.analog_arrays.size(); ++a) {
    std::vector<Count> per_slot;
    for (const auto& slot : hw.analog_arrays[a].components) {
      std::vector<Count> load(static_cast<std::size_t>(slot.num_component), 0);
      for (Count op = 0; op < tr.array_ops[a]; ++op) {
        ++load[static_cast<std::size_t>(op % slot.num_component)];
      }
      per_slot.push_back(load.empty() ? 0 : *std::max_element(load.begin(), load.end()));
    }
    tr.component_accesses.push_back(std::move(per_slot));
  }

  // --- digital replay, one element at a time ---
  tr.memory_reads.assign(hw.memories.size(), 0);
  tr.memory_writes.assign(hw.memories.size(), 0);
  tr.unit_cycles.assign(hw.digital_units.size(), 0);

  std::vector<std::size_t> digital;
  for (const auto& name : topological_order(graph)) {
    const std::size_t i = graph.index_of(name);
    if (plan.stage_unit[i] && plan.stage_unit[i]->cls == UnitClass::Digital) digital.push_back(i);
  }
  if (digital.empty()) return tr;

  Tick base = 1;
  for (std::size_t i : digital) {
    const auto hz = static_cast<Tick>(hw.digital_units[plan.stage_unit[i]->index].clock + 0.5);
    base = std::lcm(base, hz);
  }
  auto period_of = [&](std::size_t unit) {
    return base / static_cast<Tick>(hw.digital_units[unit].clock + 0.5);
  };

  // Readers of each sensor-fed memory.
  std::map<std::pair<std::size_t, std::size_t>, int> jit_readers;
  std::map<std::size_t, DigitalInputs> inputs;
  for (std::size_t i : digital) {
    inputs[i] = digital_inputs(plan, hw, graph, i);
    if (!inputs[i].problem.empty()) {
      throw ModelError(ErrorKind::InvalidArgument, inputs[i].problem);
    }
    for (const auto& in : inputs[i].inputs) {
      if (in.from_analog && in.memory) {
        if (++jit_readers[{in.producer_stage, *in.memory}] > 1) {
          throw ModelError(ErrorKind::InvalidArgument,
                           "oracle replay supports one reader per sensor-fed memory");
        }
      }
    }
  }

  std::map<std::size_t, Replay> replay;
  std::map<std::size_t, Tick> unit_free;    // first tick a unit may start its next stage
  std::map<std::size_t, Tick> unit_first;   // first input write seen by the unit
  std::map<std::size_t, Tick> unit_last;    // last emission tick
  std::set<std::pair<std::size_t, std::size_t>> written;  // (producer, memory) already counted
  Tick end = 0;

  for (std::size_t i : digital) {
    const Stage& s = graph.stage(i);
    const std::size_t unit = plan.stage_unit[i]->index;
    const DigitalUnitSpec& spec = hw.digital_units[unit];
    const Tick p = period_of(unit);
    const Count p_in = std::max<Count>(1, spec.input_pixels_per_cycle.count());
    const Count p_out = std::max<Count>(1, spec.output_pixels_per_cycle.count());
    const Count n_in = s.shape.input.count();
    const Tick start = unit_free.count(unit) ? unit_free[unit] : 0;

    Replay r;
    r.intake.assign(static_cast<std::size_t>(n_in), 0);
    Tick first_write = -1;
    for (Count e = 0; e < n_in; ++e) {
      Tick ready = start;
      for (const auto& in : inputs[i].inputs) {
        Tick avail = 0;
        if (in.from_analog) {
          if (in.memory) {
            // Sensor writes just ahead of the reader; visible a tick later.
            const Tick w = e < p_in ? 0 : r.intake[static_cast<std::size_t>(e - p_in)];
            avail = w + 1;
            first_write = 0;
          } else {
            first_write = 0;
          }
        } else {
          const Replay& src = replay.at(in.producer_stage);
          avail = src.emit[static_cast<std::size_t>(e)] + 1;
          if (first_write < 0 || src.emit.front() < first_write) first_write = src.emit.front();
        }
        ready = std::max(ready, avail);
      }
      Tick t = next_act(ready, p);
      if (e >= p_in) t = std::max(t, r.intake[static_cast<std::size_t>(e - p_in)] + p);
      if (e >= 1) t = std::max(t, r.intake[static_cast<std::size_t>(e - 1)]);
      r.intake[static_cast<std::size_t>(e)] = t;
    }
    if (inputs[i].inputs.empty()) first_write = 0;

    Count extra = 0;
    if (spec.kind == DigitalKind::SystolicArray && s.kind == StageKind::DnnLayerList) {
      const Count pe = std::max<Count>(1, spec.rows * spec.cols);
      extra = (tr.stage_ops[i] + pe - 1) / pe;
    }
    const Count per_window = s.kind == StageKind::DnnLayerList ? s.shape.output.count()
                                                                : s.shape.output.c;
    r.emit.reserve(static_cast<std::size_t>(s.shape.output.count()));
    for (const auto& w : windows[i]) {
      const Tick ready = r.intake[static_cast<std::size_t>(w.last)] + (extra + spec.num_stages - 1) * p;
      for (Count k = 0; k < per_window; ++k) {
        const std::size_t j = r.emit.size();
        Tick t = next_act(ready, p);
        if (j >= static_cast<std::size_t>(p_out)) t = std::max(t, r.emit[j - static_cast<std::size_t>(p_out)] + p);
        if (j >= 1) t = std::max(t, r.emit[j - 1]);
        r.emit.push_back(t);
      }
    }

    // Memory traffic: every window element read; every element written once.
    const int operands = (s.kind == StageKind::ElementwiseBinary && s.predecessors.size() == 1) ? 2 : 1;
    for (const auto& in : inputs[i].inputs) {
      if (!in.memory) continue;
      for (const auto& w : windows[i]) {
        for (int k = 0; k < operands; ++k) tr.memory_reads[*in.memory] += static_cast<Count>(w.elements.size());
      }
      if (written.insert({in.producer_stage, *in.memory}).second) {
        for (Count e = 0; e < graph.stage(in.producer_stage).shape.output.count(); ++e) {
          ++tr.memory_writes[*in.memory];
        }
      }
    }

    // Event list, grouped per tick.
    std::map<Tick, Count> in_ticks, out_ticks;
    for (Tick t : r.intake) ++in_ticks[t];
    for (Tick t : r.emit) ++out_ticks[t];
    for (const auto& [t, n] : in_ticks) tr.events.push_back({t, spec.name, s.name, OracleEvent::Type::Intake, n});
    for (const auto& [t, n] : out_ticks) tr.events.push_back({t, spec.name, s.name, OracleEvent::Type::Emit, n});

    const Tick done = r.emit.empty() ? start : r.emit.back();
    unit_free[unit] = done + p;
    unit_last[unit] = std::max(unit_last.count(unit) ? unit_last[unit] : done, done);
    if (!unit_first.count(unit) || first_write < unit_first[unit]) unit_first[unit] = first_write;
    end = std::max(end, done + p);
    replay.emplace(i, std::move(r));
  }

  for (const auto& [unit, last] : unit_last) {
    const Tick p = period_of(unit);
    const Tick first = std::max<Tick>(0, unit_first[unit]) / p * p;
    tr.unit_cycles[unit] = (last - first) / p + 1;
  }
  tr.digital_latency = static_cast<double>(end) / static_cast<double>(base);
  std::stable_sort(tr.events.begin(), tr.events.end(),
                   [](const OracleEvent& a, const OracleEvent& b) { return a.tick < b.tick; });
  return tr;
}

}  // namespace cis

namespace cis {

// The one place that sees both the replay and the analytical model.
std::vector<std::string> cross_check(const Design& design) {
  const AlgorithmGraph& g = design.graph;
  const Hardware& hw = design.hardware;
  const OracleTrace tr = brute_force_counts(g, hw, design.mapping);
  std::vector<std::string> out;
  auto expect = [&](const std::string& what, Count model, Count oracle) {
    if (model != oracle) {
      out.push_back(what + ": model " + std::to_string(model) + ", oracle " + std::to_string(oracle));
    }
  };
  for (std::size_t s = 0; s < g.size(); ++s) {
    expect("ops of stage '" + g.stage(s).name + "'", stage_op_count(g.stage(s)), tr.stage_ops[s]);
    if (g.stage(s).kind != StageKind::PixelInput) {
      expect("windows of stage '" + g.stage(s).name + "'", window_count(g.stage(s)),
             tr.stage_windows[s]);
    }
  }
  const DataflowPlan plan = plan_dataflow(g, hw, design.mapping);
  const auto ops = analog_array_ops(g, hw, plan);
  for (std::size_t a = 0; a < hw.analog_arrays.size(); ++a) {
    const auto& arr = hw.analog_arrays[a];
    expect("ops of array '" + arr.name + "'", ops[a], tr.array_ops[a]);
    for (std::size_t k = 0; k < arr.components.size(); ++k) {
      expect("accesses of '" + arr.name + "." + arr.components[k].component.name + "'",
             component_access_count(ops[a], arr.components[k].num_component),
             tr.component_accesses[a][k]);
    }
  }
  const DigitalSimulation sim = simulate_digital(g, hw, design.mapping);
  for (std::size_t m = 0; m < hw.memories.size(); ++m) {
    expect("reads of '" + hw.memories[m].name + "'", sim.memories[m].reads, tr.memory_reads[m]);
    expect("writes of '" + hw.memories[m].name + "'", sim.memories[m].writes, tr.memory_writes[m]);
  }
  for (std::size_t u = 0; u < hw.digital_units.size(); ++u) {
    expect("cycles of '" + hw.digital_units[u].name + "'", sim.unit_cycles[u], tr.unit_cycles[u]);
  }
  if (sim.digital_latency != tr.digital_latency) {
    out.push_back("digital latency: model " + format_number(sim.digital_latency, 12) +
                  " s, oracle " + format_number(tr.digital_latency, 12) + " s");
  }
  return out;
}

}  // namespace cis
