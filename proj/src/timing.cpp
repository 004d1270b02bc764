#include "cismodel/timing.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "cismodel/analog_energy.hpp"
#include "cismodel/error.hpp"

namespace cis {

std::string_view to_string(StallKind kind) {
  switch (kind) {
    case StallKind::ProducerNotReady: return "ProducerNotReady";
    case StallKind::MemoryFull: return "MemoryFull";
    case StallKind::InsufficientPorts: return "InsufficientPorts";
  }
  return "?";
}

namespace {

using Tick = std::int64_t;

// Data of one producer stage held in one memory (or wired straight to a
// single consumer when `memory` is empty).
struct Buffer {
  std::size_t producer = 0;
  bool from_analog = false;
  std::optional<std::size_t> memory;
  Count total = 0;
  int bits = 8;
  Count written = 0;
  Count readable = 0;
  Count released = 0;
  Tick first_write = -1;
  std::vector<std::size_t> consumers;   // task indices
  std::vector<std::int32_t> remaining;  // per element, consumers still needing it
};

struct Pending {
  Tick ready;
  Count count;
};

struct Task {
  std::size_t stage = 0;
  std::size_t unit = 0;
  std::vector<std::size_t> inputs;   // buffer indices, one per predecessor
  std::vector<std::size_t> outputs;  // buffer indices written by this stage
  Count in_total = 0;
  Count pos = 0;
  Count windows_queued = 0;
  Count n_windows = 0;
  Count out_total = 0;
  Count emitted = 0;
  Count compute_cycles = 0;
  std::deque<Pending> pending;
  // Per input buffer: element order by release position, and cursor.
  std::vector<std::vector<Count>> release_order;
  std::vector<std::vector<Count>> release_at;
  std::vector<std::size_t> release_cursor;
  bool done = false;
};

struct UnitState {
  std::size_t unit = 0;
  Tick period = 1;
  std::vector<std::size_t> tasks;
  std::size_t current = 0;
  Tick start = -1;
  Tick last_emit = -1;
  bool finished() const { return current >= tasks.size(); }
};

std::int64_t whole_hz(double clock, const std::string& unit) {
  const double r = std::round(clock);
  if (!(clock > 0.0) || std::abs(clock - r) > 1e-6 * clock) {
    throw ModelError(ErrorKind::InvalidArgument,
                     "clock of '" + unit + "' must be a positive whole number of hertz");
  }
  return static_cast<std::int64_t>(r);
}

Count capacity_bits(const MemorySpec& m) {
  Count bits = static_cast<Count>(std::floor(m.capacity_bytes * 8.0 + 1e-9));
  if (m.kind == MemoryKind::DoubleBuffer) bits /= 2;  // one bank is being filled
  return bits;
}

// Elements of `b` the memory can hold for a single reader.
Count buffer_capacity(const MemorySpec& m, const Buffer& b, const Stage& producer) {
  Count cap = capacity_bits(m) / b.bits;
  if (m.kind == MemoryKind::LineBuffer) {
    cap = std::min(cap, m.rows * m.row_width * producer.shape.output.c);
  }
  return cap;
}

// Release position of element `e` of `b` once every consumer is done with
// it; -1 when some consumer retains it for the whole frame.
Count merged_release(const AlgorithmGraph& graph, const std::vector<Task>& tasks, const Buffer& b,
                     Count e) {
  Count rel = 0;
  for (std::size_t t : b.consumers) {
    const Count r = release_position(graph.stage(tasks[t].stage), e);
    if (r < 0) return -1;
    rel = std::max(rel, r);
  }
  return rel;
}

std::string window_label(const Stage& s, Count window) {
  if (s.kind == StageKind::DnnLayerList) return "whole-input window";
  return "window (" + std::to_string(window / s.shape.output.w) + "," +
         std::to_string(window % s.shape.output.w) + ")";
}

// Static residency: can the memory hold every element still needed at the
// moment each new element arrives?
void check_residency(const AlgorithmGraph& graph, const Hardware& hw, const std::vector<Task>& tasks,
                     const std::vector<UnitState>& units, const Buffer& b, SimulationTrace& trace) {
  const MemorySpec& m = hw.memories[*b.memory];
  const Stage& producer = graph.stage(b.producer);
  const Count cap = buffer_capacity(m, b, producer);
  std::vector<Count> hist(static_cast<std::size_t>(b.total) + 1, 0);
  for (Count e = 0; e < b.total; ++e) {
    const Count r = merged_release(graph, tasks, b, e);
    if (r >= 0) ++hist[static_cast<std::size_t>(std::min(r + 1, b.total))];
  }
  Count released_before = 0;  // #{e : release(e) < i}
  for (Count i = 0; i < b.total; ++i) {
    released_before += hist[static_cast<std::size_t>(i)];
    const Count ws = (i + 1) - released_before;
    if (ws <= cap) continue;
    const Task& consumer = tasks[b.consumers.front()];
    const Stage& cs = graph.stage(consumer.stage);
    Count w = 0;
    while (w + 1 < window_count(cs) && window_last_input(cs, w) < i) ++w;
    const Count p_in =
        std::max<Count>(1, hw.digital_units[units[consumer.unit].unit].input_pixels_per_cycle.count());
    trace.events.push_back({TraceEvent::Type::WindowUnavailable, *b.memory, i / p_in, m.name, ws,
                            cap,
                            window_label(cs, w) + " of '" + cs.name + "' needs " +
                                std::to_string(ws) + " elements of '" + producer.name +
                                "' resident but '" + m.name + "' holds " + std::to_string(cap)});
    return;
  }
}

}  // namespace

DigitalSimulation simulate_digital(const AlgorithmGraph& graph, const Hardware& hw,
                                   const MappingTable& mapping) {
  DigitalSimulation sim;
  sim.unit_cycles.assign(hw.digital_units.size(), 0);
  for (const auto& m : hw.memories) sim.memories.push_back({m.name, 0, 0, 0.0, false, 0});

  const DataflowPlan plan = plan_dataflow(graph, hw, mapping);
  const auto order = topological_order(graph);

  // Units and their task queues in topological order.
  std::vector<UnitState> units;
  std::map<std::size_t, std::size_t> unit_slot;  // digital unit index -> units[]
  std::vector<Task> tasks;
  std::vector<std::optional<std::size_t>> task_of(graph.size());
  for (const auto& name : order) {
    const std::size_t s = graph.index_of(name);
    const auto& ref = plan.stage_unit[s];
    if (!ref || ref->cls != UnitClass::Digital) {
      if (ref && ref->cls == UnitClass::Memory) {
        throw ModelError(ErrorKind::NonDigitalUnit,
                         "stage '" + name + "' is mapped to memory '" + hw.unit_name(*ref) + "'");
      }
      continue;
    }
    auto [it, fresh] = unit_slot.try_emplace(ref->index, units.size());
    if (fresh) {
      UnitState u;
      u.unit = ref->index;
      units.push_back(u);
    }
    Task t;
    t.stage = s;
    t.unit = it->second;
    task_of[s] = tasks.size();
    units[it->second].tasks.push_back(tasks.size());
    tasks.push_back(std::move(t));
  }
  if (tasks.empty()) return sim;

  // Common tick base: LCM of the unit clocks.
  std::int64_t base = 1;
  for (const auto& u : units) {
    const auto& spec = hw.digital_units[u.unit];
    const std::int64_t hz = whole_hz(spec.clock, spec.name);
    const __int128 l = static_cast<__int128>(base) / std::gcd(base, hz) * hz;
    if (l > (static_cast<__int128>(1) << 62)) {
      throw ModelError(ErrorKind::InvalidArgument, "digital clocks have no practical common base");
    }
    base = static_cast<std::int64_t>(l);
  }
  for (auto& u : units) u.period = base / whole_hz(hw.digital_units[u.unit].clock, "");

  // Buffers: one per (producer, memory), one per direct edge.
  std::vector<Buffer> buffers;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> shared;  // (producer, memory)
  for (std::size_t ti = 0; ti < tasks.size(); ++ti) {
    Task& t = tasks[ti];
    const Stage& st = graph.stage(t.stage);
    const DigitalInputs ins = digital_inputs(plan, hw, graph, t.stage);
    if (!ins.problem.empty()) {
      throw ModelError(ErrorKind::InvalidArgument, "stage '" + st.name + "': " + ins.problem);
    }
    for (const auto& in : ins.inputs) {
      std::size_t bi;
      auto key = std::make_pair(in.producer_stage, in.memory.value_or(0));
      auto found = in.memory ? shared.find(key) : shared.end();
      if (found != shared.end()) {
        bi = found->second;
      } else {
        Buffer b;
        b.producer = in.producer_stage;
        b.from_analog = in.from_analog;
        b.memory = in.memory;
        b.total = graph.stage(in.producer_stage).shape.output.count();
        b.bits = graph.stage(in.producer_stage).bits_per_element;
        bi = buffers.size();
        buffers.push_back(std::move(b));
        if (in.memory) shared.emplace(key, bi);
        if (auto pt = task_of[in.producer_stage]) tasks[*pt].outputs.push_back(bi);
      }
      buffers[bi].consumers.push_back(ti);
      t.inputs.push_back(bi);
    }
    t.in_total = st.shape.input.count();
    t.n_windows = window_count(st);
    t.out_total = st.shape.output.count();
    const auto& spec = hw.digital_units[units[t.unit].unit];
    if (spec.kind == DigitalKind::SystolicArray && st.kind == StageKind::DnnLayerList) {
      const Count pe = std::max<Count>(1, spec.rows * spec.cols);
      t.compute_cycles = (stage_op_count(st) + pe - 1) / pe;
    }
  }

  // Release bookkeeping for memory-held buffers.
  for (auto& b : buffers) {
    if (!b.memory) continue;
    b.remaining.assign(static_cast<std::size_t>(b.total), 0);
    for (std::size_t ti : b.consumers) {
      const Stage& cs = graph.stage(tasks[ti].stage);
      if (is_temporal(cs)) sim.memories[*b.memory].retains_frame = true;
    }
  }
  for (std::size_t ti = 0; ti < tasks.size(); ++ti) {
    Task& t = tasks[ti];
    const Stage& cs = graph.stage(t.stage);
    t.release_order.resize(t.inputs.size());
    t.release_at.resize(t.inputs.size());
    t.release_cursor.assign(t.inputs.size(), 0);
    for (std::size_t k = 0; k < t.inputs.size(); ++k) {
      Buffer& b = buffers[t.inputs[k]];
      if (!b.memory || is_temporal(cs)) {
        if (b.memory) {
          for (auto& r : b.remaining) ++r;  // never let go
        }
        continue;
      }
      // Counting sort of elements by release position.
      std::vector<Count> rel(static_cast<std::size_t>(b.total));
      std::vector<Count> bucket(static_cast<std::size_t>(b.total) + 1, 0);
      for (Count e = 0; e < b.total; ++e) {
        rel[static_cast<std::size_t>(e)] = release_position(cs, e);
        ++bucket[static_cast<std::size_t>(rel[static_cast<std::size_t>(e)]) + 1];
        ++b.remaining[static_cast<std::size_t>(e)];
      }
      std::partial_sum(bucket.begin(), bucket.end(), bucket.begin());
      auto& ord = t.release_order[k];
      ord.assign(static_cast<std::size_t>(b.total), 0);
      for (Count e = 0; e < b.total; ++e) {
        ord[static_cast<std::size_t>(bucket[static_cast<std::size_t>(rel[static_cast<std::size_t>(e)])]++)] = e;
      }
      auto& at = t.release_at[k];
      at.resize(ord.size());
      for (std::size_t j = 0; j < ord.size(); ++j) at[j] = rel[static_cast<std::size_t>(ord[j])];
    }
  }

  for (const auto& b : buffers) {
    if (b.memory) check_residency(graph, hw, tasks, units, b, sim.trace);
  }

  // Buffers with no memory fed by the analog side are available in full.
  for (auto& b : buffers) {
    if (b.from_analog && !b.memory) {
      b.written = b.readable = b.total;
      b.first_write = 0;
    }
  }

  std::vector<Count> peak(hw.memories.size(), 0);
  std::vector<Tick> mem_first_write(hw.memories.size(), -1);
  std::vector<Tick> mem_last_read(hw.memories.size(), -1);
  std::vector<bool> overflow_seen(hw.memories.size(), false);
  std::vector<bool> ports_seen(hw.memories.size(), false);

  auto p_in = [&](const Task& t) {
    return std::max<Count>(1, hw.digital_units[units[t.unit].unit].input_pixels_per_cycle.count());
  };

  // JIT source: keep each reader at most one intake ahead of its position.
  auto source_write = [&](Tick now, std::vector<Count>& tx) {
    for (auto& b : buffers) {
      if (!b.from_analog || !b.memory) continue;
      Count target = b.written;
      for (std::size_t ti : b.consumers) {
        target = std::max(target, std::min(b.total, tasks[ti].pos + p_in(tasks[ti])));
      }
      if (target > b.written) {
        sim.memories[*b.memory].writes += target - b.written;
        b.written = target;
        if (b.first_write < 0) b.first_write = now;
        if (mem_first_write[*b.memory] < 0) mem_first_write[*b.memory] = now;
        ++tx[*b.memory];
      }
    }
  };

  std::vector<Count> tx(hw.memories.size(), 0);
  std::vector<Tick> writer_period(hw.memories.size(), units.front().period);
  Tick now = 0;

  while (true) {
    bool all_done = true;
    for (const auto& u : units) all_done = all_done && u.finished();
    if (all_done) break;

    std::fill(tx.begin(), tx.end(), 0);
    std::vector<bool> wrote_digital(hw.memories.size(), false);
    bool progress = false;

    // Intake.
    for (auto& u : units) {
      if (u.finished() || now % u.period != 0) continue;
      Task& t = tasks[u.tasks[u.current]];
      const Stage& st = graph.stage(t.stage);
      Count avail = t.in_total;
      for (std::size_t bi : t.inputs) avail = std::min(avail, buffers[bi].readable);
      const Count take = std::min(p_in(t), avail - t.pos);
      if (take <= 0) continue;
      progress = true;
      t.pos += take;
      for (std::size_t k = 0; k < t.inputs.size(); ++k) {
        Buffer& b = buffers[t.inputs[k]];
        if (!b.memory) continue;
        ++tx[*b.memory];
        mem_last_read[*b.memory] = std::max(mem_last_read[*b.memory], now + u.period);
        auto& ord = t.release_order[k];
        auto& at = t.release_at[k];
        auto& cur = t.release_cursor[k];
        while (cur < ord.size() && at[cur] < t.pos) {
          if (--b.remaining[static_cast<std::size_t>(ord[cur])] == 0) ++b.released;
          ++cur;
        }
      }
      const Count per_window_reads = reads_per_window(st);
      while (t.windows_queued < t.n_windows && window_last_input(st, t.windows_queued) < t.pos) {
        for (std::size_t bi : t.inputs) {
          if (buffers[bi].memory) sim.memories[*buffers[bi].memory].reads += per_window_reads;
        }
        const Tick ready = now + (t.compute_cycles +
                                  hw.digital_units[u.unit].num_stages - 1) * u.period;
        t.pending.push_back({ready, outputs_per_window(st)});
        ++t.windows_queued;
      }
    }

    // Emission.
    for (auto& u : units) {
      if (u.finished() || now % u.period != 0) continue;
      Task& t = tasks[u.tasks[u.current]];
      Count budget =
          std::max<Count>(1, hw.digital_units[u.unit].output_pixels_per_cycle.count());
      Count out = 0;
      while (budget > 0 && !t.pending.empty() && t.pending.front().ready <= now) {
        const Count n = std::min(budget, t.pending.front().count);
        out += n;
        budget -= n;
        if ((t.pending.front().count -= n) == 0) t.pending.pop_front();
      }
      if (out == 0) continue;
      progress = true;
      t.emitted += out;
      u.last_emit = now;
      for (std::size_t bi : t.outputs) {
        Buffer& b = buffers[bi];
        b.written += out;
        if (b.first_write < 0) b.first_write = now;
        if (b.memory) {
          sim.memories[*b.memory].writes += out;
          if (mem_first_write[*b.memory] < 0) mem_first_write[*b.memory] = now;
          ++tx[*b.memory];
          wrote_digital[*b.memory] = true;
          writer_period[*b.memory] = u.period;
        }
      }
      if (t.emitted >= t.out_total) {
        t.done = true;
        ++u.current;
      }
    }

    source_write(now, tx);
    // Everything written this tick becomes visible from the next one on.
    for (auto& b : buffers) b.readable = b.written;

    // Occupancy and port pressure.
    std::vector<Count> occ_bits(hw.memories.size(), 0), occ(hw.memories.size(), 0);
    std::vector<Count> line_excess(hw.memories.size(), 0);
    for (const auto& b : buffers) {
      if (!b.memory) continue;
      const Count held = b.written - b.released;
      occ[*b.memory] += held;
      occ_bits[*b.memory] += held * b.bits;
      const MemorySpec& m = hw.memories[*b.memory];
      if (m.kind == MemoryKind::LineBuffer) {
        const Count lim = m.rows * m.row_width * graph.stage(b.producer).shape.output.c;
        if (held > lim) line_excess[*b.memory] = std::max(line_excess[*b.memory], held - lim);
      }
    }
    for (std::size_t mi = 0; mi < hw.memories.size(); ++mi) {
      const MemorySpec& m = hw.memories[mi];
      peak[mi] = std::max(peak[mi], occ[mi]);
      if (wrote_digital[mi] && !overflow_seen[mi] &&
          (occ_bits[mi] > capacity_bits(m) || line_excess[mi] > 0)) {
        overflow_seen[mi] = true;
        const Count cycle = now / writer_period[mi];
        sim.trace.events.push_back({TraceEvent::Type::Overflow, mi, cycle, m.name, occ[mi],
                                    capacity_bits(m) / 8,
                                    "'" + m.name + "' holds " + std::to_string(occ[mi]) +
                                        " elements, over its capacity at tick " +
                                        std::to_string(now)});
      }
      if (tx[mi] > m.ports && !ports_seen[mi]) {
        ports_seen[mi] = true;
        sim.trace.events.push_back({TraceEvent::Type::PortConflict, mi,
                                    now / writer_period[mi], m.name, tx[mi], m.ports,
                                    std::to_string(tx[mi]) + " accesses in one cycle on '" +
                                        m.name + "' with " + std::to_string(m.ports) +
                                        " port(s)"});
      }
    }

    // Deadlock guard: nothing moved and nothing is in flight.
    if (!progress) {
      bool waiting_only = true;
      for (const auto& u : units) {
        if (u.finished()) continue;
        const Task& t = tasks[u.tasks[u.current]];
        Count avail = t.in_total;
        for (std::size_t bi : t.inputs) avail = std::min(avail, buffers[bi].written);
        if (!t.pending.empty() || avail > t.pos) waiting_only = false;
      }
      if (waiting_only) {
        throw ModelError(ErrorKind::InvalidArgument, "digital pipeline cannot make progress");
      }
    }

    // Next activation of any unfinished unit.
    Tick next = -1;
    for (const auto& u : units) {
      if (u.finished()) continue;
      const Tick n = (now / u.period + 1) * u.period;
      if (next < 0 || n < next) next = n;
    }
    if (next < 0) break;
    now = next;
  }

  // The sensor digitizes the whole frame, including rows no window reads.
  for (auto& b : buffers) {
    if (b.from_analog && b.memory && b.written < b.total) {
      sim.memories[*b.memory].writes += b.total - b.written;
      b.written = b.total;
    }
  }

  Tick end = 0;
  for (auto& u : units) {
    if (u.last_emit < 0) continue;
    // Cycles count from the first write of any input the unit consumes.
    for (std::size_t ti : u.tasks) {
      if (tasks[ti].inputs.empty()) u.start = 0;
      for (std::size_t bi : tasks[ti].inputs) {
        const Tick w = buffers[bi].first_write;
        if (w >= 0 && (u.start < 0 || w < u.start)) u.start = w;
      }
    }
    const Tick start = u.start < 0 ? 0 : (u.start / u.period) * u.period;
    sim.unit_cycles[u.unit] = (u.last_emit - start) / u.period + 1;
    end = std::max(end, u.last_emit + u.period);
  }
  sim.digital_latency = static_cast<double>(end) / static_cast<double>(base);
  for (std::size_t mi = 0; mi < hw.memories.size(); ++mi) {
    auto& mt = sim.memories[mi];
    mt.peak_occupancy = peak[mi];
    if (mem_first_write[mi] >= 0 && mem_last_read[mi] >= 0) {
      mt.busy_time = static_cast<double>(mem_last_read[mi] - mem_first_write[mi]) /
                     static_cast<double>(base);
    }
  }
  sim.stalls = detect_stalls(sim.trace);
  return sim;
}

std::vector<StallCause> detect_stalls(const SimulationTrace& trace) {
  std::set<std::size_t> not_ready;
  for (const auto& e : trace.events) {
    if (e.type == TraceEvent::Type::WindowUnavailable) not_ready.insert(e.memory);
  }
  std::vector<TraceEvent> events = trace.events;
  std::stable_sort(events.begin(), events.end(),
                   [](const TraceEvent& a, const TraceEvent& b) { return a.cycle < b.cycle; });
  std::vector<StallCause> out;
  std::set<std::pair<std::size_t, StallKind>> seen;
  for (const auto& e : events) {
    StallKind kind = StallKind::ProducerNotReady;
    switch (e.type) {
      case TraceEvent::Type::WindowUnavailable: kind = StallKind::ProducerNotReady; break;
      case TraceEvent::Type::Overflow:
        if (not_ready.count(e.memory)) continue;
        kind = StallKind::MemoryFull;
        break;
      case TraceEvent::Type::PortConflict: kind = StallKind::InsufficientPorts; break;
    }
    if (!seen.insert({e.memory, kind}).second) continue;
    out.push_back({kind, e.unit, e.cycle, e.detail});
  }
  return out;
}

double allocate_analog_delay(double frame_time, double digital_latency, Count analog_slots) {
  if (analog_slots < 1) {
    throw ModelError(ErrorKind::InvalidArgument, "analog slot count must be at least 1");
  }
  if (digital_latency >= frame_time) throw DigitalTooSlowError(digital_latency, frame_time);
  return (frame_time - digital_latency) / static_cast<double>(analog_slots);
}

std::vector<double> allocate_cell_delays(double component_delay, const AComponentSpec& component) {
  if (component.cells.empty()) {
    throw ModelError(ErrorKind::InvalidArgument,
                     "component '" + component.name + "' has no cells");
  }
  double pinned = 0.0;
  std::size_t free_cells = 0;
  for (const auto& c : component.cells) {
    if (c.delay) {
      pinned += *c.delay;
    } else {
      ++free_cells;
    }
  }
  if (pinned > component_delay * (1.0 + 1e-12)) {
    throw ModelError(ErrorKind::OverCommitted,
                     "pinned cell delays of '" + component.name + "' sum to " +
                         format_number(pinned) + " s, over the " +
                         format_number(component_delay) + " s available");
  }
  const double share =
      free_cells == 0 ? 0.0 : (component_delay - pinned) / static_cast<double>(free_cells);
  std::vector<double> delays;
  delays.reserve(component.cells.size());
  for (const auto& c : component.cells) delays.push_back(c.delay ? *c.delay : share);
  return delays;
}

double static_bias_time(double component_delay, const std::vector<double>& cell_delays,
                        std::size_t j) {
  double t = component_delay;
  for (std::size_t i = 0; i < j && i < cell_delays.size(); ++i) t -= cell_delays[i];
  return std::max(0.0, t);
}

Count analog_slot_count(const AlgorithmGraph& graph, const Hardware& hw,
                        const MappingTable& mapping) {
  const DataflowPlan plan = plan_dataflow(graph, hw, mapping);
  const auto used = used_analog_arrays(plan, hw);
  const std::size_t n = hw.analog_arrays.size();

  // Analog-to-analog hops actually carrying data.
  std::vector<std::set<std::size_t>> next(n);
  auto add = [&](const std::vector<UnitRef>& path) {
    for (std::size_t h = 0; h + 1 < path.size(); ++h) {
      if (path[h].cls == UnitClass::Analog && path[h + 1].cls == UnitClass::Analog &&
          path[h].index != path[h + 1].index) {
        next[path[h].index].insert(path[h + 1].index);
      }
    }
  };
  for (const auto& e : plan.edges) add(e.path);
  for (const auto& l : plan.link_routes) add(l.path);

  std::vector<Count> memo(n, -1);
  std::vector<bool> on_stack(n, false);
  std::function<Count(std::size_t)> chain = [&](std::size_t a) -> Count {
    if (memo[a] >= 0) return memo[a];
    if (on_stack[a]) return 0;
    on_stack[a] = true;
    Count best = 0;
    for (std::size_t b : next[a]) best = std::max(best, chain(b));
    on_stack[a] = false;
    return memo[a] = best + 1;
  };
  Count longest = 0;
  for (std::size_t a = 0; a < n; ++a) {
    if (used[a]) longest = std::max(longest, chain(a));
  }

  // Digital consumers that must see more than one input row first.
  Count prologue = 0;
  for (std::size_t s = 0; s < graph.size(); ++s) {
    if (!plan.is_digital(s)) continue;
    const DigitalInputs ins = digital_inputs(plan, hw, graph, s);
    bool from_analog = false;
    for (const auto& in : ins.inputs) from_analog = from_analog || in.from_analog;
    if (!from_analog) continue;
    const Stage& st = graph.stage(s);
    if (window_last_input(st, 0) >= st.shape.input.w * st.shape.input.c) prologue = 1;
  }
  return longest + prologue;
}

TimingResult compute_timing(const Design& design, double fps) {
  if (!(fps > 0.0)) throw ModelError(ErrorKind::InvalidArgument, "fps must be positive");
  const AlgorithmGraph& graph = design.graph;
  const Hardware& hw = design.hardware;

  TimingResult r;
  r.frame_time = 1.0 / fps;
  DigitalSimulation sim = simulate_digital(graph, hw, design.mapping);
  r.digital_latency = sim.digital_latency;
  r.unit_cycles = std::move(sim.unit_cycles);
  r.memories = std::move(sim.memories);
  r.stalls = std::move(sim.stalls);
  r.analog_slots = analog_slot_count(graph, hw, design.mapping);

  if (r.digital_latency >= r.frame_time) {
    throw DigitalTooSlowError(r.digital_latency, r.frame_time);
  }
  if (r.analog_slots == 0) return r;
  r.analog_delay = allocate_analog_delay(r.frame_time, r.digital_latency, r.analog_slots);

  const DataflowPlan plan = plan_dataflow(graph, hw, design.mapping);
  const auto ops = analog_array_ops(graph, hw, plan);
  for (std::size_t a = 0; a < hw.analog_arrays.size(); ++a) {
    if (ops[a] == 0) continue;
    const AnalogArraySpec& arr = hw.analog_arrays[a];
    r.analog_stages.push_back(arr.name);
    for (const auto& slot : arr.components) {
      ComponentTiming ct;
      ct.array = arr.name;
      ct.component = slot.component.name;
      ct.access_count = component_access_count(ops[a], slot.num_component);
      ct.access_delay = r.analog_delay / static_cast<double>(ct.access_count);
      ct.cell_delays = allocate_cell_delays(ct.access_delay, slot.component);
      r.components.push_back(std::move(ct));
    }
  }
  return r;
}

}  // namespace cis
