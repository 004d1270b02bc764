#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cismodel/dataflow.hpp"
#include "cismodel/hardware.hpp"

namespace cis {

enum class StallKind { ProducerNotReady, MemoryFull, InsufficientPorts };

std::string_view to_string(StallKind kind);

struct StallCause {
  StallKind kind;
  std::string unit;  // memory (or unit) where the stall shows up
  Count cycle = 0;   // consumer-clock cycle index of the first occurrence
  std::string detail;

  friend bool operator==(const StallCause&, const StallCause&) = default;
};

// Raw observations from the cycle simulation; `detect_stalls` classifies them.
struct TraceEvent {
  enum class Type { WindowUnavailable, Overflow, PortConflict };
  Type type;
  std::size_t memory = 0;
  Count cycle = 0;
  std::string unit;
  Count amount = 0;  // occupancy or transaction count observed
  Count limit = 0;   // capacity or port count exceeded
  std::string detail;

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

struct SimulationTrace {
  std::vector<TraceEvent> events;
  friend bool operator==(const SimulationTrace&, const SimulationTrace&) = default;
};

struct MemoryTraffic {
  std::string name;
  Count reads = 0;   // element reads (stencil window fetches)
  Count writes = 0;  // element writes
  double busy_time = 0.0;      // s, first write to last read
  bool retains_frame = false;  // holds the previous frame (never power-gated)
  Count peak_occupancy = 0;    // elements

  friend bool operator==(const MemoryTraffic&, const MemoryTraffic&) = default;
};

struct DigitalSimulation {
  std::vector<Count> unit_cycles;        // aligned with hw.digital_units
  std::vector<MemoryTraffic> memories;   // aligned with hw.memories
  double digital_latency = 0.0;          // T_D, s
  SimulationTrace trace;
  std::vector<StallCause> stalls;

  friend bool operator==(const DigitalSimulation&, const DigitalSimulation&) = default;
};

// Cycle-level simulation of every digitally mapped stage. Assumes the
// design passed `run_checks`; throws NonDigitalUnit / InvalidArgument on
// structural problems that checks would have reported.
DigitalSimulation simulate_digital(const AlgorithmGraph& graph, const Hardware& hw,
                                   const MappingTable& mapping);

// Classifies raw trace events into the three stall scenarios, first
// occurrence per (memory, kind). MemoryFull is not reported on a memory
// that already cannot hold a single window (ProducerNotReady).
std::vector<StallCause> detect_stalls(const SimulationTrace& trace);

// T_A = (T_FR - T_D) / N. Throws DigitalTooSlowError when T_D >= T_FR.
double allocate_analog_delay(double frame_time, double digital_latency, Count analog_slots);

// Per-cell delays for one component access of duration `component_delay`.
// Pinned cell delays (ACellSpec::delay) are honored and the residual is
// split evenly across the rest. Throws OverCommitted.
std::vector<double> allocate_cell_delays(double component_delay, const AComponentSpec& component);

// Biased time of cell `j`: component delay minus the delays of the cells
// before it on the signal path.
double static_bias_time(double component_delay, const std::vector<double>& cell_delays,
                        std::size_t j);

// Analog pipeline slots on the critical path: the longest chain of busy
// analog arrays, plus one when the first digital consumer needs more than
// one row before it can start.
Count analog_slot_count(const AlgorithmGraph& graph, const Hardware& hw,
                        const MappingTable& mapping);

struct ComponentTiming {
  std::string array;
  std::string component;
  Count access_count = 0;
  double access_delay = 0.0;        // s per access
  std::vector<double> cell_delays;  // s per access, one per cell

  friend bool operator==(const ComponentTiming&, const ComponentTiming&) = default;
};

struct TimingResult {
  double frame_time = 0.0;       // T_FR
  double digital_latency = 0.0;  // T_D
  double analog_delay = 0.0;     // T_A, shared by every analog stage
  Count analog_slots = 0;
  std::vector<std::string> analog_stages;  // busy arrays, each taking T_A
  std::vector<Count> unit_cycles;
  std::vector<ComponentTiming> components;
  std::vector<MemoryTraffic> memories;
  std::vector<StallCause> stalls;

  friend bool operator==(const TimingResult&, const TimingResult&) = default;
};

// Digital simulation, slot count, and delay allocation down to cells.
TimingResult compute_timing(const Design& design, double fps);

}  // namespace cis
