#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cismodel/hardware.hpp"

namespace cis {

struct OracleEvent {
  enum class Type { Intake, Emit };
  std::int64_t tick = 0;
  std::string unit;
  std::string stage;
  Type type = Type::Intake;
  Count elements = 0;

  friend bool operator==(const OracleEvent&, const OracleEvent&) = default;
};

// Reference counts obtained by enumeration and per-element replay.
struct OracleTrace {
  std::vector<Count> stage_ops;      // declaration order
  std::vector<Count> stage_windows;  // declaration order
  std::vector<Count> array_ops;
  std::vector<std::vector<Count>> component_accesses;  // [array][slot], busiest instance
  std::vector<Count> memory_reads;
  std::vector<Count> memory_writes;
  std::vector<Count> unit_cycles;
  double digital_latency = 0.0;
  std::vector<OracleEvent> events;
};

inline constexpr Count kOracleElementLimit = Count{1} << 16;

// Throws TooLarge when the stage outputs sum past kOracleElementLimit, and
// InvalidArgument for layouts the replay does not model (several readers
// of one sensor-fed memory).
OracleTrace brute_force_counts(const AlgorithmGraph& graph, const Hardware& hw,
                               const MappingTable& mapping);

}  // namespace cis

namespace cis {

struct Design;

// Compares the analytical counts (ops, component accesses, memory traffic,
// unit cycles) against brute_force_counts; returns one line per mismatch.
std::vector<std::string> cross_check(const Design& design);

}  // namespace cis
