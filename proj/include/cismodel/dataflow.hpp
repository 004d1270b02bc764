#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cismodel/hardware.hpp"

namespace cis {

// Where each stage runs and which hardware units its data crosses. Built
// without throwing; unresolved pieces are left empty for `checks` to report.
struct EdgeRoute {
  std::size_t producer = 0;  // stage index
  std::size_t consumer = 0;  // stage index
  // Full hardware path including both endpoint units; a single element when
  // both stages share a unit, empty when no path exists or a unit is missing.
  std::vector<UnitRef> path;
};

struct LinkRoute {
  std::size_t stage = 0;
  std::size_t link = 0;
  std::vector<UnitRef> path;  // stage unit .. link source
};

struct DataflowPlan {
  std::vector<std::optional<UnitRef>> stage_unit;
  std::vector<EdgeRoute> edges;
  std::vector<LinkRoute> link_routes;
  std::vector<std::string> unknown_links;  // "stage:link" pairs that do not resolve

  bool is_digital(std::size_t stage) const;
  bool is_analog(std::size_t stage) const;
};

DataflowPlan plan_dataflow(const AlgorithmGraph& graph, const Hardware& hw,
                           const MappingTable& mapping);

// Shortest producer->consumer path over the hardware `inputs` relation,
// breadth-first in declaration order.
std::optional<std::vector<UnitRef>> find_hardware_path(const Hardware& hw, UnitRef from,
                                                       UnitRef to);

// One input stream of a digitally mapped stage.
struct DigitalInput {
  std::size_t producer_stage = 0;
  bool from_analog = false;             // fed by the analog/ADC boundary
  std::optional<std::size_t> memory;    // mediating memory, if any
};

// Input streams of a digital stage, or an explanation when the route is not
// simulatable (digital pass-through units, chained memories, ...).
struct DigitalInputs {
  std::vector<DigitalInput> inputs;
  std::string problem;
};

DigitalInputs digital_inputs(const DataflowPlan& plan, const Hardware& hw,
                             const AlgorithmGraph& graph, std::size_t stage);

// For every analog array, the stages whose output streams through it
// without being computed there (ADC banks, analog buffers). Each stage
// appears at most once per array.
std::vector<std::vector<std::size_t>> analog_pass_through(const DataflowPlan& plan,
                                                          const Hardware& hw);

// Analog arrays with work this frame: mapped stages or pass-through traffic.
std::vector<bool> used_analog_arrays(const DataflowPlan& plan, const Hardware& hw);

}  // namespace cis
