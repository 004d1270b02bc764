#pragma once

#include <string>
#include <vector>

#include "cismodel/dataflow.hpp"
#include "cismodel/hardware.hpp"

namespace cis {

struct Violation {
  std::string rule;
  std::string producer;
  std::string consumer;
  std::string message;
  std::string suggested_fix;

  friend bool operator==(const Violation&, const Violation&) = default;
};

// Accumulated check results. `notes` are informational and do not fail the
// report (e.g. a pair domain matched on one member).
struct CheckReport {
  std::vector<Violation> violations;
  std::vector<std::string> notes;

  bool passed() const { return violations.empty(); }
  void merge(const CheckReport& other);
  friend bool operator==(const CheckReport&, const CheckReport&) = default;
};

CheckReport check_mapping(const AlgorithmGraph& graph, const Hardware& hw,
                          const MappingTable& mapping);
CheckReport check_domain_compatibility(const Hardware& hw, const MappingTable& mapping,
                                       const AlgorithmGraph& graph);
CheckReport check_dimension_compatibility(const Hardware& hw, const MappingTable& mapping,
                                          const AlgorithmGraph& graph);
// DAG acyclicity plus stage-to-stage shape agreement.
CheckReport check_graph(const AlgorithmGraph& graph);

// All of the above, in a fixed order.
CheckReport run_checks(const Design& design);

}  // namespace cis
