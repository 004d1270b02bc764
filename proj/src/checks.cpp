#include "cismodel/checks.hpp"

#include <set>
#include <utility>

#include "cismodel/error.hpp"

namespace cis {

void CheckReport::merge(const CheckReport& other) {
  violations.insert(violations.end(), other.violations.begin(), other.violations.end());
  notes.insert(notes.end(), other.notes.begin(), other.notes.end());
}

CheckReport check_graph(const AlgorithmGraph& graph) {
  CheckReport report;
  try {
    topological_order(graph);
  } catch (const ModelError& e) {
    std::string cycle;
    for (const auto& n : e.details()) cycle += (cycle.empty() ? "" : " -> ") + n;
    const auto& d = e.details();
    report.violations.push_back({"Cycle", d.empty() ? "" : d.front(), d.empty() ? "" : d.back(),
                                 "algorithm graph has a cycle: " + cycle,
                                 "remove one of the edges in the cycle"});
  }
  for (std::size_t c = 0; c < graph.size(); ++c) {
    const Stage& consumer = graph.stage(c);
    for (std::size_t p : graph.predecessors(c)) {
      const Stage& producer = graph.stage(p);
      if (!(producer.shape.output == consumer.shape.input)) {
        report.violations.push_back(
            {"ShapeMismatch", producer.name, consumer.name,
             "'" + producer.name + "' produces " + to_string(producer.shape.output) + " but '" +
                 consumer.name + "' expects " + to_string(consumer.shape.input),
             "make input_size of '" + consumer.name + "' equal output_size of '" +
                 producer.name + "'"});
      }
    }
  }
  return report;
}

namespace {

std::vector<std::pair<UnitRef, UnitRef>> route_hops(const DataflowPlan& plan) {
  std::vector<std::pair<UnitRef, UnitRef>> hops;
  auto add = [&](const std::vector<UnitRef>& path) {
    for (std::size_t h = 0; h + 1 < path.size(); ++h) {
      std::pair<UnitRef, UnitRef> hop{path[h], path[h + 1]};
      bool dup = false;
      for (const auto& x : hops) dup = dup || x == hop;
      if (!dup) hops.push_back(hop);
    }
  };
  for (const auto& e : plan.edges) add(e.path);
  for (const auto& l : plan.link_routes) add(l.path);
  return hops;
}

}  // namespace

CheckReport check_mapping(const AlgorithmGraph& graph, const Hardware& hw,
                          const MappingTable& mapping) {
  CheckReport report;
  for (const auto& [stage, unit] : mapping.stage_to_unit) {
    if (!graph.contains(stage))
      report.violations.push_back({"UnknownStage", stage, unit,
                                   "mapping names stage '" + stage + "' which does not exist",
                                   "remove the mapping entry or declare the stage"});
  }
  for (const auto& stage : graph.stages()) {
    auto it = mapping.stage_to_unit.find(stage.name);
    if (it == mapping.stage_to_unit.end()) {
      report.violations.push_back({"UnmappedStage", stage.name, "",
                                   "stage '" + stage.name + "' is not mapped to hardware",
                                   "add a mapping entry for '" + stage.name + "'"});
      continue;
    }
    auto unit = hw.find_unit(it->second);
    if (!unit) {
      report.violations.push_back({"UnknownUnit", stage.name, it->second,
                                   "stage '" + stage.name + "' maps to unknown unit '" +
                                       it->second + "'",
                                   "declare '" + it->second + "' in the hardware section"});
      continue;
    }
    if (unit->cls == UnitClass::Memory) {
      report.violations.push_back({"MappedToMemory", stage.name, it->second,
                                   "stage '" + stage.name + "' maps to memory '" + it->second +
                                       "', which cannot compute",
                                   "map it to an analog array or a digital unit"});
      continue;
    }
    if (stage.kind == StageKind::PixelInput &&
        !(unit->cls == UnitClass::Analog && hw.is_pixel_array(unit->index))) {
      report.violations.push_back({"PixelInputNotOnPixelArray", stage.name, it->second,
                                   "PixelInput stage '" + stage.name +
                                       "' must map to an analog array containing pixels",
                                   "map it to the pixel array"});
    }
  }

  const DataflowPlan plan = plan_dataflow(graph, hw, mapping);
  for (const auto& bad : plan.unknown_links) {
    const auto colon = bad.find(':');
    report.violations.push_back({"UnknownLink", bad.substr(0, colon), bad.substr(colon + 1),
                                 "link '" + bad.substr(colon + 1) + "' is not declared",
                                 "declare the link in the hardware section"});
  }
  for (const auto& route : plan.link_routes) {
    const Stage& s = graph.stage(route.stage);
    const LinkSpec& link = hw.links[route.link];
    if (!plan.stage_unit[route.stage]) continue;
    if (!hw.find_unit(link.source)) {
      report.violations.push_back({"UnknownUnit", link.name, link.source,
                                   "link '" + link.name + "' is driven by unknown unit '" +
                                       link.source + "'",
                                   "set the link source to a declared unit"});
      continue;
    }
    if (route.path.empty()) {
      report.violations.push_back({"NoLinkPath", s.name, link.name,
                                   "no hardware path from the unit of '" + s.name +
                                       "' to the source of link '" + link.name + "'",
                                   "connect '" + link.source + "' downstream of the stage's unit"});
      continue;
    }
    for (std::size_t h = 1; h < route.path.size(); ++h) {
      if (route.path[h].cls != UnitClass::Analog) {
        report.violations.push_back({"UnsupportedLinkPath", s.name, link.name,
                                     "output of '" + s.name + "' reaches link '" + link.name +
                                         "' through non-analog unit '" +
                                         hw.unit_name(route.path[h]) + "'",
                                     "drive the link from the stage's own unit or its ADC"});
        break;
      }
    }
  }

  for (const auto& edge : plan.edges) {
    const Stage& p = graph.stage(edge.producer);
    const Stage& c = graph.stage(edge.consumer);
    if (!plan.stage_unit[edge.producer] || !plan.stage_unit[edge.consumer]) continue;
    if (edge.path.empty()) {
      report.violations.push_back(
          {"NoHardwarePath", p.name, c.name,
           "no hardware path from '" + hw.unit_name(*plan.stage_unit[edge.producer]) + "' to '" +
               hw.unit_name(*plan.stage_unit[edge.consumer]) + "'",
           "list the producing unit in the consumer's inputs"});
      continue;
    }
    if (plan.is_analog(edge.consumer)) {
      for (const auto& hop : edge.path) {
        if (hop.cls != UnitClass::Analog) {
          report.violations.push_back({"DigitalToAnalog", p.name, c.name,
                                       "analog stage '" + c.name + "' reads data that passed "
                                           "through digital unit '" + hw.unit_name(hop) + "'",
                                       "map '" + c.name + "' to a digital unit"});
          break;
        }
      }
    }
  }

  for (std::size_t s = 0; s < graph.size(); ++s) {
    if (!plan.is_digital(s)) continue;
    bool all_mapped = true;
    for (std::size_t p : graph.predecessors(s)) all_mapped = all_mapped && plan.stage_unit[p];
    if (!all_mapped) continue;
    bool any_missing_path = false;
    for (const auto& e : plan.edges)
      if (e.consumer == s && e.path.empty()) any_missing_path = true;
    if (any_missing_path) continue;
    const DigitalInputs in = digital_inputs(plan, hw, graph, s);
    if (!in.problem.empty()) {
      report.violations.push_back({"UnsupportedDigitalRoute", "", graph.stage(s).name,
                                   in.problem, "route each input through at most one memory"});
      continue;
    }
    if (is_temporal(graph.stage(s)) && !in.inputs.empty() && !in.inputs.front().memory) {
      report.violations.push_back({"TemporalNeedsMemory", "", graph.stage(s).name,
                                   "'" + graph.stage(s).name +
                                       "' compares against the previous frame but has no memory "
                                       "on its input",
                                   "insert a frame buffer before '" +
                                       hw.unit_name(*plan.stage_unit[s]) + "'"});
    }
  }
  return report;
}

CheckReport check_domain_compatibility(const Hardware& hw, const MappingTable& mapping,
                                       const AlgorithmGraph& graph) {
  CheckReport report;
  // Component chains inside each array.
  for (const auto& arr : hw.analog_arrays) {
    if (arr.components.empty()) continue;
    DomainSet prev = arr.input_domain;
    std::string prev_name = arr.name + " input";
    for (const auto& slot : arr.components) {
      if (!prev.overlaps(slot.component.input_domain)) {
        report.violations.push_back(
            {"ArrayDomainChain", prev_name, slot.component.name,
             "inside '" + arr.name + "': " + prev.to_string() + " feeds '" +
                 slot.component.name + "' expecting " + slot.component.input_domain.to_string(),
             "reorder the components or fix their declared domains"});
      }
      prev = slot.component.output_domain;
      prev_name = slot.component.name;
    }
    if (!prev.overlaps(arr.output_domain)) {
      report.violations.push_back({"ArrayDomainChain", prev_name, arr.name + " output",
                                   "inside '" + arr.name + "': last component emits " +
                                       prev.to_string() + " but the array declares " +
                                       arr.output_domain.to_string(),
                                   "fix the array's output_domain"});
    }
  }

  const DataflowPlan plan = plan_dataflow(graph, hw, mapping);
  for (const auto& [a, b] : route_hops(plan)) {
    if (a.cls != UnitClass::Analog) continue;
    const AnalogArraySpec& producer = hw.analog_arrays[a.index];
    if (b.cls != UnitClass::Analog) {
      if (!producer.output_domain.contains(SignalDomain::Digital)) {
        report.violations.push_back(
            {"MissingADC", producer.name, hw.unit_name(b),
             "analog '" + producer.name + "' (" + producer.output_domain.to_string() +
                 ") feeds digital '" + hw.unit_name(b) + "' with no ADC in between",
             "insert an ADC array between '" + producer.name + "' and '" + hw.unit_name(b) + "'"});
      }
      continue;
    }
    const AnalogArraySpec& consumer = hw.analog_arrays[b.index];
    const DomainSet& out = producer.output_domain;
    const DomainSet& in = consumer.input_domain;
    if (out.overlaps(in)) {
      if (out.is_pair() || in.is_pair()) {
        report.notes.push_back("'" + producer.name + "' (" + out.to_string() + ") -> '" +
                               consumer.name + "' (" + in.to_string() +
                               ") matched on a pair domain; verify the interface");
      }
      continue;
    }
    if (out.contains(SignalDomain::Charge) && consumer.output_domain.contains(SignalDomain::Voltage)) {
      report.notes.push_back("'" + producer.name + "' charge output buffered by the input "
                             "capacitance of '" + consumer.name + "' (voltage output)");
      continue;
    }
    report.violations.push_back(
        {"DomainMismatch", producer.name, consumer.name,
         "'" + producer.name + "' outputs " + out.to_string() + " but '" + consumer.name +
             "' expects " + in.to_string(),
         "insert a " + out.to_string() + "-to-" + in.to_string() + " conversion component"});
  }
  return report;
}

CheckReport check_dimension_compatibility(const Hardware& hw, const MappingTable& mapping,
                                          const AlgorithmGraph& graph) {
  CheckReport report;
  const DataflowPlan plan = plan_dataflow(graph, hw, mapping);
  auto buffers = [](const AnalogArraySpec& arr, bool front) {
    if (arr.components.empty()) return false;
    const auto& slot = front ? arr.components.front() : arr.components.back();
    return is_analog_memory(slot.component.kind);
  };
  for (const auto& [a, b] : route_hops(plan)) {
    if (a.cls != UnitClass::Analog || b.cls != UnitClass::Analog) continue;
    const auto& producer = hw.analog_arrays[a.index];
    const auto& consumer = hw.analog_arrays[b.index];
    if (producer.num_output == consumer.num_input) continue;
    if (buffers(producer, false) || buffers(consumer, true)) continue;
    report.violations.push_back(
        {"DimensionMismatch", producer.name, consumer.name,
         "'" + producer.name + "' emits " + to_string(producer.num_output) + " per step but '" +
             consumer.name + "' accepts " + to_string(consumer.num_input),
         "insert a sample-and-hold (analog buffer) between '" + producer.name + "' and '" +
             consumer.name + "'"});
  }
  return report;
}

CheckReport run_checks(const Design& design) {
  CheckReport report = check_graph(design.graph);
  report.merge(check_mapping(design.graph, design.hardware, design.mapping));
  report.merge(check_domain_compatibility(design.hardware, design.mapping, design.graph));
  report.merge(check_dimension_compatibility(design.hardware, design.mapping, design.graph));
  return report;
}

}  // namespace cis
