#include "cismodel/dataflow.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace cis {

bool DataflowPlan::is_digital(std::size_t stage) const {
  return stage_unit.at(stage) && stage_unit[stage]->cls == UnitClass::Digital;
}

bool DataflowPlan::is_analog(std::size_t stage) const {
  return stage_unit.at(stage) && stage_unit[stage]->cls == UnitClass::Analog;
}

namespace {

std::vector<UnitRef> all_units(const Hardware& hw) {
  std::vector<UnitRef> units;
  for (std::size_t i = 0; i < hw.analog_arrays.size(); ++i) units.push_back({UnitClass::Analog, i});
  for (std::size_t i = 0; i < hw.digital_units.size(); ++i) units.push_back({UnitClass::Digital, i});
  for (std::size_t i = 0; i < hw.memories.size(); ++i) units.push_back({UnitClass::Memory, i});
  return units;
}

int unit_key(const Hardware& hw, UnitRef r) {
  switch (r.cls) {
    case UnitClass::Analog: return static_cast<int>(r.index);
    case UnitClass::Digital: return static_cast<int>(hw.analog_arrays.size() + r.index);
    case UnitClass::Memory: break;
  }
  return static_cast<int>(hw.analog_arrays.size() + hw.digital_units.size() + r.index);
}

}  // namespace

std::optional<std::vector<UnitRef>> find_hardware_path(const Hardware& hw, UnitRef from,
                                                       UnitRef to) {
  const auto units = all_units(hw);
  std::vector<std::vector<UnitRef>> succ(units.size());
  for (const auto& u : units) {
    for (const auto& in : hw.unit_inputs(u)) {
      if (auto p = hw.find_unit(in)) succ[unit_key(hw, *p)].push_back(u);
    }
  }
  std::vector<int> parent(units.size(), -2);
  std::deque<UnitRef> queue{from};
  parent[unit_key(hw, from)] = -1;
  while (!queue.empty()) {
    UnitRef cur = queue.front();
    queue.pop_front();
    if (cur == to) break;
    for (const auto& next : succ[unit_key(hw, cur)]) {
      int k = unit_key(hw, next);
      if (parent[k] != -2) continue;
      parent[k] = unit_key(hw, cur);
      queue.push_back(next);
    }
  }
  if (parent[unit_key(hw, to)] == -2) return std::nullopt;
  std::vector<UnitRef> path;
  for (int k = unit_key(hw, to); k != -1; k = parent[k]) path.push_back(units[k]);
  std::reverse(path.begin(), path.end());
  return path;
}

DataflowPlan plan_dataflow(const AlgorithmGraph& graph, const Hardware& hw,
                           const MappingTable& mapping) {
  DataflowPlan plan;
  plan.stage_unit.resize(graph.size());
  for (std::size_t i = 0; i < graph.size(); ++i) {
    auto it = mapping.stage_to_unit.find(graph.stage(i).name);
    if (it != mapping.stage_to_unit.end()) plan.stage_unit[i] = hw.find_unit(it->second);
  }

  for (std::size_t c = 0; c < graph.size(); ++c) {
    for (std::size_t p : graph.predecessors(c)) {
      EdgeRoute route{p, c, {}};
      const auto& from = plan.stage_unit[p];
      const auto& to = plan.stage_unit[c];
      if (from && to) {
        if (*from == *to) {
          route.path = {*from};
        } else if (auto path = find_hardware_path(hw, *from, *to)) {
          route.path = std::move(*path);
        }
      }
      plan.edges.push_back(std::move(route));
    }
  }

  for (const auto& [stage_name, links] : mapping.stage_links) {
    if (!graph.contains(stage_name)) continue;
    const std::size_t s = graph.index_of(stage_name);
    for (const auto& link_name : links) {
      auto link = hw.find_link(link_name);
      if (!link) {
        plan.unknown_links.push_back(stage_name + ":" + link_name);
        continue;
      }
      LinkRoute route{s, *link, {}};
      auto source = hw.find_unit(hw.links[*link].source);
      if (plan.stage_unit[s] && source) {
        if (*plan.stage_unit[s] == *source) {
          route.path = {*source};
        } else if (auto path = find_hardware_path(hw, *plan.stage_unit[s], *source)) {
          route.path = std::move(*path);
        }
      }
      plan.link_routes.push_back(std::move(route));
    }
  }
  return plan;
}

DigitalInputs digital_inputs(const DataflowPlan& plan, const Hardware& hw,
                             const AlgorithmGraph& graph, std::size_t stage) {
  DigitalInputs result;
  for (const auto& edge : plan.edges) {
    if (edge.consumer != stage) continue;
    if (edge.path.empty()) {
      result.problem = "no hardware path from '" + graph.stage(edge.producer).name + "'";
      return result;
    }
    DigitalInput in;
    in.producer_stage = edge.producer;
    const UnitRef producer_unit = edge.path.front();
    in.from_analog = producer_unit.cls == UnitClass::Analog;
    if (edge.path.size() == 1) {
      result.problem = "stage shares a digital unit with its producer '" +
                       graph.stage(edge.producer).name + "'; route it through a memory";
      return result;
    }
    // Interior hops: analog arrays may only precede the digital boundary.
    bool seen_digital = !in.from_analog;
    for (std::size_t h = 1; h + 1 < edge.path.size(); ++h) {
      const UnitRef hop = edge.path[h];
      switch (hop.cls) {
        case UnitClass::Analog:
          if (seen_digital) {
            result.problem = "data re-enters analog unit '" + hw.unit_name(hop) + "'";
            return result;
          }
          break;
        case UnitClass::Memory:
          seen_digital = true;
          if (in.memory) {
            result.problem = "more than one memory between '" +
                             graph.stage(edge.producer).name + "' and '" +
                             graph.stage(stage).name + "'";
            return result;
          }
          in.memory = hop.index;
          break;
        case UnitClass::Digital:
          result.problem = "data passes through digital unit '" + hw.unit_name(hop) +
                           "' without a stage mapped to it";
          return result;
      }
    }
    if (producer_unit.cls == UnitClass::Memory) {
      result.problem = "stage '" + graph.stage(edge.producer).name + "' is mapped to a memory";
      return result;
    }
    result.inputs.push_back(in);
  }
  return result;
}

std::vector<std::vector<std::size_t>> analog_pass_through(const DataflowPlan& plan,
                                                          const Hardware& hw) {
  std::vector<std::set<std::size_t>> sets(hw.analog_arrays.size());
  auto visit = [&](std::size_t stage, const std::vector<UnitRef>& path, bool include_last) {
    if (path.size() < 2) return;
    const std::size_t end = include_last ? path.size() : path.size() - 1;
    for (std::size_t h = 1; h < end; ++h) {
      if (path[h].cls == UnitClass::Analog) sets[path[h].index].insert(stage);
    }
  };
  for (const auto& e : plan.edges) visit(e.producer, e.path, false);
  for (const auto& l : plan.link_routes) visit(l.stage, l.path, true);
  std::vector<std::vector<std::size_t>> out(sets.size());
  for (std::size_t a = 0; a < sets.size(); ++a) out[a].assign(sets[a].begin(), sets[a].end());
  return out;
}

std::vector<bool> used_analog_arrays(const DataflowPlan& plan, const Hardware& hw) {
  std::vector<bool> used(hw.analog_arrays.size(), false);
  for (const auto& u : plan.stage_unit) {
    if (u && u->cls == UnitClass::Analog) used[u->index] = true;
  }
  const auto pass = analog_pass_through(plan, hw);
  for (std::size_t a = 0; a < pass.size(); ++a) {
    if (!pass[a].empty()) used[a] = true;
  }
  return used;
}

}  // namespace cis
