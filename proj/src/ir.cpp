#include "cismodel/ir.hpp"

#include <algorithm>
#include <set>

#include "cismodel/error.hpp"

namespace cis {

std::string to_string(const Dims3& d) {
  return std::to_string(d.h) + "x" + std::to_string(d.w) + "x" + std::to_string(d.c);
}

std::string_view to_string(StageKind kind) {
  switch (kind) {
    case StageKind::PixelInput: return "PixelInput";
    case StageKind::Stencil: return "Stencil";
    case StageKind::ElementwiseBinary: return "ElementwiseBinary";
    case StageKind::DnnLayerList: return "DNNLayerList";
  }
  return "";
}

StageKind stage_kind_from_string(std::string_view text) {
  if (text == "PixelInput") return StageKind::PixelInput;
  if (text == "Stencil") return StageKind::Stencil;
  if (text == "ElementwiseBinary") return StageKind::ElementwiseBinary;
  if (text == "DNNLayerList" || text == "DnnLayerList") return StageKind::DnnLayerList;
  throw ModelError(ErrorKind::SchemaError, "unknown stage kind '" + std::string(text) + "'");
}

bool stencil_axis_consistent(Count in, Count kernel, Count stride, Count out) {
  if (in < 1 || kernel < 1 || stride < 1 || out < 1 || kernel > in) return false;
  return (in - kernel) / stride + 1 == out;
}

namespace {

[[noreturn]] void bad_shape(const Stage& stage, const std::string& why) {
  throw ModelError(ErrorKind::InvalidShape, "stage '" + stage.name + "': " + why);
}

bool positive(const Dims3& d) { return d.h >= 1 && d.w >= 1 && d.c >= 1; }

}  // namespace

void validate_stage(const Stage& stage) {
  const StageShape& s = stage.shape;
  if (stage.name.empty()) bad_shape(stage, "empty name");
  if (!positive(s.input) || !positive(s.output)) bad_shape(stage, "dimensions must be >= 1");
  if (s.kernel.h < 1 || s.kernel.w < 1 || s.stride.h < 1 || s.stride.w < 1)
    bad_shape(stage, "kernel and stride must be >= 1");
  if (stage.bits_per_element < 1) bad_shape(stage, "bits_per_element must be >= 1");

  switch (stage.kind) {
    case StageKind::PixelInput:
      if (!stage.predecessors.empty()) bad_shape(stage, "PixelInput takes no inputs");
      if (!(s.input == s.output)) bad_shape(stage, "PixelInput input and output must match");
      return;
    case StageKind::ElementwiseBinary:
      if (stage.predecessors.empty() || stage.predecessors.size() > 2)
        bad_shape(stage, "ElementwiseBinary takes one (temporal) or two inputs");
      if (s.kernel != Dims2{1, 1} || s.stride != Dims2{1, 1})
        bad_shape(stage, "elementwise stages use a 1x1 kernel and stride");
      if (s.input.h != s.output.h || s.input.w != s.output.w)
        bad_shape(stage, "elementwise output must match input spatially");
      break;
    case StageKind::Stencil:
      if (stage.predecessors.empty()) bad_shape(stage, "non-input stage needs a predecessor");
      if (!stencil_axis_consistent(s.input.h, s.kernel.h, s.stride.h, s.output.h) ||
          !stencil_axis_consistent(s.input.w, s.kernel.w, s.stride.w, s.output.w))
        bad_shape(stage, "output " + to_string(s.output) + " inconsistent with input " +
                             to_string(s.input) + " under kernel " + std::to_string(s.kernel.h) +
                             "x" + std::to_string(s.kernel.w) + " stride " +
                             std::to_string(s.stride.h) + "x" + std::to_string(s.stride.w));
      break;
    case StageKind::DnnLayerList:
      if (stage.predecessors.empty()) bad_shape(stage, "non-input stage needs a predecessor");
      if (stage.layers.empty()) bad_shape(stage, "DNN stage needs at least one layer");
      for (const auto& layer : stage.layers) {
        if (!positive(layer.output) || layer.macs_per_output < 1)
          bad_shape(stage, "DNN layers need positive shapes and MAC counts");
      }
      if (!(stage.layers.back().output == s.output))
        bad_shape(stage, "output_size must equal the last layer's output");
      break;
  }
  if (stage.ops_per_window < 0) bad_shape(stage, "ops_per_window must be >= 0");
}

std::size_t AlgorithmGraph::index_of(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end())
    throw ModelError(ErrorKind::UnresolvedPredecessor, "no stage named '" + name + "'");
  return it->second;
}

std::size_t AlgorithmGraph::edge_count() const {
  std::size_t n = 0;
  for (const auto& p : preds_) n += p.size();
  return n;
}

AlgorithmGraph build_graph(std::vector<Stage> stages) {
  AlgorithmGraph g;
  for (std::size_t i = 0; i < stages.size(); ++i) {
    if (!g.index_.emplace(stages[i].name, i).second)
      throw ModelError(ErrorKind::DuplicateStageName,
                       "stage name '" + stages[i].name + "' declared twice", {stages[i].name});
  }
  for (const auto& s : stages) validate_stage(s);

  g.preds_.resize(stages.size());
  g.succs_.resize(stages.size());
  for (std::size_t i = 0; i < stages.size(); ++i) {
    for (const auto& p : stages[i].predecessors) {
      auto it = g.index_.find(p);
      if (it == g.index_.end())
        throw ModelError(ErrorKind::UnresolvedPredecessor,
                         "stage '" + stages[i].name + "' reads from unknown stage '" + p + "'",
                         {stages[i].name, p});
      g.preds_[i].push_back(it->second);
    }
  }
  for (std::size_t i = 0; i < stages.size(); ++i) {
    for (std::size_t p : g.preds_[i]) g.succs_[p].push_back(i);
  }
  for (auto& s : g.succs_) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
  }
  g.stages_ = std::move(stages);
  return g;
}

namespace {

// Walks predecessor links from a node left over by Kahn's algorithm until a
// node repeats; the repeated suffix is a cycle.
std::vector<std::string> find_cycle(const AlgorithmGraph& g, const std::vector<int>& indegree) {
  std::size_t start = 0;
  while (start < g.size() && indegree[start] == 0) ++start;
  std::vector<std::size_t> path;
  std::vector<int> seen_at(g.size(), -1);
  std::size_t cur = start;
  while (seen_at[cur] < 0) {
    seen_at[cur] = static_cast<int>(path.size());
    path.push_back(cur);
    for (std::size_t p : g.predecessors(cur)) {
      if (indegree[p] > 0) {
        cur = p;
        break;
      }
    }
  }
  std::vector<std::size_t> cycle(path.begin() + seen_at[cur], path.end());
  std::reverse(cycle.begin(), cycle.end());
  // Rotate so the earliest-declared stage leads.
  auto first = std::min_element(cycle.begin(), cycle.end());
  std::rotate(cycle.begin(), first, cycle.end());
  std::vector<std::string> names;
  for (std::size_t i : cycle) names.push_back(g.stage(i).name);
  return names;
}

}  // namespace

std::vector<std::string> topological_order(const AlgorithmGraph& graph) {
  const std::size_t n = graph.size();
  std::vector<int> indegree(n, 0);
  for (std::size_t i = 0; i < n; ++i) indegree[i] = static_cast<int>(graph.predecessors(i).size());

  std::set<std::size_t> ready;
  for (std::size_t i = 0; i < n; ++i)
    if (indegree[i] == 0) ready.insert(i);

  std::vector<std::string> order;
  order.reserve(n);
  while (!ready.empty()) {
    std::size_t i = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(graph.stage(i).name);
    for (std::size_t s : graph.successors(i)) {
      // Duplicate predecessor entries count once per declaration.
      for (std::size_t p : graph.predecessors(s))
        if (p == i) --indegree[s];
      if (indegree[s] == 0) ready.insert(s);
    }
  }
  if (order.size() != n) {
    auto cycle = find_cycle(graph, indegree);
    std::string joined;
    for (const auto& name : cycle) joined += (joined.empty() ? "" : " -> ") + name;
    throw ModelError(ErrorKind::CycleDetected, "cycle through " + joined, cycle);
  }
  return order;
}

Count stage_op_count(const Stage& stage) {
  switch (stage.kind) {
    case StageKind::PixelInput:
      return 0;
    case StageKind::DnnLayerList: {
      Count macs = 0;
      for (const auto& layer : stage.layers) macs += layer.output.count() * layer.macs_per_output;
      return macs;
    }
    case StageKind::Stencil:
    case StageKind::ElementwiseBinary:
      return stage.shape.output.count() * stage.ops_per_window;
  }
  return 0;
}

bool is_temporal(const Stage& stage) {
  return stage.kind == StageKind::ElementwiseBinary && stage.predecessors.size() == 1;
}

Count window_count(const Stage& stage) {
  if (stage.kind == StageKind::DnnLayerList) return 1;
  return stage.shape.output.h * stage.shape.output.w;
}

Count outputs_per_window(const Stage& stage) {
  if (stage.kind == StageKind::DnnLayerList) return stage.shape.output.count();
  return stage.shape.output.c;
}

Count reads_per_window(const Stage& stage) {
  const StageShape& s = stage.shape;
  if (stage.kind == StageKind::DnnLayerList) return s.input.count();
  // A temporal stage also fetches the retained previous-frame operand.
  const Count operands = is_temporal(stage) ? 2 : 1;
  return operands * s.kernel.h * s.kernel.w * s.input.c;
}

Count window_last_input(const Stage& stage, Count window) {
  const StageShape& s = stage.shape;
  if (stage.kind == StageKind::DnnLayerList) return s.input.count() - 1;
  const Count oy = window / s.output.w;
  const Count ox = window % s.output.w;
  const Count y = oy * s.stride.h + s.kernel.h - 1;
  const Count x = ox * s.stride.w + s.kernel.w - 1;
  return (y * s.input.w + x) * s.input.c + (s.input.c - 1);
}

namespace {

// Largest output coordinate whose window covers input coordinate `v`, or -1.
Count last_covering(Count v, Count kernel, Count stride, Count out) {
  Count o = std::min(v / stride, out - 1);
  if (o * stride + kernel - 1 < v) return -1;
  return o;
}

}  // namespace

Count release_position(const Stage& stage, Count element) {
  const StageShape& s = stage.shape;
  if (is_temporal(stage)) return -1;
  if (stage.kind == StageKind::DnnLayerList) return s.input.count() - 1;
  const Count pixel = element / s.input.c;
  const Count y = pixel / s.input.w;
  const Count x = pixel % s.input.w;
  const Count oy = last_covering(y, s.kernel.h, s.stride.h, s.output.h);
  const Count ox = last_covering(x, s.kernel.w, s.stride.w, s.output.w);
  if (oy < 0 || ox < 0) return element;
  return window_last_input(stage, oy * s.output.w + ox);
}

}  // namespace cis
