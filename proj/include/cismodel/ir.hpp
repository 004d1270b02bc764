#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace cis {

using Count = std::int64_t;

struct Dims3 {
  Count h = 1;
  Count w = 1;
  Count c = 1;

  Count count() const { return h * w * c; }
  friend bool operator==(const Dims3&, const Dims3&) = default;
};

struct Dims2 {
  Count h = 1;
  Count w = 1;

  Count count() const { return h * w; }
  friend bool operator==(const Dims2&, const Dims2&) = default;
};

std::string to_string(const Dims3& d);

struct StageShape {
  Dims3 input;
  Dims3 output;
  Dims2 kernel;
  Dims2 stride;
};

enum class StageKind { PixelInput, Stencil, ElementwiseBinary, DnnLayerList };

std::string_view to_string(StageKind kind);
StageKind stage_kind_from_string(std::string_view text);

// One DNN layer: output tensor shape and MACs needed per output element.
struct DnnLayer {
  Dims3 output;
  Count macs_per_output = 0;
};

struct Stage {
  std::string name;
  StageKind kind = StageKind::Stencil;
  StageShape shape;
  Count ops_per_window = 1;
  std::vector<std::string> predecessors;
  std::vector<DnnLayer> layers;  // DnnLayerList only
  int bits_per_element = 8;      // used for link traffic and memory sizing
};

// floor((in - k) / s) + 1 == out, per spatial axis.
bool stencil_axis_consistent(Count in, Count kernel, Count stride, Count out);

// Enforces the StageShape and Stage invariants; throws ModelError(InvalidShape).
void validate_stage(const Stage& stage);

// Stages in declaration order with resolved edges. Immutable once built.
class AlgorithmGraph {
 public:
  const std::vector<Stage>& stages() const { return stages_; }
  std::size_t size() const { return stages_.size(); }
  const Stage& stage(std::size_t i) const { return stages_.at(i); }
  const Stage& stage(const std::string& name) const { return stages_.at(index_of(name)); }
  std::size_t index_of(const std::string& name) const;
  bool contains(const std::string& name) const { return index_.count(name) != 0; }

  // Indices of predecessor / successor stages, in declaration order.
  const std::vector<std::size_t>& predecessors(std::size_t i) const { return preds_.at(i); }
  const std::vector<std::size_t>& successors(std::size_t i) const { return succs_.at(i); }
  std::size_t edge_count() const;

 private:
  friend AlgorithmGraph build_graph(std::vector<Stage> stages);

  std::vector<Stage> stages_;
  std::map<std::string, std::size_t> index_;
  std::vector<std::vector<std::size_t>> preds_;
  std::vector<std::vector<std::size_t>> succs_;
};

// Throws DuplicateStageName / UnresolvedPredecessor / InvalidShape.
AlgorithmGraph build_graph(std::vector<Stage> stages);

// Kahn's algorithm with declaration-order tie-breaking. Throws
// CycleDetected whose details list the stage names of one cycle.
std::vector<std::string> topological_order(const AlgorithmGraph& graph);

// out_h * out_w * out_c * ops_per_window; DNN stages sum layer MACs;
// PixelInput contributes 0.
Count stage_op_count(const Stage& stage);

// --- stencil traversal geometry --------------------------------------------
//
// Input tensors are streamed in raster order with channels innermost:
// element index = (y * W + x) * C + c. Every non-DNN stage is treated as a
// stencil over all input channels (elementwise is the 1x1 case). A DNN stage
// is a single window covering its whole input.

bool is_temporal(const Stage& stage);  // ElementwiseBinary with one input

Count window_count(const Stage& stage);
// Output elements produced when one window completes.
Count outputs_per_window(const Stage& stage);
// Input elements fetched per window (the memory read count).
Count reads_per_window(const Stage& stage);
// Index of the last input element (raster order) a window needs.
Count window_last_input(const Stage& stage, Count window);
// Intake position after which input element `e` is no longer needed, i.e.
// the last input of the last window containing it (or `e` itself when no
// window covers it). Temporal stages retain everything: returns -1.
Count release_position(const Stage& stage, Count element);

}  // namespace cis
