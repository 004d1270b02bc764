#include "doctest.h"

#include <algorithm>

#include "cismodel/error.hpp"
#include "cismodel/ir.hpp"
#include "test_support.hpp"

using namespace cis;
using test::stage;

namespace {

std::vector<Stage> fig3_stages() {
  return {stage("input", StageKind::PixelInput, {32, 32, 1}, {32, 32, 1}),
          stage("bin", StageKind::Stencil, {32, 32, 1}, {16, 16, 1}, {2, 2}, {2, 2}, 4, {"input"}),
          stage("edge", StageKind::Stencil, {16, 16, 1}, {14, 14, 1}, {3, 3}, {1, 1}, 9, {"bin"})};
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const ModelError& e) {
    return e.kind();
  }
  FAIL("expected a ModelError");
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("binned edge pipeline builds a three-stage chain") {
  const AlgorithmGraph g = build_graph(fig3_stages());
  CHECK(g.size() == 3);
  CHECK(g.edge_count() == 2);
  CHECK(topological_order(g) == std::vector<std::string>{"input", "bin", "edge"});
}

TEST_CASE("single pixel input is a valid graph") {
  const AlgorithmGraph g = build_graph({stage("px", StageKind::PixelInput, {4, 4, 1}, {4, 4, 1})});
  CHECK(g.size() == 1);
  CHECK(g.edge_count() == 0);
}

TEST_CASE("duplicate stage names are rejected") {
  auto k = kind_of([] {
    build_graph({stage("s", StageKind::PixelInput, {4, 4, 1}, {4, 4, 1}),
                 stage("s", StageKind::PixelInput, {4, 4, 1}, {4, 4, 1})});
  });
  CHECK(k == ErrorKind::DuplicateStageName);
}

TEST_CASE("unknown predecessor is rejected") {
  auto k = kind_of([] {
    build_graph({stage("b", StageKind::Stencil, {4, 4, 1}, {4, 4, 1}, {1, 1}, {1, 1}, 1, {"a"})});
  });
  CHECK(k == ErrorKind::UnresolvedPredecessor);
}

TEST_CASE("diamond orders ties by declaration") {
  const Dims3 d{8, 8, 1};
  const AlgorithmGraph g = build_graph(
      {stage("A", StageKind::PixelInput, d, d),
       stage("B", StageKind::Stencil, d, d, {1, 1}, {1, 1}, 1, {"A"}),
       stage("C", StageKind::Stencil, d, d, {1, 1}, {1, 1}, 1, {"A"}),
       stage("D", StageKind::ElementwiseBinary, d, d, {1, 1}, {1, 1}, 1, {"B", "C"})});
  CHECK(topological_order(g) == std::vector<std::string>{"A", "B", "C", "D"});
}

TEST_CASE("two-stage cycle reports its members") {
  const Dims3 d{8, 8, 1};
  const AlgorithmGraph g = build_graph({stage("A", StageKind::Stencil, d, d, {1, 1}, {1, 1}, 1, {"B"}),
                                        stage("B", StageKind::Stencil, d, d, {1, 1}, {1, 1}, 1, {"A"})});
  try {
    topological_order(g);
    FAIL("cycle not detected");
  } catch (const ModelError& e) {
    CHECK(e.kind() == ErrorKind::CycleDetected);
    auto names = e.details();
    std::sort(names.begin(), names.end());
    names.erase(std::unique(names.begin(), names.end()), names.end());
    CHECK(names == std::vector<std::string>{"A", "B"});
  }
}

TEST_CASE("stencil op counts") {
  const auto stages = fig3_stages();
  CHECK(stage_op_count(stages[0]) == 0);
  CHECK(stage_op_count(stages[1]) == 1024);
  CHECK(stage_op_count(stages[2]) == 196 * 9);
  const Stage ew =
      stage("diff", StageKind::ElementwiseBinary, {400, 640, 1}, {400, 640, 1}, {1, 1}, {1, 1}, 1, {"x"});
  CHECK(stage_op_count(ew) == 256000);
}

TEST_CASE("bundled gaze DNN sums to 5.76e7 MACs") {
  const Design d = test::load("edgaze/2d_in.design");
  CHECK(stage_op_count(d.graph.stage("gaze_dnn")) == 57'600'000);
}

TEST_CASE("shape rule rejects exactly the inconsistent stencils") {
  for (Count in = 1; in <= 12; ++in)
    for (Count k = 1; k <= 4; ++k)
      for (Count s = 1; s <= 3; ++s)
        for (Count out = 1; out <= 12; ++out) {
          const bool ok = k <= in && (in - k) / s + 1 == out;
          CHECK(stencil_axis_consistent(in, k, s, out) == ok);
          Stage st = stage("s", StageKind::Stencil, {in, in, 1}, {out, out, 1}, {k, k}, {s, s}, 1, {"p"});
          bool accepted = true;
          try {
            validate_stage(st);
          } catch (const ModelError& e) {
            CHECK(e.kind() == ErrorKind::InvalidShape);
            accepted = false;
          }
          CHECK(accepted == ok);
        }
}

TEST_CASE("window geometry in raster order") {
  const Stage edge =
      stage("edge", StageKind::Stencil, {16, 16, 1}, {14, 14, 1}, {3, 3}, {1, 1}, 9, {"bin"});
  CHECK(window_count(edge) == 196);
  CHECK(reads_per_window(edge) == 9);
  CHECK(outputs_per_window(edge) == 1);
  CHECK(window_last_input(edge, 0) == 2 * 16 + 2);
  CHECK(window_last_input(edge, 195) == 255);
  // Element 0 is only used by window 0.
  CHECK(release_position(edge, 0) == window_last_input(edge, 0));

  const Stage bin = stage("bin", StageKind::Stencil, {32, 32, 1}, {16, 16, 1}, {2, 2}, {2, 2}, 4, {"in"});
  CHECK(window_count(bin) == 256);

  const Stage temporal =
      stage("t", StageKind::ElementwiseBinary, {4, 4, 1}, {4, 4, 1}, {1, 1}, {1, 1}, 1, {"p"});
  CHECK(is_temporal(temporal));
  CHECK(release_position(temporal, 3) == -1);
}
