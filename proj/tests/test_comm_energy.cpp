#include "doctest.h"

#include "cismodel/comm_energy.hpp"
#include "test_support.hpp"

using namespace cis;

namespace {

LinkSpec link(std::string name, LinkKind kind, double e) {
  LinkSpec l;
  l.name = std::move(name);
  l.kind = kind;
  l.energy_per_byte = e;
  return l;
}

}  // namespace

TEST_CASE("full 1080p frame over MIPI and micro-TSV") {
  const auto mipi = comm_frame_energy({link("mipi", LinkKind::Mipi, kDefaultMipiEnergyPerByte)}, {6'000'000});
  const auto tsv = comm_frame_energy({link("tsv", LinkKind::Utsv, kDefaultUtsvEnergyPerByte)}, {6'000'000});
  CHECK(mipi.mipi_bytes == 6'000'000);
  CHECK(test::within_ulps(mipi.total, 0.6e-3, 1));
  CHECK(format_energy(mipi.total) == "0.60 mJ");
  CHECK(tsv.total == 6e-6);
  CHECK(mipi.total / tsv.total == 100.0);
}

TEST_CASE("half-frame ROI halves MIPI energy") {
  const std::vector<LinkSpec> l = {link("mipi", LinkKind::Mipi, 100e-12)};
  CHECK(comm_frame_energy(l, {460'800}).total * 2 == comm_frame_energy(l, {921'600}).total);
}

TEST_CASE("energy is linear in bytes and split by link kind") {
  const std::vector<LinkSpec> l = {link("mipi", LinkKind::Mipi, 100e-12),
                                   link("tsv", LinkKind::Utsv, 1e-12)};
  const auto e = comm_frame_energy(l, {10, 1000});
  CHECK(e.mipi_energy == 1e-9);
  CHECK(e.tsv_energy == 1e-9);
  CHECK(e.total == e.mipi_energy + e.tsv_energy);
  CHECK(e.tsv_bytes == 1000);
  CHECK(comm_frame_energy(l, {0, 0}).total == 0.0);
  CHECK_THROWS(comm_frame_energy(l, {1}));
}

TEST_CASE("link traffic uses the crossing stage's bit depth") {
  const Design d = test::load("fig3_binning.design");
  CHECK(link_traffic(d.graph, d.hardware, d.mapping) == std::vector<Count>{196});
  nlohmann::json j = test::read_json("fig3_binning.design");
  j["software"]["stages"][2]["bits"] = 10;
  const Design d10 = test::from_json(j);
  CHECK(link_traffic(d10.graph, d10.hardware, d10.mapping) == std::vector<Count>{245});
}

TEST_CASE("a smaller crossing tensor never costs more") {
  nlohmann::json j = test::read_json("fig3_binning.design");
  const Design late = test::from_json(j);
  j["mapping"]["links"] = {{"binning", "mipi"}};
  j["hardware"]["links"][0]["source"] = "adc_array";
  const Design early = test::from_json(j);
  // The binned map (256 B) is bigger than the edge map (196 B).
  CHECK(link_traffic(early.graph, early.hardware, early.mapping)[0] >
        link_traffic(late.graph, late.hardware, late.mapping)[0]);
}
