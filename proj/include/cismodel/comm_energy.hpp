#pragma once

#include <string>
#include <vector>

#include "cismodel/hardware.hpp"

namespace cis {

struct LinkEnergy {
  std::string name;
  LinkKind kind = LinkKind::Mipi;
  Count bytes = 0;
  double energy_per_byte = 0.0;
  double energy = 0.0;

  friend bool operator==(const LinkEnergy&, const LinkEnergy&) = default;
};

struct CommEnergyBreakdown {
  std::vector<LinkEnergy> links;
  Count mipi_bytes = 0;
  Count tsv_bytes = 0;
  double mipi_energy = 0.0;
  double tsv_energy = 0.0;
  double total = 0.0;

  friend bool operator==(const CommEnergyBreakdown&, const CommEnergyBreakdown&) = default;
};

// Bytes per frame on each declared link: output bytes of every stage
// assigned to it in the mapping.
std::vector<Count> link_traffic(const AlgorithmGraph& graph, const Hardware& hw,
                                const MappingTable& mapping);

// `bytes` is aligned with `links`.
CommEnergyBreakdown comm_frame_energy(const std::vector<LinkSpec>& links,
                                      const std::vector<Count>& bytes);

}  // namespace cis
