#include "cismodel/comm_energy.hpp"

#include "cismodel/error.hpp"

namespace cis {

std::vector<Count> link_traffic(const AlgorithmGraph& graph, const Hardware& hw,
                                const MappingTable& mapping) {
  std::vector<Count> bytes(hw.links.size(), 0);
  for (const auto& [stage, links] : mapping.stage_links) {
    if (!graph.contains(stage)) continue;
    const Stage& s = graph.stage(stage);
    const Count bits = s.shape.output.count() * s.bits_per_element;
    for (const auto& l : links) {
      if (auto li = hw.find_link(l)) bytes[*li] += (bits + 7) / 8;
    }
  }
  return bytes;
}

CommEnergyBreakdown comm_frame_energy(const std::vector<LinkSpec>& links,
                                      const std::vector<Count>& bytes) {
  if (bytes.size() != links.size()) {
    throw ModelError(ErrorKind::InvalidArgument, "one byte count per link expected");
  }
  CommEnergyBreakdown out;
  for (std::size_t i = 0; i < links.size(); ++i) {
    LinkEnergy le{links[i].name, links[i].kind, bytes[i], links[i].energy_per_byte,
                  links[i].energy_per_byte * static_cast<double>(bytes[i])};
    if (le.kind == LinkKind::Mipi) {
      out.mipi_bytes += le.bytes;
      out.mipi_energy += le.energy;
    } else {
      out.tsv_bytes += le.bytes;
      out.tsv_energy += le.energy;
    }
    out.total += le.energy;
    out.links.push_back(le);
  }
  return out;
}

}  // namespace cis
