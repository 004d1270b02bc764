#include "cismodel/hardware.hpp"

#include <algorithm>
#include <cmath>

#include "cismodel/error.hpp"

namespace cis {

std::string_view to_string(SignalDomain d) {
  switch (d) {
    case SignalDomain::Charge: return "Charge";
    case SignalDomain::Voltage: return "Voltage";
    case SignalDomain::Current: return "Current";
    case SignalDomain::Time: return "Time";
    case SignalDomain::Digital: return "Digital";
  }
  return "";
}

SignalDomain domain_from_string(std::string_view text) {
  for (auto d : {SignalDomain::Charge, SignalDomain::Voltage, SignalDomain::Current,
                 SignalDomain::Time, SignalDomain::Digital}) {
    if (to_string(d) == text) return d;
  }
  throw ModelError(ErrorKind::SchemaError, "unknown signal domain '" + std::string(text) + "'");
}

bool DomainSet::contains(SignalDomain d) const {
  return std::find(members.begin(), members.end(), d) != members.end();
}

bool DomainSet::overlaps(const DomainSet& other) const {
  return std::any_of(members.begin(), members.end(),
                     [&](SignalDomain d) { return other.contains(d); });
}

std::string DomainSet::to_string() const {
  std::string out;
  for (auto d : members) {
    if (!out.empty()) out += "&";
    out += cis::to_string(d);
  }
  return out;
}

DomainSet domain_set_from_string(std::string_view text) {
  DomainSet set;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t amp = text.find('&', start);
    std::string_view part = text.substr(start, amp == std::string_view::npos ? text.npos : amp - start);
    set.members.push_back(domain_from_string(part));
    if (amp == std::string_view::npos) break;
    start = amp + 1;
  }
  return set;
}

std::string_view to_string(CellClass c) {
  switch (c) {
    case CellClass::Dynamic: return "Dynamic";
    case CellClass::StaticBiasedDirect: return "StaticBiasedDirect";
    case CellClass::StaticBiasedGmId: return "StaticBiasedGmId";
    case CellClass::NonLinear: return "NonLinear";
  }
  return "";
}

CellClass cell_class_from_string(std::string_view text) {
  for (auto c : {CellClass::Dynamic, CellClass::StaticBiasedDirect, CellClass::StaticBiasedGmId,
                 CellClass::NonLinear}) {
    if (to_string(c) == text) return c;
  }
  throw ModelError(ErrorKind::SchemaError, "unknown cell class '" + std::string(text) + "'");
}

namespace {

constexpr ComponentKind kAllKinds[] = {
    ComponentKind::ApsPixel,   ComponentKind::DpsPixel,      ComponentKind::PwmPixel,
    ComponentKind::Adc,        ComponentKind::Mac,           ComponentKind::Max,
    ComponentKind::Scaling,    ComponentKind::Add,           ComponentKind::Log,
    ComponentKind::Abs,        ComponentKind::Comparator,    ComponentKind::PassiveMemory,
    ComponentKind::ActiveMemory, ComponentKind::SampleAndHold,
};

ACellSpec dynamic_cell(std::string name, double capacitance) {
  ACellSpec c;
  c.name = std::move(name);
  c.cls = CellClass::Dynamic;
  c.nodes.push_back({capacitance, std::nullopt});
  return c;
}

ACellSpec direct_cell(std::string name, double load) {
  ACellSpec c;
  c.name = std::move(name);
  c.cls = CellClass::StaticBiasedDirect;
  c.load_capacitance = load;
  return c;
}

ACellSpec opamp_cell(std::string name, double load) {
  ACellSpec c;
  c.name = std::move(name);
  c.cls = CellClass::StaticBiasedGmId;
  c.load_capacitance = load;
  c.gain = 1.0;
  c.gm_over_id = 15.0;
  return c;
}

ACellSpec nonlinear_cell(std::string name, std::vector<FomPoint> table) {
  ACellSpec c;
  c.name = std::move(name);
  c.cls = CellClass::NonLinear;
  c.fom_table = std::move(table);
  return c;
}

}  // namespace

std::string_view to_string(ComponentKind k) {
  switch (k) {
    case ComponentKind::ApsPixel: return "APS";
    case ComponentKind::DpsPixel: return "DPS";
    case ComponentKind::PwmPixel: return "PWM";
    case ComponentKind::Adc: return "ADC";
    case ComponentKind::Mac: return "MAC";
    case ComponentKind::Max: return "Max";
    case ComponentKind::Scaling: return "Scaling";
    case ComponentKind::Add: return "Add";
    case ComponentKind::Log: return "Log";
    case ComponentKind::Abs: return "Abs";
    case ComponentKind::Comparator: return "Comparator";
    case ComponentKind::PassiveMemory: return "PassiveMemory";
    case ComponentKind::ActiveMemory: return "ActiveMemory";
    case ComponentKind::SampleAndHold: return "SampleAndHold";
  }
  return "";
}

ComponentKind component_kind_from_string(std::string_view text) {
  for (auto k : kAllKinds) {
    if (to_string(k) == text) return k;
  }
  throw ModelError(ErrorKind::SchemaError, "unknown analog component kind '" + std::string(text) + "'");
}

bool is_pixel(ComponentKind k) {
  return k == ComponentKind::ApsPixel || k == ComponentKind::DpsPixel ||
         k == ComponentKind::PwmPixel;
}

bool is_analog_memory(ComponentKind k) {
  return k == ComponentKind::PassiveMemory || k == ComponentKind::ActiveMemory ||
         k == ComponentKind::SampleAndHold;
}

bool has_adc(ComponentKind k) { return k == ComponentKind::Adc || k == ComponentKind::DpsPixel; }

std::vector<FomPoint> placeholder_adc_fom() {
  // Placeholder: calibrate against a Walden FoM survey for real designs.
  return {{1e6, 1e-12}, {100e6, 10e-12}};
}

std::vector<FomPoint> placeholder_comparator_fom() {
  // Placeholder for a 1-bit conversion.
  return {{1e6, 0.1e-12}, {100e6, 1e-12}};
}

std::vector<ACellSpec> default_cells(ComponentKind kind) {
  constexpr double k100fF = 100e-15;
  switch (kind) {
    case ComponentKind::ApsPixel: {
      // 4T APS: photodiode, floating diffusion, source follower read twice (CDS).
      auto sf = direct_cell("source_follower", 1e-12);
      sf.temporal_count = 2;
      return {dynamic_cell("photodiode", 10e-15), dynamic_cell("floating_diffusion", 5e-15), sf};
    }
    case ComponentKind::DpsPixel:
      return {dynamic_cell("photodiode", 10e-15), nonlinear_cell("pixel_adc", placeholder_adc_fom())};
    case ComponentKind::PwmPixel:
      return {dynamic_cell("photodiode", 10e-15),
              nonlinear_cell("ramp_comparator", placeholder_comparator_fom())};
    case ComponentKind::Adc:
      return {nonlinear_cell("adc", placeholder_adc_fom())};
    case ComponentKind::Comparator:
      return {nonlinear_cell("comparator", placeholder_comparator_fom())};
    case ComponentKind::Mac:
    case ComponentKind::Scaling:
    case ComponentKind::Add:
      // Switched-capacitor charge redistribution.
      return {dynamic_cell("capacitor_array", k100fF), opamp_cell("opamp", k100fF)};
    case ComponentKind::Abs:
      return {dynamic_cell("capacitor_array", k100fF), opamp_cell("opamp", k100fF),
              nonlinear_cell("sign_comparator", placeholder_comparator_fom())};
    case ComponentKind::Max:
      return {dynamic_cell("sample_capacitor", k100fF),
              nonlinear_cell("comparator", placeholder_comparator_fom())};
    case ComponentKind::Log:
      return {direct_cell("log_amplifier", k100fF)};
    case ComponentKind::PassiveMemory:
      return {dynamic_cell("storage_capacitor", k100fF)};
    case ComponentKind::ActiveMemory:
      return {dynamic_cell("storage_capacitor", k100fF), opamp_cell("opamp", k100fF)};
    case ComponentKind::SampleAndHold:
      return {dynamic_cell("hold_capacitor", k100fF), direct_cell("buffer", k100fF)};
  }
  return {};
}

DomainSet default_input_domain(ComponentKind kind) {
  switch (kind) {
    case ComponentKind::ApsPixel:
    case ComponentKind::DpsPixel:
    case ComponentKind::PwmPixel:
      return {{SignalDomain::Charge}};
    default:
      return {{SignalDomain::Voltage}};
  }
}

DomainSet default_output_domain(ComponentKind kind) {
  switch (kind) {
    case ComponentKind::DpsPixel:
    case ComponentKind::Adc:
    case ComponentKind::Comparator:
      return {{SignalDomain::Digital}};
    case ComponentKind::PwmPixel:
      return {{SignalDomain::Time}};
    default:
      return {{SignalDomain::Voltage}};
  }
}

std::string_view to_string(MemoryKind k) {
  switch (k) {
    case MemoryKind::Fifo: return "FIFO";
    case MemoryKind::LineBuffer: return "LineBuffer";
    case MemoryKind::DoubleBuffer: return "DoubleBuffer";
  }
  return "";
}

std::string_view to_string(LinkKind k) {
  switch (k) {
    case LinkKind::Mipi: return "MIPI";
    case LinkKind::Utsv: return "uTSV";
  }
  return "";
}

std::optional<UnitRef> Hardware::find_unit(std::string_view name) const {
  for (std::size_t i = 0; i < analog_arrays.size(); ++i)
    if (analog_arrays[i].name == name) return UnitRef{UnitClass::Analog, i};
  for (std::size_t i = 0; i < digital_units.size(); ++i)
    if (digital_units[i].name == name) return UnitRef{UnitClass::Digital, i};
  for (std::size_t i = 0; i < memories.size(); ++i)
    if (memories[i].name == name) return UnitRef{UnitClass::Memory, i};
  return std::nullopt;
}

std::optional<std::size_t> Hardware::find_link(std::string_view name) const {
  for (std::size_t i = 0; i < links.size(); ++i)
    if (links[i].name == name) return i;
  return std::nullopt;
}

std::optional<std::size_t> Hardware::find_layer(std::string_view name) const {
  for (std::size_t i = 0; i < layers.size(); ++i)
    if (layers[i].name == name) return i;
  return std::nullopt;
}

const std::string& Hardware::unit_name(UnitRef ref) const {
  switch (ref.cls) {
    case UnitClass::Analog: return analog_arrays.at(ref.index).name;
    case UnitClass::Digital: return digital_units.at(ref.index).name;
    case UnitClass::Memory: break;
  }
  return memories.at(ref.index).name;
}

const std::vector<std::string>& Hardware::unit_inputs(UnitRef ref) const {
  switch (ref.cls) {
    case UnitClass::Analog: return analog_arrays.at(ref.index).inputs;
    case UnitClass::Digital: return digital_units.at(ref.index).inputs;
    case UnitClass::Memory: break;
  }
  return memories.at(ref.index).inputs;
}

const std::string& Hardware::unit_layer(UnitRef ref) const {
  switch (ref.cls) {
    case UnitClass::Analog: return analog_arrays.at(ref.index).layer;
    case UnitClass::Digital: return digital_units.at(ref.index).layer;
    case UnitClass::Memory: break;
  }
  return memories.at(ref.index).layer;
}

bool Hardware::is_pixel_array(std::size_t analog_index) const {
  const auto& arr = analog_arrays.at(analog_index);
  return std::any_of(arr.components.begin(), arr.components.end(),
                     [](const ComponentSlot& s) { return is_pixel(s.component.kind); });
}

double resolve_supply(const ACellSpec& cell, const Globals& globals) {
  return cell.supply.value_or(globals.analog_supply);
}

double resolve_swing(const ACellSpec& cell, const Globals& globals) {
  if (cell.voltage_swing) return *cell.voltage_swing;
  return resolve_supply(cell, globals) - kTransistorHeadroom * cell.transistor_count;
}

double node_scale(const Globals& globals, std::optional<double> from_node,
                  std::optional<double> to_node) {
  if (!from_node || !to_node || *from_node == *to_node) return 1.0;
  auto from = globals.scaling_table.find(*from_node);
  auto to = globals.scaling_table.find(*to_node);
  if (from == globals.scaling_table.end() || to == globals.scaling_table.end()) {
    const double missing = from == globals.scaling_table.end() ? *from_node : *to_node;
    throw ModelError(ErrorKind::UnknownNode,
                     "process node " + format_number(missing) + " nm is not in the scaling table");
  }
  return to->second / from->second;
}

}  // namespace cis
