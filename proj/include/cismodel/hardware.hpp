#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cismodel/ir.hpp"
#include "cismodel/units.hpp"

namespace cis {

enum class SignalDomain { Charge, Voltage, Current, Time, Digital };

std::string_view to_string(SignalDomain d);
SignalDomain domain_from_string(std::string_view text);

// A declared domain; "Time&Current" style pairs accept either member.
struct DomainSet {
  std::vector<SignalDomain> members;

  bool is_pair() const { return members.size() > 1; }
  bool contains(SignalDomain d) const;
  bool overlaps(const DomainSet& other) const;
  std::string to_string() const;
  friend bool operator==(const DomainSet&, const DomainSet&) = default;
};

DomainSet domain_set_from_string(std::string_view text);

// ---------------------------------------------------------------------------
// Analog hardware: arrays (AFA) of components built from cells.

enum class CellClass { Dynamic, StaticBiasedDirect, StaticBiasedGmId, NonLinear };

std::string_view to_string(CellClass c);
CellClass cell_class_from_string(std::string_view text);

struct CapacitiveNode {
  std::optional<double> capacitance;  // F; sized from thermal noise when absent
  std::optional<double> voltage_swing;  // V; defaults to the cell swing
};

struct FomPoint {
  double sample_rate;            // Hz
  double energy_per_conversion;  // J
};

struct ACellSpec {
  std::string name;
  CellClass cls = CellClass::Dynamic;

  // Dynamic
  std::vector<CapacitiveNode> nodes;
  // StaticBiasedDirect / StaticBiasedGmId
  double load_capacitance = 0.0;  // F
  double gain = 1.0;
  double gm_over_id = 15.0;
  bool allow_gm_id_out_of_range = false;
  // NonLinear
  std::vector<FomPoint> fom_table;

  std::optional<double> supply;         // V_DDA; design default when absent
  std::optional<double> voltage_swing;  // V_VS; derived from supply when absent
  int transistor_count = 1;             // devices stacked between supply and ground
  int resolution_bits = 8;              // for noise-driven capacitor sizing
  std::optional<double> noise_sigma;    // V; replaces the half-LSB noise bound
  std::optional<double> delay;          // s per access; user-pinned timing

  Count spatial_count = 1;
  Count temporal_count = 1;
};

enum class ComponentKind {
  ApsPixel,
  DpsPixel,
  PwmPixel,
  Adc,
  Mac,
  Max,
  Scaling,
  Add,
  Log,
  Abs,
  Comparator,
  PassiveMemory,
  ActiveMemory,
  SampleAndHold,
};

std::string_view to_string(ComponentKind k);
ComponentKind component_kind_from_string(std::string_view text);
bool is_pixel(ComponentKind k);
bool is_analog_memory(ComponentKind k);
bool has_adc(ComponentKind k);  // produces digital codes

struct AComponentSpec {
  std::string name;
  ComponentKind kind = ComponentKind::ApsPixel;
  std::vector<ACellSpec> cells;  // signal flows through in order
  DomainSet input_domain;
  DomainSet output_domain;
};

// Editable default cell lists per component kind. Capacitances and FoM
// points are illustrative placeholders meant to be calibrated per design.
std::vector<ACellSpec> default_cells(ComponentKind kind);
DomainSet default_input_domain(ComponentKind kind);
DomainSet default_output_domain(ComponentKind kind);
// Placeholder ADC energy-per-conversion table (requires user calibration).
std::vector<FomPoint> placeholder_adc_fom();
std::vector<FomPoint> placeholder_comparator_fom();

struct ComponentSlot {
  AComponentSpec component;
  Count num_component = 1;
};

struct AnalogArraySpec {
  std::string name;
  std::vector<ComponentSlot> components;
  Dims3 num_input;
  Dims3 num_output;
  DomainSet input_domain;
  DomainSet output_domain;
  std::vector<std::string> inputs;  // producing hardware units
  std::string layer;
};

// ---------------------------------------------------------------------------
// Digital hardware.

enum class DigitalKind { PipelinedAccelerator, SystolicArray };

struct DigitalUnitSpec {
  std::string name;
  DigitalKind kind = DigitalKind::PipelinedAccelerator;
  Dims3 input_pixels_per_cycle;
  Dims3 output_pixels_per_cycle;
  Count num_stages = 1;
  double energy_per_cycle = 0.0;  // J
  double clock = 0.0;             // Hz
  Count rows = 1;                 // SystolicArray
  Count cols = 1;
  std::optional<double> energy_node;  // nm at which energy_per_cycle was characterized
  std::vector<std::string> inputs;
  std::string layer;
};

enum class MemoryKind { Fifo, LineBuffer, DoubleBuffer };

std::string_view to_string(MemoryKind k);

struct MemorySpec {
  std::string name;
  MemoryKind kind = MemoryKind::Fifo;
  double capacity_bytes = 0.0;
  Count rows = 0;       // LineBuffer
  Count row_width = 0;  // LineBuffer, pixels
  double read_energy = 0.0;   // J per element access
  double write_energy = 0.0;  // J per element access
  double leakage_power = 0.0; // W
  Count ports = 1;
  std::optional<double> active_fraction;  // alpha; derived from the trace when absent
  std::optional<double> energy_node;
  std::vector<std::string> inputs;
  std::string layer;
};

enum class LinkKind { Mipi, Utsv };

std::string_view to_string(LinkKind k);

struct LinkSpec {
  std::string name;
  LinkKind kind = LinkKind::Mipi;
  double energy_per_byte = 0.0;  // J/B
  std::string source;            // hardware unit driving the link
};

// 100 pJ/B and 1 pJ/B: typical MIPI CSI-2 and micro-TSV costs.
inline constexpr double kDefaultMipiEnergyPerByte = 100e-12;
inline constexpr double kDefaultUtsvEnergyPerByte = 1e-12;

struct Layer {
  std::string name;
  std::optional<double> process_node;  // nm
  std::optional<double> area_mm2;
};

enum class UnitClass { Analog, Digital, Memory };

struct UnitRef {
  UnitClass cls;
  std::size_t index;
  friend bool operator==(const UnitRef&, const UnitRef&) = default;
};

struct Hardware {
  std::vector<Layer> layers;
  std::vector<AnalogArraySpec> analog_arrays;
  std::vector<DigitalUnitSpec> digital_units;
  std::vector<MemorySpec> memories;
  std::vector<LinkSpec> links;

  std::optional<UnitRef> find_unit(std::string_view name) const;
  std::optional<std::size_t> find_link(std::string_view name) const;
  std::optional<std::size_t> find_layer(std::string_view name) const;
  const std::string& unit_name(UnitRef ref) const;
  const std::vector<std::string>& unit_inputs(UnitRef ref) const;
  const std::string& unit_layer(UnitRef ref) const;
  bool is_pixel_array(std::size_t analog_index) const;
};

// Stage -> hardware unit, plus which links carry each stage's output.
struct MappingTable {
  std::map<std::string, std::string> stage_to_unit;
  std::map<std::string, std::vector<std::string>> stage_links;
};

struct Globals {
  std::optional<double> fps;
  double temperature = kDefaultTemperature;  // K
  double analog_supply = 2.5;  // V
  std::map<double, double> scaling_table;  // nm -> relative energy
  std::string name;
};

struct Design {
  AlgorithmGraph graph;
  Hardware hardware;
  MappingTable mapping;
  Globals globals;
};

// Headroom per stacked transistor used to derive V_VS from V_DDA.
inline constexpr double kTransistorHeadroom = 0.3;  // V

double resolve_supply(const ACellSpec& cell, const Globals& globals);
double resolve_swing(const ACellSpec& cell, const Globals& globals);

// Relative energy of `to_node` vs `from_node` from the design's table.
double node_scale(const Globals& globals, std::optional<double> from_node,
                  std::optional<double> to_node);

}  // namespace cis
