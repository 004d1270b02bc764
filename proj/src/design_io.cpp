#include "cismodel/design_io.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "cismodel/error.hpp"
#include "json.hpp"

namespace cis {

namespace {

using json = nlohmann::json;

[[noreturn]] void schema_error(const std::string& path, const std::string& message) {
  throw ModelError(ErrorKind::SchemaError, (path.empty() ? "" : path + ": ") + message);
}

// One JSON object with key bookkeeping so that unknown keys are rejected.
class Obj {
 public:
  Obj(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j.is_object()) schema_error(path_, "expected an object");
  }

  // Rejects missing and unknown keys together.
  void expect(const std::vector<std::string_view>& required,
              const std::vector<std::string_view>& optional) const {
    std::vector<std::string> missing, unknown;
    for (auto k : required) {
      if (!j_.contains(k)) missing.emplace_back(k);
    }
    for (const auto& [k, v] : j_.items()) {
      const auto in = [&](const std::vector<std::string_view>& l) {
        return std::find(l.begin(), l.end(), k) != l.end();
      };
      if (!in(required) && !in(optional)) unknown.push_back(k);
    }
    if (missing.empty() && unknown.empty()) return;
    std::string msg;
    if (!missing.empty()) msg += "missing keys: " + join(missing);
    if (!unknown.empty()) msg += std::string(msg.empty() ? "" : "; ") + "unknown keys: " + join(unknown);
    throw ModelError(ErrorKind::SchemaError, path_ + ": " + msg,
                     missing.empty() ? unknown : missing);
  }

  bool has(const char* k) const { return j_.contains(k); }
  const json& at(const char* k) const { return j_.at(k); }
  std::string path(const std::string& k) const { return path_.empty() ? k : path_ + "." + k; }

  std::string str(const char* k) const {
    const json& v = at(k);
    if (!v.is_string()) schema_error(path(k), "expected a string");
    return v.get<std::string>();
  }
  std::string str_or(const char* k, std::string fallback) const {
    return has(k) ? str(k) : std::move(fallback);
  }

  Count count(const char* k, Count min = 0) const {
    const json& v = at(k);
    if (!v.is_number_integer()) schema_error(path(k), "expected an integer count");
    const Count c = v.get<Count>();
    if (c < min) schema_error(path(k), "must be at least " + std::to_string(min));
    return c;
  }
  Count count_or(const char* k, Count fallback, Count min = 0) const {
    return has(k) ? count(k, min) : fallback;
  }

  double number(const char* k) const {
    const json& v = at(k);
    if (!v.is_number()) schema_error(path(k), "expected a dimensionless number");
    return v.get<double>();
  }

  bool flag(const char* k) const {
    const json& v = at(k);
    if (!v.is_boolean()) schema_error(path(k), "expected true or false");
    return v.get<bool>();
  }

  double quantity(const char* k, Unit unit) const {
    const json& v = at(k);
    if (!v.is_string()) {
      schema_error(path(k), "expected a quantity with unit '" + std::string(unit_symbol(unit)) +
                                "', got " + v.dump());
    }
    try {
      return parse_quantity(v.get<std::string>(), unit);
    } catch (const ModelError& e) {
      const std::string msg = e.what();
      const auto colon = msg.find(": ");
      schema_error(path(k), colon == std::string::npos ? msg : msg.substr(colon + 2));
    }
  }
  std::optional<double> opt_quantity(const char* k, Unit unit) const {
    if (!has(k)) return std::nullopt;
    return quantity(k, unit);
  }

  Dims3 dims3(const char* k) const {
    const json& v = at(k);
    if (!v.is_array() || v.size() != 3) schema_error(path(k), "expected [h, w, c]");
    Dims3 d{element(v, 0, k), element(v, 1, k), element(v, 2, k)};
    return d;
  }
  Dims2 dims2(const char* k) const {
    const json& v = at(k);
    if (!v.is_array() || v.size() != 2) schema_error(path(k), "expected [h, w]");
    return Dims2{element(v, 0, k), element(v, 1, k)};
  }

  std::vector<std::string> names(const char* k) const {
    std::vector<std::string> out;
    if (!has(k)) return out;
    const json& v = at(k);
    if (!v.is_array()) schema_error(path(k), "expected a list of names");
    for (const auto& x : v) {
      if (!x.is_string()) schema_error(path(k), "expected a list of names");
      out.push_back(x.get<std::string>());
    }
    return out;
  }

  const json& list(const char* k) const {
    const json& v = at(k);
    if (!v.is_array()) schema_error(path(k), "expected a list");
    return v;
  }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (const auto& s : v) out += (out.empty() ? "" : ", ") + s;
    return out;
  }
  Count element(const json& v, std::size_t i, const char* k) const {
    if (!v[i].is_number_integer() || v[i].get<Count>() < 1) {
      schema_error(path(k), "dimensions must be positive integers");
    }
    return v[i].get<Count>();
  }

  const json& j_;
  std::string path_;
};

std::string item_path(const std::string& list, std::size_t i) {
  return list + "[" + std::to_string(i) + "]";
}

template <class F>
auto wrap(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const ModelError& e) {
    if (e.kind() != ErrorKind::SchemaError) throw;
    const std::string what = e.what();
    const std::string prefix = std::string(to_string(ErrorKind::SchemaError)) + ": ";
    schema_error(path, what.rfind(prefix, 0) == 0 ? what.substr(prefix.size()) : what);
  }
}

Stage parse_stage(const json& j, const std::string& path) {
  Obj o(j, path);
  o.expect({"name", "kind", "input_size", "output_size"},
           {"kernel", "stride", "ops_per_window", "predecessors", "layers", "bits"});
  Stage s;
  s.name = o.str("name");
  s.kind = wrap(o.path("kind"), [&] { return stage_kind_from_string(o.str("kind")); });
  s.shape.input = o.dims3("input_size");
  s.shape.output = o.dims3("output_size");
  if (o.has("kernel")) s.shape.kernel = o.dims2("kernel");
  if (o.has("stride")) s.shape.stride = o.dims2("stride");
  s.ops_per_window = o.count_or("ops_per_window", s.kind == StageKind::PixelInput ? 0 : 1);
  s.predecessors = o.names("predecessors");
  s.bits_per_element = static_cast<int>(o.count_or("bits", 8, 1));
  if (o.has("layers")) {
    const json& layers = o.list("layers");
    for (std::size_t i = 0; i < layers.size(); ++i) {
      Obj l(layers[i], item_path(o.path("layers"), i));
      l.expect({"output", "macs_per_output"}, {});
      s.layers.push_back({l.dims3("output"), l.count("macs_per_output")});
    }
  }
  return s;
}

void parse_cell_fields(const Obj& o, ACellSpec& c) {
  if (o.has("class")) {
    c.cls = wrap(o.path("class"), [&] { return cell_class_from_string(o.str("class")); });
  }
  if (o.has("nodes")) {
    c.nodes.clear();
    const json& nodes = o.list("nodes");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      Obj n(nodes[i], item_path(o.path("nodes"), i));
      n.expect({}, {"capacitance", "voltage_swing"});
      c.nodes.push_back({n.opt_quantity("capacitance", Unit::Farad),
                         n.opt_quantity("voltage_swing", Unit::Volt)});
    }
  }
  if (o.has("load_capacitance")) c.load_capacitance = o.quantity("load_capacitance", Unit::Farad);
  if (o.has("gain")) c.gain = o.number("gain");
  if (o.has("gm_over_id")) c.gm_over_id = o.number("gm_over_id");
  if (o.has("allow_gm_id_out_of_range")) c.allow_gm_id_out_of_range = o.flag("allow_gm_id_out_of_range");
  if (o.has("fom_table")) {
    c.fom_table.clear();
    const json& pts = o.list("fom_table");
    for (std::size_t i = 0; i < pts.size(); ++i) {
      Obj p(pts[i], item_path(o.path("fom_table"), i));
      p.expect({"sample_rate", "energy_per_conversion"}, {});
      c.fom_table.push_back({p.quantity("sample_rate", Unit::Hertz),
                             p.quantity("energy_per_conversion", Unit::Joule)});
    }
  }
  if (o.has("supply")) c.supply = o.quantity("supply", Unit::Volt);
  if (o.has("voltage_swing")) c.voltage_swing = o.quantity("voltage_swing", Unit::Volt);
  if (o.has("transistor_count")) c.transistor_count = static_cast<int>(o.count("transistor_count", 1));
  if (o.has("resolution_bits")) c.resolution_bits = static_cast<int>(o.count("resolution_bits", 1));
  if (o.has("noise_sigma")) {
    c.noise_sigma = o.quantity("noise_sigma", Unit::Volt);
    if (!(*c.noise_sigma > 0.0)) schema_error(o.path("noise_sigma"), "must be positive");
  }
  if (o.has("delay")) c.delay = o.quantity("delay", Unit::Second);
  if (o.has("spatial_count")) c.spatial_count = o.count("spatial_count", 1);
  if (o.has("temporal_count")) c.temporal_count = o.count("temporal_count", 1);
}

const std::vector<std::string_view> kCellFields = {
    "nodes",  "load_capacitance", "gain",          "gm_over_id",       "allow_gm_id_out_of_range",
    "fom_table", "supply",        "voltage_swing", "transistor_count", "resolution_bits",
    "noise_sigma", "delay",       "spatial_count", "temporal_count"};

std::vector<std::string_view> with(std::vector<std::string_view> v, std::string_view extra) {
  v.push_back(extra);
  return v;
}

ComponentSlot parse_component(const json& j, const std::string& path) {
  Obj o(j, path);
  o.expect({"kind"}, {"name", "count", "cells", "cell_overrides", "input_domain", "output_domain"});
  ComponentSlot slot;
  AComponentSpec& c = slot.component;
  c.kind = wrap(o.path("kind"), [&] { return component_kind_from_string(o.str("kind")); });
  c.name = o.str_or("name", std::string(to_string(c.kind)));
  slot.num_component = o.count_or("count", 1, 1);
  c.input_domain = default_input_domain(c.kind);
  c.output_domain = default_output_domain(c.kind);
  if (o.has("input_domain")) {
    c.input_domain = wrap(o.path("input_domain"), [&] { return domain_set_from_string(o.str("input_domain")); });
  }
  if (o.has("output_domain")) {
    c.output_domain = wrap(o.path("output_domain"), [&] { return domain_set_from_string(o.str("output_domain")); });
  }
  if (o.has("cells")) {
    const json& cells = o.list("cells");
    for (std::size_t i = 0; i < cells.size(); ++i) {
      Obj cj(cells[i], item_path(o.path("cells"), i));
      cj.expect({"name", "class"}, kCellFields);
      ACellSpec cell;
      cell.name = cj.str("name");
      parse_cell_fields(cj, cell);
      c.cells.push_back(std::move(cell));
    }
    if (c.cells.empty()) schema_error(o.path("cells"), "a component needs at least one cell");
  } else {
    c.cells = default_cells(c.kind);
  }
  if (o.has("cell_overrides")) {
    Obj ov(o.at("cell_overrides"), o.path("cell_overrides"));
    for (const auto& [name, patch] : o.at("cell_overrides").items()) {
      auto it = std::find_if(c.cells.begin(), c.cells.end(),
                             [&](const ACellSpec& x) { return x.name == name; });
      if (it == c.cells.end()) {
        schema_error(ov.path(name), "component '" + c.name + "' has no cell named '" + name + "'");
      }
      Obj p(patch, ov.path(name));
      p.expect({}, with(kCellFields, "class"));
      parse_cell_fields(p, *it);
    }
  }
  return slot;
}

AnalogArraySpec parse_array(const json& j, const std::string& path) {
  Obj o(j, path);
  o.expect({"name", "num_input", "num_output", "components"},
           {"layer", "inputs", "input_domain", "output_domain"});
  AnalogArraySpec a;
  a.name = o.str("name");
  a.layer = o.str_or("layer", "");
  a.inputs = o.names("inputs");
  a.num_input = o.dims3("num_input");
  a.num_output = o.dims3("num_output");
  const json& comps = o.list("components");
  for (std::size_t i = 0; i < comps.size(); ++i) {
    a.components.push_back(parse_component(comps[i], item_path(o.path("components"), i)));
  }
  if (a.components.empty()) schema_error(o.path("components"), "an array needs a component");
  a.input_domain = a.components.front().component.input_domain;
  a.output_domain = a.components.back().component.output_domain;
  if (o.has("input_domain")) {
    a.input_domain = wrap(o.path("input_domain"), [&] { return domain_set_from_string(o.str("input_domain")); });
  }
  if (o.has("output_domain")) {
    a.output_domain = wrap(o.path("output_domain"), [&] { return domain_set_from_string(o.str("output_domain")); });
  }
  return a;
}

DigitalUnitSpec parse_unit(const json& j, const std::string& path) {
  Obj o(j, path);
  o.expect({"name", "kind", "input_pixels_per_cycle", "output_pixels_per_cycle", "num_stages",
            "energy_per_cycle", "clock"},
           {"layer", "inputs", "rows", "cols", "energy_node"});
  DigitalUnitSpec u;
  u.name = o.str("name");
  const std::string kind = o.str("kind");
  if (kind == "PipelinedAccelerator") {
    u.kind = DigitalKind::PipelinedAccelerator;
  } else if (kind == "SystolicArray") {
    u.kind = DigitalKind::SystolicArray;
  } else {
    schema_error(o.path("kind"), "unknown digital unit kind '" + kind + "'");
  }
  u.layer = o.str_or("layer", "");
  u.inputs = o.names("inputs");
  u.input_pixels_per_cycle = o.dims3("input_pixels_per_cycle");
  u.output_pixels_per_cycle = o.dims3("output_pixels_per_cycle");
  u.num_stages = o.count("num_stages", 1);
  u.energy_per_cycle = o.quantity("energy_per_cycle", Unit::Joule);
  u.clock = o.quantity("clock", Unit::Hertz);
  if (!(u.clock > 0.0)) schema_error(o.path("clock"), "must be positive");
  if (u.kind == DigitalKind::SystolicArray) {
    if (!o.has("rows") || !o.has("cols")) {
      schema_error(path, "a SystolicArray needs rows and cols");
    }
  }
  u.rows = o.count_or("rows", 1, 1);
  u.cols = o.count_or("cols", 1, 1);
  u.energy_node = o.opt_quantity("energy_node", Unit::Nanometer);
  return u;
}

MemorySpec parse_memory(const json& j, const std::string& path) {
  Obj o(j, path);
  o.expect({"name", "kind", "capacity", "read_energy", "write_energy", "leakage_power"},
           {"layer", "inputs", "rows", "row_width", "ports", "active_fraction", "energy_node"});
  MemorySpec m;
  m.name = o.str("name");
  const std::string kind = o.str("kind");
  if (kind == "FIFO") {
    m.kind = MemoryKind::Fifo;
  } else if (kind == "LineBuffer") {
    m.kind = MemoryKind::LineBuffer;
    if (!o.has("rows") || !o.has("row_width")) {
      schema_error(path, "a LineBuffer needs rows and row_width");
    }
  } else if (kind == "DoubleBuffer") {
    m.kind = MemoryKind::DoubleBuffer;
  } else {
    schema_error(o.path("kind"), "unknown memory kind '" + kind + "'");
  }
  m.layer = o.str_or("layer", "");
  m.inputs = o.names("inputs");
  m.capacity_bytes = o.quantity("capacity", Unit::Byte);
  m.rows = o.count_or("rows", 0, 1);
  m.row_width = o.count_or("row_width", 0, 1);
  m.read_energy = o.quantity("read_energy", Unit::Joule);
  m.write_energy = o.quantity("write_energy", Unit::Joule);
  m.leakage_power = o.quantity("leakage_power", Unit::Watt);
  m.ports = o.count_or("ports", 1, 1);
  if (o.has("active_fraction")) {
    const double a = o.number("active_fraction");
    if (a < 0.0 || a > 1.0) schema_error(o.path("active_fraction"), "must lie in [0, 1]");
    m.active_fraction = a;
  }
  m.energy_node = o.opt_quantity("energy_node", Unit::Nanometer);
  return m;
}

LinkSpec parse_link(const json& j, const std::string& path) {
  Obj o(j, path);
  o.expect({"name", "kind", "source"}, {"energy_per_byte"});
  LinkSpec l;
  l.name = o.str("name");
  l.source = o.str("source");
  const std::string kind = o.str("kind");
  if (kind == "MIPI") {
    l.kind = LinkKind::Mipi;
    l.energy_per_byte = kDefaultMipiEnergyPerByte;
  } else if (kind == "uTSV") {
    l.kind = LinkKind::Utsv;
    l.energy_per_byte = kDefaultUtsvEnergyPerByte;
  } else {
    schema_error(o.path("kind"), "unknown link kind '" + kind + "'");
  }
  if (o.has("energy_per_byte")) l.energy_per_byte = o.quantity("energy_per_byte", Unit::JoulePerByte);
  if (!(l.energy_per_byte > 0.0)) schema_error(o.path("energy_per_byte"), "must be positive");
  return l;
}

Layer parse_layer(const json& j, const std::string& path) {
  Obj o(j, path);
  o.expect({"name"}, {"process_node", "area"});
  return Layer{o.str("name"), o.opt_quantity("process_node", Unit::Nanometer),
               o.opt_quantity("area", Unit::SquareMm)};
}

Globals parse_globals(const json& j) {
  Obj o(j, "globals");
  o.expect({}, {"name", "fps", "temperature", "analog_supply", "scaling_table"});
  Globals g;
  g.name = o.str_or("name", "");
  g.fps = o.opt_quantity("fps", Unit::Hertz);
  if (o.has("temperature")) g.temperature = o.quantity("temperature", Unit::Kelvin);
  if (o.has("analog_supply")) g.analog_supply = o.quantity("analog_supply", Unit::Volt);
  if (o.has("scaling_table")) {
    Obj t(o.at("scaling_table"), o.path("scaling_table"));
    for (const auto& [node, factor] : o.at("scaling_table").items()) {
      const double nm = wrap(t.path(node), [&] { return parse_quantity(node, Unit::Nanometer); });
      if (!factor.is_number() || !(factor.get<double>() > 0.0)) {
        schema_error(t.path(node), "scaling factor must be a positive number");
      }
      g.scaling_table[nm] = factor.get<double>();
    }
  }
  return g;
}

template <class T, class F>
std::vector<T> parse_list(const Obj& o, const char* key, F&& parse) {
  std::vector<T> out;
  if (!o.has(key)) return out;
  const json& v = o.list(key);
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(parse(v[i], item_path(o.path(key), i)));
  return out;
}

void check_energy_nodes(const Design& d) {
  auto check = [&](const std::string& what, std::optional<double> node, const std::string& layer) {
    if (!node) return;
    std::optional<double> layer_node;
    if (auto li = d.hardware.find_layer(layer)) layer_node = d.hardware.layers[*li].process_node;
    if (!layer_node || *layer_node == *node) return;
    for (double n : {*node, *layer_node}) {
      if (!d.globals.scaling_table.count(n)) {
        throw ModelError(ErrorKind::SchemaError,
                         what + ": process node " + format_number(n) +
                             " nm is not in globals.scaling_table (UnknownNode)");
      }
    }
  };
  for (const auto& u : d.hardware.digital_units) check("unit '" + u.name + "'", u.energy_node, u.layer);
  for (const auto& m : d.hardware.memories) check("memory '" + m.name + "'", m.energy_node, m.layer);
}

std::size_t line_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

std::string section_of(std::string_view text, std::size_t byte) {
  std::string best;
  std::size_t best_pos = 0;
  for (const char* s : {"software", "hardware", "mapping", "globals"}) {
    const std::string key = std::string("\"") + s + "\"";
    const std::size_t p = text.substr(0, std::min(byte, text.size())).rfind(key);
    if (p != std::string_view::npos && (best.empty() || p > best_pos)) {
      best = s;
      best_pos = p;
    }
  }
  return best;
}

}  // namespace

Design load_design(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end(), nullptr, true, true);
  } catch (const json::parse_error& e) {
    std::string msg = e.what();
    if (auto p = msg.find("parse error"); p != std::string::npos) msg = msg.substr(p);
    throw ParseError(msg, line_of(text, e.byte > 0 ? e.byte - 1 : 0), section_of(text, e.byte));
  }
  if (!root.is_object()) {
    throw ModelError(ErrorKind::SchemaError,
                     "document must be an object with software, hardware and mapping sections",
                     {"software", "hardware", "mapping"});
  }
  Obj top(root, "");
  top.expect({"software", "hardware", "mapping"}, {"globals"});

  Design d;
  if (top.has("globals")) d.globals = parse_globals(top.at("globals"));

  Obj sw(top.at("software"), "software");
  sw.expect({"stages"}, {});
  d.graph = build_graph(parse_list<Stage>(sw, "stages", parse_stage));

  Obj hw(top.at("hardware"), "hardware");
  hw.expect({}, {"layers", "analog_arrays", "digital_units", "memories", "links"});
  d.hardware.layers = parse_list<Layer>(hw, "layers", parse_layer);
  d.hardware.analog_arrays = parse_list<AnalogArraySpec>(hw, "analog_arrays", parse_array);
  d.hardware.digital_units = parse_list<DigitalUnitSpec>(hw, "digital_units", parse_unit);
  d.hardware.memories = parse_list<MemorySpec>(hw, "memories", parse_memory);
  d.hardware.links = parse_list<LinkSpec>(hw, "links", parse_link);

  std::set<std::string> names;
  auto unique = [&](const std::string& n, const std::string& what) {
    if (!names.insert(n).second) schema_error("hardware", "duplicate " + what + " name '" + n + "'");
  };
  for (const auto& a : d.hardware.analog_arrays) unique(a.name, "unit");
  for (const auto& u : d.hardware.digital_units) unique(u.name, "unit");
  for (const auto& m : d.hardware.memories) unique(m.name, "unit");
  for (const auto& l : d.hardware.links) unique(l.name, "link");

  Obj mp(top.at("mapping"), "mapping");
  mp.expect({"stages"}, {"links"});
  Obj ms(mp.at("stages"), "mapping.stages");
  for (const auto& [stage, unit] : mp.at("stages").items()) {
    if (!d.graph.contains(stage)) schema_error(ms.path(stage), "unknown stage '" + stage + "'");
    if (!unit.is_string()) schema_error(ms.path(stage), "expected a unit name");
    d.mapping.stage_to_unit[stage] = unit.get<std::string>();
  }
  if (mp.has("links")) {
    Obj ml(mp.at("links"), "mapping.links");
    for (const auto& [stage, links] : mp.at("links").items()) {
      if (!d.graph.contains(stage)) schema_error(ml.path(stage), "unknown stage '" + stage + "'");
      auto& out = d.mapping.stage_links[stage];
      if (links.is_string()) {
        out.push_back(links.get<std::string>());
      } else if (links.is_array()) {
        for (const auto& l : links) {
          if (!l.is_string()) schema_error(ml.path(stage), "expected link names");
          out.push_back(l.get<std::string>());
        }
      } else {
        schema_error(ml.path(stage), "expected a link name or a list of link names");
      }
    }
  }
  check_energy_nodes(d);
  return d;
}

Design load_design_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError(ErrorKind::InvalidArgument, "cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return load_design(buf.str());
}

}  // namespace cis
