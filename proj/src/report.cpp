#include "cismodel/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <map>
#include <sstream>

#include "cismodel/analog_energy.hpp"
#include "cismodel/comm_energy.hpp"
#include "cismodel/design_io.hpp"
#include "cismodel/digital_energy.hpp"
#include "cismodel/error.hpp"
#include "json.hpp"

namespace cis {

namespace {

using ojson = nlohmann::ordered_json;

std::string analog_category(const AnalogArraySpec& a) {
  bool memory_only = true;
  for (const auto& slot : a.components) {
    const ComponentKind k = slot.component.kind;
    if (is_pixel(k) || has_adc(k)) return "SEN";
    memory_only = memory_only && is_analog_memory(k);
  }
  return memory_only ? "MEM" : "COMP";
}

std::string link_layer(const Hardware& hw, const LinkSpec& l) {
  if (auto u = hw.find_unit(l.source)) return hw.unit_layer(*u);
  return "";
}

void add_power_density(EnergyReport& r, const Hardware& hw) {
  for (const auto& layer : hw.layers) {
    if (!layer.area_mm2) continue;
    LayerPower lp;
    lp.layer = layer.name;
    lp.area_mm2 = *layer.area_mm2;
    for (const auto& item : r.items) {
      if (item.layer == layer.name) lp.energy += item.energy;
    }
    lp.power_density = lp.area_mm2 > 0.0 ? lp.energy * r.fps / lp.area_mm2 : 0.0;
    r.power_density.push_back(lp);
  }
}

}  // namespace

EnergyReport run(const Design& design, double fps) {
  if (!(fps > 0.0)) throw ModelError(ErrorKind::InvalidArgument, "fps must be positive");
  EnergyReport r;
  r.design = design.globals.name;
  r.fps = fps;
  r.checks = run_checks(design);
  for (const auto& c : report_categories()) r.categories.emplace_back(c, 0.0);
  if (!r.checks.passed()) {
    r.status = "check_failed";
    r.timing.frame_time = 1.0 / fps;
    return r;
  }

  const TimingResult timing = compute_timing(design, fps);
  r.stalls = timing.stalls;
  r.status = r.stalls.empty() ? "ok" : "stalled";
  r.timing.frame_time = timing.frame_time;
  r.timing.digital_latency = timing.digital_latency;
  r.timing.analog_delay = timing.analog_delay;
  r.timing.analog_slots = timing.analog_slots;
  r.timing.analog_stages = timing.analog_stages;

  const Hardware& hw = design.hardware;
  const AnalogEnergyBreakdown analog = analog_frame_energy(design, timing);
  const DigitalEnergyBreakdown digital = digital_frame_energy(design, timing);
  const CommEnergyBreakdown comm =
      comm_frame_energy(hw.links, link_traffic(design.graph, hw, design.mapping));

  for (const auto& a : analog.arrays) {
    const auto& spec = hw.analog_arrays[hw.find_unit(a.name)->index];
    ReportItem item{a.name, "analog", analog_category(spec), spec.layer, a.energy, {}};
    item.details.emplace_back("ops", static_cast<double>(a.ops));
    for (const auto& c : a.components) {
      item.details.emplace_back(c.name + ".count", static_cast<double>(c.num_component));
      item.details.emplace_back(c.name + ".accesses", static_cast<double>(c.access_count));
      item.details.emplace_back(c.name + ".energy_per_access", c.energy_per_access);
    }
    r.items.push_back(std::move(item));
  }
  for (std::size_t u = 0; u < digital.units.size(); ++u) {
    const auto& ue = digital.units[u];
    if (ue.cycles == 0) continue;
    r.timing.unit_cycles.emplace_back(ue.name, ue.cycles);
    ReportItem item{ue.name, "digital", "COMP", hw.digital_units[u].layer, ue.energy, {}};
    item.details.emplace_back("cycles", static_cast<double>(ue.cycles));
    item.details.emplace_back("energy_per_cycle", ue.energy_per_cycle);
    r.items.push_back(std::move(item));
  }
  for (std::size_t m = 0; m < digital.memories.size(); ++m) {
    const auto& me = digital.memories[m];
    if (me.reads == 0 && me.writes == 0 && me.energy == 0.0) continue;
    ReportItem item{me.name, "memory", "MEM", hw.memories[m].layer, me.energy, {}};
    item.details.emplace_back("reads", static_cast<double>(me.reads));
    item.details.emplace_back("writes", static_cast<double>(me.writes));
    item.details.emplace_back("active_fraction", me.active_fraction);
    item.details.emplace_back("dynamic", me.dynamic);
    item.details.emplace_back("leakage", me.leakage);
    r.items.push_back(std::move(item));
  }
  for (std::size_t l = 0; l < comm.links.size(); ++l) {
    const auto& le = comm.links[l];
    ReportItem item{le.name, "link", le.kind == LinkKind::Mipi ? "MIPI" : "uTSV",
                    link_layer(hw, hw.links[l]), le.energy, {}};
    item.details.emplace_back("bytes", static_cast<double>(le.bytes));
    item.details.emplace_back("energy_per_byte", le.energy_per_byte);
    r.items.push_back(std::move(item));
  }

  r.analog = analog.total;
  r.digital = digital.total;
  r.comm = comm.total;
  r.total = r.analog + r.digital + r.comm;
  for (const auto& item : r.items) {
    for (auto& [name, e] : r.categories) {
      if (name == item.category) e += item.energy;
    }
  }
  add_power_density(r, hw);
  return r;
}

SweepResult sweep(const std::vector<std::pair<std::string, std::string>>& documents, double fps) {
  if (documents.empty()) throw ModelError(ErrorKind::InvalidArgument, "sweep needs a design");
  std::vector<std::future<SweepEntry>> jobs;
  for (const auto& [label, text] : documents) {
    jobs.push_back(std::async(std::launch::async, [label = label, text = text, fps] {
      SweepEntry e;
      e.label = label;
      try {
        e.report = run(load_design(text), fps);
        if (e.report->design.empty()) e.report->design = label;
      } catch (const ModelError& err) {
        e.error = err.what();
        e.error_kind = err.kind();
      } catch (const std::exception& err) {
        e.error = err.what();
      }
      return e;
    }));
  }
  SweepResult out;
  for (auto& j : jobs) out.entries.push_back(j.get());

  double reference = 0.0;
  for (const auto& e : out.entries) {
    if (e.report && e.report->total > 0.0) {
      reference = e.report->total;
      break;
    }
  }
  for (const auto& e : out.entries) {
    std::vector<double> row(report_categories().size(), 0.0);
    if (e.report && reference > 0.0) {
      for (std::size_t c = 0; c < row.size(); ++c) row[c] = e.report->categories[c].second / reference;
    }
    out.normalized.push_back(std::move(row));
  }
  return out;
}

Format format_from_string(std::string_view text) {
  if (text == "table") return Format::Table;
  if (text == "csv") return Format::Csv;
  if (text == "json") return Format::Json;
  throw ModelError(ErrorKind::InvalidArgument, "unknown format '" + std::string(text) + "'");
}

// --- JSON ------------------------------------------------------------------

namespace {

ojson pairs_to_json(const std::vector<std::pair<std::string, double>>& v) {
  ojson j = ojson::object();
  for (const auto& [k, x] : v) j[k] = x;
  return j;
}

std::vector<std::pair<std::string, double>> pairs_from_json(const ojson& j) {
  std::vector<std::pair<std::string, double>> v;
  for (const auto& [k, x] : j.items()) v.emplace_back(k, x.get<double>());
  return v;
}

ojson checks_to_json(const CheckReport& c) {
  ojson j;
  j["passed"] = c.passed();
  j["violations"] = ojson::array();
  for (const auto& v : c.violations) {
    j["violations"].push_back({{"rule", v.rule},
                               {"producer", v.producer},
                               {"consumer", v.consumer},
                               {"message", v.message},
                               {"suggested_fix", v.suggested_fix}});
  }
  j["notes"] = c.notes;
  return j;
}

ojson stalls_to_json(const std::vector<StallCause>& stalls) {
  ojson j = ojson::array();
  for (const auto& s : stalls) {
    j.push_back({{"kind", std::string(to_string(s.kind))},
                 {"unit", s.unit},
                 {"cycle", s.cycle},
                 {"detail", s.detail}});
  }
  return j;
}

StallKind stall_kind_from_string(const std::string& s) {
  for (auto k : {StallKind::ProducerNotReady, StallKind::MemoryFull, StallKind::InsufficientPorts}) {
    if (to_string(k) == s) return k;
  }
  throw ModelError(ErrorKind::SchemaError, "unknown stall kind '" + s + "'");
}

ojson report_to_json(const EnergyReport& r) {
  ojson j;
  j["design"] = r.design;
  j["fps"] = r.fps;
  j["status"] = r.status;
  j["total"] = r.total;
  j["analog"] = r.analog;
  j["digital"] = r.digital;
  j["comm"] = r.comm;
  j["categories"] = pairs_to_json(r.categories);
  j["components"] = ojson::array();
  for (const auto& i : r.items) {
    j["components"].push_back({{"name", i.name},
                               {"class", i.unit_class},
                               {"category", i.category},
                               {"layer", i.layer},
                               {"energy", i.energy},
                               {"details", pairs_to_json(i.details)}});
  }
  ojson t;
  t["frame_time"] = r.timing.frame_time;
  t["digital_latency"] = r.timing.digital_latency;
  t["analog_delay"] = r.timing.analog_delay;
  t["analog_slots"] = r.timing.analog_slots;
  t["analog_stages"] = r.timing.analog_stages;
  t["unit_cycles"] = ojson::object();
  for (const auto& [u, c] : r.timing.unit_cycles) t["unit_cycles"][u] = c;
  j["timing"] = t;
  j["power_density"] = ojson::array();
  for (const auto& p : r.power_density) {
    j["power_density"].push_back({{"layer", p.layer},
                                  {"energy", p.energy},
                                  {"area_mm2", p.area_mm2},
                                  {"w_per_mm2", p.power_density}});
  }
  j["stalls"] = stalls_to_json(r.stalls);
  j["checks"] = checks_to_json(r.checks);
  return j;
}

}  // namespace

EnergyReport report_from_json(std::string_view text) {
  EnergyReport r;
  try {
    const ojson j = ojson::parse(text.begin(), text.end());
    r.design = j.at("design").get<std::string>();
    r.fps = j.at("fps").get<double>();
    r.status = j.at("status").get<std::string>();
    r.total = j.at("total").get<double>();
    r.analog = j.at("analog").get<double>();
    r.digital = j.at("digital").get<double>();
    r.comm = j.at("comm").get<double>();
    r.categories = pairs_from_json(j.at("categories"));
    for (const auto& c : j.at("components")) {
      r.items.push_back({c.at("name").get<std::string>(), c.at("class").get<std::string>(),
                         c.at("category").get<std::string>(), c.at("layer").get<std::string>(),
                         c.at("energy").get<double>(), pairs_from_json(c.at("details"))});
    }
    const ojson& t = j.at("timing");
    r.timing.frame_time = t.at("frame_time").get<double>();
    r.timing.digital_latency = t.at("digital_latency").get<double>();
    r.timing.analog_delay = t.at("analog_delay").get<double>();
    r.timing.analog_slots = t.at("analog_slots").get<Count>();
    r.timing.analog_stages = t.at("analog_stages").get<std::vector<std::string>>();
    for (const auto& [u, c] : t.at("unit_cycles").items()) {
      r.timing.unit_cycles.emplace_back(u, c.get<Count>());
    }
    for (const auto& p : j.at("power_density")) {
      r.power_density.push_back({p.at("layer").get<std::string>(), p.at("energy").get<double>(),
                                 p.at("area_mm2").get<double>(), p.at("w_per_mm2").get<double>()});
    }
    for (const auto& s : j.at("stalls")) {
      r.stalls.push_back({stall_kind_from_string(s.at("kind").get<std::string>()),
                          s.at("unit").get<std::string>(), s.at("cycle").get<Count>(),
                          s.at("detail").get<std::string>()});
    }
    const ojson& c = j.at("checks");
    for (const auto& v : c.at("violations")) {
      r.checks.violations.push_back({v.at("rule").get<std::string>(),
                                     v.at("producer").get<std::string>(),
                                     v.at("consumer").get<std::string>(),
                                     v.at("message").get<std::string>(),
                                     v.at("suggested_fix").get<std::string>()});
    }
    r.checks.notes = c.at("notes").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw ModelError(ErrorKind::SchemaError, std::string("malformed report: ") + e.what());
  }
  return r;
}

// --- text formats ------------------------------------------------------------

namespace {

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string seconds(double s) {
  if (s == 0.0) return "0 s";
  const char* units[] = {"s", "ms", "us", "ns"};
  double v = s;
  int i = 0;
  while (i < 3 && std::abs(v) < 1.0) {
    v *= 1e3;
    ++i;
  }
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.4g %s", v, units[i]);
  return buf;
}

void table_checks(std::ostringstream& os, const CheckReport& checks,
                  const std::vector<StallCause>& stalls) {
  if (checks.violations.empty()) {
    os << "checks: passed\n";
  } else {
    os << "checks: " << checks.violations.size() << " violation(s)\n";
    for (const auto& v : checks.violations) {
      os << "  [" << v.rule << "] " << v.message << "\n";
      if (!v.suggested_fix.empty()) os << "      fix: " << v.suggested_fix << "\n";
    }
  }
  for (const auto& n : checks.notes) os << "  note: " << n << "\n";
  if (stalls.empty()) {
    os << "stalls: none\n";
  } else {
    os << "stalls: " << stalls.size() << "\n";
    for (const auto& s : stalls) {
      os << "  [" << to_string(s.kind) << "] at " << s.unit << ", cycle " << s.cycle << ": "
         << s.detail << "\n";
    }
  }
}

}  // namespace

std::string emit_checks(const CheckReport& checks, const std::vector<StallCause>& stalls,
                        Format format) {
  std::ostringstream os;
  switch (format) {
    case Format::Json: {
      ojson j;
      j["checks"] = checks_to_json(checks);
      j["stalls"] = stalls_to_json(stalls);
      os << j.dump(2) << "\n";
      break;
    }
    case Format::Csv:
      os << "kind,rule,producer,consumer,message,suggested_fix\n";
      for (const auto& v : checks.violations) {
        os << "violation," << csv_field(v.rule) << "," << csv_field(v.producer) << ","
           << csv_field(v.consumer) << "," << csv_field(v.message) << ","
           << csv_field(v.suggested_fix) << "\n";
      }
      for (const auto& n : checks.notes) os << "note,,,," << csv_field(n) << ",\n";
      for (const auto& s : stalls) {
        os << "stall," << to_string(s.kind) << "," << csv_field(s.unit) << ",,"
           << csv_field(s.detail) << ",\n";
      }
      break;
    case Format::Table:
      table_checks(os, checks, stalls);
      break;
  }
  return os.str();
}

std::string emit(const EnergyReport& r, Format format) {
  std::ostringstream os;
  switch (format) {
    case Format::Json:
      os << report_to_json(r).dump(2) << "\n";
      break;
    case Format::Csv:
      os << "design,component,class,category,layer,energy_j\n";
      for (const auto& i : r.items) {
        os << csv_field(r.design) << "," << csv_field(i.name) << "," << i.unit_class << ","
           << i.category << "," << csv_field(i.layer) << "," << sci(i.energy) << "\n";
      }
      os << csv_field(r.design) << ",total,total,,," << sci(r.total) << "\n";
      break;
    case Format::Table: {
      os << "design: " << (r.design.empty() ? "(unnamed)" : r.design) << "  fps: "
         << format_number(r.fps) << "  status: " << r.status << "\n\n";
      os << pad("component", 22) << pad("class", 9) << pad("category", 10) << "energy/frame\n";
      for (const auto& i : r.items) {
        os << pad(i.name, 22) << pad(i.unit_class, 9) << pad(i.category, 10)
           << format_energy(i.energy) << "\n";
      }
      os << "\n";
      os << pad("analog", 41) << format_energy(r.analog) << "\n";
      os << pad("digital", 41) << format_energy(r.digital) << "\n";
      os << pad("comm", 41) << format_energy(r.comm) << "\n";
      os << pad("total", 41) << format_energy(r.total) << "\n\n";
      os << "by category:";
      for (const auto& [c, e] : r.categories) os << "  " << c << " " << format_energy(e);
      os << "\n";
      os << "timing: T_FR " << seconds(r.timing.frame_time) << ", T_D "
         << seconds(r.timing.digital_latency) << ", T_A " << seconds(r.timing.analog_delay)
         << " x " << r.timing.analog_slots << " slot(s)\n";
      for (const auto& [u, c] : r.timing.unit_cycles) {
        os << "  " << u << ": " << c << " cycles\n";
      }
      for (const auto& p : r.power_density) {
        os << "power density " << p.layer << ": " << format_number(p.power_density)
           << " W/mm2\n";
      }
      table_checks(os, r.checks, r.stalls);
      break;
    }
  }
  return os.str();
}

std::string emit(const SweepResult& result, Format format) {
  std::ostringstream os;
  const auto& cats = report_categories();
  switch (format) {
    case Format::Json: {
      ojson j;
      j["designs"] = ojson::array();
      for (std::size_t i = 0; i < result.entries.size(); ++i) {
        const auto& e = result.entries[i];
        ojson d;
        d["label"] = e.label;
        if (e.report) {
          d["report"] = report_to_json(*e.report);
          ojson n = ojson::object();
          for (std::size_t c = 0; c < cats.size(); ++c) n[cats[c]] = result.normalized[i][c];
          d["normalized"] = n;
        } else {
          d["error"] = e.error;
        }
        j["designs"].push_back(d);
      }
      os << j.dump(2) << "\n";
      break;
    }
    case Format::Csv:
      os << "design,status,total_j";
      for (const auto& c : cats) os << "," << c << "_j";
      for (const auto& c : cats) os << "," << c << "_norm";
      os << "\n";
      for (std::size_t i = 0; i < result.entries.size(); ++i) {
        const auto& e = result.entries[i];
        os << csv_field(e.label) << ",";
        if (!e.report) {
          os << "error," << csv_field(e.error) << "\n";
          continue;
        }
        os << e.report->status << "," << sci(e.report->total);
        for (const auto& [c, v] : e.report->categories) os << "," << sci(v);
        for (double v : result.normalized[i]) os << "," << sci(v);
        os << "\n";
      }
      break;
    case Format::Table: {
      os << pad("design", 24) << pad("status", 14) << pad("total", 12);
      for (const auto& c : cats) os << pad(c, 8);
      os << "\n";
      for (std::size_t i = 0; i < result.entries.size(); ++i) {
        const auto& e = result.entries[i];
        os << pad(e.label, 24);
        if (!e.report) {
          os << "error: " << e.error << "\n";
          continue;
        }
        os << pad(e.report->status, 14) << pad(format_energy(e.report->total), 12);
        for (double v : result.normalized[i]) {
          char buf[16];
          std::snprintf(buf, sizeof buf, "%.3f", v);
          os << pad(buf, 8);
        }
        os << "\n";
      }
      os << "(category columns are fractions of the first design's total)\n";
      break;
    }
  }
  return os.str();
}

}  // namespace cis
