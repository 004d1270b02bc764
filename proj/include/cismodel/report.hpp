#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cismodel/checks.hpp"
#include "cismodel/error.hpp"
#include "cismodel/hardware.hpp"
#include "cismodel/timing.hpp"

namespace cis {

// One hardware unit's line in the breakdown.
struct ReportItem {
  std::string name;
  std::string unit_class;  // analog | digital | memory | link
  std::string category;    // SEN | MEM | COMP | MIPI | uTSV
  std::string layer;
  double energy = 0.0;     // J/frame
  std::vector<std::pair<std::string, double>> details;

  friend bool operator==(const ReportItem&, const ReportItem&) = default;
};

struct LayerPower {
  std::string layer;
  double energy = 0.0;    // J/frame
  double area_mm2 = 0.0;
  double power_density = 0.0;  // W/mm^2

  friend bool operator==(const LayerPower&, const LayerPower&) = default;
};

struct TimingSummary {
  double frame_time = 0.0;
  double digital_latency = 0.0;
  double analog_delay = 0.0;
  Count analog_slots = 0;
  std::vector<std::string> analog_stages;
  std::vector<std::pair<std::string, Count>> unit_cycles;

  friend bool operator==(const TimingSummary&, const TimingSummary&) = default;
};

inline const std::vector<std::string>& report_categories() {
  static const std::vector<std::string> k = {"SEN", "MEM", "COMP", "MIPI", "uTSV"};
  return k;
}

struct EnergyReport {
  std::string design;
  double fps = 0.0;
  std::string status;  // ok | stalled | check_failed
  CheckReport checks;
  std::vector<StallCause> stalls;
  TimingSummary timing;
  std::vector<ReportItem> items;
  double analog = 0.0;
  double digital = 0.0;
  double comm = 0.0;
  double total = 0.0;  // analog + digital + comm
  std::vector<std::pair<std::string, double>> categories;
  std::vector<LayerPower> power_density;

  friend bool operator==(const EnergyReport&, const EnergyReport&) = default;
};

// checks -> timing -> analog/digital/comm energy -> report. A failed check
// yields a zero-energy report carrying the violations. Throws
// DigitalTooSlowError when the digital side alone misses the frame time.
EnergyReport run(const Design& design, double fps);

struct SweepEntry {
  std::string label;
  std::optional<EnergyReport> report;
  std::string error;  // set when the design could not be evaluated
  std::optional<ErrorKind> error_kind;
};

struct SweepResult {
  std::vector<SweepEntry> entries;
  // entries x categories, each divided by the first evaluated design's total.
  std::vector<std::vector<double>> normalized;
};

// (label, document text) pairs, evaluated concurrently; one failing design
// does not affect the others.
SweepResult sweep(const std::vector<std::pair<std::string, std::string>>& documents, double fps);

enum class Format { Table, Csv, Json };

Format format_from_string(std::string_view text);
std::string emit(const EnergyReport& report, Format format);
std::string emit(const SweepResult& result, Format format);
// Text form of `check` results (violations, notes, stalls).
std::string emit_checks(const CheckReport& checks, const std::vector<StallCause>& stalls,
                        Format format);

// Inverse of emit(report, Format::Json).
EnergyReport report_from_json(std::string_view text);

}  // namespace cis
