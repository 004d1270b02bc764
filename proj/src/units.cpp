#include "cismodel/units.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <utility>

#include "cismodel/error.hpp"

namespace cis {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::InvalidShape: return "InvalidShape";
    case ErrorKind::DuplicateStageName: return "DuplicateStageName";
    case ErrorKind::UnresolvedPredecessor: return "UnresolvedPredecessor";
    case ErrorKind::CycleDetected: return "CycleDetected";
    case ErrorKind::NonDigitalUnit: return "NonDigitalUnit";
    case ErrorKind::DigitalTooSlow: return "DigitalTooSlow";
    case ErrorKind::OverCommitted: return "OverCommitted";
    case ErrorKind::EmptyFoMTable: return "EmptyFoMTable";
    case ErrorKind::UnknownNode: return "UnknownNode";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::SchemaError: return "SchemaError";
  }
  return "Unknown";
}

DigitalTooSlowError::DigitalTooSlowError(double digital_latency, double frame_time)
    : ModelError(ErrorKind::DigitalTooSlow,
                 "digital latency " + format_number(digital_latency, 6) +
                     " s does not fit in frame time " + format_number(frame_time, 6) +
                     " s; re-design the digital pipeline"),
      digital_latency_(digital_latency),
      frame_time_(frame_time) {}

std::string_view unit_symbol(Unit unit) {
  switch (unit) {
    case Unit::Joule: return "J";
    case Unit::Farad: return "F";
    case Unit::Volt: return "V";
    case Unit::Ampere: return "A";
    case Unit::Hertz: return "Hz";
    case Unit::Second: return "s";
    case Unit::Watt: return "W";
    case Unit::Kelvin: return "K";
    case Unit::Byte: return "B";
    case Unit::JoulePerByte: return "J/B";
    case Unit::Nanometer: return "m";
    case Unit::SquareMm: return "mm2";
  }
  return "";
}

namespace {

[[noreturn]] void bad_quantity(std::string_view text, Unit expected, const char* why) {
  throw ModelError(ErrorKind::SchemaError,
                   "cannot read '" + std::string(text) + "' as a quantity in '" +
                       std::string(unit_symbol(expected)) + "': " + why);
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Returns the multiplier for an SI prefix, or NaN if unknown.
double prefix_scale(std::string_view prefix) {
  static const std::array<std::pair<std::string_view, double>, 12> kPrefixes{{
      {"", 1.0},    {"a", 1e-18}, {"f", 1e-15}, {"p", 1e-12}, {"n", 1e-9}, {"u", 1e-6},
      {"\xc2\xb5", 1e-6},  // micro sign
      {"m", 1e-3},  {"k", 1e3},   {"M", 1e6},   {"G", 1e9},   {"T", 1e12},
  }};
  for (const auto& [p, s] : kPrefixes) {
    if (p == prefix) return s;
  }
  return std::nan("");
}

}  // namespace

double parse_quantity(std::string_view text, Unit expected) {
  std::string_view s = trim(text);
  if (s.empty()) bad_quantity(text, expected, "empty");

  // Leading number.
  double value = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc()) bad_quantity(text, expected, "no leading number");
  std::string_view rest = trim(std::string_view(ptr, static_cast<std::size_t>(last - ptr)));
  if (rest.empty()) bad_quantity(text, expected, "missing unit annotation");

  if (expected == Unit::SquareMm) {
    if (rest != "mm2" && rest != "mm^2") bad_quantity(text, expected, "expected mm2");
    return value;
  }
  if (expected == Unit::Byte) {
    static const std::array<std::pair<std::string_view, double>, 7> kBytes{{
        {"B", 1.0}, {"kB", 1e3}, {"KB", 1e3}, {"MB", 1e6}, {"GB", 1e9},
        {"KiB", 1024.0}, {"MiB", 1024.0 * 1024.0},
    }};
    for (const auto& [sym, scale] : kBytes) {
      if (rest == sym) return value * scale;
    }
    bad_quantity(text, expected, "expected a byte unit (B, KB, MB, KiB, MiB)");
  }

  const std::string_view symbol = unit_symbol(expected);
  if (!ends_with(rest, symbol)) bad_quantity(text, expected, "wrong unit");
  std::string_view prefix = rest.substr(0, rest.size() - symbol.size());
  const double scale = prefix_scale(prefix);
  if (std::isnan(scale)) bad_quantity(text, expected, "unknown SI prefix");
  if (expected == Unit::Nanometer) {
    if (prefix == "n") return value;
    if (prefix == "u" || prefix == "\xc2\xb5") return value * 1e3;
    return value * scale * 1e9;
  }
  return value * scale;
}

std::string format_energy(double joules) {
  if (joules == 0.0) return "0 J";
  static const std::array<std::pair<const char*, double>, 6> kScales{{
      {"J", 1.0}, {"mJ", 1e-3}, {"uJ", 1e-6}, {"nJ", 1e-9}, {"pJ", 1e-12}, {"fJ", 1e-15},
  }};
  const double magnitude = std::fabs(joules);
  for (const auto& [name, scale] : kScales) {
    if (magnitude / scale >= 0.1 || scale == 1e-15) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.2f %s", joules / scale, name);
      return buf;
    }
  }
  return {};
}

std::string format_number(double value, int significant) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", significant, value);
  return buf;
}

}  // namespace cis
