#pragma once

#include <string>
#include <string_view>

namespace cis {

// CODATA 2018 exact value.
inline constexpr double kBoltzmann = 1.380649e-23;  // J/K
inline constexpr double kDefaultTemperature = 300.0;  // K
inline constexpr double kPi = 3.14159265358979323846;

// Physical dimensions accepted in design documents. Every quantity in a
// document carries its unit symbol; the parser rejects bare numbers.
enum class Unit {
  Joule,          // "J"
  Farad,          // "F"
  Volt,           // "V"
  Ampere,         // "A"
  Hertz,          // "Hz"
  Second,         // "s"
  Watt,           // "W"
  Kelvin,         // "K"
  Byte,           // "B"; decimal prefixes, plus KiB/MiB/GiB
  JoulePerByte,   // "J/B"
  Nanometer,      // "m" with a prefix, returned in nanometers
  SquareMm,       // "mm2", returned in mm^2
};

std::string_view unit_symbol(Unit unit);

// Parses "<number><SI prefix><symbol>" (e.g. "100fF", "33.3ms", "2.5V") into
// the base unit. Throws ModelError(SchemaError) on bare numbers, unknown
// prefixes, or a different unit symbol.
double parse_quantity(std::string_view text, Unit expected);

// Human-readable energy with an auto-scaled prefix: 6e-4 -> "0.60 mJ".
std::string format_energy(double joules);

// Generic "%.*g" helper used by table output.
std::string format_number(double value, int significant = 4);

}  // namespace cis
