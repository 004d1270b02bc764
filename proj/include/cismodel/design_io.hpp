#pragma once

#include <string>
#include <string_view>

#include "cismodel/hardware.hpp"

namespace cis {

// Parses a design document (JSON with comments, see docs/schema.md).
// Throws ParseError (with line and section) for malformed text and
// ModelError(SchemaError) for missing or unknown keys, bare numbers where a
// unit is required, and mappings that name unknown stages.
Design load_design(std::string_view text);

// Reads and parses a file; the error message carries the path.
Design load_design_file(const std::string& path);

}  // namespace cis
