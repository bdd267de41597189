#pragma once

#include <string>

#include "kts/boosting.hpp"

namespace kts {

/// Current model file schema version. Loaders reject newer versions.
inline constexpr int kModelSchemaVersion = 1;

/// Serialize a cascade to versioned JSON. Floating-point values are written
/// in shortest round-trip form, so save -> load reproduces every coefficient
/// bit-exactly.
std::string model_to_json(const CascadeModel& model);

/// Parse a model from its JSON form; throws ParseError on malformed input
/// or an unsupported schema version.
CascadeModel model_from_json(const std::string& text);

/// Atomic save (temp file + rename).
void save_model(const CascadeModel& model, const std::string& path);

/// Load and validate a model file.
CascadeModel load_model(const std::string& path);

}  // namespace kts
