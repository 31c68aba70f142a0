#pragma once

#include <string>

#include "rotordyn/model.hpp"

namespace rotordyn {

/// Parses the strict JSON model schema into a RotorModel and runs
/// validate_model. Unknown fields are rejected with the offending key
/// path; malformed documents raise ModelError with the parser position;
/// validation errors are aggregated into one ModelError.
RotorModel parse_model_file(const std::string& document_text);

/// Reads the file and delegates to parse_model_file.
RotorModel load_model(const std::string& path);

}  // namespace rotordyn
