#pragma once

#include <string>

#include <nlohmann/json.hpp>

namespace emosent {

/// Pretty-prints JSON (2-space indent, keys in insertion order) with every
/// floating-point number written at 17 significant digits. Non-finite
/// numbers become null.
std::string dump_json17(const nlohmann::ordered_json& value);

}  // namespace emosent
