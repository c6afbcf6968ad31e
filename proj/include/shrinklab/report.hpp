#pragma once

#include <json.hpp>
#include <string>

namespace shrinklab {

using Json = nlohmann::json;  // object keys serialize sorted

// Reports are serialized with sorted keys and a fixed layout so that equal
// configs produce byte-identical files.
std::string serialize_report(const nlohmann::json& report);
void write_report(const nlohmann::json& report, const std::string& path);

// FNV-1a over the canonical serialization; embedded in every report.
std::string config_hash(const nlohmann::json& config);

}  // namespace shrinklab
