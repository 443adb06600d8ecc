#pragma once
// Built-in figure-reproduction campaigns, stored as config documents so that
// user overrides merge through the same strict parser.

#include <string>
#include <vector>

#include <json.hpp>

namespace oqs {

struct PresetInfo {
  std::string name;
  std::string description;
};

std::vector<PresetInfo> list_presets();
/// Config document of a preset. Throws ConfigError for unknown names.
nlohmann::json preset_json(const std::string& name);

}  // namespace oqs
