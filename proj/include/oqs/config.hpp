#pragma once
// Campaign configuration: strict JSON schema, preset merging, normalization
// with derived quantities echoed, and the config hash stamped on outputs.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "oqs/campaign.hpp"

namespace oqs {

inline constexpr const char* kToolVersion = "0.1.0";

enum class CampaignKind { resonances, scattering, chain, orbital };

std::string to_string(CampaignKind kind);

/// Optional one-parameter sweep of the base campaign.
struct ScanSpec {
  /// "", "kappa" (all channels), "lambda" (TBRE strength over d) or "channels" (M at fixed kappa).
  std::string axis;
  std::vector<double> values;
};

struct LogRange {
  double lo = 0.01;
  double hi = 100.0;
  Index points = 41;
};

struct ChainCampaign {
  Index sites = 100;
  double hopping = 1.0;
  double disorder = 0.0;
  std::vector<double> q = {1.0};
  LogRange gamma{0.1, 100.0, 41};
  /// Energies per gamma for the tau curves (0 skips them).
  Index energies = 0;
};

struct OrbitalCampaign {
  int particles = 4;
  int orbitals = 8;
  double sp_spacing = 1.0;
  double mixing = 0.1;
  LogRange gamma{0.01, 1000.0, 61};
};

struct CampaignConfig {
  std::string preset;
  CampaignKind kind = CampaignKind::resonances;
  CampaignSpec campaign;
  ScanSpec scan;
  ChainCampaign chain;
  OrbitalCampaign orbital;
  ScatteringOptions scattering;
  Index keep_poles = 0;
  bool svg = true;
  std::string output_dir;
  std::string matrix_file;
  /// User-supplied keys that replaced preset values.
  nlohmann::json overrides = nlohmann::json::object();
};

/// Parses a config document. `source` names the text for messages, and line
/// numbers refer to `text`. Throws ConfigError on syntax errors, unknown keys,
/// bad values or inconsistent kappa/gamma.
CampaignConfig parse_config(const std::string& text, const std::string& source = "config");
CampaignConfig load_config(const std::filesystem::path& path);
/// Applies a JSON object of overrides on top of a preset.
CampaignConfig config_from_preset(const std::string& name, const nlohmann::json& overrides);

/// Every field with defaults materialized, plus a "derived" block (N, D,
/// gamma and kappa per channel). output_dir is left out.
nlohmann::json normalized_json(const CampaignConfig& config);
/// FNV-1a of the canonical dump of normalized_json, as 16 hex digits.
std::string config_hash(const CampaignConfig& config);
std::uint64_t fnv1a(const std::string& bytes);

}  // namespace oqs
