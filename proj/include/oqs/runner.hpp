#pragma once
// Campaign orchestration: runs a parsed config (including scans), derives the
// per-point metrics and writes the output bundle.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "oqs/campaign.hpp"
#include "oqs/config.hpp"

namespace oqs {

/// $OQS_OUTPUT_DIR when set, otherwise ./oqs-output.
std::filesystem::path default_output_dir();

/// Campaign spec of one scan point.
CampaignSpec scan_point(const CampaignConfig& config, double value);

nlohmann::json resonance_metrics(const ResonanceCampaign& r, const CampaignSpec& spec);
nlohmann::json scattering_metrics(const ScatteringCampaign& s, const CampaignSpec& spec);

struct RunResult {
  std::filesystem::path directory;
  nlohmann::json summary;
};

/// Runs the campaign and writes summary.json, CSV data and SVG plots into
/// `directory`. Library errors propagate to the caller.
RunResult run_campaign(const CampaignConfig& config, const std::filesystem::path& directory,
                       Execution mode = Execution::parallel);

/// Writes diagnostics.json for a failed run.
void write_diagnostics(const std::filesystem::path& directory, const CampaignConfig& config,
                       const std::string& kind, const std::string& message, double condition);

}  // namespace oqs
