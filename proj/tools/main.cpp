#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "oqs/config.hpp"
#include "oqs/errors.hpp"
#include "oqs/presets.hpp"
#include "oqs/runner.hpp"

namespace {

constexpr int kInvalidConfig = 2;
constexpr int kNumericFailure = 3;

std::filesystem::path output_dir(const std::string& flag, const oqs::CampaignConfig& c, const std::string& fallback) {
  if (!flag.empty()) return flag;
  if (!c.output_dir.empty()) return c.output_dir;
  return oqs::default_output_dir() / fallback;
}

int execute(const oqs::CampaignConfig& c, const std::filesystem::path& dir, bool serial) {
  try {
    const auto r = oqs::run_campaign(c, dir, serial ? oqs::Execution::serial : oqs::Execution::parallel);
    std::cout << "wrote " << r.directory.string() << " (config " << r.summary["config_hash"].get<std::string>()
              << ")\n";
    return 0;
  } catch (const oqs::NumericError& e) {
    oqs::write_diagnostics(dir, c, "numeric", e.what(), e.condition());
    std::cerr << "numeric failure: " << e.what() << "\n  see " << (dir / "diagnostics.json").string() << "\n";
    return kNumericFailure;
  } catch (const oqs::ConsistencyError& e) {
    oqs::write_diagnostics(dir, c, "consistency", e.what(), 0.0);
    std::cerr << "consistency failure: " << e.what() << "\n";
    return kNumericFailure;
  } catch (const oqs::RegimeError& e) {
    oqs::write_diagnostics(dir, c, "regime", e.what(), 0.0);
    std::cerr << "regime failure: " << e.what() << "\n";
    return kNumericFailure;
  } catch (const oqs::StructuralError& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return kInvalidConfig;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Open quantum system resonance and transport campaigns"};
  app.require_subcommand(1);
  bool serial = false;
  app.add_flag("--serial", serial, "Use the single-threaded reference path");

  std::string config_path, out_dir;
  auto* run = app.add_subcommand("run", "Run a campaign from a JSON config");
  run->add_option("config", config_path, "Config file")->required();
  run->add_option("--out", out_dir, "Output directory");

  std::string preset_name;
  std::optional<std::uint64_t> seed;
  std::optional<long long> realizations;
  auto* preset = app.add_subcommand("preset", "Run a built-in figure preset");
  preset->add_option("name", preset_name, "Preset name")->required();
  preset->add_option("--out", out_dir, "Output directory");
  preset->add_option("--seed", seed, "Base seed");
  preset->add_option("--realizations", realizations, "Realization count")->check(CLI::PositiveNumber);

  auto* validate = app.add_subcommand("validate", "Print the normalized config or the first error");
  validate->add_option("config", config_path, "Config file")->required();

  auto* list = app.add_subcommand("list-presets", "List the built-in presets");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*list) {
      for (const auto& p : oqs::list_presets()) std::cout << p.name << "\t" << p.description << "\n";
      return 0;
    }
    if (*validate) {
      const auto c = oqs::load_config(config_path);
      nlohmann::json j = oqs::normalized_json(c);
      j["config_hash"] = oqs::config_hash(c);
      if (!c.overrides.empty()) j["overrides"] = c.overrides;
      std::cout << j.dump(2) << "\n";
      return 0;
    }
    if (*run) {
      const auto c = oqs::load_config(config_path);
      return execute(c, output_dir(out_dir, c, c.preset.empty() ? "run" : c.preset), serial);
    }
    if (*preset) {
      nlohmann::json overrides = nlohmann::json::object();
      if (seed) overrides["seed"] = *seed;
      if (realizations) overrides["realizations"] = *realizations;
      const auto c = oqs::config_from_preset(preset_name, overrides);
      return execute(c, output_dir(out_dir, c, preset_name), serial);
    }
  } catch (const oqs::ConfigError& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return kInvalidConfig;
  } catch (const oqs::StructuralError& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return kInvalidConfig;
  }
  return 0;
}
