#include "oqs/presets.hpp"

#include <map>

#include "oqs/errors.hpp"

namespace oqs {

using nlohmann::json;

namespace {

struct Preset {
  const char* description;
  const char* document;
};

const std::map<std::string, Preset>& table() {
  static const std::map<std::string, Preset> presets = {
      {"fig1",
       {"pole trajectories of 4 fermions in 8 levels with the top orbital open",
        R"({"campaign": "orbital",
            "orbital": {"particles": 4, "orbitals": 8, "sp_spacing": 1.0, "mixing": 0.1,
                        "gamma": {"lo": 0.01, "hi": 1000.0, "points": 61}}})"}},
      {"fig2",
       {"complex-plane pole clouds at M/N = 0.25 over a coupling ladder",
        R"({"campaign": "resonances",
            "ensemble": {"kind": "goe", "dim": 40},
            "channels": {"count": 10, "kappa": 0.1},
            "scan": {"axis": "kappa", "values": [0.1, 0.3, 1.0, 3.0, 10.0]},
            "realizations": 20, "keep_poles": 20, "window": 1.0})"}},
      {"fig6",
       {"spacing histograms for one channel, N = 160, kappa in {0.1, 1, 5, 50}",
        R"({"campaign": "resonances",
            "ensemble": {"kind": "goe", "dim": 160},
            "channels": {"count": 1},
            "scan": {"axis": "kappa", "values": [0.1, 1.0, 5.0, 50.0]},
            "realizations": 50, "window": 0.5})"}},
      {"fig7",
       {"P(0) against kappa for GOE with one channel",
        R"({"campaign": "resonances",
            "ensemble": {"kind": "goe", "dim": 160},
            "channels": {"count": 1},
            "scan": {"axis": "kappa", "values": [0.05, 0.1, 0.2, 0.5, 0.7, 1.0, 1.5, 2.0, 5.0, 10.0, 50.0]},
            "realizations": 100})"}},
      {"fig8",
       {"chi-square nu of one-channel widths against kappa",
        R"({"campaign": "resonances",
            "ensemble": {"kind": "goe", "dim": 160},
            "channels": {"count": 1},
            "scan": {"axis": "kappa", "values": [0.01, 0.02, 0.05, 0.1, 0.2, 0.3, 0.5]},
            "realizations": 200})"}},
      {"fig9",
       {"elastic fluctuating cross section against lambda, TBRE, M = 10, kappa = 0.8",
        R"({"campaign": "scattering",
            "ensemble": {"kind": "tbre", "particles": 6, "orbitals": 12},
            "channels": {"count": 10, "kappa": 0.8},
            "scan": {"axis": "lambda", "values": [0.0, 0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0]},
            "energy_grid": {"lo": -20.0, "hi": 20.0, "points": 20},
            "realizations": 50})"}},
      {"fig10",
       {"normalized width variance against the number of channels, kappa = 0.5",
        R"({"campaign": "resonances",
            "ensemble": {"kind": "goe", "dim": 200},
            "channels": {"count": 1, "kappa": 0.5},
            "scan": {"axis": "channels", "values": [1, 2, 4, 6, 8, 10, 15, 20]},
            "realizations": 100, "drop_broad": 0})"}},
      {"fig11",
       {"conductance variance against lambda, 7 fermions in 14 orbitals, 20 channels",
        R"({"campaign": "scattering",
            "ensemble": {"kind": "tbre", "particles": 7, "orbitals": 14, "block_size": 1000},
            "channels": {"count": 20, "kappa": 1.0},
            "scan": {"axis": "lambda", "values": [0.0, 0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0]},
            "energy_grid": {"lo": -40.0, "hi": 40.0, "points": 8},
            "realizations": 20})"}},
      {"fig12",
       {"integrated chain transmission against gamma, N = 100, q in {1, 10, 25}",
        R"({"campaign": "chain",
            "chain": {"sites": 100, "hopping": 1.0, "q": [1, 10, 25],
                      "gamma": {"lo": 0.1, "hi": 100.0, "points": 41}}})"}},
  };
  return presets;
}

}  // namespace

std::vector<PresetInfo> list_presets() {
  std::vector<PresetInfo> out;
  for (const auto& [name, p] : table()) out.push_back({name, p.description});
  return out;
}

json preset_json(const std::string& name) {
  const auto it = table().find(name);
  if (it == table().end()) throw ConfigError("unknown preset '" + name + "'");
  return json::parse(it->second.document);
}

}  // namespace oqs
