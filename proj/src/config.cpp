#include "oqs/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "oqs/errors.hpp"
#include "oqs/presets.hpp"

namespace oqs {

using nlohmann::json;

std::string to_string(CampaignKind kind) {
  switch (kind) {
    case CampaignKind::resonances: return "resonances";
    case CampaignKind::scattering: return "scattering";
    case CampaignKind::chain: return "chain";
    case CampaignKind::orbital: return "orbital";
  }
  return "unknown";
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

int line_at(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

// Walks the document with the source text at hand so messages can point at
// the line of the offending key.
class Reader {
 public:
  Reader(const std::string& text, std::string source) : text_(text), source_(std::move(source)) {}

  int line_of(const std::string& key) const {
    const auto pos = text_.find("\"" + key + "\"");
    return pos == std::string::npos ? 0 : line_at(text_, pos);
  }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    throw ConfigError(source_ + ": " + what, line_of(key));
  }

  void allow(const json& obj, const std::string& where, std::initializer_list<const char*> keys) const {
    if (!obj.is_object()) fail(where, "'" + where + "' must be an object");
    const std::set<std::string> ok(keys.begin(), keys.end());
    for (const auto& [k, v] : obj.items())
      if (!ok.count(k)) fail(k, "unknown key '" + k + "' in " + where);
  }

  double number(const json& obj, const std::string& key, double fallback) const {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number()) fail(key, "'" + key + "' must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(key, "'" + key + "' must be finite");
    return x;
  }

  Index integer(const json& obj, const std::string& key, Index fallback, Index min = 0) const {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_integer()) fail(key, "'" + key + "' must be an integer");
    const auto x = v.get<std::int64_t>();
    if (x < min) fail(key, "'" + key + "' must be >= " + std::to_string(min));
    return static_cast<Index>(x);
  }

  std::uint64_t seed(const json& obj, const std::string& key, std::uint64_t fallback) const {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0))
      fail(key, "'" + key + "' must be a non-negative integer");
    return v.get<std::uint64_t>();
  }

  std::string string(const json& obj, const std::string& key, const std::string& fallback) const {
    if (!obj.contains(key)) return fallback;
    if (!obj.at(key).is_string()) fail(key, "'" + key + "' must be a string");
    return obj.at(key).get<std::string>();
  }

  bool boolean(const json& obj, const std::string& key, bool fallback) const {
    if (!obj.contains(key)) return fallback;
    if (!obj.at(key).is_boolean()) fail(key, "'" + key + "' must be true or false");
    return obj.at(key).get<bool>();
  }

  std::vector<double> numbers(const json& obj, const std::string& key) const {
    const json& v = obj.at(key);
    std::vector<double> out;
    if (v.is_number()) {
      out.push_back(v.get<double>());
    } else if (v.is_array()) {
      for (const auto& x : v) {
        if (!x.is_number()) fail(key, "'" + key + "' must hold numbers");
        out.push_back(x.get<double>());
      }
    } else {
      fail(key, "'" + key + "' must be a number or an array of numbers");
    }
    return out;
  }

  LogRange range(const json& obj, const std::string& key, LogRange r) const {
    if (!obj.contains(key)) return r;
    const json& g = obj.at(key);
    allow(g, key, {"lo", "hi", "points"});
    r.lo = number(g, "lo", r.lo);
    r.hi = number(g, "hi", r.hi);
    r.points = integer(g, "points", r.points, 1);
    if (!(r.lo > 0.0 && r.hi >= r.lo)) fail(key, "'" + key + "' needs 0 < lo <= hi");
    return r;
  }

 private:
  const std::string& text_;
  std::string source_;
};

CampaignKind kind_from(const Reader& rd, const std::string& name) {
  if (name == "resonances") return CampaignKind::resonances;
  if (name == "scattering") return CampaignKind::scattering;
  if (name == "chain") return CampaignKind::chain;
  if (name == "orbital") return CampaignKind::orbital;
  rd.fail("campaign", "unknown campaign '" + name + "' (resonances, scattering, chain, orbital)");
}

void read_ensemble(const Reader& rd, const json& e, CampaignConfig& c, const std::filesystem::path& base) {
  rd.allow(e, "ensemble", {"kind", "dim", "spacing", "particles", "orbitals", "sp_spacing", "strength", "lambda",
                           "full_limit", "block_size", "matrix_file"});
  EnsembleSpec& s = c.campaign.ensemble;
  try {
    s.kind = ensemble_kind_from_string(rd.string(e, "kind", "goe"));
  } catch (const StructuralError& err) {
    rd.fail("kind", err.what());
  }
  s.dim = rd.integer(e, "dim", s.dim, 1);
  s.spacing = rd.number(e, "spacing", s.spacing);
  if (!(s.spacing > 0.0)) rd.fail("spacing", "'spacing' must be positive");
  s.particles = static_cast<int>(rd.integer(e, "particles", s.particles, 1));
  s.orbitals = static_cast<int>(rd.integer(e, "orbitals", s.orbitals, 2));
  s.sp_spacing = rd.number(e, "sp_spacing", s.sp_spacing);
  if (!(s.sp_spacing > 0.0)) rd.fail("sp_spacing", "'sp_spacing' must be positive");
  s.strength = rd.number(e, "strength", s.strength);
  if (e.contains("lambda")) {
    const double from_lambda = rd.number(e, "lambda", 0.0) * s.sp_spacing;
    if (e.contains("strength") && std::abs(from_lambda - s.strength) > 1e-12 * std::max(1.0, std::abs(s.strength)))
      rd.fail("lambda", "'lambda' and 'strength' disagree (strength = lambda * sp_spacing)");
    s.strength = from_lambda;
  }
  if (s.strength < 0.0) rd.fail("strength", "'strength' must be non-negative");
  s.full_limit = rd.integer(e, "full_limit", s.full_limit, 1);
  s.block_size = rd.integer(e, "block_size", s.block_size, 1);
  if (s.kind == EnsembleKind::tbre) {
    if (s.orbitals > 16) rd.fail("orbitals", "'orbitals' must be <= 16");
    if (s.particles >= s.orbitals) rd.fail("particles", "'particles' must be below 'orbitals'");
  }
  c.matrix_file = rd.string(e, "matrix_file", "");
  if (s.kind == EnsembleKind::explicit_matrix) {
    if (c.matrix_file.empty()) rd.fail("kind", "explicit ensemble needs 'matrix_file'");
    std::filesystem::path p(c.matrix_file);
    if (p.is_relative()) p = base / p;
    try {
      s.explicit_h = load_matrix_csv(p);
    } catch (const StructuralError& err) {
      rd.fail("matrix_file", err.what());
    }
    if (s.explicit_h != s.explicit_h.transpose())
      rd.fail("matrix_file", "explicit matrix must be symmetric");
    s.dim = s.explicit_h.rows();
  }
}

void read_channels(const Reader& rd, const json& ch, CampaignConfig& c) {
  rd.allow(ch, "channels", {"count", "kappa", "gamma"});
  const EnsembleSpec& s = c.campaign.ensemble;
  const Index count = rd.integer(ch, "count", 0, 1);
  auto expand = [&](std::vector<double> v, const char* key) {
    if (v.size() == 1 && count > 1) v.assign(static_cast<std::size_t>(count), v.front());
    if (count > 0 && static_cast<Index>(v.size()) != count)
      rd.fail(key, std::string("'") + key + "' has " + std::to_string(v.size()) + " entries but count is " +
                       std::to_string(count));
    for (double x : v)
      if (!(x >= 0.0) || !std::isfinite(x)) rd.fail(key, std::string("'") + key + "' must be non-negative");
    return v;
  };
  std::vector<double> kappa, gamma;
  if (ch.contains("kappa")) kappa = expand(rd.numbers(ch, "kappa"), "kappa");
  if (ch.contains("gamma")) {
    gamma = expand(rd.numbers(ch, "gamma"), "gamma");
    if (s.kind == EnsembleKind::tbre) rd.fail("gamma", "TBRE spacing is estimated per realization; give 'kappa'");
  }
  const Index n = ensemble_dim(s);
  if (!gamma.empty()) {
    std::vector<double> derived;
    for (double g : gamma) derived.push_back(coupling_from_width(g, n, s.spacing));
    if (!kappa.empty()) {
      if (kappa.size() != derived.size()) rd.fail("gamma", "'kappa' and 'gamma' list different channel counts");
      for (std::size_t i = 0; i < kappa.size(); ++i)
        if (std::abs(kappa[i] - derived[i]) > 1e-9 * std::max(1.0, kappa[i]))
          rd.fail("gamma", "'kappa' and 'gamma' disagree for channel " + std::to_string(i) + ": gamma " +
                               std::to_string(gamma[i]) + " means kappa " + std::to_string(derived[i]));
    }
    kappa = derived;
  }
  if (kappa.empty()) kappa.assign(static_cast<std::size_t>(std::max<Index>(count, 1)), 1.0);
  c.campaign.kappa = kappa;
}

CampaignConfig parse_object(const json& doc, const Reader& rd, const std::filesystem::path& base) {
  rd.allow(doc, "config", {"preset", "campaign", "ensemble", "channels", "energy_grid", "realizations", "seed",
                           "window", "drop_broad", "threads", "scan", "scattering", "keep_poles", "svg",
                           "output_dir", "chain", "orbital"});
  CampaignConfig c;
  c.preset = rd.string(doc, "preset", "");
  c.kind = kind_from(rd, rd.string(doc, "campaign", "resonances"));
  if (doc.contains("ensemble")) read_ensemble(rd, doc.at("ensemble"), c, base);
  if (doc.contains("channels")) {
    read_channels(rd, doc.at("channels"), c);
  } else {
    read_channels(rd, json::object(), c);
  }

  CampaignSpec& cs = c.campaign;
  if (doc.contains("energy_grid")) {
    const json& g = doc.at("energy_grid");
    rd.allow(g, "energy_grid", {"lo", "hi", "points"});
    cs.grid.lo = rd.number(g, "lo", cs.grid.lo);
    cs.grid.hi = rd.number(g, "hi", cs.grid.hi);
    cs.grid.points = rd.integer(g, "points", cs.grid.points, 1);
    if (!(cs.grid.hi > cs.grid.lo)) rd.fail("energy_grid", "'energy_grid' needs hi > lo");
  }
  cs.realizations = rd.integer(doc, "realizations", cs.realizations, 1);
  cs.ensemble.seed = rd.seed(doc, "seed", cs.ensemble.seed);
  cs.window = rd.number(doc, "window", cs.window);
  if (!(cs.window > 0.0 && cs.window <= 1.0)) rd.fail("window", "'window' must be in (0, 1]");
  cs.drop_broad = rd.integer(doc, "drop_broad", cs.drop_broad, -1);
  cs.threads = static_cast<int>(rd.integer(doc, "threads", cs.threads, 0));

  if (doc.contains("scan")) {
    const json& s = doc.at("scan");
    rd.allow(s, "scan", {"axis", "values"});
    c.scan.axis = rd.string(s, "axis", "");
    if (c.scan.axis != "kappa" && c.scan.axis != "lambda" && c.scan.axis != "channels" && !c.scan.axis.empty())
      rd.fail("axis", "scan axis must be kappa, lambda or channels");
    if (s.contains("values")) c.scan.values = rd.numbers(s, "values");
    if (!c.scan.axis.empty() && c.scan.values.empty()) rd.fail("scan", "'scan' needs 'values'");
    for (double v : c.scan.values)
      if (!(v >= 0.0)) rd.fail("values", "scan values must be non-negative");
    if (c.scan.axis == "lambda" && cs.ensemble.kind != EnsembleKind::tbre)
      rd.fail("axis", "a lambda scan needs the tbre ensemble");
    if (c.scan.axis == "channels")
      for (double v : c.scan.values)
        if (v < 1.0 || v != std::floor(v)) rd.fail("values", "channel counts must be positive integers");
  }
  if (doc.contains("scattering")) {
    const json& s = doc.at("scattering");
    rd.allow(s, "scattering", {"max_lag", "max_pairs", "sample_realizations"});
    c.scattering.max_lag = rd.integer(s, "max_lag", c.scattering.max_lag);
    c.scattering.max_pairs = rd.integer(s, "max_pairs", c.scattering.max_pairs);
    c.scattering.sample_realizations = rd.integer(s, "sample_realizations", c.scattering.sample_realizations);
  }
  c.keep_poles = rd.integer(doc, "keep_poles", c.keep_poles);
  c.svg = rd.boolean(doc, "svg", c.svg);
  c.output_dir = rd.string(doc, "output_dir", "");

  if (doc.contains("chain")) {
    const json& s = doc.at("chain");
    rd.allow(s, "chain", {"sites", "hopping", "disorder", "q", "gamma", "energies"});
    c.chain.sites = rd.integer(s, "sites", c.chain.sites, 2);
    c.chain.hopping = rd.number(s, "hopping", c.chain.hopping);
    if (!(c.chain.hopping > 0.0)) rd.fail("hopping", "'hopping' must be positive");
    c.chain.disorder = rd.number(s, "disorder", c.chain.disorder);
    if (c.chain.disorder < 0.0) rd.fail("disorder", "'disorder' must be non-negative");
    if (s.contains("q")) c.chain.q = rd.numbers(s, "q");
    for (double q : c.chain.q)
      if (!(q > 0.0)) rd.fail("q", "'q' must be positive");
    c.chain.gamma = rd.range(s, "gamma", c.chain.gamma);
    c.chain.energies = rd.integer(s, "energies", c.chain.energies);
  }
  if (doc.contains("orbital")) {
    const json& s = doc.at("orbital");
    rd.allow(s, "orbital", {"particles", "orbitals", "sp_spacing", "mixing", "gamma"});
    c.orbital.particles = static_cast<int>(rd.integer(s, "particles", c.orbital.particles, 1));
    c.orbital.orbitals = static_cast<int>(rd.integer(s, "orbitals", c.orbital.orbitals, 2));
    if (c.orbital.particles >= c.orbital.orbitals || c.orbital.orbitals > 12)
      rd.fail("orbitals", "orbital model needs particles < orbitals <= 12");
    c.orbital.sp_spacing = rd.number(s, "sp_spacing", c.orbital.sp_spacing);
    c.orbital.mixing = rd.number(s, "mixing", c.orbital.mixing);
    if (c.orbital.mixing < 0.0) rd.fail("mixing", "'mixing' must be non-negative");
    c.orbital.gamma = rd.range(s, "gamma", c.orbital.gamma);
  }
  return c;
}

json parse_text(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(source + ": " + e.what(), line_at(text, e.byte > 0 ? e.byte - 1 : 0));
  }
}

CampaignConfig from_document(json doc, const std::string& text, const std::string& source,
                             const std::filesystem::path& base) {
  if (!doc.is_object()) throw ConfigError(source + ": top level must be an object", 1);
  if (doc.contains("preset")) {
    if (!doc.at("preset").is_string()) Reader(text, source).fail("preset", "'preset' must be a string");
    const std::string name = doc.at("preset").get<std::string>();
    json merged;
    try {
      merged = preset_json(name);
    } catch (const ConfigError& e) {
      Reader(text, source).fail("preset", e.what());
    }
    json overrides = doc;
    overrides.erase("preset");
    merged.merge_patch(overrides);
    merged["preset"] = name;
    CampaignConfig c = parse_object(merged, Reader(text, source), base);
    c.overrides = overrides;
    return c;
  }
  return parse_object(doc, Reader(text, source), base);
}

}  // namespace

CampaignConfig parse_config(const std::string& text, const std::string& source) {
  return from_document(parse_text(text, source), text, source, std::filesystem::current_path());
}

CampaignConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  const auto base = path.has_parent_path() ? path.parent_path() : std::filesystem::current_path();
  return from_document(parse_text(text, path.string()), text, path.string(), base);
}

CampaignConfig config_from_preset(const std::string& name, const json& overrides) {
  json doc = overrides.is_null() ? json::object() : overrides;
  doc["preset"] = name;
  const std::string text = doc.dump(2);
  return from_document(doc, text, "preset " + name, std::filesystem::current_path());
}

json normalized_json(const CampaignConfig& c) {
  const CampaignSpec& cs = c.campaign;
  const EnsembleSpec& e = cs.ensemble;
  json j;
  j["preset"] = c.preset;
  j["campaign"] = to_string(c.kind);
  j["ensemble"] = {{"kind", to_string(e.kind)}, {"dim", e.dim},           {"spacing", e.spacing},
                   {"particles", e.particles},  {"orbitals", e.orbitals}, {"sp_spacing", e.sp_spacing},
                   {"strength", e.strength},    {"lambda", e.lambda()},   {"full_limit", e.full_limit},
                   {"block_size", e.block_size}, {"matrix_file", c.matrix_file}};
  j["channels"] = {{"count", cs.channels()}, {"kappa", cs.kappa}};
  j["energy_grid"] = {{"lo", cs.grid.lo}, {"hi", cs.grid.hi}, {"points", cs.grid.points}};
  j["realizations"] = cs.realizations;
  j["seed"] = e.seed;
  j["window"] = cs.window;
  j["drop_broad"] = cs.drop_broad;
  j["scan"] = {{"axis", c.scan.axis}, {"values", c.scan.values}};
  j["scattering"] = {{"max_lag", c.scattering.max_lag},
                     {"max_pairs", c.scattering.max_pairs},
                     {"sample_realizations", c.scattering.sample_realizations}};
  j["keep_poles"] = c.keep_poles;
  j["svg"] = c.svg;
  j["chain"] = {{"sites", c.chain.sites},
                {"hopping", c.chain.hopping},
                {"disorder", c.chain.disorder},
                {"q", c.chain.q},
                {"gamma", {{"lo", c.chain.gamma.lo}, {"hi", c.chain.gamma.hi}, {"points", c.chain.gamma.points}}},
                {"energies", c.chain.energies}};
  j["orbital"] = {
      {"particles", c.orbital.particles},
      {"orbitals", c.orbital.orbitals},
      {"sp_spacing", c.orbital.sp_spacing},
      {"mixing", c.orbital.mixing},
      {"gamma", {{"lo", c.orbital.gamma.lo}, {"hi", c.orbital.gamma.hi}, {"points", c.orbital.gamma.points}}}};

  json derived;
  const Index n = ensemble_dim(e);
  derived["dim"] = n;
  if (e.kind == EnsembleKind::tbre) {
    derived["spacing"] = "estimated per realization";
  } else {
    derived["spacing"] = e.spacing;
    std::vector<double> gamma;
    for (double k : cs.kappa) gamma.push_back(width_from_coupling(k, n, e.spacing));
    derived["gamma"] = gamma;
  }
  derived["kappa"] = cs.kappa;
  std::vector<double> tau;
  for (double k : cs.kappa) tau.push_back(transmission_coefficient(k));
  derived["tau"] = tau;
  derived["broad_poles_dropped"] = cs.broad_poles();
  j["derived"] = derived;
  return j;
}

std::string config_hash(const CampaignConfig& c) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(normalized_json(c).dump())));
  return buf;
}

}  // namespace oqs
