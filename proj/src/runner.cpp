#include "oqs/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>

#include "oqs/chain.hpp"
#include "oqs/doorway.hpp"
#include "oqs/errors.hpp"
#include "oqs/output.hpp"

namespace oqs {

using nlohmann::json;

std::filesystem::path default_output_dir() {
  if (const char* env = std::getenv("OQS_OUTPUT_DIR"); env && *env) return env;
  return "oqs-output";
}

CampaignSpec scan_point(const CampaignConfig& config, double value) {
  CampaignSpec s = config.campaign;
  const std::string& axis = config.scan.axis;
  if (axis == "kappa") {
    std::fill(s.kappa.begin(), s.kappa.end(), value);
  } else if (axis == "lambda") {
    s.ensemble.strength = value * s.ensemble.sp_spacing;
  } else if (axis == "channels") {
    s.kappa.assign(static_cast<std::size_t>(std::llround(value)), s.kappa.front());
  }
  return s;
}

namespace {

// Fits that cannot run on a sample report their reason instead of aborting.
template <class F>
void attempt(json& j, const std::string& key, F&& f) {
  try {
    j[key] = f();
  } catch (const FitError& e) {
    j[key] = {{"error", e.what()}};
  } catch (const StructuralError& e) {
    j[key] = {{"error", e.what()}};
  }
}

double mean_of(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double mean_kappa(const CampaignSpec& s) { return mean_of(s.kappa); }

std::string point_tag(std::size_t i) { return "p" + std::to_string(i); }

}  // namespace

json resonance_metrics(const ResonanceCampaign& r, const CampaignSpec& spec) {
  json j;
  const double kappa = mean_kappa(spec);
  const double tau = transmission_coefficient(kappa);
  j["widths"] = r.widths.size();
  j["mean_width"] = r.moments.mean();
  j["width_variance_ratio"] = r.moments.n > 1 ? r.moments.variance() / (r.moments.mean() * r.moments.mean()) : 0.0;
  j["chi_square_variance_ratio"] = 2.0 / static_cast<double>(spec.channels());
  j["mean_width_prediction"] = tau < 1.0 ? mean_width_prediction(spec.channels(), tau, 1.0) : INFINITY;
  j["broad_poles_dropped"] = r.dropped;
  j["broad_share_mean"] = mean_of(r.broad_share);
  attempt(j, "nu_fit", [&] {
    const NuFit f = nu_fit(r.widths);
    return json{{"nu", f.nu}, {"error", f.error}, {"chi2", f.chi2}, {"dof", f.dof}, {"p_value", f.p_value}};
  });
  attempt(j, "tail_fit", [&] {
    const TailFit t = tail_exponent(r.widths);
    return json{{"slope", t.slope},   {"error", t.slope_error},         {"lower", t.lower},
                {"samples", t.in_window}, {"p_value", t.p_value},   {"power_law_rejected", t.power_law_rejected},
                {"sparse", t.sparse}};
  });
  j["spacings"] = r.spacings.size();
  if (!r.spacings.empty()) {
    const Proportion p = p_zero(r.spacings);
    j["p_zero"] = {{"value", p.value}, {"error", p.error}, {"count", p.count}, {"wigner", p_zero_wigner()}};
    attempt(j, "mixture_fit", [&] {
      const MixtureFit m = spacing_mixture_fit(r.spacings);
      return json{{"alpha", m.alpha}, {"sigma", m.sigma}, {"log_likelihood", m.log_likelihood}};
    });
    const KsResult w = ks_test(r.spacings, wigner_cdf);
    const KsResult p0 = ks_test(r.spacings, poisson_cdf);
    j["ks_wigner"] = {{"statistic", w.statistic}, {"p_value", w.p_value}};
    j["ks_poisson"] = {{"statistic", p0.statistic}, {"p_value", p0.p_value}};
  }
  return j;
}

json scattering_metrics(const ScatteringCampaign& s, const CampaignSpec& spec) {
  json j;
  const Index m = s.channels;
  const double kappa = mean_kappa(spec);
  const double tau_pred = transmission_coefficient(kappa);
  RealVector kv(m);
  for (Index c = 0; c < m; ++c) kv(c) = spec.kappa[static_cast<std::size_t>(c)];
  const TransmissionReport tr = transmission(s.mean_s_diagonal, kv);
  j["tau"] = tr.measured.mean();
  j["tau_prediction"] = tau_pred;
  j["mean_s_diagonal_abs"] = s.mean_s_diagonal.cwiseAbs().mean();
  j["elastic_fl"] = s.elastic_fl;
  j["inelastic_fl"] = s.inelastic_fl;
  j["elastic_mean"] = s.elastic_mean;
  j["inelastic_mean"] = s.inelastic_mean;
  j["total_mean"] = s.total_mean;
  j["optical_theorem"] = 2.0 * (1.0 - s.mean_s_diagonal.real().mean());
  j["optical_prediction"] = 4.0 * kappa / (1.0 + kappa);
  j["max_unitarity_defect"] = s.max_unitarity_defect;
  j["max_symmetry_defect"] = s.max_symmetry_defect;
  double f = NAN;
  attempt(j, "enhancement", [&] {
    f = enhancement_factor(s.elastic_fl, s.inelastic_fl);
    return json{{"F", f}, {"elastic_from_F", elastic_from_enhancement(f, tr.measured.mean(), m)}};
  });
  if (!s.conductance.empty()) {
    const VarianceEstimate v = conductance_variance(s.conductance, spec.ensemble.seed);
    j["conductance"] = {{"mean", v.mean},   {"variance", v.variance}, {"lower", v.lower},
                        {"upper", v.upper}, {"samples", v.samples}};
    if (std::isfinite(f)) j["conductance"]["mean_prediction"] = mean_conductance_prediction(f, tau_pred, m);
  }
  if (s.sigma_correlation) {
    j["correlation_length_prediction"] = correlation_length_prediction(m, tau_pred, 1.0);
    j["mean_width_prediction"] = tau_pred < 1.0 ? mean_width_prediction(m, tau_pred, 1.0) : INFINITY;
    attempt(j, "correlation_sigma", [&] {
      const CorrelationFit c = fit_lorentzian(*s.sigma_correlation, s.step);
      return json{{"length", c.length}, {"initial_guess", c.initial_guess}, {"residual", c.residual},
                  {"drift_warning", c.drift_warning}};
    });
    attempt(j, "correlation_t", [&] {
      const CorrelationFit c = fit_lorentzian(*s.t_correlation, s.step);
      return json{{"length", c.length}, {"initial_guess", c.initial_guess}, {"residual", c.residual},
                  {"drift_warning", c.drift_warning}};
    });
  }
  return j;
}

namespace {

std::vector<double> scan_values(const CampaignConfig& c) {
  if (c.scan.axis.empty()) return {NAN};
  return c.scan.values;
}

json run_resonances(const CampaignConfig& c, const std::filesystem::path& dir, const Stamp& stamp, Execution mode) {
  json points = json::array();
  CsvWriter widths(dir / "widths.csv", stamp, {"scan_value", "width"});
  CsvWriter spacings(dir / "spacings.csv", stamp, {"scan_value", "spacing"});
  std::optional<CsvWriter> poles;
  if (c.keep_poles > 0) poles.emplace(dir / "poles.csv", stamp, std::vector<std::string>{"scan_value", "realization", "E", "Gamma"});
  std::vector<PlotSeries> clouds;
  PlotSeries nu_curve{"nu", {}, {}, true}, p0_curve{"P(0)", {}, {}, true}, var_curve{"Var/mean^2", {}, {}, true};

  const auto values = scan_values(c);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const CampaignSpec spec = scan_point(c, values[i]);
    const ResonanceCampaign r = resonance_campaign(spec, mode, c.keep_poles);
    json m = resonance_metrics(r, spec);
    m["scan_value"] = values[i];
    m["channels"] = spec.channels();
    m["kappa"] = spec.kappa;
    points.push_back(m);

    for (double w : r.widths) (widths << values[i] << w).end_row();
    for (double s : r.spacings) (spacings << values[i] << s).end_row();
    PlotSeries cloud{"x = " + format_double(values[i]), {}, {}, false};
    for (std::size_t k = 0; k < r.poles.size(); ++k)
      for (const auto& p : r.poles[k]) {
        (*poles << values[i] << static_cast<long long>(k) << p.energy << p.width).end_row();
        cloud.x.push_back(p.energy);
        cloud.y.push_back(p.width);
      }
    if (!cloud.x.empty()) clouds.push_back(cloud);

    if (m.contains("nu_fit") && m["nu_fit"].contains("nu")) {
      nu_curve.x.push_back(values[i]);
      nu_curve.y.push_back(m["nu_fit"]["nu"].get<double>());
    }
    if (m.contains("p_zero")) {
      p0_curve.x.push_back(values[i]);
      p0_curve.y.push_back(m["p_zero"]["value"].get<double>());
    }
    var_curve.x.push_back(values[i]);
    var_curve.y.push_back(m["width_variance_ratio"].get<double>());

    if (c.svg) {
      const double mean = r.moments.mean();
      Histogram hw(0.0, 5.0, 50);
      for (double w : r.widths) hw.add(mean > 0 ? w / mean : 0.0);
      write_svg_histogram(dir / ("widths_" + point_tag(i) + ".svg"), stamp,
                          {"widths at " + format_double(values[i]), "Gamma / mean", "density", false, false}, hw);
      if (!r.spacings.empty()) {
        Histogram hs(0.0, 4.0, 40);
        for (double s : r.spacings) hs.add(s);
        PlotSeries wig{"Wigner", {}, {}, true};
        for (int k = 0; k <= 200; ++k) {
          wig.x.push_back(4.0 * k / 200.0);
          wig.y.push_back(wigner_pdf(4.0 * k / 200.0));
        }
        write_svg_histogram(dir / ("spacings_" + point_tag(i) + ".svg"), stamp,
                            {"spacings at " + format_double(values[i]), "s", "P(s)", false, false}, hs, {wig});
      }
    }
  }
  if (c.svg && !c.scan.axis.empty()) {
    const bool logx = c.scan.axis != "channels";
    if (!nu_curve.x.empty())
      write_svg_plot(dir / "nu.svg", stamp, {"fitted nu", c.scan.axis, "nu", logx, false}, {nu_curve});
    if (!p0_curve.x.empty())
      write_svg_plot(dir / "p_zero.svg", stamp, {"P(0)", c.scan.axis, "P(s < 0.04)", logx, false}, {p0_curve});
    write_svg_plot(dir / "width_variance.svg", stamp, {"normalized width variance", c.scan.axis, "Var / mean^2", logx, true},
                   {var_curve});
  }
  if (c.svg && !clouds.empty())
    write_svg_plot(dir / "poles.svg", stamp, {"resonance poles", "E", "Gamma", false, true}, clouds);
  return points;
}

json run_scattering(const CampaignConfig& c, const std::filesystem::path& dir, const Stamp& stamp, Execution mode) {
  json points = json::array();
  CsvWriter samples(dir / "samples.csv", stamp, {"scan_value", "realization", "E", "a", "b", "sigma", "G"});
  CsvWriter cond(dir / "conductance.csv", stamp, {"scan_value", "sample", "G"});
  std::optional<CsvWriter> corr;
  if (c.scattering.max_lag > 0)
    corr.emplace(dir / "correlation.csv", stamp, std::vector<std::string>{"scan_value", "lag", "r_sigma", "r_T"});
  PlotSeries f_curve{"F", {}, {}, true}, el_curve{"elastic fl", {}, {}, true}, vg_curve{"Var(G)", {}, {}, true};

  const auto values = scan_values(c);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const CampaignSpec spec = scan_point(c, values[i]);
    const ScatteringCampaign s = scattering_campaign(spec, c.scattering, mode);
    json m = scattering_metrics(s, spec);
    m["scan_value"] = values[i];
    m["channels"] = spec.channels();
    points.push_back(m);

    for (const auto& row : s.rows)
      (samples << values[i] << static_cast<long long>(row.realization) << row.energy << static_cast<long long>(row.a)
               << static_cast<long long>(row.b) << row.sigma << row.conductance)
          .end_row();
    for (std::size_t k = 0; k < s.conductance.size(); ++k)
      (cond << values[i] << static_cast<long long>(k) << s.conductance[k]).end_row();
    if (corr) {
      const auto cs = s.sigma_correlation->covariance();
      const auto ct = s.t_correlation->covariance();
      PlotSeries rs{"sigma", {}, {}, true}, rt{"T", {}, {}, true};
      for (std::size_t k = 0; k < cs.size(); ++k) {
        const double a = cs[0] != 0 ? cs[k] / cs[0] : NAN, b = ct[0] != 0 ? ct[k] / ct[0] : NAN;
        (*corr << values[i] << static_cast<double>(k) * s.step << a << b).end_row();
        rs.x.push_back(static_cast<double>(k) * s.step);
        rs.y.push_back(a);
        rt.x.push_back(static_cast<double>(k) * s.step);
        rt.y.push_back(b);
      }
      if (c.svg)
        write_svg_plot(dir / ("correlation_" + point_tag(i) + ".svg"), stamp,
                       {"energy correlation", "eps / D", "C(eps) / C(0)", false, false}, {rs, rt});
    }
    if (m.contains("enhancement") && m["enhancement"].contains("F")) {
      f_curve.x.push_back(values[i]);
      f_curve.y.push_back(m["enhancement"]["F"].get<double>());
    }
    el_curve.x.push_back(values[i]);
    el_curve.y.push_back(s.elastic_fl);
    if (m.contains("conductance")) {
      vg_curve.x.push_back(values[i]);
      vg_curve.y.push_back(m["conductance"]["variance"].get<double>());
    }
  }
  if (c.svg && !c.scan.axis.empty()) {
    const bool logx = c.scan.axis != "lambda" && c.scan.axis != "channels";
    write_svg_plot(dir / "elastic_fl.svg", stamp, {"elastic fluctuating cross section", c.scan.axis, "sigma_fl", logx, false},
                   {el_curve});
    if (!f_curve.x.empty())
      write_svg_plot(dir / "enhancement.svg", stamp, {"elastic enhancement", c.scan.axis, "F", logx, false}, {f_curve});
    if (!vg_curve.x.empty())
      write_svg_plot(dir / "conductance_variance.svg", stamp, {"conductance variance", c.scan.axis, "Var(G)", logx, false},
                     {vg_curve});
  }
  return points;
}

json run_chain(const CampaignConfig& c, const std::filesystem::path& dir, const Stamp& stamp) {
  json points = json::array();
  CsvWriter integ(dir / "integrated.csv", stamp, {"q", "gamma", "integrated", "predicted"});
  std::optional<CsvWriter> curves;
  if (c.chain.energies > 0)
    curves.emplace(dir / "transmission.csv", stamp, std::vector<std::string>{"q", "gamma", "E", "tau_LL", "tau_LR", "tau_RR"});
  const std::vector<double> gammas = log_grid(c.chain.gamma.lo, c.chain.gamma.hi, c.chain.gamma.points);
  const double log_step =
      gammas.size() > 1 ? std::log10(gammas[1] / gammas[0]) : 0.0;
  std::vector<PlotSeries> plot;
  for (double q : c.chain.q) {
    ChainSpec base;
    base.sites = c.chain.sites;
    base.hopping = c.chain.hopping;
    base.disorder = c.chain.disorder;
    base.seed = c.campaign.ensemble.seed;
    const Index reps = c.chain.disorder > 0.0 ? c.campaign.realizations : 1;
    const IntegratedScan scan = integrated_scan(base, q, gammas, reps);
    double worst = 0.0;
    PlotSeries meas{"q = " + format_double(q), scan.gammas, scan.values, true};
    PlotSeries pred{"q = " + format_double(q) + " prediction", scan.gammas, scan.predicted, true};
    for (std::size_t k = 0; k < gammas.size(); ++k) {
      (integ << q << gammas[k] << scan.values[k] << scan.predicted[k]).end_row();
      worst = std::max(worst, std::abs(scan.values[k] - scan.predicted[k]) / scan.predicted[k]);
      if (curves) {
        ChainSpec s = ChainSpec::asymmetric(base.sites, base.hopping, gammas[k], q);
        s.disorder = base.disorder;
        s.seed = base.seed;
        const double band = 2.0 * base.hopping;
        for (double e : midpoint_grid(-band, band, c.chain.energies)) {
          const ChainTransmission t = chain_transmission_numeric(s, e);
          (*curves << q << gammas[k] << e << t.ll << t.lr << t.rr).end_row();
        }
      }
    }
    points.push_back({{"q", q},
                      {"argmax", scan.argmax},
                      {"critical", scan.critical},
                      {"argmax_offset_steps", log_step > 0 ? std::log10(scan.argmax / scan.critical) / log_step : 0.0},
                      {"max_relative_deviation", worst},
                      {"realizations", reps}});
    plot.push_back(meas);
    plot.push_back(pred);
  }
  if (c.svg)
    write_svg_plot(dir / "integrated.svg", stamp, {"integrated transmission", "gamma", "T", true, false}, plot);
  return points;
}

json run_orbital(const CampaignConfig& c, const std::filesystem::path& dir, const Stamp& stamp) {
  OrbitalModelSpec spec;
  spec.particles = c.orbital.particles;
  spec.orbitals = c.orbital.orbitals;
  spec.sp_spacing = c.orbital.sp_spacing;
  spec.mixing = c.orbital.mixing;
  spec.seed = c.campaign.ensemble.seed;
  spec.gammas = log_grid(c.orbital.gamma.lo, c.orbital.gamma.hi, c.orbital.gamma.points);
  const OrbitalTrajectories t = doorway_orbital_model(spec);
  CsvWriter out(dir / "trajectories.csv", stamp, {"gamma", "index", "E", "Gamma"});
  std::vector<PlotSeries> plot(1, PlotSeries{"poles", {}, {}, false});
  for (std::size_t g = 0; g < t.gammas.size(); ++g)
    for (std::size_t k = 0; k < t.poles[g].size(); ++k) {
      (out << t.gammas[g] << static_cast<long long>(k) << t.poles[g][k].energy << t.poles[g][k].width).end_row();
      plot[0].x.push_back(t.poles[g][k].energy);
      plot[0].y.push_back(t.poles[g][k].width);
    }
  if (c.svg)
    write_svg_plot(dir / "trajectories.svg", stamp, {"pole trajectories", "E", "Gamma", false, true}, plot);
  return json::array({{{"states", t.states},
                       {"nontrapped", t.nontrapped},
                       {"gap_decades", t.gap_decades},
                       {"monotone_growing", t.monotone_growing}}});
}

}  // namespace

RunResult run_campaign(const CampaignConfig& config, const std::filesystem::path& directory, Execution mode) {
  std::filesystem::create_directories(directory);
  const Stamp stamp{kToolVersion, config_hash(config)};
  json points;
  switch (config.kind) {
    case CampaignKind::resonances: points = run_resonances(config, directory, stamp, mode); break;
    case CampaignKind::scattering: points = run_scattering(config, directory, stamp, mode); break;
    case CampaignKind::chain: points = run_chain(config, directory, stamp); break;
    case CampaignKind::orbital: points = run_orbital(config, directory, stamp); break;
  }
  RunResult r;
  r.directory = directory;
  r.summary = {{"tool_version", kToolVersion},
               {"config_hash", stamp.hash},
               {"seed", config.campaign.ensemble.seed},
               {"config", normalized_json(config)},
               {"overrides", config.overrides},
               {"metrics", points}};
  write_json(directory / "summary.json", r.summary);
  return r;
}

void write_diagnostics(const std::filesystem::path& directory, const CampaignConfig& config, const std::string& kind,
                       const std::string& message, double condition) {
  std::filesystem::create_directories(directory);
  write_json(directory / "diagnostics.json", {{"tool_version", kToolVersion},
                                              {"config_hash", config_hash(config)},
                                              {"error", kind},
                                              {"message", message},
                                              {"condition_number", condition}});
}

}  // namespace oqs
