// Acceptance checks, one line per criterion. Exit status is the number of
// failed checks (capped at 1).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Eigenvalues>

#include "oqs/campaign.hpp"
#include "oqs/chain.hpp"
#include "oqs/doorway.hpp"
#include "oqs/ensembles.hpp"
#include "oqs/heff.hpp"
#include "oqs/rng.hpp"
#include "oqs/scattering.hpp"
#include "oqs/statistics.hpp"
#include "oqs/superradiance.hpp"

using namespace oqs;

namespace {

int g_failures = 0;
int g_checks = 0;

std::string fmt(double x, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

std::string list(const std::vector<double>& v, int digits = 4) {
  std::string s = "{";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i], digits);
  return s + "}";
}

void report(const std::string& id, const std::string& what, bool ok, const std::string& detail) {
  ++g_checks;
  if (!ok) ++g_failures;
  std::cout << (ok ? "PASS " : "FAIL ") << id << "  " << what << "  [" << detail << "]" << std::endl;
}

EffectiveHamiltonian goe_heff(Index n, std::vector<double> kappa, std::uint64_t seed, std::uint64_t r) {
  EnsembleSpec spec;
  spec.dim = n;
  spec.seed = seed;
  return assemble(sample_goe(spec, r), sample_amplitudes(ChannelSpec::from_coupling(kappa, n, 1.0), n, seed, r));
}

CampaignSpec goe_campaign(Index n, std::vector<double> kappa, Index realizations, std::uint64_t seed) {
  CampaignSpec s;
  s.ensemble.dim = n;
  s.ensemble.seed = seed;
  s.kappa = std::move(kappa);
  s.realizations = realizations;
  return s;
}

CampaignSpec tbre_campaign(double lambda, std::vector<double> kappa, Index realizations, std::uint64_t seed) {
  CampaignSpec s;
  s.ensemble.kind = EnsembleKind::tbre;
  s.ensemble.particles = 5;
  s.ensemble.orbitals = 10;
  s.ensemble.sp_spacing = 1.0;
  s.ensemble.strength = lambda;
  s.ensemble.seed = seed;
  s.kappa = std::move(kappa);
  s.realizations = realizations;
  return s;
}

// ---------------------------------------------------------------------------
// 1. Exact identities

void group_exact() {
  {
    double worst = 0.0;
    for (double kappa : {0.1, 1.0, 10.0}) {
      CampaignSpec s = goe_campaign(120, std::vector<double>(6, kappa), 5, 101);
      s.grid = {-30.0, 30.0, 60};
      const ScatteringCampaign c = scattering_campaign(s);
      worst = std::max(worst, c.max_unitarity_defect);
    }
    report("1.1", "S^dagger S = 1 on every grid point", worst <= 1e-8,
           "max |S^dagger S - 1| = " + fmt(worst) + " over N=120, M=6, kappa {0.1,1,10}, 5x60 energies; tol 1e-8");
  }
  {
    double trace = 0.0, gram = 0.0, negative = 0.0;
    for (double kappa : {0.1, 1.0, 5.0})
      for (std::uint64_t r = 0; r < 10; ++r) {
        const EffectiveHamiltonian heff = goe_heff(160, {kappa, kappa, kappa}, 102, r);
        const ResonanceSet rs = spectrum(heff, {.vectors = true});
        const SumRuleReport rep = verify_sum_rules(rs, heff, 1.0);
        trace = std::max(trace, rep.trace_residual / rep.trace_w);
        gram = std::max(gram, rep.biorthogonality_error);
        negative = std::max(negative, rep.max_negative_width);
      }
    report("1.2", "trace rule sum Gamma_r = tr W", trace <= 1e-8,
           "max relative residual " + fmt(trace) + " over N=160, M=3, 30 matrices; tol 1e-8");
    report("1.3", "biorthogonal Gram L^T R = 1", gram <= 1e-8,
           "max |L^T R - 1| = " + fmt(gram) + "; tol 1e-8");
    report("1.4", "widths non-negative", negative == 0.0, "most negative width " + fmt(-negative));
  }
  {
    double worst = 0.0;
    for (std::uint64_t r = 0; r < 5; ++r) {
      const EffectiveHamiltonian heff = goe_heff(160, {0.5, 1.0, 2.0, 4.0}, 103, r);
      for (double e : {-37.3, -0.41, 12.6}) {
        const ComplexMatrix a = full_propagator(heff, e), b = direct_propagator(heff, e);
        worst = std::max(worst, (a - b).cwiseAbs().maxCoeff() / b.cwiseAbs().maxCoeff());
      }
    }
    report("1.5", "Woodbury propagator = direct inversion", worst <= 1e-8,
           "max relative difference " + fmt(worst) + " over N=160, M=4; tol 1e-8");
  }
  {
    std::mt19937_64 gen(104);
    std::normal_distribution<double> g;
    double worst = 0.0;
    for (int t = 0; t < 2000; ++t) {
      TwoLevelModel m{g(gen), g(gen), g(gen), g(gen), g(gen), std::nullopt};
      auto [p, q] = two_level_eigenvalues(m);
      Eigen::ComplexEigenSolver<ComplexMatrix> es(m.matrix());
      cplx x = es.eigenvalues()(0), y = es.eigenvalues()(1);
      if (std::abs(p - x) + std::abs(q - y) > std::abs(p - y) + std::abs(q - x)) std::swap(x, y);
      const double scale = std::max({std::abs(p), std::abs(q), 1.0});
      worst = std::max(worst, (std::abs(p - x) + std::abs(q - y)) / scale);
    }
    report("1.6", "two-level closed-form poles = 2x2 eigensolver", worst <= 1e-8,
           "max relative difference " + fmt(worst) + " over 2000 random models; tol 1e-8");

    TwoLevelModel d{0.7, 0.7, 0.0, 0.9, -0.5, std::nullopt};
    const auto [ep, em] = two_level_eigenvalues(d);
    const double err = std::abs(ep - cplx(0.7, 0.0)) + std::abs(em - cplx(0.7, -0.5 * (0.81 + 0.25)));
    report("1.7", "degenerate pair: E+ = eps, E- = eps - i(g1+g2)/2", err <= 1e-12,
           "deviation " + fmt(err));

    double rank2 = 0.0;
    for (int t = 0; t < 200; ++t) {
      RealVector a(8), b(8);
      for (int i = 0; i < 8; ++i) {
        a(i) = g(gen);
        b(i) = g(gen);
      }
      const double ga = kTwoPi * a.squaredNorm(), gb = kTwoPi * b.squaredNorm();
      const double theta = std::acos(std::clamp(a.dot(b) / (a.norm() * b.norm()), -1.0, 1.0));
      Eigen::SelfAdjointEigenSolver<RealMatrix> es(RealMatrix(kTwoPi * (a * a.transpose() + b * b.transpose())),
                                                   Eigen::EigenvaluesOnly);
      const auto [hi, lo] = two_channel_widths(ga, gb, theta);
      rank2 = std::max({rank2, std::abs(hi - es.eigenvalues()(7)) / (ga + gb),
                        std::abs(lo - es.eigenvalues()(6)) / (ga + gb)});
    }
    report("1.8", "two-channel widths = eigenvalues of rank-2 W", rank2 <= 1e-8,
           "max relative difference " + fmt(rank2) + " over 200 pairs; tol 1e-8");
  }
  {
    double closed = 0.0;
    for (double q : {1.0, 10.0, 25.0})
      for (double gamma : {0.2, 2.0, 20.0}) {
        const ChainSpec spec = ChainSpec::asymmetric(100, 1.0, gamma, q);
        for (double e = -1.9; e < 1.95; e += 0.2) {
          const ChainTransmission c = chain_transmission_closed(spec, e);
          const ChainTransmission a = chain_transmission_phase_average(spec, e, 4096);
          closed = std::max({closed, std::abs(c.lr - a.lr), std::abs(c.ll - a.ll), std::abs(c.rr - a.rr)});
        }
      }
    report("1.9", "chain closed-form tau = phase-averaged S-matrix tau", closed <= 1e-8,
           "max |difference| " + fmt(closed) + " over q {1,10,25}, gamma {0.2,2,20}, 20 energies; tol 1e-8");

    double psum = 0.0;
    for (Index n : {Index{99}, Index{100}}) {
      const ChainSpec spec = ChainSpec::asymmetric(n, 1.0, 1.0, 1.0);
      for (double x = -1.37; x < 1.4; x += 0.1)
        for (double y : {0.0, 0.01, 0.3}) {
          const cplx eps(x, y);
          const auto [cp, cm] = closed_form_p(spec, eps);
          const auto [dp, dm] = direct_sum_p(spec, 2.0 * eps);
          psum = std::max({psum, std::abs(cp - dp) / std::max(1.0, std::abs(dp)),
                           std::abs(cm - dm) / std::max(1.0, std::abs(dm))});
        }
    }
    report("1.10", "closed-form P sums = direct Bloch sums", psum <= 1e-10,
           "max relative difference " + fmt(psum) + " over N {99,100}, 84 complex energies; tol 1e-10");

    double optical = 0.0;
    ChainSpec spec = ChainSpec::asymmetric(100, 1.0, 1.3, 4.0);
    for (double w : {0.0, 0.5, 2.0}) {
      spec.disorder = w;
      for (double e = -1.93; e < 1.95; e += 0.13) {
        const ChainTransmission t = chain_transmission_numeric(spec, e, 7);
        optical = std::max(optical, std::abs(t.ll + t.lr + 2.0 * t.t_ll.imag()) / std::max(1e-300, std::abs(t.t_ll)));
      }
    }
    report("1.11", "tau_LL + tau_LR = -2 Im T_LL", optical <= 1e-8,
           "max relative violation " + fmt(optical) + " over disorder {0,0.5,2}; tol 1e-8");
  }
}

// ---------------------------------------------------------------------------
// 2. Super-radiance

struct ExpansionError {
  double share = 0.0;
  double error = 0.0;
};

// One-channel GOE problem in the eigenbasis of H: levels e_a and widths 2 pi (U^T A)_a^2.
ExpansionError expansion_error(Index n, double kappa, std::uint64_t r) {
  EnsembleSpec spec;
  spec.dim = n;
  spec.seed = 201;
  const IntrinsicHamiltonian h = sample_goe(spec, r);
  const CouplingAmplitudes a = sample_amplitudes(ChannelSpec::from_coupling({kappa}, n, 1.0), n, 201, r);
  const ChannelPropagator prop(h, a);
  OneChannelSecular s;
  for (Index i = 0; i < n; ++i) {
    s.levels.push_back(prop.levels()(i));
    s.widths.push_back(kTwoPi * prop.projected()(i, 0) * prop.projected()(i, 0));
  }
  const ResonanceSet rs = spectrum(assemble(h, a));
  ComplexEnergy widest = rs.poles.front();
  for (const auto& p : rs.poles)
    if (p.width > widest.width) widest = p;
  const BroadPole b = broad_pole_expansion(s, 1.0);
  const double w = s.total_width();
  return {widest.width / w, std::abs(cplx(widest.energy - b.energy, widest.width - b.width)) / w};
}

void group_superradiance() {
  {
    const Index reps = 50;
    std::vector<double> shares;
    for (Index r = 0; r < reps; ++r) shares.push_back(expansion_error(160, 5.0, static_cast<std::uint64_t>(r)).share);
    const double mean = std::accumulate(shares.begin(), shares.end(), 0.0) / static_cast<double>(reps);
    const double low = *std::min_element(shares.begin(), shares.end());
    report("2.1", "GOE N=160, M=1, kappa=5: widest pole share of tr W >= 0.9", mean >= 0.9,
           "mean share " + fmt(mean) + ", min " + fmt(low) + " over " + std::to_string(reps) + " realizations");
  }
  {
    const std::vector<double> kappas = {5.0, 10.0, 20.0, 40.0};
    std::vector<double> err;
    for (double k : kappas) {
      double sum = 0.0;
      for (std::uint64_t r = 0; r < 20; ++r) sum += expansion_error(160, k, r).error;
      err.push_back(sum / 20.0);
    }
    double worst_ratio = 1e300;
    for (std::size_t i = 1; i < err.size(); ++i) worst_ratio = std::min(worst_ratio, err[i - 1] / err[i]);
    report("2.2", "broad-pole expansion error shrinks >= x4 per doubling of kappa", worst_ratio >= 4.0,
           "relative error " + list(err) + " at kappa " + list(kappas) + "; smallest ratio " + fmt(worst_ratio));
  }
  {
    OrbitalModelSpec spec;
    spec.gammas = log_grid(0.01, 1000.0, 61);
    const OrbitalTrajectories t = doorway_orbital_model(spec);
    report("2.3", "k=4 fermions in n=8 levels: 35 non-trapped trajectories", t.nontrapped == 35,
           "non-trapped " + std::to_string(t.nontrapped) + " of " + std::to_string(t.states) + ", gap " +
               fmt(t.gap_decades, 3) + " decades");
  }
}

// ---------------------------------------------------------------------------
// 3. Transmission

void group_transmission() {
  report("3.1", "tau(kappa=1) = 1", transmission_coefficient(1.0) == 1.0, "tau(1) = " + fmt(transmission_coefficient(1.0), 17));
  {
    double worst = 0.0;
    for (double k = 0.01; k < 100.0; k *= 1.37)
      worst = std::max(worst, std::abs(transmission_coefficient(k) - transmission_coefficient(1.0 / k)));
    std::vector<double> measured;
    for (double k : {0.5, 2.0}) {
      CampaignSpec s = goe_campaign(100, {k}, 200, 301);
      s.grid = {-20.0, 20.0, 20};
      const ScatteringCampaign c = scattering_campaign(s);
      measured.push_back(1.0 - std::norm(c.mean_s_diagonal(0)));
    }
    const double pred = transmission_coefficient(0.5);
    const bool ok = worst <= 1e-14 && std::abs(measured[0] - pred) <= 0.03 && std::abs(measured[1] - pred) <= 0.03;
    report("3.2", "tau(kappa) = tau(1/kappa)", ok,
           "formula max |difference| " + fmt(worst) + "; measured 1-|<S>|^2 at kappa 0.5, 2: " + list(measured) +
               " vs " + fmt(pred) + " (tol 0.03, GOE N=100, 200 realizations)");
  }
  {
    const std::vector<double> gammas = log_grid(0.1, 100.0, 41);
    const double step = std::log10(gammas[1] / gammas[0]);
    std::vector<double> offsets;
    double deviation = 0.0;
    for (double q : {1.0, 10.0, 25.0}) {
      const IntegratedScan s = integrated_scan(ChainSpec::asymmetric(100, 1.0, 1.0, q), q, gammas);
      offsets.push_back(std::log10(s.argmax / s.critical) / step);
      for (std::size_t i = 0; i < s.values.size(); ++i)
        deviation = std::max(deviation, std::abs(s.values[i] - s.predicted[i]) / s.predicted[i]);
    }
    const bool argmax_ok = std::all_of(offsets.begin(), offsets.end(), [](double o) { return std::abs(o) <= 1.0; });
    report("3.3", "chain N=100: integrated transmission peaks at gamma = 2v sqrt(q)", argmax_ok,
           "argmax offset in log-grid steps for q {1,10,25}: " + list(offsets, 3) + "; tol 1 step");
    report("3.4", "chain N=100: integrated transmission within 5% of the closed curve", deviation <= 0.05,
           "max relative deviation " + fmt(deviation) + " over 41 gammas x 3 q");
  }
}

// ---------------------------------------------------------------------------
// 4. Statistics

// F from `batches` independent campaigns, with its standard error.
std::pair<double, double> enhancement(CampaignSpec s, Index batches) {
  std::vector<double> f;
  const std::uint64_t seed = s.ensemble.seed;
  for (Index b = 0; b < batches; ++b) {
    s.ensemble.seed = seed + 1000 * static_cast<std::uint64_t>(b);
    const ScatteringCampaign c = scattering_campaign(s);
    f.push_back(enhancement_factor(c.elastic_fl, c.inelastic_fl));
  }
  const double n = static_cast<double>(f.size());
  const double mean = std::accumulate(f.begin(), f.end(), 0.0) / n;
  double var = 0.0;
  for (double x : f) var += (x - mean) * (x - mean);
  return {mean, std::sqrt(var / (n - 1.0) / n)};
}

// Wigner weight of the spacing mixture for closed TBRE spectra.
double chaos_weight(double lambda, Index realizations) {
  EnsembleSpec spec;
  spec.kind = EnsembleKind::tbre;
  spec.particles = 5;
  spec.orbitals = 10;
  spec.strength = lambda;
  spec.seed = 401;
  std::vector<double> s;
  for (Index r = 0; r < realizations; ++r) {
    const IntrinsicHamiltonian h = sample_tbre(spec, static_cast<std::uint64_t>(r));
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(h.matrix(), Eigen::EigenvaluesOnly);
    std::vector<double> lv(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    const auto u = unfold_and_spacings(lv, 0.5);
    s.insert(s.end(), u.s.begin(), u.s.end());
  }
  return spacing_mixture_fit(s).alpha;
}

// Scan value where a monotone sequence crosses the midpoint of its end values, by log interpolation.
double crossing(const std::vector<double>& x, const std::vector<double>& y) {
  const double mid = 0.5 * (y.front() + y.back());
  for (std::size_t i = 1; i < y.size(); ++i)
    if ((y[i - 1] - mid) * (y[i] - mid) <= 0.0 && y[i] != y[i - 1]) {
      const double t = (mid - y[i - 1]) / (y[i] - y[i - 1]);
      return std::exp(std::log(x[i - 1]) + t * (std::log(x[i]) - std::log(x[i - 1])));
    }
  return std::nan("");
}

void group_statistics() {
  const Index reps = 500;
  {
    std::vector<double> kappas = {0.01, 0.05, 0.2, 0.5};
    std::vector<double> nu, err;
    for (double k : kappas) {
      CampaignSpec s = goe_campaign(160, {k}, reps, 501);
      const ResonanceCampaign c = resonance_campaign(s);
      const NuFit f = nu_fit(c.widths);
      nu.push_back(f.nu);
      err.push_back(f.error);
    }
    report("4.1", "GOE M=1, kappa=0.01: nu in [0.9, 1.1]", nu[0] >= 0.9 && nu[0] <= 1.1,
           "nu = " + fmt(nu[0]) + " +- " + fmt(err[0], 2) + " (N=160, 500 realizations)");
    const bool decreasing = nu[1] > nu[2] && nu[2] > nu[3];
    report("4.2", "nu strictly decreasing on kappa {0.05, 0.2, 0.5}", decreasing,
           "nu = " + list({nu[1], nu[2], nu[3]}) + " +- " + list({err[1], err[2], err[3]}, 2));

    std::vector<double> goe_dev, tbre_dev, tbre_nu, zero;
    for (std::size_t i = 1; i < 3; ++i) {
      CampaignSpec s = tbre_campaign(0.0, {kappas[i]}, reps, 502);
      const ResonanceCampaign c = resonance_campaign(s);
      const NuFit f = nu_fit(c.widths);
      tbre_nu.push_back(f.nu);
      tbre_dev.push_back(std::abs(f.nu - 1.0));
      goe_dev.push_back(std::abs(nu[i] - 1.0));
      zero.push_back(static_cast<double>(c.moments.nonpositive) / static_cast<double>(c.widths.size()));
    }
    const bool larger = tbre_dev[0] > goe_dev[0] && tbre_dev[1] > goe_dev[1];
    report("4.3", "TBRE lambda=0 deviates more from Porter-Thomas than GOE at equal kappa", larger,
           "kappa {0.05, 0.2}: |nu-1| TBRE " + list(tbre_dev) + " (nu " + list(tbre_nu) + ", zero-width share " +
               list(zero, 2) + ") vs GOE " + list(goe_dev) + "; TBRE k=5, n=10");
  }
  {
    CampaignSpec s = goe_campaign(200, {1.0}, reps, 503);
    const ResonanceCampaign c = resonance_campaign(s);
    const TailFit t = tail_exponent(c.widths);
    report("4.4", "kappa=1, M=1: width tail slope -2 +- 0.3", std::abs(t.slope + 2.0) <= 0.3,
           "slope " + fmt(t.slope) + " +- " + fmt(t.slope_error, 2) + " over [" + fmt(t.lower, 3) + ", " +
               fmt(10 * t.lower, 3) + "] x mean, " + std::to_string(t.in_window) + " widths, power-law p = " +
               fmt(t.p_value, 2) + " (N=200, 500 realizations)");
  }
  {
    const std::vector<double> kappas = {0.1, 1.0, 5.0, 50.0};
    std::vector<double> p0, e0;
    for (double k : kappas) {
      CampaignSpec s = goe_campaign(160, {k}, reps, 504);
      const ResonanceCampaign c = resonance_campaign(s);
      const Proportion p = p_zero(c.spacings);
      p0.push_back(p.value);
      e0.push_back(p.error);
    }
    const auto top = static_cast<std::size_t>(std::max_element(p0.begin(), p0.end()) - p0.begin());
    const bool ok = top == 1 && p0[1] > p0[0] && p0[1] > p0[2] && p0[2] > p0[3];
    report("4.5", "P(0) rises then falls over kappa {0.1, 1, 5, 50}, maximum at kappa=1", ok,
           "P(s<0.04) = " + list(p0) + " +- " + list(e0, 2) + "; Wigner " + fmt(p_zero_wigner()) +
               " (N=160, 500 realizations)");
  }
  {
    CampaignSpec s = goe_campaign(200, std::vector<double>(20, 1.0), reps, 505);
    s.grid = {-40.0, 40.0, 10};
    const ScatteringCampaign c = scattering_campaign(s);
    const VarianceEstimate v = conductance_variance(c.conductance, 505);
    const double exact = 2.0 * 10 * 10 * 11 * 11 / (20.0 * 21 * 21 * 23);
    report("4.6", "GOE M=20, tau=1: Var(G) = 1/8 +- 20%", std::abs(v.variance - 0.125) <= 0.2 * 0.125,
           "Var(G) = " + fmt(v.variance) + " [" + fmt(v.lower) + ", " + fmt(v.upper) + "], <G> = " + fmt(v.mean) +
               "; finite-M circular-ensemble value " + fmt(exact) + " (N=200, 5000 samples)");
  }
  {
    const std::vector<double> lambdas = {0.002, 0.005, 0.01, 0.02, 0.05, 0.1, 0.2, 0.5};
    std::vector<double> var, alpha;
    for (double l : lambdas) {
      CampaignSpec s = tbre_campaign(l, std::vector<double>(20, 1.0), reps, 506);
      s.grid = {-80.0, 80.0, 20};
      const ScatteringCampaign c = scattering_campaign(s);
      var.push_back(conductance_variance(c.conductance, 506, 200).variance);
      alpha.push_back(chaos_weight(l, 40));
    }
    report("4.7", "TBRE lambda << lambda_cr: Var(G) = 2/15 +- 20%", std::abs(var.front() - 2.0 / 15.0) <= 0.2 * 2.0 / 15.0,
           "Var(G) = " + fmt(var.front()) + " at lambda " + fmt(lambdas.front()) + " (k=5, n=10, M=20, kappa=1, 10000 samples)");
    const double lambda_cr = crossing(lambdas, alpha);
    const double lambda_g = crossing(lambdas, var);
    const bool located = std::isfinite(lambda_cr) && std::isfinite(lambda_g) &&
                         std::abs(std::log(lambda_g / lambda_cr)) <= std::log(2.0);
    report("4.8", "Var(G) crossover at the spacing-statistics chaos threshold", located,
           "lambda " + list(lambdas) + ": Var(G) " + list(var) + ", Wigner weight " + list(alpha, 3) +
               "; lambda_cr " + fmt(lambda_cr, 3) + ", Var(G) midpoint " + fmt(lambda_g, 3) + " (tol factor 2)");
  }
  {
    CampaignSpec s = goe_campaign(200, std::vector<double>(10, 0.8), 50, 507);
    s.grid = {-40.0, 40.0, 20};
    const auto [f, e] = enhancement(s, 10);
    report("4.9", "GOE limit: F = 2 +- 0.2", std::abs(f - 2.0) <= 0.2,
           "F = " + fmt(f) + " +- " + fmt(e, 2) + " (N=200, M=10, kappa=0.8, 500 realizations)");

    const std::vector<double> lambdas = {0.001, 0.005, 0.01, 0.02, 0.05, 0.2};
    std::vector<double> fs, es;
    for (double l : lambdas) {
      CampaignSpec t = tbre_campaign(l, std::vector<double>(10, 0.8), 50, 508);
      t.grid = {-80.0, 80.0, 20};
      const auto [fl, el] = enhancement(t, 10);
      fs.push_back(fl);
      es.push_back(el);
    }
    bool trend = std::abs(fs.back() - 2.0) < std::abs(fs.front() - 2.0) && fs.front() > fs.back();
    for (std::size_t i = 1; i < fs.size(); ++i)
      if (fs[i] - fs[i - 1] > 2.0 * std::hypot(es[i], es[i - 1])) trend = false;
    report("4.10", "TBRE lambda -> 0: F near 3", std::abs(fs.front() - 3.0) <= 0.3,
           "F = " + fmt(fs.front()) + " +- " + fmt(es.front(), 2) + " at lambda " + fmt(lambdas.front()) + "; tol 0.3");
    report("4.11", "TBRE: F decreases toward 2 as lambda grows", trend,
           "lambda " + list(lambdas) + ": F " + list(fs) + " +- " + list(es, 2) + " (k=5, n=10, M=10, kappa=0.8)");
  }
  {
    const Index m = 50;
    ScatteringOptions o;
    CampaignSpec s = goe_campaign(300, std::vector<double>(m, 0.5), reps, 509);
    s.grid = {-40.0, 40.0, 160};
    o.max_lag = 40;
    const ScatteringCampaign c = scattering_campaign(s, o);
    const CorrelationFit f = fit_lorentzian(*c.sigma_correlation, c.step);
    const double tau = transmission_coefficient(0.5);
    const double pred = correlation_length_prediction(m, tau, 1.0);
    const double gbar = mean_width_prediction(m, tau, 1.0);
    report("4.12", "M=50, kappa=0.5: correlation length within 10% of D M tau / 2 pi",
           std::abs(f.length / pred - 1.0) <= 0.1,
           "l = " + fmt(f.length) + " D vs " + fmt(pred) + " D (fit rms " + fmt(f.residual, 2) + ", N=300, 500 realizations)");

    CampaignSpec w = goe_campaign(300, std::vector<double>(m, 0.02), reps, 510);
    w.grid = {-20.0, 20.0, 200};
    o.max_lag = 40;
    const ScatteringCampaign cw = scattering_campaign(w, o);
    const CorrelationFit fw = fit_lorentzian(*cw.sigma_correlation, cw.step);
    const double tau_w = transmission_coefficient(0.02);
    const double gbar_w = mean_width_prediction(m, tau_w, 1.0);
    const bool only_small = std::abs(fw.length / gbar_w - 1.0) <= 0.15 && f.length / gbar < 0.6;
    report("4.13", "l = mean width (Moldauer-Simonius) only at small tau", only_small,
           "kappa 0.02 (tau " + fmt(tau_w, 3) + "): l/Gamma = " + fmt(fw.length / gbar_w, 3) + " (tol 15%); kappa 0.5 (tau " +
               fmt(tau, 3) + "): l/Gamma = " + fmt(f.length / gbar, 3) + " (must be < 0.6)");
  }
}

// ---------------------------------------------------------------------------
// 5. Ullah density for N=2, M=1

void group_ullah() {
  const Index n = 2;
  const double kappa = 1.0;
  const double a = goe_radius(n, 1.0);
  const double channel = width_from_coupling(kappa, n, 1.0);
  // Density parameter gamma of exp(-N Gamma / gamma) for widths 2 pi A^2 with A ~ N(0, channel / (2 pi N)).
  const double gamma = 2.0 * channel;

  // Fine grid in (E, u = sqrt(Gamma)); Gamma^{-1/2} dGamma = 2 du absorbs the edge singularity.
  const int ne = 90, nu = 70;
  const double emax = 3.6 * a / std::sqrt(2.0 * n), umax = std::sqrt(12.0 * channel);
  const double de = 2.0 * emax / ne, du = umax / nu;
  std::vector<ComplexEnergy> nodes;
  for (int i = 0; i < ne; ++i)
    for (int j = 0; j < nu; ++j) nodes.push_back({-emax + (i + 0.5) * de, std::pow((j + 0.5) * du, 2)});
  const std::size_t g = nodes.size();
  std::vector<double> marginal(g, 0.0);
  for (std::size_t p = 0; p < g; ++p) {
    double sum = 0.0;
    for (std::size_t q = 0; q < g; ++q) {
      if (p == q) continue;
      // Jacobian 2u per point turns Gamma^{-1/2} into a constant.
      const double l = ullah_log_density({nodes[p], nodes[q]}, a, gamma, n) +
                       0.5 * std::log(nodes[p].width) + 0.5 * std::log(nodes[q].width);
      sum += std::exp(l);
    }
    marginal[p] = sum;
  }
  const double total = std::accumulate(marginal.begin(), marginal.end(), 0.0);

  // Coarse cells of 10 x 7 fine nodes.
  const int ce = 9, cu = 10;
  std::vector<double> expected(static_cast<std::size_t>(ce * cu + 1), 0.0);
  for (int i = 0; i < ne; ++i)
    for (int j = 0; j < nu; ++j)
      expected[static_cast<std::size_t>((i / (ne / ce)) * cu + j / (nu / cu))] +=
          marginal[static_cast<std::size_t>(i * nu + j)] / total;

  const int samples = 40000;
  EnsembleSpec spec;
  spec.dim = n;
  spec.seed = 601;
  std::vector<double> observed(expected.size(), 0.0);
  for (int r = 0; r < samples; ++r) {
    const auto rr = static_cast<std::uint64_t>(r);
    const ResonanceSet rs = spectrum(assemble(sample_goe(spec, rr),
                                              sample_amplitudes(ChannelSpec::from_coupling({kappa}, n, 1.0), n, 601, rr)));
    auto pick = make_stream(601, rr, Stream::synthetic);
    const ComplexEnergy& z = rs.poles[pick() % 2];
    const double u = std::sqrt(z.width);
    const int i = static_cast<int>(std::floor((z.energy + emax) / de));
    const int j = static_cast<int>(std::floor(u / du));
    if (i < 0 || i >= ne || j >= nu) {
      observed.back() += 1.0;
    } else {
      observed[static_cast<std::size_t>((i / (ne / ce)) * cu + j / (nu / cu))] += 1.0;
    }
  }
  // Conditioned on the sampled window: the outside cell is dropped.
  const double outside = observed.back();
  observed.pop_back();
  expected.pop_back();
  for (auto& e : expected) e *= samples - outside;
  const ChiSquareResult chi = chi_square_test(observed, expected);
  report("5.1", "N=2, M=1 (E, Gamma) histogram matches the normalized Ullah density", chi.p_value > 0.01,
         "chi2 = " + fmt(chi.statistic) + " on " + std::to_string(chi.dof) + " dof, p = " + fmt(chi.p_value, 3) +
             "; " + std::to_string(samples) + " samples, " + fmt(outside, 3) + " outside the window");
}

// ---------------------------------------------------------------------------
// 6. Doorway

void group_doorway() {
  double sum_dev = 0.0, residual = 0.0;
  for (double gev : {0.0, 0.05, 0.2, 1.0}) {
    const FineStructureModel m = picket_fence_doorway(101, 1.0, 10.0, 0.5, gev);
    const FineStructure fs = fine_structure(m);
    cplx total = 0.0;
    for (auto b : fs.biorthogonal) total += b;
    sum_dev = std::max(sum_dev, std::abs(total - 1.0));
    residual = std::max(residual, fs.partition_residual / m.doorway_width);
  }
  report("6.1", "doorway strength sum f_j = 1", sum_dev <= 1e-10,
         "max |sum f_j - 1| = " + fmt(sum_dev) + " (biorthogonal weights, 101 background states); tol 1e-10");
  report("6.2", "width partition Gamma_j = g0 f_j + g_ev (1 - f_j)", residual <= 1e-8,
         "max residual / g0 = " + fmt(residual) + "; tol 1e-8");

  const std::vector<double> gevs = {0.05, 0.1, 0.2, 0.5, 1.0, 2.0};
  const auto grid = midpoint_grid(-10.0, 10.0, 400);
  std::vector<double> osc;
  for (double gev : gevs)
    osc.push_back(oscillation_index(strength_function(fine_structure(picket_fence_doorway(101, 1.0, 10.0, 0.5, gev)), grid)));
  bool monotone = true;
  for (std::size_t i = 1; i < osc.size(); ++i) monotone = monotone && osc[i] < osc[i - 1];
  report("6.3", "Gamma_down/D = 10: fine-structure oscillations flatten as g_ev grows", monotone,
         "oscillation index " + list(osc, 3) + " at g_ev/D " + list(gevs));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks"};
  std::vector<int> groups;
  app.add_option("--group", groups, "Criterion groups to run (default: all)")->check(CLI::Range(1, 6));
  CLI11_PARSE(app, argc, argv);
  if (groups.empty()) groups = {1, 2, 3, 4, 5, 6};

  const char* names[] = {"", "exact identities", "super-radiance", "transmission", "statistics", "Ullah density",
                         "doorway"};
  for (int grp : groups) {
    const auto t0 = std::chrono::steady_clock::now();
    std::cout << "== " << grp << ". " << names[grp] << std::endl;
    try {
      switch (grp) {
        case 1: group_exact(); break;
        case 2: group_superradiance(); break;
        case 3: group_transmission(); break;
        case 4: group_statistics(); break;
        case 5: group_ullah(); break;
        case 6: group_doorway(); break;
      }
    } catch (const std::exception& e) {
      report(std::to_string(grp) + ".x", "group aborted", false, e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << "   (" << fmt(secs, 3) << " s)" << std::endl;
  }
  std::cout << g_checks - g_failures << "/" << g_checks << " checks passed" << std::endl;
  return g_failures ? 1 : 0;
}
