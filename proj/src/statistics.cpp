#include "oqs/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/gamma.hpp>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "oqs/errors.hpp"
#include "oqs/rng.hpp"

namespace oqs {

UnfoldedSpacings unfold_and_spacings(std::vector<double> levels, double window, int degree) {
  std::sort(levels.begin(), levels.end());
  const std::size_t total = levels.size();
  const auto keep = static_cast<std::size_t>(std::llround(window * static_cast<double>(total)));
  if (keep < 20) throw StructuralError("unfolding needs at least 20 levels in the window");
  const std::size_t start = (total - keep) / 2;
  const std::vector<double> e(levels.begin() + static_cast<std::ptrdiff_t>(start),
                              levels.begin() + static_cast<std::ptrdiff_t>(start + keep));

  const double lo = e.front(), hi = e.back();
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  if (!(half > 0.0)) throw StructuralError("unfolding window has zero width");
  const int deg = std::min<int>(degree, static_cast<int>(keep) - 2);

  // Staircase N(E_i) = i + 1/2 against a polynomial in x = (E - mid) / half.
  RealMatrix v(static_cast<Index>(keep), deg + 1);
  RealVector y(static_cast<Index>(keep));
  for (std::size_t i = 0; i < keep; ++i) {
    const double x = (e[i] - mid) / half;
    double p = 1.0;
    for (int d = 0; d <= deg; ++d, p *= x) v(static_cast<Index>(i), d) = p;
    y(static_cast<Index>(i)) = static_cast<double>(i) + 0.5;
  }
  const RealVector coef = v.colPivHouseholderQr().solve(y);
  const RealVector unfolded = v * coef;

  UnfoldedSpacings out;
  out.method = "poly" + std::to_string(deg) + "-central" + std::to_string(window);
  for (Index i = 1; i < unfolded.size(); ++i) out.s.push_back(unfolded(i) - unfolded(i - 1));
  out.mean = std::accumulate(out.s.begin(), out.s.end(), 0.0) / static_cast<double>(out.s.size());
  return out;
}

std::vector<double> centroids_without_widest(const ResonanceSet& rs, Index drop) {
  std::vector<ComplexEnergy> p = rs.poles;
  std::stable_sort(p.begin(), p.end(), width_order);
  std::vector<double> out;
  const std::size_t keep = p.size() - static_cast<std::size_t>(std::min<Index>(drop, static_cast<Index>(p.size())));
  for (std::size_t i = 0; i < keep; ++i) out.push_back(p[i].energy);
  return out;
}

double wigner_pdf(double s) { return s < 0 ? 0.0 : 0.5 * kPi * s * std::exp(-0.25 * kPi * s * s); }
double wigner_cdf(double s) { return s < 0 ? 0.0 : 1.0 - std::exp(-0.25 * kPi * s * s); }
double poisson_cdf(double s) { return s < 0 ? 0.0 : 1.0 - std::exp(-s); }

Proportion p_zero(const std::vector<double>& spacings, double threshold) {
  Proportion p;
  p.total = spacings.size();
  p.count = static_cast<std::size_t>(std::count_if(spacings.begin(), spacings.end(),
                                                   [&](double s) { return s < threshold; }));
  if (p.total) {
    const double n = static_cast<double>(p.total);
    p.value = static_cast<double>(p.count) / n;
    p.error = std::sqrt(std::max(p.value * (1.0 - p.value), 1.0 / n) / n);
  }
  return p;
}

double p_zero_wigner(double threshold) { return wigner_cdf(threshold); }

double kolmogorov_q(double lambda) {
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 ? 1.0 : -1.0) * term;
    if (term < 1e-17) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_test(std::vector<double> x, const std::function<double(double)>& cdf) {
  if (x.empty()) throw FitError("KS test needs samples");
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  const double sn = std::sqrt(n);
  return {d, kolmogorov_q((sn + 0.12 + 0.11 / sn) * d)};
}

MixtureFit spacing_mixture_fit(const std::vector<double>& s) {
  if (s.size() < 10) throw FitError("mixture fit needs samples");
  std::vector<double> pw(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) pw[i] = wigner_pdf(s[i]);

  auto loglik = [&](double alpha, double sigma) {
    const double norm = 1.0 / (std::sqrt(kTwoPi) * sigma);
    double l = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double z = (s[i] - 1.0) / sigma;
      const double p = alpha * pw[i] + (1.0 - alpha) * norm * std::exp(-0.5 * z * z);
      l += std::log(std::max(p, std::numeric_limits<double>::min()));
    }
    return l;
  };
  auto best_alpha = [&](double sigma) {
    auto [a, v] = boost::math::tools::brent_find_minima([&](double al) { return -loglik(al, sigma); }, 0.0, 1.0, 40);
    // Brent stays inside the bracket; check the end points explicitly.
    double la = -v;
    for (double edge : {0.0, 1.0}) {
      const double le = loglik(edge, sigma);
      if (le >= la) {
        la = le;
        a = edge;
      }
    }
    return std::pair{a, la};
  };
  auto [ls, nv] = boost::math::tools::brent_find_minima(
      [&](double logsig) { return -best_alpha(std::exp(logsig)).second; }, std::log(0.02), std::log(3.0), 40);
  MixtureFit fit;
  fit.sigma = std::exp(ls);
  const auto [a, l] = best_alpha(fit.sigma);
  fit.alpha = a;
  fit.log_likelihood = l;
  (void)nv;
  return fit;
}

void MomentAccumulator::add(double x) {
  if (!(x > 0.0)) {
    ++nonpositive;
    return;
  }
  ++n;
  sum += x;
  sum_sq += x * x;
  sum_log += std::log(x);
}

void MomentAccumulator::merge(const MomentAccumulator& o) {
  n += o.n;
  nonpositive += o.nonpositive;
  sum += o.sum;
  sum_sq += o.sum_sq;
  sum_log += o.sum_log;
}

double MomentAccumulator::variance() const {
  if (n < 2) return 0.0;
  const double m = mean();
  return (sum_sq - static_cast<double>(n) * m * m) / static_cast<double>(n - 1);
}

double chi2_unit_mean_pdf(double x, double nu) {
  if (x <= 0.0) return 0.0;
  const double k = 0.5 * nu;
  return std::exp(k * std::log(k) - std::lgamma(k) + (k - 1.0) * std::log(x) - k * x);
}

NuFit nu_fit(const MomentAccumulator& acc) {
  if (acc.n < 2) throw FitError("nu fit needs at least two positive widths");
  const double c = std::log(acc.mean()) - acc.sum_log / static_cast<double>(acc.n);
  if (!(c > 1e-12)) throw FitError("nu fit: degenerate sample (all widths equal)");
  auto f = [c](double logk) {
    const double k = std::exp(logk);
    return std::log(k) - boost::math::digamma(k) - c;
  };
  boost::math::tools::eps_tolerance<double> tol(50);
  std::uintmax_t iters = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(f, std::log(1e-6), std::log(1e8), tol, iters);
  const double k = std::exp(0.5 * (a + b));
  NuFit fit;
  fit.nu = 2.0 * k;
  fit.error = 2.0 / std::sqrt(static_cast<double>(acc.n) * (boost::math::trigamma(k) - 1.0 / k));
  return fit;
}

NuFit nu_fit(const std::vector<double>& widths, int bins) {
  MomentAccumulator acc;
  for (double w : widths) acc.add(w);
  NuFit fit = nu_fit(acc);

  const double mean = acc.mean();
  const double k = 0.5 * fit.nu;
  boost::math::gamma_distribution<double> g(k, 1.0 / k);
  std::vector<double> edges;
  for (int b = 1; b < bins; ++b) edges.push_back(boost::math::quantile(g, static_cast<double>(b) / bins));
  std::vector<double> observed(static_cast<std::size_t>(bins), 0.0);
  for (double w : widths) {
    if (!(w > 0.0)) continue;
    const double x = w / mean;
    observed[static_cast<std::size_t>(std::upper_bound(edges.begin(), edges.end(), x) - edges.begin())] += 1.0;
  }
  const std::vector<double> expected(static_cast<std::size_t>(bins), static_cast<double>(acc.n) / bins);
  const ChiSquareResult chi = chi_square_test(observed, expected, 1);
  fit.chi2 = chi.statistic;
  fit.dof = chi.dof;
  fit.p_value = chi.p_value;
  return fit;
}

TailFit tail_exponent(std::vector<double> w, double quantile, int bins) {
  w.erase(std::remove_if(w.begin(), w.end(), [](double x) { return !(x > 0.0); }), w.end());
  if (w.size() < 20) throw FitError("tail fit needs samples");
  const double mean = std::accumulate(w.begin(), w.end(), 0.0) / static_cast<double>(w.size());
  for (double& x : w) x /= mean;
  std::sort(w.begin(), w.end());

  TailFit fit;
  fit.lower = w[static_cast<std::size_t>(quantile * static_cast<double>(w.size() - 1))];
  const double upper = 10.0 * fit.lower;
  const double r = std::log(10.0) / bins;
  std::vector<double> counts(static_cast<std::size_t>(bins), 0.0);
  for (double x : w) {
    if (x < fit.lower || x >= upper) continue;
    const int b = std::min(bins - 1, static_cast<int>(std::log(x / fit.lower) / r));
    counts[static_cast<std::size_t>(b)] += 1.0;
    ++fit.in_window;
  }
  fit.sparse = fit.in_window < 50;
  if (fit.in_window < 2) throw FitError("tail fit: no samples in the fit window");

  // Cell probabilities of a power law x^s over log-spaced edges.
  auto probs = [&](double s) {
    std::vector<double> p(static_cast<std::size_t>(bins));
    double total = 0.0;
    for (int b = 0; b < bins; ++b) {
      const double a = fit.lower * std::exp(r * b), c = fit.lower * std::exp(r * (b + 1));
      const double v = std::abs(s + 1.0) < 1e-12 ? std::log(c / a)
                                                 : (std::pow(c, s + 1.0) - std::pow(a, s + 1.0)) / (s + 1.0);
      p[static_cast<std::size_t>(b)] = v;
      total += v;
    }
    for (double& x : p) x /= total;
    return p;
  };
  auto nll = [&](double s) {
    const auto p = probs(s);
    double l = 0.0;
    for (int b = 0; b < bins; ++b)
      if (counts[static_cast<std::size_t>(b)] > 0) l -= counts[static_cast<std::size_t>(b)] * std::log(p[static_cast<std::size_t>(b)]);
    return l;
  };
  auto [s, v] = boost::math::tools::brent_find_minima(nll, -12.0, 4.0, 50);
  (void)v;
  fit.slope = s;
  const double h = 1e-3;
  const double curv = (nll(s + h) - 2.0 * nll(s) + nll(s - h)) / (h * h);
  fit.slope_error = curv > 0 ? 1.0 / std::sqrt(curv) : INFINITY;

  const auto p = probs(s);
  std::vector<double> expected(p.size());
  for (std::size_t b = 0; b < p.size(); ++b) expected[b] = p[b] * static_cast<double>(fit.in_window);
  const ChiSquareResult chi = chi_square_test(counts, expected, 1);
  fit.chi2 = chi.statistic;
  fit.dof = chi.dof;
  fit.p_value = chi.p_value;
  fit.power_law_rejected = chi.dof > 0 && chi.p_value < 0.01;
  return fit;
}

double ullah_log_density(const std::vector<ComplexEnergy>& pts, double a, double gamma, Index n) {
  double lp = 0.0, f = 0.0;
  const double a2 = a * a;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (!(pts[i].width > 0.0)) throw StructuralError("Ullah density needs positive widths");
    lp -= 0.5 * std::log(pts[i].width);
    f += pts[i].energy * pts[i].energy / a2 + pts[i].width / gamma;
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double d = std::abs(pts[i].value() - pts[j].value());
      if (d == 0.0) return -std::numeric_limits<double>::infinity();
      lp += 2.0 * std::log(d) - std::log(std::abs(pts[i].value() - std::conj(pts[j].value())));
      f += 0.5 * pts[i].width * pts[j].width / a2;
    }
  }
  return lp - static_cast<double>(n) * f;
}

VarianceEstimate conductance_variance(const std::vector<double>& g, std::uint64_t seed, int resamples,
                                      double level) {
  VarianceEstimate est;
  est.samples = g.size();
  if (g.size() < 2) throw FitError("variance needs at least two samples");
  auto var_of = [](const std::vector<double>& x) {
    const double n = static_cast<double>(x.size());
    const double m = std::accumulate(x.begin(), x.end(), 0.0) / n;
    double s = 0.0;
    for (double v : x) s += (v - m) * (v - m);
    return std::pair{s / (n - 1.0), m};
  };
  std::tie(est.variance, est.mean) = var_of(g);

  auto gen = make_stream(seed, 0, Stream::bootstrap);
  std::vector<double> reps;
  std::vector<double> sample(g.size());
  for (int b = 0; b < resamples; ++b) {
    for (double& x : sample) x = g[static_cast<std::size_t>(gen() % g.size())];
    reps.push_back(var_of(sample).first);
  }
  std::sort(reps.begin(), reps.end());
  const double tail = 0.5 * (1.0 - level);
  est.lower = reps[static_cast<std::size_t>(tail * (resamples - 1))];
  est.upper = reps[static_cast<std::size_t>((1.0 - tail) * (resamples - 1))];
  return est;
}

ChiSquareResult chi_square_test(const std::vector<double>& observed, const std::vector<double>& expected,
                                int fitted_parameters, double min_expected) {
  if (observed.size() != expected.size()) throw StructuralError("chi-square: size mismatch");
  std::vector<double> o, e;
  double co = 0.0, ce = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    co += observed[i];
    ce += expected[i];
    if (ce >= min_expected) {
      o.push_back(co);
      e.push_back(ce);
      co = ce = 0.0;
    }
  }
  if (ce > 0.0 || co > 0.0) {
    if (e.empty()) {
      o.push_back(co);
      e.push_back(ce);
    } else {
      o.back() += co;
      e.back() += ce;
    }
  }
  ChiSquareResult r;
  r.cells = static_cast<int>(o.size());
  for (std::size_t i = 0; i < o.size(); ++i)
    if (e[i] > 0) r.statistic += (o[i] - e[i]) * (o[i] - e[i]) / e[i];
  r.dof = r.cells - 1 - fitted_parameters;
  if (r.dof > 0) {
    boost::math::chi_squared_distribution<double> d(r.dof);
    r.p_value = boost::math::cdf(boost::math::complement(d, r.statistic));
  } else {
    r.p_value = 1.0;
  }
  return r;
}

void Histogram::add(double x) {
  if (x < lo) {
    underflow += 1.0;
    return;
  }
  if (x >= hi) {
    overflow += 1.0;
    return;
  }
  auto b = static_cast<std::size_t>((x - lo) / width());
  counts[std::min(b, counts.size() - 1)] += 1.0;
}

void Histogram::merge(const Histogram& o) {
  if (o.counts.size() != counts.size() || o.lo != lo || o.hi != hi)
    throw StructuralError("cannot merge histograms with different binning");
  for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += o.counts[i];
  underflow += o.underflow;
  overflow += o.overflow;
}

double Histogram::total() const {
  return std::accumulate(counts.begin(), counts.end(), 0.0) + underflow + overflow;
}

}  // namespace oqs
