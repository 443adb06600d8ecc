#pragma once
// Estimators over resonance samples: unfolding and spacings, P(0), the
// Wigner/Gaussian spacing mixture, chi-square nu fits of widths, power-law
// tails, the one-channel Ullah density and conductance variance.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "oqs/heff.hpp"

namespace oqs {

struct UnfoldedSpacings {
  std::vector<double> s;
  std::string method;
  double mean = 0.0;
};

/// Unfolds the central `window` fraction (by count) of the sorted levels with
/// a least-squares polynomial fit to the staircase and returns consecutive
/// spacings. Throws StructuralError with fewer than 20 levels in the window.
UnfoldedSpacings unfold_and_spacings(std::vector<double> levels, double window = 0.2, int degree = 5);

/// Centroids of a resonance set with the `drop` widest poles removed.
std::vector<double> centroids_without_widest(const ResonanceSet& rs, Index drop);

double wigner_pdf(double s);
double wigner_cdf(double s);
double poisson_cdf(double s);

struct Proportion {
  double value = 0.0;
  double error = 0.0;  // binomial standard error
  std::size_t count = 0;
  std::size_t total = 0;
};

/// Fraction of spacings below the threshold.
Proportion p_zero(const std::vector<double>& spacings, double threshold = 0.04);
/// Wigner-surmise value of the same fraction.
double p_zero_wigner(double threshold = 0.04);

struct KsResult {
  double statistic = 0.0;
  double p_value = 0.0;
};

/// One-sample Kolmogorov-Smirnov test against a continuous CDF.
KsResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf);
/// Asymptotic Kolmogorov survival function Q(lambda).
double kolmogorov_q(double lambda);

struct MixtureFit {
  double alpha = 0.0;  // Wigner weight
  double sigma = 0.0;  // width of the unit-mean Gaussian
  double log_likelihood = 0.0;
};

/// Joint maximum likelihood of alpha in [0,1] and the Gaussian width for
/// alpha P_W(s) + (1 - alpha) N(s; 1, sigma).
MixtureFit spacing_mixture_fit(const std::vector<double>& spacings);

/// Mergeable count / sum / sum of squares / sum of logs over positive samples.
struct MomentAccumulator {
  std::size_t n = 0;
  std::size_t nonpositive = 0;
  double sum = 0.0;
  double sum_sq = 0.0;
  double sum_log = 0.0;

  void add(double x);
  void merge(const MomentAccumulator& o);
  double mean() const { return n ? sum / static_cast<double>(n) : 0.0; }
  double variance() const;
};

struct NuFit {
  double nu = 0.0;
  double error = 0.0;  // asymptotic standard error
  double chi2 = 0.0;  // Pearson statistic on equiprobable bins
  int dof = 0;
  double p_value = 0.0;
};

/// Maximum-likelihood chi-square degrees of freedom of widths normalized to
/// unit mean. Throws FitError for degenerate samples.
NuFit nu_fit(const std::vector<double>& widths, int bins = 20);
/// The same estimate from sufficient statistics (no goodness of fit).
NuFit nu_fit(const MomentAccumulator& acc);

/// Chi-square density of unit mean with nu degrees of freedom.
double chi2_unit_mean_pdf(double x, double nu);

struct TailFit {
  double slope = 0.0;
  double slope_error = 0.0;
  double lower = 0.0;  // fit window [lower, 10 lower]
  std::size_t in_window = 0;
  double chi2 = 0.0;
  int dof = 0;
  double p_value = 0.0;
  /// p_value < 0.01: the power law does not describe the tail.
  bool power_law_rejected = false;
  bool sparse = false;  // fewer than 50 samples in the window
};

/// Power-law fit of the density over the decade starting at the given
/// quantile, by Poisson maximum likelihood on log-spaced bins.
TailFit tail_exponent(std::vector<double> widths, double quantile = 0.9, int bins = 10);

/// Unnormalized log of the one-channel Ullah density for scale a, mean
/// width gamma and dimension N. Returns -inf for coincident points.
double ullah_log_density(const std::vector<ComplexEnergy>& points, double a, double gamma, Index n);

struct VarianceEstimate {
  double variance = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double mean = 0.0;
  std::size_t samples = 0;
};

/// Sample variance with a percentile bootstrap interval.
VarianceEstimate conductance_variance(const std::vector<double>& g, std::uint64_t seed = 1,
                                      int resamples = 1000, double level = 0.95);

/// Pearson chi-square of observed counts against expected counts, merging
/// adjacent cells until each expects at least `min_expected`.
struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 0.0;
  int cells = 0;
};
ChiSquareResult chi_square_test(const std::vector<double>& observed, const std::vector<double>& expected,
                                int fitted_parameters = 0, double min_expected = 5.0);

/// Mergeable fixed-bin histogram.
struct Histogram {
  double lo = 0.0;
  double hi = 1.0;
  std::vector<double> counts;
  double underflow = 0.0;
  double overflow = 0.0;

  Histogram() = default;
  Histogram(double lo, double hi, std::size_t bins) : lo(lo), hi(hi), counts(bins, 0.0) {}
  void add(double x);
  void merge(const Histogram& o);
  double total() const;
  double width() const { return (hi - lo) / static_cast<double>(counts.size()); }
};

}  // namespace oqs
