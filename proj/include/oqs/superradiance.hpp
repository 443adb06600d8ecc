#pragma once
// Closed-form few-level models: the two-level continuum model with optional
// threshold laws, the one-channel broad-pole expansion, two-channel widths,
// Dicke rates and the Fano single-resonance profile.

#include <array>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "oqs/heff.hpp"

namespace oqs {

struct ThresholdLaw {
  /// gamma_1(E) = beta E^{3/2} (p-wave), gamma_2(E) = alpha sqrt(E) (s-wave),
  /// both zero at and below E = 0.
  double alpha = 0.0;
  double beta = 0.0;
};

/// The 2 x 2 matrix [[e1 - i g1/2, v - i A1 A2/2], [v - i A1 A2/2, e2 - i g2/2]]
/// with g_i = A_i^2 (the 2 pi is absorbed in A).
struct TwoLevelModel {
  double eps1 = 0.0;
  double eps2 = 0.0;
  double v = 0.0;
  double a1 = 0.0;
  double a2 = 0.0;
  std::optional<ThresholdLaw> threshold;

  double gamma1() const { return a1 * a1; }
  double gamma2() const { return a2 * a2; }
  /// Amplitudes at energy E: fixed, or from the threshold laws keeping the signs of a1, a2.
  std::pair<double, double> amplitudes_at(double energy) const;
  ComplexMatrix matrix(double energy = 0.0) const;
};

/// (E+, E-) from the quadratic formula with the principal square root;
/// E+ = eps in the degenerate v = 0 case.
std::pair<cplx, cplx> two_level_eigenvalues(const TwoLevelModel& m, double energy = 0.0);

struct SelfConsistentResult {
  /// Solutions of Re E(E) = E, each with the pole evaluated there.
  std::vector<ComplexEnergy> resonances;
  /// The lower root of the model at E = 0 lies at or below threshold.
  bool bound_state = false;
  /// Re of the lower eigenvalue at threshold (widths vanish there).
  double lower_at_threshold = 0.0;
  /// (E, Re E_low - E, Re E_high - E) on the scan grid, for diagnostics.
  std::vector<std::array<double, 3>> scan;
};

/// Bisection on sign changes of Re E(E) - E over a log grid in [e_min, e_max].
/// Throws RegimeError with the scan trace when no root is found.
SelfConsistentResult two_level_selfconsistent(const TwoLevelModel& m, double e_min = 1e-9,
                                              double e_max = 0.0, int grid = 2000);

/// Lower threshold eigenvalue over a list of couplings v, for locating the
/// bound-state onset.
std::vector<std::pair<double, double>> threshold_scan(TwoLevelModel m, const std::vector<double>& v_values);

/// Resonance amplitude [E (g1 + g2) - g1 e2 - g2 e1 + 2 v A1 A2] / det(E - H_eff).
cplx two_level_amplitude(const TwoLevelModel& m, double energy);

struct OneChannelSecular {
  std::vector<double> levels;
  std::vector<double> widths;

  double total_width() const;
  double centroid() const;
};

struct BroadPole {
  double energy = 0.0;
  double width = 0.0;
  /// Size of the neglected next-order terms.
  double error = 0.0;
  /// w / (N kappa^2).
  double trapped_width = 0.0;
  double kappa = 0.0;
};

/// Second-order large-coupling expansion of the broad root. Throws
/// RegimeError unless kappa = pi w / (2 N D) exceeds 1.
BroadPole broad_pole_expansion(const OneChannelSecular& s, double spacing);

/// Exact roots of the one-channel secular equation via the N x N eigenproblem.
ResonanceSet one_channel_poles(const OneChannelSecular& s);

/// Gamma_pm = (w +- sqrt(w^2 - 4 g_a g_b sin^2 theta)) / 2.
std::pair<double, double> two_channel_widths(double gamma_a, double gamma_b, double theta);

/// |<S, M-1|S_-|S, M>|^2 = S(S+1) - M(M-1) in units of |A|^2.
double dicke_rate(double s, double m);

/// |a(E)|^2 = (Gamma/2pi) / ((E - eps - Delta)^2 + Gamma^2/4) on a grid.
std::vector<double> fano_profile(double eps, const std::function<double(double)>& shift,
                                 const std::function<double(double)>& width,
                                 const std::vector<double>& grid);
/// Same with Gamma(E) = 2 pi |A(E)|^2 built from the amplitude.
std::vector<double> fano_profile_from_amplitude(double eps, const std::function<double(double)>& shift,
                                                const std::function<double(double)>& amplitude,
                                                const std::vector<double>& grid);

}  // namespace oqs
