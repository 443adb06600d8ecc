#pragma once
// Propagators, K/T/S matrices and the transport observables built from them.
// Conventions: K = 2 pi A^T (E - H)^-1 A, S = (1 - iK/2)(1 + iK/2)^-1,
// T = K (1 + iK/2)^-1 so that S = 1 - iT and sigma^ab = |T^ab|^2.

#include <optional>
#include <vector>

#include "oqs/heff.hpp"

namespace oqs {

/// Closed-system spectral decomposition with the amplitudes projected on it;
/// evaluates K(E) in O(N M^2) per energy.
class ChannelPropagator {
 public:
  ChannelPropagator(const RealMatrix& hermitian, const CouplingAmplitudes& amplitudes);
  ChannelPropagator(const IntrinsicHamiltonian& h, const CouplingAmplitudes& amplitudes)
      : ChannelPropagator(h.matrix(), amplitudes) {}
  explicit ChannelPropagator(const EffectiveHamiltonian& heff)
      : ChannelPropagator(heff.hermitian_part(), heff.amplitudes()) {}

  /// Throws SingularityError when E is within 1e-12 (relative) of a level.
  RealMatrix k_matrix(double energy) const;

  const RealVector& levels() const { return levels_; }
  const RealMatrix& vectors() const { return vectors_; }
  /// U^T A.
  const RealMatrix& projected() const { return projected_; }
  Index channels() const { return projected_.cols(); }

  void check_regular(double energy) const;

 private:
  RealVector levels_;
  RealMatrix vectors_;
  RealMatrix projected_;
  double scale_ = 1.0;
};

RealMatrix k_matrix(const IntrinsicHamiltonian& h, const CouplingAmplitudes& a, double energy);

/// Throws NumericError when 1 + iK/2 is ill-conditioned.
ComplexMatrix s_matrix(const ComplexMatrix& k);
ComplexMatrix t_matrix(const ComplexMatrix& k);
inline ComplexMatrix s_matrix(const RealMatrix& k) { return s_matrix(ComplexMatrix(k.cast<cplx>())); }
inline ComplexMatrix t_matrix(const RealMatrix& k) { return t_matrix(ComplexMatrix(k.cast<cplx>())); }

/// (E - H_eff)^-1 from the closed-system Green function and an M x M correction.
ComplexMatrix full_propagator(const EffectiveHamiltonian& heff, double energy);
/// (E - H_eff)^-1 by dense LU, used as a reference.
ComplexMatrix direct_propagator(const EffectiveHamiltonian& heff, double energy);

struct ScatteringSample {
  double energy = 0.0;
  RealMatrix k;
  ComplexMatrix t;
  ComplexMatrix s;
  /// |T^ab|^2.
  RealMatrix sigma;
  /// Landauer sum over the left/right partition; NaN for odd M.
  double conductance = 0.0;
};

ScatteringSample scatter(const ChannelPropagator& prop, double energy);

/// Max |S^dagger S - 1| and |S - S^T|.
double unitarity_defect(const ComplexMatrix& s);
double symmetry_defect(const ComplexMatrix& s);

/// G = sum over b < M/2 <= a of sigma^ab. Throws StructuralError for odd M.
double conductance(const RealMatrix& sigma);

/// 4 kappa / (1 + kappa)^2.
double transmission_coefficient(double kappa);
/// 1 - |<S^aa>|^2 for an averaged diagonal.
struct TransmissionReport {
  RealVector measured;
  RealVector predicted;
};
TransmissionReport transmission(const ComplexVector& mean_s_diagonal, const RealVector& kappa);

/// F = <sigma_fl^aa> / <sigma_fl^ab>. Throws FitError when the inelastic
/// average is not positive.
double enhancement_factor(double elastic_fl, double inelastic_fl);
/// F tau / (F + M - 1).
double elastic_from_enhancement(double f, double tau, Index channels);
/// (M/2)^2 tau / (F + M - 1) in the equivalent-channel case.
double mean_conductance_prediction(double f, double tau, Index channels);

/// Lag-resolved second moments of a sampled signal on a uniform energy grid.
/// Mergeable: add() over any partition of series, then merge(), gives the
/// same sums as one pass.
class CorrelationAccumulator {
 public:
  explicit CorrelationAccumulator(Index max_lag = 0);

  void add(const std::vector<double>& series);
  void add(const std::vector<cplx>& series);
  void merge(const CorrelationAccumulator& other);

  Index max_lag() const { return max_lag_; }
  /// Covariance at each lag, Re for complex series.
  std::vector<double> covariance() const;
  /// Sample means over the first and second half of the window, for drift checks.
  double first_half_mean() const;
  double second_half_mean() const;

 private:
  Index max_lag_;
  std::vector<cplx> sum_xy_;
  std::vector<cplx> sum_x_;
  std::vector<cplx> sum_y_;
  std::vector<double> count_;
  cplx half_sum_[2] = {0.0, 0.0};
  double half_count_[2] = {0.0, 0.0};
};

struct CorrelationFit {
  std::vector<double> lag;  // energy offsets
  std::vector<double> ratio;  // C(eps) / C(0)
  double length = 0.0;  // fitted l
  double initial_guess = 0.0;  // half width at half maximum
  double residual = 0.0;  // rms of the fit
  bool drift_warning = false;
};

/// Fits r(eps) = l^2 / (eps^2 + l^2) for eps up to 5x the half-width guess.
CorrelationFit fit_lorentzian(const CorrelationAccumulator& acc, double step);

/// D M tau / 2 pi.
double correlation_length_prediction(Index channels, double tau, double spacing);
/// -D (M / 2 pi) ln(1 - tau).
double mean_width_prediction(Index channels, double tau, double spacing);

/// Real grid of n points spanning [lo, hi] (midpoints of n equal cells).
std::vector<double> midpoint_grid(double lo, double hi, Index n);

}  // namespace oqs
