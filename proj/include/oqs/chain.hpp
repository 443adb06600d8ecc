#pragma once
// Tight-binding chain of N sites with hopping v, open at both ends to leads of
// widths gamma_L (site 1) and gamma_R (site N), with optional diagonal disorder.

#include <cstdint>
#include <utility>
#include <vector>

#include "oqs/heff.hpp"

namespace oqs {

struct ChainSpec {
  Index sites = 100;
  double hopping = 1.0;
  double site_energy = 0.0;
  double gamma_left = 1.0;
  double gamma_right = 1.0;
  /// Half-width of the uniform site-energy disorder.
  double disorder = 0.0;
  std::uint64_t seed = 1;

  /// gamma_L = gamma, gamma_R = gamma / q.
  static ChainSpec asymmetric(Index sites, double hopping, double gamma, double q);
  double asymmetry() const { return gamma_left / gamma_right; }
  void validate() const;
};

struct BlochBasis {
  /// 2 v cos(pi q / (N+1)), q = 1..N (descending).
  RealVector energies;
  /// Columns sqrt(2/(N+1)) sin(n pi q / (N+1)).
  RealMatrix vectors;
};

BlochBasis bloch_basis(const ChainSpec& spec);

/// Real part of the chain Hamiltonian, disorder drawn for the realization.
RealMatrix chain_hamiltonian(const ChainSpec& spec, std::uint64_t realization = 0);
/// N x 2 amplitudes, column 0 on site 1 (left) and column 1 on site N (right).
CouplingAmplitudes chain_amplitudes(const ChainSpec& spec);
EffectiveHamiltonian chain_heff(const ChainSpec& spec, std::uint64_t realization = 0);
ResonanceSet chain_poles(const ChainSpec& spec, std::uint64_t realization = 0);

/// (P+, P-) by direct summation over Bloch states at a complex energy.
std::pair<cplx, cplx> direct_sum_p(const ChainSpec& spec, cplx energy);
/// Closed form of (P+, P-) in eps = E / 2v; trigonometric inside the band
/// with the analytic limits at eps = +-1.
std::pair<cplx, cplx> closed_form_p(const ChainSpec& spec, cplx eps);
/// (P+, P-) in the band at fixed beta with the fine-structure phase (N+1) beta
/// replaced by phi.
std::pair<cplx, cplx> phase_p(const ChainSpec& spec, double beta, double phi);

/// |det(1 + iK/2)| from the P sums at a complex energy; vanishes at the poles.
double secular_value(const ChainSpec& spec, cplx energy);

/// Chain K-matrix (2 x 2) from P sums.
ComplexMatrix chain_k_matrix(const ChainSpec& spec, cplx p_plus, cplx p_minus);

struct ChainTransmission {
  double ll = 0.0;
  double lr = 0.0;
  double rr = 0.0;
  cplx t_ll = 0.0;
};

/// Closed forms for tau^LL, tau^LR, tau^RR at eps = cos(beta) inside the band.
ChainTransmission chain_transmission_closed(const ChainSpec& spec, double energy);
/// S-matrix route through the propagator of the chain (any disorder).
ChainTransmission chain_transmission_numeric(const ChainSpec& spec, double energy,
                                             std::uint64_t realization = 0);
/// Average of the P-sum S-matrix transmission over the phase phi at fixed beta.
ChainTransmission chain_transmission_phase_average(const ChainSpec& spec, double energy, int phases = 256);

/// (1/4v) times the integral of tau^LR over the band by adaptive
/// Gauss-Kronrod panels between closed-chain levels.
double integrated_transmission(const ChainSpec& spec, std::uint64_t realization = 0);
/// (pi gamma / 2v) / ((q+1)(1 + gamma^2 / (4 v^2 q))).
double integrated_transmission_prediction(double hopping, double gamma, double q);

struct IntegratedScan {
  std::vector<double> gammas;
  std::vector<double> values;
  std::vector<double> predicted;
  double argmax = 0.0;
  double critical = 0.0;  // 2 v sqrt(q)
};

/// Realization-averaged integrated transmission over a gamma grid at fixed q.
IntegratedScan integrated_scan(const ChainSpec& base, double q, const std::vector<double>& gammas,
                               Index realizations = 1);

std::vector<double> log_grid(double lo, double hi, Index n);

}  // namespace oqs
