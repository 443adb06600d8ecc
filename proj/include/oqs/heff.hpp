#pragma once
// Effective non-Hermitian Hamiltonian H_eff = H + Delta - (i/2) W with a
// factorized anti-Hermitian part W = 2 pi A A^T, and its complex spectrum.

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace oqs {

using Index = Eigen::Index;
using cplx = std::complex<double>;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// A resonance pole E - (i/2) Gamma.
struct ComplexEnergy {
  double energy = 0.0;
  double width = 0.0;

  cplx value() const { return {energy, -0.5 * width}; }
  static ComplexEnergy from_complex(cplx z) { return {z.real(), -2.0 * z.imag()}; }

  friend bool operator==(const ComplexEnergy&, const ComplexEnergy&) = default;
};

/// Centroid ascending, ties broken by width descending.
inline bool centroid_order(const ComplexEnergy& a, const ComplexEnergy& b) {
  if (a.energy != b.energy) return a.energy < b.energy;
  return a.width > b.width;
}

inline bool width_order(const ComplexEnergy& a, const ComplexEnergy& b) {
  if (a.width != b.width) return a.width < b.width;
  return a.energy < b.energy;
}

/// Real symmetric intrinsic Hamiltonian with its nominal mean level spacing
/// at the centre of the spectrum.
class IntrinsicHamiltonian {
 public:
  IntrinsicHamiltonian() = default;
  explicit IntrinsicHamiltonian(RealMatrix h, double spacing = 1.0);

  const RealMatrix& matrix() const { return h_; }
  Index dim() const { return h_.rows(); }
  double spacing() const { return spacing_; }

 private:
  RealMatrix h_;
  double spacing_ = 1.0;
};

/// Real N x M continuum coupling amplitudes, one column per open channel.
class CouplingAmplitudes {
 public:
  CouplingAmplitudes() = default;
  explicit CouplingAmplitudes(RealMatrix a);

  const RealMatrix& matrix() const { return a_; }
  Index states() const { return a_.rows(); }
  Index channels() const { return a_.cols(); }

  /// gamma^c = 2 pi sum_n (A_n^c)^2, the trace of the channel's share of W.
  double channel_width(Index c) const;
  RealVector channel_widths() const;
  /// kappa^c = pi gamma^c / (2 N D); kappa = 1 is perfect coupling.
  double coupling(Index c, double spacing) const;

 private:
  RealMatrix a_;
};

/// W = 2 pi A A^T.
RealMatrix build_w_matrix(const CouplingAmplitudes& amplitudes);

/// Conversions between the dimensionless coupling and the channel width.
double width_from_coupling(double kappa, Index states, double spacing);
double coupling_from_width(double gamma, Index states, double spacing);

class EffectiveHamiltonian {
 public:
  const IntrinsicHamiltonian& intrinsic() const { return h_; }
  const CouplingAmplitudes& amplitudes() const { return a_; }
  const RealMatrix& shift() const { return shift_; }

  Index dim() const { return h_.dim(); }
  /// H + Delta.
  RealMatrix hermitian_part() const { return h_.matrix() + shift_; }
  RealMatrix w() const { return build_w_matrix(a_); }
  double trace_w() const;
  ComplexMatrix matrix() const;

  friend EffectiveHamiltonian assemble(IntrinsicHamiltonian, CouplingAmplitudes,
                                       std::optional<RealMatrix>);

 private:
  IntrinsicHamiltonian h_;
  CouplingAmplitudes a_;
  RealMatrix shift_;
};

/// Throws StructuralError on dimension mismatch or an asymmetric shift.
EffectiveHamiltonian assemble(IntrinsicHamiltonian h, CouplingAmplitudes a,
                              std::optional<RealMatrix> shift = std::nullopt);

struct ResonanceSet {
  std::vector<ComplexEnergy> poles;
  /// Right eigenvectors as columns, ordered like poles.
  std::optional<ComplexMatrix> right;
  /// Left eigenvectors as columns with left^T * right = 1.
  std::optional<ComplexMatrix> left;
  /// False near exceptional points where the biorthogonal norm collapses.
  bool well_conditioned = true;
  /// Smallest |x^T x| / |x|^2 over all right eigenvectors.
  double min_self_overlap = 1.0;

  Index size() const { return static_cast<Index>(poles.size()); }
  double total_width() const;
};

struct SpectrumOptions {
  bool vectors = false;
  Index max_dim = 2000;
};

/// Complex eigenvalues of H_eff sorted by centroid. Widths within
/// [-1e-10 tr W, 0) are clamped to zero; anything more negative, a
/// non-converged eigensolver, or a residual above 1e-9 |H_eff| raises
/// NumericError.
ResonanceSet spectrum(const EffectiveHamiltonian& heff, const SpectrumOptions& options = {});

/// Eigenvalues of an arbitrary complex matrix, same ordering and clamping.
ResonanceSet spectrum_of(const ComplexMatrix& m, double trace_w, const SpectrumOptions& options = {});

struct SumRuleReport {
  double trace_w = 0.0;
  double total_width = 0.0;
  double trace_residual = 0.0;
  double max_negative_width = 0.0;
  double biorthogonality_error = 0.0;
};

/// Checks sum Gamma_r = tr W and positivity; throws ConsistencyError when
/// |sum Gamma - tr W| exceeds rel_tol * tr W (plus a round-off floor).
SumRuleReport verify_sum_rules(const ResonanceSet& rs, const EffectiveHamiltonian& heff,
                               double rel_tol = 1e-8);

}  // namespace oqs
