#pragma once
// Seeded random intrinsic Hamiltonians (GOE, two-body random ensemble,
// picket fence, user matrix) and Gaussian continuum amplitudes.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "oqs/heff.hpp"

namespace oqs {

enum class EnsembleKind { goe, tbre, picket_fence, explicit_matrix };

std::string to_string(EnsembleKind kind);
EnsembleKind ensemble_kind_from_string(const std::string& name);

struct EnsembleSpec {
  EnsembleKind kind = EnsembleKind::goe;
  /// Dimension for GOE and picket fence (ignored for TBRE).
  Index dim = 100;
  /// Mean level spacing at the centre for GOE and picket fence.
  double spacing = 1.0;

  // Two-body random ensemble: k spinless fermions in n levels j*d.
  int particles = 4;
  int orbitals = 8;
  double sp_spacing = 1.0;
  double strength = 0.0;  // v; lambda = v / d
  /// Above this dimension only a mid-spectrum block of block_size states is kept.
  Index full_limit = 1200;
  Index block_size = 1000;

  RealMatrix explicit_h;

  std::uint64_t seed = 1;

  double lambda() const { return strength / sp_spacing; }
};

/// Semicircle radius 2N D / pi for GOE with mid-spectrum spacing D; this is
/// the scale a of the Ullah density.
double goe_radius(Index dim, double spacing);

IntrinsicHamiltonian sample_goe(const EnsembleSpec& spec, std::uint64_t realization);
IntrinsicHamiltonian sample_tbre(const EnsembleSpec& spec, std::uint64_t realization);
IntrinsicHamiltonian sample_picket_fence(const EnsembleSpec& spec);
IntrinsicHamiltonian sample_intrinsic(const EnsembleSpec& spec, std::uint64_t realization);

/// Dimension of the sampled matrices.
Index ensemble_dim(const EnsembleSpec& spec);

/// Number of k-fermion determinants in n levels; throws StructuralError on overflow.
Index binomial(int n, int k);

/// k-bit occupation masks over n levels sorted by mean-field energy sum_j j,
/// ties by mask value.
std::vector<std::uint32_t> fermion_basis(int orbitals, int particles);

/// Many-body matrix of the one-body ladder plus the two-body interaction
/// sum_{p<q, r<s} V[pq, rs] a+_p a+_q a_s a_r on the given basis.
/// `pair_v` is indexed by pair_index(p, q) and must be symmetric.
RealMatrix fermion_hamiltonian(const std::vector<std::uint32_t>& basis, int orbitals,
                               const RealVector& one_body, const RealMatrix& pair_v);
int pair_index(int p, int q, int orbitals);

/// Spacing from the Gaussian-density estimate sqrt(2 pi) sigma_E / N.
double gaussian_spacing_estimate(const RealMatrix& h);

/// Dense matrix from CSV: first line "N=<n>", then n rows of n values.
RealMatrix load_matrix_csv(const std::filesystem::path& path);

struct ChannelSpec {
  /// Per-channel widths gamma^c = tr W^c.
  std::vector<double> widths;

  Index channels() const { return static_cast<Index>(widths.size()); }
  static ChannelSpec from_coupling(const std::vector<double>& kappa, Index states, double spacing);
  static ChannelSpec uniform_coupling(Index channels, double kappa, Index states, double spacing);
};

/// A_n^c ~ N(0, gamma^c / (2 pi N)).
CouplingAmplitudes sample_amplitudes(const ChannelSpec& channels, Index states, std::uint64_t seed,
                                     std::uint64_t realization);

}  // namespace oqs
