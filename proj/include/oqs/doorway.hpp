#pragma once
// Doorway-filtered continuum coupling: rank-one W through a doorway, the
// doorway super-radiance criterion, fine structure of a decaying doorway
// mixed into a background, and the doorway-orbital many-fermion model.

#include <cstdint>
#include <vector>

#include "oqs/heff.hpp"

namespace oqs {

struct DoorwaySpec {
  /// <q|d> over the intrinsic states.
  RealVector admixture;
  /// <d|H|c> per channel.
  RealVector decay;
  /// Spreading width Gamma_down.
  double spreading = 0.0;

  /// Gamma_up = 2 pi sum_c |<d|H|c>|^2.
  double escape_width() const;
};

struct DoorwayW {
  RealMatrix w;
  /// Eigenvalues of W, ascending.
  RealVector eigenvalues;
  /// Eigenvalues above 1e-10 tr W.
  Index rank = 0;
};

DoorwayW doorway_w(const DoorwaySpec& d);
/// W = sum_d Gamma_up^d x_d x_d^T over doorways that share the intrinsic space.
DoorwayW multi_doorway_w(const std::vector<DoorwaySpec>& doorways);

struct ValidityVerdict {
  double ratio = 0.0;
  /// ratio > 1, strictly.
  bool superradiant = false;
};

/// Gamma_up / Gamma_down. Throws StructuralError unless Gamma_down > 0.
ValidityVerdict validity_ratio(const DoorwaySpec& d);
ValidityVerdict validity_ratio(double escape, double spreading);

struct FineStructureModel {
  double doorway_energy = 0.0;
  double doorway_width = 0.0;  // gamma_0
  std::vector<double> background;  // eps_nu
  double evaporation_width = 0.0;  // gamma_ev, shared by all background states
  std::vector<double> coupling;  // V_nu
};

struct FineStructure {
  std::vector<ComplexEnergy> roots;
  /// |R_d|^2 / |R|^2 of each right eigenvector; Gamma_j = gamma_0 f_j + gamma_ev (1 - f_j)
  /// holds exactly for these at uniform gamma_ev.
  std::vector<double> fraction;
  /// L_d R_d with the biorthogonal normalization; sums to 1 by completeness.
  std::vector<cplx> biorthogonal;
  double fraction_sum = 0.0;
  /// max_j |Gamma_j - gamma_0 f_j - gamma_ev (1 - f_j)|.
  double partition_residual = 0.0;
  bool well_conditioned = true;
};

/// Eigenproblem of the (N+1) x (N+1) arrowhead matrix with the doorway in row 0.
FineStructure fine_structure(const FineStructureModel& m);

/// sum_j f_j (Gamma_j / 2) / ((E - E_j)^2 + Gamma_j^2 / 4) on a grid.
std::vector<double> strength_function(const FineStructure& fs, const std::vector<double>& grid);

/// Relative standard deviation of a profile, the oscillation measure.
double oscillation_index(const std::vector<double>& profile);

/// Equidistant background of n levels with spacing D centred at the doorway,
/// coupled with V = sqrt(Gamma_down D / 2 pi).
FineStructureModel picket_fence_doorway(Index n, double spacing, double spreading, double doorway_width,
                                        double evaporation_width);

struct OrbitalModelSpec {
  int particles = 4;
  int orbitals = 8;
  double sp_spacing = 1.0;
  /// Two-body mixing strength.
  double mixing = 0.1;
  std::vector<double> gammas;
  std::uint64_t seed = 1;
};

struct OrbitalTrajectories {
  std::vector<double> gammas;
  /// poles[g][k]: pole of trajectory k at gammas[g].
  std::vector<std::vector<ComplexEnergy>> poles;
  Index states = 0;
  /// States above the widest gap in sorted log-widths at the largest gamma.
  Index nontrapped = 0;
  /// Size of that gap in decades.
  double gap_decades = 0.0;
  /// Trajectories whose width never decreases along the grid.
  Index monotone_growing = 0;
};

/// Many-body H_eff = H - (i/2) gamma n_top for k fermions in n <= 12 levels.
OrbitalTrajectories doorway_orbital_model(const OrbitalModelSpec& spec);

}  // namespace oqs
