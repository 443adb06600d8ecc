#pragma once
// Monte Carlo campaigns over ensemble realizations. Each realization is a pure
// function of (seed, index); partial results are merged in index order, so the
// serial and OpenMP paths give bit-identical output for any thread count.

#include <cstdint>
#include <optional>
#include <vector>

#include "oqs/ensembles.hpp"
#include "oqs/scattering.hpp"
#include "oqs/statistics.hpp"

namespace oqs {

enum class Execution { serial, parallel };

/// Worker threads used by Execution::parallel (1 without OpenMP).
int available_threads();

struct EnergyGridSpec {
  /// Offsets from the spectrum centre tr H / N, in units of the spacing D.
  double lo = -10.0;
  double hi = 10.0;
  Index points = 40;

  /// Midpoints of `points` equal cells in [lo, hi].
  std::vector<double> offsets() const { return midpoint_grid(lo, hi, points); }
  double step() const { return (hi - lo) / static_cast<double>(points); }
};

struct CampaignSpec {
  EnsembleSpec ensemble;
  /// One coupling kappa per open channel.
  std::vector<double> kappa = {1.0};
  Index realizations = 100;
  EnergyGridSpec grid;
  /// Central fraction of the spectrum (by count) used for statistics.
  double window = 0.2;
  /// Broad poles removed before trapped-state statistics; negative selects
  /// M when every kappa exceeds 1 and 0 otherwise.
  Index drop_broad = -1;
  /// 0 uses every available thread.
  int threads = 0;

  Index channels() const { return static_cast<Index>(kappa.size()); }
  Index broad_poles() const;
  void validate() const;
};

struct RealizationDraw {
  IntrinsicHamiltonian h;
  CouplingAmplitudes a;
  /// Centre of the spectrum, tr H / N.
  double centre = 0.0;
};

/// Intrinsic Hamiltonian and amplitudes of one realization; widths follow
/// gamma = 2 kappa N D / pi with the realization's own D.
RealizationDraw draw_realization(const CampaignSpec& spec, std::uint64_t realization);

struct ResonanceCampaign {
  /// Trapped widths in the central window in units of D, realization order.
  std::vector<double> widths;
  /// Unfolded nearest-neighbour spacings of the trapped centroids.
  std::vector<double> spacings;
  /// Share of tr W carried by the widest pole, per realization.
  std::vector<double> broad_share;
  MomentAccumulator moments;
  Index dropped = 0;
  /// Full pole lists of the first `keep_poles` realizations.
  std::vector<std::vector<ComplexEnergy>> poles;
};

ResonanceCampaign resonance_campaign(const CampaignSpec& spec, Execution mode = Execution::parallel,
                                     Index keep_poles = 0);

struct ScatteringOptions {
  /// Lags (in grid steps) for the cross-section correlation; 0 disables it.
  Index max_lag = 0;
  /// At most this many inelastic pairs feed the correlation accumulators.
  Index max_pairs = 64;
  /// Per-sample rows are kept for the first `sample_realizations` realizations.
  Index sample_realizations = 0;
};

struct SampleRow {
  std::uint64_t realization = 0;
  double energy = 0.0;  // offset from the centre in units of D
  Index a = 0;
  Index b = 0;
  double sigma = 0.0;
  double conductance = 0.0;
};

struct ScatteringCampaign {
  std::vector<double> offsets;
  double step = 0.0;
  Index channels = 0;
  /// <S^aa> over realizations and energies, per channel.
  ComplexVector mean_s_diagonal;
  /// Fluctuating cross sections with the fixed-energy ensemble mean removed,
  /// averaged over energies and equivalent channel pairs.
  double elastic_fl = 0.0;
  double inelastic_fl = 0.0;
  /// Plain averages of sigma^aa, sigma^ab (a != b) and sum_b sigma^ba.
  double elastic_mean = 0.0;
  double inelastic_mean = 0.0;
  double total_mean = 0.0;
  /// One entry per (realization, energy), realization-major; empty for odd M.
  std::vector<double> conductance;
  double max_unitarity_defect = 0.0;
  double max_symmetry_defect = 0.0;
  std::optional<CorrelationAccumulator> sigma_correlation;
  std::optional<CorrelationAccumulator> t_correlation;
  std::vector<SampleRow> rows;
};

ScatteringCampaign scattering_campaign(const CampaignSpec& spec, const ScatteringOptions& options = {},
                                       Execution mode = Execution::parallel);

}  // namespace oqs
