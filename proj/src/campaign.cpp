#include "oqs/campaign.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

#ifdef OQS_HAVE_OPENMP
#include <omp.h>
#endif

#include "oqs/errors.hpp"

namespace oqs {

int available_threads() {
#ifdef OQS_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

Index CampaignSpec::broad_poles() const {
  if (drop_broad >= 0) return drop_broad;
  const bool all_strong = !kappa.empty() && std::all_of(kappa.begin(), kappa.end(), [](double k) { return k > 1.0; });
  return all_strong ? channels() : 0;
}

void CampaignSpec::validate() const {
  if (kappa.empty()) throw StructuralError("campaign needs at least one channel");
  for (double k : kappa)
    if (!(k >= 0.0)) throw StructuralError("coupling must be non-negative");
  if (realizations < 1) throw StructuralError("campaign needs at least one realization");
  if (!(window > 0.0 && window <= 1.0)) throw StructuralError("statistics window must be in (0, 1]");
  if (grid.points < 1 || !(grid.hi > grid.lo)) throw StructuralError("energy grid needs hi > lo and points >= 1");
  if (threads < 0) throw StructuralError("thread count must be non-negative");
}

RealizationDraw draw_realization(const CampaignSpec& spec, std::uint64_t realization) {
  RealizationDraw d;
  d.h = sample_intrinsic(spec.ensemble, realization);
  const Index n = d.h.dim();
  d.a = sample_amplitudes(ChannelSpec::from_coupling(spec.kappa, n, d.h.spacing()), n, spec.ensemble.seed,
                          realization);
  d.centre = d.h.matrix().trace() / static_cast<double>(n);
  return d;
}

namespace {

// Runs kernel(r, slot) for every realization and merge(r, slot) in index
// order. Blocks bound the memory held in slots.
template <class Slot, class Kernel, class Merge>
void for_realizations(Index count, Execution mode, int threads, Kernel&& kernel, Merge&& merge) {
  const int t = mode == Execution::serial ? 1 : (threads > 0 ? threads : available_threads());
  const Index block = mode == Execution::serial ? 1 : 4 * static_cast<Index>(t);
  std::vector<Slot> slots;
  std::vector<std::exception_ptr> errors;
  for (Index start = 0; start < count; start += block) {
    const Index m = std::min(block, count - start);
    slots.assign(static_cast<std::size_t>(m), Slot{});
    errors.assign(static_cast<std::size_t>(m), nullptr);
#ifdef OQS_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(t) if (t > 1)
#endif
    for (Index i = 0; i < m; ++i) {
      try {
        kernel(static_cast<std::uint64_t>(start + i), slots[static_cast<std::size_t>(i)]);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
    for (Index i = 0; i < m; ++i) {
      if (errors[static_cast<std::size_t>(i)]) std::rethrow_exception(errors[static_cast<std::size_t>(i)]);
      merge(static_cast<std::uint64_t>(start + i), slots[static_cast<std::size_t>(i)]);
    }
  }
}

struct ResonanceSlot {
  std::vector<double> widths;
  std::vector<double> spacings;
  double share = 0.0;
  std::vector<ComplexEnergy> poles;
};

std::vector<std::pair<Index, Index>> correlation_pairs(Index channels, Index max_pairs) {
  std::vector<std::pair<Index, Index>> all;
  for (Index a = 0; a < channels; ++a)
    for (Index b = a + 1; b < channels; ++b) all.emplace_back(a, b);
  if (max_pairs <= 0 || static_cast<Index>(all.size()) <= max_pairs) return all;
  std::vector<std::pair<Index, Index>> out;
  const auto total = static_cast<Index>(all.size());
  for (Index k = 0; k < max_pairs; ++k) out.push_back(all[static_cast<std::size_t>(k * total / max_pairs)]);
  return out;
}

struct ScatteringSlot {
  std::vector<ComplexMatrix> t;
  ComplexVector s_diagonal;
  std::vector<double> conductance;
  double unitarity = 0.0;
  double symmetry = 0.0;
  CorrelationAccumulator sigma_corr;
  CorrelationAccumulator t_corr;
  std::vector<SampleRow> rows;
};

}  // namespace

ResonanceCampaign resonance_campaign(const CampaignSpec& spec, Execution mode, Index keep_poles) {
  spec.validate();
  const Index drop = spec.broad_poles();
  ResonanceCampaign out;
  out.dropped = drop;

  auto kernel = [&](std::uint64_t r, ResonanceSlot& slot) {
    const RealizationDraw d = draw_realization(spec, r);
    const EffectiveHamiltonian heff = assemble(d.h, d.a);
    const ResonanceSet rs = spectrum(heff, {.vectors = false, .max_dim = std::max<Index>(2000, heff.dim())});
    const double spacing = d.h.spacing();

    std::vector<ComplexEnergy> p = rs.poles;
    std::stable_sort(p.begin(), p.end(), width_order);
    const double trace = heff.trace_w();
    slot.share = trace > 0.0 ? p.back().width / trace : 0.0;
    p.resize(p.size() - static_cast<std::size_t>(std::min<Index>(drop, static_cast<Index>(p.size()))));
    std::stable_sort(p.begin(), p.end(), centroid_order);

    const auto keep = static_cast<std::size_t>(std::llround(spec.window * static_cast<double>(p.size())));
    const std::size_t first = (p.size() - keep) / 2;
    for (std::size_t i = first; i < first + keep; ++i) slot.widths.push_back(p[i].width / spacing);
    if (keep >= 20) {
      std::vector<double> centroids;
      for (const auto& x : p) centroids.push_back(x.energy);
      slot.spacings = unfold_and_spacings(std::move(centroids), spec.window).s;
    }
    if (static_cast<Index>(r) < keep_poles) slot.poles = rs.poles;
  };
  auto merge = [&](std::uint64_t, ResonanceSlot& slot) {
    for (double w : slot.widths) out.moments.add(w);
    out.widths.insert(out.widths.end(), slot.widths.begin(), slot.widths.end());
    out.spacings.insert(out.spacings.end(), slot.spacings.begin(), slot.spacings.end());
    out.broad_share.push_back(slot.share);
    if (!slot.poles.empty()) out.poles.push_back(std::move(slot.poles));
  };
  for_realizations<ResonanceSlot>(spec.realizations, mode, spec.threads, kernel, merge);
  return out;
}

ScatteringCampaign scattering_campaign(const CampaignSpec& spec, const ScatteringOptions& options,
                                       Execution mode) {
  spec.validate();
  const Index m = spec.channels();
  const std::vector<double> offsets = spec.grid.offsets();
  const auto ne = offsets.size();
  const auto pairs = correlation_pairs(m, options.max_pairs);
  const bool correlate = options.max_lag > 0 && !pairs.empty();
  const bool even = m % 2 == 0;

  ScatteringCampaign out;
  out.offsets = offsets;
  out.step = spec.grid.step();
  out.channels = m;
  out.mean_s_diagonal = ComplexVector::Zero(m);
  if (correlate) {
    out.sigma_correlation.emplace(options.max_lag);
    out.t_correlation.emplace(options.max_lag);
  }
  std::vector<ComplexMatrix> sum_t(ne, ComplexMatrix::Zero(m, m));
  std::vector<RealMatrix> sum_sigma(ne, RealMatrix::Zero(m, m));

  auto kernel = [&](std::uint64_t r, ScatteringSlot& slot) {
    const RealizationDraw d = draw_realization(spec, r);
    const ChannelPropagator prop(d.h, d.a);
    const double spacing = d.h.spacing();
    slot.s_diagonal = ComplexVector::Zero(m);
    slot.t.reserve(ne);
    for (std::size_t e = 0; e < ne; ++e) {
      const ScatteringSample x = scatter(prop, d.centre + offsets[e] * spacing);
      slot.unitarity = std::max(slot.unitarity, unitarity_defect(x.s));
      slot.symmetry = std::max(slot.symmetry, symmetry_defect(x.s));
      slot.s_diagonal += x.s.diagonal();
      if (even) slot.conductance.push_back(x.conductance);
      if (static_cast<Index>(r) < options.sample_realizations)
        for (Index a = 0; a < m; ++a)
          for (Index b = a; b < m; ++b)
            slot.rows.push_back({r, offsets[e], a, b, x.sigma(a, b), even ? x.conductance : 0.0});
      slot.t.push_back(x.t);
    }
    if (correlate) {
      slot.sigma_corr = CorrelationAccumulator(options.max_lag);
      slot.t_corr = CorrelationAccumulator(options.max_lag);
      std::vector<double> sig(ne);
      std::vector<cplx> amp(ne);
      for (const auto& [a, b] : pairs) {
        for (std::size_t e = 0; e < ne; ++e) {
          amp[e] = slot.t[e](a, b);
          sig[e] = std::norm(amp[e]);
        }
        slot.sigma_corr.add(sig);
        slot.t_corr.add(amp);
      }
    }
  };
  auto merge = [&](std::uint64_t, ScatteringSlot& slot) {
    for (std::size_t e = 0; e < ne; ++e) {
      sum_t[e] += slot.t[e];
      sum_sigma[e] += slot.t[e].cwiseAbs2();
    }
    out.mean_s_diagonal += slot.s_diagonal;
    out.conductance.insert(out.conductance.end(), slot.conductance.begin(), slot.conductance.end());
    out.max_unitarity_defect = std::max(out.max_unitarity_defect, slot.unitarity);
    out.max_symmetry_defect = std::max(out.max_symmetry_defect, slot.symmetry);
    if (correlate) {
      out.sigma_correlation->merge(slot.sigma_corr);
      out.t_correlation->merge(slot.t_corr);
    }
    out.rows.insert(out.rows.end(), slot.rows.begin(), slot.rows.end());
  };
  for_realizations<ScatteringSlot>(spec.realizations, mode, spec.threads, kernel, merge);

  const double nr = static_cast<double>(spec.realizations);
  out.mean_s_diagonal /= nr * static_cast<double>(ne);
  double el_fl = 0.0, in_fl = 0.0, el = 0.0, in = 0.0, tot = 0.0;
  for (std::size_t e = 0; e < ne; ++e) {
    const ComplexMatrix mean_t = sum_t[e] / nr;
    const RealMatrix mean_sigma = sum_sigma[e] / nr;
    const RealMatrix fl = mean_sigma - mean_t.cwiseAbs2();
    for (Index a = 0; a < m; ++a) {
      tot += mean_sigma.col(a).sum();
      for (Index b = 0; b < m; ++b) {
        if (a == b) {
          el_fl += fl(a, a);
          el += mean_sigma(a, a);
        } else {
          in_fl += fl(a, b);
          in += mean_sigma(a, b);
        }
      }
    }
  }
  const double de = static_cast<double>(ne);
  out.elastic_fl = el_fl / (de * static_cast<double>(m));
  out.elastic_mean = el / (de * static_cast<double>(m));
  out.total_mean = tot / (de * static_cast<double>(m));
  if (m > 1) {
    const double off = de * static_cast<double>(m * (m - 1));
    out.inelastic_fl = in_fl / off;
    out.inelastic_mean = in / off;
  }
  return out;
}

}  // namespace oqs
