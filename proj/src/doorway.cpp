#include "oqs/doorway.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <tuple>

#include <Eigen/Eigenvalues>

#include "oqs/ensembles.hpp"
#include "oqs/errors.hpp"
#include "oqs/rng.hpp"

namespace oqs {

double DoorwaySpec::escape_width() const { return kTwoPi * decay.squaredNorm(); }

namespace {

DoorwayW finish(RealMatrix w) {
  DoorwayW out;
  out.w = 0.5 * (w + w.transpose());
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(out.w, Eigen::EigenvaluesOnly);
  out.eigenvalues = es.eigenvalues();
  const double tol = 1e-10 * std::max(out.w.trace(), 0.0);
  out.rank = (out.eigenvalues.array() > tol).count();
  if (out.w.trace() <= 0.0) out.rank = 0;
  return out;
}

}  // namespace

DoorwayW doorway_w(const DoorwaySpec& d) {
  const RealVector& x = d.admixture;
  return finish(d.escape_width() * x * x.transpose());
}

DoorwayW multi_doorway_w(const std::vector<DoorwaySpec>& doorways) {
  if (doorways.empty()) throw StructuralError("multi_doorway_w needs at least one doorway");
  const Index n = doorways.front().admixture.size();
  RealMatrix w = RealMatrix::Zero(n, n);
  for (const auto& d : doorways) {
    if (d.admixture.size() != n) throw StructuralError("doorway admixtures must share a dimension");
    w += d.escape_width() * d.admixture * d.admixture.transpose();
  }
  return finish(std::move(w));
}

ValidityVerdict validity_ratio(double escape, double spreading) {
  if (!(spreading > 0.0)) throw StructuralError("spreading width must be positive");
  ValidityVerdict v;
  v.ratio = escape / spreading;
  v.superradiant = v.ratio > 1.0;
  return v;
}

ValidityVerdict validity_ratio(const DoorwaySpec& d) { return validity_ratio(d.escape_width(), d.spreading); }

FineStructure fine_structure(const FineStructureModel& m) {
  const Index nb = static_cast<Index>(m.background.size());
  if (static_cast<Index>(m.coupling.size()) != nb)
    throw StructuralError("fine structure: coupling and background sizes differ");
  if (nb > 500) throw StructuralError("fine structure is limited to 500 background states");
  if (m.doorway_width < 0.0 || m.evaporation_width < 0.0)
    throw StructuralError("fine structure widths must be non-negative");

  const Index n = nb + 1;
  ComplexMatrix h = ComplexMatrix::Zero(n, n);
  h(0, 0) = cplx(m.doorway_energy, -0.5 * m.doorway_width);
  for (Index v = 0; v < nb; ++v) {
    const auto k = static_cast<std::size_t>(v);
    h(v + 1, v + 1) = cplx(m.background[k], -0.5 * m.evaporation_width);
    h(0, v + 1) = h(v + 1, 0) = m.coupling[k];
  }
  const double trace_w = m.doorway_width + static_cast<double>(nb) * m.evaporation_width;
  ResonanceSet rs = spectrum_of(h, trace_w, {.vectors = true, .max_dim = n});

  FineStructure fs;
  fs.roots = rs.poles;
  fs.well_conditioned = rs.well_conditioned;
  const ComplexMatrix& r = *rs.right;
  const ComplexMatrix& l = *rs.left;
  for (Index j = 0; j < n; ++j) {
    const double f = std::norm(r(0, j)) / r.col(j).squaredNorm();
    fs.fraction.push_back(f);
    fs.biorthogonal.push_back(l(0, j) * r(0, j));
    fs.fraction_sum += f;
    const double g = fs.roots[static_cast<std::size_t>(j)].width;
    fs.partition_residual = std::max(
        fs.partition_residual, std::abs(g - m.doorway_width * f - m.evaporation_width * (1.0 - f)));
  }
  return fs;
}

std::vector<double> strength_function(const FineStructure& fs, const std::vector<double>& grid) {
  std::vector<double> out(grid.size(), 0.0);
  for (std::size_t j = 0; j < fs.roots.size(); ++j) {
    const double e = fs.roots[j].energy, g = fs.roots[j].width;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double d = grid[i] - e;
      out[i] += fs.fraction[j] * 0.5 * g / (d * d + 0.25 * g * g);
    }
  }
  return out;
}

double oscillation_index(const std::vector<double>& profile) {
  if (profile.empty()) return 0.0;
  const double n = static_cast<double>(profile.size());
  const double mean = std::accumulate(profile.begin(), profile.end(), 0.0) / n;
  double var = 0.0;
  for (double x : profile) var += (x - mean) * (x - mean);
  var /= n;
  return mean != 0.0 ? std::sqrt(var) / std::abs(mean) : 0.0;
}

FineStructureModel picket_fence_doorway(Index n, double spacing, double spreading, double doorway_width,
                                        double evaporation_width) {
  FineStructureModel m;
  m.doorway_energy = 0.0;
  m.doorway_width = doorway_width;
  m.evaporation_width = evaporation_width;
  const double v = std::sqrt(spreading * spacing / kTwoPi);
  for (Index a = 0; a < n; ++a) {
    // Offset by half a spacing so the doorway sits between two background levels.
    m.background.push_back((static_cast<double>(a) - 0.5 * static_cast<double>(n - 1)) * spacing +
                           (n % 2 ? 0.5 * spacing : 0.0));
    m.coupling.push_back(v);
  }
  return m;
}

OrbitalTrajectories doorway_orbital_model(const OrbitalModelSpec& spec) {
  if (!(spec.particles > 0 && spec.particles < spec.orbitals && spec.orbitals <= 12))
    throw StructuralError("doorway orbital model needs 0 < k < n <= 12");
  if (spec.gammas.empty()) throw StructuralError("doorway orbital model needs a gamma grid");

  const int n = spec.orbitals;
  const auto basis = fermion_basis(n, spec.particles);
  const Index dim = static_cast<Index>(basis.size());
  RealVector one_body(n);
  for (int j = 0; j < n; ++j) one_body(j) = j * spec.sp_spacing;
  const int npairs = n * (n - 1) / 2;
  RealMatrix v = RealMatrix::Zero(npairs, npairs);
  auto gen = make_stream(spec.seed, 0, Stream::mixing);
  std::normal_distribution<double> g(0.0, spec.mixing);
  for (int a = 0; a < npairs; ++a)
    for (int b = a; b < npairs; ++b) v(a, b) = v(b, a) = g(gen);
  const RealMatrix h = fermion_hamiltonian(basis, n, one_body, v);

  RealVector top(dim);
  for (Index i = 0; i < dim; ++i) top(i) = (basis[static_cast<std::size_t>(i)] >> (n - 1)) & 1u ? 1.0 : 0.0;

  OrbitalTrajectories out;
  out.gammas = spec.gammas;
  out.states = dim;
  for (double gamma : spec.gammas) {
    ComplexMatrix m = h.cast<cplx>();
    m.diagonal() -= cplx(0.0, 0.5 * gamma) * top.cast<cplx>();
    ResonanceSet rs = spectrum_of(m, gamma * top.sum(), {.vectors = false, .max_dim = dim});
    if (out.poles.empty()) {
      out.poles.push_back(rs.poles);
      continue;
    }
    // Greedy nearest matching in the complex plane to continue each trajectory.
    const auto& prev = out.poles.back();
    std::vector<std::tuple<double, Index, Index>> pairs;
    pairs.reserve(static_cast<std::size_t>(dim * dim));
    for (Index a = 0; a < dim; ++a)
      for (Index b = 0; b < dim; ++b)
        pairs.emplace_back(std::abs(prev[static_cast<std::size_t>(a)].value() - rs.poles[static_cast<std::size_t>(b)].value()), a, b);
    std::sort(pairs.begin(), pairs.end());
    std::vector<ComplexEnergy> next(static_cast<std::size_t>(dim));
    std::vector<char> used_a(static_cast<std::size_t>(dim), 0), used_b(static_cast<std::size_t>(dim), 0);
    for (const auto& [d, a, b] : pairs) {
      if (used_a[static_cast<std::size_t>(a)] || used_b[static_cast<std::size_t>(b)]) continue;
      used_a[static_cast<std::size_t>(a)] = used_b[static_cast<std::size_t>(b)] = 1;
      next[static_cast<std::size_t>(a)] = rs.poles[static_cast<std::size_t>(b)];
    }
    out.poles.push_back(std::move(next));
  }

  std::vector<double> lw;
  for (const auto& p : out.poles.back()) lw.push_back(std::log10(std::max(p.width, 1e-300)));
  std::sort(lw.begin(), lw.end());
  std::size_t split = lw.size();
  for (std::size_t i = 1; i < lw.size(); ++i) {
    if (lw[i] - lw[i - 1] > out.gap_decades) {
      out.gap_decades = lw[i] - lw[i - 1];
      split = i;
    }
  }
  out.nontrapped = static_cast<Index>(lw.size() - split);

  for (Index k = 0; k < dim; ++k) {
    bool mono = true;
    for (std::size_t s = 1; s < out.poles.size() && mono; ++s)
      mono = out.poles[s][static_cast<std::size_t>(k)].width >=
             out.poles[s - 1][static_cast<std::size_t>(k)].width * (1.0 - 1e-12);
    if (mono && out.poles.back()[static_cast<std::size_t>(k)].width > 0.0) ++out.monotone_growing;
  }
  return out;
}

}  // namespace oqs
