#include "oqs/ensembles.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "oqs/errors.hpp"
#include "oqs/rng.hpp"

namespace oqs {

namespace {

constexpr int kMaxOrbitals = 16;

int parity_below(std::uint32_t mask, int bit) {
  return std::popcount(mask & ((1u << bit) - 1u)) & 1;
}

}  // namespace

std::string to_string(EnsembleKind kind) {
  switch (kind) {
    case EnsembleKind::goe: return "goe";
    case EnsembleKind::tbre: return "tbre";
    case EnsembleKind::picket_fence: return "picket_fence";
    case EnsembleKind::explicit_matrix: return "explicit";
  }
  return "unknown";
}

EnsembleKind ensemble_kind_from_string(const std::string& name) {
  if (name == "goe") return EnsembleKind::goe;
  if (name == "tbre") return EnsembleKind::tbre;
  if (name == "picket_fence") return EnsembleKind::picket_fence;
  if (name == "explicit") return EnsembleKind::explicit_matrix;
  throw StructuralError("unknown ensemble kind '" + name + "'");
}

double goe_radius(Index dim, double spacing) {
  return 2.0 * static_cast<double>(dim) * spacing / kPi;
}

IntrinsicHamiltonian sample_goe(const EnsembleSpec& spec, std::uint64_t realization) {
  if (spec.kind != EnsembleKind::goe) throw StructuralError("sample_goe needs a GOE spec");
  const Index n = spec.dim;
  if (n < 1) throw StructuralError("GOE dimension must be >= 1");
  const double sigma = spec.spacing * std::sqrt(static_cast<double>(n)) / kPi;
  auto gen = make_stream(spec.seed, realization, Stream::intrinsic);
  std::normal_distribution<double> off(0.0, sigma);
  std::normal_distribution<double> diag(0.0, std::sqrt(2.0) * sigma);
  RealMatrix h(n, n);
  for (Index i = 0; i < n; ++i) {
    h(i, i) = diag(gen);
    for (Index j = i + 1; j < n; ++j) h(i, j) = h(j, i) = off(gen);
  }
  return IntrinsicHamiltonian(std::move(h), spec.spacing);
}

Index binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  Index r = 1;
  for (int i = 1; i <= k; ++i) {
    if (r > std::numeric_limits<Index>::max() / (n - k + i))
      throw StructuralError("binomial coefficient overflows");
    r = r * (n - k + i) / i;
  }
  return r;
}

std::vector<std::uint32_t> fermion_basis(int orbitals, int particles) {
  if (orbitals < 1 || orbitals > kMaxOrbitals)
    throw StructuralError("orbital count must be in [1, 16]");
  if (particles < 0 || particles > orbitals)
    throw StructuralError("particle count must be in [0, orbitals]");
  std::vector<std::uint32_t> basis;
  basis.reserve(static_cast<std::size_t>(binomial(orbitals, particles)));
  for (std::uint32_t m = 0; m < (1u << orbitals); ++m)
    if (std::popcount(m) == particles) basis.push_back(m);
  auto energy = [](std::uint32_t m) {
    int e = 0;
    for (int j = 0; m; ++j, m >>= 1)
      if (m & 1u) e += j;
    return e;
  };
  std::stable_sort(basis.begin(), basis.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return energy(a) < energy(b); });
  return basis;
}

int pair_index(int p, int q, int orbitals) {
  // p < q, row-major over the strict upper triangle.
  return p * orbitals - p * (p + 1) / 2 + (q - p - 1);
}

RealMatrix fermion_hamiltonian(const std::vector<std::uint32_t>& basis, int orbitals,
                               const RealVector& one_body, const RealMatrix& pair_v) {
  const Index dim = static_cast<Index>(basis.size());
  const int npairs = orbitals * (orbitals - 1) / 2;
  if (one_body.size() != orbitals) throw StructuralError("one-body energies have the wrong size");
  if (pair_v.rows() != npairs || pair_v.cols() != npairs)
    throw StructuralError("pair interaction has the wrong shape");

  std::vector<Index> lookup(std::size_t{1} << orbitals, -1);
  for (Index i = 0; i < dim; ++i) lookup[basis[static_cast<std::size_t>(i)]] = i;

  RealMatrix h = RealMatrix::Zero(dim, dim);
  for (Index i = 0; i < dim; ++i) {
    const std::uint32_t m = basis[static_cast<std::size_t>(i)];
    for (int j = 0; j < orbitals; ++j)
      if (m & (1u << j)) h(i, i) += one_body(j);

    for (int r = 0; r < orbitals; ++r) {
      if (!(m & (1u << r))) continue;
      const int sr = parity_below(m, r);
      const std::uint32_t m1 = m ^ (1u << r);
      for (int s = r + 1; s < orbitals; ++s) {
        if (!(m1 & (1u << s))) continue;
        const int ss = parity_below(m1, s);
        const std::uint32_t m2 = m1 ^ (1u << s);
        const int rs = pair_index(r, s, orbitals);
        for (int q = 1; q < orbitals; ++q) {
          if (m2 & (1u << q)) continue;
          const int sq = parity_below(m2, q);
          const std::uint32_t m3 = m2 | (1u << q);
          for (int p = 0; p < q; ++p) {
            if (m3 & (1u << p)) continue;
            const std::uint32_t m4 = m3 | (1u << p);
            const Index j = lookup[m4];
            if (j < 0) continue;
            const int sign = (sr + ss + sq + parity_below(m3, p)) & 1;
            const double v = pair_v(pair_index(p, q, orbitals), rs);
            h(j, i) += sign ? -v : v;
          }
        }
      }
    }
  }
  return 0.5 * (h + h.transpose());
}

double gaussian_spacing_estimate(const RealMatrix& h) {
  const double n = static_cast<double>(h.rows());
  const double mean = h.trace() / n;
  const double var = h.squaredNorm() / n - mean * mean;
  if (!(var > 0.0)) return 1.0;
  return std::sqrt(2.0 * kPi * var) / n;
}

IntrinsicHamiltonian sample_tbre(const EnsembleSpec& spec, std::uint64_t realization) {
  if (spec.kind != EnsembleKind::tbre) throw StructuralError("sample_tbre needs a TBRE spec");
  if (spec.orbitals > kMaxOrbitals) throw StructuralError("TBRE is limited to 16 orbitals");
  if (spec.particles < 1 || spec.particles >= spec.orbitals)
    throw StructuralError("TBRE needs 0 < particles < orbitals");
  if (spec.strength < 0.0) throw StructuralError("TBRE strength must be non-negative");

  std::vector<std::uint32_t> basis = fermion_basis(spec.orbitals, spec.particles);
  if (static_cast<Index>(basis.size()) > spec.full_limit) {
    const Index keep = std::min<Index>(spec.block_size, static_cast<Index>(basis.size()));
    const Index start = (static_cast<Index>(basis.size()) - keep) / 2;
    basis = std::vector<std::uint32_t>(basis.begin() + start, basis.begin() + start + keep);
  }

  const int n = spec.orbitals;
  RealVector one_body(n);
  for (int j = 0; j < n; ++j) one_body(j) = j * spec.sp_spacing;

  const int npairs = n * (n - 1) / 2;
  RealMatrix v = RealMatrix::Zero(npairs, npairs);
  if (spec.strength > 0.0) {
    auto gen = make_stream(spec.seed, realization, Stream::intrinsic);
    std::normal_distribution<double> g(0.0, spec.strength);
    for (int a = 0; a < npairs; ++a)
      for (int b = a; b < npairs; ++b) v(a, b) = v(b, a) = g(gen);
  }

  RealMatrix h = fermion_hamiltonian(basis, n, one_body, v);
  const double spacing = gaussian_spacing_estimate(h);
  return IntrinsicHamiltonian(std::move(h), spacing);
}

IntrinsicHamiltonian sample_picket_fence(const EnsembleSpec& spec) {
  const Index n = spec.dim;
  if (n < 1) throw StructuralError("picket fence dimension must be >= 1");
  RealVector levels(n);
  for (Index a = 0; a < n; ++a) levels(a) = (static_cast<double>(a) - 0.5 * static_cast<double>(n - 1)) * spec.spacing;
  return IntrinsicHamiltonian(levels.asDiagonal().toDenseMatrix(), spec.spacing);
}

IntrinsicHamiltonian sample_intrinsic(const EnsembleSpec& spec, std::uint64_t realization) {
  switch (spec.kind) {
    case EnsembleKind::goe: return sample_goe(spec, realization);
    case EnsembleKind::tbre: return sample_tbre(spec, realization);
    case EnsembleKind::picket_fence: return sample_picket_fence(spec);
    case EnsembleKind::explicit_matrix: return IntrinsicHamiltonian(spec.explicit_h, spec.spacing);
  }
  throw StructuralError("unknown ensemble kind");
}

Index ensemble_dim(const EnsembleSpec& spec) {
  switch (spec.kind) {
    case EnsembleKind::tbre: {
      const Index full = binomial(spec.orbitals, spec.particles);
      return full > spec.full_limit ? std::min(spec.block_size, full) : full;
    }
    case EnsembleKind::explicit_matrix: return spec.explicit_h.rows();
    default: return spec.dim;
  }
}

RealMatrix load_matrix_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw StructuralError("cannot open matrix file " + path.string());
  std::string line;
  if (!std::getline(in, line) || line.rfind("N=", 0) != 0)
    throw StructuralError(path.string() + ":1: expected header 'N=<n>'");
  Index n = 0;
  try {
    n = std::stol(line.substr(2));
  } catch (const std::exception&) {
    throw StructuralError(path.string() + ":1: malformed dimension");
  }
  if (n < 1) throw StructuralError(path.string() + ":1: dimension must be >= 1");

  RealMatrix m(n, n);
  for (Index i = 0; i < n; ++i) {
    if (!std::getline(in, line))
      throw StructuralError(path.string() + ": expected " + std::to_string(n) + " rows");
    std::stringstream ss(line);
    std::string cell;
    Index j = 0;
    while (std::getline(ss, cell, ',')) {
      if (j >= n) break;
      try {
        m(i, j++) = std::stod(cell);
      } catch (const std::exception&) {
        throw StructuralError(path.string() + ":" + std::to_string(i + 2) + ": bad number '" + cell + "'");
      }
    }
    if (j != n)
      throw StructuralError(path.string() + ":" + std::to_string(i + 2) + ": expected " +
                            std::to_string(n) + " values");
  }
  return m;
}

ChannelSpec ChannelSpec::from_coupling(const std::vector<double>& kappa, Index states, double spacing) {
  ChannelSpec c;
  for (double k : kappa) {
    if (k < 0.0) throw StructuralError("coupling must be non-negative");
    c.widths.push_back(width_from_coupling(k, states, spacing));
  }
  return c;
}

ChannelSpec ChannelSpec::uniform_coupling(Index channels, double kappa, Index states, double spacing) {
  return from_coupling(std::vector<double>(static_cast<std::size_t>(channels), kappa), states, spacing);
}

CouplingAmplitudes sample_amplitudes(const ChannelSpec& channels, Index states, std::uint64_t seed,
                                     std::uint64_t realization) {
  if (states < 1) throw StructuralError("amplitudes need at least one state");
  if (channels.channels() < 1) throw StructuralError("amplitudes need at least one channel");
  auto gen = make_stream(seed, realization, Stream::amplitudes);
  std::normal_distribution<double> g(0.0, 1.0);
  RealMatrix a(states, channels.channels());
  for (Index c = 0; c < a.cols(); ++c) {
    const double gamma = channels.widths[static_cast<std::size_t>(c)];
    if (gamma < 0.0) throw StructuralError("channel width must be non-negative");
    const double sd = std::sqrt(gamma / (kTwoPi * static_cast<double>(states)));
    for (Index n = 0; n < states; ++n) a(n, c) = sd * g(gen);
  }
  return CouplingAmplitudes(std::move(a));
}

}  // namespace oqs
