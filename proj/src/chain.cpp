#include "oqs/chain.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "oqs/errors.hpp"
#include "oqs/rng.hpp"
#include "oqs/scattering.hpp"

namespace oqs {

ChainSpec ChainSpec::asymmetric(Index sites, double hopping, double gamma, double q) {
  ChainSpec s;
  s.sites = sites;
  s.hopping = hopping;
  s.gamma_left = gamma;
  s.gamma_right = gamma / q;
  return s;
}

void ChainSpec::validate() const {
  if (sites < 2) throw StructuralError("chain needs at least two sites");
  if (!(hopping > 0.0)) throw StructuralError("chain hopping must be positive");
  if (gamma_left < 0.0 || gamma_right < 0.0) throw StructuralError("lead widths must be non-negative");
  if (disorder < 0.0) throw StructuralError("disorder must be non-negative");
}

BlochBasis bloch_basis(const ChainSpec& spec) {
  spec.validate();
  if (spec.disorder != 0.0) throw StructuralError("Bloch basis needs a clean chain");
  const Index n = spec.sites;
  const double np1 = static_cast<double>(n + 1);
  BlochBasis b;
  b.energies.resize(n);
  b.vectors.resize(n, n);
  for (Index q = 1; q <= n; ++q) {
    b.energies(q - 1) = spec.site_energy + 2.0 * spec.hopping * std::cos(kPi * static_cast<double>(q) / np1);
    for (Index site = 1; site <= n; ++site)
      b.vectors(site - 1, q - 1) = std::sqrt(2.0 / np1) * std::sin(static_cast<double>(site * q) * kPi / np1);
  }
  return b;
}

RealMatrix chain_hamiltonian(const ChainSpec& spec, std::uint64_t realization) {
  spec.validate();
  const Index n = spec.sites;
  RealMatrix h = RealMatrix::Zero(n, n);
  for (Index i = 0; i + 1 < n; ++i) h(i, i + 1) = h(i + 1, i) = spec.hopping;
  h.diagonal().setConstant(spec.site_energy);
  if (spec.disorder > 0.0) {
    auto gen = make_stream(spec.seed, realization, Stream::disorder);
    std::uniform_real_distribution<double> u(-spec.disorder, spec.disorder);
    for (Index i = 0; i < n; ++i) h(i, i) += u(gen);
  }
  return h;
}

CouplingAmplitudes chain_amplitudes(const ChainSpec& spec) {
  spec.validate();
  RealMatrix a = RealMatrix::Zero(spec.sites, 2);
  a(0, 0) = std::sqrt(spec.gamma_left / kTwoPi);
  a(spec.sites - 1, 1) = std::sqrt(spec.gamma_right / kTwoPi);
  return CouplingAmplitudes(std::move(a));
}

EffectiveHamiltonian chain_heff(const ChainSpec& spec, std::uint64_t realization) {
  return assemble(IntrinsicHamiltonian(chain_hamiltonian(spec, realization), spec.hopping),
                  chain_amplitudes(spec));
}

ResonanceSet chain_poles(const ChainSpec& spec, std::uint64_t realization) {
  return spectrum(chain_heff(spec, realization), {.vectors = false, .max_dim = std::max<Index>(2000, spec.sites)});
}

std::pair<cplx, cplx> direct_sum_p(const ChainSpec& spec, cplx energy) {
  spec.validate();
  const Index n = spec.sites;
  const double np1 = static_cast<double>(n + 1);
  cplx pp = 0.0, pm = 0.0;
  for (Index q = 1; q <= n; ++q) {
    const double ph = kPi * static_cast<double>(q) / np1;
    const double s2 = std::sin(ph) * std::sin(ph);
    const cplx d = energy - spec.site_energy - 2.0 * spec.hopping * std::cos(ph);
    pp += s2 / d;
    pm += (q % 2 ? -1.0 : 1.0) * s2 / d;
  }
  return {pp / np1, pm / np1};
}

std::pair<cplx, cplx> phase_p(const ChainSpec& spec, double beta, double phi) {
  const double v = spec.hopping;
  const double sb = std::sin(beta);
  return {std::cos(beta) / (2.0 * v) - sb * std::cos(phi) / (std::sin(phi) * 2.0 * v),
          -sb / (2.0 * v * std::sin(phi))};
}

std::pair<cplx, cplx> closed_form_p(const ChainSpec& spec, cplx eps) {
  spec.validate();
  const double v = spec.hopping;
  const Index n = spec.sites;
  const double np1 = static_cast<double>(n + 1);
  constexpr double kEdge = 1e-12;

  if (eps.imag() == 0.0 && std::abs(eps.real()) <= 1.0) {
    const double e = eps.real();
    if (1.0 - std::abs(e) <= kEdge) {
      // Limits beta -> 0 and beta -> pi of the trigonometric form.
      const double s = e > 0 ? 1.0 : -1.0;
      const double parity = (n % 2 == 0) ? 1.0 : -1.0;
      const double pm = e > 0 ? -1.0 / (2.0 * v * np1) : -parity / (2.0 * v * np1);
      return {s * static_cast<double>(n) / (2.0 * v * np1), pm};
    }
    const double beta = std::acos(e);
    return phase_p(spec, beta, np1 * beta);
  }

  const cplx root = std::sqrt(eps * eps - 1.0);
  const cplx zp = eps + root, zm = eps - root;
  const cplx pref = (eps * eps - 1.0) / (v * (zp - zm));
  const cplx zp2 = std::pow(zp, 2.0 * np1), zm2 = std::pow(zm, 2.0 * np1);
  const cplx zp1 = std::pow(zp, np1), zm1 = std::pow(zm, np1);
  const cplx pp = 2.0 * eps / (4.0 * v) - pref * (zp2 / (zp2 - 1.0) - zm2 / (zm2 - 1.0));
  const cplx pm = -pref * (zp1 / (zp2 - 1.0) - zm1 / (zm2 - 1.0));
  return {pp, pm};
}

ComplexMatrix chain_k_matrix(const ChainSpec& spec, cplx p_plus, cplx p_minus) {
  ComplexMatrix k(2, 2);
  const double gl = spec.gamma_left, gr = spec.gamma_right;
  k(0, 0) = 2.0 * gl * p_plus;
  k(1, 1) = 2.0 * gr * p_plus;
  k(0, 1) = k(1, 0) = -2.0 * std::sqrt(gl * gr) * p_minus;
  return k;
}

double secular_value(const ChainSpec& spec, cplx energy) {
  const auto [pp, pm] = direct_sum_p(spec, energy);
  const double gl = spec.gamma_left, gr = spec.gamma_right;
  const cplx i(0.0, 1.0);
  return std::abs((1.0 + i * gl * pp) * (1.0 + i * gr * pp) + gl * gr * pm * pm);
}

namespace {

ChainTransmission from_t(const ComplexMatrix& t) {
  ChainTransmission out;
  out.ll = std::norm(t(0, 0));
  out.rr = std::norm(t(1, 1));
  out.lr = std::norm(t(0, 1));
  out.t_ll = t(0, 0);
  return out;
}

double closed_ll(double el, double er, double beta) {
  const double sb = std::sin(beta);
  return 4.0 * el * el * (el * (1.0 + el * er + er * er) + er * std::cos(2.0 * beta) + (1.0 + er * er) * sb) /
         ((el + er) * (1.0 + el * er) * (1.0 + el * el + 2.0 * el * sb));
}

double band_beta(const ChainSpec& spec, double energy) {
  const double e = (energy - spec.site_energy) / (2.0 * spec.hopping);
  if (std::abs(e) >= 1.0) throw RegimeError("closed-form chain transmission needs an energy inside the band");
  return std::acos(e);
}

}  // namespace

ChainTransmission chain_transmission_closed(const ChainSpec& spec, double energy) {
  spec.validate();
  const double beta = band_beta(spec, energy);
  const double el = spec.gamma_left / (2.0 * spec.hopping);
  const double er = spec.gamma_right / (2.0 * spec.hopping);
  ChainTransmission out;
  if (el + er == 0.0) return out;
  out.lr = 4.0 * el * er * std::sin(beta) / ((el + er) * (1.0 + el * er));
  out.ll = el > 0.0 ? closed_ll(el, er, beta) : 0.0;
  out.rr = er > 0.0 ? closed_ll(er, el, beta) : 0.0;
  return out;
}

ChainTransmission chain_transmission_numeric(const ChainSpec& spec, double energy, std::uint64_t realization) {
  ChannelPropagator prop(chain_hamiltonian(spec, realization), chain_amplitudes(spec));
  return from_t(t_matrix(prop.k_matrix(energy)));
}

ChainTransmission chain_transmission_phase_average(const ChainSpec& spec, double energy, int phases) {
  spec.validate();
  const double beta = band_beta(spec, energy);
  ChainTransmission acc;
  for (int k = 0; k < phases; ++k) {
    const double phi = (k + 0.5) * kPi / phases;
    const auto [pp, pm] = phase_p(spec, beta, phi);
    const ChainTransmission t = from_t(t_matrix(chain_k_matrix(spec, pp, pm)));
    acc.ll += t.ll;
    acc.lr += t.lr;
    acc.rr += t.rr;
    acc.t_ll += t.t_ll;
  }
  acc.ll /= phases;
  acc.lr /= phases;
  acc.rr /= phases;
  acc.t_ll /= static_cast<double>(phases);
  return acc;
}

double integrated_transmission(const ChainSpec& spec, std::uint64_t realization) {
  ChannelPropagator prop(chain_hamiltonian(spec, realization), chain_amplitudes(spec));
  const RealMatrix& b = prop.projected();
  const RealVector& lv = prop.levels();
  // Two channels: T^LR = K^LR / det(1 + iK/2).
  auto f = [&](double e) {
    double k00 = 0.0, k01 = 0.0, k11 = 0.0;
    for (Index n = 0; n < lv.size(); ++n) {
      const double g = kTwoPi / (e - lv(n));
      k00 += g * b(n, 0) * b(n, 0);
      k01 += g * b(n, 0) * b(n, 1);
      k11 += g * b(n, 1) * b(n, 1);
    }
    const cplx det = cplx(1.0, 0.5 * k00) * cplx(1.0, 0.5 * k11) + 0.25 * k01 * k01;
    return k01 * k01 / std::norm(det);
  };
  const double reach = 2.0 * spec.hopping + spec.disorder;
  std::vector<double> edges;
  edges.push_back(spec.site_energy - reach);
  for (Index i = 0; i < prop.levels().size(); ++i) edges.push_back(prop.levels()(i));
  edges.push_back(spec.site_energy + reach);
  std::sort(edges.begin(), edges.end());

  double total = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    if (edges[i + 1] <= edges[i]) continue;
    total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, edges[i], edges[i + 1], 12, 1e-10);
  }
  return total / (4.0 * spec.hopping);
}

double integrated_transmission_prediction(double hopping, double gamma, double q) {
  return kPi * gamma / (2.0 * hopping) / ((q + 1.0) * (1.0 + gamma * gamma / (4.0 * hopping * hopping * q)));
}

IntegratedScan integrated_scan(const ChainSpec& base, double q, const std::vector<double>& gammas,
                               Index realizations) {
  IntegratedScan out;
  out.gammas = gammas;
  out.critical = 2.0 * base.hopping * std::sqrt(q);
  double best = -1.0;
  for (double g : gammas) {
    ChainSpec s = base;
    s.gamma_left = g;
    s.gamma_right = g / q;
    double sum = 0.0;
    for (Index r = 0; r < realizations; ++r) sum += integrated_transmission(s, static_cast<std::uint64_t>(r));
    const double val = sum / static_cast<double>(realizations);
    out.values.push_back(val);
    out.predicted.push_back(integrated_transmission_prediction(base.hopping, g, q));
    if (val > best) {
      best = val;
      out.argmax = g;
    }
  }
  return out;
}

std::vector<double> log_grid(double lo, double hi, Index n) {
  std::vector<double> g;
  if (n == 1) return {lo};
  for (Index i = 0; i < n; ++i)
    g.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(n - 1)));
  return g;
}

}  // namespace oqs
