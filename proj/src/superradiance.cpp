#include "oqs/superradiance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "oqs/errors.hpp"

namespace oqs {

std::pair<double, double> TwoLevelModel::amplitudes_at(double energy) const {
  if (!threshold) return {a1, a2};
  if (energy <= 0.0) return {0.0, 0.0};
  const double g1 = threshold->beta * std::pow(energy, 1.5);
  const double g2 = threshold->alpha * std::sqrt(energy);
  return {std::copysign(std::sqrt(std::max(g1, 0.0)), a1), std::copysign(std::sqrt(std::max(g2, 0.0)), a2)};
}

ComplexMatrix TwoLevelModel::matrix(double energy) const {
  const auto [x1, x2] = amplitudes_at(energy);
  ComplexMatrix h(2, 2);
  h(0, 0) = cplx(eps1, -0.5 * x1 * x1);
  h(1, 1) = cplx(eps2, -0.5 * x2 * x2);
  h(0, 1) = h(1, 0) = cplx(v, -0.5 * x1 * x2);
  return h;
}

std::pair<cplx, cplx> two_level_eigenvalues(const TwoLevelModel& m, double energy) {
  const auto [x1, x2] = m.amplitudes_at(energy);
  const double g1 = x1 * x1, g2 = x2 * x2;
  const double de = m.eps1 - m.eps2;
  const cplx mean(0.5 * (m.eps1 + m.eps2), -0.25 * (g1 + g2));
  const cplx disc(de * de + 4.0 * m.v * m.v - 0.25 * (g1 + g2) * (g1 + g2),
                  -(de * (g1 - g2) + 4.0 * m.v * x1 * x2) + 0.0);
  const cplx root = 0.5 * std::sqrt(disc);
  return {mean + root, mean - root};
}

namespace {

// Eigenvalues ordered by real part so Re E(E) stays continuous along a scan.
std::pair<cplx, cplx> ordered_eigenvalues(const TwoLevelModel& m, double energy) {
  auto [p, q] = two_level_eigenvalues(m, energy);
  if (p.real() > q.real()) std::swap(p, q);
  return {p, q};
}

}  // namespace

SelfConsistentResult two_level_selfconsistent(const TwoLevelModel& m, double e_min, double e_max,
                                              int grid) {
  if (e_max <= 0.0) e_max = 10.0 * (std::abs(m.eps1) + std::abs(m.eps2) + std::abs(m.v) + 1.0);
  if (!(e_min > 0.0) || !(e_max > e_min) || grid < 2)
    throw RegimeError("self-consistent search needs 0 < e_min < e_max");

  SelfConsistentResult out;
  const auto [low0, high0] = ordered_eigenvalues(m, 0.0);
  out.lower_at_threshold = low0.real();
  out.bound_state = low0.real() <= 0.0;
  const double tol0 = 1e-12 * std::max({1.0, std::abs(m.eps1), std::abs(m.eps2)});
  if (std::abs(low0.real()) <= tol0) out.resonances.push_back({0.0, 0.0});
  if (m.threshold && std::abs(high0.real()) <= tol0) out.resonances.push_back({0.0, 0.0});

  auto f = [&](double e, int branch) {
    const auto [lo, hi] = ordered_eigenvalues(m, e);
    return (branch == 0 ? lo.real() : hi.real()) - e;
  };

  std::vector<double> es(static_cast<std::size_t>(grid));
  const double r = std::log(e_max / e_min) / (grid - 1);
  for (int i = 0; i < grid; ++i) es[static_cast<std::size_t>(i)] = e_min * std::exp(r * i);
  for (double e : es) out.scan.push_back({e, f(e, 0), f(e, 1)});

  for (int branch = 0; branch < 2; ++branch) {
    for (int i = 0; i + 1 < grid; ++i) {
      double a = es[static_cast<std::size_t>(i)], b = es[static_cast<std::size_t>(i + 1)];
      double fa = out.scan[static_cast<std::size_t>(i)][1 + branch];
      const double fb = out.scan[static_cast<std::size_t>(i + 1)][1 + branch];
      if (fa == 0.0) {
        b = a;
      } else if ((fa < 0.0) == (fb < 0.0)) {
        continue;
      }
      for (int it = 0; it < 200 && b - a > 1e-15 * b; ++it) {
        const double c = 0.5 * (a + b);
        const double fc = f(c, branch);
        if ((fc < 0.0) == (fa < 0.0)) {
          a = c;
          fa = fc;
        } else {
          b = c;
        }
      }
      const double e = 0.5 * (a + b);
      const auto [lo, hi] = ordered_eigenvalues(m, e);
      out.resonances.push_back(ComplexEnergy::from_complex(branch == 0 ? lo : hi));
    }
  }
  std::sort(out.resonances.begin(), out.resonances.end(), centroid_order);

  if (out.resonances.empty()) {
    std::ostringstream os;
    os << "no solution of Re E(E) = E in [" << e_min << ", " << e_max << "]; scan trace:";
    const std::size_t stride = std::max<std::size_t>(1, out.scan.size() / 10);
    for (std::size_t i = 0; i < out.scan.size(); i += stride)
      os << " (" << out.scan[i][0] << ": " << out.scan[i][1] << ", " << out.scan[i][2] << ")";
    throw RegimeError(os.str());
  }
  return out;
}

std::vector<std::pair<double, double>> threshold_scan(TwoLevelModel m, const std::vector<double>& v_values) {
  std::vector<std::pair<double, double>> out;
  for (double v : v_values) {
    m.v = v;
    out.emplace_back(v, ordered_eigenvalues(m, 0.0).first.real());
  }
  return out;
}

cplx two_level_amplitude(const TwoLevelModel& m, double energy) {
  const auto [x1, x2] = m.amplitudes_at(energy);
  const double g1 = x1 * x1, g2 = x2 * x2;
  const auto [ep, em] = two_level_eigenvalues(m, energy);
  const double num = energy * (g1 + g2) - g1 * m.eps2 - g2 * m.eps1 + 2.0 * m.v * x1 * x2;
  return num / ((energy - em) * (energy - ep));
}

double OneChannelSecular::total_width() const {
  return std::accumulate(widths.begin(), widths.end(), 0.0);
}

double OneChannelSecular::centroid() const {
  const double w = total_width();
  if (!(w > 0.0)) throw RegimeError("centroid needs a positive total width");
  double s = 0.0;
  for (std::size_t a = 0; a < levels.size(); ++a) s += levels[a] * widths[a];
  return s / w;
}

BroadPole broad_pole_expansion(const OneChannelSecular& s, double spacing) {
  if (s.levels.size() != s.widths.size() || s.levels.empty())
    throw StructuralError("secular model needs matching non-empty levels and widths");
  const double w = s.total_width();
  const Index n = static_cast<Index>(s.levels.size());
  BroadPole p;
  p.kappa = coupling_from_width(w, n, spacing);
  if (!(p.kappa > 1.0)) {
    std::ostringstream os;
    os << "broad-pole expansion needs kappa > 1 (got " << p.kappa << ")";
    throw RegimeError(os.str());
  }
  const double ebar = s.centroid();
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (std::size_t a = 0; a < s.levels.size(); ++a) {
    const double x = s.levels[a] - ebar;
    m2 += s.widths[a] * x * x;
    m3 += s.widths[a] * x * x * x;
    m4 += s.widths[a] * x * x * x * x;
  }
  p.energy = ebar - 4.0 * m3 / (w * w * w);
  p.width = w - 4.0 * m2 / (w * w);
  p.error = 8.0 * m4 / std::pow(w, 4) + 16.0 * m2 * m2 / std::pow(w, 5);
  p.trapped_width = w / (static_cast<double>(n) * p.kappa * p.kappa);
  return p;
}

ResonanceSet one_channel_poles(const OneChannelSecular& s) {
  const Index n = static_cast<Index>(s.levels.size());
  if (n < 1 || static_cast<Index>(s.widths.size()) != n)
    throw StructuralError("secular model needs matching non-empty levels and widths");
  ComplexMatrix h = ComplexMatrix::Zero(n, n);
  for (Index a = 0; a < n; ++a) {
    h(a, a) = s.levels[static_cast<std::size_t>(a)];
    for (Index b = 0; b < n; ++b)
      h(a, b) -= cplx(0.0, 0.5 * std::sqrt(s.widths[static_cast<std::size_t>(a)] * s.widths[static_cast<std::size_t>(b)]));
  }
  return spectrum_of(h, s.total_width());
}

std::pair<double, double> two_channel_widths(double gamma_a, double gamma_b, double theta) {
  if (gamma_a < 0.0 || gamma_b < 0.0) throw StructuralError("channel widths must be non-negative");
  const double w = gamma_a + gamma_b;
  const double sn = std::sin(theta);
  const double root = std::sqrt(std::max(0.0, w * w - 4.0 * gamma_a * gamma_b * sn * sn));
  return {0.5 * (w + root), 0.5 * (w - root)};
}

double dicke_rate(double s, double m) {
  if (s < 0.0 || std::abs(m) > s) throw StructuralError("Dicke rate needs |M| <= S");
  return s * (s + 1.0) - m * (m - 1.0);
}

std::vector<double> fano_profile(double eps, const std::function<double(double)>& shift,
                                 const std::function<double(double)>& width,
                                 const std::vector<double>& grid) {
  std::vector<double> out;
  out.reserve(grid.size());
  for (double e : grid) {
    const double g = width(e);
    if (g < 0.0) throw StructuralError("Fano profile needs a non-negative width");
    const double d = e - eps - shift(e);
    out.push_back(g / kTwoPi / (d * d + 0.25 * g * g));
  }
  return out;
}

std::vector<double> fano_profile_from_amplitude(double eps, const std::function<double(double)>& shift,
                                                const std::function<double(double)>& amplitude,
                                                const std::vector<double>& grid) {
  return fano_profile(eps, shift, [&](double e) { const double a = amplitude(e); return kTwoPi * a * a; },
                      grid);
}

}  // namespace oqs
