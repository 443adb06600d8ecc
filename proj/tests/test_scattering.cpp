#include <doctest.h>

#include <cmath>
#include <random>

#include "oqs/ensembles.hpp"
#include "oqs/errors.hpp"
#include "oqs/scattering.hpp"

using namespace oqs;

namespace {

struct System {
  IntrinsicHamiltonian h;
  CouplingAmplitudes a;
};

System random_system(Index n, Index m, double kappa, std::uint64_t r) {
  EnsembleSpec spec;
  spec.dim = n;
  spec.seed = 23;
  return {sample_goe(spec, r), sample_amplitudes(ChannelSpec::uniform_coupling(m, kappa, n, 1.0), n, 23, r)};
}

}  // namespace

TEST_SUITE("scattering") {

TEST_CASE("one-level K matrix") {
  RealMatrix h(1, 1);
  h << 0.5;
  RealMatrix a(1, 1);
  a << 0.3;
  const RealMatrix k = k_matrix(IntrinsicHamiltonian(h), CouplingAmplitudes(a), 1.25);
  CHECK(k(0, 0) == doctest::Approx(kTwoPi * 0.09 / 0.75).epsilon(1e-14));
  // Breit-Wigner: S = (E - e - i g/2) / (E - e + i g/2)
  const double g = kTwoPi * 0.09;
  const cplx expected = cplx(0.75, -g / 2) / cplx(0.75, g / 2);
  CHECK(std::abs(s_matrix(k)(0, 0) - expected) < 1e-14);
}

TEST_CASE("K matrix equals the dense resolvent form") {
  const System s = random_system(30, 4, 0.8, 1);
  const double e = 0.37;
  const RealMatrix k = k_matrix(s.h, s.a, e);
  const RealMatrix g = (e * RealMatrix::Identity(30, 30) - s.h.matrix()).inverse();
  const RealMatrix ref = kTwoPi * s.a.matrix().transpose() * g * s.a.matrix();
  CHECK((k - ref).cwiseAbs().maxCoeff() <= 1e-9 * ref.cwiseAbs().maxCoeff());
  CHECK((k - k.transpose()).cwiseAbs().maxCoeff() < 1e-12 * k.cwiseAbs().maxCoeff());
}

TEST_CASE("S is unitary and symmetric, T satisfies S = 1 - iT") {
  const System s = random_system(50, 6, 1.3, 2);
  const ChannelPropagator prop(s.h, s.a);
  for (double e : {-5.3, -0.11, 0.0731, 4.2}) {
    const ScatteringSample x = scatter(prop, e);
    CHECK(unitarity_defect(x.s) < 1e-12);
    CHECK(symmetry_defect(x.s) < 1e-12);
    CHECK((x.s - (ComplexMatrix::Identity(6, 6) - cplx(0, 1) * x.t)).cwiseAbs().maxCoeff() < 1e-13);
    CHECK((x.t - t_matrix(x.k)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((x.s - s_matrix(x.k)).cwiseAbs().maxCoeff() < 1e-12);
    // optical theorem per channel: sum_b sigma^ba = 2 (1 - Re S^aa)
    for (Index a = 0; a < 6; ++a)
      CHECK(x.sigma.col(a).sum() == doctest::Approx(2.0 * (1.0 - x.s(a, a).real())).epsilon(1e-10));
  }
}

TEST_CASE("Woodbury propagator equals dense inversion") {
  const System s = random_system(40, 3, 2.0, 3);
  const EffectiveHamiltonian heff = assemble(s.h, s.a);
  for (double e : {-3.3, 0.05, 2.9}) {
    const ComplexMatrix g1 = full_propagator(heff, e);
    const ComplexMatrix g2 = direct_propagator(heff, e);
    CHECK((g1 - g2).cwiseAbs().maxCoeff() <= 1e-8 * g2.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("det(1 + iK/2) is the ratio of open and closed determinants") {
  const System s = random_system(4, 2, 1.0, 4);
  const EffectiveHamiltonian heff = assemble(s.h, s.a);
  const double e = 0.21;
  const ComplexMatrix k = k_matrix(s.h, s.a, e).cast<cplx>();
  const cplx lhs = (ComplexMatrix::Identity(2, 2) + cplx(0, 0.5) * k).determinant();
  const cplx open = (e * ComplexMatrix::Identity(4, 4) - heff.matrix()).determinant();
  const double closed = (e * RealMatrix::Identity(4, 4) - s.h.matrix()).determinant();
  CHECK(std::abs(lhs - open / closed) < 1e-12 * std::abs(lhs));

  // winding of det(z - H_eff) around a circle enclosing every pole counts N
  const ResonanceSet rs = spectrum(heff);
  double radius = 0.0;
  for (const auto& p : rs.poles) radius = std::max(radius, std::abs(p.value()));
  radius = 2.0 * radius + 1.0;
  const int steps = 4000;
  double phase = 0.0;
  cplx prev = (cplx(radius, 0) * ComplexMatrix::Identity(4, 4) - heff.matrix()).determinant();
  for (int i = 1; i <= steps; ++i) {
    const cplx z = std::polar(radius, kTwoPi * i / steps);
    const cplx d = (z * ComplexMatrix::Identity(4, 4) - heff.matrix()).determinant();
    phase += std::arg(d / prev);
    prev = d;
  }
  CHECK(phase / kTwoPi == doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("energy on a closed level is singular") {
  const System s = random_system(10, 2, 1.0, 5);
  const ChannelPropagator prop(s.h, s.a);
  CHECK_THROWS_AS(prop.k_matrix(prop.levels()(3)), SingularityError);
  CHECK_NOTHROW(prop.k_matrix(prop.levels()(3) + 1e-3));
}

TEST_CASE("transmission coefficient") {
  CHECK(transmission_coefficient(1.0) == 1.0);
  CHECK(transmission_coefficient(0.25) == doctest::Approx(0.64));
  for (double k : {0.01, 0.3, 2.0, 17.0}) CHECK(transmission_coefficient(k) == doctest::Approx(transmission_coefficient(1.0 / k)).epsilon(1e-14));
  ComplexVector s(2);
  s << cplx(0.6, 0.0), cplx(0.0, 0.0);
  RealVector kap(2);
  kap << 0.25, 1.0;
  const TransmissionReport rep = transmission(s, kap);
  CHECK(rep.measured(0) == doctest::Approx(0.64));
  CHECK(rep.predicted(1) == 1.0);
}

TEST_CASE("conductance partitions channels in halves") {
  RealMatrix sigma = RealMatrix::Zero(4, 4);
  sigma(0, 2) = 0.1;
  sigma(1, 3) = 0.2;
  sigma(0, 1) = 5.0;
  sigma(2, 0) = 0.1;
  CHECK(conductance(sigma) == doctest::Approx(0.3));
  CHECK_THROWS_AS(conductance(RealMatrix::Zero(3, 3)), StructuralError);
  const System s = random_system(20, 3, 1.0, 6);
  CHECK(std::isnan(scatter(ChannelPropagator(s.h, s.a), 0.1).conductance));
}

TEST_CASE("enhancement factor relations") {
  CHECK(enhancement_factor(0.4, 0.2) == doctest::Approx(2.0));
  CHECK_THROWS_AS(enhancement_factor(0.4, 0.0), FitError);
  // two channels, F = 2, tau = 1: mean conductance 1/3
  CHECK(mean_conductance_prediction(2.0, 1.0, 2) == doctest::Approx(1.0 / 3.0));
  CHECK(elastic_from_enhancement(2.0, 1.0, 2) == doctest::Approx(2.0 / 3.0));
  CHECK(correlation_length_prediction(50, 0.5, 2.0) == doctest::Approx(2.0 * 50 * 0.5 / kTwoPi));
  CHECK(mean_width_prediction(1, 0.5, 1.0) == doctest::Approx(std::log(2.0) / kTwoPi));
}

TEST_CASE("correlation accumulator merges exactly") {
  std::mt19937_64 gen(3);
  std::normal_distribution<double> g;
  std::vector<std::vector<double>> series(7, std::vector<double>(50));
  for (auto& s : series)
    for (auto& x : s) x = g(gen);
  CorrelationAccumulator all(10), left(10), right(10);
  for (std::size_t i = 0; i < series.size(); ++i) {
    all.add(series[i]);
    (i < 3 ? left : right).add(series[i]);
  }
  left.merge(right);
  const auto a = all.covariance(), b = left.covariance();
  for (std::size_t k = 0; k < a.size(); ++k) CHECK(a[k] == doctest::Approx(b[k]).epsilon(1e-13));
  CHECK_THROWS_AS(left.merge(CorrelationAccumulator(3)), StructuralError);
}

TEST_CASE("white noise has no correlation beyond lag zero") {
  std::mt19937_64 gen(4);
  std::normal_distribution<double> g;
  CorrelationAccumulator acc(5);
  for (int s = 0; s < 200; ++s) {
    std::vector<double> x(200);
    for (auto& v : x) v = 2.0 + g(gen);
    acc.add(x);
  }
  const auto c = acc.covariance();
  CHECK(c[0] == doctest::Approx(1.0).epsilon(0.03));
  for (std::size_t k = 1; k < c.size(); ++k) CHECK(std::abs(c[k]) < 0.02);
}

TEST_CASE("Lorentzian correlation length is recovered from overlapping resonances") {
  // T(E) = sum_r g_r / (E - E_r + i Gamma/2): amplitude and intensity correlations are
  // Lorentzians of half width Gamma.
  const double gamma = 1.0, step = 0.1;
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> pos(-30.0, 50.0);
  std::normal_distribution<double> g;
  CorrelationAccumulator amp(60), inten(60);
  for (int s = 0; s < 150; ++s) {
    std::vector<double> er(400);
    std::vector<double> gr(400);
    for (std::size_t r = 0; r < er.size(); ++r) {
      er[r] = pos(gen);
      gr[r] = g(gen);
    }
    std::vector<cplx> t(200);
    std::vector<double> sig(200);
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double e = step * static_cast<double>(i);
      cplx sum = 0.0;
      for (std::size_t r = 0; r < er.size(); ++r) sum += gr[r] / cplx(e - er[r], gamma / 2);
      t[i] = sum;
      sig[i] = std::norm(sum);
    }
    amp.add(t);
    inten.add(sig);
  }
  CHECK(fit_lorentzian(amp, step).length == doctest::Approx(gamma).epsilon(0.1));
  const CorrelationFit f = fit_lorentzian(inten, step);
  CHECK(f.length == doctest::Approx(gamma).epsilon(0.1));
  CHECK(f.residual < 0.05);
}

TEST_CASE("midpoint grid") {
  const auto g = midpoint_grid(0.0, 1.0, 4);
  REQUIRE(g.size() == 4);
  CHECK(g[0] == doctest::Approx(0.125));
  CHECK(g[3] == doctest::Approx(0.875));
}

}
