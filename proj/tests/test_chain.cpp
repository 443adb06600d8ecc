#include <doctest.h>

#include <cmath>

#include "oqs/chain.hpp"
#include "oqs/errors.hpp"
#include "oqs/scattering.hpp"

using namespace oqs;

TEST_SUITE("chain") {

TEST_CASE("Bloch states diagonalize the clean chain") {
  const ChainSpec spec = ChainSpec::asymmetric(17, 0.8, 1.0, 2.0);
  const BlochBasis b = bloch_basis(spec);
  const RealMatrix h = chain_hamiltonian(spec);
  CHECK((b.vectors.transpose() * b.vectors - RealMatrix::Identity(17, 17)).cwiseAbs().maxCoeff() < 1e-13);
  CHECK((h * b.vectors - b.vectors * b.energies.asDiagonal()).cwiseAbs().maxCoeff() < 1e-13);
  ChainSpec dirty = spec;
  dirty.disorder = 0.5;
  CHECK_THROWS_AS(bloch_basis(dirty), StructuralError);
}

TEST_CASE("closed-form P sums equal the direct Bloch sums") {
  for (Index n : {Index{10}, Index{11}, Index{100}}) {
    const ChainSpec spec = ChainSpec::asymmetric(n, 1.3, 1.0, 1.0);
    for (cplx eps : {cplx(0.31, 0.0), cplx(-0.77, 0.0), cplx(0.2, 0.05), cplx(1.4, 0.0), cplx(-2.0, 0.3)}) {
      const auto [cp, cm] = closed_form_p(spec, eps);
      const auto [dp, dm] = direct_sum_p(spec, 2.0 * spec.hopping * eps);
      CHECK(std::abs(cp - dp) <= 1e-10 * std::max(1.0, std::abs(dp)));
      CHECK(std::abs(cm - dm) <= 1e-10 * std::max(1.0, std::abs(dm)));
    }
  }
}

TEST_CASE("chain K matrix from P sums equals the propagator route") {
  const ChainSpec spec = ChainSpec::asymmetric(30, 1.0, 0.7, 3.0);
  const ChannelPropagator prop(chain_hamiltonian(spec), chain_amplitudes(spec));
  for (double e : {-1.57, 0.123, 1.9}) {
    const auto [pp, pm] = direct_sum_p(spec, e);
    const ComplexMatrix k = chain_k_matrix(spec, pp, pm);
    const RealMatrix kn = prop.k_matrix(e);
    CHECK((k - kn.cast<cplx>()).cwiseAbs().maxCoeff() <= 1e-10 * kn.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("secular function vanishes at the poles") {
  const ChainSpec spec = ChainSpec::asymmetric(12, 1.0, 0.8, 2.0);
  const ResonanceSet rs = chain_poles(spec);
  for (const auto& p : rs.poles) CHECK(secular_value(spec, p.value()) < 1e-8);
  CHECK(secular_value(spec, cplx(0.05, -0.5)) > 1e-3);
  CHECK(rs.total_width() == doctest::Approx(spec.gamma_left + spec.gamma_right).epsilon(1e-10));
}

TEST_CASE("closed transmission equals the phase-averaged S-matrix") {
  for (double q : {1.0, 4.0}) {
    for (double gamma : {0.3, 2.0, 8.0}) {
      const ChainSpec spec = ChainSpec::asymmetric(100, 1.0, gamma, q);
      for (double e : {-1.5, -0.4, 0.0, 0.9, 1.7}) {
        const ChainTransmission c = chain_transmission_closed(spec, e);
        const ChainTransmission a = chain_transmission_phase_average(spec, e, 4096);
        CHECK(std::abs(c.lr - a.lr) <= 1e-8 * std::max(1.0, c.lr));
        CHECK(std::abs(c.ll - a.ll) <= 1e-8 * std::max(1.0, c.ll));
        CHECK(std::abs(c.rr - a.rr) <= 1e-8 * std::max(1.0, c.rr));
      }
    }
  }
  CHECK_THROWS_AS(chain_transmission_closed(ChainSpec::asymmetric(10, 1.0, 1.0, 1.0), 2.5), RegimeError);
}

TEST_CASE("flux conservation: tau_LL + tau_LR = -2 Im T_LL") {
  ChainSpec spec = ChainSpec::asymmetric(40, 1.0, 1.5, 2.0);
  spec.disorder = 0.4;
  for (double e : {-1.1, 0.07, 0.66}) {
    const ChainTransmission t = chain_transmission_numeric(spec, e, 3);
    CHECK(t.ll + t.lr == doctest::Approx(-2.0 * t.t_ll.imag()).epsilon(1e-10));
  }
  spec.disorder = 0.0;
  const ChainTransmission a = chain_transmission_phase_average(spec, 0.3);
  CHECK(a.ll + a.lr == doctest::Approx(-2.0 * a.t_ll.imag()).epsilon(1e-10));
}

TEST_CASE("integrated transmission follows the closed prediction") {
  for (double q : {1.0, 10.0}) {
    for (double gamma : {0.5, 2.0 * std::sqrt(q), 30.0}) {
      const ChainSpec spec = ChainSpec::asymmetric(100, 1.0, gamma, q);
      const double pred = integrated_transmission_prediction(1.0, gamma, q);
      CHECK(integrated_transmission(spec) == doctest::Approx(pred).epsilon(0.05));
    }
  }
  CHECK(integrated_transmission_prediction(1.0, 2.0, 1.0) == doctest::Approx(kPi / 4.0));
}

TEST_CASE("log grid") {
  const auto g = log_grid(0.1, 10.0, 3);
  REQUIRE(g.size() == 3);
  CHECK(g[1] == doctest::Approx(1.0));
  CHECK(g[2] == doctest::Approx(10.0));
}

TEST_CASE("chain validation") {
  CHECK_THROWS_AS(chain_hamiltonian(ChainSpec::asymmetric(1, 1.0, 1.0, 1.0)), StructuralError);
  CHECK_THROWS_AS(chain_hamiltonian(ChainSpec::asymmetric(5, 0.0, 1.0, 1.0)), StructuralError);
  ChainSpec s = ChainSpec::asymmetric(5, 1.0, 1.0, 2.0);
  CHECK(s.asymmetry() == doctest::Approx(2.0));
  s.disorder = 1.0;
  CHECK(chain_hamiltonian(s, 1) != chain_hamiltonian(s, 2));
  CHECK(chain_hamiltonian(s, 1) == chain_hamiltonian(s, 1));
}

}
