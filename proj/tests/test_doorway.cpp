#include <doctest.h>

#include <cmath>
#include <numeric>

#include "oqs/chain.hpp"
#include "oqs/doorway.hpp"
#include "oqs/errors.hpp"
#include "oqs/scattering.hpp"

using namespace oqs;

TEST_SUITE("doorway") {

TEST_CASE("doorway W has rank one per doorway") {
  DoorwaySpec d;
  d.admixture = RealVector::LinSpaced(6, 0.1, 0.6);
  d.admixture.normalize();
  d.decay = RealVector::Constant(3, 0.2);
  d.spreading = 0.5;
  CHECK(d.escape_width() == doctest::Approx(kTwoPi * 0.12));
  const DoorwayW w = doorway_w(d);
  CHECK(w.rank == 1);
  CHECK(w.eigenvalues(5) == doctest::Approx(d.escape_width()));
  CHECK(w.w.trace() == doctest::Approx(d.escape_width()));

  DoorwaySpec e = d;
  e.admixture = RealVector::Zero(6);
  e.admixture(0) = 1.0;
  const DoorwayW w2 = multi_doorway_w({d, e});
  CHECK(w2.rank == 2);
  CHECK(w2.w.trace() == doctest::Approx(2.0 * d.escape_width()));
  e.admixture = RealVector::Zero(5);
  CHECK_THROWS_AS(multi_doorway_w({d, e}), StructuralError);
}

TEST_CASE("doorway super-radiance criterion") {
  CHECK(validity_ratio(2.0, 1.0).superradiant);
  CHECK_FALSE(validity_ratio(1.0, 1.0).superradiant);
  CHECK(validity_ratio(0.5, 2.0).ratio == doctest::Approx(0.25));
  CHECK_THROWS_AS(validity_ratio(1.0, 0.0), StructuralError);
}

TEST_CASE("fine structure partitions the widths") {
  for (double gev : {0.0, 0.05, 0.3}) {
    const FineStructureModel m = picket_fence_doorway(41, 1.0, 10.0, 2.0, gev);
    const FineStructure fs = fine_structure(m);
    REQUIRE(fs.roots.size() == 42);
    cplx total = 0.0;
    for (auto b : fs.biorthogonal) total += b;
    CHECK(std::abs(total - 1.0) < 1e-10);
    CHECK(fs.partition_residual < 1e-8 * m.doorway_width);
    double width_sum = 0.0;
    for (const auto& r : fs.roots) width_sum += r.width;
    CHECK(width_sum == doctest::Approx(m.doorway_width + 41 * gev).epsilon(1e-10));
    for (double f : fs.fraction) CHECK((f >= 0.0 && f <= 1.0));
  }
}

TEST_CASE("uncoupled doorway keeps its own pole") {
  FineStructureModel m = picket_fence_doorway(10, 1.0, 1.0, 0.4, 0.1);
  std::fill(m.coupling.begin(), m.coupling.end(), 0.0);
  const FineStructure fs = fine_structure(m);
  int doorway = 0;
  for (std::size_t j = 0; j < fs.roots.size(); ++j) {
    if (fs.fraction[j] > 0.5) {
      ++doorway;
      CHECK(fs.roots[j].width == doctest::Approx(0.4));
      CHECK(fs.roots[j].energy == doctest::Approx(0.0).epsilon(1e-12));
    } else {
      CHECK(fs.roots[j].width == doctest::Approx(0.1));
    }
  }
  CHECK(doorway == 1);
}

TEST_CASE("evaporation flattens the strength function") {
  const auto grid = midpoint_grid(-10.0, 10.0, 400);
  double previous = 1e300;
  for (double gev : {0.05, 0.2, 0.5, 1.0, 2.0}) {
    const FineStructure fs = fine_structure(picket_fence_doorway(101, 1.0, 10.0, 0.5, gev));
    const double osc = oscillation_index(strength_function(fs, grid));
    CHECK(osc < previous);
    previous = osc;
  }
}

TEST_CASE("fine structure errors") {
  FineStructureModel m = picket_fence_doorway(5, 1.0, 1.0, 1.0, 0.1);
  m.coupling.pop_back();
  CHECK_THROWS_AS(fine_structure(m), StructuralError);
  CHECK_THROWS_AS(fine_structure(picket_fence_doorway(5, 1.0, 1.0, -1.0, 0.1)), StructuralError);
}

TEST_CASE("doorway orbital model segregates the top-orbital states") {
  OrbitalModelSpec spec;
  spec.gammas = log_grid(0.01, 1000.0, 31);
  const OrbitalTrajectories t = doorway_orbital_model(spec);
  CHECK(t.states == 70);
  CHECK(t.nontrapped == 35);
  CHECK(t.gap_decades > 2.0);
  REQUIRE(t.poles.size() == 31);
  for (std::size_t g = 0; g < t.poles.size(); ++g) {
    double sum = 0.0;
    for (const auto& p : t.poles[g]) sum += p.width;
    CHECK(sum == doctest::Approx(35.0 * t.gammas[g]).epsilon(1e-8));
  }

  spec.gammas = {0.0};
  const OrbitalTrajectories z = doorway_orbital_model(spec);
  for (const auto& p : z.poles.front()) CHECK(p.width == 0.0);

  spec.orbitals = 13;
  CHECK_THROWS_AS(doorway_orbital_model(spec), StructuralError);
}

}
