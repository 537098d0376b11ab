#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chanres/norms.hpp>

#include "testing/oracles.hpp"

using namespace chanres;

namespace {

Matrix pauli_z() {
  Matrix z(2, 2);
  z << 1, 0, 0, -1;
  return z;
}

Matrix hadamard() {
  Matrix h(2, 2);
  double s = 1.0 / std::sqrt(2.0);
  h << s, s, s, -s;
  return h;
}

}  // namespace

TEST_CASE("diamond norm of the zero difference vanishes") {
  Rng rng(1);
  Channel n = Channel::random(2, 2, 2, rng);
  CHECK(diamond_norm(HermitianPreservingMap::difference(n, n)) <= 1e-8);
}

TEST_CASE("identity vs Z saturates the norm") {
  Channel id = Channel::identity(2);
  Channel z = Channel::from_unitary(pauli_z());
  CHECK(diamond_norm(HermitianPreservingMap::difference(id, z)) ==
        doctest::Approx(2.0).epsilon(1e-6));
  CHECK(diamond_distance(id, z) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("identity vs flat replacer: value and the grid oracle") {
  Channel id = Channel::identity(2);
  Channel dep = Channel::constant(DensityMatrix::maximally_mixed(2), 2);
  double full = diamond_norm(HermitianPreservingMap::difference(id, dep));
  CHECK(full == doctest::Approx(1.5).epsilon(1e-6));
  double grid = oracles::id_vs_flat_replacer_half_diamond_grid(2000);
  CHECK(0.5 * full == doctest::Approx(grid).epsilon(1e-5));
}

TEST_CASE("diamond distance against the unitary-pair closed form") {
  Rng rng(3);
  for (int d : {2, 3}) {
    for (int t = 0; t < 8; ++t) {
      Matrix u = rng.haar_unitary(d);
      Matrix v = rng.haar_unitary(d);
      double sdp =
          diamond_distance(Channel::from_unitary(u), Channel::from_unitary(v));
      double oracle = oracles::unitary_pair_half_diamond(u, v);
      CHECK(sdp == doctest::Approx(oracle).epsilon(1e-5));
    }
  }
}

TEST_CASE("orthogonal replacers are perfectly distinguishable") {
  Channel r0 = Channel::constant(DensityMatrix::basis_state(2, 0), 2);
  Channel r1 = Channel::constant(DensityMatrix::basis_state(2, 1), 2);
  CHECK(diamond_distance(r0, r1) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("metric properties on random channels") {
  Rng rng(5);
  Channel a = Channel::random(2, 2, 2, rng);
  Channel b = Channel::random(2, 2, 2, rng);
  Channel c = Channel::random(2, 2, 2, rng);
  double ab = diamond_distance(a, b);
  double ba = diamond_distance(b, a);
  double ac = diamond_distance(a, c);
  double cb = diamond_distance(c, b);
  CHECK(ab == doctest::Approx(ba).epsilon(1e-7));
  CHECK(ab <= ac + cb + 1e-7);
}

TEST_CASE("tensoring a common factor does not change the distance") {
  Rng rng(7);
  Channel a = Channel::random(2, 2, 2, rng);
  Channel b = Channel::random(2, 2, 2, rng);
  Channel c = Channel::random(2, 2, 2, rng);
  double base = diamond_distance(a, b);
  double ext = diamond_distance(tensor(a, c), tensor(b, c));
  CHECK(ext == doctest::Approx(base).epsilon(1e-6));
}

TEST_CASE("data processing under post-composition") {
  Rng rng(9);
  for (int t = 0; t < 5; ++t) {
    Channel a = Channel::random(2, 2, 2, rng);
    Channel b = Channel::random(2, 2, 2, rng);
    Channel f = Channel::random(2, 2, 2, rng);
    CHECK(diamond_distance(compose(f, a), compose(f, b)) <=
          diamond_distance(a, b) + 1e-7);
  }
}

TEST_CASE("distance to the constant cone: frozen value 3/4 for the identity") {
  auto r = diamond_distance_to_free(Channel::identity(2),
                                    FreeSetSpec::constant(2, 2));
  CHECK(r.distance == doctest::Approx(0.75).epsilon(1e-6));
  CHECK(r.closest_free.is_constant(1e-6));
  // the optimizer lands on the flat replacer
  Matrix out = r.closest_free.constant_output().matrix();
  CHECK((out - Matrix::Identity(2, 2) / 2.0).cwiseAbs().maxCoeff() < 1e-4);
}

TEST_CASE("distance to free vanishes exactly on free channels") {
  FreeSetSpec mio = FreeSetSpec::mio(2, 2);
  Rng rng(11);
  for (int t = 0; t < 5; ++t) {
    Channel f = sample_free(mio, 600 + t);
    CHECK(diamond_distance_to_free(f, mio).distance <= 1e-6);
    Channel n = Channel::random(2, 2, 2, rng);
    double d = diamond_distance_to_free(n, mio).distance;
    CHECK(d >= -1e-9);
    CHECK((d <= 1e-6) == is_free(n, mio, 1e-6));
  }
}

TEST_CASE("hadamard vs the MIO cone: regression value") {
  auto r = diamond_distance_to_free(Channel::from_unitary(hadamard()),
                                    FreeSetSpec::mio(2, 2));
  CHECK(r.distance >= 0.1);
  // frozen from the joint SDP (stable across solver tolerances down to 1e-10)
  CHECK(r.distance == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(is_free(r.closest_free, FreeSetSpec::mio(2, 2), 1e-6));
}

TEST_CASE("hermitian-preserving map validation") {
  Matrix j(4, 4);
  j.setZero();
  j(0, 1) = Complex(0.0, 1.0);
  CHECK_THROWS(HermitianPreservingMap(2, 2, j));
  CHECK_THROWS_AS(HermitianPreservingMap(3, 2, Matrix::Zero(4, 4)),
                  DimensionMismatch);
}
