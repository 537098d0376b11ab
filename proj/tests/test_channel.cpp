#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chanres/channel.hpp>

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

TEST_CASE("identity Choi is the unnormalized entangled projector") {
  Channel id = Channel::identity(2);
  CHECK(id.choi().rows() == 4);
  CHECK(std::abs(id.choi().trace().real() - 2.0) < 1e-12);
  Eigen::SelfAdjointEigenSolver<Matrix> es(id.choi(), Eigen::EigenvaluesOnly);
  CHECK(es.eigenvalues()(3) == doctest::Approx(2.0));  // rank one
  CHECK(es.eigenvalues()(2) == doctest::Approx(0.0));
}

TEST_CASE("cq channel with basis outputs has diagonal Choi") {
  Channel cq = Channel::from_cq({DensityMatrix::basis_state(2, 0).matrix(),
                                 DensityMatrix::basis_state(2, 1).matrix()});
  Matrix expected = Matrix::Zero(4, 4);
  expected(0, 0) = 1.0;
  expected(3, 3) = 1.0;
  CHECK((cq.choi() - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("phase-flip mixture Choi keeps only the diagonal") {
  double s = 1.0 / std::sqrt(2.0);
  Channel pf = Channel::from_kraus(
      {s * Matrix::Identity(2, 2), s * pauli_z()});
  Matrix expected = Matrix::Zero(4, 4);
  expected(0, 0) = 1.0;
  expected(3, 3) = 1.0;
  CHECK((pf.choi() - expected).cwiseAbs().maxCoeff() < 1e-12);

  // phase-flip mix on |+><+| gives I/2
  Vector plus(2);
  plus << 1, 1;
  DensityMatrix out = pf.apply(DensityMatrix::pure(plus));
  CHECK((out.matrix() - Matrix::Identity(2, 2) / 2.0).cwiseAbs().maxCoeff() <
        1e-12);
}

TEST_CASE("invalid representations are rejected") {
  CHECK_THROWS_AS(Channel::from_kraus({Matrix::Identity(2, 2) * 0.5}),
                  NonTracePreserving);
  CHECK_THROWS_AS(Channel::from_unitary(Matrix::Identity(2, 2) * 2.0),
                  std::invalid_argument);
  Matrix bad_choi = -Matrix::Identity(4, 4);
  CHECK_THROWS_AS(Channel(2, 2, bad_choi), NonCompletelyPositive);
}

TEST_CASE("Choi round trip reproduces direct evaluation on random states") {
  Rng rng(7);
  std::vector<Matrix> kraus;
  {
    // random channel's own Kraus operators, evaluated directly as an oracle
    Channel c = Channel::random(2, 2, 2, rng);
    kraus = c.kraus_operators();
    for (int t = 0; t < 100; ++t) {
      DensityMatrix rho{rng.random_density(2)};
      Matrix direct = oracles::apply_kraus(kraus, rho.matrix());
      Matrix via_choi = c.apply(rho).matrix();
      CHECK((direct - via_choi).cwiseAbs().maxCoeff() < 1e-9);
    }
  }
  {
    Channel u = Channel::from_unitary(hadamard());
    for (int t = 0; t < 20; ++t) {
      DensityMatrix rho{rng.random_density(2)};
      Matrix direct = hadamard() * rho.matrix() * hadamard().adjoint();
      CHECK((direct - u.apply(rho).matrix()).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("apply on identity and constant channels") {
  Rng rng(9);
  DensityMatrix rho{rng.random_density(3)};
  CHECK((Channel::identity(3).apply(rho).matrix() - rho.matrix())
            .cwiseAbs()
            .maxCoeff() < 1e-12);
  DensityMatrix sigma{rng.random_density(2)};
  Channel rep = Channel::constant(sigma, 3);
  CHECK((rep.apply(rho).matrix() - sigma.matrix()).cwiseAbs().maxCoeff() <
        1e-12);
  CHECK(rep.is_constant());
  CHECK_FALSE(Channel::identity(2).is_constant());
}

TEST_CASE("compose matches sequential application") {
  Rng rng(11);
  Channel f = Channel::random(2, 3, 2, rng);
  Channel s = Channel::random(3, 2, 2, rng);
  Channel fs = compose(s, f);
  CHECK(fs.dim_in() == 2);
  CHECK(fs.dim_out() == 2);
  for (int t = 0; t < 30; ++t) {
    DensityMatrix rho{rng.random_density(2)};
    Matrix two_step = s.apply(f.apply(rho)).matrix();
    CHECK((fs.apply(rho).matrix() - two_step).cwiseAbs().maxCoeff() < 1e-10);
  }
  // unitary composition is the product unitary
  Matrix u = rng.haar_unitary(2), v = rng.haar_unitary(2);
  Channel uv = compose(Channel::from_unitary(u), Channel::from_unitary(v));
  Channel prod = Channel::from_unitary(u * v);
  CHECK((uv.choi() - prod.choi()).cwiseAbs().maxCoeff() < 1e-12);
  // replacer absorbs anything downstream of it
  DensityMatrix sigma{rng.random_density(2)};
  Channel rep = Channel::constant(sigma, 2);
  Channel absorbed = compose(rep, Channel::random(2, 2, 2, rng));
  CHECK((absorbed.choi() - rep.choi()).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("compose is associative") {
  Rng rng(13);
  Channel a = Channel::random(2, 2, 2, rng);
  Channel b = Channel::random(2, 2, 2, rng);
  Channel c = Channel::random(2, 2, 2, rng);
  Matrix lhs = compose(compose(c, b), a).choi();
  Matrix rhs = compose(c, compose(b, a)).choi();
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("tensor structure") {
  CHECK((tensor(Channel::identity(2), Channel::identity(2)).choi() -
         Channel::identity(4).choi())
            .cwiseAbs()
            .maxCoeff() < 1e-12);

  Rng rng(15);
  Channel n = Channel::random(2, 2, 2, rng);
  DensityMatrix sigma{rng.random_density(2)};
  Channel big = tensor(n, Channel::constant(sigma, 2));
  DensityMatrix rho{rng.random_density(2)};
  DensityMatrix omega{rng.random_density(2)};
  Matrix in = kron(rho.matrix(), omega.matrix());
  Matrix expected = kron(n.apply(rho).matrix(), sigma.matrix());
  CHECK((big.apply(DensityMatrix(in)).matrix() - expected)
            .cwiseAbs()
            .maxCoeff() < 1e-10);
}

TEST_CASE("permute_systems examples") {
  Rng rng(17);
  Channel n = Channel::random(2, 2, 2, rng);
  DensityMatrix sigma{rng.random_density(2)};
  Channel left = tensor(Channel::identity(2), Channel::constant(sigma, 2));
  Channel swapped = permute_systems(left, {2, 2}, {2, 2}, {1, 0});
  Channel right = tensor(Channel::constant(sigma, 2), Channel::identity(2));
  CHECK((swapped.choi() - right.choi()).cwiseAbs().maxCoeff() < 1e-12);

  // identity permutation
  Channel same = permute_systems(left, {2, 2}, {2, 2}, {0, 1});
  CHECK((same.choi() - left.choi()).cwiseAbs().maxCoeff() == 0.0);

  // transpositions are involutions
  Channel twice =
      permute_systems(permute_systems(tensor(n, left), {2, 2, 2}, {2, 2, 2},
                                      {1, 0, 2}),
                      {2, 2, 2}, {2, 2, 2}, {1, 0, 2});
  CHECK((twice.choi() - tensor(n, left).choi()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("tensor is associative in the canonical factor order") {
  Rng rng(23);
  Channel a = Channel::random(2, 2, 2, rng);
  Channel b = Channel::random(2, 3, 2, rng);
  Channel c = Channel::random(3, 2, 2, rng);
  Matrix lhs = tensor(tensor(a, b), c).choi();
  Matrix rhs = tensor(a, tensor(b, c)).choi();
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("permute_systems with unequal factor dimensions") {
  Rng rng(25);
  Channel a = Channel::random(2, 3, 2, rng);
  Channel b = Channel::random(3, 2, 2, rng);
  Channel swapped = permute_systems(tensor(a, b), {2, 3}, {3, 2}, {1, 0});
  Channel direct = tensor(b, a);
  CHECK((swapped.choi() - direct.choi()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("channel_dmax basics") {
  Channel id = Channel::identity(2);
  Channel dep = Channel::constant(DensityMatrix::maximally_mixed(2), 2);
  CHECK(channel_dmax(id, id).value() == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(channel_dmax(id, dep).value() == doctest::Approx(2.0));
  // qutrit: 2 log2 3
  Channel id3 = Channel::identity(3);
  Channel dep3 = Channel::constant(DensityMatrix::maximally_mixed(3), 3);
  CHECK(channel_dmax(id3, dep3).value() ==
        doctest::Approx(2.0 * std::log2(3.0)));
  // support violation between orthogonal replacers
  Channel r0 = Channel::constant(DensityMatrix::basis_state(2, 0), 2);
  Channel r1 = Channel::constant(DensityMatrix::basis_state(2, 1), 2);
  CHECK(channel_dmax(r0, r1).is_infinite());
}

TEST_CASE("channel_dmax is additive under tensor products") {
  Rng rng(19);
  for (int t = 0; t < 10; ++t) {
    Channel n1 = Channel::random(2, 2, 2, rng);
    Channel m1 = Channel::random(2, 2, 4, rng);
    Channel n2 = Channel::random(2, 2, 2, rng);
    Channel m2 = Channel::random(2, 2, 4, rng);
    double lhs = channel_dmax(tensor(n1, n2), tensor(m1, m2)).value();
    double rhs = channel_dmax(n1, m1).value() + channel_dmax(n2, m2).value();
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-7));
  }
}

TEST_CASE("partial trace channel") {
  Rng rng(21);
  DensityMatrix a{rng.random_density(2)};
  DensityMatrix b{rng.random_density(3)};
  Channel tr_second = partial_trace_channel(2, 3, true);
  DensityMatrix joint{kron(a.matrix(), b.matrix())};
  CHECK((tr_second.apply(joint).matrix() - a.matrix()).cwiseAbs().maxCoeff() <
        1e-12);
}
