#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chanres/free_sets.hpp>

using namespace chanres;

namespace {

Matrix hadamard() {
  Matrix h(2, 2);
  double s = 1.0 / std::sqrt(2.0);
  h << s, s, s, -s;
  return h;
}

}  // namespace

TEST_CASE("constant cone membership") {
  FreeSetSpec spec = FreeSetSpec::constant(2, 2);
  Rng rng(3);
  DensityMatrix sigma{rng.random_density(2)};
  CHECK(is_free(Channel::constant(sigma, 2), spec));
  CHECK_FALSE(is_free(Channel::identity(2), spec));

  // cross-validation: freeness iff the output is input-independent
  for (int t = 0; t < 10; ++t) {
    Channel c = t % 2 ? Channel::constant(DensityMatrix{rng.random_density(2)}, 2)
                      : Channel::random(2, 2, 2, rng);
    bool output_fixed = true;
    DensityMatrix ref = c.apply(DensityMatrix{rng.random_density(2)});
    for (int k = 0; k < 10; ++k) {
      DensityMatrix out = c.apply(DensityMatrix{rng.random_density(2)});
      if ((out.matrix() - ref.matrix()).cwiseAbs().maxCoeff() > 1e-8)
        output_fixed = false;
    }
    CHECK(is_free(c, spec, 1e-8) == output_fixed);
  }
}

TEST_CASE("mio cone membership") {
  FreeSetSpec spec = FreeSetSpec::mio(2, 2);
  CHECK(is_free(Channel::completely_dephasing(2), spec));
  CHECK_FALSE(is_free(Channel::from_unitary(hadamard()), spec));
  CHECK(is_free(Channel::identity(2), spec));

  // freeness iff every basis state maps to a diagonal state
  Rng rng(5);
  for (int t = 0; t < 10; ++t) {
    Channel c = t % 2 ? sample_free(spec, 100 + t) : Channel::random(2, 2, 2, rng);
    bool diag_outputs = true;
    for (int i = 0; i < 2; ++i) {
      Matrix out = c.apply(DensityMatrix::basis_state(2, i)).matrix();
      if (std::abs(out(0, 1)) > 1e-8) diag_outputs = false;
    }
    CHECK(is_free(c, spec, 1e-8) == diag_outputs);
  }
}

TEST_CASE("gibbs cone membership") {
  Matrix h(2, 2);
  h << 0, 0, 0, 1;
  FreeSetSpec spec = FreeSetSpec::gibbs(h, 1.0);
  DensityMatrix tau = gibbs_state(h, 1.0);
  CHECK(is_free(Channel::constant(tau, 2), spec));
  CHECK(is_free(Channel::identity(2), spec));
  CHECK_FALSE(is_free(Channel::constant(DensityMatrix::basis_state(2, 0), 2),
                      spec));
  // free channels fix the Gibbs state
  for (int s = 0; s < 20; ++s) {
    Channel c = sample_free(spec, 400 + s);
    Matrix out = c.apply(tau).matrix();
    CHECK((out - tau.matrix()).cwiseAbs().maxCoeff() < 1e-7);
  }
}

TEST_CASE("gibbs with zero Hamiltonian matches max-mixed preserving") {
  FreeSetSpec gz = FreeSetSpec::gibbs(Matrix::Zero(2, 2), 1.0);
  FreeSetSpec mm = FreeSetSpec::max_mixed_preserving(2, 2);
  Rng rng(7);
  for (int t = 0; t < 20; ++t) {
    Channel c = t % 2 ? sample_free(mm, 500 + t) : Channel::random(2, 2, 2, rng);
    CHECK(is_free(c, gz, 1e-8) == is_free(c, mm, 1e-8));
  }
}

TEST_CASE("max-mixed-preserving membership") {
  FreeSetSpec spec = FreeSetSpec::max_mixed_preserving(2, 2);
  CHECK(is_free(Channel::identity(2), spec));
  CHECK(is_free(Channel::completely_dephasing(2), spec));
  CHECK_FALSE(is_free(Channel::constant(DensityMatrix::basis_state(2, 0), 2),
                      spec));
}

TEST_CASE("constant-to cone pins the single replacer") {
  Rng rng(11);
  DensityMatrix tau{rng.random_density(2)};
  FreeSetSpec spec = FreeSetSpec::constant_to(tau, 2);
  CHECK(is_free(Channel::constant(tau, 2), spec));
  CHECK_FALSE(is_free(Channel::constant(DensityMatrix::maximally_mixed(2), 2),
                      spec));
  CHECK_FALSE(is_free(Channel::identity(2), spec));
}

TEST_CASE("sampled channels are free for every kind, many seeds") {
  Matrix h(2, 2);
  h << 0, 0, 0, 1.3;
  std::vector<FreeSetSpec> specs = {
      FreeSetSpec::constant(2, 2), FreeSetSpec::mio(2, 2),
      FreeSetSpec::gibbs(h, 0.8), FreeSetSpec::max_mixed_preserving(2, 2)};
  for (const FreeSetSpec& spec : specs)
    for (std::uint64_t seed = 0; seed < 100; ++seed)
      CHECK(is_free(sample_free(spec, seed), spec, 1e-8));
  CHECK_THROWS_AS(sample_free(FreeSetSpec::custom(2, 2, {}), 0),
                  UnsupportedKind);
}

TEST_CASE("axiom report: constant cone fails identity, passes closure") {
  AxiomReport rep = axiom_check(FreeSetSpec::constant(2, 2), 20, 42);
  bool found_identity = false;
  for (const AxiomFinding& f : rep.findings) {
    if (f.axiom == "identity_free") {
      found_identity = true;
      CHECK(f.applicable);
      CHECK_FALSE(f.holds);  // the identity is not a constant channel
    }
    if (f.axiom == "closure_composition" || f.axiom == "closure_tensor" ||
        f.axiom == "convexity" || f.axiom == "free_states" ||
        f.axiom == "trace_free")
      CHECK(f.holds);
  }
  CHECK(found_identity);
}

TEST_CASE("axiom report: mio passes the listed axioms") {
  AxiomReport rep = axiom_check(FreeSetSpec::mio(2, 2), 20, 43);
  for (const AxiomFinding& f : rep.findings)
    if (f.applicable) CHECK(f.holds);
  CHECK(rep.all_applicable_hold());
}

TEST_CASE("axiom report: max-mixed-preserving compose closure") {
  AxiomReport rep = axiom_check(FreeSetSpec::max_mixed_preserving(2, 2), 20, 44);
  for (const AxiomFinding& f : rep.findings)
    if (f.axiom == "closure_composition") {
      CHECK(f.applicable);
      CHECK(f.holds);
    }
}

TEST_CASE("axiom report: gibbs cone passes all applicable axioms") {
  Matrix h(2, 2);
  h << 0, 0, 0, 1.0;
  AxiomReport rep = axiom_check(FreeSetSpec::gibbs(h, 1.0), 10, 45);
  for (const AxiomFinding& f : rep.findings)
    if (f.applicable) CHECK(f.holds);
  CHECK(rep.all_applicable_hold());
}

TEST_CASE("compiled functionals evaluate linearly") {
  FreeSetSpec spec = FreeSetSpec::mio(2, 2);
  ConeConstraints cc = compile(spec, true);
  CHECK(cc.conic_equalities.size() == 4);  // two off-diagonal rows per basis state
  CHECK(cc.tp_rows.size() == 4);           // d_in^2 real rows
  Channel deph = Channel::completely_dephasing(2);
  for (const LinearFunctional& f : cc.conic_equalities)
    CHECK(std::abs(evaluate_functional(f, deph.choi()) - f.rhs) < 1e-12);
  for (const LinearFunctional& f : cc.tp_rows)
    CHECK(std::abs(evaluate_functional(f, deph.choi()) - f.rhs) < 1e-12);
}

TEST_CASE("dimension mismatch raises") {
  CHECK_THROWS_AS(is_free(Channel::identity(3), FreeSetSpec::mio(2, 2)),
                  DimensionMismatch);
}
