// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances are pinned in code next to each check.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <chanres/channel.hpp>
#include <chanres/free_sets.hpp>
#include <chanres/monotones.hpp>
#include <chanres/norms.hpp>
#include <chanres/protocols.hpp>

#include "testing/oracles.hpp"

using namespace chanres;

namespace {

int g_failures = 0;

struct Criterion {
  std::string name;
  std::function<std::string()> run;  // returns "" on pass, else the reason
};

Matrix hadamard() {
  Matrix h(2, 2);
  double s = 1.0 / std::sqrt(2.0);
  h << s, s, s, -s;
  return h;
}

Matrix pauli_z() {
  Matrix z(2, 2);
  z << 1, 0, 0, -1;
  return z;
}

std::string fail(const char* fmt, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), fmt, a, b);
  return buf;
}

// --------------------------------------------------------------------------
// 1. D_max constants for identity vs flat replacer, d in {2, 3}
// --------------------------------------------------------------------------
std::string criterion_dmax_constants() {
  for (int d : {2, 3}) {
    Channel id = Channel::identity(d);
    Channel flat = Channel::constant(DensityMatrix::maximally_mixed(d), d);
    double got = channel_dmax(id, flat).value();
    double want = 2.0 * std::log2(double(d));
    if (std::abs(got - want) > 1e-5)
      return fail("d_max %.9f != %.9f", got, want);
    // independent oracle: top eigenvalue of the Choi ratio
    Matrix isq = inverse_sqrt_on_support(flat.choi());
    double top =
        operator_norm_hermitian(hermitize(isq * id.choi() * isq));
    if (std::abs(std::log2(top) - want) > 1e-5)
      return fail("eigensolve oracle %.9f != %.9f", std::log2(top), want);
  }
  return "";
}

// --------------------------------------------------------------------------
// 2. i_max equals the constant-cone log-robustness
// --------------------------------------------------------------------------
std::string criterion_imax() {
  double id_val = i_max(Channel::identity(2)).value;
  if (std::abs(id_val - 2.0) > 1e-5)
    return fail("i_max(id2) %.9f != %.9f", id_val, 2.0);
  for (int t = 0; t < 20; ++t) {
    Rng rng(1000 + t);
    Channel n = Channel::random(2, 2, 1 + t % 4, rng);
    ImaxResult r = i_max(n);
    RobustnessResult rob = robustness(n, FreeSetSpec::constant(2, 2));
    if (std::abs(r.value - rob.log_robustness) > 1e-5)
      return fail("i_max %.9f vs LR %.9f", r.value, rob.log_robustness);
  }
  return "";
}

// --------------------------------------------------------------------------
// 3. diamond SDP against the unitary-pair closed form
// --------------------------------------------------------------------------
std::string criterion_diamond_oracle() {
  double idz = diamond_distance(Channel::identity(2),
                                Channel::from_unitary(pauli_z()));
  if (std::abs(idz - 1.0) > 1e-6) return fail("id-vs-Z %.9f != %.9f", idz, 1.0);
  int seed = 0;
  for (int d : {2, 3}) {
    for (int t = 0; t < 20; ++t) {
      Rng rng(2000 + seed++);
      Matrix u = rng.haar_unitary(d);
      Matrix v = rng.haar_unitary(d);
      double sdp = diamond_distance(Channel::from_unitary(u),
                                    Channel::from_unitary(v));
      double oracle = oracles::unitary_pair_half_diamond(u, v);
      if (std::abs(sdp - oracle) > 1e-5)
        return fail("sdp %.9f vs closed form %.9f", sdp, oracle);
    }
  }
  return "";
}

// --------------------------------------------------------------------------
// 4. convex-split bound, shortcut and full-SDP paths
// --------------------------------------------------------------------------
std::string criterion_convex_split() {
  for (int t = 0; t < 20; ++t) {
    Rng rng(3000 + t);
    Matrix sig = rng.random_density(2);
    // full-support reference keeps lambda finite
    Matrix tau = 0.7 * rng.random_density(2) + 0.3 * Matrix::Identity(2, 2) / 2;
    tau /= tau.trace().real();
    Channel alpha = Channel::constant(DensityMatrix(sig), 2);
    Channel beta = Channel::constant(DensityMatrix(tau), 2);
    for (int n : {2, 4, 8, 16}) {
      ConvexSplitReport rep = convex_split(alpha, beta, n);
      if (!rep.used_shortcut) return "expected the shortcut path";
      if (rep.measured_distance > rep.bound)
        return fail("distance %.9f > bound %.9f", rep.measured_distance,
                    rep.bound);
    }
    ConvexSplitReport same = convex_split(beta, beta, 4);
    if (same.measured_distance > 1e-9)
      return fail("alpha=beta distance %.2e > %.2e", same.measured_distance,
                  1e-9);
  }
  // one general (non-constant) qubit pair at n = 3 through the diamond SDP
  Rng rng(3999);
  Channel alpha = Channel::random(2, 2, 2, rng);
  Channel beta = Channel::random(2, 2, 4, rng);
  ProtocolBudget budget;
  budget.solver.gap_tol = 1e-7;
  budget.solver.feas_tol = 1e-7;
  ConvexSplitReport rep = convex_split(alpha, beta, 3, budget);
  if (rep.used_shortcut) return "expected the full SDP path";
  if (rep.measured_distance > rep.bound)
    return fail("full-SDP distance %.9f > bound %.9f", rep.measured_distance,
                rep.bound);
  return "";
}

// --------------------------------------------------------------------------
// 5. erasure protocol on the constant-channel family
// --------------------------------------------------------------------------
std::string criterion_erasure() {
  const double eps = 0.6, eta = 0.1;
  std::vector<Matrix> targets;
  Matrix t1(2, 2);
  t1 << 0.15, 0, 0, 0.85;
  targets.push_back(t1);
  Matrix t2(2, 2);
  t2 << 0.08, Complex(0.02, 0.01), Complex(0.02, -0.01), 0.92;
  targets.push_back(t2);
  Rng rng(4100);
  std::vector<Matrix> sources = {DensityMatrix::basis_state(2, 0).matrix(),
                                 rng.random_density(2)};
  for (const Matrix& tgt : targets) {
    for (const Matrix& src : sources) {
      FreeSetSpec cone = FreeSetSpec::constant_to(DensityMatrix(tgt), 2);
      Channel n = Channel::constant(DensityMatrix(src), 2);
      ErasureReport rep = erasure_protocol(n, cone, eps, eta);
      if (!rep.executed) return "protocol did not execute";
      if (rep.achieved_distance > eps + 1e-9)
        return fail("achieved %.9f > eps %.9f", rep.achieved_distance, eps);
      double cost_cap = rep.lr_value + 2.0 * std::log2(1.0 / eta) - 1.0 + 1.0;
      if (rep.cost_bits > cost_cap)
        return fail("cost %.9f > cap %.9f", rep.cost_bits, cost_cap);
      if (rep.lower_bound_info.convex_value > rep.cost_bits + 1e-6)
        return fail("convex lower bound %.9f > cost %.9f",
                    rep.lower_bound_info.convex_value, rep.cost_bits);
    }
  }
  return "";
}

// --------------------------------------------------------------------------
// 6. monotone suite over MIO and max-mixed-preserving cones
// --------------------------------------------------------------------------
std::string criterion_monotone_suite() {
  for (int which = 0; which < 2; ++which) {
    FreeSetSpec spec = which == 0 ? FreeSetSpec::mio(2, 2)
                                  : FreeSetSpec::max_mixed_preserving(2, 2);
    MonotoneSuiteReport rep = monotone_suite(spec, 50, 5000 + which);
    if (!rep.clean()) {
      const MonotoneViolation& v = rep.violations.front();
      return v.property + " violated at trial " + std::to_string(v.trial) +
             " (" + std::to_string(v.lhs) + " vs " + std::to_string(v.rhs) +
             ") on " + rep.cone;
    }
  }
  return "";
}

// --------------------------------------------------------------------------
// 7. D_max additivity on tensor pairs
// --------------------------------------------------------------------------
std::string criterion_dmax_additivity() {
  for (int t = 0; t < 20; ++t) {
    Rng rng(6000 + t);
    Channel n1 = Channel::random(2, 2, 2, rng);
    Channel m1 = Channel::random(2, 2, 4, rng);
    Channel n2 = Channel::random(2, 2, 3, rng);
    Channel m2 = Channel::random(2, 2, 4, rng);
    double joint = channel_dmax(tensor(n1, n2), tensor(m1, m2)).value();
    double split = channel_dmax(n1, m1).value() + channel_dmax(n2, m2).value();
    if (std::abs(joint - split) > 1e-7)
      return fail("additivity %.10f vs %.10f", joint, split);
  }
  return "";
}

// --------------------------------------------------------------------------
// 8. MIO cost bracket and cq costs
// --------------------------------------------------------------------------
std::string criterion_mio_bracket() {
  for (int t = 0; t < 20; ++t) {
    Rng rng(7000 + t);
    Channel n = Channel::random(2, 2, 1 + t % 4, rng);
    for (double eps : {0.0, 0.05}) {
      CostBracket br = mio_cost_bracket(n, eps);
      if (br.lower > br.upper + 1e-9)
        return fail("bracket lower %.9f > upper %.9f", br.lower, br.upper);
      if (br.upper - br.lower > 1.0 + 1e-9)
        return fail("bracket width %.9f > %.9f", br.upper - br.lower, 1.0);
    }
  }
  Vector plus(2);
  plus << 1, 1;
  Channel cq = Channel::from_cq({DensityMatrix::pure(plus).matrix(),
                                 DensityMatrix::basis_state(2, 0).matrix()});
  double cost = cq_asymptotic_cost(cq);
  if (std::abs(cost - 1.0) > 1e-8) return fail("cq cost %.10f != %.10f", cost, 1.0);
  return "";
}

// --------------------------------------------------------------------------
// 9. majorization checks
// --------------------------------------------------------------------------
std::string criterion_majorization() {
  Matrix id = Matrix::Identity(2, 2);
  if (!io_unitary_necessary_condition(id, hadamard()))
    return "I -> H should pass";
  if (io_unitary_necessary_condition(hadamard(), id))
    return "H -> I should fail";
  for (int t = 0; t < 100; ++t) {
    Rng rng(8000 + t);
    RealVector p = rng.random_distribution(2 + t % 4);
    RealVector q = rng.random_distribution(2 + (t / 2) % 4);
    if (majorizes(p, q) != oracles::majorizes(p, q))
      return "library disagrees with the prefix-sum oracle";
  }
  return "";
}

// --------------------------------------------------------------------------
// 10. smoothing sanity
// --------------------------------------------------------------------------
std::string criterion_smoothing() {
  const std::vector<double> grid = {0.0, 0.05, 0.1, 0.2};
  for (int t = 0; t < 10; ++t) {
    Rng rng(9000 + t);
    Channel n = Channel::random(2, 2, 2, rng);
    Channel m = Channel::random(2, 2, 4, rng);  // full support
    double prev_dmax = std::numeric_limits<double>::infinity();
    double prev_lr = std::numeric_limits<double>::infinity();
    double base_dmax = channel_dmax(n, m).value();
    double base_lr =
        robustness(n, FreeSetSpec::mio(2, 2)).log_robustness;
    for (double eps : grid) {
      SmoothParams sp;
      sp.epsilon = eps;
      SmoothDmaxResult sd = channel_dmax_smooth(n, m, sp);
      if (sd.value.value() > prev_dmax + 1e-6)
        return fail("smooth dmax rose %.9f > %.9f", sd.value.value(),
                    prev_dmax);
      prev_dmax = sd.value.value();
      RobustnessResult rr = robustness(n, FreeSetSpec::mio(2, 2), sp);
      if (rr.log_robustness > prev_lr + 1e-6)
        return fail("smooth LR rose %.9f > %.9f", rr.log_robustness, prev_lr);
      prev_lr = rr.log_robustness;
      if (eps == 0.0) {
        if (std::abs(sd.value.value() - base_dmax) > 1e-6)
          return fail("eps=0 dmax %.9f != %.9f", sd.value.value(), base_dmax);
        if (std::abs(rr.log_robustness - base_lr) > 1e-6)
          return fail("eps=0 LR %.9f != %.9f", rr.log_robustness, base_lr);
      }
    }
  }
  return "";
}

}  // namespace

int main() {
  std::vector<Criterion> criteria = {
      {"1 D_max constants 2*log2(d), d in {2,3}", criterion_dmax_constants},
      {"2 i_max consistency with the constant-cone LR", criterion_imax},
      {"3 diamond SDP vs unitary-pair closed form", criterion_diamond_oracle},
      {"4 convex-split bound (shortcut and full SDP)", criterion_convex_split},
      {"5 erasure protocol achievability and bounds", criterion_erasure},
      {"6 monotone suite: MIO and max-mixed, 50 trials", criterion_monotone_suite},
      {"7 D_max additivity on tensor pairs", criterion_dmax_additivity},
      {"8 MIO cost bracket and cq-channel costs", criterion_mio_bracket},
      {"9 majorization checks vs prefix-sum oracle", criterion_majorization},
      {"10 smoothing is monotone and anchored at eps=0", criterion_smoothing},
  };

  for (const Criterion& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    std::string reason;
    try {
      reason = c.run();
    } catch (const std::exception& e) {
      reason = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
    if (reason.empty()) {
      std::printf("[PASS] criterion %s (%.1fs)\n", c.name.c_str(), secs);
    } else {
      std::printf("[FAIL] criterion %s (%.1fs): %s\n", c.name.c_str(), secs,
                  reason.c_str());
      ++g_failures;
    }
    std::fflush(stdout);
  }
  if (g_failures == 0) {
    std::printf("acceptance: all %zu criteria passed\n", criteria.size());
    return 0;
  }
  std::printf("acceptance: %d criterion(s) failed\n", g_failures);
  return 1;
}
