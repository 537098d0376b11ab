#include "chanres/protocols.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace chanres {

namespace {

// ---------------------------------------------------------------------------
// Collective-spin evaluation of the mixture tail distance for qubits.
//
// X := (1/n) sum_i tau^{(i-1)} (x) D (x) tau^{(n-i)} with D = sigma - tau
// factors as  X = T^{1/2} Hbar T^{1/2}  with T = tau^(x n) and Hbar a
// mean-field sum of one identical 2x2 term per site. Both exponents are
// collective operators, so X splits over the total-spin sectors; each
// sector is at most (n+1)-dimensional and enters with its Schur-Weyl
// multiplicity.
// ---------------------------------------------------------------------------

double qubit_mixture_tail(const Matrix& sigma, const Matrix& tau, int n) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(tau);
  double t1 = es.eigenvalues()(0);  // ascending
  double t0 = es.eigenvalues()(1);
  if (t1 < 1e-12)
    throw SupportViolation(
        "mixture_tail_trace_distance: rank-deficient reference state");
  Matrix q = es.eigenvectors();
  // reorder so index 0 carries t0
  Matrix qq(2, 2);
  qq.col(0) = q.col(1);
  qq.col(1) = q.col(0);
  Matrix d_mat = qq.adjoint() * (sigma - tau) * qq;
  double d0 = d_mat(0, 0).real();
  double d1 = d_mat(1, 1).real();
  double r = std::abs(d_mat(0, 1));  // off-diagonal phase is removable

  const double h00 = d0 / t0;
  const double h11 = d1 / t1;
  const double hx = r / std::sqrt(t0 * t1);
  const double delta = 0.5 * (h00 + h11);
  const double vz = 0.5 * (h00 - h11);
  const double gamma = 0.5 * (std::log(t0) + std::log(t1));
  const double uz = 0.5 * (std::log(t0) - std::log(t1));

  // log-domain accumulation over sectors
  std::vector<double> log_terms;
  for (int twos = n % 2; twos <= n; twos += 2) {
    const double s = 0.5 * twos;
    const int dim = twos + 1;
    const int k = (n - twos) / 2;  // multiplicity index
    // ln multiplicity: C(n,k) (n-2k+1)/(n-k+1)
    double log_mult = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                      std::lgamma(n - k + 1.0) +
                      std::log(double(n - 2 * k + 1)) -
                      std::log(double(n - k + 1));

    // spin operators (J = 2 S)
    RealVector mz(dim);
    for (int i = 0; i < dim; ++i) mz(i) = s - i;
    RealMatrix sx = RealMatrix::Zero(dim, dim);
    for (int i = 0; i + 1 < dim; ++i) {
      double m = s - (i + 1);
      double c = 0.5 * std::sqrt(s * (s + 1) - m * (m + 1));
      sx(i, i + 1) = c;
      sx(i + 1, i) = c;
    }
    RealMatrix hbar = RealMatrix::Zero(dim, dim);
    hbar.diagonal().array() = delta;
    hbar += (2.0 * vz / n) * mz.asDiagonal().toDenseMatrix();
    hbar += (2.0 * hx / n) * sx;

    // L = n gamma + 2 uz Jz/... (diagonal); factor the largest exponent out
    RealVector l_diag(dim);
    for (int i = 0; i < dim; ++i) l_diag(i) = n * gamma + 2.0 * uz * mz(i);
    double cshift = l_diag.maxCoeff();
    RealVector e_half(dim);
    for (int i = 0; i < dim; ++i)
      e_half(i) = std::exp(0.5 * (l_diag(i) - cshift));
    RealMatrix x_tilde =
        e_half.asDiagonal() * hbar * e_half.asDiagonal().toDenseMatrix();
    Eigen::SelfAdjointEigenSolver<RealMatrix> xs(x_tilde,
                                                 Eigen::EigenvaluesOnly);
    double tn = xs.eigenvalues().cwiseAbs().sum();
    if (tn <= 0.0) continue;
    log_terms.push_back(log_mult + cshift + std::log(tn));
  }
  if (log_terms.empty()) return 0.0;
  double peak = *std::max_element(log_terms.begin(), log_terms.end());
  double acc = 0.0;
  for (double lt : log_terms) acc += std::exp(lt - peak);
  return 0.5 * std::exp(peak) * acc;
}

double dense_mixture_tail(const Matrix& sigma, const Matrix& tau, int n) {
  const int d = int(tau.rows());
  Eigen::Index total = 1;
  for (int i = 0; i < n; ++i) total *= d;
  Matrix diff = Matrix::Zero(total, total);
  for (int pos = 0; pos < n; ++pos) {
    Matrix term = Matrix::Identity(1, 1);
    for (int i = 0; i < n; ++i) term = kron(term, i == pos ? sigma : tau);
    diff += term / double(n);
  }
  Matrix tpow = Matrix::Identity(1, 1);
  for (int i = 0; i < n; ++i) tpow = kron(tpow, tau);
  return 0.5 * trace_norm_hermitian(diff - tpow);
}

}  // namespace

double mixture_tail_trace_distance(const Matrix& sigma, const Matrix& tau,
                                   int n, int dense_dim_cap) {
  if (sigma.rows() != tau.rows() || sigma.rows() != sigma.cols())
    throw DimensionMismatch("mixture_tail_trace_distance: dimensions");
  if (n < 1) throw std::invalid_argument("mixture_tail_trace_distance: n >= 1");
  if ((sigma - tau).cwiseAbs().maxCoeff() < 1e-14) return 0.0;
  const int d = int(tau.rows());
  if (d == 2) return qubit_mixture_tail(sigma, tau, n);
  double total = std::pow(double(d), double(n));
  if (total > double(dense_dim_cap))
    throw BudgetExceeded(
        "mixture_tail_trace_distance: dense path exceeds the dimension cap");
  return dense_mixture_tail(sigma, tau, n);
}

// ---------------------------------------------------------------------------
// convex_split
// ---------------------------------------------------------------------------

ConvexSplitReport convex_split(const Channel& alpha, const Channel& beta,
                               int n, const ProtocolBudget& budget) {
  if (alpha.dim_in() != beta.dim_in() || alpha.dim_out() != beta.dim_out())
    throw DimensionMismatch("convex_split: channel signatures differ");
  if (n < 1) throw std::invalid_argument("convex_split: n must be >= 1");

  ExtReal dmax = channel_dmax(alpha, beta);
  if (dmax.is_infinite())
    throw SupportViolation("convex_split: D_max(alpha||beta) is infinite");

  ConvexSplitReport rep;
  rep.n = n;
  rep.lambda = std::max(1.0, std::pow(2.0, dmax.value()));
  rep.bound = std::sqrt(rep.lambda / double(n));

  if ((alpha.choi() - beta.choi()).cwiseAbs().maxCoeff() <= 1e-9) {
    rep.measured_distance = 0.0;
    rep.used_shortcut = true;
    rep.gamma_dim = 1;
    return rep;
  }

  const int dout = alpha.dim_out();
  if (alpha.is_constant() && beta.is_constant()) {
    // The mixture is itself constant; its diamond distance to beta^(x n)
    // equals the trace distance of the output states.
    Matrix sig = alpha.constant_output().matrix();
    Matrix tau = beta.constant_output().matrix();
    bool spin_ok = dout == 2 && n <= budget.max_symmetric_n;
    bool dense_ok =
        std::pow(double(dout), double(n)) <= double(budget.max_dense_output_dim);
    if (spin_ok || dense_ok) {
      rep.measured_distance = mixture_tail_trace_distance(
          sig, tau, n, budget.max_dense_output_dim);
      rep.used_shortcut = true;
      double gd = std::pow(double(dout), double(n));
      rep.gamma_dim = gd <= 1e9 ? int(gd) : -1;
      return rep;
    }
    throw BudgetExceeded("convex_split: constant shortcut exceeds budget");
  }

  double choi_dim =
      std::pow(double(alpha.dim_in() * dout), double(n));
  if (choi_dim > double(budget.max_choi_dim))
    throw BudgetExceeded("convex_split: full SDP path exceeds the Choi budget");

  std::vector<Channel> terms;
  for (int pos = 0; pos < n; ++pos) {
    std::optional<Channel> term;
    for (int i = 0; i < n; ++i) {
      const Channel& factor = (i == pos) ? alpha : beta;
      term = term ? tensor(*term, factor) : factor;
    }
    terms.push_back(std::move(*term));
  }
  Channel gamma = mix(terms, std::vector<double>(n, 1.0 / n));
  Channel beta_n = tensor_power(beta, n);
  rep.measured_distance = diamond_distance(gamma, beta_n, budget.solver);
  rep.used_shortcut = false;
  rep.gamma_dim = int(choi_dim);
  return rep;
}

// ---------------------------------------------------------------------------
// erasure_protocol
// ---------------------------------------------------------------------------

namespace {

Channel constantize(const Channel& c) {
  // Compose with a replacer input; for constant-family targets this can
  // only improve both the smoothing distance and D_max.
  Matrix avg =
      c.apply_matrix(Matrix::Identity(c.dim_in(), c.dim_in()) /
                     double(c.dim_in()));
  return Channel::constant(DensityMatrix(hermitize(avg)), c.dim_in());
}

// A member of the cone with full Choi support, when the kind has one.
std::optional<Channel> full_support_free(const FreeSetSpec& spec) {
  const int din = spec.dim_in();
  const int dout = spec.dim_out();
  switch (spec.kind()) {
    case FreeSetKind::Constant:
    case FreeSetKind::Mio:
    case FreeSetKind::MaxMixedPreserving:
      return Channel::constant(DensityMatrix::maximally_mixed(dout), din);
    case FreeSetKind::GibbsPreserving: {
      DensityMatrix tau = gibbs_state(spec.hamiltonian_out(), spec.beta());
      if (min_eigenvalue(tau.matrix()) < 1e-12) return std::nullopt;
      return Channel::constant(tau, din);
    }
    case FreeSetKind::ConstantFixed: {
      if (min_eigenvalue(spec.target()) < 1e-12) return std::nullopt;
      return Channel::constant(DensityMatrix(spec.target()), din);
    }
    case FreeSetKind::Custom:
      return std::nullopt;
  }
  return std::nullopt;
}

double smooth_lr_clamped(const Channel& n, const FreeSetSpec& spec,
                         double eps, const SolveOptions& solver) {
  if (eps >= 1.0) return 0.0;  // the ball contains every channel
  SmoothParams sp;
  sp.epsilon = std::max(eps, 0.0);
  sp.solver = solver;
  RobustnessResult r = robustness(n, spec, sp);
  if (r.infinite)
    throw SolverFailure("erasure: smoothed robustness is infinite");
  return r.log_robustness;
}

}  // namespace

ErasureReport erasure_protocol(const Channel& n_channel,
                               const FreeSetSpec& spec, double epsilon,
                               double eta, const ProtocolBudget& budget) {
  if (!(0.0 < eta && eta < epsilon && epsilon < 1.0))
    throw std::invalid_argument("erasure_protocol: need 0 < eta < eps < 1");

  ErasureReport rep;
  rep.epsilon = epsilon;
  rep.eta = eta;

  SmoothParams sp;
  sp.epsilon = epsilon - eta;
  sp.solver = budget.solver;
  RobustnessResult rob = robustness(n_channel, spec, sp);
  if (rob.infinite || !rob.optimal_free || !rob.optimal_smoothed)
    throw SolverFailure("erasure_protocol: no dominating free channel");

  Channel f0 = *rob.optimal_free;
  Channel nprime = *rob.optimal_smoothed;
  const bool constant_family = spec.kind() == FreeSetKind::Constant ||
                               spec.kind() == FreeSetKind::ConstantFixed;
  if (constant_family) {
    // Replacer cones: the free witness is exactly constant, and when the
    // erased channel is itself constant the smoothing witness can be made
    // constant too (composing with a replacer input shrinks both the
    // smoothing distance and D_max against constant references).
    f0 = constantize(f0);
    if (n_channel.is_constant()) nprime = constantize(nprime);
  }

  rep.smoothing_distance =
      diamond_distance(nprime, n_channel, budget.solver);

  ExtReal lam_hat = channel_dmax(nprime, f0);
  if (lam_hat.is_infinite()) {
    // The SDP guarantees support inclusion at its optimum, but the two
    // witnesses are repaired independently and a rank-deficient free Choi
    // can end up missing a sliver of the smoothed support. Blending a
    // full-support cone member in (still free, by convexity) restores a
    // finite D_max at a negligible cost to the threshold.
    if (auto filler = full_support_free(spec)) {
      const double blend = 1e-7;
      f0 = mix({f0, *filler}, {1.0 - blend, blend});
      lam_hat = channel_dmax(nprime, f0);
    }
  }
  if (lam_hat.is_infinite())
    throw SolverFailure(
        "erasure_protocol: projected witnesses lost the support condition");
  double lambda = std::max(1.0, std::pow(2.0, lam_hat.value()));
  rep.lr_value = std::log2(lambda);
  rep.upper_bound = rep.lr_value + 2.0 * std::log2(1.0 / eta) - 1.0;

  if (lambda <= 1.0 + 1e-6) {
    rep.n_used = 1;
    rep.cost_bits = 0.0;
    rep.mixture_distance = diamond_distance(nprime, f0, budget.solver);
    rep.executed = true;
    rep.used_shortcut = false;
  } else {
    double threshold = lambda / (4.0 * eta * eta);
    rep.n_used = int(std::ceil(threshold - 1e-9));
    rep.cost_bits = std::log2(double(rep.n_used));
    const int dout = n_channel.dim_out();
    const int din = n_channel.dim_in();
    bool both_constant = nprime.is_constant() && f0.is_constant();
    bool spin_ok =
        both_constant && dout == 2 && rep.n_used <= budget.max_symmetric_n;
    bool dense_ok = both_constant &&
                    std::pow(double(dout), double(rep.n_used)) <=
                        double(budget.max_dense_output_dim);
    bool full_ok = std::pow(double(din * dout), double(rep.n_used)) <=
                   double(budget.max_choi_dim);
    if (spin_ok || dense_ok) {
      rep.mixture_distance = mixture_tail_trace_distance(
          nprime.constant_output().matrix(), f0.constant_output().matrix(),
          rep.n_used, budget.max_dense_output_dim);
      rep.executed = true;
      rep.used_shortcut = true;
    } else if (full_ok) {
      std::vector<Channel> terms;
      for (int pos = 0; pos < rep.n_used; ++pos) {
        std::optional<Channel> term;
        for (int i = 0; i < rep.n_used; ++i) {
          const Channel& factor = (i == pos) ? nprime : f0;
          term = term ? tensor(*term, factor) : factor;
        }
        terms.push_back(std::move(*term));
      }
      Channel avg =
          mix(terms, std::vector<double>(rep.n_used, 1.0 / rep.n_used));
      rep.mixture_distance = diamond_distance(
          avg, tensor_power(f0, rep.n_used), budget.solver);
      rep.executed = true;
      rep.used_shortcut = false;
    } else {
      // Lemma-certified bound: (1/2) sqrt(lambda/n) <= eta by choice of n.
      rep.mixture_distance = 0.5 * std::sqrt(lambda / double(rep.n_used));
      rep.executed = false;
    }
  }
  rep.achieved_distance = rep.mixture_distance + rep.smoothing_distance;

  // Converse-side information (Theorem-style lower bounds).
  rep.lower_bound_info.mu = 2.0;
  rep.lower_bound_info.delta = std::sqrt(epsilon * (2.0 - epsilon));
  double lr_mu_delta = smooth_lr_clamped(
      n_channel, spec, rep.lower_bound_info.mu * rep.lower_bound_info.delta,
      budget.solver);
  rep.lower_bound_info.value =
      lr_mu_delta + std::log2(1.0 - 1.0 / rep.lower_bound_info.mu);
  rep.lower_bound_info.convex_value = smooth_lr_clamped(
      n_channel, spec, rep.lower_bound_info.delta, budget.solver);
  return rep;
}

// ---------------------------------------------------------------------------
// superchannels
// ---------------------------------------------------------------------------

Channel apply_superchannel(const Channel& pre, const Channel& post,
                           int ancilla_dim, const Channel& n) {
  if (ancilla_dim < 1)
    throw DimensionMismatch("apply_superchannel: ancilla_dim must be >= 1");
  if (pre.dim_out() != n.dim_in() * ancilla_dim)
    throw DimensionMismatch(
        "apply_superchannel: pre must map into channel_in (x) ancilla");
  if (post.dim_in() != n.dim_out() * ancilla_dim)
    throw DimensionMismatch(
        "apply_superchannel: post must accept channel_out (x) ancilla");
  Channel middle =
      ancilla_dim == 1 ? n : tensor(n, Channel::identity(ancilla_dim));
  return compose(post, compose(middle, pre));
}

SimulationReport verify_simulation(const Channel& n, const Channel& target,
                                   const Channel& pre, const Channel& post,
                                   const FreeSetSpec& spec, double epsilon,
                                   const SolveOptions& options) {
  if (pre.dim_out() % n.dim_in() != 0)
    throw DimensionMismatch(
        "verify_simulation: pre output does not factor over the channel input");
  const int ancilla = pre.dim_out() / n.dim_in();
  Channel simulated = apply_superchannel(pre, post, ancilla, n);
  if (simulated.dim_in() != target.dim_in() ||
      simulated.dim_out() != target.dim_out())
    throw DimensionMismatch("verify_simulation: target signature mismatch");

  SimulationReport rep;
  rep.epsilon = epsilon;
  auto spec_pre = spec.at_dims(pre.dim_in(), pre.dim_out());
  auto spec_post = spec.at_dims(post.dim_in(), post.dim_out());
  if (spec_pre && spec_post) {
    rep.pre_free = is_free(pre, *spec_pre);
    rep.post_free = is_free(post, *spec_post);
  } else {
    rep.freeness_checkable = false;
    rep.note = "cone has no canonical extension to the pre/post dimensions";
  }
  rep.distance = diamond_distance(simulated, target, options);
  rep.distance_ok = rep.distance <= epsilon + 1e-9;
  rep.pass = rep.freeness_checkable && rep.pre_free && rep.post_free &&
             rep.distance_ok;
  return rep;
}

}  // namespace chanres
