#include "chanres/monotones.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "chanres/sdp_build.hpp"

namespace chanres {

namespace {

constexpr double kLog2 = 0.6931471805599453;
constexpr double kGradEps = 1e-12;  // spectrum floor inside ascent gradients

void throw_on_failure(const SolveResult& r, const char* what) {
  if (r.status != SolveStatus::Optimal)
    throw SolverFailure(std::string(what) + ": solver status " +
                        to_string(r.status) +
                        (r.detail.empty() ? "" : " (" + r.detail + ")"));
}

double log2_clamped(double lam) { return std::log2(std::max(lam, 1e-300)); }

Matrix herm_log2_reg(const Matrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho);
  Vector lg(rho.rows());
  for (Eigen::Index i = 0; i < rho.rows(); ++i)
    lg(i) = std::log2(std::max(es.eigenvalues()(i), 0.0) + kGradEps);
  return es.eigenvectors() * lg.asDiagonal() * es.eigenvectors().adjoint();
}

// d tr(rho log2 sigma) / d sigma (divided differences, regularized).
Matrix dlog2_adjoint(const Matrix& sigma, const Matrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(sigma);
  const Eigen::Index n = sigma.rows();
  Matrix rho_t = es.eigenvectors().adjoint() * rho * es.eigenvectors();
  RealVector lam(n);
  for (Eigen::Index i = 0; i < n; ++i)
    lam(i) = std::max(es.eigenvalues()(i), 0.0) + kGradEps;
  Matrix phi(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      double num = std::log(lam(i)) - std::log(lam(j));
      double den = lam(i) - lam(j);
      phi(i, j) = std::abs(den) > 1e-14 * std::max(lam(i), lam(j))
                      ? num / den
                      : 1.0 / lam(i);
    }
  Matrix a = es.eigenvectors() * phi.cwiseProduct(rho_t).matrix() *
             es.eigenvectors().adjoint();
  return hermitize(a) / kLog2;
}

}  // namespace

// ===========================================================================
// Smooth max-relative entropies
// ===========================================================================

double state_dmax_smooth(const DensityMatrix& rho, const DensityMatrix& sigma,
                         double epsilon, const SolveOptions& options) {
  if (rho.dim() != sigma.dim())
    throw DimensionMismatch("state_dmax_smooth: dimension mismatch");
  if (epsilon < 0.0 || epsilon >= 1.0)
    throw std::invalid_argument("state_dmax_smooth: epsilon must be in [0,1)");
  if (epsilon == 0.0) {
    ExtReal v = state_dmax(rho, sigma);
    if (v.is_infinite())
      throw SolverFailure("state_dmax_smooth: infinite at epsilon = 0");
    return v.value();
  }
  const int d = rho.dim();
  SdpBuilder sb;
  int lam = sb.add_scalar();
  HermVar p = sb.add_hermitian(d);
  HermVar zs = sb.add_hermitian(d);
  sb.set_objective(lam, 1.0);
  int b1 = sb.add_block(d);  // lam*sigma - P >= 0
  sb.block_scalar_matrix(b1, lam, sigma.matrix(), 1.0);
  sb.block_herm(b1, p, -1.0);
  int b2 = sb.add_block(d);  // P >= 0
  sb.block_herm(b2, p, 1.0);
  int b3 = sb.add_block(d);  // Z >= 0
  sb.block_herm(b3, zs, 1.0);
  int b4 = sb.add_block(d);  // Z - P + rho >= 0
  sb.block_herm(b4, zs, 1.0);
  sb.block_herm(b4, p, -1.0);
  sb.block_const(b4, rho.matrix(), 1.0);
  int b5 = sb.add_block(1);  // eps - tr Z >= 0
  sb.block_const_identity(b5, epsilon);
  for (int i = 0; i < d; ++i)
    sb.program().block_add_term(b5, herm_diag_index(zs, i), 0, 0, -1.0);
  int eq = sb.add_equality(1.0);  // tr P = 1
  for (int i = 0; i < d; ++i) sb.eq_scalar(eq, herm_diag_index(p, i), 1.0);

  SolveResult r = solve(sb.program(), options);
  throw_on_failure(r, "state_dmax_smooth");
  return log2_clamped(std::max(r.objective_value, 0.0));
}

SmoothDmaxResult channel_dmax_smooth(const Channel& n, const Channel& m,
                                     const SmoothParams& smooth) {
  if (n.dim_in() != m.dim_in() || n.dim_out() != m.dim_out())
    throw DimensionMismatch("channel_dmax_smooth: signature mismatch");
  const double eps = smooth.epsilon;
  if (eps < 0.0 || eps >= 1.0)
    throw std::invalid_argument("channel_dmax_smooth: epsilon in [0,1)");
  const int din = n.dim_in();
  const int dout = n.dim_out();
  const int d = din * dout;

  // Diagnostic lower bound: smooth state D_max at the maximally entangled
  // input, i.e. between the normalized Choi states.
  DensityMatrix choi_n{n.choi() / double(din)};
  DensityMatrix choi_m{m.choi() / double(din)};
  double state_lb;
  {
    if (eps == 0.0) {
      ExtReal v = state_dmax(choi_n, choi_m);
      state_lb = v.is_infinite() ? std::numeric_limits<double>::infinity()
                                 : v.value();
    } else {
      try {
        state_lb = state_dmax_smooth(choi_n, choi_m, eps, smooth.solver);
      } catch (const SolverFailure&) {
        state_lb = std::numeric_limits<double>::infinity();
      }
    }
  }

  SmoothDmaxResult out;
  out.state_lower_bound = state_lb;
  if (eps == 0.0) {
    out.value = channel_dmax(n, m);
    out.smoothed = n;
    out.status = SolveStatus::Optimal;
    return out;
  }

  SdpBuilder sb;
  int lam = sb.add_scalar();
  HermVar jp = sb.add_hermitian(d);  // Choi of N'
  HermVar z = sb.add_hermitian(d);   // diamond ball witness
  sb.set_objective(lam, 1.0);
  int b1 = sb.add_block(d);  // lam*J_M - J' >= 0
  sb.block_scalar_matrix(b1, lam, m.choi(), 1.0);
  sb.block_herm(b1, jp, -1.0);
  int b2 = sb.add_block(d);  // J' >= 0
  sb.block_herm(b2, jp, 1.0);
  int b3 = sb.add_block(d);  // Z >= 0
  sb.block_herm(b3, z, 1.0);
  int b4 = sb.add_block(d);  // Z - J' + J_N >= 0
  sb.block_herm(b4, z, 1.0);
  sb.block_herm(b4, jp, -1.0);
  sb.block_const(b4, n.choi(), 1.0);
  int b5 = sb.add_block(din);  // eps I - Tr_out Z >= 0
  sb.block_const_identity(b5, eps);
  sb.block_ptrace_second(b5, z, din, dout, -1.0);
  sb.eq_ptrace_second_identity(jp, din, dout, 1.0, -1, 0.0);  // TP

  SolveResult r = solve(sb.program(), smooth.solver);
  if (r.status == SolveStatus::Infeasible) {
    out.value = ExtReal::infinity();
    out.status = r.status;
    return out;
  }
  throw_on_failure(r, "channel_dmax_smooth");
  out.value = ExtReal::finite(log2_clamped(std::max(r.objective_value, 0.0)));
  out.smoothed = project_to_channel(
      SdpBuilder::herm_value(jp, r.variable_values), din, dout, "smoothed");
  out.status = r.status;
  return out;
}

// ===========================================================================
// Robustness
// ===========================================================================

namespace {

// Exact cone projection of the scaled witness for the structured kinds;
// generic channel repair otherwise.
Channel project_free_witness(const Matrix& g_scaled, const FreeSetSpec& spec) {
  const int din = spec.dim_in();
  const int dout = spec.dim_out();
  switch (spec.kind()) {
    case FreeSetKind::ConstantFixed:
      return Channel::constant(DensityMatrix(spec.target()), din);
    case FreeSetKind::Constant: {
      Matrix avg = partial_trace_first(g_scaled, din, dout) / double(din);
      avg = hermitize(avg);
      Eigen::SelfAdjointEigenSolver<Matrix> es(avg);
      Vector clip = es.eigenvalues().cwiseMax(0.0);
      Matrix sigma =
          es.eigenvectors() * clip.asDiagonal() * es.eigenvectors().adjoint();
      sigma /= sigma.trace().real();
      return Channel::constant(DensityMatrix(hermitize(sigma)), din);
    }
    case FreeSetKind::Mio: {
      Matrix j = g_scaled;
      for (int i = 0; i < din; ++i)
        for (int al = 0; al < dout; ++al)
          for (int be = 0; be < dout; ++be)
            if (al != be) j(i * dout + al, i * dout + be) = 0.0;
      return project_to_channel(std::move(j), din, dout, "optimal_free");
    }
    default:
      return project_to_channel(Matrix(g_scaled), din, dout, "optimal_free");
  }
}

bool cone_has_channel(const FreeSetSpec& spec, const SolveOptions& options) {
  // Feasibility: is there any free cptp map at these dimensions?
  const int d = spec.dim_in() * spec.dim_out();
  ConeConstraints cc = compile(spec, /*include_tp=*/true);
  SdpBuilder sb;
  HermVar j = sb.add_hermitian(d);
  int b = sb.add_block(d);
  sb.block_herm(b, j, 1.0);
  for (const LinearFunctional& f : cc.conic_equalities) {
    int eq = sb.add_equality(f.rhs);
    sb.eq_herm_inner(eq, j, f.k);
  }
  for (const LinearFunctional& f : cc.tp_rows) {
    int eq = sb.add_equality(f.rhs);
    sb.eq_herm_inner(eq, j, f.k);
  }
  for (const LinearFunctional& f : cc.inequalities) {
    int blk = sb.add_block(1);
    sb.block_scalar_functional(blk, j, f.k, 1.0);
    sb.block_const(blk, -f.rhs * Matrix::Identity(1, 1), 1.0);
  }
  SolveResult r = solve(sb.program(), options);
  return r.status != SolveStatus::Infeasible;
}

}  // namespace

RobustnessResult robustness(const Channel& n, const FreeSetSpec& spec,
                            const SmoothParams& smooth) {
  if (n.dim_in() != spec.dim_in() || n.dim_out() != spec.dim_out())
    throw DimensionMismatch("robustness: dimension mismatch");
  const double eps = smooth.epsilon;
  if (eps < 0.0 || eps >= 1.0)
    throw std::invalid_argument("robustness: epsilon must be in [0,1)");
  const int din = n.dim_in();
  const int dout = n.dim_out();
  const int d = din * dout;
  ConeConstraints cc = compile(spec, /*include_tp=*/false);

  SdpBuilder sb;
  int lam = sb.add_scalar();
  HermVar g = sb.add_hermitian(d);  // scaled free Choi, lam * J_M
  std::optional<HermVar> jp, z;
  if (eps > 0.0) {
    jp = sb.add_hermitian(d);
    z = sb.add_hermitian(d);
  }
  sb.set_objective(lam, 1.0);

  int bg = sb.add_block(d);  // G >= 0
  sb.block_herm(bg, g, 1.0);
  int bd = sb.add_block(d);  // G - (J_N or J') >= 0
  sb.block_herm(bd, g, 1.0);
  if (eps > 0.0)
    sb.block_herm(bd, *jp, -1.0);
  else
    sb.block_const(bd, n.choi(), -1.0);

  for (const LinearFunctional& f : cc.conic_equalities) {
    int eq = sb.add_equality(f.rhs);
    sb.eq_herm_inner(eq, g, f.k);
  }
  // scaled trace preservation: Tr_out G = lam * I
  sb.eq_ptrace_second_identity(g, din, dout, 0.0, lam, 1.0);
  for (const LinearFunctional& f : cc.inequalities) {
    if (f.rhs != 0.0)
      throw UnsupportedKind(
          "robustness: custom cones need homogeneous inequalities");
    int blk = sb.add_block(1);
    sb.block_scalar_functional(blk, g, f.k, 1.0);
  }

  if (eps > 0.0) {
    int b2 = sb.add_block(d);  // J' >= 0
    sb.block_herm(b2, *jp, 1.0);
    int b3 = sb.add_block(d);  // Z >= 0
    sb.block_herm(b3, *z, 1.0);
    int b4 = sb.add_block(d);  // Z - J' + J_N >= 0
    sb.block_herm(b4, *z, 1.0);
    sb.block_herm(b4, *jp, -1.0);
    sb.block_const(b4, n.choi(), 1.0);
    int b5 = sb.add_block(din);  // eps I - Tr_out Z >= 0
    sb.block_const_identity(b5, eps);
    sb.block_ptrace_second(b5, *z, din, dout, -1.0);
    sb.eq_ptrace_second_identity(*jp, din, dout, 1.0, -1, 0.0);
  }

  SolveResult r = solve(sb.program(), smooth.solver);
  RobustnessResult out;
  out.status = r.status;
  if (r.status == SolveStatus::Infeasible) {
    if (!cone_has_channel(spec, smooth.solver))
      throw SolverFailure("robustness: free set is empty at these dimensions");
    out.infinite = true;  // nonempty cone, but nothing dominates the channel
    return out;
  }
  throw_on_failure(r, "robustness");

  double lambda = std::max(1.0, r.objective_value);
  out.robustness = lambda - 1.0;
  out.log_robustness = log2_clamped(lambda);
  Matrix g_val = SdpBuilder::herm_value(g, r.variable_values) / lambda;
  out.optimal_free = project_free_witness(g_val, spec);
  if (eps > 0.0)
    out.optimal_smoothed = project_to_channel(
        SdpBuilder::herm_value(*jp, r.variable_values), din, dout, "smoothed");
  return out;
}

ImaxResult i_max(const Channel& n, const SolveOptions& options) {
  const int din = n.dim_in();
  const int dout = n.dim_out();
  // min tr S  s.t.  I_in (x) S >= J_N, S >= 0; value = log2 tr S.
  SdpBuilder sb;
  HermVar s = sb.add_hermitian(dout);
  for (int i = 0; i < dout; ++i)
    sb.set_objective(herm_diag_index(s, i), 1.0);
  int b1 = sb.add_block(din * dout);
  sb.block_kron_identity_herm(b1, s, din, 1.0);
  sb.block_const(b1, n.choi(), -1.0);
  int b2 = sb.add_block(dout);
  sb.block_herm(b2, s, 1.0);
  SolveResult r = solve(sb.program(), options);
  throw_on_failure(r, "i_max");

  ImaxResult out;
  out.value = log2_clamped(std::max(r.objective_value, 0.0));
  SmoothParams sp;
  sp.solver = options;
  RobustnessResult rob =
      robustness(n, FreeSetSpec::constant(din, dout), sp);
  out.constant_lr_crosscheck = rob.log_robustness;
  if (std::abs(out.value - out.constant_lr_crosscheck) > 1e-5)
    throw SolverFailure(
        "i_max: disagreement with the constant-cone log-robustness");
  return out;
}

// ===========================================================================
// State monotones and heuristic powers
// ===========================================================================

double StateMonotone::value(const DensityMatrix& rho, int base_dim) const {
  return value_(rho, base_dim);
}

Matrix StateMonotone::gradient(const Matrix& rho, int base_dim) const {
  return gradient_(rho, base_dim);
}

Matrix StateMonotone::zero_state(int base_dim, int ancilla_dim) const {
  if (!zero_state_)
    throw UnsupportedMonotone("monotone has no canonical zero state");
  return zero_state_(base_dim, ancilla_dim);
}

StateMonotone StateMonotone::coherence() {
  StateMonotone m;
  m.name_ = "coherence_rel_ent";
  m.zero_set_ = ZeroSet::DiagonalStates;
  m.value_ = [](const DensityMatrix& rho, int) {
    return coherence_rel_ent(rho);
  };
  m.gradient_ = [](const Matrix& rho, int) {
    Matrix diag = Matrix::Zero(rho.rows(), rho.cols());
    for (Eigen::Index i = 0; i < rho.rows(); ++i) diag(i, i) = rho(i, i);
    Matrix lg_diag = Matrix::Zero(rho.rows(), rho.cols());
    for (Eigen::Index i = 0; i < rho.rows(); ++i)
      lg_diag(i, i) = std::log2(std::max(diag(i, i).real(), 0.0) + kGradEps);
    return (herm_log2_reg(rho) - lg_diag).eval();
  };
  m.zero_state_ = [](int base_dim, int anc) {
    int d = base_dim * anc;
    return (Matrix::Identity(d, d) / double(d)).eval();
  };
  return m;
}

StateMonotone StateMonotone::free_energy_monotone(const Matrix& hamiltonian,
                                                  double beta) {
  if (!is_hermitian(hamiltonian))
    throw UnsupportedMonotone("free energy monotone needs a Hermitian H");
  Matrix h = hermitize(hamiltonian);
  StateMonotone m;
  m.name_ = "free_energy";
  m.zero_set_ = ZeroSet::SingleState;
  auto extend = [h](int base_dim, int anc) {
    if (h.rows() != base_dim)
      throw UnsupportedMonotone(
          "free energy monotone: Hamiltonian dimension mismatch");
    return kron(h, Matrix::Identity(anc, anc)).eval();
  };
  m.value_ = [h, beta, extend](const DensityMatrix& rho, int base_dim) {
    int anc = rho.dim() / base_dim;
    Matrix hx = extend(base_dim, anc);
    DensityMatrix tau = gibbs_state(hx, beta);
    return free_energy(rho, hx, beta) - free_energy(tau, hx, beta);
  };
  m.gradient_ = [h, beta, extend](const Matrix& rho, int base_dim) {
    int anc = int(rho.rows()) / base_dim;
    Matrix hx = extend(base_dim, anc);
    // d/d rho [tr(rho H) - S_nats(rho)/beta] = H + ln(rho)/beta (+ const I)
    return (hx + (kLog2 / beta) * herm_log2_reg(rho)).eval();
  };
  m.zero_state_ = [h, beta, extend](int base_dim, int anc) {
    return gibbs_state(extend(base_dim, anc), beta).matrix();
  };
  return m;
}

StateMonotone StateMonotone::custom(
    std::string name,
    std::function<double(const DensityMatrix&, int)> value,
    std::function<Matrix(const Matrix&, int)> gradient, ZeroSet zero_set) {
  StateMonotone m;
  m.name_ = std::move(name);
  m.value_ = std::move(value);
  m.gradient_ = std::move(gradient);
  m.zero_set_ = zero_set;
  return m;
}

namespace {

// Riemannian gradient ascent on the unit sphere with Armijo backtracking.
std::pair<double, Vector> ascend_pure(
    const std::function<double(const Vector&)>& f,
    const std::function<Vector(const Vector&)>& grad, Vector psi,
    int max_iterations, double grad_tol) {
  double val = f(psi);
  for (int it = 0; it < max_iterations; ++it) {
    Vector g = grad(psi);
    Vector riem = g - psi * psi.dot(g);
    double gn = riem.norm();
    if (gn <= grad_tol) break;
    double alpha = 1.0 / (1.0 + gn);
    bool accepted = false;
    for (int bt = 0; bt < 40; ++bt) {
      Vector cand = psi + alpha * riem;
      cand.normalize();
      double cv = f(cand);
      if (cv >= val + 1e-4 * alpha * gn * gn) {
        psi = cand;
        val = cv;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) break;
  }
  return {val, psi};
}

// Euclidean projection onto the probability simplex.
RealVector project_simplex(RealVector v) {
  const int n = int(v.size());
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double css = 0.0, theta = 0.0;
  int rho_idx = 0;
  double cumsum = 0.0;
  for (int i = 0; i < n; ++i) {
    cumsum += u[i];
    double t = (cumsum - 1.0) / (i + 1);
    if (u[i] - t > 0) {
      rho_idx = i;
      theta = t;
      css = cumsum;
    }
  }
  (void)css;
  RealVector out(n);
  for (int i = 0; i < n; ++i) out(i) = std::max(v(i) - theta, 0.0);
  return out;
}

Matrix clean_density(const Matrix& rho) {
  Matrix h = hermitize(rho);
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  Vector clip = es.eigenvalues().cwiseMax(0.0);
  Matrix out =
      es.eigenvectors() * clip.asDiagonal() * es.eigenvectors().adjoint();
  return out / out.trace().real();
}

// A fixed point of the channel, via power iteration from the flat state.
Matrix channel_fixed_point(const Channel& n) {
  Matrix rho = Matrix::Identity(n.dim_in(), n.dim_in()) / double(n.dim_in());
  for (int it = 0; it < 500; ++it) {
    Matrix next = n.apply_matrix(rho);
    next = clean_density(next);
    if ((next - rho).cwiseAbs().maxCoeff() < 1e-13) return next;
    rho = 0.5 * (next + rho);  // damped, helps rotating channels
  }
  return rho;
}

}  // namespace

PowerResult increasing_power(const Channel& n, const StateMonotone& omega,
                             bool complete, const OptimOptions& options) {
  const int anc = complete
                      ? (options.ancilla_dim > 0 ? options.ancilla_dim
                                                 : n.dim_in())
                      : 1;
  Channel mext = anc == 1 ? n : tensor(n, Channel::identity(anc));
  const int din = n.dim_in() * anc;
  const int base_in = n.dim_in();
  const int base_out = n.dim_out();

  auto f_of_rho = [&](const Matrix& rho) {
    DensityMatrix in{clean_density(rho)};
    DensityMatrix out{clean_density(mext.apply_matrix(in.matrix()))};
    return omega.value(out, base_out) - omega.value(in, base_in);
  };
  auto f = [&](const Vector& psi) {
    return f_of_rho((psi * psi.adjoint()).eval());
  };
  auto grad = [&](const Vector& psi) {
    Matrix rho_in = psi * psi.adjoint();
    Matrix rho_out = mext.apply_matrix(rho_in);
    Matrix g_out = omega.gradient(clean_density(rho_out), base_out);
    Matrix g_in = omega.gradient(rho_in, base_in);
    // adjoint of the extended channel applied to the output gradient
    Matrix pulled(din, din);
    for (int i = 0; i < din; ++i)
      for (int j = 0; j < din; ++j)
        pulled(i, j) =
            (mext.choi()
                 .block(Eigen::Index(j) * mext.dim_out(),
                        Eigen::Index(i) * mext.dim_out(), mext.dim_out(),
                        mext.dim_out()) *
             g_out)
                .trace();
    return ((hermitize(pulled) - g_in) * psi).eval();
  };

  Rng rng(options.seed);
  double best = -std::numeric_limits<double>::infinity();
  Matrix best_state;
  for (int s = 0; s < options.starts; ++s) {
    auto [val, psi] = ascend_pure(f, grad, rng.random_pure_state(din),
                                  options.max_iterations, options.grad_tol);
    if (val > best) {
      best = val;
      best_state = psi * psi.adjoint();
    }
  }
  // A fixed point gives the certified floor value 0.
  {
    Matrix fp = channel_fixed_point(n);
    Matrix fp_ext = anc == 1
                        ? fp
                        : kron(fp, Matrix::Identity(anc, anc) / double(anc));
    double val = f_of_rho(fp_ext);
    if (val > best) {
      best = val;
      best_state = clean_density(fp_ext);
    }
  }
  for (const Matrix& extra : options.extra_eval_states) {
    if (extra.rows() != din) continue;
    double val = f_of_rho(extra);
    if (val > best) {
      best = val;
      best_state = clean_density(extra);
    }
  }
  return PowerResult{best, best_state, anc, false};
}

PowerResult generating_power(const Channel& n, const StateMonotone& omega,
                             bool complete, const OptimOptions& options) {
  const int anc = complete
                      ? (options.ancilla_dim > 0 ? options.ancilla_dim
                                                 : n.dim_in())
                      : 1;
  Channel mext = anc == 1 ? n : tensor(n, Channel::identity(anc));
  const int din = n.dim_in() * anc;
  const int base_out = n.dim_out();

  auto value_at = [&](const Matrix& rho) {
    DensityMatrix out{clean_density(mext.apply_matrix(rho))};
    return omega.value(out, base_out);
  };

  if (omega.zero_set() == StateMonotone::ZeroSet::SingleState) {
    Matrix zs = omega.zero_state(n.dim_in(), anc);
    double val = value_at(zs);
    for (const Matrix& extra : options.extra_eval_states) {
      if (extra.rows() != din) continue;
      if (omega.value(DensityMatrix(clean_density(extra)), n.dim_in()) > 1e-9)
        continue;
      val = std::max(val, value_at(extra));
    }
    return PowerResult{val, zs, anc, false};
  }

  // Diagonal zero set: projected gradient ascent over the simplex.
  auto f_simplex = [&](const RealVector& pvec) {
    Matrix rho = Matrix::Zero(din, din);
    for (int i = 0; i < din; ++i) rho(i, i) = std::max(pvec(i), 0.0);
    rho /= rho.trace().real();
    return value_at(rho);
  };
  auto grad_simplex = [&](const RealVector& pvec) {
    Matrix rho = Matrix::Zero(din, din);
    for (int i = 0; i < din; ++i) rho(i, i) = std::max(pvec(i), 0.0);
    rho /= rho.trace().real();
    Matrix g_out =
        omega.gradient(clean_density(mext.apply_matrix(rho)), base_out);
    RealVector g(din);
    for (int i = 0; i < din; ++i) {
      Matrix e = Matrix::Zero(din, din);
      e(i, i) = 1.0;
      g(i) = (g_out * mext.apply_matrix(e)).trace().real();
    }
    return g;
  };

  Rng rng(options.seed);
  std::vector<RealVector> starts;
  for (int i = 0; i < din; ++i) {
    RealVector e = RealVector::Zero(din);
    e(i) = 1.0;
    starts.push_back(e);
  }
  for (int s = 0; s < std::max(1, options.starts / 2); ++s)
    starts.push_back(rng.random_distribution(din));

  double best = -std::numeric_limits<double>::infinity();
  RealVector best_p = starts.front();
  for (RealVector p : starts) {
    double val = f_simplex(p);
    for (int it = 0; it < options.max_iterations; ++it) {
      RealVector g = grad_simplex(p);
      double alpha = 1.0 / (1.0 + g.norm());
      bool accepted = false;
      for (int bt = 0; bt < 30; ++bt) {
        RealVector cand = project_simplex(p + alpha * g);
        double cv = f_simplex(cand);
        if (cv > val + 1e-10) {
          p = cand;
          val = cv;
          accepted = true;
          break;
        }
        alpha *= 0.5;
      }
      if (!accepted) break;
    }
    if (val > best) {
      best = val;
      best_p = p;
    }
  }
  for (const Matrix& extra : options.extra_eval_states) {
    if (extra.rows() != din) continue;
    DensityMatrix rho{clean_density(extra)};
    if (omega.value(rho, n.dim_in()) > 1e-9) continue;
    double val = value_at(rho.matrix());
    if (val > best) {
      best = val;
      Matrix m = rho.matrix();
      RealVector diag(din);
      for (int i = 0; i < din; ++i) diag(i) = m(i, i).real();
      best_p = diag;
    }
  }
  Matrix best_state = Matrix::Zero(din, din);
  for (int i = 0; i < din; ++i) best_state(i, i) = std::max(best_p(i), 0.0);
  best_state /= best_state.trace().real();
  return PowerResult{best, best_state, anc, false};
}

// ===========================================================================
// Channel relative entropy (heuristic)
// ===========================================================================

RelEntResult channel_rel_ent(const Channel& n, const Channel& m,
                             const OptimOptions& options) {
  if (n.dim_in() != m.dim_in() || n.dim_out() != m.dim_out())
    throw DimensionMismatch("channel_rel_ent: signature mismatch");
  const int anc = options.ancilla_dim > 0 ? options.ancilla_dim : n.dim_in();
  Channel mn = tensor(n, Channel::identity(anc));
  Channel mm = tensor(m, Channel::identity(anc));
  const int din = n.dim_in() * anc;

  ExtReal dmax = channel_dmax(n, m);
  RelEntResult out;
  out.dmax_upper = dmax.is_infinite() ? std::numeric_limits<double>::infinity()
                                      : dmax.value();

  bool hit_infinite = false;
  auto f_ext = [&](const Vector& psi) -> ExtReal {
    Matrix rho_in = psi * psi.adjoint();
    DensityMatrix rho{clean_density(mn.apply_matrix(rho_in))};
    DensityMatrix sig{clean_density(mm.apply_matrix(rho_in))};
    return relative_entropy(rho, sig);
  };
  auto f = [&](const Vector& psi) {
    ExtReal v = f_ext(psi);
    if (v.is_infinite()) {
      hit_infinite = true;
      return 1e6;  // steers the search; the result is flagged separately
    }
    return v.value();
  };
  auto grad = [&](const Vector& psi) {
    Matrix rho_in = psi * psi.adjoint();
    Matrix rho = clean_density(mn.apply_matrix(rho_in));
    Matrix sig = clean_density(mm.apply_matrix(rho_in));
    Matrix g_rho = herm_log2_reg(rho) - herm_log2_reg(sig);
    Matrix a = dlog2_adjoint(sig, rho);
    auto pull = [&](const Channel& ch, const Matrix& gmat) {
      Matrix pulled(din, din);
      for (int i = 0; i < din; ++i)
        for (int j = 0; j < din; ++j)
          pulled(i, j) = (ch.choi()
                              .block(Eigen::Index(j) * ch.dim_out(),
                                     Eigen::Index(i) * ch.dim_out(),
                                     ch.dim_out(), ch.dim_out()) *
                          gmat)
                             .trace();
      return hermitize(pulled);
    };
    return ((pull(mn, g_rho) - pull(mm, a)) * psi).eval();
  };

  Rng rng(options.seed);
  double best = -std::numeric_limits<double>::infinity();
  Matrix best_state;
  for (int s = 0; s < options.starts; ++s) {
    auto [val, psi] = ascend_pure(f, grad, rng.random_pure_state(din),
                                  options.max_iterations, options.grad_tol);
    if (val > best) {
      best = val;
      best_state = psi * psi.adjoint();
    }
  }
  // The maximally entangled input is the canonical evaluation point.
  if (anc == n.dim_in()) {
    Vector ent = Vector::Zero(din);
    for (int i = 0; i < n.dim_in(); ++i) ent(i * anc + i) = 1.0;
    ent.normalize();
    auto [val, psi] = ascend_pure(f, grad, ent, options.max_iterations,
                                  options.grad_tol);
    if (val > best) {
      best = val;
      best_state = psi * psi.adjoint();
    }
  }

  if (hit_infinite && dmax.is_infinite()) {
    out.value = ExtReal::infinity();
    out.maximizing_input = best_state;
    return out;
  }
  out.value = ExtReal::finite(std::max(best, 0.0));
  out.maximizing_input = best_state;
  return out;
}

// ===========================================================================
// Cost brackets
// ===========================================================================

CostBracket mio_cost_bracket(const Channel& n, double epsilon,
                             const SolveOptions& options) {
  SmoothParams sp;
  sp.epsilon = epsilon;
  sp.solver = options;
  RobustnessResult rob =
      robustness(n, FreeSetSpec::mio(n.dim_in(), n.dim_out()), sp);
  if (rob.infinite)
    throw SolverFailure("mio_cost_bracket: robustness is infinite");
  CostBracket out;
  out.lower = rob.log_robustness;
  // ceil(1 + R), with a tolerance against rounding a float edge upward
  double one_plus_r = std::pow(2.0, rob.log_robustness);
  out.upper = std::log2(std::ceil(one_plus_r - 1e-9));
  if (out.upper < out.lower) out.upper = out.lower;  // float guard
  return out;
}

double cq_asymptotic_cost(const Channel& n, double structure_tol) {
  const int din = n.dim_in();
  const int dout = n.dim_out();
  for (int i = 0; i < din; ++i)
    for (int j = 0; j < din; ++j) {
      if (i == j) continue;
      if (n.choi()
              .block(Eigen::Index(i) * dout, Eigen::Index(j) * dout, dout,
                     dout)
              .cwiseAbs()
              .maxCoeff() > structure_tol)
        throw NotCqChannel("cq_asymptotic_cost: off-diagonal input blocks");
    }
  double best = 0.0;
  for (int i = 0; i < din; ++i) {
    DensityMatrix sigma{hermitize(
        n.choi().block(Eigen::Index(i) * dout, Eigen::Index(i) * dout, dout,
                       dout))};
    best = std::max(best, coherence_rel_ent(sigma));
  }
  return best;
}

// ===========================================================================
// Monotone property suite
// ===========================================================================

namespace {

std::optional<StateMonotone> suite_monotone(const FreeSetSpec& spec) {
  switch (spec.kind()) {
    case FreeSetKind::Mio:
      return StateMonotone::coherence();
    case FreeSetKind::MaxMixedPreserving:
      if (spec.dim_in() == spec.dim_out())
        return StateMonotone::free_energy_monotone(
            Matrix::Zero(spec.dim_in(), spec.dim_in()), 1.0);
      return std::nullopt;
    case FreeSetKind::GibbsPreserving:
      if (spec.dim_in() == spec.dim_out() &&
          (spec.hamiltonian_in() - spec.hamiltonian_out()).norm() < 1e-12)
        return StateMonotone::free_energy_monotone(spec.hamiltonian_in(),
                                                   spec.beta());
      return std::nullopt;
    default:
      return std::nullopt;  // every state is free; only omega = 0 qualifies
  }
}

}  // namespace

MonotoneSuiteReport monotone_suite(const FreeSetSpec& spec, int trials,
                                   std::uint64_t seed) {
  MonotoneSuiteReport rep;
  rep.cone = to_string(spec.kind());
  rep.trials = trials;
  const int din = spec.dim_in();
  const int dout = spec.dim_out();
  const double slack = 1e-6;

  auto fail = [&](std::string property, int trial, double lhs, double rhs,
                  std::string note) {
    rep.violations.push_back(
        {std::move(property), trial, lhs, rhs, std::move(note)});
  };
  auto lr_of = [&](const Channel& c, const FreeSetSpec& s) {
    RobustnessResult r = robustness(c, s);
    if (r.infinite)
      throw SolverFailure("monotone_suite: infinite robustness encountered");
    return r.log_robustness;
  };

  std::optional<StateMonotone> omega = suite_monotone(spec);
  auto spec_out = spec.at_dims(dout, dout);
  auto spec_in = spec.at_dims(din, din);
  auto spec_sq = spec.at_dims(din * din, dout * dout);

  for (int t = 0; t < trials; ++t) {
    Rng rng(seed + 7919 * t);
    Channel n_ch = Channel::random(din, dout, 2, rng);
    double lr_n = lr_of(n_ch, spec);
    rep.checks_run++;

    if (spec_out) {
      Channel m_left = sample_free(*spec_out, seed + 7919 * t + 1);
      double lhs = lr_of(compose(m_left, n_ch), spec.at_dims(din, dout).value());
      if (lhs > lr_n + slack)
        fail("left_composition", t, lhs, lr_n, "LR(M.N) > LR(N)");
    }
    if (spec_in) {
      Channel m_right = sample_free(*spec_in, seed + 7919 * t + 2);
      double lhs = lr_of(compose(n_ch, m_right), spec);
      if (lhs > lr_n + slack)
        fail("right_composition", t, lhs, lr_n, "LR(N.M) > LR(N)");
    }
    if (spec_sq) {
      Channel m_par = sample_free(spec, seed + 7919 * t + 3);
      double lhs = lr_of(tensor(n_ch, m_par), *spec_sq);
      if (lhs > lr_n + slack)
        fail("tensor_monotone", t, lhs, lr_n, "LR(N (x) M) > LR(N)");
    }
    {
      Channel n2 = Channel::random(din, dout, din * dout, rng);
      double p = rng.uniform(0.1, 0.9);
      double r1 = std::pow(2.0, lr_n) - 1.0;
      double r2 = std::pow(2.0, lr_of(n2, spec)) - 1.0;
      double rmix =
          std::pow(2.0, lr_of(mix({n_ch, n2}, {p, 1 - p}), spec)) - 1.0;
      if (rmix > p * r1 + (1 - p) * r2 + slack)
        fail("convexity", t, rmix, p * r1 + (1 - p) * r2,
             "R(mix) > mixed R");
    }
    {
      Channel m_free = sample_free(spec, seed + 7919 * t + 4);
      double lr_free = lr_of(m_free, spec);
      if (lr_free > slack)
        fail("faithfulness_free", t, lr_free, 0.0, "free channel with LR > 0");
      bool n_free = is_free(n_ch, spec, 1e-7);
      if (n_free && lr_n > slack)
        fail("faithfulness", t, lr_n, 0.0, "is_free but LR > 0");
      if (lr_n <= slack && !is_free(n_ch, spec, 1e-4))
        fail("faithfulness", t, lr_n, 0.0, "LR ~ 0 but not free");
    }
    if (omega && t < trials) {
      OptimOptions opt;
      opt.starts = 6;
      opt.max_iterations = 120;
      opt.seed = seed + 31 * t;
      PowerResult gp = generating_power(n_ch, *omega, false, opt);
      OptimOptions opt_ip = opt;
      opt_ip.extra_eval_states.push_back(gp.maximizing_state);
      PowerResult ip = increasing_power(n_ch, *omega, false, opt_ip);
      OptimOptions opt_gpc = opt;
      {
        int anc = n_ch.dim_in();
        Matrix seed_state = kron(gp.maximizing_state,
                                 Matrix::Identity(anc, anc) / double(anc));
        opt_gpc.extra_eval_states.push_back(seed_state);
      }
      PowerResult gpc = generating_power(n_ch, *omega, true, opt_gpc);
      OptimOptions opt_ipc = opt;
      {
        int anc = n_ch.dim_in();
        Matrix e00 = Matrix::Zero(anc, anc);
        e00(0, 0) = 1.0;
        opt_ipc.extra_eval_states.push_back(kron(ip.maximizing_state, e00));
        opt_ipc.extra_eval_states.push_back(gpc.maximizing_state);
      }
      PowerResult ipc = increasing_power(n_ch, *omega, true, opt_ipc);
      if (gp.value > ip.value + slack)
        fail("power_gp_le_ip", t, gp.value, ip.value, "plain");
      if (gpc.value > ipc.value + slack)
        fail("power_gp_le_ip", t, gpc.value, ipc.value, "complete");
      if (gp.value > gpc.value + slack)
        fail("power_plain_le_complete", t, gp.value, gpc.value, "generating");
      if (ip.value > ipc.value + slack)
        fail("power_plain_le_complete", t, ip.value, ipc.value, "increasing");
      rep.checks_run += 4;
    }
    rep.checks_run += 5;
  }
  return rep;
}

}  // namespace chanres
