#ifndef CHANRES_MONOTONES_HPP
#define CHANRES_MONOTONES_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "chanres/channel.hpp"
#include "chanres/free_sets.hpp"
#include "chanres/norms.hpp"

namespace chanres {

struct SmoothParams {
  double epsilon = 0.0;  // half-diamond-distance ball radius, in [0, 1)
  SolveOptions solver;
};

// ---------------------------------------------------------------------------
// Max-relative entropy and robustness
// ---------------------------------------------------------------------------

/// Smooth max-relative entropy of states, in bits: the minimum of
/// D_max(rho'||sigma) over rho' within trace distance epsilon of rho.
double state_dmax_smooth(const DensityMatrix& rho, const DensityMatrix& sigma,
                         double epsilon, const SolveOptions& options = {});

struct SmoothDmaxResult {
  ExtReal value;                   // D_max^eps(n || m), bits; +inf flag possible
  double state_lower_bound = 0.0;  // smooth state D_max at the max-entangled input
  std::optional<Channel> smoothed;  // the optimal nearby channel N'
  SolveStatus status = SolveStatus::NumericalTrouble;
};

/// Smooth channel max-relative entropy: minimize D_max(N'||M) over channels
/// N' with half diamond distance at most epsilon from N, as one SDP. The
/// epsilon = 0 case reduces to channel_dmax. Returns +inf flag only when the
/// unsmoothed quantity is infinite and epsilon = 0.
SmoothDmaxResult channel_dmax_smooth(const Channel& n, const Channel& m,
                                     const SmoothParams& smooth);

struct RobustnessResult {
  bool infinite = false;        // no free channel dominates (support defect)
  double robustness = 0.0;      // R >= 0 (finite case)
  double log_robustness = 0.0;  // LR = log2(1 + R), bits (finite case)
  std::optional<Channel> optimal_free;
  std::optional<Channel> optimal_smoothed;  // N' when smoothing was requested
  SolveStatus status = SolveStatus::NumericalTrouble;
};

/// Channel robustness with respect to a free cone: LR = min over free M of
/// D_max(N||M) (or D_max(N'||M) over the epsilon ball when smoothed),
/// computed as one joint SDP over the scaled cone.
RobustnessResult robustness(const Channel& n, const FreeSetSpec& spec,
                            const SmoothParams& smooth = {});

struct ImaxResult {
  double value = 0.0;                 // bits
  double constant_lr_crosscheck = 0;  // robustness(n, Constant).LR
};

/// Channel max-information: min over output states sigma of
/// D_max(J_N/d || I/d (x) sigma). Cross-checked internally against the
/// constant-cone log-robustness.
ImaxResult i_max(const Channel& n, const SolveOptions& options = {});

// ---------------------------------------------------------------------------
// Heuristic optimizers (certified lower bounds)
// ---------------------------------------------------------------------------

struct OptimOptions {
  int starts = 20;
  int max_iterations = 300;
  double grad_tol = 1e-9;
  std::uint64_t seed = 12345;
  int ancilla_dim = 0;  // 0: defaults to the channel input dimension
  std::vector<Matrix> extra_eval_states;  // evaluated (not ascended)
};

struct RelEntResult {
  ExtReal value;  // bits; lower bound of sup_rho D((N(x)id)rho || (M(x)id)rho)
  Matrix maximizing_input;  // density matrix on A (x) A'
  bool certified = false;   // always false: heuristic lower bound
  double dmax_upper = 0.0;  // channel_dmax(n||m) for the reported sanity check
};

/// Channel relative entropy lower bound via multi-start Riemannian gradient
/// ascent over pure inputs on A (x) A'.
RelEntResult channel_rel_ent(const Channel& n, const Channel& m,
                             const OptimOptions& options = {});

/// A faithful resource monotone on states, together with enough structure
/// to seed generating-power searches (its zero set).
class StateMonotone {
 public:
  enum class ZeroSet { DiagonalStates, SingleState };

  /// Relative entropy of coherence in the computational basis.
  static StateMonotone coherence();
  /// Free-energy difference to the Gibbs state of (hamiltonian, beta);
  /// ancillas are treated as trivial (H = 0) systems.
  static StateMonotone free_energy_monotone(const Matrix& hamiltonian,
                                            double beta);
  static StateMonotone custom(
      std::string name,
      std::function<double(const DensityMatrix&, int base_dim)> value,
      std::function<Matrix(const Matrix&, int base_dim)> gradient,
      ZeroSet zero_set);

  const std::string& name() const { return name_; }
  ZeroSet zero_set() const { return zero_set_; }

  /// omega(rho) for rho on base_dim * (ancilla); >= 0, 0 on free states.
  double value(const DensityMatrix& rho, int base_dim) const;
  /// d omega / d rho (Hermitian), with spectrum regularization for the
  /// ascent; not exposed as a public guarantee beyond ascent quality.
  Matrix gradient(const Matrix& rho, int base_dim) const;
  /// The omega = 0 state for SingleState zero sets.
  Matrix zero_state(int base_dim, int ancilla_dim) const;

 private:
  std::string name_;
  std::function<double(const DensityMatrix&, int)> value_;
  std::function<Matrix(const Matrix&, int)> gradient_;
  std::function<Matrix(int, int)> zero_state_;
  ZeroSet zero_set_ = ZeroSet::DiagonalStates;
};

struct PowerResult {
  double value = 0.0;
  Matrix maximizing_state;   // density matrix on the optimized input space
  int ancilla_dim_used = 1;  // 1 when not complete
  bool certified = false;    // heuristic lower bound
};

/// sup_rho { omega(N(rho)) - omega(rho) }, heuristically (pure-state
/// multistart ascent; extra states are evaluated as given). complete = true
/// optimizes over A (x) C with the identity on C.
PowerResult increasing_power(const Channel& n, const StateMonotone& omega,
                             bool complete, const OptimOptions& options = {});

/// sup over omega = 0 inputs of omega(N(rho)); the zero set is searched
/// according to the monotone's structure (diagonal simplex or single state).
PowerResult generating_power(const Channel& n, const StateMonotone& omega,
                             bool complete, const OptimOptions& options = {});

// ---------------------------------------------------------------------------
// Coherence cost brackets
// ---------------------------------------------------------------------------

struct CostBracket {
  double lower = 0.0;  // LR^eps(N) over the MIO cone
  double upper = 0.0;  // log2(ceil(1 + R^eps))
};

/// One-shot MIO simulation-cost bracket from the smoothed MIO robustness.
CostBracket mio_cost_bracket(const Channel& n, double epsilon,
                             const SolveOptions& options = {});

/// For a cq channel (all off-diagonal input blocks of the Choi vanish):
/// max_i of the relative entropy of coherence of the i-th output.
double cq_asymptotic_cost(const Channel& n, double structure_tol = 1e-9);

// ---------------------------------------------------------------------------
// Property suite
// ---------------------------------------------------------------------------

struct MonotoneViolation {
  std::string property;
  int trial = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  std::string note;
};

struct MonotoneSuiteReport {
  std::string cone;
  int trials = 0;
  int checks_run = 0;
  std::vector<MonotoneViolation> violations;
  bool clean() const { return violations.empty(); }
};

/// Randomized verification of the resource-measure conditions: monotonicity
/// of LR under left/right composition and tensoring with sampled free
/// channels, convexity of R, faithfulness, and the power inequalities.
MonotoneSuiteReport monotone_suite(const FreeSetSpec& spec, int trials,
                                   std::uint64_t seed);

}  // namespace chanres

#endif  // CHANRES_MONOTONES_HPP
