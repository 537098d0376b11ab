#ifndef CHANRES_PROTOCOLS_HPP
#define CHANRES_PROTOCOLS_HPP

#include <optional>
#include <string>

#include "chanres/channel.hpp"
#include "chanres/free_sets.hpp"
#include "chanres/monotones.hpp"
#include "chanres/norms.hpp"

namespace chanres {

struct ProtocolBudget {
  // The full diamond-SDP path solves a Choi-dimension-squared conic program;
  // dimension 64 (about 4100 scalar variables) is the practical ceiling for
  // the dense interior-point backend. Raise at your own risk.
  int max_choi_dim = 64;
  int max_dense_output_dim = 4096;  // dense constant-channel shortcut
  int max_symmetric_n = 4096;       // qubit-output symmetric shortcut
  SolveOptions solver;
};

// ---------------------------------------------------------------------------
// Convex split
// ---------------------------------------------------------------------------

struct ConvexSplitReport {
  int n = 1;
  double lambda = 1.0;            // 2^{D_max(alpha || beta)}
  double measured_distance = 0.0;  // (1/2)||gamma^(n) - beta^(x n)||, in [0,1]
  double bound = 0.0;             // sqrt(lambda / n), full-norm lemma bound
  bool used_shortcut = false;     // constant-channel trace-norm path
  int gamma_dim = 1;              // output dim (shortcut) or Choi dim (full)
};

/// Builds the mixture gamma^(n) = (1/n) sum_i alpha_i (x) beta^{(x) rest}
/// and measures its half diamond distance to beta^(x n). Constant-channel
/// pairs use the exact output trace norm (a collective-spin decomposition
/// for qubit outputs, dense otherwise); general pairs go through the full
/// diamond SDP subject to the Choi-dimension budget.
ConvexSplitReport convex_split(const Channel& alpha, const Channel& beta,
                               int n, const ProtocolBudget& budget = {});

/// Exact value of (1/2) || (1/n) sum_i tau^{(i-1)} sigma tau^{(n-i)}
///                        - tau^{(x n)} ||_1
/// for states sigma, tau. Qubit inputs use the collective-spin sector
/// decomposition (any n); larger dimensions require tau_dim^n within
/// `dense_dim_cap`.
double mixture_tail_trace_distance(const Matrix& sigma, const Matrix& tau,
                                   int n, int dense_dim_cap = 4096);

// ---------------------------------------------------------------------------
// Catalytic resource erasure
// ---------------------------------------------------------------------------

struct ErasureLowerBound {
  double mu = 2.0;
  double delta = 0.0;   // sqrt(eps (2 - eps))
  double value = 0.0;   // LR^{mu delta} + log2(1 - 1/mu)
  double convex_value = 0.0;  // LR^{delta} (valid for convex cones)
};

struct ErasureReport {
  double epsilon = 0.0;
  double eta = 0.0;
  int n_used = 1;
  double cost_bits = 0.0;      // log2 n_used
  double lr_value = 0.0;       // LR^{eps-eta} at the witnesses actually used
  double upper_bound = 0.0;    // lr_value + 2 log2(1/eta) - 1
  double achieved_distance = 0.0;  // certified: mixture term + smoothing term
  bool executed = false;       // mixture distance measured (vs lemma bound)
  bool used_shortcut = false;
  double mixture_distance = 0.0;   // measured or lemma-bounded
  double smoothing_distance = 0.0; // measured (1/2)||N' - N||_diamond
  ErasureLowerBound lower_bound_info;
};

/// Theorem-style achievability run: finds the smoothed-robustness witnesses
/// (N', F0), chooses the minimal n meeting the convex-split threshold,
/// builds the transposition-averaged channel and certifies its distance to
/// F0^(x n). When n exceeds every execution budget the report carries the
/// lemma bound instead of a measured distance.
ErasureReport erasure_protocol(const Channel& n_channel,
                               const FreeSetSpec& spec, double epsilon,
                               double eta, const ProtocolBudget& budget = {});

// ---------------------------------------------------------------------------
// Superchannels / simulation
// ---------------------------------------------------------------------------

/// Theta(N) = post . (N (x) id_C) . pre, with pre: A' -> A (x) C and
/// post: B (x) C -> B'.
Channel apply_superchannel(const Channel& pre, const Channel& post,
                           int ancilla_dim, const Channel& n);

struct SimulationReport {
  bool pre_free = false;
  bool post_free = false;
  bool freeness_checkable = true;  // false when the cone has no canonical
                                   // extension to the pre/post dimensions
  double distance = 0.0;           // (1/2)||Theta(N) - target||_diamond
  double epsilon = 0.0;
  bool distance_ok = false;
  bool pass = false;
  std::string note;
};

/// Checks an epsilon-simulation triple: freeness of pre and post with
/// respect to the cone family, and the half diamond distance between the
/// simulated channel and the target.
SimulationReport verify_simulation(const Channel& n, const Channel& target,
                                   const Channel& pre, const Channel& post,
                                   const FreeSetSpec& spec, double epsilon,
                                   const SolveOptions& options = {});

}  // namespace chanres

#endif  // CHANRES_PROTOCOLS_HPP
