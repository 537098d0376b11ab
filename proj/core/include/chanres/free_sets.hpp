#ifndef CHANRES_FREE_SETS_HPP
#define CHANRES_FREE_SETS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "chanres/channel.hpp"
#include "chanres/conic.hpp"

namespace chanres {

enum class FreeSetKind {
  Constant,            // all replacer channels
  ConstantFixed,       // the single replacer channel to a fixed target state
  Mio,                 // maximally incoherent operations (computational basis)
  GibbsPreserving,     // N(gibbs_in) = gibbs_out
  MaxMixedPreserving,  // N(I/din) = I/dout
  Custom,              // user-supplied linear Choi constraints
};

const char* to_string(FreeSetKind k);

/// Real-linear functional <K, J> on Hermitian Choi matrices, K Hermitian and
/// stored as upper-triangle triplets. Repeated positions accumulate.
struct LinearFunctional {
  std::vector<HermTriplet> k;
  double rhs = 0.0;
};

double evaluate_functional(const LinearFunctional& f, const Matrix& j);

/// Compiled description of the conic hull R+ * F of a free-channel set:
/// a PSD requirement on the Choi variable plus homogeneous linear
/// equalities; trace preservation rows are kept separate so callers can
/// toggle between cone membership and channel membership.
struct ConeConstraints {
  int dim_in = 0;
  int dim_out = 0;
  std::vector<LinearFunctional> conic_equalities;  // homogeneous
  std::vector<LinearFunctional> tp_rows;           // Tr_out J = I (only when requested)
  std::vector<LinearFunctional> inequalities;      // Custom: <K,J> >= rhs
};

class FreeSetSpec {
 public:
  static FreeSetSpec constant(int dim_in, int dim_out);
  static FreeSetSpec constant_to(const DensityMatrix& target, int dim_in);
  static FreeSetSpec mio(int dim_in, int dim_out);
  static FreeSetSpec gibbs(const Matrix& hamiltonian, double beta);
  static FreeSetSpec gibbs(const Matrix& hamiltonian_in,
                           const Matrix& hamiltonian_out, double beta);
  static FreeSetSpec max_mixed_preserving(int dim_in, int dim_out);
  static FreeSetSpec custom(int dim_in, int dim_out,
                            std::vector<LinearFunctional> equalities,
                            std::vector<LinearFunctional> inequalities = {});

  FreeSetKind kind() const { return kind_; }
  int dim_in() const { return dim_in_; }
  int dim_out() const { return dim_out_; }
  double beta() const { return beta_; }
  const Matrix& hamiltonian_in() const { return ham_in_; }
  const Matrix& hamiltonian_out() const { return ham_out_; }
  const Matrix& target() const { return target_; }
  const std::vector<LinearFunctional>& custom_equalities() const {
    return custom_eq_;
  }
  const std::vector<LinearFunctional>& custom_inequalities() const {
    return custom_ineq_;
  }

  /// The same family of free channels at other dimensions, when the kind
  /// extends canonically (tensor powers for Gibbs Hamiltonians). nullopt
  /// when no canonical extension exists.
  std::optional<FreeSetSpec> at_dims(int dim_in, int dim_out) const;

 private:
  FreeSetSpec() = default;
  FreeSetKind kind_ = FreeSetKind::Constant;
  int dim_in_ = 0;
  int dim_out_ = 0;
  double beta_ = 1.0;
  Matrix ham_in_, ham_out_;
  Matrix target_;
  std::vector<LinearFunctional> custom_eq_, custom_ineq_;
};

/// Lowers a free-set description to Choi-space constraints. A Choi matrix J
/// satisfies {PSD, conic_equalities} iff J lies in the conic hull of the
/// free set; adding tp_rows (include_tp) pins J to the free channels
/// themselves.
ConeConstraints compile(const FreeSetSpec& spec, bool include_tp);

/// True iff every compiled equality holds within `tolerance` and the Choi
/// matrix is PSD within it.
bool is_free(const Channel& channel, const FreeSetSpec& spec,
             double tolerance = 1e-7);

/// A valid free channel of the cone, deterministic per seed.
Channel sample_free(const FreeSetSpec& spec, std::uint64_t seed);

struct AxiomFinding {
  std::string axiom;
  bool applicable = false;
  bool holds = false;
  std::string note;
};

struct AxiomReport {
  std::string cone;
  int trials = 0;
  std::vector<AxiomFinding> findings;
  bool all_applicable_hold() const;
};

/// Empirical check of the free-set axioms on sampled channels: closure under
/// composition and tensor products, identity membership, trace / free-state
/// availability, convexity, and permutation freeness. Violations are
/// reported as data, not errors (some cones legitimately fail some axioms).
AxiomReport axiom_check(const FreeSetSpec& spec, int trials,
                        std::uint64_t seed);

}  // namespace chanres

#endif  // CHANRES_FREE_SETS_HPP
