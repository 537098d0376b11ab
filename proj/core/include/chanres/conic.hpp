#ifndef CHANRES_CONIC_HPP
#define CHANRES_CONIC_HPP

#include <string>
#include <vector>

#include "chanres/types.hpp"

namespace chanres {

/// Sparse entry of a Hermitian matrix. Only the upper triangle (row <= col)
/// is stored; the (col, row) entry is implied by conjugation. Diagonal
/// entries must be real.
struct HermTriplet {
  int row = 0;
  int col = 0;
  Complex value{0.0, 0.0};
};

/// A semidefinite program over real scalar variables x:
///
///     minimize    c^T x
///     subject to  F_{j0} + sum_i x_i F_{ji}  >= 0   (Hermitian PSD blocks)
///                 sum_i a_{ki} x_i = b_k            (real equalities)
///
/// Complex Hermitian blocks are lowered to real symmetric blocks via
/// embed_complex when the program is solved.
class ConicProgram {
 public:
  explicit ConicProgram(int num_vars);

  int num_vars() const { return int(objective_.size()); }
  int num_blocks() const { return int(blocks_.size()); }
  int num_equalities() const { return int(equalities_.size()); }

  void set_objective(int var, double coeff);

  int add_psd_block(int dim);
  void block_add_constant(int block, int row, int col, Complex value);
  void block_add_term(int block, int var, int row, int col, Complex value);

  int add_equality(double rhs);
  void equality_add_term(int eq, int var, double coeff);

  /// Sparse triplet text listing, for cross-checking against external
  /// solvers. Not a stability-guaranteed format.
  std::string dump() const;

  // --- introspection (verification, lowering) ---
  struct BlockTerm {
    int var;
    std::vector<HermTriplet> entries;
  };
  struct Block {
    int dim;
    std::vector<HermTriplet> constant;
    std::vector<BlockTerm> terms;
  };
  struct Equality {
    std::vector<std::pair<int, double>> terms;
    double rhs;
  };
  const RealVector& objective() const { return objective_; }
  const std::vector<Block>& blocks() const { return blocks_; }
  const std::vector<Equality>& equalities() const { return equalities_; }

  /// Dense Hermitian value of block `j` at the point x.
  Matrix block_value(int block, const RealVector& x) const;

 private:
  RealVector objective_;
  std::vector<Block> blocks_;
  std::vector<Equality> equalities_;
};

enum class SolveStatus { Optimal, Infeasible, MaxIterations, NumericalTrouble };

const char* to_string(SolveStatus s);

struct SolveOptions {
  double gap_tol = 1e-8;
  double feas_tol = 1e-8;
  int max_iterations = 200;
  bool verbose = false;
};

struct SolveResult {
  SolveStatus status = SolveStatus::NumericalTrouble;
  double objective_value = 0.0;
  RealVector variable_values;
  double duality_gap = 0.0;   // relative primal-dual gap at the returned point
  double max_residual = 0.0;  // worst scaled feasibility residual
  int iterations = 0;
  std::string detail;
};

SolveResult solve(const ConicProgram& program, const SolveOptions& options = {});

/// 2d x 2d real symmetric embedding [[Re, -Im], [Im, Re]] of a Hermitian
/// matrix. Each eigenvalue of the input appears twice in the embedding.
RealMatrix embed_complex(const Matrix& h);

struct VerifyReport {
  double max_equality_residual = 0.0;
  double min_block_eigenvalue = 0.0;
  double objective = 0.0;
};

/// Re-evaluates feasibility and objective of a candidate point from the
/// program data alone (independent of the solver's internal state).
VerifyReport verify(const ConicProgram& program, const RealVector& x);

}  // namespace chanres

#endif  // CHANRES_CONIC_HPP
