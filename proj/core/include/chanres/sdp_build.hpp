#ifndef CHANRES_SDP_BUILD_HPP
#define CHANRES_SDP_BUILD_HPP

#include <vector>

#include "chanres/conic.hpp"

namespace chanres {

// A Hermitian matrix variable packed into dim*dim consecutive real scalars
// of a ConicProgram: first the dim diagonal entries, then (re, im) pairs for
// the strict upper triangle in lexicographic order.
struct HermVar {
  int dim = 0;
  int base = -1;
};

inline int herm_var_count(int dim) { return dim * dim; }

int herm_diag_index(const HermVar& v, int i);
int herm_re_index(const HermVar& v, int i, int j);  // requires i < j
int herm_im_index(const HermVar& v, int i, int j);  // requires i < j

/// A program whose variables are allocated incrementally.
class SdpBuilder {
 public:
  SdpBuilder() = default;

  int add_scalar();                 // one unconstrained real scalar
  HermVar add_hermitian(int dim);   // dim*dim real scalars

  /// Finishes allocation; must be called before constraint helpers.
  ConicProgram& program();

  // --- PSD block helpers (all act on the finished program) ---
  int add_block(int dim);
  void block_const(int block, const Matrix& m, double coeff = 1.0);
  void block_const_identity(int block, double coeff);
  void block_scalar_identity(int block, int scalar_var, double coeff);
  /// Adds coeff * V to the block's affine map as a principal sub-block
  /// starting at `offset` (block dim must be >= offset + v.dim).
  void block_herm(int block, const HermVar& v, double coeff, int offset = 0);
  /// Adds coeff * I_din (x) V for a dout-dimensional V (block dim din*dout).
  void block_kron_identity_herm(int block, const HermVar& v, int din,
                                double coeff);
  /// Adds (coeff * m) * x_var to the block's affine map.
  void block_scalar_matrix(int block, int scalar_var, const Matrix& m,
                           double coeff);
  /// Adds an affine functional coeff * <K, V> to entry (0,0) of a 1x1 block.
  void block_scalar_functional(int block, const HermVar& v,
                               const std::vector<HermTriplet>& k, double coeff);
  /// Adds coeff * Tr_second(V) for V on da (x) db (block dim da).
  void block_ptrace_second(int block, const HermVar& v, int da, int db,
                           double coeff);
  /// Adds coeff * Tr_first(V) for V on da (x) db (block dim db).
  void block_ptrace_first(int block, const HermVar& v, int da, int db,
                          double coeff);

  // --- equality helpers ---
  int add_equality(double rhs);
  void eq_scalar(int eq, int var, double coeff);
  /// Adds Re tr(K^dag V) with Hermitian K given by upper-triangle triplets.
  void eq_herm_inner(int eq, const HermVar& v,
                     const std::vector<HermTriplet>& k, double coeff = 1.0);
  /// Constrains entry (i, j), i <= j, of V: Re part = re (and Im part = im
  /// when i < j). Emits one or two equality rows.
  void eq_fix_entry(const HermVar& v, int i, int j, double re, double im);
  /// Tr_second(V) = coeff_id * I + scalar_var * I (scalar_var < 0 to omit);
  /// emits the d_a^2 real rows.
  void eq_ptrace_second_identity(const HermVar& v, int da, int db,
                                 double coeff_id, int scalar_var,
                                 double scalar_coeff);

  void set_objective(int var, double coeff);

  /// Hermitian value of a variable at a solution vector.
  static Matrix herm_value(const HermVar& v, const RealVector& x);

 private:
  void ensure_built();
  int next_var_ = 0;
  bool built_ = false;
  std::vector<ConicProgram> storage_;  // delayed construction (0 or 1)
};

/// Upper-triangle triplets of a dense Hermitian matrix (entries below
/// `drop_tol` in magnitude are skipped).
std::vector<HermTriplet> herm_triplets(const Matrix& k, double drop_tol = 0.0);

}  // namespace chanres

#endif  // CHANRES_SDP_BUILD_HPP
