#ifndef CHANRES_LINALG_HPP
#define CHANRES_LINALG_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "chanres/types.hpp"

namespace chanres {

bool is_hermitian(const Matrix& m, double tolerance = tol::hermiticity);

// Enforces exact Hermiticity by averaging with the adjoint.
Matrix hermitize(const Matrix& m);

// Smallest eigenvalue of a Hermitian matrix.
double min_eigenvalue(const Matrix& m);

Matrix kron(const Matrix& a, const Matrix& b);

// Partial traces of a matrix on H_a (x) H_b with dim = da * db.
Matrix partial_trace_first(const Matrix& m, int da, int db);   // returns db x db
Matrix partial_trace_second(const Matrix& m, int da, int db);  // returns da x da

// Reorders the tensor factors of a square matrix living on
// V_0 (x) V_1 (x) ... (x) V_{k-1} with dimensions dims[k].
// perm[p] names the source factor that lands at position p of the result,
// i.e. result = M viewed on V_{perm[0]} (x) V_{perm[1]} (x) ...
// Example: permute_factors(kron(A, B), {da, db}, {1, 0}) == kron(B, A).
Matrix permute_factors(const Matrix& m, const std::vector<int>& dims,
                       const std::vector<int>& perm);

// Permutation matrix P with P |i_0 i_1 ...> = |i_{perm[0]} i_{perm[1]} ...>
// on the factor ordering described above.
Matrix factor_permutation_unitary(const std::vector<int>& dims,
                                  const std::vector<int>& perm);

// Trace norm ||m||_1 of a Hermitian matrix (sum of |eigenvalues|).
double trace_norm_hermitian(const Matrix& m);

// Operator norm ||m||_inf of a Hermitian matrix.
double operator_norm_hermitian(const Matrix& m);

// Hermitian square root pseudo-inverse: eigenvalues below cutoff are dropped.
Matrix inverse_sqrt_on_support(const Matrix& psd, double cutoff = tol::support);

// Projector onto the eigenspaces of a Hermitian PSD matrix with
// eigenvalue >= cutoff.
Matrix support_projector(const Matrix& psd, double cutoff = tol::support);

// Matrix functions of Hermitian input via spectral decomposition.
Matrix hermitian_matrix_log(const Matrix& psd_full_rank);  // natural log
Matrix hermitian_matrix_exp(const Matrix& h);

// -------------------------------------------------------------------------
// Seeded random sampling (deterministic per seed on a given platform)
// -------------------------------------------------------------------------

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0);
  double gaussian();
  Complex complex_gaussian();
  int uniform_int(int lo, int hi);  // inclusive bounds

  // d x d matrix of i.i.d. standard complex Gaussians.
  Matrix ginibre(int rows, int cols);
  // Haar-distributed unitary via QR of a Ginibre matrix.
  Matrix haar_unitary(int d);
  // Random full-rank density matrix GG^dag / tr.
  Matrix random_density(int d);
  // Random pure state vector.
  Vector random_pure_state(int d);
  // Random probability vector of length n (flat Dirichlet).
  RealVector random_distribution(int n);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace chanres

#endif  // CHANRES_LINALG_HPP
