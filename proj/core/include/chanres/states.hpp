#ifndef CHANRES_STATES_HPP
#define CHANRES_STATES_HPP

#include <vector>

#include "chanres/linalg.hpp"
#include "chanres/types.hpp"

namespace chanres {

/// A validated density matrix: Hermitian, PSD (min eigenvalue >= -1e-9),
/// unit trace (within 1e-9). Immutable after construction.
class DensityMatrix {
 public:
  // Validates the invariants and throws NonCompletelyPositive /
  // NonTracePreserving / std::invalid_argument on violation.
  explicit DensityMatrix(Matrix m);

  static DensityMatrix pure(const Vector& ket);
  static DensityMatrix maximally_mixed(int d);
  static DensityMatrix basis_state(int d, int index);

  const Matrix& matrix() const { return mat_; }
  int dim() const { return int(mat_.rows()); }

 private:
  Matrix mat_;
};

/// Gibbs state exp(-beta H)/Z of a Hermitian Hamiltonian.
DensityMatrix gibbs_state(const Matrix& hamiltonian, double beta);

/// Von Neumann entropy in bits; eigenvalues in [-1e-9, 0] are clipped to 0.
double von_neumann_entropy(const DensityMatrix& rho);

/// Quantum relative entropy D(rho||sigma) in bits; +inf flag when the
/// support of rho is not contained in the support of sigma.
ExtReal relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Max-relative entropy D_max(rho||sigma) in bits: log2 of the largest
/// eigenvalue of sigma^{-1/2} rho sigma^{-1/2} on the support of sigma;
/// +inf flag when rho has weight outside that support.
ExtReal state_dmax(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Relative entropy of coherence S(diag(rho)) - S(rho) in bits, with
/// respect to the computational basis.
double coherence_rel_ent(const DensityMatrix& rho);

/// Same, in the basis given by the columns of the unitary `basis`.
double coherence_rel_ent(const DensityMatrix& rho, const Matrix& basis);

/// Free energy tr(rho H) - S(rho)/beta, in the Hamiltonian's energy units.
/// The entropy term uses natural units so that
/// F(rho) - F(gibbs) = ln(2)/beta * D(rho||gibbs) holds exactly.
double free_energy(const DensityMatrix& rho, const Matrix& hamiltonian,
                   double beta);

/// Majorization p > q on probability vectors: every prefix sum of the
/// descending rearrangement of p dominates that of q within 1e-9 slack.
/// Vectors are padded with zeros to equal length. Throws NotADistribution
/// when an input is negative or does not sum to 1 within 1e-9.
bool majorizes(const RealVector& p, const RealVector& q);

/// Necessary condition for simulating the unitary v from the unitary u with
/// incoherent operations: for every row i, the squared moduli of row i of u
/// majorize those of row i of v.
bool io_unitary_necessary_condition(const Matrix& u, const Matrix& v);

}  // namespace chanres

#endif  // CHANRES_STATES_HPP
