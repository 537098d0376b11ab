#ifndef CHANRES_CHANNEL_HPP
#define CHANRES_CHANNEL_HPP

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "chanres/states.hpp"
#include "chanres/types.hpp"

namespace chanres {

// Alternative channel descriptions accepted by Channel::from_repr and the
// channel file format.
struct KrausRepr {
  std::vector<Matrix> operators;  // each dim_out x dim_in
};
struct UnitaryRepr {
  Matrix u;  // square
};
struct CqRepr {
  std::vector<Matrix> outputs;  // one density matrix per input basis state
};
struct ChoiRepr {
  int dim_in = 0;
  int dim_out = 0;
  Matrix choi;
};
using ChannelRepr = std::variant<KrausRepr, UnitaryRepr, CqRepr, ChoiRepr>;

/// A completely positive trace-preserving map, stored canonically as its
/// unnormalized Choi matrix
///
///     J = sum_{ij} |i><j|  (x)  N(|i><j|)
///
/// on H_in (x) H_out (input factor first). Complete positivity (J PSD within
/// 1e-9) and trace preservation (Tr_out J = I within 1e-9) are enforced at
/// construction. Instances are immutable; all operations are pure functions.
class Channel {
 public:
  // Canonical constructor from a Choi matrix; validates invariants.
  Channel(int dim_in, int dim_out, Matrix choi, std::string label = {});

  static Channel from_repr(const ChannelRepr& repr, std::string label = {});
  static Channel from_kraus(const std::vector<Matrix>& kraus_ops,
                            std::string label = {});
  static Channel from_unitary(const Matrix& u, std::string label = {});
  static Channel from_cq(const std::vector<Matrix>& outputs,
                         std::string label = {});

  static Channel identity(int d);
  /// Replacer channel mapping every input to `target`.
  static Channel constant(const DensityMatrix& target, int dim_in);
  /// Completely dephasing channel in the computational basis.
  static Channel completely_dephasing(int d);
  /// rho -> (1-p) rho + p I/d.
  static Channel depolarizing(int d, double p);
  /// Random channel with Choi rank `kraus_rank` via a Haar-random isometry.
  static Channel random(int dim_in, int dim_out, int kraus_rank, Rng& rng);

  int dim_in() const { return dim_in_; }
  int dim_out() const { return dim_out_; }
  const Matrix& choi() const { return choi_; }
  const std::string& label() const { return label_; }

  DensityMatrix apply(const DensityMatrix& state) const;
  Matrix apply_matrix(const Matrix& operand) const;  // no validation of output

  /// Kraus operators recovered from the Choi eigendecomposition.
  std::vector<Matrix> kraus_operators(double rank_cutoff = 1e-12) const;

  /// True when the output is input-independent (replacer channel).
  bool is_constant(double tolerance = 1e-8) const;
  /// The fixed output of a constant channel.
  DensityMatrix constant_output() const;

 private:
  int dim_in_;
  int dim_out_;
  Matrix choi_;
  std::string label_;
};

/// Canonicalize any representation to a Choi-form channel.
Channel to_choi(const ChannelRepr& repr);

/// second . first (apply `first`, then `second`).
Channel compose(const Channel& second, const Channel& first);

/// Parallel composition a (x) b. The Choi factors are interleaved from
/// (in_a, out_a, in_b, out_b) to the canonical (in_a, in_b, out_a, out_b).
Channel tensor(const Channel& a, const Channel& b);

/// n-fold tensor power.
Channel tensor_power(const Channel& a, int n);

/// Relabels tensor factors of the input and output spaces: factor p of the
/// result is factor perm[p] of the original, on both sides.
Channel permute_systems(const Channel& channel, const std::vector<int>& dims_in,
                        const std::vector<int>& dims_out,
                        const std::vector<int>& perm);

/// Convex combination sum_i w_i N_i of equal-signature channels.
Channel mix(const std::vector<Channel>& channels,
            const std::vector<double>& weights);

/// Partial trace channel A (x) B -> A (keep_first = true keeps A).
Channel partial_trace_channel(int da, int db, bool keep_first);

/// Max-relative entropy between channels, in bits: the max-relative entropy
/// between the Choi matrices, computed spectrally. +inf flag when the Choi
/// support condition fails.
ExtReal channel_dmax(const Channel& n, const Channel& m);

}  // namespace chanres

#endif  // CHANRES_CHANNEL_HPP
