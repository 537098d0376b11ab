#ifndef CHANRES_NORMS_HPP
#define CHANRES_NORMS_HPP

#include "chanres/channel.hpp"
#include "chanres/conic.hpp"
#include "chanres/free_sets.hpp"

namespace chanres {

/// A Hermitian-preserving linear map (no positivity or trace requirement),
/// as arises from differences of channels.
struct HermitianPreservingMap {
  int dim_in = 0;
  int dim_out = 0;
  Matrix choi;

  HermitianPreservingMap(int din, int dout, Matrix j);
  static HermitianPreservingMap difference(const Channel& a, const Channel& b);
};

/// Completely bounded trace norm ||map||_diamond, computed by the SDP
///   min ||Tr_out Y||_inf  s.t.  Y >= choi, Y >= -choi.
/// Throws SolverFailure when the solver does not reach optimality.
double diamond_norm(const HermitianPreservingMap& map,
                    const SolveOptions& options = {});

/// Half diamond distance (1/2)||a - b||_diamond in [0, 1].
double diamond_distance(const Channel& a, const Channel& b,
                        const SolveOptions& options = {});

struct DistanceToFreeResult {
  double distance = 0.0;  // half diamond distance
  Channel closest_free;
  SolveStatus status = SolveStatus::NumericalTrouble;
};

/// min over free channels L of (1/2)||n - L||_diamond, as one joint SDP
/// coupling the cone membership of L with the diamond-norm epigraph.
DistanceToFreeResult diamond_distance_to_free(const Channel& n,
                                              const FreeSetSpec& spec,
                                              const SolveOptions& options = {});

/// Repairs tiny solver-scale violations: Hermitizes, clips negative
/// eigenvalues and restores the trace-preservation marginal.
Channel project_to_channel(Matrix choi, int dim_in, int dim_out,
                           std::string label = {});

}  // namespace chanres

#endif  // CHANRES_NORMS_HPP
