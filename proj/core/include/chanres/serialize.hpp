#ifndef CHANRES_SERIALIZE_HPP
#define CHANRES_SERIALIZE_HPP

#include <string>

#include "chanres/channel.hpp"
#include "chanres/free_sets.hpp"

namespace chanres {

// Channel file format (UTF-8 JSON):
//   {"version": 1, "dim_in": int, "dim_out": int,
//    "repr": "kraus"|"choi"|"unitary"|"cq",
//    "data": nested arrays, each complex scalar as [re, im],
//    "label": optional string}
// Loading validates the representation invariants at the library tolerances.

std::string channel_to_json(const Channel& c);
std::string repr_to_json(const ChannelRepr& repr, const std::string& label);
Channel channel_from_json(const std::string& text);

void save_channel(const Channel& c, const std::string& path);
void save_repr(const ChannelRepr& repr, const std::string& label,
               const std::string& path);
Channel load_channel(const std::string& path);

// Free-set file format:
//   {"version": 1, "kind": "constant"|"constant-to"|"mio"|"gibbs"|
//                          "maxmixed"|"custom",
//    "dim_in": int, "dim_out": int,
//    "beta": real, "hamiltonian": matrix, "hamiltonian_out": optional matrix,
//    "target": matrix (constant-to),
//    "equalities"/"inequalities": [{"k": [[row, col, re, im], ...],
//                                   "rhs": real}, ...] (custom)}

std::string spec_to_json(const FreeSetSpec& spec);
FreeSetSpec spec_from_json(const std::string& text);
void save_spec(const FreeSetSpec& spec, const std::string& path);
FreeSetSpec load_spec(const std::string& path);

// A bare complex matrix (2d array of [re, im] scalars), e.g. Hamiltonians
// and density-matrix targets.
std::string matrix_to_json_text(const Matrix& m);
Matrix matrix_from_json_text(const std::string& text);
void save_matrix(const Matrix& m, const std::string& path);
Matrix load_matrix(const std::string& path);

}  // namespace chanres

#endif  // CHANRES_SERIALIZE_HPP
