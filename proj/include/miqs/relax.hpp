#pragma once

#include <utility>
#include <vector>

#include "miqs/model.hpp"
#include "miqs/sdp.hpp"
#include "miqs/sparsity.hpp"

namespace miqs {

/// Partial binary assignment: -1 free, otherwise 0/1. Empty means all free.
using BinaryFixings = std::vector<int>;

/// Schur-lifted SDP relaxation with a single moment block over the lifted
/// variables. Binaries relax to [0, 1] unless fixed. Convex objective
/// squares of otherwise-linear variables go to 2x2 epigraph blocks; pure
/// two-square norm constraints go to normalized arrow blocks.
SdpProblem build_full_sdp(const MiqcqpInstance& instance,
                          const BinaryFixings& fixings = {});

/// Clique-decomposed variant: one moment block per clique of the chordal
/// decomposition, with separator equality links along the clique tree.
SdpProblem build_decomposed_sdp(const MiqcqpInstance& instance,
                                const CliqueDecomposition& decomp,
                                const BinaryFixings& fixings = {});

/// Copy of the problem with every binary bound interval collapsed to the
/// assigned value. Throws when a value conflicts with an existing fixing.
SdpProblem fix_binaries(const SdpProblem& problem,
                        const std::vector<int>& assignment);

/// Linear-programming baseline: one w variable per appearing bilinear or
/// square term, constrained by the four McCormick envelope inequalities.
struct McCormickProblem {
  SdpProblem lp;  // no PSD blocks
  std::vector<std::pair<Index, Index>> pairs;
  std::vector<int> pair_scalar;  // scalar index of each w variable
};

McCormickProblem build_mccormick(const MiqcqpInstance& instance,
                                 const BinaryFixings& fixings = {});

/// Relaxed binary values of a solved problem, in instance order.
Vector binary_values(const SdpProblem& problem, const ConicSolution& solution);

}  // namespace miqs
