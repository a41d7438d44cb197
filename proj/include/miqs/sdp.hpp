#pragma once

#include <string>
#include <vector>

#include "miqs/types.hpp"

namespace miqs {

enum class BlockKind { Moment, Epigraph, SocArrow };

/// Descriptor of one PSD block. Moment blocks are Schur-lifted: row/col 0 is
/// the constant-1 moment, row r >= 1 is the moment of variable vars[r-1], and
/// entry (r, c) with r, c >= 1 is the pair moment of the two variables.
struct SdpBlockInfo {
  int size = 0;
  BlockKind kind = BlockKind::Moment;
  std::string label;
  std::vector<Index> vars;
  /// Whether the (0, j) moments carry the variable values (some row or the
  /// objective references them). When false the first row is structural only
  /// and solution extraction must go through the W part.
  bool x_row_meaningful = false;
};

struct ScalarInfo {
  enum class Role { ContVar, Binary, Aux };
  Interval bounds;
  Role role = Role::Aux;
  Index var_id = -1;  // instance variable id for ContVar / Binary
  std::string name;
};

struct RowTermScalar {
  int scalar = 0;
  double coeff = 0.0;
};

/// coeff multiplies the (row, col) entry of the symmetric block matrix once;
/// for off-diagonal entries this is the coefficient of the moment x_r * x_c.
struct RowTermBlock {
  int block = 0;
  int row = 0;
  int col = 0;  // row <= col
  double coeff = 0.0;
};

struct LinearRow {
  std::vector<RowTermScalar> scalars;
  std::vector<RowTermBlock> entries;
  Sense sense = Sense::Equal;
  double rhs = 0.0;
  std::string label;
};

/// Block-diagonal SDP with bounded scalar variables and sparse linear rows.
struct SdpProblem {
  std::vector<SdpBlockInfo> blocks;
  std::vector<ScalarInfo> scalars;
  std::vector<LinearRow> rows;
  LinearRow objective;  // sense/rhs unused
  double objective_constant = 0.0;

  // Locations of the instance variables (filled by the relaxation builders).
  std::vector<int> cont_owner_block;  // -1 when the variable is a scalar
  std::vector<int> cont_block_row;    // row in the owner block, -1 otherwise
  std::vector<int> cont_scalar;       // scalar index, -1 when lifted
  std::vector<int> binary_scalar;     // scalar index per binary

  int scalar_index_of_binary(Index y) const { return binary_scalar[y]; }
};

enum class SolveStatus {
  Optimal,
  PrimalInfeasible,
  DualInfeasible,
  IterationLimit,
  NumericalFailure
};

std::string to_string(SolveStatus s);

struct IterTrace {
  int iter = 0;
  double primal_obj = 0.0;
  double dual_obj = 0.0;
  double gap = 0.0;
  double step_primal = 0.0;
  double step_dual = 0.0;
  double mu = 0.0;
  double residual_primal = 0.0;
  double residual_dual = 0.0;
};

struct SolverSettings {
  double rel_gap_tol = 1e-7;
  double feas_tol = 1e-7;
  int max_iterations = 200;
  double step_fraction = 0.98;
  double time_limit_s = kInf;
  std::vector<IterTrace>* trace = nullptr;  // optional iteration log
};

struct ConicSolution {
  SolveStatus status = SolveStatus::NumericalFailure;
  double objective = 0.0;
  std::vector<Matrix> block_values;
  Vector scalar_values;
  Vector duals;  // one multiplier per input row
  double gap = kInf;
  int iterations = 0;
};

/// Primal-dual path-following interior-point solve with Nesterov-Todd
/// scaling on the PSD blocks and Mehrotra predictor-corrector steps.
ConicSolution solve(const SdpProblem& problem, const SolverSettings& settings);

/// Independent re-verification of a solution: PSD-ness, constraint
/// residuals, scalar bounds, and duality gap. Empty list certifies.
std::vector<std::string> check_solution(const SdpProblem& problem,
                                        const ConicSolution& solution,
                                        double tol);

/// Debug dump in a sparse text format (block sizes, triplet rows).
std::string dump_problem(const SdpProblem& problem);

}  // namespace miqs
