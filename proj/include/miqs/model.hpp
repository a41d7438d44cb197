#pragma once

#include <optional>
#include <string>
#include <vector>

#include "miqs/types.hpp"

namespace miqs {

/// One entry of a sparse symmetric matrix, stored on the upper triangle
/// (row <= col). `value` is the matrix entry, i.e. the coefficient that
/// appears at both (row, col) and (col, row).
struct QuadEntry {
  Index row = 0;
  Index col = 0;
  double value = 0.0;
};

struct LinTerm {
  Index index = 0;
  double value = 0.0;
};

/// x^T quad x + lin_x^T x + lin_y^T y + constant, with `quad` over the
/// continuous variables only. Integer variables never enter quadratic terms.
struct QuadraticForm {
  std::vector<QuadEntry> quad;
  std::vector<LinTerm> lin_x;
  std::vector<LinTerm> lin_y;
  double constant = 0.0;

  /// Adds v to the symmetric matrix entry (i, j) (and (j, i)).
  void add_quad_entry(Index i, Index j, double v);
  /// Adds the monomial c * x_i * x_j; off-diagonal entries get c/2 each side.
  void add_monomial(Index i, Index j, double c);
  void add_lin_x(Index i, double v);
  void add_lin_y(Index i, double v);

  /// Merges duplicate entries and sorts them; drops exact zeros.
  void canonicalize();

  double quad_entry(Index i, Index j) const;
};

struct LinearConstraint {
  std::vector<LinTerm> lin_x;
  std::vector<LinTerm> lin_y;
  Sense sense = Sense::LessEqual;
  double rhs = 0.0;
  std::string name;
};

struct QuadConstraint {
  QuadraticForm form;
  Sense sense = Sense::LessEqual;
  double rhs = 0.0;
  std::string name;
};

struct MiqcqpInstance {
  Index n_cont = 0;
  Index n_int = 0;
  std::vector<Interval> cont_bounds;
  std::vector<Interval> int_bounds;  // binaries, i.e. [0, 1]
  QuadraticForm objective;
  std::vector<QuadConstraint> quad_constraints;
  std::vector<LinearConstraint> lin_constraints;
  std::vector<std::string> names;
  std::string label;

  void canonicalize();
};

struct Assignment {
  Vector x;
  IntVector y;
};

struct Violation {
  std::string what;
  Index index = -1;
};

/// All invariant violations of the instance; empty means well-formed.
/// Violations are data, not errors.
std::vector<Violation> validate(const MiqcqpInstance& instance);

/// Evaluates the form at the point. Throws on dimension mismatch against the
/// indices referenced by the form.
double evaluate(const QuadraticForm& form, const Assignment& point);

/// True iff every constraint, bound, and integrality requirement holds within
/// tol (absolute residuals).
bool is_feasible(const MiqcqpInstance& instance, const Assignment& point,
                 double tol);

/// Largest constraint/bound/integrality violation at the point.
double max_violation(const MiqcqpInstance& instance, const Assignment& point);

struct OracleResult {
  bool found = false;  // false: no feasible point within the search grid
  Assignment best;
  double value = kInf;
};

/// Independent desk-scale oracle: enumerates every integer assignment,
/// grid-searches the continuous box, then refines by cyclic coordinate
/// descent with halving steps. Guards: n_int <= 12, n_cont <= 4, all
/// variables bounded.
OracleResult brute_force_solve(const MiqcqpInstance& instance,
                               int grid_density, int refine_steps);

}  // namespace miqs
