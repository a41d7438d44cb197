#pragma once

#include <vector>

#include "miqs/model.hpp"
#include "miqs/sdp.hpp"

namespace miqs {

/// Feasible-solution search for a fixed-or-hinted binary pattern. Hard
/// fixings are honored exactly; hinted binaries may be flipped by the
/// single-flip neighborhood descent.
struct LocalSolveRequest {
  const MiqcqpInstance* instance = nullptr;
  std::vector<int> fixed_binaries;  // -1 free, else 0/1
  std::vector<int> hint_binaries;   // full assignment
  Vector start_x;                   // clipped to bounds on entry
  double time_budget_s = 30.0;
  double incumbent = kInf;  // stop at the first feasible point below this
};

enum class LocalStatus { Feasible, InfeasibleWithinBudget };

struct LocalSolveResult {
  LocalStatus status = LocalStatus::InfeasibleWithinBudget;
  Assignment point;
  double objective = kInf;
  double constraint_violation = kInf;
  /// Best feasible objective after each outer iteration (+inf before the
  /// first feasible point); non-increasing.
  std::vector<double> best_trace;
};

LocalSolveResult local_solve(const LocalSolveRequest& request);

/// Continuous starting vector from a solved relaxation: scalar variables
/// directly, lifted variables from the owner block's x row, and pure-W
/// blocks via the leading eigenvector stitched across block overlaps.
Vector extract_start_from_sdp(const ConicSolution& solution,
                              const SdpProblem& problem);

/// Augmented-Lagrangian merit function over the continuous variables at a
/// fixed binary assignment. Public for gradient verification.
class AugmentedLagrangian {
 public:
  AugmentedLagrangian(const MiqcqpInstance& instance,
                      const std::vector<int>& binaries);

  double value(const Vector& x) const;
  Vector gradient(const Vector& x) const;
  /// Objective value at x (with the binary contribution folded in).
  double objective(const Vector& x) const;
  /// Largest constraint violation at x (bounds excluded; those are handled
  /// by projection).
  double infeasibility(const Vector& x) const;

  void set_penalty(double rho) { rho_ = rho; }
  double penalty() const { return rho_; }
  void update_multipliers(const Vector& x);

 private:
  struct CompiledRow {
    std::vector<QuadEntry> quad;
    std::vector<LinTerm> lin;
    double c0 = 0.0;
    bool equality = false;
  };
  double row_value(const CompiledRow& row, const Vector& x) const;
  void row_gradient(const CompiledRow& row, const Vector& x, double mult,
                    Vector& grad) const;

  CompiledRow objective_;
  std::vector<CompiledRow> rows_;  // inequalities normalized to value <= 0
  std::vector<double> lambda_;     // multipliers, one per row
  double rho_ = 10.0;
};

}  // namespace miqs
