#pragma once

#include <vector>

#include "miqs/localsearch.hpp"
#include "miqs/model.hpp"
#include "miqs/relax.hpp"
#include "miqs/sdp.hpp"
#include "miqs/sparsity.hpp"

namespace miqs {

struct BnbSettings {
  double tol = 0.02;            // relative optimality gap target
  double timelimit_s = 3600.0;
  double run_local = 1.5;       // local-solver call schedule base (> 1)
  double local_time_budget_s = 30.0;
  double integrality_tol = 1e-6;
  long node_limit = 1000000;    // safety
  bool use_sparsity = true;     // decomposed node relaxations
  SolverSettings sdp;
};

enum class BnbStatus { GapMet, Infeasible, TimeLimit, NodeLimit };

std::string to_string(BnbStatus s);

struct HistorySample {
  double t = 0.0;
  double lb = -kInf;
  double ub_misdp = kInf;
  double ub_miqcqp = kInf;
};

struct NodeLogEntry {
  long id = 0;
  long parent = 0;
  int depth = 0;
  double inherited_lb = -kInf;
  double solved_obj = kInf;
  // 's' solved, 'i' infeasible, 'f' fathomed by bound, 'n' integral
  // incumbent, 'b' branched, 'p' pruned from the queue
  char event = 's';
};

struct BnbReport {
  BnbStatus status = BnbStatus::GapMet;
  double lb = -kInf;
  double ub_misdp = kInf;
  double ub_miqcqp = kInf;
  double misdp_gap = kInf;
  double miqcqp_gap = kInf;
  bool have_best_misdp = false;
  bool have_best_miqcqp = false;
  Assignment best_misdp;
  Assignment best_miqcqp;
  long iterations = 0;
  long nodes_created = 0;
  int n_local = 0;
  long ub_jumps = 0;
  double time_s = 0.0;
  double local_time_s = 0.0;
  int sdp_block_count = 0;
  int sdp_max_block = 0;
  std::vector<HistorySample> history;
  std::vector<NodeLogEntry> node_log;
};

/// Best-bound branch-and-bound over the binaries with SDP node relaxations,
/// scheduled local-solver calls, and synchronized MISDP/MIQCQP incumbents.
BnbReport solve_bnb(const MiqcqpInstance& instance,
                    const CliqueDecomposition& decomp,
                    const BnbSettings& settings);

/// Index of the most fractional relaxed binary (ties toward the lowest
/// index), or -1 when all are within tol of {0, 1}.
int select_branch_variable(const Vector& y_relaxed, double integrality_tol);

/// Relative optimality gap (ub - lb) / (|lb| + 1e-9).
double gap(double ub, double lb);

/// Schedule test for the local solver: iter >= run_local^(n_local + 3),
/// or the very first iteration.
bool should_call_local(long iter, int n_local, double run_local);

}  // namespace miqs
