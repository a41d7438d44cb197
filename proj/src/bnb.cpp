#include "miqs/bnb.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace miqs {

std::string to_string(BnbStatus s) {
  switch (s) {
    case BnbStatus::GapMet: return "gap_met";
    case BnbStatus::Infeasible: return "infeasible";
    case BnbStatus::TimeLimit: return "timelimit";
    default: return "node_limit";
  }
}

double gap(double ub, double lb) {
  if (ub >= kInf) return kInf;
  return (ub - lb) / (std::abs(lb) + 1e-9);
}

bool should_call_local(long iter, int n_local, double run_local) {
  if (iter == 1) return true;
  return static_cast<double>(iter) >= std::pow(run_local, n_local + 3);
}

int select_branch_variable(const Vector& y_relaxed, double integrality_tol) {
  int best = -1;
  double best_dist = integrality_tol;
  for (Index k = 0; k < y_relaxed.size(); ++k) {
    const double dist = std::min(y_relaxed[k], 1.0 - y_relaxed[k]);
    if (dist > best_dist) {
      best_dist = dist;
      best = static_cast<int>(k);
    }
  }
  return best;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Node {
  long id = 0;
  long parent = 0;
  BinaryFixings fixings;
  double lb = -kInf;
  int depth = 0;
};

// Best bound first; equal bounds go depth-first, then FIFO.
struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.lb != b.lb) return a.lb < b.lb;
    if (a.depth != b.depth) return a.depth > b.depth;
    return a.id < b.id;
  }
};

SdpProblem with_fixings(SdpProblem base, const BinaryFixings& fixings) {
  for (size_t k = 0; k < fixings.size(); ++k) {
    if (fixings[k] < 0) continue;
    base.scalars[base.binary_scalar[k]].bounds = {
        static_cast<double>(fixings[k]), static_cast<double>(fixings[k])};
  }
  return base;
}

std::vector<int> round_binaries(const Vector& y) {
  std::vector<int> out(y.size());
  for (Index k = 0; k < y.size(); ++k) out[k] = y[k] >= 0.5 ? 1 : 0;
  return out;
}

}  // namespace

BnbReport solve_bnb(const MiqcqpInstance& inst,
                    const CliqueDecomposition& decomp,
                    const BnbSettings& settings) {
  {
    const auto violations = validate(inst);
    if (!violations.empty())
      throw std::invalid_argument("solve_bnb: invalid instance: " +
                                  violations.front().what);
  }
  const auto t0 = Clock::now();

  const SdpProblem base = settings.use_sparsity
                              ? build_decomposed_sdp(inst, decomp)
                              : build_full_sdp(inst);

  BnbReport report;
  report.sdp_block_count = static_cast<int>(base.blocks.size());
  for (const auto& b : base.blocks)
    report.sdp_max_block = std::max(report.sdp_max_block, b.size);

  double lb_global = -kInf;
  double ub_misdp = kInf;
  double ub_miqcqp = kInf;

  std::set<Node, NodeOrder> queue;
  queue.insert({1, 0, BinaryFixings(inst.n_int, -1), -kInf, 0});
  report.nodes_created = 1;
  long iter = 0;
  int n_local = 0;
  long node_counter = 1;

  // Relaxation solution of the last solved node, for local-solver starts.
  bool have_last = false;
  ConicSolution last_solution;
  BinaryFixings last_fixings;

  double last_sample_t = -1.0;
  auto sample_history = [&](bool force) {
    const double t = seconds_since(t0);
    if (!force && t - last_sample_t < 1.0) return;
    last_sample_t = t;
    report.history.push_back({t, lb_global, ub_misdp, ub_miqcqp});
  };

  auto prune_queue = [&]() {
    for (auto it = queue.begin(); it != queue.end();) {
      if (it->lb >= ub_misdp - 1e-9) {
        report.node_log.push_back(
            {it->id, it->parent, it->depth, it->lb, kInf, 'p'});
        it = queue.erase(it);
      } else {
        ++it;
      }
    }
  };

  auto fold_lb = [&]() {
    const double qmin = queue.empty() ? kInf : queue.begin()->lb;
    const double folded = std::min(qmin, ub_misdp);
    if (folded > lb_global) {
      lb_global = folded;
      sample_history(true);
    }
  };

  // Post-heuristic synchronization: resolve the relaxation with the
  // binaries fixed to a feasible point's pattern, so the MISDP incumbent
  // is never worse than the MIQCQP one.
  auto sync_misdp = [&](const Assignment& point, double point_obj) {
    std::vector<int> assignment(point.y.size());
    for (Index k = 0; k < point.y.size(); ++k) assignment[k] = point.y[k];
    SolverSettings ss = settings.sdp;
    ss.time_limit_s =
        std::max(1.0, settings.timelimit_s - seconds_since(t0));
    const auto fixed = fix_binaries(base, assignment);
    const auto sol = solve(fixed, ss);
    bool improved = false;
    if (sol.status == SolveStatus::Optimal && sol.objective < ub_misdp) {
      ub_misdp = sol.objective;
      report.best_misdp.x = extract_start_from_sdp(sol, fixed);
      report.best_misdp.y = point.y;
      report.have_best_misdp = true;
      improved = true;
    }
    // The feasible point itself lifts to a MISDP point of equal value.
    if (point_obj < ub_misdp) {
      ub_misdp = point_obj;
      report.best_misdp = point;
      report.have_best_misdp = true;
      improved = true;
    }
    if (improved) {
      prune_queue();
      sample_history(true);
    }
  };

  auto run_local_solver = [&](const BinaryFixings& fixed,
                              const std::vector<int>& hints,
                              const Vector& start_x) {
    LocalSolveRequest req;
    req.instance = &inst;
    req.fixed_binaries = fixed;
    req.hint_binaries = hints;
    req.start_x = start_x;
    req.time_budget_s = std::min(settings.local_time_budget_s,
                                 std::max(1.0, settings.timelimit_s -
                                                   seconds_since(t0)));
    req.incumbent = ub_miqcqp;
    const auto ls_t0 = Clock::now();
    const auto res = local_solve(req);
    report.local_time_s += seconds_since(ls_t0);
    if (res.status == LocalStatus::Feasible &&
        res.objective < ub_miqcqp - 1e-12) {
      ub_miqcqp = res.objective;
      report.best_miqcqp = res.point;
      report.have_best_miqcqp = true;
      ++report.ub_jumps;
      sample_history(true);
      sync_misdp(res.point, res.objective);
    }
  };

  sample_history(true);

  BnbStatus status = BnbStatus::GapMet;
  while (true) {
    fold_lb();
    if (gap(ub_misdp, lb_global) <= settings.tol) {
      status = queue.empty() && !report.have_best_misdp
                   ? BnbStatus::Infeasible
                   : BnbStatus::GapMet;
      break;
    }
    if (queue.empty()) {
      status = report.have_best_misdp ? BnbStatus::GapMet
                                      : BnbStatus::Infeasible;
      break;
    }
    if (seconds_since(t0) > settings.timelimit_s) {
      status = BnbStatus::TimeLimit;
      break;
    }
    if (iter >= settings.node_limit) {
      status = BnbStatus::NodeLimit;
      break;
    }

    ++iter;
    Node node = *queue.begin();
    queue.erase(queue.begin());

    SolverSettings ss = settings.sdp;
    ss.time_limit_s = std::max(1.0, settings.timelimit_s - seconds_since(t0));
    const SdpProblem node_problem = with_fixings(base, node.fixings);
    ConicSolution sol = solve(node_problem, ss);

    if (sol.status == SolveStatus::DualInfeasible) {
      if (node.depth == 0)
        throw std::runtime_error("solve_bnb: root relaxation is unbounded");
      sol.status = SolveStatus::NumericalFailure;
    }

    if (sol.status == SolveStatus::PrimalInfeasible) {
      report.node_log.push_back(
          {node.id, node.parent, node.depth, node.lb, kInf, 'i'});
    } else {
      const bool trustworthy =
          sol.status == SolveStatus::Optimal ||
          (sol.status == SolveStatus::IterationLimit && sol.gap <= 1e-4);
      // An untrusted solve falls back to the inherited bound; branching
      // still makes progress below.
      const double obj =
          trustworthy ? sol.objective : std::max(node.lb, sol.objective);
      char event = 'f';
      if (obj < ub_misdp) {
        const Vector y_rel = binary_values(base, sol);
        const int branch_var = trustworthy ? select_branch_variable(
                                                 y_rel, settings.integrality_tol)
                                           : [&] {
                                               for (Index k = 0; k < inst.n_int;
                                                    ++k)
                                                 if (node.fixings[k] < 0)
                                                   return static_cast<int>(k);
                                               return -1;
                                             }();
        if (branch_var < 0 && trustworthy) {
          event = 'n';
          ub_misdp = obj;
          report.best_misdp.x = extract_start_from_sdp(sol, base);
          report.best_misdp.y =
              IntVector::Map(round_binaries(y_rel).data(), inst.n_int);
          report.have_best_misdp = true;
          prune_queue();
          sample_history(true);
          // Incumbent-triggered local call; no binaries fixed, counters
          // untouched.
          run_local_solver(BinaryFixings(inst.n_int, -1),
                           round_binaries(y_rel),
                           extract_start_from_sdp(sol, base));
        } else if (branch_var >= 0) {
          event = 'b';
          for (int value : {0, 1}) {
            Node child;
            child.id = ++node_counter;
            child.parent = node.id;
            child.fixings = node.fixings;
            child.fixings[branch_var] = value;
            child.lb = obj;
            child.depth = node.depth + 1;
            queue.insert(child);
          }
          report.nodes_created += 2;
        }
      }
      report.node_log.push_back(
          {node.id, node.parent, node.depth, node.lb, obj, event});
      if (sol.scalar_values.size() > 0 || !sol.block_values.empty()) {
        have_last = true;
        last_solution = sol;
        last_fixings = node.fixings;
      }
    }

    // Scheduled local-solver calls: rounded hints, branching fixings held.
    if (should_call_local(iter, n_local, settings.run_local) && have_last &&
        inst.n_cont + inst.n_int > 0) {
      ++n_local;
      run_local_solver(last_fixings,
                       round_binaries(binary_values(base, last_solution)),
                       extract_start_from_sdp(last_solution, base));
    }

    fold_lb();
    sample_history(false);
  }

  report.status = status;
  report.lb = lb_global;
  report.ub_misdp = ub_misdp;
  report.ub_miqcqp = ub_miqcqp;
  report.misdp_gap = gap(ub_misdp, lb_global);
  report.miqcqp_gap = gap(ub_miqcqp, lb_global);
  report.iterations = iter;
  report.n_local = n_local;
  report.time_s = seconds_since(t0);
  sample_history(true);
  return report;
}

}  // namespace miqs
