#include "miqs/localsearch.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <chrono>
#include <deque>
#include <stdexcept>

namespace miqs {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

constexpr double kFeasTol = 1e-6;

Vector project(const MiqcqpInstance& inst, Vector x) {
  for (Index j = 0; j < inst.n_cont; ++j) x[j] = inst.cont_bounds[j].clamp(x[j]);
  return x;
}

// Projected L-BFGS descent on the merit function; bounds are handled by
// clamping along the search path.
Vector minimize_merit(const MiqcqpInstance& inst, const AugmentedLagrangian& al,
                      Vector x, int max_iters) {
  const Index n = inst.n_cont;
  if (n == 0) return x;
  x = project(inst, std::move(x));
  Vector g = al.gradient(x);

  std::deque<std::pair<Vector, Vector>> memory;  // (s, y)
  const int mem_cap = 8;

  auto two_loop = [&](Vector q) {
    std::vector<double> alpha(memory.size());
    for (int i = static_cast<int>(memory.size()) - 1; i >= 0; --i) {
      const auto& [s, yv] = memory[i];
      const double rho = 1.0 / yv.dot(s);
      alpha[i] = rho * s.dot(q);
      q -= alpha[i] * yv;
    }
    if (!memory.empty()) {
      const auto& [s, yv] = memory.back();
      q *= s.dot(yv) / yv.dot(yv);
    }
    for (size_t i = 0; i < memory.size(); ++i) {
      const auto& [s, yv] = memory[i];
      const double rho = 1.0 / yv.dot(s);
      const double beta = rho * yv.dot(q);
      q += (alpha[i] - beta) * s;
    }
    return q;
  };

  double fx = al.value(x);
  for (int iter = 0; iter < max_iters; ++iter) {
    const double pg = (x - project(inst, x - g)).cwiseAbs().maxCoeff();
    if (pg <= 1e-9 * (1.0 + std::abs(fx))) break;

    Vector d = -two_loop(g);
    if (d.dot(g) > -1e-12 * d.norm() * g.norm()) {
      memory.clear();
      d = -g;
    }

    double step = memory.empty() ? std::min(1.0, 1.0 / (1e-12 + g.cwiseAbs().maxCoeff())) : 1.0;
    bool accepted = false;
    Vector xn;
    double fn = 0.0;
    for (int bt = 0; bt < 40; ++bt) {
      xn = project(inst, x + step * d);
      fn = al.value(xn);
      const double decrease = g.dot(xn - x);
      if (fn <= fx + 1e-4 * decrease && xn != x) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      if (memory.empty()) break;
      memory.clear();
      continue;
    }
    Vector gn = al.gradient(xn);
    const Vector s = xn - x;
    const Vector yv = gn - g;
    if (s.dot(yv) > 1e-12 * s.norm() * yv.norm()) {
      memory.emplace_back(s, yv);
      if (static_cast<int>(memory.size()) > mem_cap) memory.pop_front();
    }
    x = std::move(xn);
    g = std::move(gn);
    fx = fn;
  }
  return x;
}

struct ContinuousSolveOutcome {
  Vector x;
  double objective = kInf;
  double violation = kInf;
  bool feasible = false;
  std::vector<double> best_trace;
};

// Outer augmented-Lagrangian loop: multiplier updates with penalty growth
// when infeasibility stalls.
ContinuousSolveOutcome solve_continuous(const MiqcqpInstance& inst,
                                        const std::vector<int>& binaries,
                                        Vector start) {
  AugmentedLagrangian al(inst, binaries);
  ContinuousSolveOutcome best;
  Vector x = project(inst, std::move(start));
  double prev_infeas = kInf;
  for (int outer = 0; outer < 8; ++outer) {
    x = minimize_merit(inst, al, x, 300);
    const double infeas = al.infeasibility(x);
    if (infeas <= kFeasTol) {
      const double obj = al.objective(x);
      if (!best.feasible || obj < best.objective) {
        best.feasible = true;
        best.objective = obj;
        best.x = x;
        best.violation = infeas;
      }
    }
    if (!best.feasible && infeas < best.violation) {
      best.violation = infeas;
      best.x = x;
    }
    best.best_trace.push_back(best.feasible ? best.objective : kInf);
    al.update_multipliers(x);
    if (infeas > 0.25 * prev_infeas)
      al.set_penalty(std::min(1e10, 10.0 * al.penalty()));
    prev_infeas = infeas;
  }
  return best;
}

}  // namespace

AugmentedLagrangian::AugmentedLagrangian(const MiqcqpInstance& inst,
                                         const std::vector<int>& binaries) {
  if (static_cast<Index>(binaries.size()) != inst.n_int)
    throw std::invalid_argument("AugmentedLagrangian: binary size mismatch");

  auto fold_y = [&](const std::vector<LinTerm>& lin_y) {
    double v = 0.0;
    for (const auto& t : lin_y) v += t.value * binaries[t.index];
    return v;
  };

  objective_.quad = inst.objective.quad;
  objective_.lin = inst.objective.lin_x;
  objective_.c0 = inst.objective.constant + fold_y(inst.objective.lin_y);

  auto add_row = [&](const std::vector<QuadEntry>& quad,
                     const std::vector<LinTerm>& lin_x, double c0, Sense sense) {
    if (sense == Sense::Equal) {
      rows_.push_back({quad, lin_x, c0, true});
      return;
    }
    CompiledRow row;
    const double sign = sense == Sense::LessEqual ? 1.0 : -1.0;
    row.quad = quad;
    for (auto& e : row.quad) e.value *= sign;
    row.lin = lin_x;
    for (auto& t : row.lin) t.value *= sign;
    row.c0 = sign * c0;
    row.equality = false;
    rows_.push_back(std::move(row));
  };

  for (const auto& qc : inst.quad_constraints)
    add_row(qc.form.quad, qc.form.lin_x,
            qc.form.constant + fold_y(qc.form.lin_y) - qc.rhs, qc.sense);
  for (const auto& lc : inst.lin_constraints)
    add_row({}, lc.lin_x, fold_y(lc.lin_y) - lc.rhs, lc.sense);
  lambda_.assign(rows_.size(), 0.0);
}

double AugmentedLagrangian::row_value(const CompiledRow& row,
                                      const Vector& x) const {
  double v = row.c0;
  for (const auto& e : row.quad) {
    const double xij = x[e.row] * x[e.col];
    v += e.row == e.col ? e.value * xij : 2.0 * e.value * xij;
  }
  for (const auto& t : row.lin) v += t.value * x[t.index];
  return v;
}

void AugmentedLagrangian::row_gradient(const CompiledRow& row, const Vector& x,
                                       double mult, Vector& grad) const {
  for (const auto& e : row.quad) {
    if (e.row == e.col) {
      grad[e.row] += mult * 2.0 * e.value * x[e.row];
    } else {
      grad[e.row] += mult * 2.0 * e.value * x[e.col];
      grad[e.col] += mult * 2.0 * e.value * x[e.row];
    }
  }
  for (const auto& t : row.lin) grad[t.index] += mult * t.value;
}

double AugmentedLagrangian::objective(const Vector& x) const {
  return row_value(objective_, x);
}

double AugmentedLagrangian::infeasibility(const Vector& x) const {
  double worst = 0.0;
  for (const auto& row : rows_) {
    const double v = row_value(row, x);
    worst = std::max(worst, row.equality ? std::abs(v) : v);
  }
  return worst;
}

double AugmentedLagrangian::value(const Vector& x) const {
  double v = row_value(objective_, x);
  for (size_t r = 0; r < rows_.size(); ++r) {
    const double c = row_value(rows_[r], x);
    if (rows_[r].equality) {
      v += lambda_[r] * c + 0.5 * rho_ * c * c;
    } else {
      const double t = std::max(0.0, lambda_[r] + rho_ * c);
      v += (t * t - lambda_[r] * lambda_[r]) / (2.0 * rho_);
    }
  }
  return v;
}

Vector AugmentedLagrangian::gradient(const Vector& x) const {
  Vector grad = Vector::Zero(x.size());
  row_gradient(objective_, x, 1.0, grad);
  for (size_t r = 0; r < rows_.size(); ++r) {
    const double c = row_value(rows_[r], x);
    const double mult = rows_[r].equality
                            ? lambda_[r] + rho_ * c
                            : std::max(0.0, lambda_[r] + rho_ * c);
    if (mult != 0.0) row_gradient(rows_[r], x, mult, grad);
  }
  return grad;
}

void AugmentedLagrangian::update_multipliers(const Vector& x) {
  for (size_t r = 0; r < rows_.size(); ++r) {
    const double c = row_value(rows_[r], x);
    lambda_[r] = rows_[r].equality
                     ? lambda_[r] + rho_ * c
                     : std::max(0.0, lambda_[r] + rho_ * c);
  }
}

LocalSolveResult local_solve(const LocalSolveRequest& request) {
  const auto t0 = Clock::now();
  const MiqcqpInstance& inst = *request.instance;
  if (static_cast<Index>(request.hint_binaries.size()) != inst.n_int)
    throw std::invalid_argument("local_solve: hint must cover every binary");

  std::vector<int> y = request.hint_binaries;
  if (!request.fixed_binaries.empty()) {
    if (static_cast<Index>(request.fixed_binaries.size()) != inst.n_int)
      throw std::invalid_argument("local_solve: fixings size mismatch");
    for (Index k = 0; k < inst.n_int; ++k)
      if (request.fixed_binaries[k] >= 0) y[k] = request.fixed_binaries[k];
  }

  Vector start = request.start_x.size() == inst.n_cont
                     ? request.start_x
                     : Vector::Zero(inst.n_cont);

  LocalSolveResult result;
  auto consider = [&](const ContinuousSolveOutcome& o,
                      const std::vector<int>& yvals) {
    for (double b : o.best_trace) result.best_trace.push_back(b);
    if (!o.feasible) {
      if (result.status != LocalStatus::Feasible &&
          o.violation < result.constraint_violation) {
        result.constraint_violation = o.violation;
        result.point.x = o.x;
        result.point.y = IntVector::Map(yvals.data(), yvals.size());
      }
      return false;
    }
    if (result.status != LocalStatus::Feasible ||
        o.objective < result.objective) {
      result.status = LocalStatus::Feasible;
      result.objective = o.objective;
      result.constraint_violation = o.violation;
      result.point.x = o.x;
      result.point.y = IntVector::Map(yvals.data(), yvals.size());
      return true;
    }
    return false;
  };

  consider(solve_continuous(inst, y, start), y);
  if (result.status == LocalStatus::Feasible &&
      result.objective < request.incumbent)
    return result;

  // One pass of single-flip neighborhood descent over the free binaries.
  for (Index k = 0; k < inst.n_int; ++k) {
    if (seconds_since(t0) > request.time_budget_s) break;
    if (!request.fixed_binaries.empty() && request.fixed_binaries[k] >= 0)
      continue;
    std::vector<int> flipped = y;
    flipped[k] = 1 - flipped[k];
    const Vector flip_start =
        result.point.x.size() == inst.n_cont ? result.point.x : start;
    ContinuousSolveOutcome o = solve_continuous(inst, flipped, flip_start);
    const double before = result.objective;
    if (o.feasible && (result.status != LocalStatus::Feasible ||
                       o.objective < before - 1e-9)) {
      consider(o, flipped);
      y = flipped;
      if (result.objective < request.incumbent) return result;
    }
  }
  // Keep the trace monotone across phases.
  double best = kInf;
  for (auto& b : result.best_trace) {
    best = std::min(best, b);
    b = best;
  }
  return result;
}

Vector extract_start_from_sdp(const ConicSolution& solution,
                              const SdpProblem& problem) {
  const Index n = static_cast<Index>(problem.cont_owner_block.size());
  Vector x = Vector::Zero(n);
  std::vector<bool> assigned(n, false);

  for (Index j = 0; j < n; ++j) {
    if (problem.cont_scalar[j] >= 0) {
      x[j] = solution.scalar_values[problem.cont_scalar[j]];
      assigned[j] = true;
    } else if (problem.cont_owner_block[j] >= 0 &&
               problem.blocks[problem.cont_owner_block[j]].x_row_meaningful) {
      x[j] = solution.block_values[problem.cont_owner_block[j]](
          0, problem.cont_block_row[j]);
      assigned[j] = true;
    }
  }

  // Pure-W moment blocks: take the scaled leading eigenvector of the W part
  // and stitch signs across block overlaps, averaging shared entries.
  std::vector<int> pure;
  for (size_t b = 0; b < problem.blocks.size(); ++b)
    if (problem.blocks[b].kind == BlockKind::Moment &&
        !problem.blocks[b].x_row_meaningful && !problem.blocks[b].vars.empty())
      pure.push_back(static_cast<int>(b));
  if (pure.empty()) return x;

  Vector sum = Vector::Zero(n);
  Vector count = Vector::Zero(n);
  std::vector<bool> done(problem.blocks.size(), false);

  auto block_vector = [&](int b) {
    const auto& info = problem.blocks[b];
    const int nb = static_cast<int>(info.vars.size());
    const Matrix W = solution.block_values[b].bottomRightCorner(nb, nb);
    Eigen::SelfAdjointEigenSolver<Matrix> es(W);
    const double lmax = std::max(0.0, es.eigenvalues()(nb - 1));
    Vector v = std::sqrt(lmax) * es.eigenvectors().col(nb - 1);
    return v;
  };

  for (int root : pure) {
    if (done[root]) continue;
    // BFS over pure blocks sharing variables.
    std::deque<int> queue = {root};
    done[root] = true;
    while (!queue.empty()) {
      const int b = queue.front();
      queue.pop_front();
      Vector v = block_vector(b);
      const auto& vars = problem.blocks[b].vars;
      double agree = 0.0;
      for (size_t r = 0; r < vars.size(); ++r)
        if (count[vars[r]] > 0 || assigned[vars[r]]) {
          const double ref = count[vars[r]] > 0
                                 ? sum[vars[r]] / count[vars[r]]
                                 : x[vars[r]];
          agree += v[static_cast<Index>(r)] * ref;
        }
      if (agree < 0.0) {
        v = -v;
      } else if (agree == 0.0) {
        for (Index r = 0; r < v.size(); ++r) {
          if (std::abs(v[r]) > 1e-9) {
            if (v[r] < 0.0) v = -v;
            break;
          }
        }
      }
      for (size_t r = 0; r < vars.size(); ++r) {
        sum[vars[r]] += v[static_cast<Index>(r)];
        count[vars[r]] += 1.0;
      }
      for (int other : pure) {
        if (done[other]) continue;
        bool shares = false;
        for (Index u : problem.blocks[other].vars)
          if (count[u] > 0) shares = true;
        if (shares) {
          done[other] = true;
          queue.push_back(other);
        }
      }
    }
  }
  for (Index j = 0; j < n; ++j)
    if (!assigned[j] && count[j] > 0) x[j] = sum[j] / count[j];
  return x;
}

}  // namespace miqs
