#include <stdexcept>

#include "miqs/model.hpp"

namespace miqs {

namespace {

constexpr double kOracleFeasTol = 1e-6;

double objective_at(const MiqcqpInstance& inst, const Assignment& p) {
  return evaluate(inst.objective, p);
}

// Cyclic coordinate descent with halving steps; only feasible improving
// moves are accepted, so the incumbent stays feasible throughout.
void refine(const MiqcqpInstance& inst, Assignment& p, double& value,
            double initial_step, int halvings) {
  if (inst.n_cont == 0 || halvings <= 0) return;
  double step = initial_step;
  for (int level = 0; level < halvings; ++level) {
    bool improved = true;
    int guard = 0;
    while (improved && guard++ < 50) {
      improved = false;
      for (Index k = 0; k < inst.n_cont; ++k) {
        for (double dir : {+1.0, -1.0}) {
          Assignment trial = p;
          trial.x[k] = inst.cont_bounds[k].clamp(p.x[k] + dir * step);
          if (trial.x[k] == p.x[k]) continue;
          if (!is_feasible(inst, trial, kOracleFeasTol)) continue;
          const double v = objective_at(inst, trial);
          if (v < value - 1e-14) {
            p = trial;
            value = v;
            improved = true;
          }
        }
      }
    }
    step *= 0.5;
  }
}

}  // namespace

OracleResult brute_force_solve(const MiqcqpInstance& inst, int grid_density,
                               int refine_steps) {
  if (inst.n_int > 12 || inst.n_cont > 4)
    throw std::invalid_argument(
        "brute_force_solve: instance exceeds the n_int <= 12 / n_cont <= 4 "
        "guard");
  if (grid_density < 1)
    throw std::invalid_argument("brute_force_solve: grid_density must be >= 1");
  for (const auto& b : inst.cont_bounds)
    if (!b.finite())
      throw std::invalid_argument(
          "brute_force_solve: all continuous variables must be bounded");
  for (const auto& b : inst.int_bounds)
    if (!b.finite())
      throw std::invalid_argument(
          "brute_force_solve: all integer variables must be bounded");

  // Integer ranges; total combination count is guarded.
  std::vector<int> lo(inst.n_int), hi(inst.n_int);
  long combos = 1;
  for (Index i = 0; i < inst.n_int; ++i) {
    lo[i] = static_cast<int>(std::ceil(inst.int_bounds[i].lo));
    hi[i] = static_cast<int>(std::floor(inst.int_bounds[i].hi));
    if (lo[i] > hi[i]) return {};  // empty integer box
    combos *= hi[i] - lo[i] + 1;
    if (combos > 4096)
      throw std::invalid_argument(
          "brute_force_solve: too many integer combinations");
  }

  OracleResult result;
  Assignment p;
  p.x = Vector::Zero(inst.n_cont);
  p.y = IntVector::Zero(inst.n_int);

  std::vector<double> grid_step(inst.n_cont, 0.0);
  for (Index k = 0; k < inst.n_cont; ++k)
    grid_step[k] = grid_density > 1
                       ? inst.cont_bounds[k].width() / (grid_density - 1)
                       : 0.0;

  auto grid_point = [&](Index k, int g) {
    const auto& b = inst.cont_bounds[k];
    if (grid_density == 1) return 0.5 * (b.lo + b.hi);
    return b.lo + g * grid_step[k];
  };

  for (long code = 0; code < combos; ++code) {
    long rest = code;
    for (Index i = 0; i < inst.n_int; ++i) {
      const int span = hi[i] - lo[i] + 1;
      p.y[i] = lo[i] + static_cast<int>(rest % span);
      rest /= span;
    }

    // Best feasible grid point for this integer assignment.
    bool have_local = false;
    Assignment local_best;
    double local_value = kInf;
    const long grid_total = [&] {
      long t = 1;
      for (Index k = 0; k < inst.n_cont; ++k) t *= grid_density;
      return t;
    }();
    for (long gcode = 0; gcode < grid_total; ++gcode) {
      long grest = gcode;
      for (Index k = 0; k < inst.n_cont; ++k) {
        p.x[k] = grid_point(k, static_cast<int>(grest % grid_density));
        grest /= grid_density;
      }
      if (!is_feasible(inst, p, kOracleFeasTol)) continue;
      const double v = objective_at(inst, p);
      if (!have_local || v < local_value) {
        have_local = true;
        local_best = p;
        local_value = v;
      }
    }
    if (!have_local) continue;

    double step0 = 0.0;
    for (Index k = 0; k < inst.n_cont; ++k)
      step0 = std::max(step0, grid_density > 1
                                  ? grid_step[k]
                                  : 0.5 * inst.cont_bounds[k].width());
    refine(inst, local_best, local_value, step0, refine_steps);

    if (!result.found || local_value < result.value) {
      result.found = true;
      result.best = local_best;
      result.value = local_value;
    }
  }
  return result;
}

}  // namespace miqs
