#pragma once

#include <random>

#include "miqs/model.hpp"

namespace miqs::testing {

/// The six-variable polynomial example used across the sparsity tests:
///   x1 x4 + x2 x5 - x1 x2 - x4 x5 + x0 (-x0 + x1 + x2 - x3 + x4 + x5)
inline QuadraticForm ring_polynomial() {
  QuadraticForm f;
  f.add_monomial(1, 4, 1.0);
  f.add_monomial(2, 5, 1.0);
  f.add_monomial(1, 2, -1.0);
  f.add_monomial(4, 5, -1.0);
  f.add_monomial(0, 0, -1.0);
  f.add_monomial(0, 1, 1.0);
  f.add_monomial(0, 2, 1.0);
  f.add_monomial(0, 3, -1.0);
  f.add_monomial(0, 4, 1.0);
  f.add_monomial(0, 5, 1.0);
  f.canonicalize();
  return f;
}

inline MiqcqpInstance ring_instance() {
  MiqcqpInstance inst;
  inst.n_cont = 6;
  inst.cont_bounds.assign(6, {-1.0, 1.0});
  inst.objective = ring_polynomial();
  inst.label = "ring6";
  return inst;
}

/// min -x0*x1 over the unit box; optimum -1 at (1, 1).
inline MiqcqpInstance bilinear_box_instance() {
  MiqcqpInstance inst;
  inst.n_cont = 2;
  inst.cont_bounds.assign(2, {0.0, 1.0});
  inst.objective.add_monomial(0, 1, -1.0);
  inst.objective.canonicalize();
  inst.label = "bilinear";
  return inst;
}

/// Random sparse continuous QCQP on a box, inequality constraints only.
inline MiqcqpInstance random_qcqp(std::mt19937& rng, int n, double density) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> prob(0.0, 1.0);
  MiqcqpInstance inst;
  inst.n_cont = n;
  inst.cont_bounds.assign(n, {-1.0, 1.0});
  for (int i = 0; i < n; ++i) {
    inst.objective.add_monomial(i, i, unit(rng));
    inst.objective.add_lin_x(i, unit(rng));
  }
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (prob(rng) < density) edges.push_back({i, j});
  for (const auto& [i, j] : edges) inst.objective.add_monomial(i, j, unit(rng));

  // A couple of quadratic inequality constraints on the same support, kept
  // feasible at the origin.
  const int n_quad = 1 + static_cast<int>(prob(rng) * 2);
  for (int k = 0; k < n_quad; ++k) {
    QuadConstraint qc;
    for (const auto& [i, j] : edges)
      if (prob(rng) < 0.6) qc.form.add_monomial(i, j, unit(rng));
    for (int i = 0; i < n; ++i)
      if (prob(rng) < 0.5) qc.form.add_monomial(i, i, unit(rng));
    qc.form.canonicalize();
    qc.sense = Sense::LessEqual;
    qc.rhs = 0.5 + prob(rng);  // strictly feasible at x = 0
    if (!qc.form.quad.empty()) inst.quad_constraints.push_back(qc);
  }
  inst.objective.canonicalize();
  inst.label = "random_qcqp";
  return inst;
}

/// Random tiny MIQCQP: binaries enter linearly, the origin stays feasible.
inline MiqcqpInstance random_miqcqp(std::mt19937& rng, int n_cont, int n_int,
                                    double density) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> prob(0.0, 1.0);
  MiqcqpInstance inst = random_qcqp(rng, n_cont, density);
  inst.n_int = n_int;
  inst.int_bounds.assign(n_int, {0.0, 1.0});
  for (int k = 0; k < n_int; ++k) inst.objective.add_lin_y(k, unit(rng));
  for (auto& qc : inst.quad_constraints)
    for (int k = 0; k < n_int; ++k)
      if (prob(rng) < 0.4) qc.form.add_lin_y(k, 0.5 * unit(rng));
  // One linear coupling row, feasible at the all-zero point.
  LinearConstraint lc;
  for (int i = 0; i < n_cont; ++i)
    if (prob(rng) < 0.6) lc.lin_x.push_back({i, unit(rng)});
  for (int k = 0; k < n_int; ++k)
    if (prob(rng) < 0.6) lc.lin_y.push_back({k, unit(rng)});
  lc.sense = Sense::LessEqual;
  lc.rhs = 0.5 + prob(rng);
  if (!lc.lin_x.empty() || !lc.lin_y.empty()) inst.lin_constraints.push_back(lc);
  inst.objective.canonicalize();
  inst.canonicalize();
  inst.label = "random_miqcqp";
  return inst;
}

}  // namespace miqs::testing
