#include <doctest.h>

#include "miqs/model.hpp"
#include "test_helpers.hpp"

using namespace miqs;

namespace {

Assignment point(std::initializer_list<double> xs,
                 std::initializer_list<int> ys = {}) {
  Assignment p;
  p.x = Vector::Zero(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double v : xs) p.x[i++] = v;
  p.y = IntVector::Zero(static_cast<Index>(ys.size()));
  i = 0;
  for (int v : ys) p.y[i++] = v;
  return p;
}

}  // namespace

TEST_CASE("validate accepts a well-formed two-variable instance") {
  MiqcqpInstance inst;
  inst.n_cont = 2;
  inst.cont_bounds.assign(2, {-1.0, 1.0});
  inst.objective.add_monomial(0, 1, 1.0);
  CHECK(validate(inst).empty());
}

TEST_CASE("validate flags inverted bounds") {
  MiqcqpInstance inst;
  inst.n_cont = 1;
  inst.cont_bounds = {{1.0, 0.0}};
  const auto v = validate(inst);
  REQUIRE(v.size() == 1);
  CHECK(v[0].index == 0);
  CHECK(v[0].what.find("empty") != std::string::npos);
}

TEST_CASE("validate flags quadratic coupling into the integer range") {
  MiqcqpInstance inst;
  inst.n_cont = 1;
  inst.n_int = 1;
  inst.cont_bounds = {{0.0, 1.0}};
  inst.int_bounds = {{0.0, 1.0}};
  inst.objective.add_monomial(0, 1, 1.0);  // index 1 is the binary
  const auto v = validate(inst);
  REQUIRE(v.size() == 1);
  CHECK(v[0].what.find("integer") != std::string::npos);
}

TEST_CASE("validate rejects non-binary integer variables") {
  MiqcqpInstance inst;
  inst.n_int = 1;
  inst.int_bounds = {{0.0, 3.0}};
  const auto v = validate(inst);
  REQUIRE(v.size() == 1);
  CHECK(v[0].what.find("binar") != std::string::npos);
}

TEST_CASE("evaluate: sum of squares") {
  QuadraticForm f;
  f.add_quad_entry(0, 0, 1.0);
  f.add_quad_entry(1, 1, 1.0);
  CHECK(evaluate(f, point({1.0, 2.0})) == doctest::Approx(5.0));
}

TEST_CASE("evaluate: ring polynomial at special points") {
  const QuadraticForm f = testing::ring_polynomial();
  CHECK(evaluate(f, point({0, 0, 0, 0, 0, 0})) == doctest::Approx(0.0));
  CHECK(evaluate(f, point({1, 0, 0, 0, 0, 0})) == doctest::Approx(-1.0));
}

TEST_CASE("evaluate is invariant under explicit symmetrization") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    QuadraticForm f;
    QuadraticForm g;
    for (int k = 0; k < 6; ++k) {
      const Index i = static_cast<Index>(rng() % 4);
      const Index j = static_cast<Index>(rng() % 4);
      const double v = unit(rng);
      f.add_quad_entry(i, j, v);
      // Split the entry over both triangle positions.
      g.add_quad_entry(i, j, 0.5 * v);
      g.add_quad_entry(j, i, 0.5 * v);
    }
    Assignment p = point({unit(rng), unit(rng), unit(rng), unit(rng)});
    CHECK(evaluate(f, p) == doctest::Approx(evaluate(g, p)).epsilon(1e-12));
  }
}

TEST_CASE("evaluate throws on dimension mismatch") {
  QuadraticForm f;
  f.add_quad_entry(3, 3, 1.0);
  CHECK_THROWS_AS(evaluate(f, point({1.0})), std::invalid_argument);
}

TEST_CASE("is_feasible boundary behavior around the tolerance") {
  MiqcqpInstance inst;
  inst.n_cont = 1;
  inst.cont_bounds = {{0.0, 10.0}};
  LinearConstraint lc;
  lc.lin_x = {{0, 1.0}};
  lc.sense = Sense::LessEqual;
  lc.rhs = 1.0;
  inst.lin_constraints.push_back(lc);

  const double tol = 1e-4;
  CHECK(is_feasible(inst, point({1.0 + 2.0 * tol}), tol) == false);
  CHECK(is_feasible(inst, point({1.0 + 0.5 * tol}), tol) == true);

  MiqcqpInstance free_inst;
  free_inst.n_cont = 1;
  free_inst.cont_bounds = {{-kInf, kInf}};
  CHECK(is_feasible(free_inst, point({123.0}), 0.0));
}

TEST_CASE("brute force: unconstrained parabola") {
  MiqcqpInstance inst;
  inst.n_cont = 1;
  inst.cont_bounds = {{-1.0, 2.0}};
  inst.objective.add_quad_entry(0, 0, 1.0);
  const auto r = brute_force_solve(inst, 7, 40);
  REQUIRE(r.found);
  CHECK(r.value == doctest::Approx(0.0).epsilon(1e-8));
  CHECK(r.best.x[0] == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("brute force: mixed-binary toy") {
  // min (x-1)^2 + y subject to x >= y, x in [0,2], y binary.
  MiqcqpInstance inst;
  inst.n_cont = 1;
  inst.n_int = 1;
  inst.cont_bounds = {{0.0, 2.0}};
  inst.int_bounds = {{0.0, 1.0}};
  inst.objective.add_quad_entry(0, 0, 1.0);
  inst.objective.add_lin_x(0, -2.0);
  inst.objective.add_lin_y(0, 1.0);
  inst.objective.constant = 1.0;
  LinearConstraint lc;
  lc.lin_x = {{0, -1.0}};
  lc.lin_y = {{0, 1.0}};
  lc.sense = Sense::LessEqual;
  lc.rhs = 0.0;
  inst.lin_constraints.push_back(lc);

  const auto r = brute_force_solve(inst, 9, 40);
  REQUIRE(r.found);
  CHECK(r.value == doctest::Approx(0.0).epsilon(1e-8));
  CHECK(r.best.y[0] == 0);
  CHECK(r.best.x[0] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("brute force: bilinear maximum at a corner") {
  const auto inst = testing::bilinear_box_instance();
  const auto r = brute_force_solve(inst, 5, 40);
  REQUIRE(r.found);
  CHECK(r.value == doctest::Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("brute force result is feasible at tolerance") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const auto inst = testing::random_miqcqp(rng, 3, 3, 0.5);
    const auto r = brute_force_solve(inst, 7, 30);
    if (r.found) CHECK(is_feasible(inst, r.best, 1e-6));
  }
}

TEST_CASE("brute force value is non-increasing on nested grids") {
  std::mt19937 rng(13);
  for (int trial = 0; trial < 8; ++trial) {
    const auto inst = testing::random_qcqp(rng, 3, 0.6);
    // Nested densities (5 refines 3, 9 refines 5) with no local refinement.
    const auto r3 = brute_force_solve(inst, 3, 0);
    const auto r5 = brute_force_solve(inst, 5, 0);
    const auto r9 = brute_force_solve(inst, 9, 0);
    if (r3.found) {
      REQUIRE(r5.found);
      CHECK(r5.value <= r3.value + 1e-12);
    }
    if (r5.found) {
      REQUIRE(r9.found);
      CHECK(r9.value <= r5.value + 1e-12);
    }
  }
}

TEST_CASE("brute force guard rejects oversized instances") {
  MiqcqpInstance inst;
  inst.n_cont = 5;
  inst.cont_bounds.assign(5, {0.0, 1.0});
  CHECK_THROWS_AS(brute_force_solve(inst, 3, 0), std::invalid_argument);
}
