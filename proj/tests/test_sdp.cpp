#include <doctest.h>

#include <cmath>

#include "miqs/sdp.hpp"

using namespace miqs;

namespace {

SdpProblem trace_problem() {
  // min trace(W) s.t. W(0,0) = 1, W psd of size 2; optimum 1 at e0 e0^T.
  SdpProblem p;
  p.blocks.push_back({2, BlockKind::Moment, "W", {}, false});
  p.objective.entries = {{0, 0, 0, 1.0}, {0, 1, 1, 1.0}};
  LinearRow anchor;
  anchor.entries = {{0, 0, 0, 1.0}};
  anchor.sense = Sense::Equal;
  anchor.rhs = 1.0;
  p.rows.push_back(anchor);
  return p;
}

SdpProblem arrow_problem() {
  // min -x - y s.t. x^2 + y^2 <= 4 encoded as a normalized arrow block.
  SdpProblem p;
  p.blocks.push_back({3, BlockKind::SocArrow, "soc", {}, false});
  p.scalars.push_back({{-2.0, 2.0}, ScalarInfo::Role::ContVar, 0, "x"});
  p.scalars.push_back({{-2.0, 2.0}, ScalarInfo::Role::ContVar, 1, "y"});
  auto fixed = [&](int r, int c, double v) {
    LinearRow row;
    row.entries = {{0, r, c, 1.0}};
    row.sense = Sense::Equal;
    row.rhs = v;
    p.rows.push_back(row);
  };
  fixed(0, 0, 1.0);
  fixed(1, 1, 1.0);
  fixed(2, 2, 1.0);
  fixed(1, 2, 0.0);
  LinearRow lx;
  lx.entries = {{0, 0, 1, 2.0}};
  lx.scalars = {{0, -1.0}};
  lx.sense = Sense::Equal;
  p.rows.push_back(lx);
  LinearRow ly;
  ly.entries = {{0, 0, 2, 2.0}};
  ly.scalars = {{1, -1.0}};
  ly.sense = Sense::Equal;
  p.rows.push_back(ly);
  p.objective.scalars = {{0, -1.0}, {1, -1.0}};
  return p;
}

}  // namespace

TEST_CASE("analytic optimum of the trace problem") {
  const auto sol = solve(trace_problem(), {});
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(sol.block_values[0](0, 0) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(sol.block_values[0](1, 1) == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(check_solution(trace_problem(), sol, 1e-6).empty());
}

TEST_CASE("conflicting anchors are reported primal infeasible") {
  SdpProblem p = trace_problem();
  LinearRow conflict;
  conflict.entries = {{0, 0, 0, 1.0}};
  conflict.sense = Sense::Equal;
  conflict.rhs = 2.0;
  p.rows.push_back(conflict);
  const auto sol = solve(p, {});
  CHECK(sol.status == SolveStatus::PrimalInfeasible);
}

TEST_CASE("pure scalar linear program") {
  SdpProblem p;
  p.scalars.push_back({{0.0, 2.0}, ScalarInfo::Role::ContVar, 0, "x"});
  LinearRow cap;
  cap.scalars = {{0, 1.0}};
  cap.sense = Sense::LessEqual;
  cap.rhs = 1.5;
  p.rows.push_back(cap);
  p.objective.scalars = {{0, -1.0}};
  const auto sol = solve(p, {});
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(-1.5).epsilon(1e-7));
  CHECK(sol.scalar_values[0] == doctest::Approx(1.5).epsilon(1e-6));
}

TEST_CASE("second-order-cone arrow block") {
  const auto sol = solve(arrow_problem(), {});
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.objective ==
        doctest::Approx(-2.0 * std::sqrt(2.0)).epsilon(1e-6));
  CHECK(sol.scalar_values[0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-5));
  CHECK(check_solution(arrow_problem(), sol, 1e-6).empty());
}

TEST_CASE("unbounded problem is flagged dual infeasible") {
  // min -W(1,1) with only the anchor constraint; W(1,1) can grow freely.
  SdpProblem p = trace_problem();
  p.objective.entries = {{0, 1, 1, -1.0}};
  const auto sol = solve(p, {});
  CHECK(sol.status == SolveStatus::DualInfeasible);
}

TEST_CASE("weak duality holds on near-feasible logged iterations") {
  std::vector<IterTrace> trace;
  SolverSettings settings;
  settings.trace = &trace;
  const auto sol = solve(arrow_problem(), settings);
  REQUIRE(sol.status == SolveStatus::Optimal);
  REQUIRE(!trace.empty());
  for (const auto& it : trace) {
    if (it.residual_primal > 1e-7 || it.residual_dual > 1e-7) continue;
    CHECK(it.dual_obj <= it.primal_obj + 1e-6 * (1.0 + std::abs(it.primal_obj)));
  }
}

TEST_CASE("identical inputs give identical iterate sequences") {
  std::vector<IterTrace> t1, t2;
  SolverSettings s1, s2;
  s1.trace = &t1;
  s2.trace = &t2;
  solve(arrow_problem(), s1);
  solve(arrow_problem(), s2);
  REQUIRE(t1.size() == t2.size());
  for (size_t k = 0; k < t1.size(); ++k) {
    CHECK(t1[k].primal_obj == t2[k].primal_obj);
    CHECK(t1[k].dual_obj == t2[k].dual_obj);
    CHECK(t1[k].mu == t2[k].mu);
  }
}

TEST_CASE("objective scaling leaves the argmin unchanged") {
  SolverSettings tight;
  tight.rel_gap_tol = 1e-10;
  const auto base = solve(arrow_problem(), tight);
  SdpProblem scaled = arrow_problem();
  for (auto& t : scaled.objective.scalars) t.coeff *= 7.5;
  for (auto& t : scaled.objective.entries) t.coeff *= 7.5;
  const auto sol = solve(scaled, tight);
  REQUIRE(base.status == SolveStatus::Optimal);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(7.5 * base.objective).epsilon(1e-7));
  for (int b = 0; b < 1; ++b)
    CHECK((sol.block_values[b] - base.block_values[b]).cwiseAbs().maxCoeff() <=
          1e-5);
}

TEST_CASE("permuting block order permutes the solution blocks") {
  // Two independent copies of the trace problem in one solve.
  SdpProblem p;
  p.blocks.push_back({2, BlockKind::Moment, "A", {}, false});
  p.blocks.push_back({3, BlockKind::Moment, "B", {}, false});
  for (int b = 0; b < 2; ++b) {
    LinearRow anchor;
    anchor.entries = {{b, 0, 0, 1.0}};
    anchor.sense = Sense::Equal;
    anchor.rhs = b == 0 ? 1.0 : 2.0;
    p.rows.push_back(anchor);
    for (int d = 0; d < p.blocks[b].size; ++d)
      p.objective.entries.push_back({b, d, d, 1.0});
  }
  SdpProblem q = p;
  std::swap(q.blocks[0], q.blocks[1]);
  for (auto& r : q.rows)
    for (auto& t : r.entries) t.block = 1 - t.block;
  for (auto& t : q.objective.entries) t.block = 1 - t.block;

  SolverSettings tight;
  tight.rel_gap_tol = 1e-10;
  const auto sp = solve(p, tight);
  const auto sq = solve(q, tight);
  REQUIRE(sp.status == SolveStatus::Optimal);
  REQUIRE(sq.status == SolveStatus::Optimal);
  CHECK(std::abs(sp.objective - sq.objective) <= 1e-9 * (1 + std::abs(sp.objective)));
  CHECK((sp.block_values[0] - sq.block_values[1]).cwiseAbs().maxCoeff() <= 1e-6);
  CHECK((sp.block_values[1] - sq.block_values[0]).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("check_solution flags doctored outputs") {
  const auto p = trace_problem();
  auto sol = solve(p, {});
  REQUIRE(sol.status == SolveStatus::Optimal);

  auto bad_psd = sol;
  bad_psd.block_values[0](0, 1) = bad_psd.block_values[0](1, 0) = 0.5;
  bad_psd.block_values[0](1, 1) = 0.0;  // eigenvalue ~ -0.2
  bool saw_psd = false;
  for (const auto& v : check_solution(p, bad_psd, 1e-6))
    if (v.find("eigenvalue") != std::string::npos) saw_psd = true;
  CHECK(saw_psd);

  auto bad_gap = sol;
  bad_gap.gap = 1e-5;
  bool saw_gap = false;
  for (const auto& v : check_solution(p, bad_gap, 1e-6))
    if (v.find("gap") != std::string::npos) saw_gap = true;
  CHECK(saw_gap);
}

TEST_CASE("empty blocks are rejected") {
  SdpProblem p;
  p.blocks.push_back({0, BlockKind::Moment, "bad", {}, false});
  CHECK_THROWS_AS(solve(p, {}), std::invalid_argument);
}

TEST_CASE("time limit yields iteration_limit status") {
  SolverSettings s;
  s.time_limit_s = 0.0;
  const auto sol = solve(arrow_problem(), s);
  CHECK(sol.status == SolveStatus::IterationLimit);
}
