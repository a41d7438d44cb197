#include "miqs/model.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace miqs {

void QuadraticForm::add_quad_entry(Index i, Index j, double v) {
  if (i > j) std::swap(i, j);
  quad.push_back({i, j, v});
}

void QuadraticForm::add_monomial(Index i, Index j, double c) {
  if (i == j) {
    add_quad_entry(i, j, c);
  } else {
    add_quad_entry(i, j, 0.5 * c);
  }
}

void QuadraticForm::add_lin_x(Index i, double v) { lin_x.push_back({i, v}); }
void QuadraticForm::add_lin_y(Index i, double v) { lin_y.push_back({i, v}); }

namespace {

void merge_lin(std::vector<LinTerm>& terms) {
  std::map<Index, double> acc;
  for (const auto& t : terms) acc[t.index] += t.value;
  terms.clear();
  for (const auto& [i, v] : acc)
    if (v != 0.0) terms.push_back({i, v});
}

}  // namespace

void QuadraticForm::canonicalize() {
  std::map<std::pair<Index, Index>, double> acc;
  for (const auto& e : quad) {
    auto key = std::minmax(e.row, e.col);
    acc[{key.first, key.second}] += e.value;
  }
  quad.clear();
  for (const auto& [ij, v] : acc)
    if (v != 0.0) quad.push_back({ij.first, ij.second, v});
  merge_lin(lin_x);
  merge_lin(lin_y);
}

double QuadraticForm::quad_entry(Index i, Index j) const {
  if (i > j) std::swap(i, j);
  double v = 0.0;
  for (const auto& e : quad)
    if (e.row == i && e.col == j) v += e.value;
  return v;
}

void MiqcqpInstance::canonicalize() {
  objective.canonicalize();
  for (auto& c : quad_constraints) c.form.canonicalize();
  for (auto& c : lin_constraints) {
    merge_lin(c.lin_x);
    merge_lin(c.lin_y);
  }
}

namespace {

void check_form_indices(const QuadraticForm& form, Index n_cont, Index n_int,
                        const std::string& where,
                        std::vector<Violation>& out) {
  for (const auto& e : form.quad) {
    for (Index idx : {e.row, e.col}) {
      if (idx < 0 || idx >= n_cont + n_int) {
        out.push_back({where + ": quadratic entry index out of range", idx});
      } else if (idx >= n_cont) {
        out.push_back({where +
                           ": quadratic entry couples an integer variable; "
                           "integer variables may only appear linearly",
                       idx});
      }
    }
  }
  for (const auto& t : form.lin_x)
    if (t.index < 0 || t.index >= n_cont)
      out.push_back({where + ": lin_x index out of range", t.index});
  for (const auto& t : form.lin_y)
    if (t.index < 0 || t.index >= n_int)
      out.push_back({where + ": lin_y index out of range", t.index});
}

}  // namespace

std::vector<Violation> validate(const MiqcqpInstance& inst) {
  std::vector<Violation> out;
  if (inst.n_cont < 0 || inst.n_int < 0)
    out.push_back({"negative variable count", -1});
  if (static_cast<Index>(inst.cont_bounds.size()) != inst.n_cont)
    out.push_back({"cont_bounds size mismatch", -1});
  if (static_cast<Index>(inst.int_bounds.size()) != inst.n_int)
    out.push_back({"int_bounds size mismatch", -1});

  for (Index i = 0; i < static_cast<Index>(inst.cont_bounds.size()); ++i)
    if (inst.cont_bounds[i].empty())
      out.push_back({"empty continuous bound interval", i});
  for (Index i = 0; i < static_cast<Index>(inst.int_bounds.size()); ++i) {
    const auto& b = inst.int_bounds[i];
    if (b.empty()) out.push_back({"empty integer bound interval", i});
    else if (b.lo != 0.0 || b.hi != 1.0)
      out.push_back(
          {"integer variable is not binary; only binaries are supported", i});
  }

  check_form_indices(inst.objective, inst.n_cont, inst.n_int, "objective", out);
  for (size_t c = 0; c < inst.quad_constraints.size(); ++c) {
    std::ostringstream ss;
    ss << "quad constraint " << c;
    check_form_indices(inst.quad_constraints[c].form, inst.n_cont, inst.n_int,
                       ss.str(), out);
  }
  for (size_t c = 0; c < inst.lin_constraints.size(); ++c) {
    std::ostringstream ss;
    ss << "lin constraint " << c;
    const auto& lc = inst.lin_constraints[c];
    for (const auto& t : lc.lin_x)
      if (t.index < 0 || t.index >= inst.n_cont)
        out.push_back({ss.str() + ": lin_x index out of range", t.index});
    for (const auto& t : lc.lin_y)
      if (t.index < 0 || t.index >= inst.n_int)
        out.push_back({ss.str() + ": lin_y index out of range", t.index});
  }
  return out;
}

double evaluate(const QuadraticForm& form, const Assignment& point) {
  for (const auto& e : form.quad)
    if (e.col >= point.x.size())
      throw std::invalid_argument("evaluate: continuous dimension mismatch");
  for (const auto& t : form.lin_x)
    if (t.index >= point.x.size())
      throw std::invalid_argument("evaluate: continuous dimension mismatch");
  for (const auto& t : form.lin_y)
    if (t.index >= point.y.size())
      throw std::invalid_argument("evaluate: integer dimension mismatch");

  double v = form.constant;
  for (const auto& e : form.quad) {
    const double xij = point.x[e.row] * point.x[e.col];
    v += (e.row == e.col) ? e.value * xij : 2.0 * e.value * xij;
  }
  for (const auto& t : form.lin_x) v += t.value * point.x[t.index];
  for (const auto& t : form.lin_y) v += t.value * point.y[t.index];
  return v;
}

namespace {

double lin_value(const std::vector<LinTerm>& lx, const std::vector<LinTerm>& ly,
                 const Assignment& p) {
  double v = 0.0;
  for (const auto& t : lx) v += t.value * p.x[t.index];
  for (const auto& t : ly) v += t.value * p.y[t.index];
  return v;
}

}  // namespace

double max_violation(const MiqcqpInstance& inst, const Assignment& point) {
  if (point.x.size() != inst.n_cont || point.y.size() != inst.n_int)
    throw std::invalid_argument("max_violation: dimension mismatch");
  double worst = 0.0;
  for (Index i = 0; i < inst.n_cont; ++i) {
    worst = std::max(worst, inst.cont_bounds[i].lo - point.x[i]);
    worst = std::max(worst, point.x[i] - inst.cont_bounds[i].hi);
  }
  for (Index i = 0; i < inst.n_int; ++i) {
    const double y = static_cast<double>(point.y[i]);
    worst = std::max(worst, inst.int_bounds[i].lo - y);
    worst = std::max(worst, y - inst.int_bounds[i].hi);
  }
  for (const auto& qc : inst.quad_constraints)
    worst = std::max(worst,
                     sense_violation(qc.sense, evaluate(qc.form, point), qc.rhs));
  for (const auto& lc : inst.lin_constraints)
    worst = std::max(
        worst, sense_violation(lc.sense, lin_value(lc.lin_x, lc.lin_y, point),
                               lc.rhs));
  return worst;
}

bool is_feasible(const MiqcqpInstance& inst, const Assignment& point,
                 double tol) {
  return max_violation(inst, point) <= tol;
}

}  // namespace miqs
