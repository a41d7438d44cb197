#include "miqs/relax.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace miqs {

namespace {

struct Analysis {
  std::vector<bool> linear_presence;
  std::vector<bool> lifted;
  std::vector<bool> epigraph;
  std::vector<double> epi_coeff;  // objective coefficient of x_j^2
  std::vector<bool> arrow_row;    // per quadratic constraint
  std::vector<double> arrow_rhs;  // effective rhs of arrow rows
};

bool arrow_shape(const QuadConstraint& qc, double& rhs_eff) {
  if (qc.sense != Sense::LessEqual) return false;
  rhs_eff = qc.rhs - qc.form.constant;
  if (rhs_eff <= 1e-12) return false;
  if (!qc.form.lin_x.empty() || !qc.form.lin_y.empty()) return false;
  if (qc.form.quad.empty() || qc.form.quad.size() > 2) return false;
  for (const auto& e : qc.form.quad)
    if (e.row != e.col || e.value <= 0.0) return false;
  if (qc.form.quad.size() == 2 && qc.form.quad[0].row == qc.form.quad[1].row)
    return false;
  return true;
}

Analysis analyze(const MiqcqpInstance& inst) {
  const Index n = inst.n_cont;
  Analysis a;
  a.linear_presence.assign(n, false);
  a.lifted.assign(n, false);
  a.epigraph.assign(n, false);
  a.epi_coeff.assign(n, 0.0);
  a.arrow_row.assign(inst.quad_constraints.size(), false);
  a.arrow_rhs.assign(inst.quad_constraints.size(), 0.0);

  auto mark_linear = [&](const std::vector<LinTerm>& terms) {
    for (const auto& t : terms)
      if (t.value != 0.0) a.linear_presence[t.index] = true;
  };
  mark_linear(inst.objective.lin_x);
  for (const auto& qc : inst.quad_constraints) mark_linear(qc.form.lin_x);
  for (const auto& lc : inst.lin_constraints) mark_linear(lc.lin_x);

  std::vector<double> obj_diag(n, 0.0);
  std::vector<bool> obj_offdiag(n, false);
  for (const auto& e : inst.objective.quad) {
    if (e.row == e.col) {
      obj_diag[e.row] += e.value;
    } else if (e.value != 0.0) {
      obj_offdiag[e.row] = true;
      obj_offdiag[e.col] = true;
    }
  }

  for (size_t c = 0; c < inst.quad_constraints.size(); ++c)
    a.arrow_row[c] = arrow_shape(inst.quad_constraints[c], a.arrow_rhs[c]);

  // Occurrence flags stabilize in a few passes: a demoted arrow row lifts
  // its variables, which may demote further rows and disable epigraph
  // handling for them.
  std::vector<bool> moment_occ(n, false);
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<bool> constraint_occ(n, false);
    for (size_t c = 0; c < inst.quad_constraints.size(); ++c) {
      if (a.arrow_row[c]) continue;
      for (const auto& e : inst.quad_constraints[c].form.quad)
        if (e.value != 0.0) {
          constraint_occ[e.row] = true;
          constraint_occ[e.col] = true;
        }
    }
    for (Index j = 0; j < n; ++j) {
      a.epigraph[j] = obj_diag[j] > 0.0 && !obj_offdiag[j] &&
                      a.linear_presence[j] && !constraint_occ[j];
      a.epi_coeff[j] = a.epigraph[j] ? obj_diag[j] : 0.0;
      moment_occ[j] = obj_offdiag[j] ||
                      (obj_diag[j] != 0.0 && !a.epigraph[j]) ||
                      constraint_occ[j];
    }
    for (size_t c = 0; c < inst.quad_constraints.size(); ++c) {
      if (!a.arrow_row[c]) continue;
      for (const auto& e : inst.quad_constraints[c].form.quad)
        if (moment_occ[e.row]) {
          a.arrow_row[c] = false;
          changed = true;
        }
    }
  }
  a.lifted = moment_occ;
  return a;
}

struct GroupLink {
  int a;
  int b;
  std::vector<Index> shared;
};

struct Builder {
  const MiqcqpInstance& inst;
  const Analysis& an;
  SdpProblem out;

  std::vector<std::vector<Index>> groups;  // lifted vars per moment block
  std::vector<std::map<Index, int>> pos;   // var -> row within block
  std::vector<int> owner;                  // per variable, -1 if scalar

  Builder(const MiqcqpInstance& i, const Analysis& a) : inst(i), an(a) {}

  int owner_of_pair(Index j, Index k) const {
    for (size_t g = 0; g < groups.size(); ++g)
      if (pos[g].count(j) && pos[g].count(k)) return static_cast<int>(g);
    return -1;
  }

  RowTermBlock moment(Index j, Index k) const {
    const int g = owner_of_pair(j, k);
    if (g < 0) {
      std::ostringstream ss;
      ss << "moment (" << j << ", " << k
         << ") is not covered by any block; the decomposition does not "
            "match the instance";
      throw std::runtime_error(ss.str());
    }
    int r = pos[g].at(j), c = pos[g].at(k);
    if (r > c) std::swap(r, c);
    return {g, r, c, 1.0};
  }

  RowTermBlock x_moment(Index j) const {
    const int g = owner[j];
    return {g, 0, pos[g].at(j), 1.0};
  }

  void add_groups(std::vector<std::vector<Index>> gs,
                  std::vector<GroupLink> links) {
    groups = std::move(gs);
    pos.resize(groups.size());
    owner.assign(inst.n_cont, -1);
    for (size_t g = 0; g < groups.size(); ++g) {
      for (size_t r = 0; r < groups[g].size(); ++r) {
        pos[g][groups[g][r]] = static_cast<int>(r) + 1;
        if (owner[groups[g][r]] < 0) owner[groups[g][r]] = static_cast<int>(g);
      }
      SdpBlockInfo info;
      info.size = static_cast<int>(groups[g].size()) + 1;
      info.kind = BlockKind::Moment;
      info.vars = groups[g];
      info.label = "moment" + std::to_string(g);
      for (Index v : groups[g])
        if (an.linear_presence[v]) info.x_row_meaningful = true;
      out.blocks.push_back(std::move(info));

      LinearRow anchor;
      anchor.entries = {{static_cast<int>(g), 0, 0, 1.0}};
      anchor.sense = Sense::Equal;
      anchor.rhs = 1.0;
      anchor.label = "anchor" + std::to_string(g);
      out.rows.push_back(anchor);
    }
    // Consistency links along the clique tree: shared x rows and shared
    // pair moments between adjacent blocks.
    for (const auto& l : links) {
      for (size_t i = 0; i < l.shared.size(); ++i) {
        const Index u = l.shared[i];
        LinearRow row;
        row.entries.push_back({l.a, 0, pos[l.a].at(u), 1.0});
        row.entries.push_back({l.b, 0, pos[l.b].at(u), -1.0});
        row.sense = Sense::Equal;
        row.label = "link_x";
        out.rows.push_back(row);
        for (size_t k = i; k < l.shared.size(); ++k) {
          const Index v = l.shared[k];
          int ra = pos[l.a].at(u), ca = pos[l.a].at(v);
          if (ra > ca) std::swap(ra, ca);
          int rb = pos[l.b].at(u), cb = pos[l.b].at(v);
          if (rb > cb) std::swap(rb, cb);
          LinearRow wrow;
          wrow.entries.push_back({l.a, ra, ca, 1.0});
          wrow.entries.push_back({l.b, rb, cb, -1.0});
          wrow.sense = Sense::Equal;
          wrow.label = "link_w";
          out.rows.push_back(wrow);
        }
      }
    }
  }

  void add_scalars(const BinaryFixings& fixings) {
    out.cont_owner_block.assign(inst.n_cont, -1);
    out.cont_block_row.assign(inst.n_cont, -1);
    out.cont_scalar.assign(inst.n_cont, -1);
    for (Index j = 0; j < inst.n_cont; ++j) {
      if (!inst.cont_bounds[j].finite())
        throw std::invalid_argument(
            "relaxation requires bounded continuous variables");
      if (an.lifted[j]) {
        out.cont_owner_block[j] = owner[j];
        out.cont_block_row[j] = pos[owner[j]].at(j);
      } else {
        ScalarInfo s;
        s.bounds = inst.cont_bounds[j];
        s.role = ScalarInfo::Role::ContVar;
        s.var_id = j;
        s.name = j < static_cast<Index>(inst.names.size())
                     ? inst.names[j]
                     : "x" + std::to_string(j);
        out.cont_scalar[j] = static_cast<int>(out.scalars.size());
        out.scalars.push_back(std::move(s));
      }
    }
    out.binary_scalar.assign(inst.n_int, -1);
    for (Index y = 0; y < inst.n_int; ++y) {
      ScalarInfo s;
      s.bounds = {0.0, 1.0};
      if (!fixings.empty() && fixings[y] >= 0) {
        s.bounds = {static_cast<double>(fixings[y]),
                    static_cast<double>(fixings[y])};
      }
      s.role = ScalarInfo::Role::Binary;
      s.var_id = y;
      s.name = "y" + std::to_string(y);
      out.binary_scalar[y] = static_cast<int>(out.scalars.size());
      out.scalars.push_back(std::move(s));
    }
  }

  // Linear terms routed to x-row moments (lifted) or scalars.
  void translate_linear(const std::vector<LinTerm>& lin_x,
                        const std::vector<LinTerm>& lin_y, LinearRow& row) {
    for (const auto& t : lin_x) {
      if (t.value == 0.0) continue;
      if (an.lifted[t.index]) {
        auto e = x_moment(t.index);
        e.coeff = t.value;
        row.entries.push_back(e);
      } else {
        row.scalars.push_back({out.cont_scalar[t.index], t.value});
      }
    }
    for (const auto& t : lin_y)
      if (t.value != 0.0)
        row.scalars.push_back({out.binary_scalar[t.index], t.value});
  }

  void translate_quad(const QuadraticForm& form, LinearRow& row) {
    for (const auto& e : form.quad) {
      if (e.value == 0.0) continue;
      auto term = moment(e.row, e.col);
      term.coeff = e.row == e.col ? e.value : 2.0 * e.value;
      row.entries.push_back(term);
    }
    translate_linear(form.lin_x, form.lin_y, row);
  }

  void add_constraints() {
    for (size_t c = 0; c < inst.quad_constraints.size(); ++c) {
      if (an.arrow_row[c]) continue;
      const auto& qc = inst.quad_constraints[c];
      LinearRow row;
      translate_quad(qc.form, row);
      row.sense = qc.sense;
      row.rhs = qc.rhs - qc.form.constant;
      row.label = qc.name.empty() ? "qc" + std::to_string(c) : qc.name;
      out.rows.push_back(std::move(row));
    }
    for (size_t c = 0; c < inst.lin_constraints.size(); ++c) {
      const auto& lc = inst.lin_constraints[c];
      LinearRow row;
      translate_linear(lc.lin_x, lc.lin_y, row);
      row.sense = lc.sense;
      row.rhs = lc.rhs;
      row.label = lc.name.empty() ? "lc" + std::to_string(c) : lc.name;
      out.rows.push_back(std::move(row));
    }
  }

  // Normalized arrow block per pure-norm row: PSD iff the original
  // two-square constraint holds.
  void add_arrow_blocks() {
    for (size_t c = 0; c < inst.quad_constraints.size(); ++c) {
      if (!an.arrow_row[c]) continue;
      const auto& qc = inst.quad_constraints[c];
      const double S = std::sqrt(an.arrow_rhs[c]);
      const int nq = static_cast<int>(qc.form.quad.size());
      const int bsize = 1 + nq;
      SdpBlockInfo info;
      info.size = bsize;
      info.kind = BlockKind::SocArrow;
      info.label = "arrow" + std::to_string(c);
      const int b = static_cast<int>(out.blocks.size());
      out.blocks.push_back(info);

      for (int r = 0; r < bsize; ++r) {
        LinearRow diag;
        diag.entries = {{b, r, r, 1.0}};
        diag.sense = Sense::Equal;
        diag.rhs = 1.0;
        diag.label = "arrow_diag";
        out.rows.push_back(diag);
      }
      if (nq == 2) {
        LinearRow off;
        off.entries = {{b, 1, 2, 1.0}};
        off.sense = Sense::Equal;
        off.rhs = 0.0;
        off.label = "arrow_off";
        out.rows.push_back(off);
      }
      for (int k = 0; k < nq; ++k) {
        const auto& e = qc.form.quad[k];
        LinearRow link;
        link.entries = {{b, 0, k + 1, S}};
        if (an.lifted[e.row]) {
          auto x = x_moment(e.row);
          x.coeff = -std::sqrt(e.value);
          link.entries.push_back(x);
        } else {
          link.scalars.push_back(
              {out.cont_scalar[e.row], -std::sqrt(e.value)});
        }
        link.sense = Sense::Equal;
        link.label = "arrow_link";
        out.rows.push_back(link);
      }
    }
  }

  void add_epigraph_blocks() {
    for (Index j = 0; j < inst.n_cont; ++j) {
      if (!an.epigraph[j]) continue;
      SdpBlockInfo info;
      info.size = 2;
      info.kind = BlockKind::Epigraph;
      info.label = "epi_x" + std::to_string(j);
      const int b = static_cast<int>(out.blocks.size());
      out.blocks.push_back(info);

      LinearRow anchor;
      anchor.entries = {{b, 0, 0, 1.0}};
      anchor.sense = Sense::Equal;
      anchor.rhs = 1.0;
      anchor.label = "epi_anchor";
      out.rows.push_back(anchor);

      LinearRow link;
      link.entries = {{b, 0, 1, 1.0}};
      link.scalars.push_back({out.cont_scalar[j], -std::sqrt(an.epi_coeff[j])});
      link.sense = Sense::Equal;
      link.label = "epi_link";
      out.rows.push_back(link);

      out.objective.entries.push_back({b, 1, 1, 1.0});
    }
  }

  void add_objective() {
    out.objective_constant = inst.objective.constant;
    for (const auto& e : inst.objective.quad) {
      if (e.value == 0.0) continue;
      if (e.row == e.col && an.epigraph[e.row]) continue;  // epigraph block
      auto term = moment(e.row, e.col);
      term.coeff = e.row == e.col ? e.value : 2.0 * e.value;
      out.objective.entries.push_back(term);
    }
    LinearRow tmp;
    translate_linear(inst.objective.lin_x, inst.objective.lin_y, tmp);
    for (const auto& t : tmp.entries) out.objective.entries.push_back(t);
    for (const auto& t : tmp.scalars) out.objective.scalars.push_back(t);
  }

  // Bound-derived strengthening: diagonal caps for every lifted variable;
  // box rows and McCormick envelopes on moments whose variables also
  // appear linearly somewhere.
  void add_strengthening() {
    for (Index j = 0; j < inst.n_cont; ++j) {
      if (!an.lifted[j]) continue;
      const Interval& bj = inst.cont_bounds[j];
      const double mj = std::max(std::abs(bj.lo), std::abs(bj.hi));
      LinearRow cap;
      cap.entries = {moment(j, j)};
      cap.sense = Sense::LessEqual;
      cap.rhs = mj * mj;
      cap.label = "diag_cap";
      out.rows.push_back(cap);

      if (!an.linear_presence[j]) continue;
      LinearRow lo;
      lo.entries = {x_moment(j)};
      lo.sense = Sense::GreaterEqual;
      lo.rhs = bj.lo;
      lo.label = "box_lo";
      out.rows.push_back(lo);
      LinearRow hi;
      hi.entries = {x_moment(j)};
      hi.sense = Sense::LessEqual;
      hi.rhs = bj.hi;
      hi.label = "box_hi";
      out.rows.push_back(hi);
    }

    auto mccormick_rows = [&](Index j, Index k) {
      const Interval& bj = inst.cont_bounds[j];
      const Interval& bk = inst.cont_bounds[k];
      auto envelope = [&](double cj, double ck, double rhs, Sense sense) {
        LinearRow row;
        row.entries = {moment(j, k)};
        if (j == k) {
          auto xj = x_moment(j);
          xj.coeff = -(cj + ck);
          row.entries.push_back(xj);
        } else {
          auto xj = x_moment(j);
          xj.coeff = -cj;
          auto xk = x_moment(k);
          xk.coeff = -ck;
          row.entries.push_back(xj);
          row.entries.push_back(xk);
        }
        row.sense = sense;
        row.rhs = rhs;
        row.label = "mccormick";
        out.rows.push_back(row);
      };
      envelope(bk.lo, bj.lo, -bj.lo * bk.lo, Sense::GreaterEqual);
      envelope(bk.hi, bj.hi, -bj.hi * bk.hi, Sense::GreaterEqual);
      envelope(bk.lo, bj.hi, -bj.hi * bk.lo, Sense::LessEqual);
      envelope(bk.hi, bj.lo, -bj.lo * bk.hi, Sense::LessEqual);
    };

    const CsGraph cs = build_cs_graph(inst);
    for (const auto& [j, k] : cs.edges)
      if (an.lifted[j] && an.lifted[k] && an.linear_presence[j] &&
          an.linear_presence[k] && owner_of_pair(j, k) >= 0)
        mccormick_rows(j, k);
    for (Index j = 0; j < inst.n_cont; ++j)
      if (an.lifted[j] && an.linear_presence[j]) mccormick_rows(j, j);
  }

  SdpProblem build(const BinaryFixings& fixings,
                   std::vector<std::vector<Index>> gs,
                   std::vector<GroupLink> links) {
    add_groups(std::move(gs), std::move(links));
    add_scalars(fixings);
    add_constraints();
    add_arrow_blocks();
    add_epigraph_blocks();
    add_objective();
    add_strengthening();
    return std::move(out);
  }
};

void check_fixings(const MiqcqpInstance& inst, const BinaryFixings& fixings) {
  if (!fixings.empty() && static_cast<Index>(fixings.size()) != inst.n_int)
    throw std::invalid_argument("binary fixings size mismatch");
  for (int v : fixings)
    if (v > 1) throw std::invalid_argument("binary fixing outside {0, 1}");
}

}  // namespace

SdpProblem build_full_sdp(const MiqcqpInstance& inst,
                          const BinaryFixings& fixings) {
  check_fixings(inst, fixings);
  const Analysis an = analyze(inst);
  std::vector<Index> all;
  for (Index j = 0; j < inst.n_cont; ++j)
    if (an.lifted[j]) all.push_back(j);
  Builder b(inst, an);
  std::vector<std::vector<Index>> groups;
  if (!all.empty()) groups.push_back(all);
  return b.build(fixings, std::move(groups), {});
}

SdpProblem build_decomposed_sdp(const MiqcqpInstance& inst,
                                const CliqueDecomposition& decomp,
                                const BinaryFixings& fixings) {
  check_fixings(inst, fixings);
  const Analysis an = analyze(inst);
  std::vector<std::vector<Index>> groups;
  std::vector<int> clique_to_group(decomp.cliques.size(), -1);
  for (size_t c = 0; c < decomp.cliques.size(); ++c) {
    std::vector<Index> g;
    for (Index v : decomp.cliques[c])
      if (v < inst.n_cont && an.lifted[v]) g.push_back(v);
    if (g.empty()) continue;
    clique_to_group[c] = static_cast<int>(groups.size());
    groups.push_back(std::move(g));
  }
  std::vector<GroupLink> links;
  for (const auto& e : decomp.tree_edges) {
    const int ga = clique_to_group[e.a];
    const int gb = clique_to_group[e.b];
    if (ga < 0 || gb < 0) continue;
    GroupLink l;
    l.a = ga;
    l.b = gb;
    for (Index v : e.separator)
      if (v < inst.n_cont && an.lifted[v]) l.shared.push_back(v);
    if (!l.shared.empty()) links.push_back(std::move(l));
  }
  Builder b(inst, an);
  return b.build(fixings, std::move(groups), std::move(links));
}

SdpProblem fix_binaries(const SdpProblem& problem,
                        const std::vector<int>& assignment) {
  if (assignment.size() != problem.binary_scalar.size())
    throw std::invalid_argument(
        "fix_binaries: assignment must cover every binary");
  SdpProblem out = problem;
  for (size_t y = 0; y < assignment.size(); ++y) {
    const int v = assignment[y];
    if (v != 0 && v != 1)
      throw std::invalid_argument("fix_binaries: value outside {0, 1}");
    ScalarInfo& s = out.scalars[problem.binary_scalar[y]];
    if (s.bounds.width() <= 1e-12 && std::abs(s.bounds.lo - v) > 1e-12)
      throw std::invalid_argument("fix_binaries: conflicting fixing for y" +
                                  std::to_string(y));
    s.bounds = {static_cast<double>(v), static_cast<double>(v)};
  }
  return out;
}

McCormickProblem build_mccormick(const MiqcqpInstance& inst,
                                 const BinaryFixings& fixings) {
  check_fixings(inst, fixings);
  McCormickProblem mc;
  SdpProblem& lp = mc.lp;

  lp.cont_owner_block.assign(inst.n_cont, -1);
  lp.cont_block_row.assign(inst.n_cont, -1);
  lp.cont_scalar.assign(inst.n_cont, -1);
  for (Index j = 0; j < inst.n_cont; ++j) {
    ScalarInfo s;
    s.bounds = inst.cont_bounds[j];
    s.role = ScalarInfo::Role::ContVar;
    s.var_id = j;
    s.name = "x" + std::to_string(j);
    lp.cont_scalar[j] = static_cast<int>(lp.scalars.size());
    lp.scalars.push_back(std::move(s));
  }
  lp.binary_scalar.assign(inst.n_int, -1);
  for (Index y = 0; y < inst.n_int; ++y) {
    ScalarInfo s;
    s.bounds = {0.0, 1.0};
    if (!fixings.empty() && fixings[y] >= 0)
      s.bounds = {static_cast<double>(fixings[y]),
                  static_cast<double>(fixings[y])};
    s.role = ScalarInfo::Role::Binary;
    s.var_id = y;
    s.name = "y" + std::to_string(y);
    lp.binary_scalar[y] = static_cast<int>(lp.scalars.size());
    lp.scalars.push_back(std::move(s));
  }

  // One w variable per appearing pair; its box is wide enough that the
  // envelope inequalities always dominate it.
  std::map<std::pair<Index, Index>, int> w_index;
  auto w_of = [&](Index j, Index k) {
    if (j > k) std::swap(j, k);
    auto it = w_index.find({j, k});
    if (it != w_index.end()) return it->second;
    if (!inst.cont_bounds[j].finite() || !inst.cont_bounds[k].finite())
      throw std::invalid_argument(
          "build_mccormick: unbounded factor in a bilinear term");
    const double mj = std::max(std::abs(inst.cont_bounds[j].lo),
                               std::abs(inst.cont_bounds[j].hi));
    const double mk = std::max(std::abs(inst.cont_bounds[k].lo),
                               std::abs(inst.cont_bounds[k].hi));
    const double big = 4.0 * mj * mk + 1.0;
    ScalarInfo s;
    s.bounds = {-big, big};
    s.role = ScalarInfo::Role::Aux;
    s.name = "w_" + std::to_string(j) + "_" + std::to_string(k);
    const int idx = static_cast<int>(lp.scalars.size());
    lp.scalars.push_back(std::move(s));
    w_index[{j, k}] = idx;
    mc.pairs.push_back({j, k});
    mc.pair_scalar.push_back(idx);

    const Interval bj = inst.cont_bounds[j];
    const Interval bk = inst.cont_bounds[k];
    auto envelope = [&, j = j, k = k](double cj, double ck, double rhs,
                                      Sense sense) {
      LinearRow row;
      row.scalars.push_back({idx, 1.0});
      if (j == k) {
        row.scalars.push_back({lp.cont_scalar[j], -(cj + ck)});
      } else {
        row.scalars.push_back({lp.cont_scalar[j], -cj});
        row.scalars.push_back({lp.cont_scalar[k], -ck});
      }
      row.sense = sense;
      row.rhs = rhs;
      row.label = "mccormick";
      lp.rows.push_back(row);
    };
    envelope(bk.lo, bj.lo, -bj.lo * bk.lo, Sense::GreaterEqual);
    envelope(bk.hi, bj.hi, -bj.hi * bk.hi, Sense::GreaterEqual);
    envelope(bk.lo, bj.hi, -bj.hi * bk.lo, Sense::LessEqual);
    envelope(bk.hi, bj.lo, -bj.lo * bk.hi, Sense::LessEqual);
    return idx;
  };

  auto translate = [&](const QuadraticForm& form, LinearRow& row) {
    for (const auto& e : form.quad) {
      if (e.value == 0.0) continue;
      const double coeff = e.row == e.col ? e.value : 2.0 * e.value;
      row.scalars.push_back({w_of(e.row, e.col), coeff});
    }
    for (const auto& t : form.lin_x)
      row.scalars.push_back({lp.cont_scalar[t.index], t.value});
    for (const auto& t : form.lin_y)
      row.scalars.push_back({lp.binary_scalar[t.index], t.value});
  };

  translate(inst.objective, lp.objective);
  lp.objective_constant = inst.objective.constant;
  for (size_t c = 0; c < inst.quad_constraints.size(); ++c) {
    const auto& qc = inst.quad_constraints[c];
    LinearRow row;
    translate(qc.form, row);
    row.sense = qc.sense;
    row.rhs = qc.rhs - qc.form.constant;
    row.label = "qc" + std::to_string(c);
    lp.rows.push_back(std::move(row));
  }
  for (size_t c = 0; c < inst.lin_constraints.size(); ++c) {
    const auto& lc = inst.lin_constraints[c];
    LinearRow row;
    for (const auto& t : lc.lin_x)
      row.scalars.push_back({lp.cont_scalar[t.index], t.value});
    for (const auto& t : lc.lin_y)
      row.scalars.push_back({lp.binary_scalar[t.index], t.value});
    row.sense = lc.sense;
    row.rhs = lc.rhs;
    row.label = "lc" + std::to_string(c);
    lp.rows.push_back(std::move(row));
  }
  return mc;
}

Vector binary_values(const SdpProblem& problem, const ConicSolution& solution) {
  Vector y(problem.binary_scalar.size());
  for (size_t k = 0; k < problem.binary_scalar.size(); ++k)
    y[k] = solution.scalar_values[problem.binary_scalar[k]];
  return y;
}

}  // namespace miqs
