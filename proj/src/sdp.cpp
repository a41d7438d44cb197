#include "miqs/sdp.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <algorithm>
#include <chrono>
#include <set>
#include <sstream>
#include <stdexcept>

namespace miqs {

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::PrimalInfeasible: return "primal_infeasible";
    case SolveStatus::DualInfeasible: return "dual_infeasible";
    case SolveStatus::IterationLimit: return "iteration_limit";
    default: return "numerical_failure";
  }
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct ScalarTerm {
  int scalar;
  double coeff;
};

// One equality row of the internal standard form
//   sum_b <A_b, X_b> + sum_k B_k w_k = rhs,  X_b >= 0 (PSD), w >= 0.
struct IRow {
  std::vector<RowTermBlock> entries;  // block terms, row <= col
  std::vector<ScalarTerm> scalars;    // over internal nonnegative scalars
  double rhs = 0.0;
  int source_row = -1;  // original row index, -1 for synthesized rows
  double scale = 1.0;
};

struct Compiled {
  std::vector<int> block_sizes;
  std::vector<Matrix> C;  // objective per block, symmetric-matrix convention
  Vector q;               // objective over internal scalars
  double constant = 0.0;  // folded objective constant

  std::vector<IRow> rows;
  int nw = 0;

  // scalar bookkeeping: original scalar -> (fixed value) or internal index
  std::vector<int> scalar_internal;  // -1 when fixed
  std::vector<double> scalar_fixed;
  std::vector<double> scalar_shift;  // value = shift + w[internal]

  // per-block and per-scalar row incidence (filled after rows are final)
  std::vector<std::vector<int>> rows_of_block;
  std::vector<std::vector<int>> rows_of_scalar;

  bool trivially_infeasible = false;
  std::string infeasible_reason;
};

double symmetric_inner(const std::vector<RowTermBlock>& terms, int block,
                       const Matrix& V) {
  double v = 0.0;
  for (const auto& t : terms)
    if (t.block == block) v += t.coeff * V(t.row, t.col);
  return v;
}

// Adds the symmetric-matrix realization of the row terms into M.
void accumulate_symmetric(const std::vector<RowTermBlock>& terms, int block,
                          double mult, Matrix& M) {
  for (const auto& t : terms) {
    if (t.block != block) continue;
    if (t.row == t.col) {
      M(t.row, t.row) += mult * t.coeff;
    } else {
      M(t.row, t.col) += 0.5 * mult * t.coeff;
      M(t.col, t.row) += 0.5 * mult * t.coeff;
    }
  }
}

Compiled compile(const SdpProblem& p) {
  Compiled c;
  for (const auto& b : p.blocks) {
    if (b.size <= 0)
      throw std::invalid_argument("sdp::solve: block with non-positive size");
    c.block_sizes.push_back(b.size);
  }
  c.constant = p.objective_constant;

  const int ns = static_cast<int>(p.scalars.size());
  c.scalar_internal.assign(ns, -1);
  c.scalar_fixed.assign(ns, 0.0);
  c.scalar_shift.assign(ns, 0.0);

  for (int s = 0; s < ns; ++s) {
    const Interval& b = p.scalars[s].bounds;
    if (!b.finite())
      throw std::invalid_argument("sdp::solve: scalar variable " +
                                  std::to_string(s) + " is unbounded");
    if (b.empty()) {
      c.trivially_infeasible = true;
      c.infeasible_reason = "empty scalar bound interval";
      return c;
    }
    if (b.width() <= 1e-12) {
      c.scalar_fixed[s] = 0.5 * (b.lo + b.hi);
    } else {
      c.scalar_internal[s] = c.nw++;
      c.scalar_shift[s] = b.lo;
    }
  }

  // Objective over blocks and scalars (q is sized once slacks are known).
  c.C.resize(p.blocks.size());
  for (size_t b = 0; b < p.blocks.size(); ++b)
    c.C[b] = Matrix::Zero(p.blocks[b].size, p.blocks[b].size);
  for (const auto& t : p.objective.entries)
    accumulate_symmetric({t}, t.block, 1.0, c.C[t.block]);
  std::vector<std::pair<int, double>> qterms;
  for (const auto& t : p.objective.scalars) {
    if (c.scalar_internal[t.scalar] >= 0) {
      qterms.emplace_back(c.scalar_internal[t.scalar], t.coeff);
      c.constant += t.coeff * c.scalar_shift[t.scalar];
    } else {
      c.constant += t.coeff * c.scalar_fixed[t.scalar];
    }
  }

  // Rows: substitute fixed scalars, shift the rest, one slack per inequality.
  for (size_t i = 0; i < p.rows.size(); ++i) {
    const LinearRow& row = p.rows[i];
    IRow ir;
    ir.source_row = static_cast<int>(i);
    ir.rhs = row.rhs;
    for (const auto& t : row.entries) {
      if (t.row > t.col)
        throw std::invalid_argument("sdp::solve: block term with row > col");
      ir.entries.push_back(t);
    }
    for (const auto& t : row.scalars) {
      if (c.scalar_internal[t.scalar] >= 0) {
        ir.scalars.push_back({c.scalar_internal[t.scalar], t.coeff});
        ir.rhs -= t.coeff * c.scalar_shift[t.scalar];
      } else {
        ir.rhs -= t.coeff * c.scalar_fixed[t.scalar];
      }
    }
    if (ir.entries.empty() && ir.scalars.empty()) {
      const double viol = sense_violation(row.sense, 0.0, ir.rhs);
      if (viol > 1e-9 * (1.0 + std::abs(row.rhs))) {
        c.trivially_infeasible = true;
        c.infeasible_reason = "constant row violated: " + row.label;
        return c;
      }
      continue;
    }
    if (row.sense == Sense::LessEqual) {
      ir.scalars.push_back({c.nw++, 1.0});
    } else if (row.sense == Sense::GreaterEqual) {
      ir.scalars.push_back({c.nw++, -1.0});
    }
    c.rows.push_back(std::move(ir));
  }

  // Upper-bound rows for the width-bounded scalars.
  for (int s = 0; s < ns; ++s) {
    if (c.scalar_internal[s] < 0) continue;
    IRow ir;
    ir.scalars.push_back({c.scalar_internal[s], 1.0});
    ir.scalars.push_back({c.nw++, 1.0});
    ir.rhs = p.scalars[s].bounds.width();
    c.rows.push_back(std::move(ir));
  }
  c.q = Vector::Zero(c.nw);
  for (const auto& [k, v] : qterms) c.q[k] += v;

  // Row scaling by the largest coefficient magnitude.
  for (auto& ir : c.rows) {
    double m = 0.0;
    for (const auto& t : ir.entries) m = std::max(m, std::abs(t.coeff));
    for (const auto& t : ir.scalars) m = std::max(m, std::abs(t.coeff));
    if (m > 0.0 && (m > 1e3 || m < 1e-3)) {
      ir.scale = m;
      for (auto& t : ir.entries) t.coeff /= m;
      for (auto& t : ir.scalars) t.coeff /= m;
      ir.rhs /= m;
    }
  }

  c.rows_of_block.assign(p.blocks.size(), {});
  c.rows_of_scalar.assign(c.nw, {});
  for (int i = 0; i < static_cast<int>(c.rows.size()); ++i) {
    std::set<int> blocks_touched;
    for (const auto& t : c.rows[i].entries) blocks_touched.insert(t.block);
    for (int b : blocks_touched) c.rows_of_block[b].push_back(i);
    std::set<int> scalars_touched;
    for (const auto& t : c.rows[i].scalars) scalars_touched.insert(t.scalar);
    for (int s : scalars_touched) c.rows_of_scalar[s].push_back(i);
  }
  return c;
}

struct NtScaling {
  Matrix G;       // W = G G^T
  Matrix Ginv;    // G^{-1}
  Matrix W;
  Vector lambda;  // scaled spectrum
};

bool nt_scaling(const Matrix& X, const Matrix& S, NtScaling& out) {
  const int n = static_cast<int>(X.rows());
  Eigen::LLT<Matrix> lltx(X);
  Eigen::LLT<Matrix> llts(S);
  Matrix Xr = X, Sr = S;
  for (int attempt = 0; attempt < 3 && (lltx.info() != Eigen::Success ||
                                        llts.info() != Eigen::Success);
       ++attempt) {
    const double ridge = 1e-12 * std::pow(10.0, attempt);
    Xr.diagonal().array() += ridge * (1.0 + Xr.trace() / n);
    Sr.diagonal().array() += ridge * (1.0 + Sr.trace() / n);
    lltx.compute(Xr);
    llts.compute(Sr);
  }
  if (lltx.info() != Eigen::Success || llts.info() != Eigen::Success)
    return false;
  const Matrix Lx = lltx.matrixL();
  const Matrix Ls = llts.matrixL();
  const Matrix Mm = Ls.transpose() * Lx;
  Matrix U, V;
  Vector sigma;
  if (n > 48) {
    Eigen::BDCSVD<Matrix> svd(Mm, Eigen::ComputeFullU | Eigen::ComputeFullV);
    sigma = svd.singularValues();
    V = svd.matrixV();
  } else {
    Eigen::JacobiSVD<Matrix> svd(Mm, Eigen::ComputeFullU | Eigen::ComputeFullV);
    sigma = svd.singularValues();
    V = svd.matrixV();
  }
  if ((sigma.array() <= 0).any() || !sigma.allFinite()) return false;
  const Vector inv_sqrt = sigma.array().sqrt().inverse();
  out.G = Lx * V * inv_sqrt.asDiagonal();
  // G^{-1} = sqrt(sigma) V^T Lx^{-1}
  Matrix Lxinv = Matrix::Identity(n, n);
  Lx.triangularView<Eigen::Lower>().solveInPlace(Lxinv);
  out.Ginv = sigma.array().sqrt().matrix().asDiagonal() * V.transpose() * Lxinv;
  out.W.noalias() = out.G * out.G.transpose();
  out.lambda = sigma;
  return true;
}

// Largest step alpha with X + alpha*D staying PSD.
double psd_step_limit(const Matrix& X, const Matrix& D) {
  Eigen::LLT<Matrix> llt(X);
  if (llt.info() != Eigen::Success) return 0.0;
  const Matrix L = llt.matrixL();
  Matrix T = L.triangularView<Eigen::Lower>().solve(D);
  T = L.triangularView<Eigen::Lower>().solve(T.transpose()).transpose();
  // T is L^{-1} D L^{-T} up to symmetrization noise.
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (T + T.transpose()),
                                           Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues().minCoeff();
  return lmin >= 0.0 ? kInf : -1.0 / lmin;
}

double nonneg_step_limit(const Vector& w, const Vector& dw) {
  double a = kInf;
  for (Eigen::Index k = 0; k < w.size(); ++k)
    if (dw[k] < 0.0) a = std::min(a, -w[k] / dw[k]);
  return a;
}

struct IpmState {
  std::vector<Matrix> X, S;
  Vector w, z, y;
};

}  // namespace

ConicSolution solve(const SdpProblem& problem, const SolverSettings& settings) {
  const auto t0 = Clock::now();
  Compiled c = compile(problem);

  ConicSolution sol;
  sol.block_values.resize(problem.blocks.size());
  for (size_t b = 0; b < problem.blocks.size(); ++b)
    sol.block_values[b] = Matrix::Zero(problem.blocks[b].size,
                                       problem.blocks[b].size);
  sol.scalar_values = Vector::Zero(problem.scalars.size());
  sol.duals = Vector::Zero(problem.rows.size());

  auto fill_scalars = [&](const Vector& w) {
    for (size_t s = 0; s < problem.scalars.size(); ++s)
      sol.scalar_values[s] =
          c.scalar_internal[s] >= 0
              ? c.scalar_shift[s] + w[c.scalar_internal[s]]
              : c.scalar_fixed[s];
  };

  if (c.trivially_infeasible) {
    sol.status = SolveStatus::PrimalInfeasible;
    return sol;
  }

  const int m = static_cast<int>(c.rows.size());
  const int nb = static_cast<int>(c.block_sizes.size());
  const int nw = c.nw;

  if (m == 0 && nb == 0 && nw == 0) {
    sol.status = SolveStatus::Optimal;
    sol.objective = c.constant;
    sol.gap = 0.0;
    fill_scalars(Vector());
    return sol;
  }

  Vector rhs(m);
  for (int i = 0; i < m; ++i) rhs[i] = c.rows[i].rhs;
  const double rhs_scale = m > 0 ? rhs.cwiseAbs().maxCoeff() : 0.0;
  double cmax = c.q.size() > 0 ? c.q.cwiseAbs().maxCoeff() : 0.0;
  for (const auto& Cb : c.C)
    if (Cb.size() > 0) cmax = std::max(cmax, Cb.cwiseAbs().maxCoeff());

  // Cold start: scaled identity blocks, scalars near bound midpoints.
  const double tau = 1.0 + rhs_scale;
  const double sigma0 = 1.0 + cmax;
  IpmState st;
  st.X.resize(nb);
  st.S.resize(nb);
  for (int b = 0; b < nb; ++b) {
    st.X[b] = tau * Matrix::Identity(c.block_sizes[b], c.block_sizes[b]);
    st.S[b] = sigma0 * Matrix::Identity(c.block_sizes[b], c.block_sizes[b]);
  }
  st.w = Vector::Constant(nw, tau);
  for (size_t s = 0; s < problem.scalars.size(); ++s)
    if (c.scalar_internal[s] >= 0)
      st.w[c.scalar_internal[s]] =
          std::max(1e-3, std::min(0.5 * problem.scalars[s].bounds.width(), tau));
  st.z = Vector::Constant(nw, sigma0);
  st.y = Vector::Zero(m);

  const double nu = [&] {
    double n = nw;
    for (int b = 0; b < nb; ++b) n += c.block_sizes[b];
    return std::max(1.0, n);
  }();

  auto primal_obj = [&] {
    double v = c.constant + (nw ? c.q.dot(st.w) : 0.0);
    for (int b = 0; b < nb; ++b) v += c.C[b].cwiseProduct(st.X[b]).sum();
    return v;
  };
  auto dual_obj = [&] { return c.constant + (m ? rhs.dot(st.y) : 0.0); };
  auto complementarity = [&] {
    double v = nw ? st.w.dot(st.z) : 0.0;
    for (int b = 0; b < nb; ++b) v += st.X[b].cwiseProduct(st.S[b]).sum();
    return v;
  };

  auto finish = [&](SolveStatus status, double gap, int iters) {
    sol.status = status;
    sol.objective = primal_obj();
    sol.gap = gap;
    sol.iterations = iters;
    for (int b = 0; b < nb; ++b) sol.block_values[b] = st.X[b];
    fill_scalars(st.w);
    for (int i = 0; i < m; ++i)
      if (c.rows[i].source_row >= 0)
        sol.duals[c.rows[i].source_row] = st.y[i] / c.rows[i].scale;
    return sol;
  };

  const bool use_sparse_normal = m > 400;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> sparse_ldlt;
  bool pattern_analyzed = false;

  const double mu0 = complementarity() / nu;
  int tiny_steps = 0;

  Vector rp(m), rdw(nw);
  std::vector<Matrix> Rd(nb), Rc(nb);

  for (int iter = 0; iter < settings.max_iterations; ++iter) {
    // Residuals.
    for (int i = 0; i < m; ++i) {
      double lhs = 0.0;
      for (const auto& t : c.rows[i].entries)
        lhs += t.coeff * st.X[t.block](t.row, t.col);
      for (const auto& t : c.rows[i].scalars) lhs += t.coeff * st.w[t.scalar];
      rp[i] = rhs[i] - lhs;
    }
    for (int b = 0; b < nb; ++b) {
      Rd[b] = c.C[b] - st.S[b];
      for (int i : c.rows_of_block[b])
        accumulate_symmetric(c.rows[i].entries, b, -st.y[i], Rd[b]);
    }
    rdw = c.q - st.z;
    for (int i = 0; i < m; ++i)
      for (const auto& t : c.rows[i].scalars)
        rdw[t.scalar] -= t.coeff * st.y[i];

    const double pobj = primal_obj();
    const double dobj = dual_obj();
    const double mu = complementarity() / nu;
    const double rp_rel =
        (m ? rp.cwiseAbs().maxCoeff() : 0.0) / (1.0 + rhs_scale);
    double rd_abs = nw ? rdw.cwiseAbs().maxCoeff() : 0.0;
    for (int b = 0; b < nb; ++b)
      if (Rd[b].size() > 0)
        rd_abs = std::max(rd_abs, Rd[b].cwiseAbs().maxCoeff());
    const double rd_rel = rd_abs / (1.0 + cmax);
    const double rel_gap =
        std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));

    if (settings.trace)
      settings.trace->push_back(
          {iter, pobj, dobj, rel_gap, 0.0, 0.0, mu, rp_rel, rd_rel});

    if (!std::isfinite(pobj) || !std::isfinite(dobj) || !std::isfinite(mu))
      return finish(SolveStatus::NumericalFailure, rel_gap, iter);

    if (rel_gap <= settings.rel_gap_tol && rp_rel <= settings.feas_tol &&
        rd_rel <= settings.feas_tol)
      return finish(SolveStatus::Optimal, rel_gap, iter);

    // Divergence-based infeasibility certificates (heuristic).
    if (dobj > 1e10 && rd_rel <= 1e2 * settings.feas_tol)
      return finish(SolveStatus::PrimalInfeasible, rel_gap, iter);
    if (pobj < -1e10 && rp_rel <= 1e2 * settings.feas_tol)
      return finish(SolveStatus::DualInfeasible, rel_gap, iter);
    if (mu < 1e-12 * (1.0 + mu0) && rp_rel > 1e3 * settings.feas_tol)
      return finish(SolveStatus::PrimalInfeasible, rel_gap, iter);
    if (mu < 1e-12 * (1.0 + mu0) && rd_rel > 1e3 * settings.feas_tol)
      return finish(SolveStatus::DualInfeasible, rel_gap, iter);
    if (seconds_since(t0) > settings.time_limit_s)
      return finish(SolveStatus::IterationLimit, rel_gap, iter);

    // Nesterov-Todd scalings.
    std::vector<NtScaling> nt(nb);
    for (int b = 0; b < nb; ++b) {
      if (seconds_since(t0) > settings.time_limit_s)
        return finish(SolveStatus::IterationLimit, rel_gap, iter);
      if (!nt_scaling(st.X[b], st.S[b], nt[b]))
        return finish(SolveStatus::NumericalFailure, rel_gap, iter);
    }

    // Normal matrix M = A W A^T (NT weights on blocks, w/z on scalars).
    Matrix Mdense;
    std::vector<Eigen::Triplet<double>> trips;
    if (!use_sparse_normal) Mdense = Matrix::Zero(m, m);
    auto add_M = [&](int i, int j, double v) {
      if (use_sparse_normal) {
        trips.emplace_back(i, j, v);
        if (i != j) trips.emplace_back(j, i, v);
      } else {
        Mdense(i, j) += v;
        if (i != j) Mdense(j, i) += v;
      }
    };

    for (int b = 0; b < nb; ++b) {
      const auto& rows_b = c.rows_of_block[b];
      const int n = c.block_sizes[b];
      Matrix V(n, n);
      int processed = 0;
      for (int j : rows_b) {
        if (((processed++) & 63) == 0 &&
            seconds_since(t0) > settings.time_limit_s)
          return finish(SolveStatus::IterationLimit, rel_gap, iter);
        V.setZero();
        for (const auto& t : c.rows[j].entries) {
          if (t.block != b) continue;
          const auto wr = nt[b].W.col(t.row);
          const auto wc = nt[b].W.col(t.col);
          if (t.row == t.col) {
            V.noalias() += t.coeff * wr * wr.transpose();
          } else {
            V.noalias() += 0.5 * t.coeff * wr * wc.transpose();
            V.noalias() += 0.5 * t.coeff * wc * wr.transpose();
          }
        }
        for (int i : rows_b) {
          if (i > j) continue;
          add_M(i, j, symmetric_inner(c.rows[i].entries, b, V));
        }
      }
    }
    for (int k = 0; k < nw; ++k) {
      const double d = st.w[k] / st.z[k];
      const auto& rk = c.rows_of_scalar[k];
      for (size_t a = 0; a < rk.size(); ++a) {
        double ca = 0.0;
        for (const auto& t : c.rows[rk[a]].scalars)
          if (t.scalar == k) ca += t.coeff;
        for (size_t bidx = a; bidx < rk.size(); ++bidx) {
          double cb = 0.0;
          for (const auto& t : c.rows[rk[bidx]].scalars)
            if (t.scalar == k) cb += t.coeff;
          if (rk[a] <= rk[bidx])
            add_M(rk[a], rk[bidx], ca * cb * d);
          else
            add_M(rk[bidx], rk[a], ca * cb * d);
        }
      }
    }

    Eigen::SparseMatrix<double> Msparse;
    if (use_sparse_normal) {
      Msparse.resize(m, m);
      Msparse.setFromTriplets(trips.begin(), trips.end());
      for (int i = 0; i < m; ++i) Msparse.coeffRef(i, i) += 1e-10;
      if (!pattern_analyzed) {
        sparse_ldlt.analyzePattern(Msparse);
        pattern_analyzed = true;
      }
      sparse_ldlt.factorize(Msparse);
      if (sparse_ldlt.info() != Eigen::Success)
        return finish(SolveStatus::NumericalFailure, rel_gap, iter);
    } else {
      Mdense.diagonal().array() += 1e-10;
    }
    Eigen::LDLT<Matrix> dense_ldlt;
    if (!use_sparse_normal) {
      dense_ldlt.compute(Mdense);
      if (dense_ldlt.info() != Eigen::Success)
        return finish(SolveStatus::NumericalFailure, rel_gap, iter);
    }
    auto solve_normal = [&](const Vector& h) -> Vector {
      return use_sparse_normal ? Vector(sparse_ldlt.solve(h))
                               : Vector(dense_ldlt.solve(h));
    };

    // One Newton direction for a given complementarity target.
    std::vector<Matrix> dX(nb), dS(nb);
    Vector dw(nw), dz(nw), dy(m);
    auto compute_direction = [&](const std::vector<Matrix>& Rc_hat,
                                 const Vector& rcw) {
      Vector h = rp;
      std::vector<Matrix> Rx(nb);
      for (int b = 0; b < nb; ++b) {
        const int n = c.block_sizes[b];
        Matrix E(n, n);
        for (int r = 0; r < n; ++r)
          for (int s = 0; s < n; ++s)
            E(r, s) = 2.0 / (nt[b].lambda[r] + nt[b].lambda[s]);
        const Matrix mid = E.cwiseProduct(Rc_hat[b]);
        Rx[b].noalias() = nt[b].G * mid * nt[b].G.transpose();
        Matrix WRdW = nt[b].W * Rd[b] * nt[b].W;
        Rx[b] -= WRdW;
        for (int i : c.rows_of_block[b])
          h[i] -= symmetric_inner(c.rows[i].entries, b, Rx[b]);
      }
      for (int k = 0; k < nw; ++k) {
        const double lp = (rcw[k] - st.w[k] * rdw[k]) / st.z[k];
        for (int i : c.rows_of_scalar[k])
          for (const auto& t : c.rows[i].scalars)
            if (t.scalar == k) h[i] -= t.coeff * lp;
      }
      dy = solve_normal(h);
      for (int b = 0; b < nb; ++b) {
        dS[b] = Rd[b];
        for (int i : c.rows_of_block[b])
          accumulate_symmetric(c.rows[i].entries, b, -dy[i], dS[b]);
        // dX = Rx + W (A^* dy) W = Rx - W (dS - Rd) W
        dX[b] = Rx[b] - nt[b].W * (dS[b] - Rd[b]) * nt[b].W;
      }
      for (int k = 0; k < nw; ++k) {
        double bty = 0.0;
        for (int i : c.rows_of_scalar[k])
          for (const auto& t : c.rows[i].scalars)
            if (t.scalar == k) bty += t.coeff * dy[i];
        dz[k] = rdw[k] - bty;
        dw[k] = (rcw[k] - st.w[k] * dz[k]) / st.z[k];
      }
    };

    // Predictor (affine scaling) direction.
    std::vector<Matrix> Rc_hat(nb);
    for (int b = 0; b < nb; ++b) {
      Rc_hat[b] = Matrix::Zero(c.block_sizes[b], c.block_sizes[b]);
      Rc_hat[b].diagonal() = -nt[b].lambda.array().square();
    }
    Vector rcw = -(st.w.array() * st.z.array()).matrix();
    compute_direction(Rc_hat, rcw);

    double ap = nonneg_step_limit(st.w, dw);
    double ad = nonneg_step_limit(st.z, dz);
    for (int b = 0; b < nb; ++b) {
      ap = std::min(ap, psd_step_limit(st.X[b], dX[b]));
      ad = std::min(ad, psd_step_limit(st.S[b], dS[b]));
    }
    const double ap_aff = std::min(1.0, ap);
    const double ad_aff = std::min(1.0, ad);

    double comp_aff = 0.0;
    for (int b = 0; b < nb; ++b)
      comp_aff += ((st.X[b] + ap_aff * dX[b]).cwiseProduct(
                       st.S[b] + ad_aff * dS[b]))
                      .sum();
    comp_aff += (st.w + ap_aff * dw).dot(st.z + ad_aff * dz);
    const double mu_aff = std::max(0.0, comp_aff) / nu;
    double sigma = std::pow(mu_aff / std::max(mu, 1e-300), 3.0);
    sigma = std::min(0.999, std::max(1e-8, sigma));

    // Corrector with Mehrotra second-order term in the scaled space.
    for (int b = 0; b < nb; ++b) {
      const Matrix dXh = nt[b].Ginv * dX[b] * nt[b].Ginv.transpose();
      const Matrix dSh = nt[b].G.transpose() * dS[b] * nt[b].G;
      const Matrix cross = dXh * dSh;
      Rc_hat[b] = -0.5 * (cross + cross.transpose());
      Rc_hat[b].diagonal().array() +=
          sigma * mu - nt[b].lambda.array().square();
    }
    rcw = (sigma * mu - (st.w.array() * st.z.array()) -
           (dw.array() * dz.array()))
              .matrix();
    compute_direction(Rc_hat, rcw);

    ap = nonneg_step_limit(st.w, dw);
    ad = nonneg_step_limit(st.z, dz);
    for (int b = 0; b < nb; ++b) {
      ap = std::min(ap, psd_step_limit(st.X[b], dX[b]));
      ad = std::min(ad, psd_step_limit(st.S[b], dS[b]));
    }
    ap = std::min(1.0, settings.step_fraction * ap);
    ad = std::min(1.0, settings.step_fraction * ad);

    if (settings.trace && !settings.trace->empty()) {
      settings.trace->back().step_primal = ap;
      settings.trace->back().step_dual = ad;
    }

    for (int b = 0; b < nb; ++b) {
      st.X[b] += ap * dX[b];
      st.S[b] += ad * dS[b];
      st.X[b] = 0.5 * (st.X[b] + st.X[b].transpose().eval());
      st.S[b] = 0.5 * (st.S[b] + st.S[b].transpose().eval());
    }
    st.w += ap * dw;
    st.z += ad * dz;
    st.y += ad * dy;

    if (std::max(ap, ad) < 1e-8) {
      if (++tiny_steps >= 3)
        return finish(rel_gap <= 1e2 * settings.rel_gap_tol
                          ? SolveStatus::IterationLimit
                          : SolveStatus::NumericalFailure,
                      rel_gap, iter + 1);
    } else {
      tiny_steps = 0;
    }
  }

  // Iteration limit: report where we stopped.
  const double pobj = primal_obj();
  const double dobj = dual_obj();
  const double rel_gap =
      std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
  return finish(SolveStatus::IterationLimit, rel_gap,
                settings.max_iterations);
}

std::vector<std::string> check_solution(const SdpProblem& problem,
                                        const ConicSolution& solution,
                                        double tol) {
  std::vector<std::string> out;
  for (size_t b = 0; b < problem.blocks.size(); ++b) {
    const Matrix& X = solution.block_values[b];
    if (X.rows() != problem.blocks[b].size) {
      out.push_back("block " + std::to_string(b) + ": size mismatch");
      continue;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(X, Eigen::EigenvaluesOnly);
    const double lmin = es.eigenvalues().minCoeff();
    const double floor = -1e-8 * (1.0 + std::abs(X.trace()));
    if (lmin < floor) {
      std::ostringstream ss;
      ss << "block " << b << ": minimum eigenvalue " << lmin << " below "
         << floor;
      out.push_back(ss.str());
    }
  }
  for (size_t s = 0; s < problem.scalars.size(); ++s) {
    const double v = solution.scalar_values[s];
    const Interval& bd = problem.scalars[s].bounds;
    if (v < bd.lo - tol * (1.0 + std::abs(bd.lo)) ||
        v > bd.hi + tol * (1.0 + std::abs(bd.hi))) {
      std::ostringstream ss;
      ss << "scalar " << s << " = " << v << " outside [" << bd.lo << ", "
         << bd.hi << "]";
      out.push_back(ss.str());
    }
  }
  for (size_t i = 0; i < problem.rows.size(); ++i) {
    const LinearRow& row = problem.rows[i];
    double lhs = 0.0;
    for (const auto& t : row.entries)
      lhs += t.coeff * solution.block_values[t.block](t.row, t.col);
    for (const auto& t : row.scalars)
      lhs += t.coeff * solution.scalar_values[t.scalar];
    const double viol = sense_violation(row.sense, lhs, row.rhs);
    if (viol > tol * (1.0 + std::abs(row.rhs))) {
      std::ostringstream ss;
      ss << "row " << i << " (" << row.label << "): violation " << viol;
      out.push_back(ss.str());
    }
  }
  if (solution.gap > tol) {
    std::ostringstream ss;
    ss << "duality gap " << solution.gap << " exceeds " << tol;
    out.push_back(ss.str());
  }
  // Reported objective must match the returned primal point.
  double pobj = problem.objective_constant;
  for (const auto& t : problem.objective.entries)
    pobj += t.coeff * solution.block_values[t.block](t.row, t.col);
  for (const auto& t : problem.objective.scalars)
    pobj += t.coeff * solution.scalar_values[t.scalar];
  if (std::abs(pobj - solution.objective) >
      1e-6 * (1.0 + std::abs(solution.objective)))
    out.push_back("reported objective is inconsistent with the primal point");
  return out;
}

std::string dump_problem(const SdpProblem& p) {
  std::ostringstream out;
  out << "blocks " << p.blocks.size() << "\n";
  for (size_t b = 0; b < p.blocks.size(); ++b)
    out << "  block " << b << " size " << p.blocks[b].size << " "
        << p.blocks[b].label << "\n";
  out << "scalars " << p.scalars.size() << "\n";
  for (size_t s = 0; s < p.scalars.size(); ++s)
    out << "  scalar " << s << " [" << p.scalars[s].bounds.lo << ", "
        << p.scalars[s].bounds.hi << "] " << p.scalars[s].name << "\n";
  out << "rows " << p.rows.size() << "\n";
  for (size_t i = 0; i < p.rows.size(); ++i) {
    const auto& r = p.rows[i];
    out << "  row " << i << " " << to_string(r.sense) << " " << r.rhs << " :";
    for (const auto& t : r.entries)
      out << " B" << t.block << "(" << t.row << "," << t.col << ")*" << t.coeff;
    for (const auto& t : r.scalars) out << " s" << t.scalar << "*" << t.coeff;
    out << "\n";
  }
  return out.str();
}

}  // namespace miqs
