#pragma once

#include <Eigen/SparseCore>

#include <complex>
#include <string>
#include <vector>

#include "miqs/model.hpp"
#include "miqs/sparsity.hpp"

namespace miqs {

using SpMat = Eigen::SparseMatrix<double>;
using SpMatC = Eigen::SparseMatrix<std::complex<double>>;

struct BusData {
  int id = 0;
  int type = 1;
  double pd = 0.0, qd = 0.0;  // p.u.
  double gs = 0.0, bs = 0.0;  // p.u.
  double vmin = 0.9, vmax = 1.1;
};

struct BranchData {
  int from = 0, to = 0;  // bus indices (0-based)
  double r = 0.0, x = 0.0, b = 0.0;
  double tap = 1.0;
  double shift = 0.0;    // radians
  double s_max = 0.0;    // p.u.; 0 means unlimited
};

struct GenData {
  int bus = 0;  // bus index (0-based)
  double pmin = 0.0, pmax = 0.0;
  double qmin = 0.0, qmax = 0.0;
  double c2 = 0.0, c1 = 0.0, c0 = 0.0;  // cost on MW
};

struct PowerCase {
  std::string name;
  double base_mva = 100.0;
  std::vector<BusData> buses;
  std::vector<BranchData> branches;
  std::vector<GenData> generators;
};

struct UcGenData {
  double ramp_up = 0.0, ramp_down = 0.0;          // p.u. per period
  double startup_power = 0.0, shutdown_power = 0.0;  // p.u.
  int min_up = 1, min_down = 1;
  double startup_cost = 0.0;
  int initial_status = 1;
  double initial_output = 0.0;  // p.u.
};

struct UcData {
  std::vector<UcGenData> generators;
  std::vector<double> load_profile;  // per-period demand multipliers
};

/// Bus admittance matrix plus the per-branch building blocks of the
/// pi-model (from/to self and transfer admittances, end shunts).
struct Admittance {
  SpMatC ybus;
  std::vector<std::complex<double>> yff, yft, ytf, ytt;
  std::vector<std::complex<double>> ysh_from, ysh_to;
};

Admittance build_admittance(const PowerCase& grid);

/// Real 2|N| x 2|N| embeddings of the complex injection forms: for
/// X = [Re V; Im V], trace(bus_p[i] X X^T) is the active injection at bus i,
/// trace(bus_q[i] X X^T) the reactive one, trace(bus_vm[i] X X^T) = |V_i|^2,
/// and branch_p/branch_q the from-side branch flows.
struct OpfMatrices {
  Index n_buses = 0;
  std::vector<SpMat> bus_p, bus_q, bus_vm;
  std::vector<SpMat> branch_p, branch_q;
};

OpfMatrices build_opf_matrices(const PowerCase& grid, const Admittance& adm);

enum class VariationKind { None, InitialZero, Noise, Gamma };

struct Variation {
  VariationKind kind = VariationKind::None;
  double level = 0.0;   // noise level (mean |eps|)
  unsigned seed = 0;
  double gamma = 1.0;
};

/// Inputs of the multi-period model after variations are applied: the grid,
/// the commitment data, and the per-period demand schedule (T x |N|).
struct UcOpfInputs {
  PowerCase grid;
  UcData uc;
  int periods = 1;
  Matrix pd;
  Matrix qd;
};

UcOpfInputs prepare_inputs(const PowerCase& grid, const UcData& uc, int periods,
                           const Variation& variation = {});

/// Variable layout of the built instance. Periods are 1-based; period 0 is
/// data (initial conditions).
struct UcOpfVars {
  Index n_buses = 0, n_gens = 0, n_branches = 0;
  int periods = 0;
  Index pg0 = 0, qg0 = 0, pf0 = 0, qf0 = 0, pb0 = 0, qb0 = 0;

  Index x(int t, Index coord) const {
    return static_cast<Index>(t - 1) * 2 * n_buses + coord;
  }
  Index re(int t, Index bus) const { return x(t, bus); }
  Index im(int t, Index bus) const { return x(t, n_buses + bus); }
  Index pg(int t, Index g) const {
    return pg0 + static_cast<Index>(t - 1) * n_gens + g;
  }
  Index qg(int t, Index g) const {
    return qg0 + static_cast<Index>(t - 1) * n_gens + g;
  }
  Index pf(int t, Index l) const {
    return pf0 + static_cast<Index>(t - 1) * n_branches + l;
  }
  Index qf(int t, Index l) const {
    return qf0 + static_cast<Index>(t - 1) * n_branches + l;
  }
  Index pbus(int t, Index i) const {
    return pb0 + static_cast<Index>(t - 1) * n_buses + i;
  }
  Index qbus(int t, Index i) const {
    return qb0 + static_cast<Index>(t - 1) * n_buses + i;
  }
  Index n_cont() const { return qb0 + static_cast<Index>(periods) * n_buses; }

  Index v(int t, Index g) const {
    return static_cast<Index>(t - 1) * n_gens + g;
  }
  Index ystart(int t, Index g) const {
    return static_cast<Index>(periods) * n_gens + v(t, g);
  }
  Index zstop(int t, Index g) const {
    return 2 * static_cast<Index>(periods) * n_gens + v(t, g);
  }
  Index n_int() const { return 3 * static_cast<Index>(periods) * n_gens; }
};

std::pair<MiqcqpInstance, UcOpfVars> build_ucopf_instance(
    const UcOpfInputs& inputs);

/// Per-period voltage coupling graph; the decomposition of one period
/// replicates across all periods.
CsGraph voltage_cs_graph(const OpfMatrices& matrices);

}  // namespace miqs
