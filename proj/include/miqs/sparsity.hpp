#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "miqs/model.hpp"

namespace miqs {

using EdgeSet = std::set<std::pair<Index, Index>>;  // pairs stored (lo, hi)

/// Correlative-sparsity graph: one vertex per continuous variable, an edge
/// wherever two variables share a quadratic term.
struct CsGraph {
  Index n_vertices = 0;
  EdgeSet edges;

  bool has_edge(Index a, Index b) const {
    if (a > b) std::swap(a, b);
    return edges.count({a, b}) > 0;
  }
};

enum class FillHeuristic { MinDegree, MinFill };

struct CliqueTreeEdge {
  int a = 0;
  int b = 0;
  std::vector<Index> separator;
};

struct CliqueDecomposition {
  Index n_vertices = 0;
  EdgeSet original_edges;
  EdgeSet extended_edges;  // original plus fill
  EdgeSet fill_edges;
  std::vector<Index> elimination_order;  // perfect elimination ordering
  std::vector<std::vector<Index>> cliques;  // maximal, sorted vertex lists
  std::vector<CliqueTreeEdge> tree_edges;   // max-weight spanning forest
  /// Blocks after one term-sparsity closure pass: per clique, the connected
  /// components of the induced problem-support subgraph.
  std::vector<std::vector<Index>> ts_blocks;
};

CsGraph build_cs_graph(const MiqcqpInstance& instance);

/// Chordal extension via elimination game; fills extended_edges, fill_edges
/// and elimination_order. Ties break toward the lowest vertex index.
CliqueDecomposition chordal_extension(const CsGraph& graph,
                                      FillHeuristic heuristic);

/// Enumerates the maximal cliques of the extended graph from the perfect
/// elimination ordering. Throws if the ordering is not perfect-elimination.
void maximal_cliques(CliqueDecomposition& decomp);

/// Maximum-weight spanning forest over the clique intersection graph
/// (weight = separator size); establishes the running-intersection property.
void clique_tree(CliqueDecomposition& decomp);

/// One term-sparsity pass: splits each clique block along the connected
/// components of the problem-support subgraph it induces. Sub-blocks that are
/// contained in another block are dropped.
void term_sparsity_blocks(CliqueDecomposition& decomp, const CsGraph& graph);

/// Full pipeline used by the relaxation builders.
CliqueDecomposition decompose(const MiqcqpInstance& instance,
                              FillHeuristic heuristic = FillHeuristic::MinDegree);

struct ChordalityCertificate {
  bool chordal = false;
  std::vector<Index> ordering;        // perfect elimination ordering if chordal
  std::vector<Index> chordless_cycle; // a chordless cycle (length >= 4) if not
};

ChordalityCertificate is_chordal(const EdgeSet& edges, Index n);

/// Human-readable report: fill edges, clique-size histogram, block counts.
std::string decomposition_report(const CliqueDecomposition& decomp);

}  // namespace miqs
