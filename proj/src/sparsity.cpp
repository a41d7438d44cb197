#include "miqs/sparsity.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace miqs {

namespace {

std::pair<Index, Index> ordered(Index a, Index b) {
  return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

void add_form_edges(const QuadraticForm& form, EdgeSet& edges) {
  for (const auto& e : form.quad)
    if (e.row != e.col && e.value != 0.0)
      edges.insert(ordered(e.row, e.col));
}

using AdjList = std::vector<std::set<Index>>;

AdjList to_adjacency(const EdgeSet& edges, Index n) {
  AdjList adj(n);
  for (const auto& [a, b] : edges) {
    adj[a].insert(b);
    adj[b].insert(a);
  }
  return adj;
}

}  // namespace

CsGraph build_cs_graph(const MiqcqpInstance& inst) {
  CsGraph g;
  g.n_vertices = inst.n_cont;
  add_form_edges(inst.objective, g.edges);
  for (const auto& qc : inst.quad_constraints) add_form_edges(qc.form, g.edges);
  return g;
}

CliqueDecomposition chordal_extension(const CsGraph& graph,
                                      FillHeuristic heuristic) {
  const Index n = graph.n_vertices;
  CliqueDecomposition d;
  d.n_vertices = n;
  d.original_edges = graph.edges;
  d.extended_edges = graph.edges;

  AdjList adj = to_adjacency(graph.edges, n);
  std::vector<bool> eliminated(n, false);

  auto fill_count = [&](Index v) {
    // Number of missing edges among the remaining neighbors of v.
    std::vector<Index> nb(adj[v].begin(), adj[v].end());
    long missing = 0;
    for (size_t i = 0; i < nb.size(); ++i)
      for (size_t j = i + 1; j < nb.size(); ++j)
        if (!adj[nb[i]].count(nb[j])) ++missing;
    return missing;
  };

  for (Index step = 0; step < n; ++step) {
    Index best = -1;
    long best_score = 0;
    for (Index v = 0; v < n; ++v) {
      if (eliminated[v]) continue;
      const long score = heuristic == FillHeuristic::MinDegree
                             ? static_cast<long>(adj[v].size())
                             : fill_count(v);
      if (best < 0 || score < best_score) {
        best = v;
        best_score = score;
      }
    }
    d.elimination_order.push_back(best);
    eliminated[best] = true;

    std::vector<Index> nb(adj[best].begin(), adj[best].end());
    for (size_t i = 0; i < nb.size(); ++i)
      for (size_t j = i + 1; j < nb.size(); ++j) {
        if (!adj[nb[i]].count(nb[j])) {
          adj[nb[i]].insert(nb[j]);
          adj[nb[j]].insert(nb[i]);
          d.fill_edges.insert(ordered(nb[i], nb[j]));
          d.extended_edges.insert(ordered(nb[i], nb[j]));
        }
      }
    for (Index u : nb) adj[u].erase(best);
    adj[best].clear();
  }
  return d;
}

void maximal_cliques(CliqueDecomposition& d) {
  const Index n = d.n_vertices;
  AdjList adj = to_adjacency(d.extended_edges, n);
  std::vector<Index> position(n);
  for (Index i = 0; i < n; ++i) position[d.elimination_order[i]] = i;

  std::vector<std::vector<Index>> candidates;
  for (Index v = 0; v < n; ++v) {
    std::vector<Index> c = {v};
    for (Index u : adj[v])
      if (position[u] > position[v]) c.push_back(u);
    // Perfect elimination ordering: the later neighbors must form a clique.
    for (size_t i = 1; i < c.size(); ++i)
      for (size_t j = i + 1; j < c.size(); ++j)
        if (!adj[c[i]].count(c[j]))
          throw std::runtime_error(
              "maximal_cliques: elimination order is not perfect elimination");
    std::sort(c.begin(), c.end());
    candidates.push_back(std::move(c));
  }

  // Keep the set-maximal candidates only.
  std::sort(candidates.begin(), candidates.end(),
            [](const auto& a, const auto& b) {
              if (a.size() != b.size()) return a.size() > b.size();
              return a < b;
            });
  candidates.erase(std::unique(candidates.begin(), candidates.end()),
                   candidates.end());
  d.cliques.clear();
  for (const auto& c : candidates) {
    bool contained = false;
    for (const auto& kept : d.cliques) {
      if (std::includes(kept.begin(), kept.end(), c.begin(), c.end())) {
        contained = true;
        break;
      }
    }
    if (!contained) d.cliques.push_back(c);
  }
  std::sort(d.cliques.begin(), d.cliques.end());
}

void clique_tree(CliqueDecomposition& d) {
  d.tree_edges.clear();
  const int m = static_cast<int>(d.cliques.size());
  struct Cand {
    int w;
    int a;
    int b;
    std::vector<Index> sep;
  };
  std::vector<Cand> cands;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      std::vector<Index> sep;
      std::set_intersection(d.cliques[i].begin(), d.cliques[i].end(),
                            d.cliques[j].begin(), d.cliques[j].end(),
                            std::back_inserter(sep));
      if (!sep.empty())
        cands.push_back({static_cast<int>(sep.size()), i, j, std::move(sep)});
    }
  std::sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) {
    if (x.w != y.w) return x.w > y.w;
    if (x.a != y.a) return x.a < y.a;
    return x.b < y.b;
  });

  // Kruskal over the intersection graph; one tree per connected component.
  std::vector<int> parent(m);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (auto& c : cands) {
    const int ra = find(c.a), rb = find(c.b);
    if (ra == rb) continue;
    parent[ra] = rb;
    d.tree_edges.push_back({c.a, c.b, std::move(c.sep)});
  }
}

void term_sparsity_blocks(CliqueDecomposition& d, const CsGraph& graph) {
  d.ts_blocks.clear();
  std::vector<std::vector<Index>> blocks;
  for (const auto& clique : d.cliques) {
    // Components of the problem-support subgraph induced on the clique;
    // fill edges do not count as support.
    std::vector<bool> seen(clique.size(), false);
    for (size_t s = 0; s < clique.size(); ++s) {
      if (seen[s]) continue;
      std::vector<Index> comp;
      std::deque<size_t> queue = {s};
      seen[s] = true;
      while (!queue.empty()) {
        const size_t cur = queue.front();
        queue.pop_front();
        comp.push_back(clique[cur]);
        for (size_t t = 0; t < clique.size(); ++t)
          if (!seen[t] && graph.has_edge(clique[cur], clique[t])) {
            seen[t] = true;
            queue.push_back(t);
          }
      }
      std::sort(comp.begin(), comp.end());
      blocks.push_back(std::move(comp));
    }
  }
  // Drop blocks contained in another block; PSD-ness of a principal
  // submatrix is implied.
  std::sort(blocks.begin(), blocks.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a < b;
  });
  blocks.erase(std::unique(blocks.begin(), blocks.end()), blocks.end());
  for (const auto& b : blocks) {
    bool contained = false;
    for (const auto& kept : d.ts_blocks)
      if (std::includes(kept.begin(), kept.end(), b.begin(), b.end())) {
        contained = true;
        break;
      }
    if (!contained) d.ts_blocks.push_back(b);
  }
  std::sort(d.ts_blocks.begin(), d.ts_blocks.end());
}

CliqueDecomposition decompose(const MiqcqpInstance& inst,
                              FillHeuristic heuristic) {
  const CsGraph g = build_cs_graph(inst);
  CliqueDecomposition d = chordal_extension(g, heuristic);
  maximal_cliques(d);
  clique_tree(d);
  term_sparsity_blocks(d, g);
  return d;
}

ChordalityCertificate is_chordal(const EdgeSet& edges, Index n) {
  ChordalityCertificate cert;
  AdjList adj = to_adjacency(edges, n);

  // Maximum-cardinality search; ties go to the lowest vertex index.
  std::vector<int> weight(n, 0);
  std::vector<bool> visited(n, false);
  std::vector<Index> mcs;
  for (Index step = 0; step < n; ++step) {
    Index best = -1;
    for (Index v = 0; v < n; ++v)
      if (!visited[v] && (best < 0 || weight[v] > weight[best])) best = v;
    visited[best] = true;
    mcs.push_back(best);
    for (Index u : adj[best])
      if (!visited[u]) ++weight[u];
  }

  // The reverse of the MCS visit order is a perfect elimination ordering
  // iff the graph is chordal.
  std::vector<Index> peo(mcs.rbegin(), mcs.rend());
  std::vector<Index> position(n);
  for (Index i = 0; i < n; ++i) position[peo[i]] = i;

  for (Index i = 0; i < n; ++i) {
    const Index v = peo[i];
    std::vector<Index> later;
    for (Index u : adj[v])
      if (position[u] > i) later.push_back(u);
    for (size_t a = 0; a < later.size(); ++a)
      for (size_t b = a + 1; b < later.size(); ++b) {
        if (adj[later[a]].count(later[b])) continue;
        // Certificate: a chordless cycle through v between the two
        // non-adjacent neighbors, avoiding the rest of N[v].
        const Index u = later[a], w = later[b];
        std::vector<bool> blocked(n, false);
        blocked[v] = true;
        for (Index x : adj[v])
          if (x != u && x != w) blocked[x] = true;
        std::vector<Index> prev(n, -1);
        std::deque<Index> queue = {u};
        std::vector<bool> seen(n, false);
        seen[u] = true;
        while (!queue.empty()) {
          const Index cur = queue.front();
          queue.pop_front();
          if (cur == w) break;
          for (Index nx : adj[cur]) {
            if (seen[nx] || blocked[nx]) continue;
            seen[nx] = true;
            prev[nx] = cur;
            queue.push_back(nx);
          }
        }
        std::vector<Index> path;
        for (Index cur = w; cur != -1; cur = prev[cur]) path.push_back(cur);
        std::reverse(path.begin(), path.end());
        cert.chordal = false;
        cert.chordless_cycle = {v};
        cert.chordless_cycle.insert(cert.chordless_cycle.end(), path.begin(),
                                    path.end());
        return cert;
      }
  }
  cert.chordal = true;
  cert.ordering = peo;
  return cert;
}

std::string decomposition_report(const CliqueDecomposition& d) {
  std::ostringstream out;
  out << "vertices: " << d.n_vertices << "\n";
  out << "original edges: " << d.original_edges.size() << "\n";
  out << "fill edges: " << d.fill_edges.size() << "\n";
  out << "cliques: " << d.cliques.size() << "\n";
  std::map<size_t, int> clique_hist;
  for (const auto& c : d.cliques) clique_hist[c.size()]++;
  out << "clique size histogram:";
  for (const auto& [sz, cnt] : clique_hist) out << " " << sz << "x" << cnt;
  out << "\n";
  out << "blocks: " << d.ts_blocks.size() << "\n";
  size_t max_block = 0;
  std::map<size_t, int> block_hist;
  for (const auto& b : d.ts_blocks) {
    block_hist[b.size()]++;
    max_block = std::max(max_block, b.size());
  }
  out << "max block size: " << max_block << "\n";
  out << "block size histogram:";
  for (const auto& [sz, cnt] : block_hist) out << " " << sz << "x" << cnt;
  out << "\n";
  return out.str();
}

}  // namespace miqs
