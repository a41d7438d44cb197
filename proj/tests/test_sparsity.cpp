#include <doctest.h>

#include <algorithm>

#include "miqs/sparsity.hpp"
#include "test_helpers.hpp"

using namespace miqs;

namespace {

EdgeSet ring_edges() {
  return {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5},
          {1, 2}, {2, 5}, {4, 5}, {1, 4}};
}

bool clique_in_extended(const std::vector<Index>& c, const EdgeSet& edges) {
  for (size_t i = 0; i < c.size(); ++i)
    for (size_t j = i + 1; j < c.size(); ++j)
      if (!edges.count({std::min(c[i], c[j]), std::max(c[i], c[j])}))
        return false;
  return true;
}

// Exhaustive running-intersection check: the cliques containing any vertex
// must induce a connected subtree of the clique tree.
bool running_intersection(const CliqueDecomposition& d) {
  for (Index v = 0; v < d.n_vertices; ++v) {
    std::vector<int> holding;
    for (int c = 0; c < static_cast<int>(d.cliques.size()); ++c)
      if (std::binary_search(d.cliques[c].begin(), d.cliques[c].end(), v))
        holding.push_back(c);
    if (holding.size() <= 1) continue;
    std::set<int> reached = {holding.front()};
    bool grew = true;
    while (grew) {
      grew = false;
      for (const auto& e : d.tree_edges) {
        const bool a_in = std::count(holding.begin(), holding.end(), e.a) > 0;
        const bool b_in = std::count(holding.begin(), holding.end(), e.b) > 0;
        if (!a_in || !b_in) continue;
        if (reached.count(e.a) && !reached.count(e.b)) {
          reached.insert(e.b);
          grew = true;
        } else if (reached.count(e.b) && !reached.count(e.a)) {
          reached.insert(e.a);
          grew = true;
        }
      }
    }
    if (reached.size() != holding.size()) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("cs graph of the ring polynomial") {
  const auto inst = testing::ring_instance();
  const CsGraph g = build_cs_graph(inst);
  CHECK(g.n_vertices == 6);
  CHECK(g.edges == ring_edges());
}

TEST_CASE("cs graph: diagonal-only variable stays isolated") {
  MiqcqpInstance inst;
  inst.n_cont = 1;
  inst.cont_bounds = {{-1.0, 1.0}};
  inst.objective.add_quad_entry(0, 0, 1.0);
  const CsGraph g = build_cs_graph(inst);
  CHECK(g.n_vertices == 1);
  CHECK(g.edges.empty());
}

TEST_CASE("cs graph: dense three-variable quadratic is K3") {
  MiqcqpInstance inst;
  inst.n_cont = 3;
  inst.cont_bounds.assign(3, {-1.0, 1.0});
  for (Index i = 0; i < 3; ++i)
    for (Index j = i; j < 3; ++j) inst.objective.add_quad_entry(i, j, 1.0);
  const CsGraph g = build_cs_graph(inst);
  CHECK(g.edges.size() == 3);
}

TEST_CASE("chordal extension of the ring graph adds exactly chord (2,4)") {
  CsGraph g{6, ring_edges()};
  const auto d = chordal_extension(g, FillHeuristic::MinDegree);
  REQUIRE(d.fill_edges.size() == 1);
  CHECK(*d.fill_edges.begin() == std::make_pair<Index, Index>(2, 4));
  CHECK(is_chordal(d.extended_edges, 6).chordal);
}

TEST_CASE("chordal extension: trees and complete graphs need no fill") {
  CsGraph tree{5, {{0, 1}, {1, 2}, {1, 3}, {3, 4}}};
  CHECK(chordal_extension(tree, FillHeuristic::MinDegree).fill_edges.empty());
  CHECK(chordal_extension(tree, FillHeuristic::MinFill).fill_edges.empty());

  CsGraph k4{4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
  CHECK(chordal_extension(k4, FillHeuristic::MinDegree).fill_edges.empty());
  CHECK(chordal_extension(k4, FillHeuristic::MinFill).fill_edges.empty());
}

TEST_CASE("maximal cliques of the extended ring graph") {
  CsGraph g{6, ring_edges()};
  auto d = chordal_extension(g, FillHeuristic::MinDegree);
  maximal_cliques(d);
  REQUIRE(d.cliques.size() == 3);
  std::multiset<size_t> sizes;
  for (const auto& c : d.cliques) sizes.insert(c.size());
  CHECK(sizes == std::multiset<size_t>{2, 4, 4});
  CHECK(std::count(d.cliques.begin(), d.cliques.end(),
                   std::vector<Index>{0, 3}) == 1);
  CHECK(std::count(d.cliques.begin(), d.cliques.end(),
                   std::vector<Index>{0, 2, 4, 5}) == 1);
  CHECK(std::count(d.cliques.begin(), d.cliques.end(),
                   std::vector<Index>{0, 1, 2, 4}) == 1);
}

TEST_CASE("maximal cliques: path and K4") {
  CsGraph path{3, {{0, 1}, {1, 2}}};
  auto d = chordal_extension(path, FillHeuristic::MinDegree);
  maximal_cliques(d);
  REQUIRE(d.cliques.size() == 2);
  CHECK(d.cliques[0] == std::vector<Index>{0, 1});
  CHECK(d.cliques[1] == std::vector<Index>{1, 2});

  CsGraph k4{4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
  auto dk = chordal_extension(k4, FillHeuristic::MinDegree);
  maximal_cliques(dk);
  REQUIRE(dk.cliques.size() == 1);
  CHECK(dk.cliques[0].size() == 4);
}

TEST_CASE("clique tree of the ring example") {
  CsGraph g{6, ring_edges()};
  auto d = chordal_extension(g, FillHeuristic::MinDegree);
  maximal_cliques(d);
  clique_tree(d);
  REQUIRE(d.tree_edges.size() == 2);
  // The separator between the two four-cliques is {0, 2, 4}.
  bool found = false;
  for (const auto& e : d.tree_edges)
    if (e.separator == std::vector<Index>{0, 2, 4}) found = true;
  CHECK(found);
  CHECK(running_intersection(d));
}

TEST_CASE("clique tree: single clique and disjoint cliques") {
  CsGraph k3{3, {{0, 1}, {0, 2}, {1, 2}}};
  auto d = chordal_extension(k3, FillHeuristic::MinDegree);
  maximal_cliques(d);
  clique_tree(d);
  CHECK(d.tree_edges.empty());

  CsGraph two{4, {{0, 1}, {2, 3}}};
  auto d2 = chordal_extension(two, FillHeuristic::MinDegree);
  maximal_cliques(d2);
  clique_tree(d2);
  CHECK(d2.tree_edges.empty());
}

TEST_CASE("is_chordal: ring graph is not chordal, extension is") {
  const auto cert = is_chordal(ring_edges(), 6);
  CHECK(!cert.chordal);
  std::set<Index> cyc(cert.chordless_cycle.begin(),
                      cert.chordless_cycle.end());
  CHECK(cert.chordless_cycle.size() >= 4);
  CHECK(cyc == std::set<Index>{1, 2, 4, 5});

  EdgeSet ext = ring_edges();
  ext.insert({2, 4});
  CHECK(is_chordal(ext, 6).chordal);
  CHECK(is_chordal({}, 0).chordal);
  CHECK(is_chordal({}, 4).chordal);
}

TEST_CASE("random graphs: extension is chordal and preserves edges") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> prob(0.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    const Index n = 4 + static_cast<Index>(rng() % 12);
    CsGraph g;
    g.n_vertices = n;
    for (Index i = 0; i < n; ++i)
      for (Index j = i + 1; j < n; ++j)
        if (prob(rng) < 0.3) g.edges.insert({i, j});
    for (auto heuristic : {FillHeuristic::MinDegree, FillHeuristic::MinFill}) {
      auto d = chordal_extension(g, heuristic);
      maximal_cliques(d);
      clique_tree(d);

      const auto cert = is_chordal(d.extended_edges, n);
      CHECK(cert.chordal);
      for (const auto& e : g.edges) CHECK(d.extended_edges.count(e) == 1);
      if (is_chordal(g.edges, n).chordal) CHECK(d.fill_edges.empty());

      // Cliques are cliques, mutually non-contained, and cover every edge.
      for (const auto& c : d.cliques)
        CHECK(clique_in_extended(c, d.extended_edges));
      for (size_t a = 0; a < d.cliques.size(); ++a)
        for (size_t b = 0; b < d.cliques.size(); ++b)
          if (a != b)
            CHECK(!std::includes(d.cliques[a].begin(), d.cliques[a].end(),
                                 d.cliques[b].begin(), d.cliques[b].end()));
      for (const auto& [u, v] : g.edges) {
        bool covered = false;
        for (const auto& c : d.cliques)
          if (std::binary_search(c.begin(), c.end(), u) &&
              std::binary_search(c.begin(), c.end(), v))
            covered = true;
        CHECK(covered);
      }
      CHECK(running_intersection(d));
    }
  }
}

TEST_CASE("decomposition is deterministic") {
  const auto inst = testing::ring_instance();
  const auto d1 = decompose(inst);
  const auto d2 = decompose(inst);
  CHECK(d1.elimination_order == d2.elimination_order);
  CHECK(d1.cliques == d2.cliques);
  CHECK(d1.fill_edges == d2.fill_edges);
  CHECK(d1.ts_blocks == d2.ts_blocks);
}

TEST_CASE("term-sparsity blocks never exceed their cliques") {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const auto inst = testing::random_qcqp(rng, 7, 0.3);
    const auto g = build_cs_graph(inst);
    const auto d = decompose(inst);
    for (const auto& b : d.ts_blocks) {
      bool inside = false;
      for (const auto& c : d.cliques)
        if (std::includes(c.begin(), c.end(), b.begin(), b.end()))
          inside = true;
      CHECK(inside);
    }
    // Every original edge must stay inside one block.
    for (const auto& [u, v] : g.edges) {
      bool covered = false;
      for (const auto& b : d.ts_blocks)
        if (std::binary_search(b.begin(), b.end(), u) &&
            std::binary_search(b.begin(), b.end(), v))
          covered = true;
      CHECK(covered);
    }
  }
}

TEST_CASE("decomposition report mentions the key statistics") {
  const auto d = decompose(testing::ring_instance());
  const auto report = decomposition_report(d);
  CHECK(report.find("fill edges: 1") != std::string::npos);
  CHECK(report.find("cliques: 3") != std::string::npos);
}
