#include <doctest.h>

#include "dlab/hypercore.hpp"
#include "support/oracles.hpp"

#include <random>
#include <sstream>

using namespace dlab;

namespace {

std::vector<Vertex> vs(std::initializer_list<Vertex> l) { return l; }

}  // namespace

TEST_CASE("binomial and combinations") {
  CHECK(binomial(6, 3) == 20);
  CHECK(binomial(5, 7) == 0);
  CHECK(binomial(60, 3) == 34220);
  auto c = combinations(5, 2);
  REQUIRE(c.size() == 10);
  CHECK(c.front() == vs({0, 1}));
  CHECK(c.back() == vs({3, 4}));
  CHECK(combinations(3, 0).size() == 1);
}

TEST_CASE("normalization and validation") {
  auto h = Hypergraph::from_edges(5, 3, {{2, 1, 0}, {4, 0, 3}, {1, 0, 3}});
  CHECK(h.edge_list() == EdgeList{{0, 1, 2}, {0, 1, 3}, {0, 3, 4}});
  CHECK(h.find_edge(vs({0, 1, 3})) == std::optional<std::size_t>(1));
  CHECK(h.has_edge(vs({4, 3, 0})));
  CHECK_FALSE(h.has_edge(vs({1, 2, 3})));
  CHECK_THROWS_AS(Hypergraph::from_edges(5, 3, {{0, 1, 2}, {2, 1, 0}}), FormatError);
  CHECK_THROWS_AS(Hypergraph::from_edges(5, 3, {{0, 1, 5}}), FormatError);
  CHECK_THROWS_AS(Hypergraph::from_edges(5, 3, {{0, 1, 1}}), FormatError);
  CHECK_THROWS_AS(Hypergraph::from_edges(5, 3, {{0, 1}}), FormatError);
  CHECK(Hypergraph::from_edges_merged(5, 3, {{0, 1, 2}, {2, 1, 0}}).edge_count() == 1);
}

TEST_CASE("degree examples") {
  auto k6 = Hypergraph::complete(6, 3);
  CHECK(degree(k6, vs({0, 1})) == 4);
  CHECK(degree(Hypergraph(6, 3), vs({0})) == 0);
  auto h = Hypergraph::from_edges(6, 3, {{0, 1, 2}, {0, 1, 3}, {0, 4, 5}});
  CHECK(degree(h, vs({0, 1})) == 2);
  CHECK(degree(h, VertexSet(6, {0})) == 3);
  CHECK_THROWS_AS(degree(h, vs({0, 1, 2})), SizeError);
}

TEST_CASE("min_d_degree examples") {
  for (std::size_t n : {5u, 7u}) {
    auto kn = Hypergraph::complete(n, 3);
    CHECK(min_d_degree(kn, 1).value == binomial(n - 1, 2));
    CHECK(min_d_degree(kn, 2).value == n - 2);
  }
  auto iso = Hypergraph::from_edges(5, 3, {{0, 1, 2}, {1, 2, 3}});
  auto md = min_d_degree(iso, 1);
  CHECK(md.value == 0);
  CHECK(md.witness == vs({4}));
  // singleton degrees: 0->3, 1->2, 2->3, 3->2, 4->2
  auto h = Hypergraph::from_edges(5, 3, {{0, 1, 2}, {0, 1, 3}, {2, 3, 4}, {0, 2, 4}});
  auto m1 = min_d_degree(h, 1);
  CHECK(m1.value == 2);
  CHECK(m1.witness == vs({1}));
  CHECK_THROWS_AS(min_d_degree(h, 3), SizeError);
  CHECK_THROWS_AS(min_d_degree(h, 0), SizeError);
}

TEST_CASE("degree agrees with a naive recount on random instances") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 1000; ++trial) {
    std::size_t k = 2 + rng() % 3;
    std::size_t n = k + 1 + rng() % 6;
    auto edges = oracle::random_edges(rng, n, k, 0.5);
    auto h = Hypergraph::from_edges(n, k, edges);
    std::size_t d = 1 + rng() % (k - 1);
    std::size_t naive_min = SIZE_MAX;
    for (auto& s : combinations(n, d)) {
      auto want = oracle::degree(edges, s);
      REQUIRE(degree(h, s) == want);
      naive_min = std::min(naive_min, want);
    }
    REQUIRE(min_d_degree(h, d).value == naive_min);
  }
}

TEST_CASE("degree monotonicity across d") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 6 + rng() % 3;
    auto h = Hypergraph::from_edges(n, 4, oracle::random_edges(rng, n, 4, 0.7));
    for (std::size_t d = 2; d <= 3; ++d) {
      for (std::size_t dp = 1; dp < d; ++dp) {
        // alpha = delta_d / C(n-d,k-d); check delta_d' >= alpha C(n-d',k-d') exactly
        auto dd = min_d_degree(h, d).value;
        auto ddp = min_d_degree(h, dp).value;
        CHECK(ddp * binomial(n - d, 4 - d) >= dd * binomial(n - dp, 4 - dp));
      }
    }
  }
}

TEST_CASE("induced, remove_vertices, link") {
  auto h = Hypergraph::from_edges(5, 3, {{0, 1, 2}, {2, 3, 4}});
  auto all = induced(h, VertexSet::all(5));
  CHECK(all.graph == h);
  auto sub = induced(h, vs({0, 1, 2, 3}));
  CHECK(sub.graph.edge_list() == EdgeList{{0, 1, 2}});
  CHECK(sub.to_original == vs({0, 1, 2, 3}));
  auto k6 = Hypergraph::complete(6, 3);
  auto four = induced(k6, vs({1, 3, 4, 5}));
  CHECK(four.graph == Hypergraph::complete(4, 3));
  auto rem = remove_vertices(h, VertexSet(5, {0}));
  CHECK(rem.graph.edge_list() == EdgeList{{1, 2, 3}});
  CHECK(rem.to_original == vs({1, 2, 3, 4}));

  auto k5 = Hypergraph::complete(5, 3);
  auto l = link(k5, vs({0}));
  CHECK(l.k() == 2);
  CHECK(l.edge_list() == EdgeList{{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}});
  auto g = Hypergraph::from_edges(5, 3, {{0, 1, 2}, {0, 3, 4}, {1, 3, 4}});
  CHECK(link(g, vs({0})).edge_list() == EdgeList{{1, 2}, {3, 4}});
  CHECK(link(g, vs({3})).edge_count() == degree(g, vs({3})));
  CHECK_THROWS_AS(link(g, vs({0, 1, 2})), SizeError);
}

TEST_CASE("girth examples") {
  CHECK_FALSE(girth(Hypergraph::from_edges(5, 3, {{0, 1, 2}, {2, 3, 4}})).has_value());
  CHECK(girth(Hypergraph::from_edges(4, 3, {{0, 1, 2}, {1, 2, 3}})) == std::optional<std::size_t>(2));
  CHECK(girth(Hypergraph::from_edges(6, 3, {{0, 1, 2}, {2, 3, 4}, {4, 5, 0}})) == std::optional<std::size_t>(3));
  // duplicate edges in a free family count as a 2-cycle
  EdgeList dup{{0, 1, 2}, {0, 1, 2}};
  CHECK(berge_girth(dup) == std::optional<std::size_t>(2));
  // a loose 5-cycle
  EdgeList c5;
  for (Vertex i = 0; i < 5; ++i) c5.push_back({2 * i, 2 * i + 1, (2 * i + 2) % 10});
  CHECK(berge_girth(c5) == std::optional<std::size_t>(5));
}

TEST_CASE("girth agrees with exhaustive sequence search") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t n = 6 + rng() % 7;
    std::size_t m = 1 + rng() % 7;
    EdgeList edges;
    for (std::size_t i = 0; i < m; ++i) {
      std::vector<Vertex> all(n);
      for (std::size_t v = 0; v < n; ++v) all[v] = static_cast<Vertex>(v);
      std::shuffle(all.begin(), all.end(), rng);
      all.resize(3);
      std::sort(all.begin(), all.end());
      edges.push_back(all);
    }
    REQUIRE(berge_girth(edges) == oracle::berge_girth(edges));
  }
}

TEST_CASE("linearity") {
  CHECK(is_linear(Hypergraph::from_edges(6, 3, {{0, 1, 2}, {3, 4, 5}})));
  CHECK_FALSE(is_linear(Hypergraph::from_edges(4, 3, {{0, 1, 2}, {1, 2, 3}})));
  auto fano = Hypergraph::from_edges(7, 3, {{0, 1, 3}, {1, 2, 4}, {2, 3, 5}, {3, 4, 6}, {4, 5, 0}, {5, 6, 1}, {6, 0, 2}});
  CHECK(is_linear(fano));
  CHECK(girth(fano) == std::optional<std::size_t>(3));
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    auto h = Hypergraph::from_edges(7, 3, oracle::random_edges(rng, 7, 3, 0.08));
    CHECK((girth(h) == std::optional<std::size_t>(2)) == !is_linear(h));
  }
}

TEST_CASE("acyclic linear graphs satisfy v >= (k-1)e + 1") {
  std::mt19937_64 rng(5);
  int seen = 0;
  for (int trial = 0; trial < 2000 && seen < 100; ++trial) {
    auto h = Hypergraph::from_edges(12, 3, oracle::random_edges(rng, 12, 3, 0.015));
    if (h.empty() || girth(h).has_value()) continue;
    ++seen;
    std::size_t used = 0;
    for (Vertex v = 0; v < 12; ++v) used += h.vertex_degree(v) > 0;
    CHECK(used >= 2 * h.edge_count() + 1);
  }
  CHECK(seen >= 50);
}

TEST_CASE("k_density examples") {
  CHECK(k_density(Hypergraph::from_edges(3, 3, {{0, 1, 2}})).value == Rational(0));
  CHECK(k_density(Hypergraph(4, 3)).value == Rational(0));
  CHECK(k_density(Hypergraph::from_edges(4, 3, {{0, 1, 2}, {1, 2, 3}})).value == Rational(1));
  // Fig. 1 absorber: x1=0 x2=1 x3=2 y1=3 y2=4 y3=5
  auto fig1 = Hypergraph::from_edges(6, 3, {{0, 1, 3}, {2, 4, 5}, {3, 4, 5}});
  auto d = k_density(fig1, DensityMethod::enumeration);
  CHECK(d.value == Rational(1));
  REQUIRE(d.witness.size() == 2);
  CHECK(fig1.edge(d.witness[0])[0] == 2);
  CHECK(fig1.edge(d.witness[1])[0] == 3);
  CHECK(k_density(fig1, DensityMethod::flow).value == Rational(1));
  CHECK(k_density(Hypergraph::complete(5, 3)).value == Rational(9, 2));
  CHECK_THROWS_AS(k_density(Hypergraph::complete(7, 3), DensityMethod::enumeration), CapacityError);
}

TEST_CASE("k_density: flow mode equals enumeration") {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t k = 2 + rng() % 3;
    std::size_t n = k + 2 + rng() % 5;
    auto edges = oracle::random_edges(rng, n, k, 0.35);
    if (edges.size() > 16) edges.resize(16);
    auto h = Hypergraph::from_edges(n, k, edges);
    auto a = k_density(h, DensityMethod::enumeration);
    auto b = k_density(h, DensityMethod::flow);
    REQUIRE(a.value == b.value);
    if (b.value != Rational(0)) {
      auto sub = edge_subgraph(h, b.witness);
      std::size_t used = 0;
      for (Vertex v = 0; v < n; ++v) used += sub.vertex_degree(v) > 0;
      CHECK(Rational(static_cast<std::int64_t>(b.witness.size()) - 1, static_cast<std::int64_t>(used - k)) == b.value);
    }
  }
}

TEST_CASE("k_density is monotone under edge addition") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    auto edges = oracle::random_edges(rng, 7, 3, 0.25);
    if (edges.size() > 12) edges.resize(12);
    auto before = k_density(Hypergraph::from_edges(7, 3, edges)).value;
    for (auto& c : combinations(7, 3)) {
      if (std::find(edges.begin(), edges.end(), c) != edges.end()) continue;
      auto more = edges;
      more.push_back(c);
      CHECK(before <= k_density(Hypergraph::from_edges(7, 3, more)).value);
      break;
    }
  }
}

TEST_CASE("contract examples") {
  auto g = Hypergraph::from_edges(7, 3, {{0, 1, 2}, {0, 3, 4}, {1, 5, 6}});
  ContractionSpec fp{{{0, 1}}, {{3, 4}, {5, 6}}};
  auto c = contract(g, fp);
  // parts relabel to 0..3 (3,4,5,6), w is 4
  CHECK(c.to_original == vs({3, 4, 5, 6, Contraction::kNoOrigin}));
  CHECK(c.tuple_vertex == vs({4}));
  CHECK(c.graph.edge_list() == EdgeList{{0, 1, 4}, {2, 3, 4}});
  CHECK(c.preimage == std::vector<std::size_t>{1, 2});
  CHECK(c.graph.n() == fp.tuples.size() + 4);

  ContractionSpec none{{}, {{0, 1, 2}, {3, 4}}};
  auto base = contract(g, none);
  CHECK(base.graph == induced(g, vs({0, 1, 2, 3, 4})).graph);

  CHECK_THROWS_AS(contract(g, ContractionSpec{{{0, 1}}, {{0, 4}, {5, 6}}}), SpecError);
  CHECK_THROWS_AS(contract(g, ContractionSpec{{{0, 1}, {1, 2}}, {{3}, {5}}}), SpecError);
  CHECK_THROWS_AS(contract(g, ContractionSpec{{{0}}, {{3}, {5}}}), SpecError);
}

TEST_CASE("contraction preimages are injective") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    auto g = Hypergraph::from_edges(10, 3, oracle::random_edges(rng, 10, 3, 0.4));
    ContractionSpec fp{{{0, 1}, {2, 3}}, {{4, 5, 6}, {7, 8, 9}}};
    auto c = contract(g, fp);
    auto pre = c.preimage;
    std::sort(pre.begin(), pre.end());
    CHECK(std::adjacent_find(pre.begin(), pre.end()) == pre.end());
    CHECK(c.graph.n() == 2 + 6);
  }
}

TEST_CASE(".khg round trip and validation") {
  auto h = Hypergraph::from_edges(6, 3, {{0, 1, 2}, {2, 3, 4}, {1, 4, 5}});
  std::stringstream ss;
  write_khg(ss, h);
  CHECK(ss.str() == "khg 1 3 6 3\n0 1 2\n1 4 5\n2 3 4\n");
  CHECK(read_khg(ss) == h);
  std::istringstream comment("# header comment\nkhg 1 2 3 1\n# edge\n0 2\n");
  CHECK(read_khg(comment).edge_list() == EdgeList{{0, 2}});
  std::istringstream unsorted("khg 1 2 3 2\n1 2\n0 1\n");
  CHECK_THROWS_AS(read_khg(unsorted), FormatError);
  std::istringstream count("khg 1 2 3 2\n0 1\n");
  CHECK_THROWS_AS(read_khg(count), FormatError);
  std::istringstream desc("khg 1 2 3 1\n2 1\n");
  CHECK_THROWS_AS(read_khg(desc), FormatError);
  std::istringstream junk("khg 1 2 3 1\n0 x\n");
  CHECK_THROWS_AS(read_khg(junk), FormatError);
  std::istringstream range("khg 1 2 3 1\n0 3\n");
  CHECK_THROWS_AS(read_khg(range), FormatError);
}
