#include <doctest.h>

#include "dlab/matchpower.hpp"
#include "support/oracles.hpp"

#include <numeric>
#include <random>
#include <sstream>

using namespace dlab;

TEST_CASE("find_perfect_matching examples") {
  auto k6 = Hypergraph::complete(6, 3);
  auto r = find_perfect_matching(k6);
  REQUIRE(r.status == MatchStatus::perfect);
  CHECK(check_matching(k6, r.matching.edges(), true).empty());
  CHECK(r.uncovered.empty());

  EdgeList edges;
  for (auto& e : combinations(5, 3)) edges.push_back(e);
  auto iso = Hypergraph::from_edges(6, 3, edges);
  auto none = find_perfect_matching(iso);
  CHECK(none.status == MatchStatus::none);

  // all 3-sets meeting {0,1}: at most two disjoint edges can meet a 2-set... plus one more needed
  EdgeList space;
  for (auto& e : combinations(9, 3))
    if (e[0] <= 1) space.push_back(e);
  CHECK(find_perfect_matching(Hypergraph::from_edges(9, 3, space)).status == MatchStatus::none);

  CHECK(find_perfect_matching(Hypergraph::complete(7, 3)).status == MatchStatus::none);
  auto tight = find_perfect_matching(Hypergraph::complete(12, 3), 2);
  CHECK(tight.status == MatchStatus::partial);
  CHECK(check_matching(Hypergraph::complete(12, 3), tight.matching.edges()).empty());
}

TEST_CASE("find_perfect_matching agrees with subset enumeration on 6-vertex 3-graphs") {
  std::mt19937_64 rng(21);
  auto all = combinations(6, 3);
  for (int trial = 0; trial < 10000; ++trial) {
    auto bits = rng() & ((1u << 20) - 1);
    EdgeList edges;
    for (std::size_t i = 0; i < 20; ++i)
      if ((bits >> i) & 1u) edges.push_back(all[i]);
    auto h = Hypergraph::from_edges(6, 3, edges);
    auto r = find_perfect_matching(h);
    REQUIRE(r.status != MatchStatus::partial);
    REQUIRE((r.status == MatchStatus::perfect) == oracle::has_perfect_matching(edges, 6, 3));
    if (r.status == MatchStatus::perfect) REQUIRE(check_matching(h, r.matching.edges(), true).empty());
  }
}

TEST_CASE("max_matching examples") {
  auto m = Hypergraph::from_edges(9, 3, {{0, 1, 2}, {3, 4, 5}, {6, 7, 8}});
  CHECK(max_matching(m, MatchingMode::exact).matching.size() == 3);
  CHECK(max_matching(m, MatchingMode::greedy).matching.size() == 3);
  CHECK(max_matching(Hypergraph::complete(7, 3), MatchingMode::exact).matching.size() == 2);
  auto path = Hypergraph::from_edges(7, 3, {{0, 1, 2}, {2, 3, 4}, {4, 5, 6}});
  auto r = max_matching(path, MatchingMode::exact);
  CHECK(r.optimal);
  CHECK(r.matching.canonical().edges() == EdgeList{{0, 1, 2}, {4, 5, 6}});
}

TEST_CASE("max_matching: exact equals oracle and is relabeling invariant; greedy is maximal") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t n = 6 + rng() % 4;
    auto edges = oracle::random_edges(rng, n, 3, 0.15);
    auto h = Hypergraph::from_edges(n, 3, edges);
    auto exact = max_matching(h, MatchingMode::exact);
    REQUIRE(exact.optimal);
    REQUIRE(check_matching(h, exact.matching.edges()).empty());
    CHECK(exact.matching.size() == oracle::max_matching_size(edges, n));

    std::vector<Vertex> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    EdgeList moved;
    for (auto& e : edges) {
      std::vector<Vertex> f;
      for (Vertex v : e) f.push_back(perm[v]);
      moved.push_back(f);
    }
    CHECK(max_matching(Hypergraph::from_edges(n, 3, moved), MatchingMode::exact).matching.size() ==
          exact.matching.size());

    auto greedy = max_matching(h, MatchingMode::greedy);
    CHECK(check_matching(h, greedy.matching.edges()).empty());
    for (std::size_t i = 0; i < h.edge_count(); ++i) {
      bool free = true;
      for (Vertex v : h.edge(i)) free = free && !greedy.matching.covered().contains(v);
      CHECK_FALSE(free);
    }
  }
}

TEST_CASE("aharoni_haxell examples") {
  std::vector<Hypergraph> one{Hypergraph::from_edges(2, 2, {{0, 1}})};
  CHECK(aharoni_haxell_holds(one, 2, AhMode::exact).holds);
  std::vector<Hypergraph> two{one[0], one[0]};
  auto r = aharoni_haxell_holds(two, 2, AhMode::exact);
  CHECK_FALSE(r.holds);
  CHECK(r.violating == std::vector<std::size_t>{0, 1});
  CHECK(find_disjoint_representatives(two).status == SearchStatus::exhausted);

  // three links on disjoint supports, three disjoint edges each
  std::vector<Hypergraph> disjoint;
  for (Vertex b = 0; b < 3; ++b) {
    EdgeList e;
    for (Vertex j = 0; j < 3; ++j) e.push_back({18 * 0 + 6 * b + 2 * j, 6 * b + 2 * j + 1});
    disjoint.push_back(Hypergraph::from_edges(18, 2, e));
  }
  CHECK(aharoni_haxell_holds(disjoint, 2, AhMode::exact).holds);
  auto reps = find_disjoint_representatives(disjoint);
  REQUIRE(reps);
  CHECK(reps->size() == 3);

  std::vector<Hypergraph> many(13, Hypergraph::from_edges(2, 2, {{0, 1}}));
  CHECK_THROWS_AS(aharoni_haxell_holds(many, 2, AhMode::exact), CapacityError);
  auto sampled = aharoni_haxell_holds(many, 2, AhMode::sampled, 10, 1);
  CHECK_FALSE(sampled.exhaustive);
}

TEST_CASE("Aharoni-Haxell implies disjoint representatives on random instances") {
  std::mt19937_64 rng(23);
  int holding = 0;
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t t = 1 + rng() % 5;
    std::vector<Hypergraph> links;
    for (std::size_t i = 0; i < t; ++i) links.push_back(Hypergraph::from_edges(10, 2, oracle::random_edges(rng, 10, 2, 0.25)));
    auto ah = aharoni_haxell_holds(links, 2, AhMode::exact);
    auto reps = find_disjoint_representatives(links);
    REQUIRE(reps.status != SearchStatus::budget);
    if (ah.holds) {
      ++holding;
      REQUIRE(reps);
    }
    if (reps) {
      VertexSet used(10);
      for (std::size_t i = 0; i < t; ++i) {
        CHECK(links[i].has_edge((*reps)[i]));
        for (Vertex v : (*reps)[i]) {
          CHECK_FALSE(used.contains(v));
          used.insert(v);
        }
      }
    }
  }
  CHECK(holding > 30);
}

TEST_CASE("match_into_flexible") {
  auto g = Hypergraph::from_edges(6, 3, {{0, 3, 4}, {1, 2, 5}});
  std::vector<Vertex> w{0};
  auto r = match_into_flexible(g, w, VertexSet(6, {3, 4, 5}));
  REQUIRE(r);
  CHECK(r->edges() == EdgeList{{0, 3, 4}});
  std::vector<Vertex> w2{0, 1};
  CHECK(match_into_flexible(g, w2, VertexSet(6, {3, 4, 5})).status == SearchStatus::exhausted);
  CHECK_THROWS_AS(match_into_flexible(g, w, VertexSet(6, {0, 3})), PreconditionError);

  std::mt19937_64 rng(24);
  int found = 0;
  for (int trial = 0; trial < 200; ++trial) {
    auto h = Hypergraph::from_edges(30, 3, oracle::random_edges(rng, 30, 3, 0.5));
    std::vector<Vertex> all(30);
    std::iota(all.begin(), all.end(), 0);
    std::shuffle(all.begin(), all.end(), rng);
    std::vector<Vertex> ws(all.begin(), all.begin() + 4);
    VertexSet z(30, std::span<const Vertex>(all.data() + 4, 15));
    auto m = match_into_flexible(h, ws, z);
    if (!m) continue;
    ++found;
    REQUIRE(m->size() == 4);
    CHECK(check_matching(h, m->edges()).empty());
    for (const auto& e : m->edges()) {
      int in_w = 0, in_z = 0;
      for (Vertex v : e) {
        in_w += std::find(ws.begin(), ws.end(), v) != ws.end();
        in_z += z.contains(v);
      }
      CHECK(in_w == 1);
      CHECK(in_z == 2);
    }
  }
  CHECK(found >= 190);
}

TEST_CASE("blockwise_almost_perfect") {
  auto k13 = Hypergraph::complete(13, 3);
  auto r = blockwise_almost_perfect(k13, 6, 5);
  CHECK(r.failed_blocks.empty());
  CHECK(r.uncovered.size() == 1);
  CHECK(check_matching(k13, r.matching.edges()).empty());

  auto empty = blockwise_almost_perfect(Hypergraph(12, 3), 6, 5);
  CHECK(empty.failed_blocks.size() == 2);
  CHECK(empty.matching.empty());

  EdgeList edges;
  for (auto& e : combinations(12, 3))
    if (e[0] != 0) edges.push_back(e);
  auto h = Hypergraph::from_edges(12, 3, edges);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    auto b = blockwise_almost_perfect(h, 6, seed);
    REQUIRE(b.failed_blocks.size() == 1);
    const auto& bad = b.blocks[b.failed_blocks[0]];
    CHECK(std::find(bad.begin(), bad.end(), 0u) != bad.end());
    auto again = blockwise_almost_perfect(h, 6, seed, kDefaultBudget, 3);
    CHECK(again.blocks == b.blocks);
    CHECK(again.matching.edges() == b.matching.edges());
  }
  CHECK_THROWS_AS(blockwise_almost_perfect(h, 5, 1), PreconditionError);
  CHECK_THROWS_AS(blockwise_almost_perfect(h, 15, 1), PreconditionError);
}

TEST_CASE("matching file round trip") {
  EdgeList edges{{0, 1, 2}, {3, 4, 5}};
  std::stringstream ss;
  write_matching(ss, edges);
  CHECK(read_matching(ss) == edges);
  std::istringstream bad("2 1 0\n");
  CHECK_THROWS_AS(read_matching(bad), FormatError);
}
