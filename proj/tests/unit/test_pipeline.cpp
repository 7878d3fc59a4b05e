#include <doctest.h>

#include "dlab/pipeline.hpp"
#include "dlab/thresholds.hpp"

#include <json.hpp>
#include <random>
#include <sstream>

using namespace dlab;

namespace {

Hypergraph dense_random(std::size_t n, std::size_t k, double p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution keep(p);
  EdgeList edges;
  for (auto& e : combinations(n, k))
    if (keep(rng)) edges.push_back(std::move(e));
  return Hypergraph::from_edges(n, k, std::move(edges));
}

}  // namespace

TEST_CASE("rich set on complete and empty hosts") {
  auto g = Hypergraph::complete(12, 3);
  auto rs = choose_rich_set(g, 6, -1, 5, 1);
  REQUIRE(rs);
  CHECK(rs->z.size() == 6);
  CHECK(rs->threshold == 5);  // ceil(1/2 · C(5,2))
  CHECK(rs->min_outside_degree == 15);
  VertexSet z(12, rs->z);
  for (Vertex v = 0; v < 12; ++v)
    if (!z.contains(v)) CHECK(degree_into(g, v, z) == 15);

  Hypergraph empty(12, 3);
  auto none = choose_rich_set(empty, 6, 0.5, 4, 1);
  CHECK(none.status == SearchStatus::exhausted);
  CHECK(none.diagnostic.find("deficit") != std::string::npos);
  CHECK_THROWS_AS(choose_rich_set(g, 13, -1, 1, 0), PreconditionError);
}

TEST_CASE("block size and lambda cap") {
  CHECK(default_block_size(2) == 4);
  CHECK(default_block_size(3) == 6);
  CHECK(default_block_size(4) == 8);
  CHECK(default_block_size(5) == 10);
  CHECK(default_block_size(7) == 14);
  // (k-1)|W| < r/2
  CHECK(lambda_cap_for(12, 3, 1000, 0.1) == 2);
  CHECK(lambda_cap_for(13, 3, 1000, 0.1) == 3);
  CHECK(lambda_cap_for(6, 3, 1000, 0.1) == 1);
  CHECK(lambda_cap_for(12, 3, 10, 0.1) == 1);
}

TEST_CASE("complete hosts get verified perfect matchings") {
  for (std::size_t n : {18, 24, 30}) {
    auto g = Hypergraph::complete(n, 3);
    auto r = dirac_perfect_matching(g, 1, 0.1, PipelineParams{}, 7);
    INFO("n=" << n << " failure " << r.failure_stage);
    CHECK(r.success);
    CHECK(r.degree_condition_met);
    CHECK(check_matching(g, r.matching, true).empty());
    CHECK(r.matching.size() == n / 3);
  }
}

TEST_CASE("space barrier never succeeds") {
  auto g = space_barrier(9, 3, 1);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto r = dirac_perfect_matching(g, 1, 0.1, PipelineParams{}, seed);
    CHECK_FALSE(r.success);
    CHECK_FALSE(r.failure_stage.empty());
    CHECK(r.matching.empty());
  }
}

TEST_CASE("pipeline is deterministic in the seed") {
  auto g = dense_random(24, 3, 0.9, 5);
  auto a = dirac_perfect_matching(g, 1, 0.05, PipelineParams{}, 11);
  auto b = dirac_perfect_matching(g, 1, 0.05, PipelineParams{}, 11);
  CHECK(report_to_json(a) == report_to_json(b));
  CHECK(a.matching == b.matching);
}

TEST_CASE("dense random host") {
  auto g = dense_random(30, 3, 0.85, 3);
  auto r = dirac_perfect_matching(g, 1, 0.05, PipelineParams{}, 2);
  INFO(report_to_json(r));
  REQUIRE(r.success);
  CHECK(check_matching(g, r.matching, true).empty());
}

TEST_CASE("bad divisibility is a precondition stage") {
  auto g = Hypergraph::complete(10, 3);
  auto r = dirac_perfect_matching(g, 1, 0.1, PipelineParams{}, 0);
  CHECK_FALSE(r.success);
  CHECK(r.failure_stage == "precondition");
}

TEST_CASE("absorbing set in K_60 survives every feasible removal") {
  auto g = Hypergraph::complete(60, 3);
  PipelineParams p;
  p.r = 12;
  p.allow_empty_absorber = false;
  auto a = build_absorbing_set(g, 0.1, p, 1);
  REQUIRE(a.structure);
  CHECK(a.x.size() == 60);  // v(T) = 60, every template edge absorbs itself
  CHECK(a.lambda_cap == 2);
  CHECK(check_matching(g, absorb_and_complete(g, a, VertexSet(60)), true).empty());
  std::size_t checked = 0;
  for (std::size_t w = 0; 2 * w < 12; ++w) {
    if (!removal_feasible(a.structure->tmpl, w)) continue;
    for (const auto& pick : combinations(12, w)) {
      VertexSet removed(60);
      for (auto i : pick) removed.insert(a.structure->z[i]);
      auto m = structure_matching_after_removal(*a.structure, removed);
      VertexSet cover(60);
      for (const auto& e : m)
        for (Vertex v : e) cover.insert(v);
      CHECK(check_matching(g, m).empty());
      CHECK(cover.size() == 60 - w);
      CHECK_FALSE(cover.intersects(removed));
      ++checked;
    }
  }
  CHECK(checked == 1 + 220);  // |W| in {0, 3}
}

TEST_CASE("absorb_and_complete preconditions and cover") {
  // K_n large enough for r = 6 with order-3 absorbers
  const std::size_t r6 = template_vertex_count(6, 3);
  auto tmpl = build_resilient_template(6, 3, TemplateParams{}, 1);
  REQUIRE(tmpl);
  const std::size_t need = r6 + 3 * tmpl->edge_count() + 12;
  const std::size_t n = need + (3 - need % 3) % 3;
  auto g = Hypergraph::complete(n, 3);
  PipelineParams p;
  p.r = 6;
  p.absorber_order = 3;
  p.allow_empty_absorber = false;
  AbsorbingSet a = build_absorbing_set(g, 0.1, p, 1);
  REQUIRE(a.structure);
  CHECK(a.lambda_cap == 1);
  CHECK(a.x.size() % 3 == 0);

  VertexSet none(n);
  auto m0 = absorb_and_complete(g, a, none);
  CHECK(check_matching(g, m0).empty());
  VertexSet cover(n);
  for (const auto& e : m0)
    for (Vertex v : e) cover.insert(v);
  CHECK(cover.size() == a.x.size());
  CHECK(cover.is_subset_of(a.x));

  VertexSet in_x(n);
  in_x.insert(a.x.members().front());
  CHECK_THROWS_AS(absorb_and_complete(g, a, in_x), PreconditionError);
  std::vector<Vertex> outside;
  for (Vertex v = 0; v < n && outside.size() < 3; ++v)
    if (!a.x.contains(v)) outside.push_back(v);
  VertexSet too_many(n, outside);
  CHECK_THROWS_AS(absorb_and_complete(g, a, too_many), PreconditionError);
  VertexSet one(n, std::vector<Vertex>{outside[0]});
  CHECK_THROWS_AS(absorb_and_complete(g, a, one), PreconditionError);  // 3 ∤ |X|+1
}

TEST_CASE("report json is sorted and timing free") {
  auto g = Hypergraph::complete(9, 3);
  auto r = dirac_perfect_matching(g, 2, 0.1, PipelineParams{}, 4);
  auto j = nlohmann::json::parse(report_to_json(r));
  CHECK(j["success"] == true);
  CHECK(j["counters"]["matching_size"] == 3);
  std::string prev;
  for (auto it = j.begin(); it != j.end(); ++it) {
    CHECK(prev < it.key());
    prev = it.key();
  }
  CHECK(report_to_json(r).find("seconds") == std::string::npos);
}

TEST_CASE("pipeline params from key=value") {
  std::istringstream in("# test\nr = 12\nlambda=0.2\nallow_empty_absorber=false\n");
  auto p = read_pipeline_params(in);
  CHECK(p.r == 12);
  CHECK(p.lambda == doctest::Approx(0.2));
  CHECK_FALSE(p.allow_empty_absorber);
  std::istringstream bad("nope=1\n");
  CHECK_THROWS_AS(read_pipeline_params(bad), FormatError);
  std::istringstream dup("r=1\nr=2\n");
  CHECK_THROWS_AS(read_pipeline_params(dup), FormatError);
  std::istringstream junk("r=abc\n");
  CHECK_THROWS_AS(read_pipeline_params(junk), FormatError);
}
