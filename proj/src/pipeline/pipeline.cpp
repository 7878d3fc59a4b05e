#include "dlab/pipeline.hpp"
#include "dlab/thresholds.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <random>

namespace dlab {

std::size_t degree_into(const Hypergraph& g, Vertex v, const VertexSet& z) {
  std::size_t c = 0;
  for (auto id : g.incident_edges(v)) {
    auto e = g.edge(id);
    if (std::all_of(e.begin(), e.end(), [&](Vertex u) { return u == v || z.contains(u); })) ++c;
  }
  return c;
}

SearchResult<RichSet> choose_rich_set(const Hypergraph& g, std::size_t size, double density, std::size_t trials,
                                      std::uint64_t seed) {
  const std::size_t n = g.n(), k = g.k();
  if (size == 0 || size > n) throw PreconditionError("rich set size must be in 1..n");
  if (density < 0) {
    auto all = binomial(static_cast<std::int64_t>(n), static_cast<std::int64_t>(k));
    density = all ? static_cast<double>(g.edge_count()) / static_cast<double>(all) : 0.0;
  }
  const double full = static_cast<double>(binomial(static_cast<std::int64_t>(size) - 1, static_cast<std::int64_t>(k) - 1));
  const auto threshold = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(density / 2 * full - 1e-9)));

  SearchResult<RichSet> out;
  std::vector<Vertex> pool(n);
  std::iota(pool.begin(), pool.end(), Vertex{0});
  std::size_t best_min = 0;
  bool any = false;
  for (std::size_t t = 0; t < trials; ++t) {
    std::mt19937_64 rng(derive_seed(seed, t));
    std::shuffle(pool.begin(), pool.end(), rng);
    std::vector<Vertex> z(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(size));
    std::sort(z.begin(), z.end());
    VertexSet zs(n, z);
    // one pass over the edges: an edge with exactly k-1 vertices in Z feeds its outside vertex
    std::vector<std::size_t> into(n, 0);
    for (std::size_t i = 0; i < g.edge_count(); ++i) {
      auto e = g.edge(i);
      std::size_t inside = 0;
      Vertex outside = 0;
      for (Vertex v : e) {
        if (zs.contains(v))
          ++inside;
        else
          outside = v;
      }
      if (inside + 1 == k) ++into[outside];
    }
    std::size_t low = SIZE_MAX;
    for (Vertex v = 0; v < n; ++v)
      if (!zs.contains(v)) low = std::min(low, into[v]);
    if (low == SIZE_MAX) low = threshold;  // Z = V
    ++out.nodes;
    if (!any || low > best_min) best_min = low;
    any = true;
    if (low >= threshold) {
      out.status = SearchStatus::found;
      out.value = RichSet{std::move(z), threshold, low, t + 1};
      return out;
    }
  }
  out.status = SearchStatus::exhausted;
  out.diagnostic = "no rich set in " + std::to_string(trials) + " trials; best minimum outside degree " +
                   std::to_string(best_min) + " vs threshold " + std::to_string(threshold) + " (deficit " +
                   std::to_string(threshold - std::min(threshold, best_min)) + ")";
  return out;
}

std::size_t default_block_size(std::size_t k) {
  for (std::size_t q = 2 * k; q <= 12; q += k)
    if (q % k == 0) return q;
  return 2 * k;
}

std::size_t lambda_cap_for(std::size_t r, std::size_t k, std::size_t n, double lambda) {
  std::size_t cap = 0;
  while (2 * (k - 1) * (cap + 1) < r) ++cap;
  auto by_lambda = static_cast<std::size_t>(std::floor(lambda * static_cast<double>(n) + 1e-9));
  return std::min(cap, by_lambda);
}

namespace {

std::size_t min_template_r(std::size_t k) { return std::max<std::size_t>(6, 2 * k - 1); }

AbsorbingSet build_with_r(const Hypergraph& g, std::size_t r, double gamma, const PipelineParams& params,
                          std::uint64_t seed) {
  const std::size_t n = g.n(), k = g.k();
  AbsorbingSet a;
  a.r = r;
  a.gamma = gamma;
  a.x_bound = std::pow(gamma / 2, static_cast<double>(k)) * static_cast<double>(n);
  auto rich = choose_rich_set(g, r, params.rich_density, params.rich_trials, derive_seed(seed, 0, 1));
  if (!rich) throw StageError("rich_set", rich.diagnostic);
  a.notes.emplace_back("rich_set", "r=" + std::to_string(r) + ", min outside degree " +
                                       std::to_string(rich->min_outside_degree) + " >= " +
                                       std::to_string(rich->threshold));
  auto t = build_resilient_template(r, k, params.tmpl, derive_seed(seed, 0, 2));
  if (!t) throw StageError("template", t.diagnostic);
  a.notes.emplace_back("template", "v=" + std::to_string(t->vertex_count()) + ", e=" + std::to_string(t->edge_count()));
  RootedSearchConfig finder;
  finder.max_order = params.absorber_order;
  finder.budget = params.absorber_budget;
  finder.seed = derive_seed(seed, 0, 3);
  try {
    a.structure = build_absorbing_structure(g, *t.value, rich->z, finder);
  } catch (const PlacementFailed& e) {
    throw StageError("structure", e.what());
  } catch (const PreconditionError& e) {
    throw StageError("structure", e.what());
  }
  a.x = a.structure->x;
  a.z = VertexSet(n, rich->z);
  a.lambda_cap = lambda_cap_for(r, k, n, params.lambda);
  a.notes.emplace_back("structure", "|X|=" + std::to_string(a.x.size()));
  return a;
}

}  // namespace

AbsorbingSet build_absorbing_set(const Hypergraph& g, double gamma, const PipelineParams& params, std::uint64_t seed) {
  const std::size_t n = g.n(), k = g.k();
  std::vector<std::size_t> rs;
  if (params.r) {
    rs.push_back(params.r);
  } else {
    for (std::size_t r = n; r >= min_template_r(k) && rs.size() < params.r_attempts; --r)
      if (template_vertex_count(r, k) <= n) rs.push_back(r);
  }
  if (rs.empty()) throw StageError("template", "no template with r >= " + std::to_string(min_template_r(k)) +
                                                   " fits in " + std::to_string(n) + " vertices");
  std::optional<StageError> last;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    try {
      return build_with_r(g, rs[i], gamma, params, derive_seed(seed, i, 4));
    } catch (const StageError& e) {
      last = e;
    }
  }
  throw *last;
}

EdgeList absorb_and_complete(const Hypergraph& g, const AbsorbingSet& a, const VertexSet& w, std::uint64_t budget) {
  const std::size_t k = g.k();
  if (w.intersects(a.x)) throw PreconditionError("W meets the absorbing set");
  if (w.size() > a.lambda_cap) throw PreconditionError("|W| exceeds lambda_cap");
  if ((a.x.size() + w.size()) % k != 0) throw PreconditionError("k does not divide |X ∪ W|");
  if (!a.structure) {
    if (!w.empty()) throw StageError("absorb_m1", "no absorbing structure to absorb into");
    return {};
  }
  auto wv = w.members();
  auto m1 = match_into_flexible(g, wv, a.z, budget);
  if (!m1) throw StageError("absorb_m1", m1.diagnostic.empty() ? "W cannot be matched into Z" : m1.diagnostic);
  VertexSet used(g.n());
  for (const auto& e : m1->edges())
    for (Vertex v : e)
      if (a.z.contains(v)) used.insert(v);
  EdgeList m2;
  try {
    m2 = structure_matching_after_removal(*a.structure, used);
  } catch (const Error& e) {
    throw StageError("absorb_m2", e.what());
  }
  EdgeList out = m1->edges();
  out.insert(out.end(), m2.begin(), m2.end());
  // covers exactly X ∪ W
  VertexSet cover(g.n());
  for (const auto& e : out)
    for (Vertex v : e) {
      if (cover.contains(v)) throw StageError("absorb_m2", "matchings overlap");
      cover.insert(v);
    }
  VertexSet target = a.x;
  target |= w;
  if (!(cover.is_subset_of(target) && target.is_subset_of(cover)))
    throw StageError("absorb_m2", "cover differs from X ∪ W");
  return out;
}

namespace {

// Blocks on G - X, then an exact matching inside the leftover.
struct AlmostPerfect {
  EdgeList matching;
  VertexSet leftover;
  std::size_t failed_blocks = 0;
};

AlmostPerfect almost_perfect(const Hypergraph& g, const VertexSet& x, std::size_t q, std::uint64_t seed,
                             const PipelineParams& params) {
  AlmostPerfect out;
  auto rest = remove_vertices(g, x);
  out.leftover = VertexSet(g.n());
  if (rest.graph.n() == 0) return out;
  const std::size_t block = std::min(q, rest.graph.n() - rest.graph.n() % g.k());
  VertexSet uncovered(rest.graph.n());
  if (block >= g.k()) {
    auto rep = blockwise_almost_perfect(rest.graph, block, seed, params.pm_budget, params.threads);
    out.failed_blocks = rep.failed_blocks.size();
    for (const auto& e : rep.matching.edges()) {
      std::vector<Vertex> m;
      for (Vertex v : e) m.push_back(rest.to_original[v]);
      out.matching.push_back(std::move(m));
    }
    uncovered = rep.uncovered;
  } else {
    uncovered = VertexSet::all(rest.graph.n());
  }
  auto left = uncovered.members();
  if (left.size() >= g.k()) {
    std::vector<Vertex> orig;
    for (Vertex v : left) orig.push_back(rest.to_original[v]);
    auto sub = induced(g, orig);
    auto mm = max_matching(sub.graph, MatchingMode::exact, params.pm_budget);
    for (const auto& e : mm.matching.edges()) {
      std::vector<Vertex> m;
      for (Vertex v : e) m.push_back(sub.to_original[v]);
      out.matching.push_back(std::move(m));
    }
    VertexSet covered(g.n());
    for (const auto& e : mm.matching.edges())
      for (Vertex v : e) covered.insert(sub.to_original[v]);
    for (Vertex v : orig)
      if (!covered.contains(v)) out.leftover.insert(v);
  } else {
    for (Vertex v : left) out.leftover.insert(rest.to_original[v]);
  }
  return out;
}

void stage(PipelineReport& r, const std::string& name, bool ok, std::string detail) {
  r.stages.push_back({name, ok, std::move(detail)});
  if (!ok && r.failure_stage.empty()) r.failure_stage = name;
}

}  // namespace

PipelineReport dirac_perfect_matching(const Hypergraph& g, std::size_t d, double gamma, const PipelineParams& params,
                                      std::uint64_t seed) {
  PipelineReport r;
  r.n = g.n();
  r.k = g.k();
  r.d = d;
  r.gamma = gamma;
  r.seed = seed;
  const std::size_t n = g.n(), k = g.k();
  if (n == 0 || n % k != 0 || d < 1 || d >= k) {
    stage(r, "precondition", false, "need k | n and 1 <= d < k");
    return r;
  }
  r.min_degree = min_d_degree(g, d).value;
  auto dens = boost::rational_cast<double>(conjectured_density(d, k));
  auto full = static_cast<double>(binomial(static_cast<std::int64_t>(n - d), static_cast<std::int64_t>(k - d)));
  r.target_degree = static_cast<std::size_t>(std::ceil((dens + gamma) * full - 1e-9));
  r.degree_condition_met = r.min_degree >= r.target_degree;

  AbsorbingSet a;
  a.x = VertexSet(n);
  a.z = VertexSet(n);
  try {
    a = build_absorbing_set(g, gamma, params, derive_seed(seed, 0, 10));
    for (const auto& [name, note] : a.notes) stage(r, name, true, note);
  } catch (const StageError& e) {
    if (!params.allow_empty_absorber) {
      stage(r, e.stage, false, e.what());
      return r;
    }
    // Desk-scale fallback: no absorbing set, the almost-perfect stage must finish alone.
    for (const char* name : {"rich_set", "template", "structure"})
      stage(r, name, true, std::string("skipped (X = empty): ") + e.what());
    a.lambda_cap = 0;
  }
  r.r = a.r;
  r.x_size = a.x.size();
  r.lambda_cap = a.lambda_cap;
  r.x_bound = a.x_bound;

  const std::size_t q = params.block_size ? params.block_size : default_block_size(k);
  AlmostPerfect ap;
  for (std::size_t attempt = 0; attempt < 2; ++attempt) {
    ap = almost_perfect(g, a.x, q, derive_seed(seed, attempt, 11), params);
    r.failed_blocks += ap.failed_blocks;
    if (ap.leftover.size() <= a.lambda_cap) break;
    if (attempt == 0) ++r.retries;
  }
  r.leftover = ap.leftover.size();
  if (ap.leftover.size() > a.lambda_cap) {
    stage(r, "almost_perfect", false,
          "leftover " + std::to_string(ap.leftover.size()) + " exceeds lambda_cap " + std::to_string(a.lambda_cap));
    return r;
  }
  stage(r, "almost_perfect", true, "leftover " + std::to_string(ap.leftover.size()));

  EdgeList absorbed;
  try {
    absorbed = absorb_and_complete(g, a, ap.leftover, params.pm_budget);
  } catch (const StageError& e) {
    stage(r, "absorb", false, e.what());
    return r;
  } catch (const PreconditionError& e) {
    stage(r, "absorb", false, e.what());
    return r;
  }
  EdgeList all = ap.matching;
  all.insert(all.end(), absorbed.begin(), absorbed.end());
  auto problem = check_matching(g, all, true);
  if (!problem.empty()) {
    stage(r, "absorb", false, "final matching rejected: " + problem);
    return r;
  }
  stage(r, "absorb", true, "absorbed " + std::to_string(ap.leftover.size()) + " vertices");
  r.matching = Matching(n, std::move(all)).canonical().edges();
  r.success = true;
  return r;
}

std::string report_to_json(const PipelineReport& r) {
  nlohmann::json j;  // std::map-backed: keys come out sorted
  j["n"] = r.n;
  j["k"] = r.k;
  j["d"] = r.d;
  j["gamma"] = r.gamma;
  j["seed"] = r.seed;
  j["min_degree"] = r.min_degree;
  j["target_degree"] = r.target_degree;
  j["degree_condition_met"] = r.degree_condition_met;
  j["success"] = r.success;
  j["failure_stage"] = r.failure_stage.empty() ? nlohmann::json(nullptr) : nlohmann::json(r.failure_stage);
  nlohmann::json stages = nlohmann::json::array();
  for (const auto& s : r.stages) stages.push_back({{"name", s.name}, {"ok", s.ok}, {"detail", s.detail}});
  j["stages"] = stages;
  j["counters"] = {{"r", r.r},
                   {"x_size", r.x_size},
                   {"x_bound_advisory", r.x_bound},
                   {"lambda_cap", r.lambda_cap},
                   {"leftover", r.leftover},
                   {"retries", r.retries},
                   {"failed_blocks", r.failed_blocks},
                   {"matching_size", r.matching.size()}};
  j["format"] = "dlab-pipeline-report";
  j["version"] = 1;
  return j.dump(2);
}

PipelineParams read_pipeline_params(std::istream& in) {
  PipelineParams p;
  for (const auto& [key, value] : read_key_values(in)) {
    try {
      if (key == "r") p.r = std::stoul(value);
      else if (key == "r_attempts") p.r_attempts = std::stoul(value);
      else if (key == "lambda") p.lambda = std::stod(value);
      else if (key == "rich_density") p.rich_density = std::stod(value);
      else if (key == "rich_trials") p.rich_trials = std::stoul(value);
      else if (key == "block_size") p.block_size = std::stoul(value);
      else if (key == "absorber_order") p.absorber_order = std::stoul(value);
      else if (key == "absorber_budget") p.absorber_budget = std::stoull(value);
      else if (key == "pm_budget") p.pm_budget = std::stoull(value);
      else if (key == "max_degree") p.tmpl.max_degree = std::stoul(value);
      else if (key == "montgomery_trials") p.tmpl.montgomery_trials = std::stoul(value);
      else if (key == "allow_empty_absorber") p.allow_empty_absorber = value == "1" || value == "true";
      else throw FormatError("unknown pipeline parameter " + key);
    } catch (const std::logic_error&) {
      throw FormatError("bad value for " + key + ": " + value);
    }
  }
  return p;
}

}  // namespace dlab
