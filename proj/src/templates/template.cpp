#include "dlab/parallel.hpp"
#include "dlab/templates.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>
#include <set>

namespace dlab {

double ResilientTemplate::achieved_l() const {
  if (r == 0) return 0;
  return static_cast<double>(std::max(vertex_count(), edge_count())) / static_cast<double>(r);
}

std::size_t template_vertex_count(std::size_t r, std::size_t k) {
  const std::size_t s = (r + 1) / 2;
  return (k - 1) * 3 * s + 2 * s + r;
}

namespace {

ResilientTemplate assemble(std::size_t r, std::size_t k, BipartiteTemplate m, Hypergraph overlay) {
  ResilientTemplate t;
  t.k = k;
  t.r = r;
  t.s = m.s;
  t.lift = lift_k_partite(m, k);
  t.z = t.lift.z;
  t.montgomery = std::move(m);
  EdgeList edges = t.lift.graph.edge_list();
  for (std::size_t i = 0; i < overlay.edge_count(); ++i) {
    std::vector<Vertex> e;
    for (Vertex v : overlay.edge(i)) e.push_back(t.z[v]);
    edges.push_back(std::move(e));
  }
  t.overlay = std::move(overlay);
  t.graph = Hypergraph::from_edges(t.lift.graph.n(), k, std::move(edges));
  return t;
}

}  // namespace

SearchResult<ResilientTemplate> build_resilient_template(std::size_t r, std::size_t k, const TemplateParams& params,
                                                         std::uint64_t seed) {
  if (r < 4) throw PreconditionError("a resilient template needs r >= 4");
  if (k < 2) throw SizeError("k must be at least 2");
  SearchResult<ResilientTemplate> out;
  const std::size_t s = (r + 1) / 2;
  auto m = search_montgomery(s, params.max_degree, params.montgomery_trials, derive_seed(seed, 0, 1), params.threads);
  out.nodes += m.nodes;
  if (!m) {
    out.status = m.status;
    out.diagnostic = "montgomery: " + m.diagnostic;
    return out;
  }
  auto budget = params.overlay_budget ? params.overlay_budget
                                      : static_cast<std::size_t>(binomial(static_cast<std::int64_t>(r),
                                                                          static_cast<std::int64_t>(k)));
  auto ov = independent_free_overlay(r, k, budget, derive_seed(seed, 0, 2), params.overlay_trials);
  out.nodes += ov.nodes;
  if (!ov) {
    out.status = ov.status;
    out.diagnostic = "overlay: " + ov.diagnostic;
    return out;
  }
  BipartiteTemplate bt = *m.value;
  if (r % 2 == 1) bt = trim_z(std::move(bt));
  auto t = assemble(r, k, std::move(bt), ov.value->graph);
  t.montgomery_trials = m.nodes;
  t.overlay_mode = ov.value->mode;
  out.status = SearchStatus::found;
  out.value = std::move(t);
  return out;
}

bool removal_feasible(const ResilientTemplate& t, std::size_t w_size) {
  return 2 * w_size < t.r && (t.vertex_count() - w_size) % t.k == 0;
}

EdgeList template_matching(const ResilientTemplate& t, const std::vector<Vertex>& w) {
  if (!removal_feasible(t, w.size())) throw PreconditionError("removal outside the template guarantee");
  std::vector<std::size_t> z_index(t.vertex_count(), SIZE_MAX);
  for (std::size_t i = 0; i < t.z.size(); ++i) z_index[t.z[i]] = i;
  std::vector<char> gone(t.r, 0);
  for (Vertex v : w) {
    if (v >= t.vertex_count() || z_index[v] == SIZE_MAX) throw PreconditionError("removed vertex outside Z");
    if (gone[z_index[v]]) throw PreconditionError("removed vertex listed twice");
    gone[z_index[v]] = 1;
  }
  const std::size_t need = t.montgomery.removal_size();
  EdgeList out;
  bool constructive = need >= w.size() && (need - w.size()) % t.k == 0;
  if (constructive) {
    // Greedy overlay edges inside Z - W until exactly `need` Z vertices are spoken for.
    std::size_t taken = w.size();
    for (std::size_t i = 0; i < t.overlay.edge_count() && taken < need; ++i) {
      auto e = t.overlay.edge(i);
      if (std::any_of(e.begin(), e.end(), [&](Vertex v) { return gone[v]; })) continue;
      std::vector<Vertex> mapped;
      for (Vertex v : e) {
        gone[v] = 1;
        mapped.push_back(t.z[v]);
      }
      out.push_back(std::move(mapped));
      taken += t.k;
    }
    constructive = taken == need;
  }
  if (constructive) {
    std::vector<std::uint32_t> removed;
    for (std::size_t i = 0; i < t.r; ++i)
      if (gone[i]) removed.push_back(static_cast<std::uint32_t>(i));
    if (auto partner = montgomery_matching(t.montgomery, removed)) {
      for (std::size_t x = 0; x < partner->size(); ++x) out.push_back(t.lift.lift_edge(x, (*partner)[x]));
      return out;
    }
  }
  // Not reachable for a verified template; fall back to the general search.
  auto rest = remove_vertices(t.graph, VertexSet(t.vertex_count(), w));
  auto pm = find_perfect_matching(rest.graph);
  if (pm.status != MatchStatus::perfect) throw TemplateMatchingFailed("template has no perfect matching after removal");
  out.clear();
  for (const auto& e : pm.matching.edges()) {
    std::vector<Vertex> mapped;
    for (Vertex v : e) mapped.push_back(rest.to_original[v]);
    out.push_back(std::move(mapped));
  }
  return out;
}

TemplateVerdict verify_resilient_template(const ResilientTemplate& t, VerifyMode mode, std::size_t samples,
                                          std::uint64_t seed, unsigned threads) {
  TemplateVerdict v;
  std::vector<std::size_t> sizes;
  std::uint64_t total = 0;
  for (std::size_t j = 0; 2 * j < t.r; ++j)
    if (removal_feasible(t, j)) {
      sizes.push_back(j);
      total += binomial(static_cast<std::int64_t>(t.r), static_cast<std::int64_t>(j));
    }
  std::vector<std::vector<Vertex>> removals;
  if (mode == VerifyMode::exhaustive && total <= kTemplateExhaustiveLimit) {
    v.mode = VerifyMode::exhaustive;
    for (auto j : sizes)
      for (const auto& c : combinations(t.r, j)) {
        std::vector<Vertex> w;
        for (Vertex i : c) w.push_back(t.z[i]);
        removals.push_back(std::move(w));
      }
  } else {
    v.mode = VerifyMode::sampled;
    std::mt19937_64 rng(seed);
    std::vector<Vertex> pool(t.z);
    for (std::size_t i = 0; i < samples && !sizes.empty(); ++i) {
      auto j = sizes[std::uniform_int_distribution<std::size_t>(0, sizes.size() - 1)(rng)];
      std::shuffle(pool.begin(), pool.end(), rng);
      std::vector<Vertex> w(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(j));
      std::sort(w.begin(), w.end());
      removals.push_back(std::move(w));
    }
  }
  std::vector<char> bad(removals.size(), 0);
  parallel_for(removals.size(), threads, [&](std::size_t i) {
    auto rest = remove_vertices(t.graph, VertexSet(t.vertex_count(), removals[i]));
    bad[i] = find_perfect_matching(rest.graph).status != MatchStatus::perfect;
  });
  v.removals_checked = removals.size();
  for (std::size_t i = 0; i < removals.size(); ++i)
    if (bad[i]) {
      v.ok = false;
      v.violating = removals[i];
      break;
    }
  return v;
}

// ---------------------------------------------------------------------------
// Persistence

void save_template(const ResilientTemplate& t, const std::string& khg_path, const std::string& json_path,
                   const std::string& verification) {
  save_khg(khg_path, t.graph);
  nlohmann::ordered_json j;
  j["format"] = "dlab-template";
  j["version"] = 1;
  j["k"] = t.k;
  j["r"] = t.r;
  j["s"] = t.s;
  j["max_degree"] = t.montgomery.max_degree;
  j["z"] = t.z;
  j["vertices"] = t.vertex_count();
  j["edges"] = t.edge_count();
  j["L"] = t.achieved_l();
  j["montgomery_trials"] = t.montgomery_trials;
  j["overlay_mode"] = to_string(t.overlay_mode);
  j["provenance"] = "montgomery_lift+overlay";
  j["verification"] = verification.empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(verification);
  std::ofstream out(json_path);
  if (!out) throw Error("cannot write " + json_path);
  out << j.dump(2) << "\n";
}

ResilientTemplate load_template(const std::string& khg_path, const std::string& json_path) {
  auto g = load_khg(khg_path);
  std::ifstream in(json_path);
  if (!in) throw FormatError("cannot read " + json_path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
    if (j.at("format") != "dlab-template" || j.at("version") != 1) throw FormatError("unknown template sidecar version");
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad template sidecar: ") + e.what());
  }
  const std::size_t k = j["k"], r = j["r"], s = j["s"];
  if (g.k() != k || g.n() != template_vertex_count(r, k) || s != (r + 1) / 2)
    throw FormatError("template sidecar does not match the graph");
  BipartiteTemplate m;
  m.s = s;
  m.x_size = 3 * s;
  m.y_size = 2 * s;
  m.z_size = r;
  m.max_degree = j["max_degree"];
  m.adj.assign(m.x_size, {});
  const Vertex right0 = static_cast<Vertex>((k - 1) * m.x_size);
  EdgeList overlay;
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    auto e = g.edge(i);
    if (e.front() >= right0 + m.y_size) {
      std::vector<Vertex> local;
      for (Vertex v : e) local.push_back(v - right0 - static_cast<Vertex>(m.y_size));
      overlay.push_back(std::move(local));
    } else {
      // lift edge: X layers in ascending id order, right vertex last
      const Vertex column = e[k - 2] - static_cast<Vertex>((k - 2) * m.x_size);
      if (e.back() < right0 || column >= m.x_size) throw FormatError("edge does not fit the template layout");
      m.adj[column].push_back(e.back() - right0);
    }
  }
  auto t = assemble(r, k, std::move(m), Hypergraph::from_edges(r, k, std::move(overlay)));
  if (!(t.graph == g)) throw FormatError("template graph does not match its layout");
  if (t.z != j["z"].get<std::vector<Vertex>>()) throw FormatError("Z in the sidecar does not match the layout");
  t.montgomery_trials = j.value("montgomery_trials", std::size_t{0});
  t.overlay_mode = j.value("overlay_mode", std::string("exhaustive")) == "sampled" ? VerifyMode::sampled
                                                                                 : VerifyMode::exhaustive;
  return t;
}

}  // namespace dlab
