#include "dlab/parallel.hpp"
#include "dlab/templates.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <random>
#include <set>

namespace dlab {

const char* to_string(VerifyMode m) { return m == VerifyMode::exhaustive ? "exhaustive" : "sampled"; }

std::size_t BipartiteTemplate::edge_count() const {
  std::size_t e = 0;
  for (const auto& nb : adj) e += nb.size();
  return e;
}

namespace {

bool kuhn(const BipartiteTemplate& r, std::size_t x, const std::vector<char>& dead, std::vector<int>& owner,
          std::vector<char>& seen) {
  for (auto w : r.adj[x]) {
    if (dead[w] || seen[w]) continue;
    seen[w] = 1;
    if (owner[w] < 0 || kuhn(r, static_cast<std::size_t>(owner[w]), dead, owner, seen)) {
      owner[w] = static_cast<int>(x);
      return true;
    }
  }
  return false;
}

}  // namespace

std::optional<std::vector<std::uint32_t>> montgomery_matching(const BipartiteTemplate& r,
                                                              std::span<const std::uint32_t> removed) {
  std::vector<char> dead(r.right_size(), 0);
  for (auto z : removed) dead[r.y_size + z] = 1;
  std::vector<int> owner(r.right_size(), -1);
  std::vector<char> seen(r.right_size());
  for (std::size_t x = 0; x < r.x_size; ++x) {
    std::fill(seen.begin(), seen.end(), 0);
    if (!kuhn(r, x, dead, owner, seen)) return std::nullopt;
  }
  std::vector<std::uint32_t> partner(r.x_size);
  for (std::size_t w = 0; w < owner.size(); ++w)
    if (owner[w] >= 0) partner[static_cast<std::size_t>(owner[w])] = static_cast<std::uint32_t>(w);
  return partner;
}

MontgomeryVerdict verify_montgomery(const BipartiteTemplate& r, std::size_t samples, std::uint64_t seed,
                                    unsigned threads) {
  MontgomeryVerdict v;
  if (r.right_size() < r.x_size || r.removal_size() > r.z_size) {
    v.ok = false;
    return v;
  }
  const std::size_t rem = r.removal_size();
  const auto total = binomial(static_cast<std::int64_t>(r.z_size), static_cast<std::int64_t>(rem));
  if (total <= kMontgomeryExhaustiveLimit) {
    v.mode = VerifyMode::exhaustive;
    if (rem == 0) {
      v.removals_checked = 1;
      v.ok = montgomery_matching(r, {}).has_value();
      return v;
    }
    // Split by the first removed vertex; lexicographic order inside each slice.
    std::vector<std::optional<std::vector<std::uint32_t>>> first_bad(r.z_size);
    std::vector<std::uint64_t> counts(r.z_size, 0);
    parallel_for(r.z_size, threads, [&](std::size_t f) {
      if (f + rem > r.z_size) return;
      std::vector<Vertex> tail(rem - 1);
      std::iota(tail.begin(), tail.end(), static_cast<Vertex>(0));
      const std::size_t span = r.z_size - f - 1;
      do {
        std::vector<std::uint32_t> d{static_cast<std::uint32_t>(f)};
        for (auto t : tail) d.push_back(static_cast<std::uint32_t>(f + 1 + t));
        ++counts[f];
        if (!montgomery_matching(r, d)) {
          first_bad[f] = d;
          return;
        }
      } while (rem > 1 && next_combination(tail, span));
    });
    for (auto c : counts) v.removals_checked += c;
    for (auto& bad : first_bad)
      if (bad) {
        v.ok = false;
        v.violating = *bad;
        break;
      }
    return v;
  }
  v.mode = VerifyMode::sampled;
  std::mt19937_64 rng(seed);
  std::vector<std::uint32_t> pool(r.z_size);
  std::iota(pool.begin(), pool.end(), 0u);
  for (std::size_t i = 0; i < samples; ++i) {
    std::shuffle(pool.begin(), pool.end(), rng);
    std::vector<std::uint32_t> d(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(rem));
    std::sort(d.begin(), d.end());
    ++v.removals_checked;
    if (!montgomery_matching(r, d)) {
      v.ok = false;
      v.violating = d;
      return v;
    }
  }
  return v;
}

namespace {

BipartiteTemplate random_bipartite(std::size_t s, std::size_t max_degree, std::mt19937_64& rng) {
  BipartiteTemplate r;
  r.s = s;
  r.x_size = 3 * s;
  r.y_size = 2 * s;
  r.z_size = 2 * s;
  r.max_degree = max_degree;
  r.adj.assign(r.x_size, {});
  std::vector<std::size_t> right_deg(r.right_size(), 0);
  std::vector<std::uint32_t> order(r.x_size);
  std::iota(order.begin(), order.end(), 0u);
  // Degree rounds keep the X side near-regular; the right side just respects the cap.
  for (std::size_t round = 0; round < max_degree; ++round) {
    std::shuffle(order.begin(), order.end(), rng);
    for (auto x : order) {
      std::vector<std::uint32_t> options;
      for (std::uint32_t w = 0; w < r.right_size(); ++w)
        if (right_deg[w] < max_degree && std::find(r.adj[x].begin(), r.adj[x].end(), w) == r.adj[x].end())
          options.push_back(w);
      if (options.empty()) continue;
      // favour the least loaded right vertices
      std::size_t low = right_deg[options.front()];
      for (auto w : options) low = std::min(low, right_deg[w]);
      std::vector<std::uint32_t> light;
      for (auto w : options)
        if (right_deg[w] <= low + 1) light.push_back(w);
      auto w = light[std::uniform_int_distribution<std::size_t>(0, light.size() - 1)(rng)];
      r.adj[x].push_back(w);
      ++right_deg[w];
    }
  }
  for (auto& nb : r.adj) std::sort(nb.begin(), nb.end());
  return r;
}

}  // namespace

SearchResult<BipartiteTemplate> search_montgomery(std::size_t s, std::size_t max_degree, std::size_t trials,
                                                  std::uint64_t seed, unsigned threads) {
  if (s < 2) throw PreconditionError("search_montgomery needs s >= 2");
  SearchResult<BipartiteTemplate> out;
  for (std::size_t t = 0; t < trials; ++t) {
    std::mt19937_64 rng(derive_seed(seed, t));
    auto r = random_bipartite(s, max_degree, rng);
    ++out.nodes;
    if (verify_montgomery(r, 20'000, derive_seed(seed, t, 1), threads)) {
      out.status = SearchStatus::found;
      out.value = std::move(r);
      return out;
    }
  }
  out.status = SearchStatus::exhausted;
  out.diagnostic = "no verified Montgomery graph in " + std::to_string(trials) + " trials (s=" + std::to_string(s) +
                   ", max degree " + std::to_string(max_degree) + ")";
  return out;
}

BipartiteTemplate trim_z(BipartiteTemplate r) {
  if (r.z_size == 0) throw PreconditionError("Z is empty");
  const auto last = static_cast<std::uint32_t>(r.y_size + r.z_size - 1);
  for (auto& nb : r.adj) nb.erase(std::remove(nb.begin(), nb.end(), last), nb.end());
  --r.z_size;
  return r;
}

// ---------------------------------------------------------------------------

std::vector<Vertex> LiftedTemplate::lift_edge(std::size_t column, std::size_t right) const {
  std::vector<Vertex> e;
  for (std::size_t layer = 0; layer + 1 < k; ++layer) e.push_back(x_vertex(layer, column));
  e.push_back(right_vertex(right));
  return e;
}

LiftedTemplate lift_k_partite(const BipartiteTemplate& r, std::size_t k) {
  if (k < 2) throw SizeError("lift needs k >= 2");
  LiftedTemplate l;
  l.k = k;
  l.x_size = r.x_size;
  const std::size_t n = (k - 1) * r.x_size + r.right_size();
  for (std::size_t layer = 0; layer + 1 < k; ++layer) l.part.insert(l.part.end(), r.x_size, static_cast<std::uint32_t>(layer));
  l.part.insert(l.part.end(), r.y_size, static_cast<std::uint32_t>(k - 1));
  l.part.insert(l.part.end(), r.z_size, static_cast<std::uint32_t>(k));
  for (std::size_t i = 0; i < r.z_size; ++i) l.z.push_back(l.right_vertex(r.y_size + i));
  EdgeList edges;
  for (std::size_t x = 0; x < r.x_size; ++x)
    for (auto w : r.adj[x]) edges.push_back(l.lift_edge(x, w));
  l.graph = Hypergraph::from_edges(n, k, std::move(edges));
  return l;
}

// ---------------------------------------------------------------------------
// Overlay

namespace {

std::uint32_t edge_mask(std::span<const Vertex> e) {
  std::uint32_t m = 0;
  for (Vertex v : e) m |= std::uint32_t{1} << v;
  return m;
}

bool hit(const std::vector<std::uint32_t>& edges, std::uint32_t set) {
  return std::any_of(edges.begin(), edges.end(), [&](std::uint32_t e) { return (e & set) == e; });
}

std::vector<std::uint32_t> masks_of_size(std::size_t r, std::size_t t) {
  std::vector<std::uint32_t> out;
  if (t > r) return out;
  if (t == 0) return {0};
  std::uint32_t m = (std::uint32_t{1} << t) - 1;
  const std::uint64_t end = std::uint64_t{1} << r;
  while (m < end) {
    out.push_back(m);
    // Gosper's hack
    std::uint32_t c = m & -m, rr = m + c;
    m = (((rr ^ m) >> 2) / c) | rr;
    if (rr == 0) break;
  }
  return out;
}

}  // namespace

bool overlay_is_independent_free(const Hypergraph& g, VerifyMode* mode, std::uint64_t seed, std::size_t samples) {
  const std::size_t r = g.n(), t = (r + 1) / 2;
  if (r == 0) return true;
  if (r <= kOverlayExactLimit) {
    if (mode) *mode = VerifyMode::exhaustive;
    std::vector<std::uint32_t> edges;
    for (std::size_t i = 0; i < g.edge_count(); ++i) edges.push_back(edge_mask(g.edge(i)));
    for (auto m : masks_of_size(r, t))
      if (!hit(edges, m)) return false;
    return true;
  }
  if (mode) *mode = VerifyMode::sampled;
  std::mt19937_64 rng(seed);
  std::vector<Vertex> pool(r);
  std::iota(pool.begin(), pool.end(), Vertex{0});
  for (std::size_t i = 0; i < samples; ++i) {
    std::shuffle(pool.begin(), pool.end(), rng);
    std::vector<Vertex> set(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(t));
    std::sort(set.begin(), set.end());
    if (induced(g, set).graph.edge_count() == 0) return false;
  }
  return true;
}

SearchResult<OverlayResult> independent_free_overlay(std::size_t r, std::size_t k, std::size_t edge_budget,
                                                     std::uint64_t seed, std::size_t trials) {
  SearchResult<OverlayResult> out;
  const std::size_t t = (r + 1) / 2;
  if (r > 0 && t < k) {
    out.diagnostic = "ceil(r/2) < k: no edge fits in a half-size set";
    return out;
  }
  for (std::size_t trial = 0; trial < trials; ++trial) {
    std::mt19937_64 rng(derive_seed(seed, trial));
    EdgeList edges;
    if (r <= kOverlayExactLimit) {
      // Greedy hitting: every half-size set not yet spanning an edge receives a random k-subset of itself.
      auto sets = masks_of_size(r, t);
      std::shuffle(sets.begin(), sets.end(), rng);
      std::vector<std::uint32_t> masks;
      for (auto m : sets) {
        ++out.nodes;
        if (hit(masks, m)) continue;
        std::vector<Vertex> members;
        for (std::uint32_t b = m; b; b &= b - 1) members.push_back(static_cast<Vertex>(std::countr_zero(b)));
        std::shuffle(members.begin(), members.end(), rng);
        members.resize(k);
        std::sort(members.begin(), members.end());
        masks.push_back(edge_mask(members));
        edges.push_back(members);
        if (edges.size() > edge_budget) break;
      }
    } else {
      std::set<std::vector<Vertex>> chosen;
      edge_budget = std::min<std::size_t>(edge_budget, binomial(static_cast<std::int64_t>(r), static_cast<std::int64_t>(k)));
      std::vector<Vertex> pool(r);
      std::iota(pool.begin(), pool.end(), Vertex{0});
      while (chosen.size() < edge_budget) {
        std::shuffle(pool.begin(), pool.end(), rng);
        std::vector<Vertex> e(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k));
        std::sort(e.begin(), e.end());
        chosen.insert(e);
      }
      edges.assign(chosen.begin(), chosen.end());
    }
    if (edges.size() > edge_budget) continue;
    std::sort(edges.begin(), edges.end());
    OverlayResult res;
    res.graph = Hypergraph::from_edges(r, k, std::move(edges));
    if (!overlay_is_independent_free(res.graph, &res.mode, derive_seed(seed, trial, 1))) continue;
    out.status = SearchStatus::found;
    out.value = std::move(res);
    return out;
  }
  out.status = SearchStatus::exhausted;
  out.diagnostic = "no overlay within " + std::to_string(edge_budget) + " edges after " + std::to_string(trials) +
                   " trials";
  return out;
}

}  // namespace dlab
