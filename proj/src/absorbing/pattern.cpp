#include "dlab/absorbing.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <queue>

namespace dlab {

namespace {

constexpr auto kFar = std::numeric_limits<std::uint32_t>::max();

// Node ids: left i -> i, right j -> side + j.
std::vector<std::vector<std::uint32_t>> full_adjacency(const BipartitePattern& f) {
  std::vector<std::vector<std::uint32_t>> adj(2 * f.side);
  for (std::size_t i = 0; i < f.side; ++i) {
    for (auto j : f.adj[i]) {
      adj[i].push_back(static_cast<std::uint32_t>(f.side + j));
      adj[f.side + j].push_back(static_cast<std::uint32_t>(i));
    }
  }
  return adj;
}

// Kuhn augmenting path for a perfect matching of a regular bipartite graph.
bool augment(const BipartitePattern& f, std::size_t left, std::vector<int>& match_right, std::vector<char>& seen) {
  for (auto j : f.adj[left]) {
    if (seen[j]) continue;
    seen[j] = 1;
    if (match_right[j] < 0 || augment(f, static_cast<std::size_t>(match_right[j]), match_right, seen)) {
      match_right[j] = static_cast<int>(left);
      return true;
    }
  }
  return false;
}

BipartitePattern complete_pattern(std::size_t q) {
  BipartitePattern f{q, q, {}};
  f.adj.assign(q, {});
  for (std::size_t i = 0; i < q; ++i)
    for (std::size_t j = 0; j < q; ++j) f.adj[i].push_back(static_cast<std::uint32_t>(j));
  return f;
}

// Lines {i, i+1, i+3} of the Fano plane against its points: girth 6.
BipartitePattern heawood() {
  BipartitePattern f{7, 3, {}};
  f.adj.assign(7, {});
  for (std::uint32_t i = 0; i < 7; ++i) f.adj[i] = {i, (i + 1) % 7, (i + 3) % 7};
  return f;
}

// Duads of {0..5} against synthemes: girth 8.
BipartitePattern tutte_coxeter() {
  std::vector<std::pair<int, int>> duads;
  for (int a = 0; a < 6; ++a)
    for (int b = a + 1; b < 6; ++b) duads.emplace_back(a, b);
  std::vector<std::vector<std::size_t>> synthemes;
  for (std::size_t x = 0; x < duads.size(); ++x)
    for (std::size_t y = x + 1; y < duads.size(); ++y)
      for (std::size_t z = y + 1; z < duads.size(); ++z) {
        int mask = 0, bits = 0;
        for (auto d : {duads[x], duads[y], duads[z]}) {
          mask |= (1 << d.first) | (1 << d.second);
          bits += 2;
        }
        if (__builtin_popcount(static_cast<unsigned>(mask)) == bits) synthemes.push_back({x, y, z});
      }
  BipartitePattern f{15, 3, {}};
  f.adj.assign(15, {});
  for (std::size_t s = 0; s < synthemes.size(); ++s)
    for (auto d : synthemes[s]) f.adj[d].push_back(static_cast<std::uint32_t>(s));
  return f;
}

// Bipartite Moore bound on the side for degree q and even girth g.
std::size_t moore_side(std::size_t q, std::size_t g) {
  std::size_t total = 0, term = 1;
  for (std::size_t i = 0; i < g / 2; ++i) {
    total += term;
    term *= q - 1;
  }
  return std::max(total, q);
}

std::optional<BipartitePattern> random_pattern(std::size_t q, std::size_t girth, std::size_t side, std::mt19937_64& rng) {
  const std::size_t n = side;
  std::vector<std::vector<std::uint32_t>> adj(2 * n);
  std::vector<std::uint32_t> dist(2 * n);
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t round = 0; round < q; ++round) {
    bool placed = false;
    for (int retry = 0; retry < 30 && !placed; ++retry) {
      auto saved = adj;
      std::shuffle(order.begin(), order.end(), rng);
      std::vector<char> taken(n, 0);
      placed = true;
      for (auto a : order) {
        // Right vertices at distance < girth-1 from a would close a short cycle.
        std::fill(dist.begin(), dist.end(), kFar);
        dist[a] = 0;
        std::queue<std::uint32_t> bfs;
        bfs.push(a);
        while (!bfs.empty()) {
          auto u = bfs.front();
          bfs.pop();
          if (dist[u] + 1 >= girth - 1) continue;
          for (auto w : adj[u])
            if (dist[w] == kFar) {
              dist[w] = dist[u] + 1;
              bfs.push(w);
            }
        }
        std::vector<std::uint32_t> options;
        for (std::uint32_t j = 0; j < n; ++j)
          if (!taken[j] && dist[n + j] == kFar) options.push_back(j);
        if (options.empty()) {
          placed = false;
          break;
        }
        auto j = options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng)];
        taken[j] = 1;
        adj[a].push_back(static_cast<std::uint32_t>(n + j));
        adj[n + j].push_back(a);
      }
      if (!placed) adj = std::move(saved);
    }
    if (!placed) return std::nullopt;
  }
  BipartitePattern f{n, q, {}};
  f.adj.assign(n, {});
  for (std::size_t i = 0; i < n; ++i) {
    for (auto w : adj[i]) f.adj[i].push_back(static_cast<std::uint32_t>(w - n));
    std::sort(f.adj[i].begin(), f.adj[i].end());
  }
  return f;
}

}  // namespace

std::optional<std::size_t> pattern_girth(const BipartitePattern& f) {
  auto adj = full_adjacency(f);
  std::size_t best = SIZE_MAX;
  std::vector<std::uint32_t> dist(adj.size()), parent(adj.size());
  for (std::uint32_t s = 0; s < f.side; ++s) {
    std::fill(dist.begin(), dist.end(), kFar);
    dist[s] = 0;
    parent[s] = kFar;
    std::queue<std::uint32_t> q;
    q.push(s);
    while (!q.empty()) {
      auto u = q.front();
      q.pop();
      if (2 * std::size_t{dist[u]} + 1 >= best) break;
      for (auto w : adj[u]) {
        if (dist[w] == kFar) {
          dist[w] = dist[u] + 1;
          parent[w] = u;
          q.push(w);
        } else if (w != parent[u]) {
          best = std::min<std::size_t>(best, std::size_t{dist[u]} + dist[w] + 1);
        }
      }
    }
  }
  if (best == SIZE_MAX) return std::nullopt;
  return best;
}

BipartitePattern peel_to_multiple(BipartitePattern f, std::size_t k) {
  while (f.degree > 0 && f.degree % k != 0) {
    std::vector<int> match_right(f.side, -1);
    for (std::size_t i = 0; i < f.side; ++i) {
      std::vector<char> seen(f.side, 0);
      if (!augment(f, i, match_right, seen)) throw Error("regular bipartite graph without a perfect matching");
    }
    for (std::size_t j = 0; j < f.side; ++j) {
      auto& row = f.adj[static_cast<std::size_t>(match_right[j])];
      row.erase(std::find(row.begin(), row.end(), static_cast<std::uint32_t>(j)));
    }
    --f.degree;
  }
  return f;
}

std::optional<BipartitePattern> make_pattern(std::size_t q, std::size_t big_k, std::size_t side, std::mt19937_64& rng,
                                             std::size_t attempts) {
  if (q == 0) return std::nullopt;
  const std::size_t girth = std::max<std::size_t>(4, big_k + (big_k % 2));
  if (girth <= 4 && (side == 0 || side == q)) return complete_pattern(q);
  if (q == 3 && girth <= 6 && (side == 0 || side == 7)) return heawood();
  if (q == 3 && girth <= 8 && (side == 0 || side == 15)) return tutte_coxeter();
  std::size_t n = side ? side : moore_side(q, girth);
  const std::size_t rounds = side ? 1 : 24;
  const std::size_t per_round = std::max<std::size_t>(1, side ? attempts : attempts / rounds);
  for (std::size_t r = 0; r < rounds; ++r) {
    for (std::size_t a = 0; a < per_round; ++a) {
      auto f = random_pattern(q, girth, n, rng);
      if (!f) continue;
      auto g = pattern_girth(*f);
      if (!g || *g >= girth) return f;
    }
    n += std::max<std::size_t>(1, n / 8);
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

SearchResult<Absorber> find_sparse_r_absorber(const Hypergraph& g, const std::vector<Vertex>& roots,
                                              const SparseAbsorberConfig& cfg) {
  const std::size_t k = g.k();
  const std::size_t rk = roots.size();
  if (rk == 0 || rk % k != 0) throw PreconditionError("root count must be a positive multiple of k");
  std::size_t q = cfg.q;
  if (q == 0) q = std::max(k, (rk + k - 1) / k * k);
  if (q % k != 0) throw PreconditionError("pattern edge size q must be divisible by k");
  if (q < rk) throw PreconditionError("pattern edge size q must be at least rk");
  for (Vertex v : roots)
    if (v >= g.n()) throw PreconditionError("root outside the host");

  SearchResult<Absorber> result;
  std::mt19937_64 pattern_rng(derive_seed(cfg.seed, 0, 1));
  auto f = make_pattern(q, cfg.big_k, cfg.side, pattern_rng);
  if (!f) {
    result.status = SearchStatus::exhausted;
    result.diagnostic = "no pattern of degree " + std::to_string(q) + " and girth >= " + std::to_string(cfg.big_k);
    return result;
  }
  const std::size_t side = f->side;
  const std::size_t lv = f->edge_count();  // vertices of the pattern hypergraph L

  VertexSet blocked(g.n(), roots);
  if (cfg.forbidden) blocked |= *cfg.forbidden;
  std::vector<Vertex> pool;
  for (std::size_t v = 0; v < g.n(); ++v)
    if (!blocked.contains(static_cast<Vertex>(v))) pool.push_back(static_cast<Vertex>(v));
  if (pool.size() < lv - rk) {
    result.status = SearchStatus::exhausted;
    result.diagnostic = "host too small: pattern needs " + std::to_string(lv - rk) + " free vertices, have " +
                        std::to_string(pool.size());
    return result;
  }

  // L-vertex a*q+s is the F-edge (a, adj[a][s]); M1 stars by left vertex, M2 stars by right vertex.
  std::vector<std::vector<std::uint32_t>> right_star(side);
  for (std::size_t a = 0; a < side; ++a)
    for (std::size_t s = 0; s < q; ++s) right_star[f->adj[a][s]].push_back(static_cast<std::uint32_t>(a * q + s));

  std::string diagnostics;
  for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
    std::mt19937_64 rng(derive_seed(cfg.seed, trial, 2));
    auto b_star = std::uniform_int_distribution<std::size_t>(0, side - 1)(rng);
    auto star = right_star[b_star];
    std::shuffle(star.begin(), star.end(), rng);
    std::vector<std::uint32_t> z(star.begin(), star.begin() + static_cast<std::ptrdiff_t>(rk));
    std::vector<Vertex> phi(lv, 0);
    std::vector<char> is_z(lv, 0);
    for (std::size_t i = 0; i < rk; ++i) {
      phi[z[i]] = roots[i];
      is_z[z[i]] = 1;
    }
    auto shuffled = pool;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    std::size_t next = 0;
    for (std::size_t v = 0; v < lv; ++v)
      if (!is_z[v]) phi[v] = shuffled[next++];

    Absorber a;
    a.roots = roots;
    bool ok = true;
    // M2 edges drop the z slots, which is what leaves the roots uncovered.
    auto place = [&](const std::vector<std::uint32_t>& pattern_edge, EdgeList& into, bool drop_z,
                     const std::string& label) {
      std::vector<Vertex> s;
      for (auto v : pattern_edge)
        if (!(drop_z && is_z[v])) s.push_back(phi[v]);
      if (s.empty()) return true;
      std::sort(s.begin(), s.end());
      auto sub = induced(g, s);
      auto pm = find_perfect_matching(sub.graph, cfg.pm_budget);
      result.nodes += pm.nodes_explored;
      if (pm.status != MatchStatus::perfect) {
        if (diagnostics.size() < 400)
          diagnostics += "trial " + std::to_string(trial) + ": " + label + " has no perfect matching; ";
        return false;
      }
      for (const auto& e : pm.matching.edges()) {
        std::vector<Vertex> orig;
        for (Vertex v : e) orig.push_back(sub.to_original[v]);
        into.push_back(std::move(orig));
      }
      return true;
    };
    for (std::size_t left = 0; left < side && ok; ++left) {
      std::vector<std::uint32_t> e(q);
      for (std::size_t s = 0; s < q; ++s) e[s] = static_cast<std::uint32_t>(left * q + s);
      ok = place(e, a.covering, false, "M1 edge " + std::to_string(left));
    }
    for (std::size_t right = 0; right < side && ok; ++right)
      ok = place(right_star[right], a.noncovering, true, "M2 edge " + std::to_string(right));
    if (!ok) continue;
    if (auto v = verify_r_absorber(a, g); !v) {
      diagnostics += "trial " + std::to_string(trial) + ": " + v.reason + "; ";
      continue;
    }
    if (!is_k_sparse(a, cfg.big_k)) {
      diagnostics += "trial " + std::to_string(trial) + ": girth below K; ";
      continue;
    }
    a.sparsity = cfg.big_k;
    result.status = SearchStatus::found;
    result.value = std::move(a);
    return result;
  }
  result.status = SearchStatus::exhausted;
  result.diagnostic = "all " + std::to_string(cfg.trials) + " trials failed: " + diagnostics;
  return result;
}

}  // namespace dlab
