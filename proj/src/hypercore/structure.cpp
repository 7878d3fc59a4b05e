#include "dlab/hypercore.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <unordered_map>
#include <unordered_set>

namespace dlab {

namespace {

std::vector<std::vector<Vertex>> normalized(std::span<const std::vector<Vertex>> edges) {
  std::vector<std::vector<Vertex>> out(edges.begin(), edges.end());
  for (auto& e : out) {
    std::sort(e.begin(), e.end());
    e.erase(std::unique(e.begin(), e.end()), e.end());
  }
  return out;
}

// True when two distinct edges share at least two vertices.
bool has_double_intersection(const std::vector<std::vector<Vertex>>& edges) {
  std::unordered_map<std::uint64_t, std::size_t> owner;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto& e = edges[i];
    for (std::size_t a = 0; a < e.size(); ++a) {
      for (std::size_t b = a + 1; b < e.size(); ++b) {
        std::uint64_t key = (std::uint64_t{e[a]} << 32) | e[b];
        auto [it, inserted] = owner.emplace(key, i);
        if (!inserted && it->second != i) return true;
      }
    }
  }
  return false;
}

}  // namespace

std::optional<std::size_t> berge_girth(std::span<const std::vector<Vertex>> raw) {
  auto edges = normalized(raw);
  if (has_double_intersection(edges)) return 2;

  // Incidence graph: vertex nodes first, then one node per edge. A Berge
  // cycle of length l is a cycle of length 2l there.
  std::unordered_map<Vertex, std::uint32_t> id;
  for (const auto& e : edges)
    for (Vertex v : e) id.emplace(v, static_cast<std::uint32_t>(id.size()));
  const std::size_t nv = id.size();
  const std::size_t nodes = nv + edges.size();
  std::vector<std::vector<std::uint32_t>> adj(nodes);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    auto en = static_cast<std::uint32_t>(nv + i);
    for (Vertex v : edges[i]) {
      adj[id[v]].push_back(en);
      adj[en].push_back(id[v]);
    }
  }

  // Every cycle passes through a vertex node, so BFS from those suffices.
  std::size_t best = std::numeric_limits<std::size_t>::max();
  std::vector<std::uint32_t> dist(nodes), parent(nodes);
  constexpr auto kUnseen = std::numeric_limits<std::uint32_t>::max();
  for (std::uint32_t s = 0; s < nv && best > 6; ++s) {
    std::fill(dist.begin(), dist.end(), kUnseen);
    dist[s] = 0;
    parent[s] = kUnseen;
    std::queue<std::uint32_t> q;
    q.push(s);
    while (!q.empty()) {
      auto u = q.front();
      q.pop();
      if (2 * static_cast<std::size_t>(dist[u]) + 1 >= best) break;
      for (auto w : adj[u]) {
        if (dist[w] == kUnseen) {
          dist[w] = dist[u] + 1;
          parent[w] = u;
          q.push(w);
        } else if (w != parent[u]) {
          best = std::min<std::size_t>(best, std::size_t{dist[u]} + dist[w] + 1);
        }
      }
    }
  }
  if (best == std::numeric_limits<std::size_t>::max()) return std::nullopt;
  return best / 2;
}

std::optional<std::size_t> girth(const Hypergraph& h) {
  auto edges = h.edge_list();
  return berge_girth(edges);
}

bool is_linear(const Hypergraph& h) {
  return !has_double_intersection(h.edge_list());
}

// ---------------------------------------------------------------------------
// k-density

namespace {

bool better(std::int64_t num, std::int64_t den, std::int64_t bnum, std::int64_t bden) {
  return num * bden > bnum * den;
}

DensityResult density_enumeration(const Hypergraph& h) {
  const std::size_t m = h.edge_count();
  if (m > kDensityEnumerationLimit)
    throw CapacityError("k_density enumeration is limited to " + std::to_string(kDensityEnumerationLimit) +
                        " edges, got " + std::to_string(m));
  const auto k = static_cast<std::int64_t>(h.k());
  std::vector<std::uint32_t> count(h.n(), 0);
  std::int64_t vertices = 0, edges = 0;
  std::int64_t bnum = 0, bden = 1;
  std::uint32_t best_mask = 0;
  std::uint32_t mask = 0;
  // Gray-code walk: consecutive subsets differ in one edge.
  for (std::uint64_t step = 1; step < (std::uint64_t{1} << m); ++step) {
    auto bit = static_cast<std::size_t>(std::countr_zero(step));
    mask ^= std::uint32_t{1} << bit;
    bool added = (mask >> bit) & 1u;
    for (Vertex v : h.edge(bit)) {
      if (added) {
        if (count[v]++ == 0) ++vertices;
      } else {
        if (--count[v] == 0) --vertices;
      }
    }
    edges += added ? 1 : -1;
    if (vertices > k && better(edges - 1, vertices - k, bnum, bden)) {
      bnum = edges - 1;
      bden = vertices - k;
      best_mask = mask;
    }
  }
  DensityResult r;
  r.method = DensityMethod::enumeration;
  r.value = Rational(bnum, bden);
  for (std::size_t i = 0; i < m; ++i)
    if ((best_mask >> i) & 1u) r.witness.push_back(i);
  return r;
}

// Dinic max flow on int64 capacities.
class MaxFlow {
 public:
  explicit MaxFlow(std::size_t n) : adj_(n), level_(n), it_(n) {}
  void add(std::size_t u, std::size_t v, std::int64_t cap) {
    adj_[u].push_back(arcs_.size());
    arcs_.push_back({v, cap});
    adj_[v].push_back(arcs_.size());
    arcs_.push_back({u, 0});
  }
  std::int64_t run(std::size_t s, std::size_t t) {
    std::int64_t flow = 0;
    while (bfs(s, t)) {
      std::fill(it_.begin(), it_.end(), 0);
      while (auto f = dfs(s, t, std::numeric_limits<std::int64_t>::max())) flow += f;
    }
    return flow;
  }
  // Nodes reachable from s in the residual graph after run().
  std::vector<bool> source_side(std::size_t s) const {
    std::vector<bool> seen(adj_.size(), false);
    std::vector<std::size_t> stack{s};
    seen[s] = true;
    while (!stack.empty()) {
      auto u = stack.back();
      stack.pop_back();
      for (auto a : adj_[u]) {
        if (arcs_[a].cap > 0 && !seen[arcs_[a].to]) {
          seen[arcs_[a].to] = true;
          stack.push_back(arcs_[a].to);
        }
      }
    }
    return seen;
  }

 private:
  struct Arc {
    std::size_t to;
    std::int64_t cap;
  };
  bool bfs(std::size_t s, std::size_t t) {
    std::fill(level_.begin(), level_.end(), -1);
    level_[s] = 0;
    std::queue<std::size_t> q;
    q.push(s);
    while (!q.empty()) {
      auto u = q.front();
      q.pop();
      for (auto a : adj_[u]) {
        if (arcs_[a].cap > 0 && level_[arcs_[a].to] < 0) {
          level_[arcs_[a].to] = level_[u] + 1;
          q.push(arcs_[a].to);
        }
      }
    }
    return level_[t] >= 0;
  }
  std::int64_t dfs(std::size_t u, std::size_t t, std::int64_t f) {
    if (u == t) return f;
    for (auto& i = it_[u]; i < adj_[u].size(); ++i) {
      auto a = adj_[u][i];
      auto v = arcs_[a].to;
      if (arcs_[a].cap > 0 && level_[v] == level_[u] + 1) {
        if (auto got = dfs(v, t, std::min(f, arcs_[a].cap))) {
          arcs_[a].cap -= got;
          arcs_[a ^ 1].cap += got;
          return got;
        }
      }
    }
    return 0;
  }

  std::vector<std::vector<std::size_t>> adj_;
  std::vector<Arc> arcs_;
  std::vector<int> level_;
  std::vector<std::size_t> it_;
};

// Maximizes Q*e(S) - P*v(S) over edge sets S containing `forced`; returns S.
std::vector<std::size_t> max_closure(const Hypergraph& h, std::size_t forced, std::int64_t p, std::int64_t q) {
  const std::size_t m = h.edge_count();
  const std::size_t source = m + h.n(), sink = source + 1;
  const std::int64_t inf = std::numeric_limits<std::int64_t>::max() / 4;
  MaxFlow flow(sink + 1);
  for (std::size_t i = 0; i < m; ++i) {
    flow.add(source, i, i == forced ? inf : q);
    for (Vertex v : h.edge(i)) flow.add(i, m + v, inf);
  }
  for (std::size_t v = 0; v < h.n(); ++v)
    if (h.vertex_degree(static_cast<Vertex>(v)) > 0) flow.add(m + v, sink, p);
  flow.run(source, sink);
  auto side = flow.source_side(source);
  std::vector<std::size_t> chosen;
  for (std::size_t i = 0; i < m; ++i)
    if (side[i]) chosen.push_back(i);
  return chosen;
}

std::int64_t span_vertices(const Hypergraph& h, const std::vector<std::size_t>& ids) {
  VertexSet seen(h.n());
  for (auto i : ids)
    for (Vertex v : h.edge(i)) seen.insert(v);
  return static_cast<std::int64_t>(seen.size());
}

DensityResult density_flow(const Hypergraph& h) {
  const auto k = static_cast<std::int64_t>(h.k());
  Rational best(0);
  std::vector<std::size_t> witness;
  for (std::size_t e0 = 0; e0 < h.edge_count(); ++e0) {
    // Dinkelbach: improve while some S containing e0 beats the current ratio.
    for (;;) {
      auto s = max_closure(h, e0, best.numerator(), best.denominator());
      auto e = static_cast<std::int64_t>(s.size());
      auto v = span_vertices(h, s);
      if (v <= k) break;
      Rational ratio(e - 1, v - k);
      if (ratio <= best) break;
      best = ratio;
      witness = std::move(s);
    }
  }
  DensityResult r;
  r.method = DensityMethod::flow;
  r.value = best;
  r.witness = std::move(witness);
  return r;
}

}  // namespace

DensityResult k_density(const Hypergraph& h, DensityMethod method) {
  if (method == DensityMethod::automatic)
    method = h.edge_count() <= kDensityEnumerationLimit ? DensityMethod::enumeration : DensityMethod::flow;
  return method == DensityMethod::enumeration ? density_enumeration(h) : density_flow(h);
}

// ---------------------------------------------------------------------------
// Contraction G(F, P)

Contraction contract(const Hypergraph& g, const ContractionSpec& fp) {
  const std::size_t k = g.k();
  if (fp.parts.size() != k - 1)
    throw SpecError("contraction needs k-1 = " + std::to_string(k - 1) + " parts, got " +
                    std::to_string(fp.parts.size()));
  // owner: 0 = unused, 1 + j = part j, -1 = tuple vertex
  std::vector<int> owner(g.n(), 0);
  auto claim = [&](Vertex v, int tag) {
    if (v >= g.n()) throw SpecError("vertex " + std::to_string(v) + " outside G");
    if (owner[v] != 0) throw SpecError("vertex " + std::to_string(v) + " used twice in the contraction fp");
    owner[v] = tag;
  };
  for (std::size_t j = 0; j < fp.parts.size(); ++j)
    for (Vertex v : fp.parts[j]) claim(v, static_cast<int>(j) + 1);
  for (const auto& t : fp.tuples) {
    if (t.size() != k - 1) throw SpecError("tuple of arity " + std::to_string(t.size()) + ", expected k-1");
    for (Vertex v : t) claim(v, -1);
  }

  Contraction c;
  std::vector<Vertex> relabel(g.n(), Contraction::kNoOrigin);
  for (std::size_t v = 0; v < g.n(); ++v) {
    if (owner[v] > 0) {
      relabel[v] = static_cast<Vertex>(c.to_original.size());
      c.to_original.push_back(static_cast<Vertex>(v));
    }
  }
  for (std::size_t i = 0; i < fp.tuples.size(); ++i) {
    c.tuple_vertex.push_back(static_cast<Vertex>(c.to_original.size()));
    c.to_original.push_back(Contraction::kNoOrigin);
  }

  std::vector<std::pair<std::vector<Vertex>, std::size_t>> out;
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    auto e = g.edge(i);
    if (std::all_of(e.begin(), e.end(), [&](Vertex v) { return owner[v] > 0; })) {
      std::vector<Vertex> ne;
      for (Vertex v : e) ne.push_back(relabel[v]);
      out.emplace_back(std::move(ne), i);
    }
  }
  for (std::size_t t = 0; t < fp.tuples.size(); ++t) {
    for (std::size_t j = 0; j < k - 1; ++j) {
      Vertex vj = fp.tuples[t][j];
      for (std::uint32_t id : g.incident_edges(vj)) {
        auto e = g.edge(id);
        bool inside = std::all_of(e.begin(), e.end(), [&](Vertex v) {
          return v == vj || owner[v] == static_cast<int>(j) + 1;
        });
        if (!inside) continue;
        std::vector<Vertex> ne{c.tuple_vertex[t]};
        for (Vertex v : e)
          if (v != vj) ne.push_back(relabel[v]);
        out.emplace_back(std::move(ne), id);
      }
    }
  }
  for (auto& [e, id] : out) std::sort(e.begin(), e.end());
  std::sort(out.begin(), out.end());
  EdgeList edges;
  for (auto& [e, id] : out) {
    edges.push_back(e);
    c.preimage.push_back(id);
  }
  c.graph = Hypergraph::from_edges(c.to_original.size(), k, std::move(edges));
  return c;
}

}  // namespace dlab
