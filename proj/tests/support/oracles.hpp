#pragma once
// Slow, independent reference implementations used only by tests.

#include "dlab/hypercore.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <random>
#include <vector>

namespace oracle {

using dlab::EdgeList;
using dlab::Vertex;

inline std::size_t degree(const EdgeList& edges, const std::vector<Vertex>& s) {
  std::size_t c = 0;
  for (const auto& e : edges)
    if (std::all_of(s.begin(), s.end(), [&](Vertex v) { return std::find(e.begin(), e.end(), v) != e.end(); })) ++c;
  return c;
}

// Shortest Berge cycle by exhaustive search over edge sequences e_1..e_l
// (distinct edges) with distinct connectors v_i in e_i ∩ e_{i+1}.
inline std::optional<std::size_t> berge_girth(const EdgeList& edges) {
  const std::size_t m = edges.size();
  auto meets = [&](std::size_t a, std::size_t b) {
    std::vector<Vertex> out;
    for (Vertex v : edges[a])
      if (std::find(edges[b].begin(), edges[b].end(), v) != edges[b].end()) out.push_back(v);
    return out;
  };
  for (std::size_t len = 2; len <= m; ++len) {
    std::vector<std::size_t> seq;
    std::vector<Vertex> connectors;
    std::vector<bool> used(m, false);
    std::function<bool()> extend = [&]() -> bool {
      if (seq.size() == len) {
        for (Vertex v : meets(seq.back(), seq.front())) {
          if (std::find(connectors.begin(), connectors.end(), v) == connectors.end()) return true;
        }
        return false;
      }
      for (std::size_t nxt = seq.front() + 1; nxt < m; ++nxt) {
        if (used[nxt]) continue;
        for (Vertex v : meets(seq.back(), nxt)) {
          if (std::find(connectors.begin(), connectors.end(), v) != connectors.end()) continue;
          used[nxt] = true;
          seq.push_back(nxt);
          connectors.push_back(v);
          bool ok = extend();
          connectors.pop_back();
          seq.pop_back();
          used[nxt] = false;
          if (ok) return true;
        }
      }
      return false;
    };
    for (std::size_t start = 0; start < m; ++start) {
      seq = {start};
      used.assign(m, false);
      used[start] = true;
      if (extend()) return len;
    }
  }
  return std::nullopt;
}

inline EdgeList random_edges(std::mt19937_64& rng, std::size_t n, std::size_t k, double p) {
  std::bernoulli_distribution keep(p);
  EdgeList out;
  for (auto& c : dlab::combinations(n, k))
    if (keep(rng)) out.push_back(c);
  return out;
}

}  // namespace oracle

namespace oracle {

// Size of a maximum matching by enumerating edge subsets in increasing size.
inline std::size_t max_matching_size(const EdgeList& edges, std::size_t n) {
  std::size_t best = 0;
  std::vector<char> used(n, 0);
  std::function<void(std::size_t, std::size_t)> go = [&](std::size_t from, std::size_t size) {
    best = std::max(best, size);
    for (std::size_t i = from; i < edges.size(); ++i) {
      bool free = std::all_of(edges[i].begin(), edges[i].end(), [&](Vertex v) { return !used[v]; });
      if (!free) continue;
      for (Vertex v : edges[i]) used[v] = 1;
      go(i + 1, size + 1);
      for (Vertex v : edges[i]) used[v] = 0;
    }
  };
  go(0, 0);
  return best;
}

inline bool has_perfect_matching(const EdgeList& edges, std::size_t n, std::size_t k) {
  if (n % k) return false;
  return max_matching_size(edges, n) * k == n;
}

}  // namespace oracle
