#include "dlab/lab.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace dlab {

Hypergraph sample_hk(std::size_t n, std::size_t k, double p, std::uint64_t seed) {
  if (k < 1 || k > n) throw SizeError("sample_hk needs 1 <= k <= n");
  if (!(p >= 0 && p <= 1)) throw PreconditionError("edge probability outside [0, 1]");
  std::mt19937_64 rng(seed);
  EdgeList edges;
  std::vector<Vertex> c(k);
  for (std::size_t i = 0; i < k; ++i) c[i] = static_cast<Vertex>(i);
  do {
    // 53-bit uniform, portable across standard libraries
    double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    if (u < p) edges.push_back(c);
  } while (next_combination(c, n));
  return Hypergraph::from_edges(n, k, std::move(edges));
}

const char* to_string(DegradePolicy p) { return p == DegradePolicy::random ? "random" : "greedy"; }

DegradePolicy parse_policy(const std::string& s) {
  if (s == "random") return DegradePolicy::random;
  if (s == "greedy" || s == "greedy-adversary") return DegradePolicy::greedy;
  throw FormatError("unknown degradation policy " + s);
}

DegradeResult degrade_to_degree(const Hypergraph& g, std::size_t d, std::size_t target, DegradePolicy policy,
                                std::uint64_t seed, std::size_t edge_budget) {
  const auto start = min_d_degree(g, d);
  if (start.value < target)
    throw TargetInfeasible("min " + std::to_string(d) + "-degree " + std::to_string(start.value) + " < target " +
                           std::to_string(target));
  auto deg = all_d_degrees(g, d);
  const std::size_t m = g.edge_count();
  // d-subset ranks of every edge
  std::vector<std::vector<std::size_t>> subs(m);
  std::vector<Vertex> pick(d);
  for (std::size_t i = 0; i < m; ++i) {
    auto e = g.edge(i);
    for (const auto& idx : combinations(g.k(), d)) {
      for (std::size_t j = 0; j < d; ++j) pick[j] = e[idx[j]];
      subs[i].push_back(subset_rank(pick));
    }
  }
  auto deletable = [&](std::size_t i) {
    return std::all_of(subs[i].begin(), subs[i].end(), [&](std::size_t s) { return deg[s] > target; });
  };
  std::vector<char> gone(m, 0);
  std::size_t deleted = 0;
  auto remove = [&](std::size_t i) {
    gone[i] = 1;
    ++deleted;
    for (auto s : subs[i]) --deg[s];
  };
  std::mt19937_64 rng(seed);
  if (policy == DegradePolicy::random) {
    std::vector<std::size_t> order(m);
    for (std::size_t i = 0; i < m; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    for (auto i : order) {
      if (deleted >= edge_budget) break;
      if (deletable(i)) remove(i);
    }
  } else {
    std::vector<std::uint64_t> prio(m);
    for (auto& x : prio) x = rng();
    while (deleted < edge_budget) {
      std::size_t best = m, best_slack = 0;
      for (std::size_t i = 0; i < m; ++i) {
        if (gone[i] || !deletable(i)) continue;
        std::size_t slack = SIZE_MAX;
        for (auto s : subs[i]) slack = std::min<std::size_t>(slack, deg[s] - target);
        if (best == m || slack < best_slack || (slack == best_slack && prio[i] < prio[best])) {
          best = i;
          best_slack = slack;
        }
      }
      if (best == m) break;
      remove(best);
    }
  }
  EdgeList kept;
  for (std::size_t i = 0; i < m; ++i)
    if (!gone[i]) kept.emplace_back(g.edge(i).begin(), g.edge(i).end());
  DegradeResult out{Hypergraph::from_edges(g.n(), g.k(), std::move(kept)), deleted, 0};
  out.min_degree = min_d_degree(out.graph, d).value;
  if (out.min_degree < target) throw Error("degrade_to_degree broke its own certificate");
  return out;
}

Interval wilson_interval(std::size_t successes, std::size_t trials, double z) {
  if (trials == 0) return {0, 1};
  const double n = static_cast<double>(trials), ph = static_cast<double>(successes) / n, z2 = z * z;
  const double centre = (ph + z2 / (2 * n)) / (1 + z2 / n);
  const double half = z / (1 + z2 / n) * std::sqrt(ph * (1 - ph) / n + z2 / (4 * n * n));
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

}  // namespace dlab
