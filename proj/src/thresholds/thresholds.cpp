#include "dlab/thresholds.hpp"
#include "dlab/kernels.hpp"
#include "dlab/matchpower.hpp"
#include "dlab/parallel.hpp"

#include <algorithm>
#include <bit>
#include <functional>

namespace dlab {

Rational conjectured_density(std::size_t d, std::size_t k) {
  if (d < 1 || d >= k) throw SizeError("conjectured_density needs 1 <= d < k");
  Rational power(1);
  for (std::size_t i = 0; i < k - d; ++i) power *= Rational(static_cast<std::int64_t>(k - 1), static_cast<std::int64_t>(k));
  return std::max(Rational(1, 2), Rational(1) - power);
}

namespace {

void check_domain(std::size_t n, std::size_t k, std::size_t d) {
  if (k < 2) throw SizeError("k must be at least 2");
  if (d < 1 || d >= k) throw SizeError("d must satisfy 1 <= d < k");
  if (n == 0 || n % k != 0) throw SizeError("k must divide n");
}

struct SweepBest {
  std::int64_t degree = -1;  // -1: no PM-free graph in range
  std::uint32_t mask = 0;
};

// Merge by max degree, ties to the lower mask.
SweepBest merge(const SweepBest& a, const SweepBest& b) {
  if (a.degree != b.degree) return a.degree > b.degree ? a : b;
  return a.mask <= b.mask ? a : b;
}

struct SweepTables {
  EdgeList edges;
  std::vector<std::uint32_t> incidence;  // per d-set, edges containing it
  std::vector<std::uint32_t> perfect;    // per perfect matching of K_n^(k), its edges
};

SweepTables tables(std::size_t n, std::size_t k, std::size_t d) {
  SweepTables t;
  t.edges = combinations(n, k);
  for (const auto& s : combinations(n, d)) {
    std::uint32_t m = 0;
    for (std::size_t i = 0; i < t.edges.size(); ++i)
      if (std::includes(t.edges[i].begin(), t.edges[i].end(), s.begin(), s.end())) m |= std::uint32_t{1} << i;
    t.incidence.push_back(m);
  }
  // Perfect matchings of the complete graph: the edge holding the lowest uncovered vertex each step.
  std::vector<char> used(n, 0);
  std::function<void(std::uint32_t, std::size_t)> go = [&](std::uint32_t acc, std::size_t covered) {
    if (covered == n) {
      t.perfect.push_back(acc);
      return;
    }
    std::size_t low = 0;
    while (used[low]) ++low;
    for (std::size_t i = 0; i < t.edges.size(); ++i) {
      const auto& e = t.edges[i];
      if (e[0] != low) continue;
      if (std::any_of(e.begin(), e.end(), [&](Vertex v) { return used[v]; })) continue;
      for (Vertex v : e) used[v] = 1;
      go(acc | (std::uint32_t{1} << i), covered + k);
      for (Vertex v : e) used[v] = 0;
    }
  };
  go(0, 0);
  return t;
}

SweepBest sweep_unpruned(const SweepTables& t, std::uint64_t lo, std::uint64_t hi) {
  SweepBest best;
  for (std::uint64_t g = lo; g < hi; ++g) {
    auto mask = static_cast<std::uint32_t>(g);
    if (kernels::any_contained(t.perfect, mask)) continue;
    auto deg = static_cast<std::int64_t>(kernels::min_popcount_and(t.incidence, mask));
    if (deg > best.degree) best = {deg, mask};
  }
  return best;
}

Hypergraph materialize(const EdgeList& all, std::size_t n, std::size_t k, std::uint32_t mask) {
  EdgeList edges;
  for (std::size_t i = 0; i < all.size(); ++i)
    if ((mask >> i) & 1u) edges.push_back(all[i]);
  return Hypergraph::from_edges(n, k, std::move(edges));
}

SweepBest sweep_pruned(const EdgeList& all, std::size_t n, std::size_t k, std::size_t d, std::uint64_t lo,
                       std::uint64_t hi) {
  SweepBest best;
  // Average d-degree is e * C(k,d) / C(n,d); the minimum cannot exceed it.
  const auto per_edge = binomial(static_cast<std::int64_t>(k), static_cast<std::int64_t>(d));
  const auto dsets = binomial(static_cast<std::int64_t>(n), static_cast<std::int64_t>(d));
  for (std::uint64_t g = lo; g < hi; ++g) {
    auto mask = static_cast<std::uint32_t>(g);
    auto e = static_cast<std::uint64_t>(std::popcount(mask));
    auto bound = static_cast<std::int64_t>(e * per_edge / dsets);
    if (bound <= best.degree) continue;
    auto h = materialize(all, n, k, mask);
    auto deg = static_cast<std::int64_t>(min_d_degree(h, d).value);
    if (deg <= best.degree) continue;
    if (find_perfect_matching(h).status == MatchStatus::perfect) continue;
    best = {deg, mask};
  }
  return best;
}

}  // namespace

ThresholdRecord exact_dirac_threshold(std::size_t n, std::size_t k, std::size_t d, SweepMode mode, unsigned threads) {
  check_domain(n, k, d);
  const auto m = binomial(static_cast<std::int64_t>(n), static_cast<std::int64_t>(k));
  if (m > kThresholdEdgeLimit)
    throw CapacityError("exhaustive sweep needs C(n,k) <= " + std::to_string(kThresholdEdgeLimit) + ", got " +
                        std::to_string(m));
  const std::uint64_t total = std::uint64_t{1} << m;
  const std::size_t chunks = 64;
  std::vector<SweepBest> partial(chunks);
  SweepTables t = tables(n, k, d);
  parallel_for(chunks, threads, [&](std::size_t c) {
    std::uint64_t lo = total * c / chunks, hi = total * (c + 1) / chunks;
    partial[c] = mode == SweepMode::unpruned ? sweep_unpruned(t, lo, hi) : sweep_pruned(t.edges, n, k, d, lo, hi);
  });
  SweepBest best;
  for (const auto& p : partial) best = merge(best, p);

  ThresholdRecord r;
  r.n = n;
  r.k = k;
  r.d = d;
  r.mode = mode;
  r.graphs_enumerated = total;
  // The empty graph is PM-free, so best.degree >= 0 always.
  r.m_value = static_cast<std::size_t>(best.degree) + 1;
  r.extremal_witness = materialize(t.edges, n, k, best.mask);
  return r;
}

// ---------------------------------------------------------------------------
// Barriers

Hypergraph space_barrier(std::size_t n, std::size_t k, std::size_t d) {
  check_domain(n, k, d);
  if (n < 2 * k) throw SizeError("space barrier needs n >= 2k");
  const std::size_t s = n / k - 1;
  EdgeList edges;
  for (auto& e : combinations(n, k))
    if (e[0] < s) edges.push_back(std::move(e));
  auto h = Hypergraph::from_edges(n, k, std::move(edges));
  // Every edge meets S and |S| < n/k, so no matching covers everything.
  auto expected = binomial(static_cast<std::int64_t>(n - d), static_cast<std::int64_t>(k - d)) -
                  binomial(static_cast<std::int64_t>(n - d - s), static_cast<std::int64_t>(k - d));
  if (min_d_degree(h, d).value != expected) throw Error("space barrier degree check failed");
  return h;
}

namespace {

Hypergraph parity_graph(std::size_t n, std::size_t k, std::size_t a) {
  EdgeList edges;
  for (auto& e : combinations(n, k)) {
    auto inside = std::count_if(e.begin(), e.end(), [&](Vertex v) { return v < a; });
    if (inside % 2 == 0) edges.push_back(std::move(e));
  }
  return Hypergraph::from_edges(n, k, std::move(edges));
}

std::vector<std::size_t> parity_candidates(std::size_t n) {
  // odd sizes nearest n/2
  std::vector<std::size_t> c;
  if (n % 2 == 1) {
    std::size_t lo = n / 2, hi = n / 2 + 1;
    c.push_back(lo % 2 ? lo : hi);
  } else if ((n / 2) % 2 == 1) {
    c.push_back(n / 2);
  } else {
    c.push_back(n / 2 - 1);
    if (n / 2 + 1 <= n) c.push_back(n / 2 + 1);
  }
  return c;
}

}  // namespace

std::size_t parity_set_size(std::size_t n, std::size_t k, std::size_t d) {
  check_domain(n, k, d);
  if (n < 2) throw SizeError("parity barrier needs n >= 2");
  std::size_t best = 0, best_deg = 0;
  bool first = true;
  for (auto a : parity_candidates(n)) {
    auto deg = min_d_degree(parity_graph(n, k, a), d).value;
    if (first || deg > best_deg) {
      best = a;
      best_deg = deg;
      first = false;
    }
  }
  return best;
}

Hypergraph parity_barrier(std::size_t n, std::size_t k, std::size_t d) {
  auto a = parity_set_size(n, k, d);
  auto h = parity_graph(n, k, a);
  // Each edge meets A evenly; a perfect matching would cover the odd set A with an even count.
  for (std::size_t i = 0; i < h.edge_count(); ++i) {
    auto e = h.edge(i);
    if (std::count_if(e.begin(), e.end(), [&](Vertex v) { return v < a; }) % 2 != 0)
      throw Error("parity barrier check failed");
  }
  return h;
}

SandwichReport verify_threshold_sandwich(std::size_t n, std::size_t k, std::size_t d, unsigned threads) {
  check_domain(n, k, d);
  SandwichReport r;
  r.n = n;
  r.k = k;
  r.d = d;
  if (n >= 2 * k) r.space_degree = min_d_degree(space_barrier(n, k, d), d).value;
  if (n >= 2) r.parity_degree = min_d_degree(parity_barrier(n, k, d), d).value;
  std::size_t best = 0;
  if (r.space_degree) best = std::max(best, *r.space_degree);
  if (r.parity_degree) best = std::max(best, *r.parity_degree);
  r.lower = best + 1;
  try {
    r.exact = exact_dirac_threshold(n, k, d, SweepMode::unpruned, threads).m_value;
  } catch (const CapacityError&) {
    r.note = "upper bound unavailable: exhaustive sweep infeasible";
  }
  auto full = static_cast<std::int64_t>(binomial(static_cast<std::int64_t>(n - d), static_cast<std::int64_t>(k - d)));
  if (r.exact) {
    r.tight = *r.exact == r.lower;
    if (*r.exact < r.lower) r.note = "inconsistent: exact value below barrier bound";
    r.ratio = Rational(static_cast<std::int64_t>(*r.exact), full);
  } else {
    r.ratio = Rational(static_cast<std::int64_t>(r.lower), full);
  }
  return r;
}

}  // namespace dlab
