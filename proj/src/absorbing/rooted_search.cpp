#include "dlab/absorbing.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace dlab {

namespace {

struct BudgetOut {};

class RootedSearch {
 public:
  RootedSearch(const Hypergraph& g, const RootedSearchConfig& cfg) : g_(g), cfg_(cfg), k_(g.k()) {}

  std::uint64_t nodes() const { return nodes_; }

  void tick() {
    if (++nodes_ > cfg_.budget) throw BudgetOut{};
  }

  bool sparse_ok(const Absorber& a) const {
    return !cfg_.require_sparse || is_k_sparse(a, *cfg_.require_sparse);
  }

  // Edges through roots[0] containing exactly the roots in `part` and otherwise free vertices.
  template <class F>
  void edges_through(const std::vector<Vertex>& part, const VertexSet& blocked, const std::set<Vertex>& roots, F&& each) {
    for (std::uint32_t id : g_.incident_edges(part.front())) {
      auto e = g_.edge(id);
      bool fits = std::all_of(part.begin(), part.end(), [&](Vertex v) { return std::binary_search(e.begin(), e.end(), v); });
      if (!fits) continue;
      std::vector<Vertex> rest;
      bool clean = true;
      for (Vertex v : e) {
        if (std::find(part.begin(), part.end(), v) != part.end()) continue;
        if (blocked.contains(v) || roots.count(v)) {
          clean = false;
          break;
        }
        rest.push_back(v);
      }
      if (!clean) continue;
      tick();
      if (each(std::vector<Vertex>(e.begin(), e.end()), rest)) return;
    }
  }

  std::optional<Absorber> trivial(const std::vector<Vertex>& roots) {
    tick();
    if (!g_.has_edge(roots)) return std::nullopt;
    Absorber a;
    a.roots = roots;
    std::vector<Vertex> e(roots);
    std::sort(e.begin(), e.end());
    a.covering = {e};
    if (!sparse_ok(a)) return std::nullopt;
    return a;
  }

  // Covering {P1 + Y1, P2 + Y2}, noncovering {Y1 + Y2}.
  std::optional<Absorber> fig1(const std::vector<Vertex>& roots, const VertexSet& blocked) {
    std::set<Vertex> root_set(roots.begin(), roots.end());
    std::optional<Absorber> found;
    for (std::uint32_t mask = 0; mask < (1u << (k_ - 1)) && !found; ++mask) {
      std::vector<Vertex> p1{roots[0]}, p2;
      for (std::size_t i = 1; i < k_; ++i) ((mask >> (i - 1)) & 1u ? p1 : p2).push_back(roots[i]);
      if (p2.empty()) continue;
      edges_through(p1, blocked, root_set, [&](std::vector<Vertex> e1, std::vector<Vertex> y1) {
        VertexSet inner = blocked;
        for (Vertex v : y1) inner.insert(v);
        edges_through(p2, inner, root_set, [&](std::vector<Vertex> e2, std::vector<Vertex> y2) {
          std::vector<Vertex> y(y1);
          y.insert(y.end(), y2.begin(), y2.end());
          std::sort(y.begin(), y.end());
          if (!g_.has_edge(y)) return false;
          Absorber a;
          a.roots = roots;
          a.covering = {e1, e2};
          a.noncovering = {y};
          if (!sparse_ok(a)) return false;
          found = std::move(a);
          return true;
        });
        return found.has_value();
      });
    }
    return found;
  }

  // Any shape of order <= budget_order rooted on `roots`, smallest shapes first.
  std::optional<Absorber> any(const std::vector<Vertex>& roots, const VertexSet& blocked, std::size_t budget_order,
                              std::size_t min_order, int depth, bool check_sparse) {
    auto saved = cfg_.require_sparse;
    if (!check_sparse) cfg_.require_sparse.reset();
    // With K >= 3 the small shapes always carry a 2-cycle (or a 4-cycle for k = 2)
    // through the root edge, so only the pattern shape can qualify.
    const auto big_k = cfg_.require_sparse.value_or(0);
    const bool small_ok = big_k <= 2 || (k_ == 2 && big_k <= 4);
    std::optional<Absorber> out;
    if (min_order == 0 && big_k <= 2) out = trivial(roots);
    if (!out && small_ok && budget_order >= k_ && min_order <= k_) out = fig1(roots, blocked);
    if (!out && !cfg_.require_sparse && depth > 0 && budget_order >= k_ * (k_ - 1))
      out = compose(roots, blocked, budget_order, depth);
    cfg_.require_sparse = saved;
    return out;
  }

  // Rooted edges e_i plus k-1 subabsorbers on the transversals (y_1^j..y_k^j).
  std::optional<Absorber> compose(const std::vector<Vertex>& roots, const VertexSet& blocked, std::size_t budget_order,
                                  int depth) {
    std::set<Vertex> root_set(roots.begin(), roots.end());
    EdgeList chosen;
    std::optional<Absorber> found;
    std::function<bool(std::size_t, VertexSet&)> pick = [&](std::size_t i, VertexSet& used) -> bool {
      if (i == k_) return finish(roots, chosen, used, budget_order, depth, found);
      bool stop = false;
      edges_through({roots[i]}, used, root_set, [&](std::vector<Vertex> e, std::vector<Vertex> rest) {
        for (Vertex v : rest) used.insert(v);
        chosen.push_back(std::move(e));
        stop = pick(i + 1, used);
        chosen.pop_back();
        for (Vertex v : rest) used.erase(v);
        return stop;
      });
      return stop;
    };
    VertexSet used = blocked;
    pick(0, used);
    return found;
  }

  bool finish(const std::vector<Vertex>& roots, const EdgeList& rooted, const VertexSet& used, std::size_t budget_order,
              int depth, std::optional<Absorber>& found) {
    std::vector<Absorber> subs;
    VertexSet taken = used;
    for (Vertex r : roots) taken.insert(r);
    std::size_t spent = k_ * (k_ - 1);
    auto ys = [&](std::size_t j) {
      std::vector<Vertex> t;
      for (std::size_t i = 0; i < k_; ++i) {
        std::vector<Vertex> rest;
        for (Vertex v : rooted[i])
          if (v != roots[i]) rest.push_back(v);
        std::sort(rest.begin(), rest.end());
        t.push_back(rest[j]);
      }
      return t;
    };
    for (std::size_t j = 0; j + 1 < k_; ++j) {
      auto t = ys(j);
      VertexSet blocked = taken;
      for (Vertex v : t) blocked.erase(v);
      auto sub = any(t, blocked, budget_order - spent, 0, depth - 1, false);
      if (!sub) return false;
      spent += sub->order();
      if (spent > budget_order) return false;
      for (Vertex v : sub->vertices()) taken.insert(v);
      subs.push_back(std::move(*sub));
    }
    try {
      auto c = assemble_contractible(roots, rooted, std::move(subs));
      if (!sparse_ok(c.assembled)) return false;
      found = std::move(c.assembled);
      return true;
    } catch (const ShapeError&) {
      return false;
    }
  }

 private:
  const Hypergraph& g_;
  RootedSearchConfig cfg_;
  std::size_t k_;
  std::uint64_t nodes_ = 0;
};

// First k disjoint edges through the roots avoiding `used` (which grows).
std::optional<EdgeList> pick_rooted_edges(const Hypergraph& g, const std::vector<Vertex>& roots, VertexSet& used) {
  std::set<Vertex> root_set(roots.begin(), roots.end());
  EdgeList rooted;
  for (Vertex x : roots) {
    bool got = false;
    for (std::uint32_t id : g.incident_edges(x)) {
      auto e = g.edge(id);
      if (std::any_of(e.begin(), e.end(), [&](Vertex v) { return v != x && (used.contains(v) || root_set.count(v)); }))
        continue;
      for (Vertex v : e)
        if (v != x) used.insert(v);
      rooted.emplace_back(e.begin(), e.end());
      got = true;
      break;
    }
    if (!got) return std::nullopt;
  }
  return rooted;
}

// y_i^j for all j < k-1, i < k, row by row.
std::vector<Vertex> transversal(const std::vector<Vertex>& roots, const EdgeList& rooted, std::size_t j) {
  std::vector<Vertex> t;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    std::vector<Vertex> rest;
    for (Vertex v : rooted[i])
      if (v != roots[i]) rest.push_back(v);
    std::sort(rest.begin(), rest.end());
    t.push_back(rest[j]);
  }
  return t;
}

}  // namespace

SearchResult<ContractibleAbsorber> find_sparse_contractible(const Hypergraph& g, const std::vector<Vertex>& roots,
                                                            const VertexSet& forbidden, const SparseAbsorberConfig& cfg) {
  const std::size_t k = g.k();
  if (roots.size() != k) throw PreconditionError("a contractible absorber needs exactly k roots");
  SearchResult<ContractibleAbsorber> r;
  VertexSet used(g.n());
  used |= forbidden;
  for (Vertex x : roots) used.insert(x);
  auto rooted = pick_rooted_edges(g, roots, used);
  if (!rooted) {
    r.diagnostic = "no disjoint rooted edges";
    return r;
  }
  std::vector<Absorber> subs;
  for (std::size_t j = 0; j + 1 < k; ++j) {
    auto t = transversal(roots, *rooted, j);
    VertexSet avoid = used;
    for (Vertex v : t) avoid.erase(v);
    SparseAbsorberConfig sc = cfg;
    sc.seed = derive_seed(cfg.seed, j, 3);
    sc.forbidden = &avoid;
    auto h = find_sparse_r_absorber(g, t, sc);
    r.nodes += h.nodes;
    if (!h) {
      r.status = h.status;
      r.diagnostic = "subabsorber " + std::to_string(j) + ": " + h.diagnostic;
      return r;
    }
    for (Vertex v : h->vertices()) used.insert(v);
    subs.push_back(*h.value);
  }
  r.value = assemble_contractible(roots, std::move(*rooted), std::move(subs));
  r.status = SearchStatus::found;
  return r;
}

SearchResult<Absorber> find_rooted_absorber(const Hypergraph& g, const std::vector<Vertex>& roots,
                                            const VertexSet& forbidden, const RootedSearchConfig& cfg) {
  const std::size_t k = g.k();
  if (roots.size() != k) throw PreconditionError("an absorber needs exactly k roots");
  if (std::set<Vertex>(roots.begin(), roots.end()).size() != k) throw PreconditionError("roots are not distinct");
  for (Vertex r : roots) {
    if (r >= g.n()) throw PreconditionError("root outside the host");
    if (forbidden.contains(r)) throw PreconditionError("roots must avoid the forbidden set");
  }
  VertexSet blocked(g.n());
  blocked |= forbidden;

  SearchResult<Absorber> r;
  RootedSearch search(g, cfg);
  std::optional<Absorber> found;
  try {
    found = search.any(roots, blocked, cfg.max_order, cfg.min_order, 2, true);
    if (!found && cfg.require_sparse) {
      // Rooted edges plus a pattern-built sparse (k-1)-absorber on their other vertices.
      VertexSet used = blocked;
      for (Vertex x : roots) used.insert(x);
      auto rooted = pick_rooted_edges(g, roots, used);
      if (rooted) {
        std::vector<Vertex> ys;
        for (std::size_t j = 0; j + 1 < k; ++j) {
          auto t = transversal(roots, *rooted, j);
          ys.insert(ys.end(), t.begin(), t.end());
        }
        VertexSet avoid = blocked;
        for (Vertex x : roots) avoid.insert(x);
        SparseAbsorberConfig sc;
        sc.big_k = *cfg.require_sparse;
        sc.trials = cfg.sparse_trials;
        sc.seed = cfg.seed;
        sc.forbidden = &avoid;
        auto h = find_sparse_r_absorber(g, ys, sc);
        r.nodes += h.nodes;
        if (h) {
          Absorber a;
          a.roots = roots;
          a.covering = *rooted;
          a.covering.insert(a.covering.end(), h->noncovering.begin(), h->noncovering.end());
          a.noncovering = h->covering;
          if (a.order() <= cfg.max_order && is_k_sparse(a, *cfg.require_sparse)) found = std::move(a);
        } else {
          r.diagnostic = h.diagnostic;
        }
      }
    }
  } catch (const BudgetOut&) {
    r.nodes += search.nodes();
    r.status = SearchStatus::budget;
    r.diagnostic = "node budget exhausted";
    return r;
  }
  r.nodes += search.nodes();
  if (!found) {
    r.status = SearchStatus::exhausted;
    if (r.diagnostic.empty()) r.diagnostic = "no absorber of order <= " + std::to_string(cfg.max_order);
    return r;
  }
  if (auto v = verify_absorber(*found, g); !v) throw Error("rooted search produced an invalid absorber: " + v.reason);
  if (cfg.require_sparse) found->sparsity = *cfg.require_sparse;
  r.status = SearchStatus::found;
  r.value = std::move(found);
  return r;
}

}  // namespace dlab
