#pragma once
// Absorbers: verification, K-sparsity, rooted search, contractible
// composition with its contraction, and the pattern-based sparse
// r-absorber construction.

#include "dlab/core.hpp"
#include "dlab/hypercore.hpp"
#include "dlab/matchpower.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace dlab {

/// An r-absorber rooted on rk vertices: two matchings, the covering one
/// spanning every vertex, the noncovering one spanning all but the roots.
/// A plain absorber is the r = 1 case.
struct Absorber {
  std::vector<Vertex> roots;
  EdgeList covering;
  EdgeList noncovering;
  std::optional<std::size_t> sparsity;  // K it was certified K-sparse for, if any

  /// Sorted union of the covering edges.
  std::vector<Vertex> vertices() const;
  std::size_t order() const { return vertices().size() - roots.size(); }
  EdgeList edges() const;
};

using RAbsorber = Absorber;

struct Verdict {
  bool ok = true;
  std::string reason;
  explicit operator bool() const { return ok; }
  static Verdict fail(std::string why) { return {false, std::move(why)}; }
};

/// Structural check of the absorber definition for k roots; when `host` is
/// given every edge must also be a host edge.
Verdict verify_absorber(const Absorber& a, std::size_t k, const Hypergraph* host = nullptr);
inline Verdict verify_absorber(const Absorber& a, const Hypergraph& host) { return verify_absorber(a, host.k(), &host); }
/// As verify_absorber with rk roots (r >= 1).
Verdict verify_r_absorber(const Absorber& a, std::size_t k, const Hypergraph* host = nullptr);
inline Verdict verify_r_absorber(const Absorber& a, const Hypergraph& host) {
  return verify_r_absorber(a, host.k(), &host);
}

/// Girth of the absorber's edges plus the root set as one extra edge is at
/// least K (an acyclic family qualifies). Throws SizeError on repeated roots.
bool is_k_sparse(const Absorber& a, std::size_t big_k);

// ---------------------------------------------------------------------------
// Contractible absorbers

struct ContractibleAbsorber {
  std::vector<Vertex> roots;          // x_1..x_k
  EdgeList rooted_edges;              // e_i contains x_i
  std::vector<Absorber> subabsorbers; // H_j rooted on (y_1^j..y_k^j)
  Absorber assembled;

  /// y_i^j: the j-th smallest vertex of e_i minus x_i (j from 0).
  Vertex y(std::size_t i, std::size_t j) const;
};

/// Covering = rooted edges plus the subabsorbers' noncovering matchings;
/// noncovering = the subabsorbers' covering matchings. Throws ShapeError.
ContractibleAbsorber assemble_contractible(std::vector<Vertex> roots, EdgeList rooted_edges,
                                           std::vector<Absorber> subabsorbers);

struct ContractedAbsorber {
  Hypergraph graph;
  std::vector<Vertex> roots;            // new ids of the contracted rooted edges, w_1..w_k
  std::vector<Vertex> to_original;      // new id -> original id (roots map to x_i)
  std::vector<Absorber> parts;          // each subabsorber rewired onto `graph`
  std::size_t merged_edges = 0;         // contracted edges produced twice (only when parts share an edge)
};

/// Collapses each rooted edge e_i to a new vertex w_i (numbered after the
/// non-root vertices, which keep ascending original order).
ContractedAbsorber contract_absorber(const ContractibleAbsorber& a);

// ---------------------------------------------------------------------------
// Patterns and sparse r-absorbers

/// q-regular bipartite graph: left i is adjacent to right adj[i][*].
struct BipartitePattern {
  std::size_t side = 0;
  std::size_t degree = 0;
  std::vector<std::vector<std::uint32_t>> adj;
  std::size_t edge_count() const { return side * degree; }
};

/// Girth of a bipartite pattern (even), nullopt when acyclic.
std::optional<std::size_t> pattern_girth(const BipartitePattern& f);

/// Removes perfect matchings until the degree is divisible by k.
BipartitePattern peel_to_multiple(BipartitePattern f, std::size_t k);

/// A q-regular bipartite graph of girth >= K. Uses K_{q,q} when K <= 4 and
/// side == 0 or q, the Heawood/Tutte-Coxeter cages for q = 3, and otherwise
/// a randomized matching-by-matching construction with exact girth checks
/// (side 0 picks the smallest side that works). Returns nullopt on failure.
std::optional<BipartitePattern> make_pattern(std::size_t q, std::size_t big_k, std::size_t side, std::mt19937_64& rng,
                                             std::size_t attempts = 200);

struct SparseAbsorberConfig {
  std::size_t big_k = 4;
  std::size_t q = 0;          // pattern degree; 0 picks the smallest multiple of k that is >= rk
  std::size_t side = 0;       // pattern side; 0 lets make_pattern choose
  std::size_t trials = 20;
  std::uint64_t seed = 0;
  std::uint64_t pm_budget = 1'000'000;
  const VertexSet* forbidden = nullptr;  // host vertices the injection must avoid
};

/// Pattern-based K-sparse r-absorber rooted on `roots` (|roots| = rk).
/// Throws PreconditionError when q is not divisible by k or q < rk.
SearchResult<Absorber> find_sparse_r_absorber(const Hypergraph& g, const std::vector<Vertex>& roots,
                                              const SparseAbsorberConfig& cfg);

/// Contractible absorber whose k-1 subabsorbers are pattern-built K-sparse
/// absorbers (cfg.big_k, cfg.q, cfg.trials); rooted edges are the first
/// disjoint ones found. Vertices in `forbidden` are avoided.
SearchResult<ContractibleAbsorber> find_sparse_contractible(const Hypergraph& g, const std::vector<Vertex>& roots,
                                                            const VertexSet& forbidden, const SparseAbsorberConfig& cfg);

// ---------------------------------------------------------------------------
// Rooted absorber search

struct RootedSearchConfig {
  std::size_t max_order = 12;                 // Q
  std::optional<std::size_t> require_sparse;  // K
  std::uint64_t budget = 2'000'000;
  std::size_t min_order = 0;                  // skip shapes smaller than this
  std::uint64_t seed = 0;                     // for the pattern-based shape
  std::size_t sparse_trials = 20;
};

/// Tries, in order: the trivial absorber, the Fig.-1 shape (order k),
/// contractible compositions up to order Q, and (with require_sparse) the
/// pattern-based sparse shape. Every result is verified before return.
SearchResult<Absorber> find_rooted_absorber(const Hypergraph& g, const std::vector<Vertex>& roots,
                                            const VertexSet& forbidden, const RootedSearchConfig& cfg);

// ---------------------------------------------------------------------------
// JSON-lines records

std::string absorber_to_json(const Absorber& a);
Absorber absorber_from_json(const std::string& line);

}  // namespace dlab
