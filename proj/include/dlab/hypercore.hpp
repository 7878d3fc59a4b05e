#pragma once
// k-uniform hypergraphs and their structural functionals: degrees, links,
// induced subgraphs, Berge girth, k-density and the contraction G(F, P).

#include "dlab/core.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dlab {

using EdgeList = std::vector<std::vector<Vertex>>;

/// A k-uniform hypergraph on vertices 0..n-1.
///
/// Edges are sorted k-sets held in lexicographic order, so edge ids are
/// canonical for a given edge set. Each edge also carries a fixed-width bit
/// mask (`words()` 64-bit words) that the bitmask kernels operate on, and
/// every vertex has a contiguous copy of its incident edge masks.
/// Instances are immutable once built.
class Hypergraph {
 public:
  Hypergraph() = default;
  /// Empty k-graph on n vertices.
  Hypergraph(std::size_t n, std::size_t k);

  /// Normalizes (sorts each edge, sorts the edge list) and validates:
  /// throws FormatError on a wrong-size edge, a repeated or out-of-range
  /// vertex, or a duplicate edge.
  static Hypergraph from_edges(std::size_t n, std::size_t k, EdgeList edges);
  /// As from_edges but silently merges duplicate edges.
  static Hypergraph from_edges_merged(std::size_t n, std::size_t k, EdgeList edges);
  static Hypergraph complete(std::size_t n, std::size_t k);

  std::size_t n() const { return n_; }
  std::size_t k() const { return k_; }
  std::size_t edge_count() const { return k_ ? flat_.size() / k_ : 0; }
  bool empty() const { return flat_.empty(); }

  std::span<const Vertex> edge(std::size_t i) const {
    return {flat_.data() + i * k_, k_};
  }
  EdgeList edge_list() const;

  /// Edge id of the sorted k-set `sorted`, if present.
  std::optional<std::size_t> find_edge(std::span<const Vertex> sorted) const;
  /// Membership test for a k-set given in any order.
  bool has_edge(std::span<const Vertex> vertices) const;

  std::size_t words() const { return words_; }
  std::span<const std::uint64_t> masks() const { return masks_; }
  std::span<const std::uint64_t> edge_mask(std::size_t i) const {
    return {masks_.data() + i * words_, words_};
  }

  std::size_t vertex_degree(Vertex v) const { return inc_offsets_[v + 1] - inc_offsets_[v]; }
  /// Ids of the edges containing v, ascending.
  std::span<const std::uint32_t> incident_edges(Vertex v) const {
    return {inc_edges_.data() + inc_offsets_[v], vertex_degree(v)};
  }
  /// Masks of the edges containing v, in the order of incident_edges(v).
  std::span<const std::uint64_t> incident_masks(Vertex v) const {
    return {inc_masks_.data() + inc_offsets_[v] * words_, vertex_degree(v) * words_};
  }

  /// Query mask of a vertex list, sized to words().
  std::vector<std::uint64_t> mask_of(std::span<const Vertex> vertices) const;
  std::vector<std::uint64_t> mask_of(const VertexSet& s) const;

  friend bool operator==(const Hypergraph& a, const Hypergraph& b) {
    return a.n_ == b.n_ && a.k_ == b.k_ && a.flat_ == b.flat_;
  }

 private:
  static Hypergraph build(std::size_t n, std::size_t k, EdgeList edges, bool merge);
  void index();

  std::size_t n_ = 0;
  std::size_t k_ = 0;
  std::size_t words_ = 0;
  std::vector<Vertex> flat_;
  std::vector<std::uint64_t> masks_;
  std::vector<std::size_t> inc_offsets_{0};
  std::vector<std::uint32_t> inc_edges_;
  std::vector<std::uint64_t> inc_masks_;
};

// ---------------------------------------------------------------------------
// Degrees
// ---------------------------------------------------------------------------

/// Number of edges containing S. Throws SizeError if |S| >= k or S leaves [0,n).
std::size_t degree(const Hypergraph& h, std::span<const Vertex> s);
std::size_t degree(const Hypergraph& h, const VertexSet& s);

struct MinDegree {
  std::size_t value = 0;
  std::vector<Vertex> witness;  // lexicographically first minimizing d-set
};

/// Minimum d-degree with an argmin witness. Throws SizeError unless 1 <= d <= k-1 and n >= d.
MinDegree min_d_degree(const Hypergraph& h, std::size_t d);

/// Degree of every d-set, indexed by subset_rank of the d-set.
std::vector<std::uint32_t> all_d_degrees(const Hypergraph& h, std::size_t d);

/// Colexicographic rank sum_i C(c_i, i+1) of a sorted subset c.
std::size_t subset_rank(std::span<const Vertex> sorted);

// ---------------------------------------------------------------------------
// Subgraphs
// ---------------------------------------------------------------------------

struct Induced {
  Hypergraph graph;
  std::vector<Vertex> to_original;  // new id -> original id (ascending)
};

/// Sub-hypergraph induced on S, relabeled 0..|S|-1 by ascending original id.
Induced induced(const Hypergraph& h, const VertexSet& s);
Induced induced(const Hypergraph& h, std::span<const Vertex> s);
/// Induced on the complement of `removed`.
Induced remove_vertices(const Hypergraph& h, const VertexSet& removed);

/// (k-|S|)-uniform link of S on the same vertex ids. Throws SizeError if |S| >= k.
Hypergraph link(const Hypergraph& h, std::span<const Vertex> s);

/// Edges of h restricted to the given edge ids (same vertex set).
Hypergraph edge_subgraph(const Hypergraph& h, std::span<const std::size_t> edge_ids);

// ---------------------------------------------------------------------------
// Girth, linearity, k-density
// ---------------------------------------------------------------------------

/// Length of the shortest Berge cycle of an arbitrary edge family (edges may
/// repeat and may have different sizes); nullopt when the family is acyclic.
/// A repeated edge, or two edges meeting in >= 2 vertices, is a 2-cycle.
std::optional<std::size_t> berge_girth(std::span<const std::vector<Vertex>> edges);
std::optional<std::size_t> girth(const Hypergraph& h);

bool is_linear(const Hypergraph& h);

enum class DensityMethod { automatic, enumeration, flow };

struct DensityResult {
  Rational value{0};
  std::vector<std::size_t> witness;  // edge ids of a maximizing subgraph (empty when value is 0 by convention)
  DensityMethod method = DensityMethod::enumeration;
};

inline constexpr std::size_t kDensityEnumerationLimit = 24;

/// m_k(H) = max (e(H')-1)/(v(H')-k) over edge subsets H' with v(H') > k,
/// and 0 when no subset qualifies.
///
/// `enumeration` walks all 2^e(H) subsets (CapacityError above
/// kDensityEnumerationLimit edges). `flow` is exact for any size: a
/// Dinkelbach iteration over max-closure min cuts, one per forced edge.
/// `automatic` picks enumeration up to the limit and flow above it.
DensityResult k_density(const Hypergraph& h, DensityMethod method = DensityMethod::automatic);

// ---------------------------------------------------------------------------
// Contraction G(F, P)
// ---------------------------------------------------------------------------

struct ContractionSpec {
  std::vector<std::vector<Vertex>> tuples;  // F: disjoint (k-1)-tuples
  std::vector<std::vector<Vertex>> parts;   // P: k-1 disjoint sets U_1..U_{k-1}
};

struct Contraction {
  Hypergraph graph;
  /// New id -> original id for part vertices; tuple vertices w_v are
  /// numbered after all part vertices and map to kNoOrigin.
  std::vector<Vertex> to_original;
  /// New id of w_v for each tuple, in tuple order.
  std::vector<Vertex> tuple_vertex;
  /// Contracted edge id -> the unique edge id of G it came from.
  std::vector<std::size_t> preimage;

  static constexpr Vertex kNoOrigin = static_cast<Vertex>(-1);
};

/// Throws SpecError when tuples/parts overlap, have the wrong arity, or
/// reference vertices outside G.
Contraction contract(const Hypergraph& g, const ContractionSpec& fp);

// ---------------------------------------------------------------------------
// .khg text format
// ---------------------------------------------------------------------------

Hypergraph read_khg(std::istream& in);
void write_khg(std::ostream& out, const Hypergraph& h);
Hypergraph load_khg(const std::string& path);
void save_khg(const std::string& path, const Hypergraph& h);

}  // namespace dlab
