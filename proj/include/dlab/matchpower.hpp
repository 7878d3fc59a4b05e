#pragma once
// Matching engines: the perfect-matching oracle, maximum matchings, the
// Aharoni-Haxell criterion with disjoint-representative search, matching a
// small set into a flexible set, and the block-partition procedure.

#include "dlab/core.hpp"
#include "dlab/hypercore.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace dlab {

inline constexpr std::uint64_t kDefaultBudget = 50'000'000;

/// Pairwise disjoint edges plus the cached union of their vertices.
class Matching {
 public:
  Matching() = default;
  explicit Matching(std::size_t n) : covered_(n) {}
  /// Throws PreconditionError if two edges overlap.
  Matching(std::size_t n, EdgeList edges);

  void add(std::vector<Vertex> edge);  // throws PreconditionError on overlap
  void pop();

  const EdgeList& edges() const { return edges_; }
  const VertexSet& covered() const { return covered_; }
  std::size_t size() const { return edges_.size(); }
  bool empty() const { return edges_.empty(); }

  /// Matching with edges sorted canonically (each edge ascending, list lexicographic).
  Matching canonical() const;

 private:
  EdgeList edges_;
  VertexSet covered_;
};

/// Independent check: edges pairwise disjoint, each a host edge, and (when
/// `perfect`) every host vertex covered. Returns an empty string when valid,
/// otherwise the reason.
std::string check_matching(const Hypergraph& host, const EdgeList& edges, bool perfect = false);

enum class MatchStatus { perfect, partial, none };
const char* to_string(MatchStatus s);

struct MatchResult {
  MatchStatus status = MatchStatus::none;
  Matching matching;     // the perfect matching, or the deepest partial one seen
  VertexSet uncovered;
  std::uint64_t nodes_explored = 0;
};

/// Branches on the uncovered vertex with the fewest available incident edges
/// (ties to the lowest id); prunes as soon as some uncovered vertex has no
/// available edge. Budget counts search nodes.
MatchResult find_perfect_matching(const Hypergraph& h, std::uint64_t budget = kDefaultBudget);

enum class MatchingMode { greedy, exact };

struct MaxMatchingResult {
  Matching matching;
  bool optimal = false;  // false for greedy mode or when the exact budget ran out
  std::uint64_t nodes = 0;
};

/// Greedy: first-fit over edges in id order (a maximal matching). Exact:
/// branch and bound with the bound |M| + floor(alive / k). A positive
/// `target` stops the exact search once a matching of that size is found.
MaxMatchingResult max_matching(const Hypergraph& h, MatchingMode mode, std::uint64_t budget = kDefaultBudget,
                               std::size_t target = 0);

enum class AhMode { exact, sampled };

struct AhReport {
  bool holds = true;
  bool exhaustive = true;            // false in sampled mode: evidence, not proof
  std::vector<std::size_t> violating;  // indices of the first violating I
  std::size_t subsets_checked = 0;
};

inline constexpr std::size_t kAhExactLimit = 12;

/// Checks that every nonempty I has a matching of size > k'(|I|-1) in the
/// union of its links. Exact mode visits I by increasing bitmask and throws
/// CapacityError when t > 12; sampled mode checks `samples` random subsets.
AhReport aharoni_haxell_holds(std::span<const Hypergraph> links, std::size_t kprime, AhMode mode,
                              std::size_t samples = 0, std::uint64_t seed = 0);

/// Pairwise disjoint g(i) in E(L_i), by fail-first backtracking.
SearchResult<EdgeList> find_disjoint_representatives(std::span<const Hypergraph> links,
                                                     std::uint64_t budget = kDefaultBudget);

/// |W| disjoint edges, the i-th holding w_i and k-1 vertices of Z.
/// Throws PreconditionError when W meets Z.
SearchResult<Matching> match_into_flexible(const Hypergraph& g, std::span<const Vertex> w, const VertexSet& z,
                                           std::uint64_t budget = kDefaultBudget);

struct BlockReport {
  Matching matching;
  std::vector<std::vector<Vertex>> blocks;  // each sorted, in partition order
  std::vector<std::size_t> failed_blocks;
  VertexSet uncovered;
  std::uint64_t nodes = 0;
};

/// Random partition into floor(n/Q) blocks of Q vertices (remainder left
/// uncovered) and a perfect-matching search inside each block.
BlockReport blockwise_almost_perfect(const Hypergraph& h, std::size_t q, std::uint64_t seed,
                                     std::uint64_t budget_per_block = kDefaultBudget, unsigned threads = 1);

/// Matching text format: one edge per line, ascending ids; `#` comments.
EdgeList read_matching(std::istream& in);
void write_matching(std::ostream& out, const EdgeList& edges);

}  // namespace dlab
