#pragma once
// Resilient templates: Montgomery bipartite graphs, their k-partite lift,
// the independent-set-free overlay on Z, and absorbing structures built on
// top of a template inside a host.

#include "dlab/absorbing.hpp"
#include "dlab/core.hpp"
#include "dlab/hypercore.hpp"
#include "dlab/matchpower.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace dlab {

/// A template edge found no absorber within the search limits.
class PlacementFailed : public Error {
 public:
  PlacementFailed(std::size_t edge, const std::string& why)
      : Error("no absorber for template edge " + std::to_string(edge) + ": " + why), edge(edge) {}
  std::size_t edge;
};

/// The template had no perfect matching after a guaranteed removal.
class TemplateMatchingFailed : public Error {
 public:
  using Error::Error;
};

enum class VerifyMode { exhaustive, sampled };
const char* to_string(VerifyMode m);

// ---------------------------------------------------------------------------
// Montgomery graphs

/// Bipartite graph between X (3s) and Y ∪ Z with degree cap Δ. Vertices are
/// local: X = 0..3s-1 and the right side is Y = 0..|Y|-1 followed by Z.
struct BipartiteTemplate {
  std::size_t s = 0;
  std::size_t x_size = 0;
  std::size_t y_size = 0;
  std::size_t z_size = 0;
  std::size_t max_degree = 0;
  std::vector<std::vector<std::uint32_t>> adj;  // per X vertex, right ids (Y then Z)

  std::size_t right_size() const { return y_size + z_size; }
  /// Number of Z vertices each removal deletes so that |X| = |right| - removal.
  std::size_t removal_size() const { return right_size() - x_size; }
  std::size_t edge_count() const;
};

struct MontgomeryVerdict {
  bool ok = true;
  VerifyMode mode = VerifyMode::exhaustive;
  std::uint64_t removals_checked = 0;
  std::vector<std::uint32_t> violating;  // Z-local ids of the first failing removal
  explicit operator bool() const { return ok; }
};

inline constexpr std::uint64_t kMontgomeryExhaustiveLimit = 1'000'000;

/// Every removal of removal_size() vertices of Z leaves a matching saturating X.
/// Exhaustive up to kMontgomeryExhaustiveLimit removals, sampled above.
MontgomeryVerdict verify_montgomery(const BipartiteTemplate& r, std::size_t samples = 20'000, std::uint64_t seed = 0,
                                    unsigned threads = 1);

/// Kuhn matching saturating X after deleting `removed` (Z-local ids); returns
/// the right partner of each X vertex, or nullopt.
std::optional<std::vector<std::uint32_t>> montgomery_matching(const BipartiteTemplate& r,
                                                              std::span<const std::uint32_t> removed);

/// Random bipartite graphs with degrees capped at Δ, returning the first that
/// verifies. Requires s >= 2. Δ below what resilience needs just exhausts.
SearchResult<BipartiteTemplate> search_montgomery(std::size_t s, std::size_t max_degree, std::size_t trials,
                                                  std::uint64_t seed, unsigned threads = 1);

/// R with the last Z vertex deleted (the odd-r trim).
BipartiteTemplate trim_z(BipartiteTemplate r);

// ---------------------------------------------------------------------------
// k-partite lift

/// Parts X_1..X_{k-2}, X, Y, Z laid out in that order. Column c of the X
/// parts is matched straight across, so R-edge (c, w) lifts to
/// {X_1[c], .., X_{k-2}[c], X[c], w}.
struct LiftedTemplate {
  Hypergraph graph;
  std::size_t k = 0;
  std::vector<std::uint32_t> part;  // 0..k-2 for the X parts, k-1 for Y, k for Z
  std::vector<Vertex> z;            // ids of Z in the lift
  std::size_t x_size = 0;

  Vertex x_vertex(std::size_t layer, std::size_t column) const { return static_cast<Vertex>(layer * x_size + column); }
  Vertex right_vertex(std::size_t right) const { return static_cast<Vertex>((k - 1) * x_size + right); }
  /// The lift of an R-edge.
  std::vector<Vertex> lift_edge(std::size_t column, std::size_t right) const;
};

LiftedTemplate lift_k_partite(const BipartiteTemplate& r, std::size_t k);

// ---------------------------------------------------------------------------
// Independent-set-free overlay

struct OverlayResult {
  Hypergraph graph;  // on vertices 0..r-1
  VerifyMode mode = VerifyMode::exhaustive;
};

inline constexpr std::size_t kOverlayExactLimit = 24;

/// Largest vertex set without an edge has fewer than ceil(r/2) vertices?
/// Exact by enumeration for r <= kOverlayExactLimit, sampled otherwise.
bool overlay_is_independent_free(const Hypergraph& g, VerifyMode* mode = nullptr, std::uint64_t seed = 0,
                                 std::size_t samples = 100'000);

/// k-graph on r vertices in which every ceil(r/2)-set spans an edge, with at
/// most `edge_budget` edges. Built by greedy hitting over a random order of
/// the ceil(r/2)-sets (exact for r <= 24); larger r samples random graphs.
SearchResult<OverlayResult> independent_free_overlay(std::size_t r, std::size_t k, std::size_t edge_budget,
                                                     std::uint64_t seed, std::size_t trials = 20);

// ---------------------------------------------------------------------------
// Resilient templates

struct TemplateParams {
  std::size_t max_degree = 6;
  std::size_t montgomery_trials = 400;
  std::size_t overlay_budget = 0;  // 0: C(r, k)
  std::size_t overlay_trials = 20;
  unsigned threads = 1;
};

struct ResilientTemplate {
  std::size_t k = 0;
  std::size_t r = 0;
  std::size_t s = 0;
  Hypergraph graph;
  std::vector<Vertex> z;  // the flexible set, |z| = r
  BipartiteTemplate montgomery;
  LiftedTemplate lift;
  Hypergraph overlay;  // on 0..r-1, vertex i is z[i]
  std::size_t montgomery_trials = 0;
  VerifyMode overlay_mode = VerifyMode::exhaustive;

  std::size_t vertex_count() const { return graph.n(); }
  std::size_t edge_count() const { return graph.edge_count(); }
  /// max(v(T), e(T)) / r.
  double achieved_l() const;
};

/// v(T) = (k-1)·3s + 2s + r with s = ceil(r/2).
std::size_t template_vertex_count(std::size_t r, std::size_t k);

/// Lift of a Montgomery graph for s = ceil(r/2), Z trimmed to r, overlay on Z.
/// A failed sub-search comes back as a non-found result; needs r >= 4.
SearchResult<ResilientTemplate> build_resilient_template(std::size_t r, std::size_t k, const TemplateParams& params,
                                                         std::uint64_t seed);

/// Perfect matching of T - W for W ⊆ Z (template ids) with |W| < r/2 and
/// k | v(T) - |W|: greedy overlay edges cut Z down to a Montgomery removal,
/// the Montgomery matching lifts the rest. Throws TemplateMatchingFailed.
EdgeList template_matching(const ResilientTemplate& t, const std::vector<Vertex>& w);

struct TemplateVerdict {
  bool ok = true;
  VerifyMode mode = VerifyMode::exhaustive;
  std::uint64_t removals_checked = 0;
  std::vector<Vertex> violating;  // first failing W
  explicit operator bool() const { return ok; }
};

inline constexpr std::uint64_t kTemplateExhaustiveLimit = 100'000;

/// find_perfect_matching on T - W for every feasible W (|W| < r/2,
/// divisibility). `mode` exhaustive falls back to sampled above the limit.
TemplateVerdict verify_resilient_template(const ResilientTemplate& t, VerifyMode mode, std::size_t samples = 2000,
                                          std::uint64_t seed = 0, unsigned threads = 1);

/// .khg of the graph plus a sidecar JSON: Z ids, r, s, k, Δ, L, modes.
void save_template(const ResilientTemplate& t, const std::string& khg_path, const std::string& json_path,
                   const std::string& verification = "");
/// Reads back the graph and Z; the Montgomery and overlay parts are
/// reconstructed from the layout.
ResilientTemplate load_template(const std::string& khg_path, const std::string& json_path);

// ---------------------------------------------------------------------------
// Absorbing structures

struct AbsorbingStructure {
  ResilientTemplate tmpl;
  std::vector<Vertex> embed;           // template vertex -> host vertex
  std::vector<Absorber> placements;    // per template edge (template edge order), host ids
  VertexSet x;                         // every structure vertex (host ids)
  std::vector<Vertex> z;               // host ids of Z
  std::size_t host_n = 0;
};

/// Z goes onto `embed_z` (in order), the other template vertices onto the
/// lowest unused host ids, then every template edge receives an absorber
/// avoiding all earlier vertices except its own roots.
/// Throws PlacementFailed, or PreconditionError when the host is too small.
AbsorbingStructure build_absorbing_structure(const Hypergraph& host, const ResilientTemplate& t,
                                             const std::vector<Vertex>& embed_z, const RootedSearchConfig& finder);

/// Perfect matching of X - W for W ⊆ Z (host ids): a template matching of
/// T - W picks which absorbers use their covering matching.
/// Throws PreconditionError on a removal outside the guarantee.
EdgeList structure_matching_after_removal(const AbsorbingStructure& s, const VertexSet& w_removed);

/// Whether a removal of this size is inside the guarantee.
bool removal_feasible(const ResilientTemplate& t, std::size_t w_size);

}  // namespace dlab
