#pragma once
// The absorbing-method perfect matching constructor: rich flexible set,
// absorbing set on a resilient template, blockwise almost-perfect matching,
// and absorption of the leftover. Success is only ever reported for a
// matching that passed the independent verifier.

#include "dlab/absorbing.hpp"
#include "dlab/core.hpp"
#include "dlab/hypercore.hpp"
#include "dlab/matchpower.hpp"
#include "dlab/templates.hpp"

#include <optional>
#include <string>
#include <vector>

namespace dlab {

/// A pipeline stage could not complete; `stage` names it.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& why) : Error(stage + ": " + why), stage(std::move(stage)) {}
  std::string stage;
};

struct RichSet {
  std::vector<Vertex> z;  // sorted
  std::size_t threshold = 0;
  std::size_t min_outside_degree = 0;  // over vertices outside Z (edges with k-1 vertices in Z)
  std::size_t trials_used = 0;
};

/// Number of edges through v whose other k-1 vertices all lie in Z.
std::size_t degree_into(const Hypergraph& g, Vertex v, const VertexSet& z);

/// Random `size`-subsets until every outside vertex has at least
/// max(1, ceil(density/2 · C(size-1, k-1))) edges into Z. density < 0 uses
/// the edge density of g. The diagnostic of a failure names the best deficit.
SearchResult<RichSet> choose_rich_set(const Hypergraph& g, std::size_t size, double density, std::size_t trials,
                                      std::uint64_t seed);

struct PipelineParams {
  std::size_t r = 0;                 // template size; 0 picks the largest r with v(T) <= n
  std::size_t r_attempts = 3;        // descending r values tried when r = 0
  double lambda = 0.1;               // lambda_cap <= lambda·n
  double rich_density = -1;          // < 0: edge density of the host
  std::size_t rich_trials = 50;
  std::size_t block_size = 0;        // 0: smallest multiple of k in [2k, 12] (2k when none)
  std::size_t absorber_order = 6;    // Q for the rooted absorber search
  std::uint64_t absorber_budget = 2'000'000;
  std::uint64_t pm_budget = 1'000'000;
  TemplateParams tmpl;
  bool allow_empty_absorber = true;  // fall back to X = ∅ when no template fits
  unsigned threads = 1;
};

std::size_t default_block_size(std::size_t k);

struct AbsorbingSet {
  VertexSet x;
  std::optional<AbsorbingStructure> structure;  // empty when X = ∅
  VertexSet z;
  std::size_t lambda_cap = 0;
  std::size_t r = 0;
  double gamma = 0;
  double x_bound = 0;  // (γ/2)^k · n, advisory
  std::vector<std::pair<std::string, std::string>> notes;  // stage -> outcome
};

/// Largest |W| with (k-1)|W| < r/2, capped by floor(lambda·n).
std::size_t lambda_cap_for(std::size_t r, std::size_t k, std::size_t n, double lambda);

/// Rich set, resilient template on it, absorbers on every template edge.
/// Throws StageError("rich_set" | "template" | "structure").
AbsorbingSet build_absorbing_set(const Hypergraph& g, double gamma, const PipelineParams& params, std::uint64_t seed);

/// Matching covering exactly X ∪ W. Throws PreconditionError when W meets X,
/// |W| > lambda_cap or k does not divide |X ∪ W|; StageError("absorb_m1" |
/// "absorb_m2") when a step fails.
EdgeList absorb_and_complete(const Hypergraph& g, const AbsorbingSet& a, const VertexSet& w,
                             std::uint64_t budget = kDefaultBudget);

struct StageOutcome {
  std::string name;
  bool ok = false;
  std::string detail;
};

struct PipelineReport {
  std::size_t n = 0, k = 0, d = 0;
  double gamma = 0;
  std::uint64_t seed = 0;
  std::size_t min_degree = 0;
  std::size_t target_degree = 0;
  bool degree_condition_met = false;
  std::vector<StageOutcome> stages;
  bool success = false;
  std::string failure_stage;
  EdgeList matching;
  // counters
  std::size_t r = 0;
  std::size_t x_size = 0;
  std::size_t lambda_cap = 0;
  std::size_t leftover = 0;
  std::size_t retries = 0;
  std::size_t failed_blocks = 0;
  double x_bound = 0;
};

/// Never throws for instance-level failures; every failure is a report outcome.
PipelineReport dirac_perfect_matching(const Hypergraph& g, std::size_t d, double gamma, const PipelineParams& params,
                                      std::uint64_t seed);

/// Deterministic JSON (sorted keys, no timings).
std::string report_to_json(const PipelineReport& r);

/// key=value lines (unknown keys are a FormatError).
PipelineParams read_pipeline_params(std::istream& in);

}  // namespace dlab
