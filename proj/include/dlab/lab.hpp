#pragma once
// Random k-graphs, degree-preserving adversaries and the seeded experiment
// harness (resilience, degree inheritance, neighbourhood load) with its
// versioned CSV output.

#include "dlab/core.hpp"
#include "dlab/hypercore.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace dlab {

/// δ_d(G) is already below the requested target.
class TargetInfeasible : public Error {
 public:
  using Error::Error;
};

/// H^k(n, p): every k-set independently with probability p. Throws SizeError
/// unless 1 <= k <= n, PreconditionError unless 0 <= p <= 1.
Hypergraph sample_hk(std::size_t n, std::size_t k, double p, std::uint64_t seed);

enum class DegradePolicy { random, greedy };
const char* to_string(DegradePolicy p);
DegradePolicy parse_policy(const std::string& s);

struct DegradeResult {
  Hypergraph graph;
  std::size_t deleted = 0;
  std::size_t min_degree = 0;  // rechecked with min_d_degree
};

/// Deletes edges while every d-set keeps degree >= target. Random: one pass
/// over a seeded edge permutation (maximal, since degrees only fall). Greedy:
/// always deletes the deletable edge whose removal leaves the smallest
/// minimum slack over its d-subsets, ties broken by a seeded priority.
/// Throws TargetInfeasible when δ_d(G) < target.
DegradeResult degrade_to_degree(const Hypergraph& g, std::size_t d, std::size_t target, DegradePolicy policy,
                                std::uint64_t seed, std::size_t edge_budget = SIZE_MAX);

struct Interval {
  double lo = 0, hi = 0;
};
/// Wilson score interval; [0, 1] for zero trials.
Interval wilson_interval(std::size_t successes, std::size_t trials, double z = 1.959963984540054);

// ---------------------------------------------------------------------------
// Configuration

struct ExperimentConfig {
  std::string name = "experiment";
  std::string kind = "resilience";  // resilience | inheritance | load
  std::size_t n = 12, k = 3, d = 2;
  double p = 0.8;
  double gamma = 0.15;
  std::size_t q = 6;          // subset size for inheritance
  double rho = 0;             // > 0: subset size round(rho·n) instead of q
  double lambda = 0.2;
  double eta = 0;
  std::size_t trials = 200;
  std::uint64_t master_seed = 1;
  std::string output;         // empty: stdout
  DegradePolicy policy = DegradePolicy::random;
  bool empirical_p = false;   // p̂ from the sampled graph instead of nominal p
  std::string host = "random";  // complete | space_barrier | parity_barrier | random
  bool exhaustive = false;    // inheritance: every Q-subset instead of trials samples
  std::uint64_t budget = 1'000'000;
  unsigned threads = 1;

  /// Throws SpecError on out-of-range fields.
  void validate() const;
};

/// Flat key=value. Unknown keys and bad values are FormatError.
ExperimentConfig read_config(std::istream& in);
void write_config(std::ostream& out, const ExperimentConfig& c);

// ---------------------------------------------------------------------------
// Versioned CSV

inline constexpr int kCsvVersion = 1;

/// `#dlab-csv v1 <kind>`, `#meta k=v` lines, a header row, data rows and
/// `#summary k=v` lines. Values never contain commas.
struct CsvTable {
  std::string kind;
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::pair<std::string, std::string>> summary;

  const std::string& summary_value(const std::string& key) const;  // throws FormatError
};

void write_csv(std::ostream& out, const CsvTable& t);
/// Throws FormatError on a missing or unknown version line or ragged rows.
CsvTable read_csv(std::istream& in);
/// The same content as one JSON object (sorted keys).
std::string table_to_json(const CsvTable& t);

/// Shortest decimal that reads back to the same double.
std::string format_double(double x);

// ---------------------------------------------------------------------------
// Experiments

enum class TrialOutcome { found, not_found, budget, infeasible };
const char* to_string(TrialOutcome o);

struct TrialRecord {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::size_t threshold = 0;
  std::size_t min_deg = 0;  // of G′ (of G when infeasible)
  TrialOutcome outcome = TrialOutcome::infeasible;
  std::uint64_t nodes = 0;
};

struct ResilienceSummary {
  std::size_t trials = 0, feasible = 0, infeasible = 0, found = 0, budget = 0;
  double frequency = 0;  // found / feasible; 0 when nothing is feasible
  Interval wilson;
};

struct ResilienceResult {
  ExperimentConfig cfg;
  std::vector<TrialRecord> records;  // trial order
  ResilienceSummary summary;
  CsvTable table() const;
};

/// threshold = max(1, ceil((conjectured_density(d,k) + γ)·p̂·C(n-d, k-d))).
std::size_t resilience_threshold(const ExperimentConfig& cfg, double p_hat);

/// Per trial: sample, degrade to the threshold, exact PM search. Trial
/// failures are records, never exceptions.
ResilienceResult resilience_experiment(const ExperimentConfig& cfg);

struct InheritanceRecord {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::size_t min_deg = 0;
  bool pass = false;
};

struct InheritanceResult {
  ExperimentConfig cfg;
  std::size_t host_min_degree = 0;
  double host_density = 0;     // δ_d(G) / C(n-d, k-d)
  std::size_t subset_size = 0;
  std::size_t threshold = 0;   // ceil((host_density - η/2)·C(Q-d, k-d))
  std::vector<InheritanceRecord> records;
  std::size_t failures = 0;
  CsvTable table() const;
};

/// Host from cfg.host; Q-subsets sampled (or all of them when exhaustive)
/// and their induced minimum d-degree checked against the threshold.
InheritanceResult inheritance_experiment(const ExperimentConfig& cfg);

struct LoadSample {
  Vertex w = 0;
  std::size_t x_size = 0;
  std::size_t count = 0;  // edges through w meeting X
  double ratio = 0;
};

struct LoadReport {
  double p_hat = 0;
  double bound = 0;  // 2(λn)·p̂·C(n-2, k-2)
  std::vector<LoadSample> samples;
  double max_ratio = 0;
  std::size_t max_count = 0;
  CsvTable table(std::uint64_t seed) const;
};

/// Edges through w meeting X.
std::size_t load_count(const Hypergraph& g, Vertex w, const VertexSet& x);

/// Random (w, X) pairs with |X| = floor(λn), X not containing w. p̂ < 0 uses
/// the edge density of g. Needs k >= 2.
LoadReport neighborhood_load_check(const Hypergraph& g, double lambda, std::size_t samples, std::uint64_t seed,
                                   double p_hat = -1);

/// The configured host for inheritance and load runs.
Hypergraph experiment_host(const ExperimentConfig& cfg);

}  // namespace dlab
