#pragma once
// Exact Dirac thresholds m_d(k,n) at desk scale, the conjectured limiting
// density and the two extremal (space and parity) constructions.

#include "dlab/core.hpp"
#include "dlab/hypercore.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dlab {

/// max{1/2, 1 - ((k-1)/k)^(k-d)}. Throws SizeError unless 1 <= d < k.
Rational conjectured_density(std::size_t d, std::size_t k);

enum class SweepMode { pruned, unpruned };

struct ThresholdRecord {
  std::size_t n = 0, k = 0, d = 0;
  std::size_t m_value = 0;
  Hypergraph extremal_witness;  // PM-free with min d-degree m_value - 1
  std::uint64_t graphs_enumerated = 0;
  SweepMode mode = SweepMode::pruned;
};

inline constexpr std::size_t kThresholdEdgeLimit = 24;

/// Sweeps every labeled k-graph on n vertices; m = 1 + max min-d-degree over
/// graphs without a perfect matching. The unpruned sweep scores each edge
/// mask with the bitmask kernels; the pruned sweep builds each candidate as a
/// Hypergraph and asks min_d_degree/find_perfect_matching, skipping masks
/// whose average d-degree cannot beat the current best. The witness is the
/// lowest mask attaining the maximum in both modes.
/// Throws SizeError unless k | n and 1 <= d < k; CapacityError when C(n,k) > 24.
ThresholdRecord exact_dirac_threshold(std::size_t n, std::size_t k, std::size_t d,
                                      SweepMode mode = SweepMode::pruned, unsigned threads = 1);

/// All k-sets meeting S = {0..n/k-2}. Throws SizeError unless k | n and n >= 2k.
Hypergraph space_barrier(std::size_t n, std::size_t k, std::size_t d);
/// Size of A chosen by parity_barrier for (n,k,d).
std::size_t parity_set_size(std::size_t n, std::size_t k, std::size_t d);
/// All k-sets meeting A = {0..|A|-1} in an even number of vertices, |A| odd.
/// Throws SizeError unless k | n, 1 <= d < k and n >= 2.
Hypergraph parity_barrier(std::size_t n, std::size_t k, std::size_t d);

struct SandwichReport {
  std::size_t n = 0, k = 0, d = 0;
  std::optional<std::size_t> space_degree;   // min d-degree of the space barrier, if defined
  std::optional<std::size_t> parity_degree;
  std::size_t lower = 0;                     // 1 + max barrier degree
  std::optional<std::size_t> exact;          // m_d(k,n) when the sweep is feasible
  bool tight = false;
  std::string note;
  /// exact (or lower when exact is unavailable) over C(n-d,k-d)
  Rational ratio{0};
};

SandwichReport verify_threshold_sandwich(std::size_t n, std::size_t k, std::size_t d, unsigned threads = 1);

}  // namespace dlab
