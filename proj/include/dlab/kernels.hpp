#pragma once
// Data-parallel bitmask kernels behind degree counting, perfect-matching
// search and threshold enumeration.
//
// Every kernel has a portable scalar reference in `dlab::kernels::scalar`
// and an AVX2 variant in `dlab::kernels::avx2`; the unqualified entry points
// dispatch at runtime to the best variant the CPU supports. Masks are laid
// out row-major: edge i occupies words [i*words, (i+1)*words).

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace dlab::kernels {

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa);

/// Best instruction set available on this machine.
Isa detected_isa();
/// Instruction set currently used by the dispatching entry points.
Isa active_isa();
/// Overrides dispatch (tests use this to run both paths). Requesting an ISA
/// the CPU lacks falls back to scalar. Returns the ISA actually selected.
Isa set_active_isa(Isa isa);

struct KernelTable {
  std::size_t (*count_supersets)(std::span<const std::uint64_t>, std::size_t,
                                 std::span<const std::uint64_t>);
  std::size_t (*count_disjoint)(std::span<const std::uint64_t>, std::size_t,
                                std::span<const std::uint64_t>);
  bool (*any_subset_of)(std::span<const std::uint64_t>, std::size_t,
                        std::span<const std::uint64_t>);
  std::uint32_t (*min_popcount_and)(std::span<const std::uint32_t>, std::uint32_t);
  bool (*any_contained)(std::span<const std::uint32_t>, std::uint32_t);
};

namespace scalar {
std::size_t count_supersets(std::span<const std::uint64_t> masks, std::size_t words,
                            std::span<const std::uint64_t> query);
std::size_t count_disjoint(std::span<const std::uint64_t> masks, std::size_t words,
                           std::span<const std::uint64_t> query);
bool any_subset_of(std::span<const std::uint64_t> masks, std::size_t words,
                   std::span<const std::uint64_t> query);
std::uint32_t min_popcount_and(std::span<const std::uint32_t> table, std::uint32_t g);
bool any_contained(std::span<const std::uint32_t> table, std::uint32_t g);
const KernelTable& table();
}  // namespace scalar

namespace avx2 {
std::size_t count_supersets(std::span<const std::uint64_t> masks, std::size_t words,
                            std::span<const std::uint64_t> query);
std::size_t count_disjoint(std::span<const std::uint64_t> masks, std::size_t words,
                           std::span<const std::uint64_t> query);
bool any_subset_of(std::span<const std::uint64_t> masks, std::size_t words,
                   std::span<const std::uint64_t> query);
std::uint32_t min_popcount_and(std::span<const std::uint32_t> table, std::uint32_t g);
bool any_contained(std::span<const std::uint32_t> table, std::uint32_t g);
const KernelTable& table();
}  // namespace avx2

const KernelTable& active();

/// Number of rows r with (row & query) == query.
inline std::size_t count_supersets(std::span<const std::uint64_t> masks, std::size_t words,
                                   std::span<const std::uint64_t> query) {
  return active().count_supersets(masks, words, query);
}
/// Number of rows r with (row & query) == 0.
inline std::size_t count_disjoint(std::span<const std::uint64_t> masks, std::size_t words,
                                  std::span<const std::uint64_t> query) {
  return active().count_disjoint(masks, words, query);
}
/// True iff some row r satisfies (row & ~query) == 0.
inline bool any_subset_of(std::span<const std::uint64_t> masks, std::size_t words,
                          std::span<const std::uint64_t> query) {
  return active().any_subset_of(masks, words, query);
}
/// min over table entries t of popcount(t & g); UINT32_MAX for an empty table.
inline std::uint32_t min_popcount_and(std::span<const std::uint32_t> table, std::uint32_t g) {
  return active().min_popcount_and(table, g);
}
/// True iff some table entry t satisfies (g & t) == t.
inline bool any_contained(std::span<const std::uint32_t> table, std::uint32_t g) {
  return active().any_contained(table, g);
}

}  // namespace dlab::kernels
