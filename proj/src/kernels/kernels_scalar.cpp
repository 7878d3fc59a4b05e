#include "dlab/kernels.hpp"

#include <bit>
#include <limits>

namespace dlab::kernels::scalar {

std::size_t count_supersets(std::span<const std::uint64_t> masks, std::size_t words,
                            std::span<const std::uint64_t> query) {
  std::size_t count = 0;
  const std::size_t rows = words ? masks.size() / words : 0;
  for (std::size_t r = 0; r < rows; ++r) {
    const std::uint64_t* row = masks.data() + r * words;
    bool ok = true;
    for (std::size_t w = 0; w < words && ok; ++w) ok = (row[w] & query[w]) == query[w];
    count += ok;
  }
  return count;
}

std::size_t count_disjoint(std::span<const std::uint64_t> masks, std::size_t words,
                           std::span<const std::uint64_t> query) {
  std::size_t count = 0;
  const std::size_t rows = words ? masks.size() / words : 0;
  for (std::size_t r = 0; r < rows; ++r) {
    const std::uint64_t* row = masks.data() + r * words;
    bool ok = true;
    for (std::size_t w = 0; w < words && ok; ++w) ok = (row[w] & query[w]) == 0;
    count += ok;
  }
  return count;
}

bool any_subset_of(std::span<const std::uint64_t> masks, std::size_t words,
                   std::span<const std::uint64_t> query) {
  const std::size_t rows = words ? masks.size() / words : 0;
  for (std::size_t r = 0; r < rows; ++r) {
    const std::uint64_t* row = masks.data() + r * words;
    bool ok = true;
    for (std::size_t w = 0; w < words && ok; ++w) ok = (row[w] & ~query[w]) == 0;
    if (ok) return true;
  }
  return false;
}

std::uint32_t min_popcount_and(std::span<const std::uint32_t> table, std::uint32_t g) {
  std::uint32_t best = std::numeric_limits<std::uint32_t>::max();
  for (std::uint32_t t : table) {
    auto c = static_cast<std::uint32_t>(std::popcount(t & g));
    if (c < best) best = c;
  }
  return best;
}

bool any_contained(std::span<const std::uint32_t> table, std::uint32_t g) {
  for (std::uint32_t t : table)
    if ((g & t) == t) return true;
  return false;
}

const KernelTable& table() {
  static const KernelTable t{count_supersets, count_disjoint, any_subset_of, min_popcount_and,
                             any_contained};
  return t;
}

}  // namespace dlab::kernels::scalar
