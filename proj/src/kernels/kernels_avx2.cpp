#include "dlab/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define DLAB_HAVE_X86 1
#include <immintrin.h>
#else
#define DLAB_HAVE_X86 0
#endif

#include <bit>
#include <limits>

namespace dlab::kernels::avx2 {

#if DLAB_HAVE_X86

#define DLAB_AVX2 __attribute__((target("avx2,popcnt")))

namespace {

DLAB_AVX2 inline int lanes_mask(__m256i eq) {
  return _mm256_movemask_pd(_mm256_castsi256_pd(eq));
}

// Per-32-bit-lane popcount via the nibble lookup table.
DLAB_AVX2 inline __m256i popcount_epi32(__m256i v) {
  const __m256i lookup = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4, 0, 1, 1,
                                          2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
  const __m256i low = _mm256_set1_epi8(0x0f);
  __m256i lo = _mm256_and_si256(v, low);
  __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low);
  __m256i bytes = _mm256_add_epi8(_mm256_shuffle_epi8(lookup, lo), _mm256_shuffle_epi8(lookup, hi));
  __m256i pairs = _mm256_maddubs_epi16(bytes, _mm256_set1_epi8(1));
  return _mm256_madd_epi16(pairs, _mm256_set1_epi16(1));
}

}  // namespace

DLAB_AVX2 std::size_t count_supersets(std::span<const std::uint64_t> masks, std::size_t words,
                                      std::span<const std::uint64_t> query) {
  if (words != 1) return scalar::count_supersets(masks, words, query);
  const std::size_t rows = masks.size();
  const __m256i q = _mm256_set1_epi64x(static_cast<long long>(query[0]));
  std::size_t count = 0, r = 0;
  for (; r + 4 <= rows; r += 4) {
    __m256i m = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(masks.data() + r));
    __m256i eq = _mm256_cmpeq_epi64(_mm256_and_si256(m, q), q);
    count += static_cast<std::size_t>(std::popcount(static_cast<unsigned>(lanes_mask(eq))));
  }
  for (; r < rows; ++r) count += (masks[r] & query[0]) == query[0];
  return count;
}

DLAB_AVX2 std::size_t count_disjoint(std::span<const std::uint64_t> masks, std::size_t words,
                                     std::span<const std::uint64_t> query) {
  if (words != 1) return scalar::count_disjoint(masks, words, query);
  const std::size_t rows = masks.size();
  const __m256i q = _mm256_set1_epi64x(static_cast<long long>(query[0]));
  const __m256i zero = _mm256_setzero_si256();
  std::size_t count = 0, r = 0;
  for (; r + 4 <= rows; r += 4) {
    __m256i m = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(masks.data() + r));
    __m256i eq = _mm256_cmpeq_epi64(_mm256_and_si256(m, q), zero);
    count += static_cast<std::size_t>(std::popcount(static_cast<unsigned>(lanes_mask(eq))));
  }
  for (; r < rows; ++r) count += (masks[r] & query[0]) == 0;
  return count;
}

DLAB_AVX2 bool any_subset_of(std::span<const std::uint64_t> masks, std::size_t words,
                             std::span<const std::uint64_t> query) {
  if (words != 1) return scalar::any_subset_of(masks, words, query);
  const std::size_t rows = masks.size();
  const __m256i q = _mm256_set1_epi64x(static_cast<long long>(query[0]));
  const __m256i zero = _mm256_setzero_si256();
  std::size_t r = 0;
  for (; r + 4 <= rows; r += 4) {
    __m256i m = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(masks.data() + r));
    __m256i eq = _mm256_cmpeq_epi64(_mm256_andnot_si256(q, m), zero);
    if (lanes_mask(eq)) return true;
  }
  for (; r < rows; ++r)
    if ((masks[r] & ~query[0]) == 0) return true;
  return false;
}

DLAB_AVX2 std::uint32_t min_popcount_and(std::span<const std::uint32_t> table, std::uint32_t g) {
  const std::size_t n = table.size();
  std::uint32_t best = std::numeric_limits<std::uint32_t>::max();
  std::size_t i = 0;
  if (n >= 8) {
    const __m256i gv = _mm256_set1_epi32(static_cast<int>(g));
    __m256i acc = _mm256_set1_epi32(-1);
    for (; i + 8 <= n; i += 8) {
      __m256i t = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(table.data() + i));
      acc = _mm256_min_epu32(acc, popcount_epi32(_mm256_and_si256(t, gv)));
    }
    alignas(32) std::uint32_t lanes[8];
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
    for (std::uint32_t v : lanes) best = v < best ? v : best;
  }
  for (; i < n; ++i) {
    auto c = static_cast<std::uint32_t>(std::popcount(table[i] & g));
    best = c < best ? c : best;
  }
  return best;
}

DLAB_AVX2 bool any_contained(std::span<const std::uint32_t> table, std::uint32_t g) {
  const std::size_t n = table.size();
  const __m256i gv = _mm256_set1_epi32(static_cast<int>(g));
  const __m256i zero = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256i t = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(table.data() + i));
    __m256i eq = _mm256_cmpeq_epi32(_mm256_andnot_si256(gv, t), zero);
    if (_mm256_movemask_epi8(eq)) return true;
  }
  for (; i < n; ++i)
    if ((g & table[i]) == table[i]) return true;
  return false;
}

#else  // no x86: the AVX2 table aliases the scalar kernels

std::size_t count_supersets(std::span<const std::uint64_t> m, std::size_t w,
                            std::span<const std::uint64_t> q) {
  return scalar::count_supersets(m, w, q);
}
std::size_t count_disjoint(std::span<const std::uint64_t> m, std::size_t w,
                           std::span<const std::uint64_t> q) {
  return scalar::count_disjoint(m, w, q);
}
bool any_subset_of(std::span<const std::uint64_t> m, std::size_t w,
                   std::span<const std::uint64_t> q) {
  return scalar::any_subset_of(m, w, q);
}
std::uint32_t min_popcount_and(std::span<const std::uint32_t> t, std::uint32_t g) {
  return scalar::min_popcount_and(t, g);
}
bool any_contained(std::span<const std::uint32_t> t, std::uint32_t g) {
  return scalar::any_contained(t, g);
}

#endif

const KernelTable& table() {
  static const KernelTable t{count_supersets, count_disjoint, any_subset_of, min_popcount_and,
                             any_contained};
  return t;
}

}  // namespace dlab::kernels::avx2
