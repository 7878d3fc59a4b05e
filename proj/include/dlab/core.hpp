#pragma once
// Shared vocabulary for the dlab library: vertex ids, error types, vertex
// sets and the small search-result wrapper used by every budgeted search.

#include <boost/rational.hpp>

#include <bit>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <array>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dlab {

using Vertex = std::uint32_t;
using Rational = boost::rational<std::int64_t>;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A size argument (d, |S|, k, n) is outside the operation's domain.
class SizeError : public Error {
 public:
  using Error::Error;
};

/// An exact computation was requested beyond its enumeration budget.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// A contraction specification overlaps itself.
class SpecError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file or record.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// A composed object violates its shape constraints.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Budgeted search results
// ---------------------------------------------------------------------------

enum class SearchStatus { found, exhausted, budget };

inline const char* to_string(SearchStatus s) {
  switch (s) {
    case SearchStatus::found: return "found";
    case SearchStatus::exhausted: return "exhausted";
    case SearchStatus::budget: return "budget";
  }
  return "?";
}

template <class T>
struct SearchResult {
  SearchStatus status = SearchStatus::exhausted;
  std::optional<T> value;
  std::uint64_t nodes = 0;
  std::string diagnostic;

  explicit operator bool() const { return status == SearchStatus::found; }
  const T& operator*() const { return *value; }
  const T* operator->() const { return &*value; }
};

// ---------------------------------------------------------------------------
// VertexSet: a dense bitset over the ambient vertex range [0, capacity).
// ---------------------------------------------------------------------------

class VertexSet {
 public:
  VertexSet() = default;
  explicit VertexSet(std::size_t capacity)
      : capacity_(capacity), words_((capacity + 63) / 64, 0) {}
  VertexSet(std::size_t capacity, std::span<const Vertex> members) : VertexSet(capacity) {
    for (Vertex v : members) insert(v);
  }
  VertexSet(std::size_t capacity, std::initializer_list<Vertex> members) : VertexSet(capacity) {
    for (Vertex v : members) insert(v);
  }

  static VertexSet all(std::size_t capacity) {
    VertexSet s(capacity);
    for (std::size_t v = 0; v < capacity; ++v) s.insert(static_cast<Vertex>(v));
    return s;
  }

  std::size_t capacity() const { return capacity_; }
  std::size_t size() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  bool empty() const {
    for (auto w : words_)
      if (w) return false;
    return true;
  }

  bool contains(Vertex v) const {
    return v < capacity_ && ((words_[v >> 6] >> (v & 63)) & 1u);
  }
  void insert(Vertex v) {
    if (v >= capacity_) throw SizeError("vertex " + std::to_string(v) + " outside capacity " + std::to_string(capacity_));
    words_[v >> 6] |= std::uint64_t{1} << (v & 63);
  }
  void erase(Vertex v) {
    if (v < capacity_) words_[v >> 6] &= ~(std::uint64_t{1} << (v & 63));
  }

  std::vector<Vertex> members() const {
    std::vector<Vertex> out;
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits) {
        int b = std::countr_zero(bits);
        out.push_back(static_cast<Vertex>(w * 64 + static_cast<std::size_t>(b)));
        bits &= bits - 1;
      }
    }
    return out;
  }

  std::span<const std::uint64_t> words() const { return words_; }

  bool intersects(const VertexSet& o) const {
    for (std::size_t i = 0; i < std::min(words_.size(), o.words_.size()); ++i)
      if (words_[i] & o.words_[i]) return true;
    return false;
  }
  bool is_subset_of(const VertexSet& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      std::uint64_t other = i < o.words_.size() ? o.words_[i] : 0;
      if (words_[i] & ~other) return false;
    }
    return true;
  }
  VertexSet& operator|=(const VertexSet& o) {
    for (std::size_t i = 0; i < std::min(words_.size(), o.words_.size()); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  VertexSet& operator-=(const VertexSet& o) {
    for (std::size_t i = 0; i < std::min(words_.size(), o.words_.size()); ++i) words_[i] &= ~o.words_[i];
    return *this;
  }
  VertexSet& operator&=(const VertexSet& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= i < o.words_.size() ? o.words_[i] : 0;
    return *this;
  }
  friend VertexSet operator|(VertexSet a, const VertexSet& b) { return a |= b; }
  friend VertexSet operator-(VertexSet a, const VertexSet& b) { return a -= b; }
  friend VertexSet operator&(VertexSet a, const VertexSet& b) { return a &= b; }
  friend bool operator==(const VertexSet& a, const VertexSet& b) {
    return a.capacity_ == b.capacity_ && a.words_ == b.words_;
  }

 private:
  std::size_t capacity_ = 0;
  std::vector<std::uint64_t> words_;
};

// ---------------------------------------------------------------------------
// Small numeric helpers
// ---------------------------------------------------------------------------

/// Exact binomial coefficient; returns 0 when r < 0 or r > n.
std::uint64_t binomial(std::int64_t n, std::int64_t r);

/// All r-subsets of {0..n-1} in lexicographic order.
std::vector<std::vector<Vertex>> combinations(std::size_t n, std::size_t r);

/// Advances `c` (a sorted r-subset of [0,n)) to its lexicographic successor.
bool next_combination(std::vector<Vertex>& c, std::size_t n);

/// Flat `key = value` lines in file order. Blank lines and lines starting
/// with '#' are skipped; keys and values are trimmed. Throws FormatError on a
/// line without '=' or a repeated key.
std::vector<std::pair<std::string, std::string>> read_key_values(std::istream& in);

/// Independent 64-bit seed for sub-stream (index, stream) of a master seed,
/// mixed through std::seed_seq so neighbouring indices decorrelate.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index, std::uint64_t stream = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (std::uint64_t{out[0]} << 32) | out[1];
}

}  // namespace dlab
