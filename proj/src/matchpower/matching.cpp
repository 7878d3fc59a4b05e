#include "dlab/matchpower.hpp"
#include "dlab/kernels.hpp"
#include "dlab/parallel.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

namespace dlab {

Matching::Matching(std::size_t n, EdgeList edges) : covered_(n) {
  for (auto& e : edges) add(std::move(e));
}

void Matching::add(std::vector<Vertex> edge) {
  for (Vertex v : edge)
    if (covered_.contains(v)) throw PreconditionError("matching edges overlap at vertex " + std::to_string(v));
  for (Vertex v : edge) covered_.insert(v);
  edges_.push_back(std::move(edge));
}

void Matching::pop() {
  for (Vertex v : edges_.back()) covered_.erase(v);
  edges_.pop_back();
}

Matching Matching::canonical() const {
  EdgeList sorted = edges_;
  for (auto& e : sorted) std::sort(e.begin(), e.end());
  std::sort(sorted.begin(), sorted.end());
  return Matching(covered_.capacity(), std::move(sorted));
}

std::string check_matching(const Hypergraph& host, const EdgeList& edges, bool perfect) {
  std::vector<char> seen(host.n(), 0);
  for (const auto& e : edges) {
    if (!host.has_edge(e)) {
      std::string s = "not an edge of the host:";
      for (Vertex v : e) s += " " + std::to_string(v);
      return s;
    }
    for (Vertex v : e) {
      if (seen[v]) return "vertex " + std::to_string(v) + " covered twice";
      seen[v] = 1;
    }
  }
  if (perfect) {
    for (std::size_t v = 0; v < host.n(); ++v)
      if (!seen[v]) return "vertex " + std::to_string(v) + " uncovered";
  }
  return {};
}

const char* to_string(MatchStatus s) {
  switch (s) {
    case MatchStatus::perfect: return "perfect";
    case MatchStatus::partial: return "partial";
    case MatchStatus::none: return "none";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Perfect matching

namespace {

struct Mask {
  std::vector<std::uint64_t> w;
  explicit Mask(std::size_t words) : w(words, 0) {}
  bool test(Vertex v) const { return (w[v >> 6] >> (v & 63)) & 1u; }
  void add(std::span<const std::uint64_t> m) {
    for (std::size_t i = 0; i < w.size(); ++i) w[i] |= m[i];
  }
  void remove(std::span<const std::uint64_t> m) {
    for (std::size_t i = 0; i < w.size(); ++i) w[i] &= ~m[i];
  }
  void set(Vertex v) { w[v >> 6] |= std::uint64_t{1} << (v & 63); }
  void clear(Vertex v) { w[v >> 6] &= ~(std::uint64_t{1} << (v & 63)); }
  bool disjoint(std::span<const std::uint64_t> m) const {
    for (std::size_t i = 0; i < w.size(); ++i)
      if (w[i] & m[i]) return false;
    return true;
  }
};

struct BudgetHit {};

class PerfectSearch {
 public:
  PerfectSearch(const Hypergraph& h, std::uint64_t budget) : h_(h), budget_(budget), covered_(h.words()) {}

  bool run() { return step(); }
  std::uint64_t nodes() const { return nodes_; }
  const std::vector<std::size_t>& stack() const { return stack_; }
  const std::vector<std::size_t>& deepest() const { return deepest_; }

 private:
  bool step() {
    if (++nodes_ > budget_) throw BudgetHit{};
    if (stack_.size() > deepest_.size()) deepest_ = stack_;
    if (stack_.size() * h_.k() == h_.n()) return true;
    Vertex pick = 0;
    std::size_t fewest = SIZE_MAX;
    for (Vertex v = 0; v < h_.n(); ++v) {
      if (covered_.test(v)) continue;
      std::size_t avail = kernels::count_disjoint(h_.incident_masks(v), h_.words(), covered_.w);
      if (avail == 0) return false;
      if (avail < fewest) {
        fewest = avail;
        pick = v;
      }
    }
    for (std::uint32_t id : h_.incident_edges(pick)) {
      auto m = h_.edge_mask(id);
      if (!covered_.disjoint(m)) continue;
      covered_.add(m);
      stack_.push_back(id);
      if (step()) return true;
      stack_.pop_back();
      covered_.remove(m);
    }
    return false;
  }

  const Hypergraph& h_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  Mask covered_;
  std::vector<std::size_t> stack_;
  std::vector<std::size_t> deepest_;
};

Matching from_ids(const Hypergraph& h, const std::vector<std::size_t>& ids) {
  Matching m(h.n());
  for (auto id : ids) {
    auto e = h.edge(id);
    m.add({e.begin(), e.end()});
  }
  return m;
}

VertexSet complement(const VertexSet& s) { return VertexSet::all(s.capacity()) - s; }

}  // namespace

MatchResult find_perfect_matching(const Hypergraph& h, std::uint64_t budget) {
  MatchResult r;
  r.matching = Matching(h.n());
  if (h.n() % h.k() != 0) {
    r.status = MatchStatus::none;
    r.uncovered = VertexSet::all(h.n());
    return r;
  }
  PerfectSearch search(h, budget);
  try {
    bool found = search.run();
    r.status = found ? MatchStatus::perfect : MatchStatus::none;
    r.matching = from_ids(h, found ? search.stack() : search.deepest());
  } catch (const BudgetHit&) {
    r.status = MatchStatus::partial;
    r.matching = from_ids(h, search.deepest());
  }
  r.nodes_explored = search.nodes();
  r.uncovered = complement(r.matching.covered());
  return r;
}

// ---------------------------------------------------------------------------
// Maximum matching

namespace {

class MaxSearch {
 public:
  MaxSearch(const Hypergraph& h, std::uint64_t budget, std::size_t target)
      : h_(h), budget_(budget), target_(target), blocked_(h.words()) {}

  void run() {
    alive_ = h_.n();
    step();
  }
  std::uint64_t nodes() const { return nodes_; }
  const std::vector<std::size_t>& best() const { return best_; }
  void seed(std::vector<std::size_t> ids) { best_ = std::move(ids); }

 private:
  bool done() const { return target_ && best_.size() >= target_; }

  void step() {
    if (++nodes_ > budget_) throw BudgetHit{};
    if (stack_.size() > best_.size()) best_ = stack_;
    if (done()) return;
    if (stack_.size() + alive_ / h_.k() <= best_.size()) return;
    // Lowest live vertex; vertices with no available edge are dropped on the way.
    std::vector<Vertex> dropped;
    Vertex v = 0;
    bool have = false;
    for (; v < h_.n(); ++v) {
      if (blocked_.test(v)) continue;
      if (kernels::count_disjoint(h_.incident_masks(v), h_.words(), blocked_.w) > 0) {
        have = true;
        break;
      }
      blocked_.set(v);
      dropped.push_back(v);
      --alive_;
    }
    if (have && stack_.size() + alive_ / h_.k() > best_.size()) {
      for (std::uint32_t id : h_.incident_edges(v)) {
        auto m = h_.edge_mask(id);
        if (!blocked_.disjoint(m)) continue;
        blocked_.add(m);
        alive_ -= h_.k();
        stack_.push_back(id);
        step();
        stack_.pop_back();
        alive_ += h_.k();
        blocked_.remove(m);
        if (done()) break;
      }
      if (!done()) {
        blocked_.set(v);
        --alive_;
        step();
        ++alive_;
        blocked_.clear(v);
      }
    }
    for (Vertex u : dropped) {
      blocked_.clear(u);
      ++alive_;
    }
  }

  const Hypergraph& h_;
  std::uint64_t budget_;
  std::size_t target_;
  std::uint64_t nodes_ = 0;
  std::size_t alive_ = 0;
  Mask blocked_;
  std::vector<std::size_t> stack_;
  std::vector<std::size_t> best_;
};

std::vector<std::size_t> greedy_ids(const Hypergraph& h) {
  Mask used(h.words());
  std::vector<std::size_t> ids;
  for (std::size_t i = 0; i < h.edge_count(); ++i) {
    auto m = h.edge_mask(i);
    if (used.disjoint(m)) {
      used.add(m);
      ids.push_back(i);
    }
  }
  return ids;
}

}  // namespace

MaxMatchingResult max_matching(const Hypergraph& h, MatchingMode mode, std::uint64_t budget, std::size_t target) {
  MaxMatchingResult r;
  auto greedy = greedy_ids(h);
  if (mode == MatchingMode::greedy) {
    r.matching = from_ids(h, greedy);
    return r;
  }
  MaxSearch search(h, budget, target);
  search.seed(greedy);
  try {
    search.run();
    r.optimal = true;
  } catch (const BudgetHit&) {
    r.optimal = false;
  }
  r.nodes = search.nodes();
  r.matching = from_ids(h, search.best());
  return r;
}

// ---------------------------------------------------------------------------
// Aharoni-Haxell and disjoint representatives

namespace {

void check_universe(std::span<const Hypergraph> links) {
  for (const auto& l : links)
    if (l.n() != links.front().n()) throw PreconditionError("links must share one vertex universe");
}

bool ah_subset_ok(std::span<const Hypergraph> links, std::size_t kprime, const std::vector<std::size_t>& subset) {
  EdgeList all;
  for (auto i : subset) {
    auto e = links[i].edge_list();
    all.insert(all.end(), e.begin(), e.end());
  }
  std::size_t need = kprime * (subset.size() - 1) + 1;
  auto uni = Hypergraph::from_edges_merged(links.front().n(), kprime, std::move(all));
  if (uni.edge_count() < need) return false;
  return max_matching(uni, MatchingMode::exact, kDefaultBudget, need).matching.size() >= need;
}

}  // namespace

AhReport aharoni_haxell_holds(std::span<const Hypergraph> links, std::size_t kprime, AhMode mode,
                              std::size_t samples, std::uint64_t seed) {
  check_universe(links);
  for (const auto& l : links)
    if (l.k() != kprime) throw PreconditionError("every link must be k'-uniform");
  const std::size_t t = links.size();
  AhReport r;
  auto members = [](std::uint64_t mask) {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; mask; ++i, mask >>= 1)
      if (mask & 1u) s.push_back(i);
    return s;
  };
  if (mode == AhMode::exact) {
    if (t > kAhExactLimit)
      throw CapacityError("exact Aharoni-Haxell check is limited to " + std::to_string(kAhExactLimit) + " links");
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << t); ++mask) {
      auto s = members(mask);
      ++r.subsets_checked;
      if (!ah_subset_ok(links, kprime, s)) {
        r.holds = false;
        r.violating = s;
        return r;
      }
    }
    return r;
  }
  r.exhaustive = false;
  if (t == 0) return r;
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < samples; ++i) {
    std::vector<std::size_t> s;
    std::bernoulli_distribution coin(0.5);
    for (std::size_t j = 0; j < t; ++j)
      if (coin(rng)) s.push_back(j);
    if (s.empty()) s.push_back(std::uniform_int_distribution<std::size_t>(0, t - 1)(rng));
    ++r.subsets_checked;
    if (!ah_subset_ok(links, kprime, s)) {
      r.holds = false;
      r.violating = s;
      return r;
    }
  }
  return r;
}

namespace {

class RepresentativeSearch {
 public:
  RepresentativeSearch(std::span<const Hypergraph> links, std::uint64_t budget)
      : links_(links), budget_(budget), used_(links.empty() ? 1 : links.front().words()),
        choice_(links.size(), SIZE_MAX) {}

  bool run() { return step(0); }
  std::uint64_t nodes() const { return nodes_; }
  const std::vector<std::size_t>& choice() const { return choice_; }

 private:
  bool step(std::size_t assigned) {
    if (++nodes_ > budget_) throw BudgetHit{};
    if (assigned == links_.size()) return true;
    std::size_t pick = SIZE_MAX, fewest = SIZE_MAX;
    for (std::size_t i = 0; i < links_.size(); ++i) {
      if (choice_[i] != SIZE_MAX) continue;
      auto c = kernels::count_disjoint(links_[i].masks(), links_[i].words(), used_.w);
      if (c == 0) return false;
      if (c < fewest) {
        fewest = c;
        pick = i;
      }
    }
    const auto& l = links_[pick];
    for (std::size_t id = 0; id < l.edge_count(); ++id) {
      auto m = l.edge_mask(id);
      if (!used_.disjoint(m)) continue;
      used_.add(m);
      choice_[pick] = id;
      if (step(assigned + 1)) return true;
      choice_[pick] = SIZE_MAX;
      used_.remove(m);
    }
    return false;
  }

  std::span<const Hypergraph> links_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  Mask used_;
  std::vector<std::size_t> choice_;
};

}  // namespace

SearchResult<EdgeList> find_disjoint_representatives(std::span<const Hypergraph> links, std::uint64_t budget) {
  check_universe(links);
  SearchResult<EdgeList> r;
  RepresentativeSearch search(links, budget);
  try {
    if (search.run()) {
      r.status = SearchStatus::found;
      EdgeList out;
      for (std::size_t i = 0; i < links.size(); ++i) {
        auto e = links[i].edge(search.choice()[i]);
        out.emplace_back(e.begin(), e.end());
      }
      r.value = std::move(out);
    } else {
      r.status = SearchStatus::exhausted;
      r.diagnostic = "no system of disjoint representatives";
    }
  } catch (const BudgetHit&) {
    r.status = SearchStatus::budget;
    r.diagnostic = "node budget exhausted";
  }
  r.nodes = search.nodes();
  return r;
}

SearchResult<Matching> match_into_flexible(const Hypergraph& g, std::span<const Vertex> w, const VertexSet& z,
                                           std::uint64_t budget) {
  for (Vertex v : w)
    if (z.contains(v)) throw PreconditionError("W and Z must be disjoint");
  SearchResult<Matching> r;
  const std::size_t k = g.k();
  if (z.size() < (k - 1) * w.size()) {
    r.status = SearchStatus::exhausted;
    r.diagnostic = "Z has fewer than (k-1)|W| vertices";
    return r;
  }
  std::vector<Hypergraph> links;
  links.reserve(w.size());
  for (Vertex v : w) {
    EdgeList edges;
    for (std::uint32_t id : g.incident_edges(v)) {
      std::vector<Vertex> rest;
      bool inside = true;
      for (Vertex u : g.edge(id)) {
        if (u == v) continue;
        if (!z.contains(u)) {
          inside = false;
          break;
        }
        rest.push_back(u);
      }
      if (inside) edges.push_back(std::move(rest));
    }
    links.push_back(Hypergraph::from_edges(g.n(), k - 1, std::move(edges)));
  }
  auto reps = find_disjoint_representatives(links, budget);
  r.status = reps.status;
  r.nodes = reps.nodes;
  r.diagnostic = reps.diagnostic;
  if (reps) {
    Matching m(g.n());
    for (std::size_t i = 0; i < w.size(); ++i) {
      auto e = (*reps)[i];
      e.push_back(w[i]);
      std::sort(e.begin(), e.end());
      m.add(std::move(e));
    }
    r.value = std::move(m);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Block partition

BlockReport blockwise_almost_perfect(const Hypergraph& h, std::size_t q, std::uint64_t seed,
                                     std::uint64_t budget_per_block, unsigned threads) {
  if (q == 0 || q % h.k() != 0) throw PreconditionError("block size must be a positive multiple of k");
  if (q > h.n()) throw PreconditionError("block size exceeds n");
  std::vector<Vertex> order(h.n());
  for (std::size_t v = 0; v < h.n(); ++v) order[v] = static_cast<Vertex>(v);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  BlockReport r;
  const std::size_t count = h.n() / q;
  for (std::size_t b = 0; b < count; ++b) {
    std::vector<Vertex> block(order.begin() + static_cast<std::ptrdiff_t>(b * q),
                              order.begin() + static_cast<std::ptrdiff_t>((b + 1) * q));
    std::sort(block.begin(), block.end());
    r.blocks.push_back(std::move(block));
  }
  std::vector<MatchResult> results(count);
  std::vector<std::vector<Vertex>> maps(count);
  parallel_for(count, threads, [&](std::size_t b) {
    auto sub = induced(h, r.blocks[b]);
    results[b] = find_perfect_matching(sub.graph, budget_per_block);
    maps[b] = std::move(sub.to_original);
  });
  r.matching = Matching(h.n());
  for (std::size_t b = 0; b < count; ++b) {
    r.nodes += results[b].nodes_explored;
    if (results[b].status != MatchStatus::perfect) {
      r.failed_blocks.push_back(b);
      continue;
    }
    for (const auto& e : results[b].matching.edges()) {
      std::vector<Vertex> orig;
      for (Vertex v : e) orig.push_back(maps[b][v]);
      std::sort(orig.begin(), orig.end());
      r.matching.add(std::move(orig));
    }
  }
  r.uncovered = VertexSet::all(h.n()) - r.matching.covered();
  return r;
}

// ---------------------------------------------------------------------------
// Matching files

EdgeList read_matching(std::istream& in) {
  EdgeList out;
  std::string line;
  while (std::getline(in, line)) {
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ss(line);
    std::vector<Vertex> e;
    long long v;
    while (ss >> v) {
      if (v < 0) throw FormatError("negative vertex id in matching");
      e.push_back(static_cast<Vertex>(v));
    }
    if (!ss.eof()) throw FormatError("non-numeric token in matching line");
    if (!std::is_sorted(e.begin(), e.end()) || std::adjacent_find(e.begin(), e.end()) != e.end())
      throw FormatError("matching edge ids must be strictly ascending");
    out.push_back(std::move(e));
  }
  return out;
}

void write_matching(std::ostream& out, const EdgeList& edges) {
  for (const auto& e : edges) {
    for (std::size_t j = 0; j < e.size(); ++j) out << (j ? " " : "") << e[j];
    out << '\n';
  }
}

}  // namespace dlab
