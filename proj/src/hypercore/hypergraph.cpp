#include "dlab/hypercore.hpp"
#include "dlab/kernels.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace dlab {

std::uint64_t binomial(std::int64_t n, std::int64_t r) {
  if (r < 0 || n < 0 || r > n) return 0;
  r = std::min(r, n - r);
  std::uint64_t result = 1;
  for (std::int64_t i = 1; i <= r; ++i) {
    result = result * static_cast<std::uint64_t>(n - r + i) / static_cast<std::uint64_t>(i);
  }
  return result;
}

bool next_combination(std::vector<Vertex>& c, std::size_t n) {
  const std::size_t r = c.size();
  for (std::size_t i = r; i-- > 0;) {
    if (c[i] < n - r + i) {
      ++c[i];
      for (std::size_t j = i + 1; j < r; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

std::vector<std::vector<Vertex>> combinations(std::size_t n, std::size_t r) {
  std::vector<std::vector<Vertex>> out;
  if (r > n) return out;
  std::vector<Vertex> c(r);
  for (std::size_t i = 0; i < r; ++i) c[i] = static_cast<Vertex>(i);
  do {
    out.push_back(c);
  } while (r > 0 && next_combination(c, n));
  return out;
}

// ---------------------------------------------------------------------------

Hypergraph::Hypergraph(std::size_t n, std::size_t k) : n_(n), k_(k) {
  if (k < 1) throw SizeError("uniformity must be at least 1");
  index();
}

Hypergraph Hypergraph::build(std::size_t n, std::size_t k, EdgeList edges, bool merge) {
  if (k < 1) throw SizeError("uniformity must be at least 1");
  for (auto& e : edges) {
    if (e.size() != k)
      throw FormatError("edge of size " + std::to_string(e.size()) + " in a " + std::to_string(k) + "-graph");
    std::sort(e.begin(), e.end());
    if (std::adjacent_find(e.begin(), e.end()) != e.end()) throw FormatError("edge repeats a vertex");
    if (!e.empty() && e.back() >= n)
      throw FormatError("vertex " + std::to_string(e.back()) + " outside [0," + std::to_string(n) + ")");
  }
  std::sort(edges.begin(), edges.end());
  auto dup = std::adjacent_find(edges.begin(), edges.end());
  if (dup != edges.end()) {
    if (!merge) throw FormatError("duplicate edge");
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  }
  Hypergraph h;
  h.n_ = n;
  h.k_ = k;
  h.flat_.reserve(edges.size() * k);
  for (const auto& e : edges) h.flat_.insert(h.flat_.end(), e.begin(), e.end());
  h.index();
  return h;
}

Hypergraph Hypergraph::from_edges(std::size_t n, std::size_t k, EdgeList edges) {
  return build(n, k, std::move(edges), false);
}

Hypergraph Hypergraph::from_edges_merged(std::size_t n, std::size_t k, EdgeList edges) {
  return build(n, k, std::move(edges), true);
}

Hypergraph Hypergraph::complete(std::size_t n, std::size_t k) {
  return from_edges(n, k, combinations(n, k));
}

void Hypergraph::index() {
  words_ = std::max<std::size_t>(1, (n_ + 63) / 64);
  const std::size_t m = edge_count();
  masks_.assign(m * words_, 0);
  std::vector<std::size_t> deg(n_, 0);
  for (std::size_t i = 0; i < m; ++i) {
    for (Vertex v : edge(i)) {
      masks_[i * words_ + (v >> 6)] |= std::uint64_t{1} << (v & 63);
      ++deg[v];
    }
  }
  inc_offsets_.assign(n_ + 1, 0);
  for (std::size_t v = 0; v < n_; ++v) inc_offsets_[v + 1] = inc_offsets_[v] + deg[v];
  inc_edges_.assign(inc_offsets_[n_], 0);
  inc_masks_.assign(inc_offsets_[n_] * words_, 0);
  std::vector<std::size_t> fill(inc_offsets_.begin(), inc_offsets_.end() - 1);
  for (std::size_t i = 0; i < m; ++i) {
    for (Vertex v : edge(i)) {
      std::size_t slot = fill[v]++;
      inc_edges_[slot] = static_cast<std::uint32_t>(i);
      std::copy_n(masks_.begin() + static_cast<std::ptrdiff_t>(i * words_), words_,
                  inc_masks_.begin() + static_cast<std::ptrdiff_t>(slot * words_));
    }
  }
}

EdgeList Hypergraph::edge_list() const {
  EdgeList out;
  out.reserve(edge_count());
  for (std::size_t i = 0; i < edge_count(); ++i) {
    auto e = edge(i);
    out.emplace_back(e.begin(), e.end());
  }
  return out;
}

std::optional<std::size_t> Hypergraph::find_edge(std::span<const Vertex> sorted) const {
  if (sorted.size() != k_) return std::nullopt;
  std::size_t lo = 0, hi = edge_count();
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    auto e = edge(mid);
    if (std::lexicographical_compare(e.begin(), e.end(), sorted.begin(), sorted.end())) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  if (lo < edge_count() && std::equal(sorted.begin(), sorted.end(), edge(lo).begin())) return lo;
  return std::nullopt;
}

bool Hypergraph::has_edge(std::span<const Vertex> vertices) const {
  std::vector<Vertex> sorted(vertices.begin(), vertices.end());
  std::sort(sorted.begin(), sorted.end());
  return find_edge(sorted).has_value();
}

std::vector<std::uint64_t> Hypergraph::mask_of(std::span<const Vertex> vertices) const {
  std::vector<std::uint64_t> q(words_, 0);
  for (Vertex v : vertices) {
    if (v >= n_) throw SizeError("vertex " + std::to_string(v) + " outside the hypergraph");
    q[v >> 6] |= std::uint64_t{1} << (v & 63);
  }
  return q;
}

std::vector<std::uint64_t> Hypergraph::mask_of(const VertexSet& s) const {
  return mask_of(s.members());
}

// ---------------------------------------------------------------------------
// Degrees

std::size_t degree(const Hypergraph& h, std::span<const Vertex> s) {
  if (s.size() >= h.k()) throw SizeError("degree needs |S| <= k-1");
  if (s.empty()) return h.edge_count();
  auto q = h.mask_of(s);
  // Scanning only the edges of the rarest member keeps this cheap on large graphs.
  Vertex pivot = *std::min_element(s.begin(), s.end(), [&](Vertex a, Vertex b) {
    return h.vertex_degree(a) < h.vertex_degree(b);
  });
  return kernels::count_supersets(h.incident_masks(pivot), h.words(), q);
}

std::size_t degree(const Hypergraph& h, const VertexSet& s) {
  auto m = s.members();
  return degree(h, std::span<const Vertex>(m));
}

std::size_t subset_rank(std::span<const Vertex> sorted) {
  std::size_t rank = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i)
    rank += static_cast<std::size_t>(binomial(sorted[i], static_cast<std::int64_t>(i + 1)));
  return rank;
}

std::vector<std::uint32_t> all_d_degrees(const Hypergraph& h, std::size_t d) {
  if (d < 1 || d >= h.k() || h.n() < d) throw SizeError("min_d_degree needs 1 <= d <= k-1 and n >= d");
  std::vector<std::uint32_t> deg(binomial(static_cast<std::int64_t>(h.n()), static_cast<std::int64_t>(d)), 0);
  std::vector<Vertex> pick(d);
  for (std::size_t i = 0; i < h.edge_count(); ++i) {
    auto e = h.edge(i);
    std::vector<Vertex> idx(d);
    for (std::size_t j = 0; j < d; ++j) idx[j] = static_cast<Vertex>(j);
    do {
      for (std::size_t j = 0; j < d; ++j) pick[j] = e[idx[j]];
      ++deg[subset_rank(pick)];
    } while (next_combination(idx, h.k()));
  }
  return deg;
}

MinDegree min_d_degree(const Hypergraph& h, std::size_t d) {
  auto deg = all_d_degrees(h, d);
  MinDegree best;
  bool first = true;
  std::vector<Vertex> c(d);
  for (std::size_t i = 0; i < d; ++i) c[i] = static_cast<Vertex>(i);
  do {
    std::size_t v = deg[subset_rank(c)];
    if (first || v < best.value) {
      best.value = v;
      best.witness = c;
      first = false;
    }
  } while (next_combination(c, h.n()));
  return best;
}

// ---------------------------------------------------------------------------
// Subgraphs

Induced induced(const Hypergraph& h, std::span<const Vertex> s) {
  VertexSet set(h.n(), s);
  return induced(h, set);
}

Induced induced(const Hypergraph& h, const VertexSet& s) {
  Induced out;
  out.to_original = s.members();
  std::vector<Vertex> relabel(h.n(), static_cast<Vertex>(-1));
  for (std::size_t i = 0; i < out.to_original.size(); ++i) relabel[out.to_original[i]] = static_cast<Vertex>(i);
  EdgeList edges;
  auto take = [&](std::span<const Vertex> e) {
    if (!std::all_of(e.begin(), e.end(), [&](Vertex v) { return s.contains(v); })) return;
    std::vector<Vertex> ne;
    ne.reserve(e.size());
    for (Vertex v : e) ne.push_back(relabel[v]);
    edges.push_back(std::move(ne));
  };
  std::size_t local = 0;
  for (Vertex v : out.to_original) local += h.vertex_degree(v);
  if (local < h.edge_count()) {
    // Small S: every edge inside S is reached from its lowest vertex.
    for (Vertex v : out.to_original)
      for (std::uint32_t id : h.incident_edges(v))
        if (h.edge(id)[0] == v) take(h.edge(id));
  } else {
    for (std::size_t i = 0; i < h.edge_count(); ++i) take(h.edge(i));
  }
  out.graph = Hypergraph::from_edges(out.to_original.size(), h.k(), std::move(edges));
  return out;
}

Induced remove_vertices(const Hypergraph& h, const VertexSet& removed) {
  VertexSet keep = VertexSet::all(h.n()) - removed;
  return induced(h, keep);
}

Hypergraph link(const Hypergraph& h, std::span<const Vertex> s) {
  if (s.size() >= h.k()) throw SizeError("link needs |S| <= k-1");
  if (s.empty()) return h;
  VertexSet set(h.n(), s);
  EdgeList edges;
  Vertex pivot = s.front();
  for (std::uint32_t id : h.incident_edges(pivot)) {
    auto e = h.edge(id);
    if (!std::all_of(s.begin(), s.end(), [&](Vertex v) { return std::find(e.begin(), e.end(), v) != e.end(); }))
      continue;
    std::vector<Vertex> rest;
    for (Vertex v : e)
      if (!set.contains(v)) rest.push_back(v);
    edges.push_back(std::move(rest));
  }
  return Hypergraph::from_edges(h.n(), h.k() - s.size(), std::move(edges));
}

Hypergraph edge_subgraph(const Hypergraph& h, std::span<const std::size_t> edge_ids) {
  EdgeList edges;
  for (std::size_t id : edge_ids) {
    auto e = h.edge(id);
    edges.emplace_back(e.begin(), e.end());
  }
  return Hypergraph::from_edges(h.n(), h.k(), std::move(edges));
}

// ---------------------------------------------------------------------------
// .khg

Hypergraph read_khg(std::istream& in) {
  std::string line;
  std::size_t k = 0, n = 0, m = 0;
  bool header = false;
  EdgeList edges;
  std::vector<Vertex> previous;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ss(line);
    if (!header) {
      std::string magic;
      int version = 0;
      if (!(ss >> magic >> version >> k >> n >> m) || magic != "khg")
        throw FormatError("expected header 'khg 1 <k> <n> <m>'");
      if (version != 1) throw FormatError("unsupported khg version " + std::to_string(version));
      header = true;
      continue;
    }
    std::vector<Vertex> e;
    long long v;
    while (ss >> v) {
      if (v < 0) throw FormatError("negative vertex id");
      e.push_back(static_cast<Vertex>(v));
    }
    if (!ss.eof()) throw FormatError("non-numeric token in edge line");
    if (e.size() != k) throw FormatError("edge line with " + std::to_string(e.size()) + " ids, expected " + std::to_string(k));
    if (!std::is_sorted(e.begin(), e.end()) || std::adjacent_find(e.begin(), e.end()) != e.end())
      throw FormatError("edge ids must be strictly ascending");
    if (!previous.empty() && !(previous < e)) throw FormatError("edges must be in strictly lexicographic order");
    previous = e;
    edges.push_back(std::move(e));
  }
  if (!header) throw FormatError("missing khg header");
  if (edges.size() != m)
    throw FormatError("header announces " + std::to_string(m) + " edges, found " + std::to_string(edges.size()));
  return Hypergraph::from_edges(n, k, std::move(edges));
}

void write_khg(std::ostream& out, const Hypergraph& h) {
  out << "khg 1 " << h.k() << ' ' << h.n() << ' ' << h.edge_count() << '\n';
  for (std::size_t i = 0; i < h.edge_count(); ++i) {
    auto e = h.edge(i);
    for (std::size_t j = 0; j < e.size(); ++j) out << (j ? " " : "") << e[j];
    out << '\n';
  }
}

Hypergraph load_khg(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  return read_khg(in);
}

void save_khg(const std::string& path, const Hypergraph& h) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path);
  write_khg(out, h);
}

}  // namespace dlab
