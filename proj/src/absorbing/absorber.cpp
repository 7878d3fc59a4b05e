#include "dlab/absorbing.hpp"

#include <json.hpp>

#include <algorithm>
#include <map>
#include <set>

namespace dlab {

std::vector<Vertex> Absorber::vertices() const {
  std::vector<Vertex> out;
  for (const auto& e : covering) out.insert(out.end(), e.begin(), e.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

EdgeList Absorber::edges() const {
  EdgeList out = covering;
  out.insert(out.end(), noncovering.begin(), noncovering.end());
  return out;
}

namespace {

std::string show(const std::vector<Vertex>& e) {
  std::string s = "{";
  for (std::size_t i = 0; i < e.size(); ++i) s += (i ? "," : "") + std::to_string(e[i]);
  return s + "}";
}

// Union of a matching, or the first vertex hit twice.
std::optional<Vertex> collect(const EdgeList& m, std::set<Vertex>& out) {
  for (const auto& e : m)
    for (Vertex v : e)
      if (!out.insert(v).second) return v;
  return std::nullopt;
}

}  // namespace

Verdict verify_r_absorber(const Absorber& a, std::size_t k, const Hypergraph* host) {
  if (a.roots.empty() || a.roots.size() % k != 0) return Verdict::fail("root count is not a positive multiple of k");
  std::set<Vertex> roots(a.roots.begin(), a.roots.end());
  if (roots.size() != a.roots.size()) return Verdict::fail("roots are not distinct");
  std::set<std::vector<Vertex>> cover_edges;
  for (const auto* m : {&a.covering, &a.noncovering}) {
    for (const auto& e : *m) {
      std::set<Vertex> distinct(e.begin(), e.end());
      if (e.size() != k || distinct.size() != k) return Verdict::fail("edge " + show(e) + " is not a k-set");
      if (host && !host->has_edge(e)) return Verdict::fail("edge " + show(e) + " is not in the host");
    }
  }
  for (const auto& e : a.covering) {
    std::vector<Vertex> s(e);
    std::sort(s.begin(), s.end());
    cover_edges.insert(s);
  }
  for (const auto& e : a.noncovering) {
    std::vector<Vertex> s(e);
    std::sort(s.begin(), s.end());
    if (cover_edges.count(s)) return Verdict::fail("edge " + show(s) + " lies in both matchings");
  }
  std::set<Vertex> covered, uncovered_side;
  if (auto v = collect(a.covering, covered)) return Verdict::fail("covering matching hits vertex " + std::to_string(*v) + " twice");
  if (auto v = collect(a.noncovering, uncovered_side))
    return Verdict::fail("noncovering matching hits vertex " + std::to_string(*v) + " twice");
  for (Vertex r : a.roots)
    if (!covered.count(r)) return Verdict::fail("root " + std::to_string(r) + " is not covered by the covering matching");
  for (Vertex v : uncovered_side) {
    if (roots.count(v)) return Verdict::fail("noncovering matching covers root " + std::to_string(v));
    if (!covered.count(v)) return Verdict::fail("vertex " + std::to_string(v) + " lies outside the covering matching");
  }
  for (Vertex v : covered)
    if (!roots.count(v) && !uncovered_side.count(v))
      return Verdict::fail("noncovering matching misses vertex " + std::to_string(v));
  return {};
}

Verdict verify_absorber(const Absorber& a, std::size_t k, const Hypergraph* host) {
  if (a.roots.size() != k) return Verdict::fail("an absorber has exactly k roots");
  return verify_r_absorber(a, k, host);
}

bool is_k_sparse(const Absorber& a, std::size_t big_k) {
  std::set<Vertex> distinct(a.roots.begin(), a.roots.end());
  if (distinct.size() != a.roots.size()) throw SizeError("roots are not distinct");
  EdgeList family = a.edges();
  family.push_back(a.roots);
  auto g = berge_girth(family);
  return !g || *g >= big_k;
}

// ---------------------------------------------------------------------------
// Contractible absorbers

Vertex ContractibleAbsorber::y(std::size_t i, std::size_t j) const {
  std::vector<Vertex> rest;
  for (Vertex v : rooted_edges[i])
    if (v != roots[i]) rest.push_back(v);
  std::sort(rest.begin(), rest.end());
  return rest[j];
}

ContractibleAbsorber assemble_contractible(std::vector<Vertex> roots, EdgeList rooted_edges,
                                           std::vector<Absorber> subabsorbers) {
  const std::size_t k = roots.size();
  if (k < 2) throw ShapeError("need at least two roots");
  if (std::set<Vertex>(roots.begin(), roots.end()).size() != k) throw ShapeError("roots are not distinct");
  if (rooted_edges.size() != k) throw ShapeError("need one rooted edge per root");
  std::set<Vertex> used;
  for (std::size_t i = 0; i < k; ++i) {
    auto& e = rooted_edges[i];
    std::sort(e.begin(), e.end());
    if (e.size() != k || std::adjacent_find(e.begin(), e.end()) != e.end())
      throw ShapeError("rooted edge " + show(e) + " is not a k-set");
    if (!std::binary_search(e.begin(), e.end(), roots[i])) throw ShapeError("rooted edge " + show(e) + " misses its root");
    for (Vertex v : e)
      if (!used.insert(v).second) throw ShapeError("rooted edges overlap at vertex " + std::to_string(v));
  }
  if (subabsorbers.size() != k - 1) throw ShapeError("need k-1 subabsorbers");

  ContractibleAbsorber c;
  c.roots = std::move(roots);
  c.rooted_edges = std::move(rooted_edges);
  for (std::size_t j = 0; j + 1 < k; ++j) {
    const auto& h = subabsorbers[j];
    if (auto v = verify_absorber(h, k); !v) throw ShapeError("subabsorber " + std::to_string(j) + ": " + v.reason);
    for (std::size_t i = 0; i < k; ++i)
      if (h.roots[i] != c.y(i, j))
        throw ShapeError("subabsorber " + std::to_string(j) + " must be rooted on (y_1^j, ..., y_k^j)");
    std::set<Vertex> own(h.roots.begin(), h.roots.end());
    for (Vertex v : h.vertices()) {
      if (own.count(v)) continue;
      if (!used.insert(v).second)
        throw ShapeError("subabsorber " + std::to_string(j) + " reuses vertex " + std::to_string(v));
    }
  }
  c.subabsorbers = std::move(subabsorbers);
  c.assembled.roots = c.roots;
  c.assembled.covering = c.rooted_edges;
  for (const auto& h : c.subabsorbers) {
    c.assembled.covering.insert(c.assembled.covering.end(), h.noncovering.begin(), h.noncovering.end());
    c.assembled.noncovering.insert(c.assembled.noncovering.end(), h.covering.begin(), h.covering.end());
  }
  if (auto v = verify_absorber(c.assembled, k); !v) throw ShapeError("assembled absorber: " + v.reason);
  return c;
}

ContractedAbsorber contract_absorber(const ContractibleAbsorber& a) {
  const std::size_t k = a.roots.size();
  std::map<Vertex, std::size_t> root_index;  // y_i^j -> i
  std::set<Vertex> rooted;
  for (std::size_t i = 0; i < k; ++i) {
    for (Vertex v : a.rooted_edges[i]) rooted.insert(v);
    for (std::size_t j = 0; j + 1 < k; ++j) root_index[a.y(i, j)] = i;
  }
  std::vector<Vertex> rest;
  for (Vertex v : a.assembled.vertices())
    if (!rooted.count(v)) rest.push_back(v);

  ContractedAbsorber out;
  std::map<Vertex, Vertex> relabel;
  for (Vertex v : rest) {
    relabel[v] = static_cast<Vertex>(out.to_original.size());
    out.to_original.push_back(v);
  }
  for (std::size_t i = 0; i < k; ++i) {
    out.roots.push_back(static_cast<Vertex>(out.to_original.size()));
    out.to_original.push_back(a.roots[i]);
  }
  auto map_vertex = [&](Vertex v) {
    auto it = root_index.find(v);
    return it != root_index.end() ? out.roots[it->second] : relabel.at(v);
  };
  auto map_edges = [&](const EdgeList& edges) {
    EdgeList mapped;
    for (const auto& e : edges) {
      std::vector<Vertex> m;
      for (Vertex v : e) m.push_back(map_vertex(v));
      std::sort(m.begin(), m.end());
      mapped.push_back(std::move(m));
    }
    return mapped;
  };
  EdgeList all;
  for (const auto& h : a.subabsorbers) {
    Absorber part;
    part.roots = out.roots;
    part.covering = map_edges(h.covering);
    part.noncovering = map_edges(h.noncovering);
    all.insert(all.end(), part.covering.begin(), part.covering.end());
    all.insert(all.end(), part.noncovering.begin(), part.noncovering.end());
    out.parts.push_back(std::move(part));
  }
  std::size_t before = all.size();
  out.graph = Hypergraph::from_edges_merged(out.to_original.size(), k, std::move(all));
  out.merged_edges = before - out.graph.edge_count();
  return out;
}

// ---------------------------------------------------------------------------
// JSON lines

std::string absorber_to_json(const Absorber& a) {
  nlohmann::json j;
  j["roots"] = a.roots;
  j["covering"] = a.covering;
  j["noncovering"] = a.noncovering;
  j["order"] = a.covering.empty() ? 0 : a.order();
  j["sparsity_K"] = a.sparsity ? nlohmann::json(*a.sparsity) : nlohmann::json(nullptr);
  return j.dump();
}

Absorber absorber_from_json(const std::string& line) {
  try {
    auto j = nlohmann::json::parse(line);
    Absorber a;
    a.roots = j.at("roots").get<std::vector<Vertex>>();
    a.covering = j.at("covering").get<EdgeList>();
    a.noncovering = j.at("noncovering").get<EdgeList>();
    if (j.contains("sparsity_K") && !j["sparsity_K"].is_null()) a.sparsity = j["sparsity_K"].get<std::size_t>();
    return a;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad absorber record: ") + e.what());
  }
}

}  // namespace dlab
