#include "dlab/templates.hpp"

#include <algorithm>
#include <set>

namespace dlab {

AbsorbingStructure build_absorbing_structure(const Hypergraph& host, const ResilientTemplate& t,
                                             const std::vector<Vertex>& embed_z, const RootedSearchConfig& finder) {
  if (host.k() != t.k) throw PreconditionError("host and template uniformity differ");
  if (embed_z.size() != t.r) throw PreconditionError("embed_Z must have exactly r vertices");
  if (host.n() < t.vertex_count()) throw PreconditionError("host has fewer vertices than the template");
  AbsorbingStructure s;
  s.tmpl = t;
  s.host_n = host.n();
  s.x = VertexSet(host.n());
  VertexSet used(host.n());
  for (Vertex v : embed_z) {
    if (v >= host.n()) throw PreconditionError("embed_Z vertex outside the host");
    if (used.contains(v)) throw PreconditionError("embed_Z repeats a vertex");
    used.insert(v);
  }
  s.z = embed_z;
  s.embed.assign(t.vertex_count(), 0);
  std::vector<char> in_z(t.vertex_count(), 0);
  for (std::size_t i = 0; i < t.r; ++i) {
    s.embed[t.z[i]] = embed_z[i];
    in_z[t.z[i]] = 1;
  }
  Vertex next = 0;
  for (std::size_t v = 0; v < t.vertex_count(); ++v) {
    if (in_z[v]) continue;
    while (used.contains(next)) ++next;
    s.embed[v] = next;
    used.insert(next);
  }

  for (std::size_t i = 0; i < t.edge_count(); ++i) {
    std::vector<Vertex> roots;
    for (Vertex v : t.graph.edge(i)) roots.push_back(s.embed[v]);
    VertexSet forbidden = used;
    for (Vertex r : roots) forbidden.erase(r);
    RootedSearchConfig cfg = finder;
    cfg.seed = derive_seed(finder.seed, i);
    auto a = find_rooted_absorber(host, roots, forbidden, cfg);
    if (!a) throw PlacementFailed(i, a.diagnostic);
    for (Vertex v : a->vertices()) used.insert(v);
    s.placements.push_back(*a.value);
  }
  s.x = used;
  return s;
}

EdgeList structure_matching_after_removal(const AbsorbingStructure& s, const VertexSet& w_removed) {
  const auto& t = s.tmpl;
  std::vector<Vertex> w_template;
  for (std::size_t i = 0; i < t.r; ++i)
    if (w_removed.contains(s.z[i])) w_template.push_back(t.z[i]);
  if (w_template.size() != w_removed.size()) throw PreconditionError("removed vertices must lie in Z");
  if (!removal_feasible(t, w_template.size()))
    throw PreconditionError("removal of " + std::to_string(w_template.size()) +
                            " vertices is outside the guarantee (fewer than r/2, divisibility)");
  auto m = template_matching(t, w_template);
  std::vector<char> in_m(t.edge_count(), 0);
  for (const auto& e : m) {
    std::vector<Vertex> sorted(e);
    std::sort(sorted.begin(), sorted.end());
    auto id = t.graph.find_edge(sorted);
    if (!id) throw TemplateMatchingFailed("template matching used a non-edge");
    in_m[*id] = 1;
  }
  EdgeList out;
  for (std::size_t i = 0; i < t.edge_count(); ++i) {
    const auto& a = s.placements[i];
    const auto& part = in_m[i] ? a.covering : a.noncovering;
    out.insert(out.end(), part.begin(), part.end());
  }
  // Independent check: disjoint and covering X - W exactly.
  VertexSet seen(s.host_n);
  for (const auto& e : out)
    for (Vertex v : e) {
      if (seen.contains(v)) throw Error("structure matching overlaps at vertex " + std::to_string(v));
      seen.insert(v);
    }
  for (Vertex v : s.x.members())
    if (seen.contains(v) == w_removed.contains(v)) throw Error("structure matching misses or covers the wrong vertex");
  if (seen.size() + w_removed.size() != s.x.size()) throw Error("structure matching leaves X");
  return out;
}

}  // namespace dlab
