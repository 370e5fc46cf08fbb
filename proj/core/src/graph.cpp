#include "certilab/graph.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <numeric>
#include <set>

#include <json.hpp>

#include "certilab/errors.hpp"

namespace certilab {

namespace {

// n^exponent, saturating.
VertexId id_bound(std::size_t n, unsigned exponent) {
  VertexId bound = 1;
  for (unsigned i = 0; i < exponent; ++i) {
    if (bound > std::numeric_limits<VertexId>::max() / n) {
      return std::numeric_limits<VertexId>::max();
    }
    bound *= n;
  }
  return bound;
}

}  // namespace

Graph::Graph(std::vector<VertexId> ids, const std::vector<IdEdge>& edges, Limits limits)
    : ids_(std::move(ids)) {
  if (ids_.empty()) {
    throw GraphError("graph must have at least one vertex");
  }
  std::sort(ids_.begin(), ids_.end());
  if (ids_.front() == 0) {
    throw GraphError("vertex identifiers must be positive");
  }
  if (std::adjacent_find(ids_.begin(), ids_.end()) != ids_.end()) {
    throw GraphError("duplicate vertex identifier");
  }
  if (limits.id_exponent != 0 && ids_.back() > id_bound(ids_.size(), limits.id_exponent)) {
    throw GraphError("vertex identifier " + std::to_string(ids_.back()) +
                     " outside the polynomial range n^" + std::to_string(limits.id_exponent));
  }

  const std::size_t n = ids_.size();
  std::vector<std::pair<VertexIndex, VertexIndex>> arcs;
  arcs.reserve(edges.size() * 2);
  for (const auto& [a, b] : edges) {
    if (a == b) {
      throw GraphError("self-loop at vertex " + std::to_string(a));
    }
    auto ia = find(a);
    auto ib = find(b);
    if (!ia || !ib) {
      throw GraphError("edge endpoint is not a vertex");
    }
    arcs.emplace_back(*ia, *ib);
    arcs.emplace_back(*ib, *ia);
  }
  std::sort(arcs.begin(), arcs.end());
  if (std::adjacent_find(arcs.begin(), arcs.end()) != arcs.end()) {
    throw GraphError("parallel edge");
  }
  edge_count_ = edges.size();

  offsets_.assign(n + 1, 0);
  for (const auto& arc : arcs) {
    ++offsets_[arc.first + 1];
  }
  std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
  adjacency_.reserve(arcs.size());
  for (const auto& arc : arcs) {
    adjacency_.push_back(arc.second);
  }

  std::vector<bool> all(n, true);
  if (components(*this, all).size() != 1) {
    throw GraphError("graph is disconnected");
  }
}

std::optional<VertexIndex> Graph::find(VertexId id) const {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id) {
    return std::nullopt;
  }
  return static_cast<VertexIndex>(it - ids_.begin());
}

VertexIndex Graph::index(VertexId id) const {
  auto found = find(id);
  if (!found) {
    throw GraphError("vertex " + std::to_string(id) + " is not in the graph");
  }
  return *found;
}

bool Graph::adjacent(VertexIndex u, VertexIndex v) const {
  auto nbrs = neighbors(u);
  return std::binary_search(nbrs.begin(), nbrs.end(), v);
}

std::vector<IdEdge> Graph::edges() const {
  std::vector<IdEdge> out;
  out.reserve(edge_count_);
  for (VertexIndex u = 0; u < size(); ++u) {
    for (VertexIndex v : neighbors(u)) {
      if (u < v) {
        out.emplace_back(ids_[u], ids_[v]);
      }
    }
  }
  return out;
}

std::vector<std::vector<VertexIndex>> components(const Graph& g, const std::vector<bool>& keep) {
  std::vector<std::vector<VertexIndex>> out;
  std::vector<bool> seen(g.size(), false);
  std::deque<VertexIndex> queue;
  for (VertexIndex s = 0; s < g.size(); ++s) {
    if (!keep[s] || seen[s]) {
      continue;
    }
    std::vector<VertexIndex> comp;
    seen[s] = true;
    queue.push_back(s);
    while (!queue.empty()) {
      VertexIndex v = queue.front();
      queue.pop_front();
      comp.push_back(v);
      for (VertexIndex w : g.neighbors(v)) {
        if (keep[w] && !seen[w]) {
          seen[w] = true;
          queue.push_back(w);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

Graph induced_subgraph(const Graph& g, std::span<const VertexIndex> vertices) {
  std::vector<bool> keep(g.size(), false);
  std::vector<VertexId> ids;
  for (VertexIndex v : vertices) {
    keep[v] = true;
    ids.push_back(g.id(v));
  }
  std::vector<IdEdge> edges;
  for (VertexIndex v : vertices) {
    for (VertexIndex w : g.neighbors(v)) {
      if (v < w && keep[w]) {
        edges.emplace_back(g.id(v), g.id(w));
      }
    }
  }
  return Graph(std::move(ids), edges, Graph::Limits{0});
}

Graph relabel(const Graph& g, const std::map<VertexId, VertexId>& relabel, Graph::Limits limits) {
  auto map_id = [&](VertexId id) {
    auto it = relabel.find(id);
    if (it == relabel.end()) {
      throw GraphError("relabelling misses vertex " + std::to_string(id));
    }
    return it->second;
  };
  std::vector<VertexId> ids;
  for (VertexId id : g.ids()) {
    ids.push_back(map_id(id));
  }
  std::vector<IdEdge> edges;
  for (const auto& [a, b] : g.edges()) {
    edges.emplace_back(map_id(a), map_id(b));
  }
  return Graph(std::move(ids), edges, limits);
}

namespace {

std::vector<VertexId> iota_ids(std::size_t n) {
  std::vector<VertexId> ids(n);
  std::iota(ids.begin(), ids.end(), VertexId{1});
  return ids;
}

}  // namespace

Graph make_path(std::size_t n) {
  if (n < 1) {
    throw GraphError("make_path needs n >= 1");
  }
  std::vector<IdEdge> edges;
  for (VertexId i = 1; i < n; ++i) {
    edges.emplace_back(i, i + 1);
  }
  return Graph(iota_ids(n), edges);
}

Graph make_cycle(std::size_t n) {
  if (n < 3) {
    throw GraphError("make_cycle needs n >= 3");
  }
  std::vector<IdEdge> edges;
  for (VertexId i = 1; i < n; ++i) {
    edges.emplace_back(i, i + 1);
  }
  edges.emplace_back(1, n);
  return Graph(iota_ids(n), edges);
}

Graph make_star(std::size_t leaves) {
  if (leaves < 1) {
    throw GraphError("make_star needs at least one leaf");
  }
  std::vector<IdEdge> edges;
  for (VertexId i = 2; i <= leaves + 1; ++i) {
    edges.emplace_back(1, i);
  }
  return Graph(iota_ids(leaves + 1), edges);
}

Graph make_clique(std::size_t n) {
  if (n < 1) {
    throw GraphError("make_clique needs n >= 1");
  }
  std::vector<IdEdge> edges;
  for (VertexId i = 1; i <= n; ++i) {
    for (VertexId j = i + 1; j <= n; ++j) {
      edges.emplace_back(i, j);
    }
  }
  return Graph(iota_ids(n), edges);
}

Graph parse_graph(std::string_view text, Graph::Limits limits) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("graph file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("ids") || !doc.contains("edges") ||
      !doc["ids"].is_array() || !doc["edges"].is_array()) {
    throw ParseError("graph file must be an object with \"ids\" and \"edges\" arrays");
  }
  std::vector<VertexId> ids;
  for (const auto& id : doc["ids"]) {
    if (!id.is_number_unsigned() || id.get<VertexId>() == 0) {
      throw ParseError("vertex ids must be positive integers");
    }
    ids.push_back(id.get<VertexId>());
  }
  std::vector<IdEdge> edges;
  for (const auto& e : doc["edges"]) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_unsigned() ||
        !e[1].is_number_unsigned()) {
      throw ParseError("each edge must be a 2-element array of ids");
    }
    edges.emplace_back(e[0].get<VertexId>(), e[1].get<VertexId>());
  }
  return Graph(std::move(ids), edges, limits);
}

std::string serialize_graph(const Graph& g) {
  nlohmann::json doc;
  doc["ids"] = std::vector<VertexId>(g.ids().begin(), g.ids().end());
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& [a, b] : g.edges()) {
    edges.push_back({a, b});
  }
  doc["edges"] = std::move(edges);
  return doc.dump();
}

// ---------------------------------------------------------------------------

RootedTree::RootedTree(VertexId root, const std::map<VertexId, VertexId>& parent) {
  std::set<VertexId> nodes{root};
  for (const auto& [child, par] : parent) {
    nodes.insert(child);
    nodes.insert(par);
  }
  if (parent.count(root) != 0) {
    throw GraphError("the root cannot have a parent");
  }
  nodes_.assign(nodes.begin(), nodes.end());
  if (nodes_.front() == 0) {
    throw GraphError("tree node identifiers must be positive");
  }
  root_ = index(root);
  parent_.assign(nodes_.size(), kNoParent);
  children_.assign(nodes_.size(), {});
  for (const auto& [child, par] : parent) {
    parent_[index(child)] = index(par);
  }
  for (VertexIndex v = 0; v < nodes_.size(); ++v) {
    if (v != root_ && parent_[v] == kNoParent) {
      throw GraphError("node " + std::to_string(nodes_[v]) + " has no parent");
    }
    if (parent_[v] != kNoParent) {
      children_[parent_[v]].push_back(v);
    }
  }

  // Depths by BFS from the root; any node not reached lies on a cycle.
  constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();
  depth_.assign(nodes_.size(), kUnset);
  std::deque<VertexIndex> queue{root_};
  depth_[root_] = 0;
  while (!queue.empty()) {
    VertexIndex v = queue.front();
    queue.pop_front();
    height_ = std::max(height_, depth_[v]);
    for (VertexIndex c : children_[v]) {
      depth_[c] = depth_[v] + 1;
      queue.push_back(c);
    }
  }
  for (VertexIndex v = 0; v < nodes_.size(); ++v) {
    if (depth_[v] == kUnset) {
      throw GraphError("parent relation is cyclic or does not reach the root");
    }
  }
}

std::optional<VertexIndex> RootedTree::find(VertexId id) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id);
  if (it == nodes_.end() || *it != id) {
    return std::nullopt;
  }
  return static_cast<VertexIndex>(it - nodes_.begin());
}

VertexIndex RootedTree::index(VertexId id) const {
  auto found = find(id);
  if (!found) {
    throw GraphError("node " + std::to_string(id) + " is not in the tree");
  }
  return *found;
}

std::optional<VertexIndex> RootedTree::parent(VertexIndex v) const {
  if (parent_[v] == kNoParent) {
    return std::nullopt;
  }
  return parent_[v];
}

bool RootedTree::is_ancestor_index(VertexIndex u, VertexIndex v) const {
  while (depth_[v] > depth_[u]) {
    v = parent_[v];
  }
  return u == v;
}

bool RootedTree::is_ancestor(VertexId u, VertexId v) const {
  return is_ancestor_index(index(u), index(v));
}

std::vector<VertexId> RootedTree::ancestors(VertexId v) const {
  std::vector<VertexId> out;
  VertexIndex cur = index(v);
  out.push_back(nodes_[cur]);
  while (parent_[cur] != kNoParent) {
    cur = parent_[cur];
    out.push_back(nodes_[cur]);
  }
  return out;
}

std::map<VertexId, VertexId> RootedTree::parent_map() const {
  std::map<VertexId, VertexId> out;
  for (VertexIndex v = 0; v < nodes_.size(); ++v) {
    if (parent_[v] != kNoParent) {
      out.emplace(nodes_[v], nodes_[parent_[v]]);
    }
  }
  return out;
}

}  // namespace certilab
