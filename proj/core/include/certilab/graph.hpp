#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace certilab {

/// Vertex identifier as seen by the nodes themselves: a positive integer,
/// distinct across the graph, not necessarily contiguous.
using VertexId = std::uint64_t;

/// Position of a vertex in a graph's ascending identifier order.
using VertexIndex = std::uint32_t;

using IdEdge = std::pair<VertexId, VertexId>;

/// Simple connected loopless undirected graph with distinct positive ids.
///
/// Vertices are stored in ascending id order; `VertexIndex` values refer to
/// that order. Graphs are immutable once built.
class Graph {
 public:
  struct Limits {
    /// Identifiers must satisfy id <= n^id_exponent. Zero disables the bound.
    unsigned id_exponent = 2;
  };

  /// Validates and builds. Throws GraphError on duplicate ids, non-positive
  /// ids, ids outside the polynomial range, unknown endpoints, self-loops,
  /// parallel edges, an empty vertex set or a disconnected graph.
  Graph(std::vector<VertexId> ids, const std::vector<IdEdge>& edges, Limits limits);
  Graph(std::vector<VertexId> ids, const std::vector<IdEdge>& edges)
      : Graph(std::move(ids), edges, Limits{}) {}

  [[nodiscard]] std::size_t size() const { return ids_.size(); }
  [[nodiscard]] std::size_t edge_count() const { return edge_count_; }

  [[nodiscard]] VertexId id(VertexIndex v) const { return ids_[v]; }
  [[nodiscard]] std::span<const VertexId> ids() const { return ids_; }
  [[nodiscard]] VertexId max_id() const { return ids_.back(); }

  [[nodiscard]] std::optional<VertexIndex> find(VertexId id) const;
  /// Throws GraphError when `id` is not a vertex.
  [[nodiscard]] VertexIndex index(VertexId id) const;
  [[nodiscard]] bool contains(VertexId id) const { return find(id).has_value(); }

  /// Neighbours of `v`, sorted by index (hence by id).
  [[nodiscard]] std::span<const VertexIndex> neighbors(VertexIndex v) const {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }
  [[nodiscard]] std::size_t degree(VertexIndex v) const { return offsets_[v + 1] - offsets_[v]; }
  [[nodiscard]] bool adjacent(VertexIndex u, VertexIndex v) const;

  /// Edges as id pairs (u < v), sorted lexicographically.
  [[nodiscard]] std::vector<IdEdge> edges() const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::vector<VertexId> ids_;
  std::vector<std::size_t> offsets_;
  std::vector<VertexIndex> adjacency_;
  std::size_t edge_count_ = 0;
};

/// Connected components of the subgraph induced by `keep` (a vertex mask in
/// index order). Each component is a sorted list of indices.
std::vector<std::vector<VertexIndex>> components(const Graph& g, const std::vector<bool>& keep);

/// Subgraph induced by `vertices`; throws GraphError if it is disconnected.
Graph induced_subgraph(const Graph& g, std::span<const VertexIndex> vertices);

/// Copy of `g` with every id replaced through `relabel` (must be injective).
Graph relabel(const Graph& g, const std::map<VertexId, VertexId>& relabel,
              Graph::Limits limits = {});

Graph make_path(std::size_t n);
Graph make_cycle(std::size_t n);
Graph make_star(std::size_t leaves);
Graph make_clique(std::size_t n);

/// Reads the JSON graph format: {"ids": [...], "edges": [[u, v], ...]}.
/// Throws ParseError on syntax problems and GraphError on structural ones.
Graph parse_graph(std::string_view text, Graph::Limits limits = {});

/// Canonical text: ids ascending, edges lexicographic, one line.
std::string serialize_graph(const Graph& g);

/// Rooted tree over vertex identifiers.
///
/// Nodes are kept in ascending id order so that, when the node set equals a
/// graph's vertex set, node indices and graph indices coincide.
class RootedTree {
 public:
  /// `parent` must map every non-root node to its parent; the node set is the
  /// root plus every key and value. Throws GraphError on cycles, a parent for
  /// the root, or nodes that do not reach the root.
  RootedTree(VertexId root, const std::map<VertexId, VertexId>& parent);

  [[nodiscard]] std::size_t size() const { return nodes_.size(); }
  [[nodiscard]] std::span<const VertexId> nodes() const { return nodes_; }
  [[nodiscard]] VertexId root() const { return nodes_[root_]; }
  [[nodiscard]] VertexIndex root_index() const { return root_; }
  [[nodiscard]] VertexId id(VertexIndex v) const { return nodes_[v]; }
  [[nodiscard]] std::optional<VertexIndex> find(VertexId id) const;
  [[nodiscard]] VertexIndex index(VertexId id) const;
  [[nodiscard]] bool contains(VertexId id) const { return find(id).has_value(); }

  /// Parent index, or nullopt for the root.
  [[nodiscard]] std::optional<VertexIndex> parent(VertexIndex v) const;
  [[nodiscard]] std::span<const VertexIndex> children(VertexIndex v) const { return children_[v]; }
  /// Edge distance to the root (root = 0).
  [[nodiscard]] std::size_t depth(VertexIndex v) const { return depth_[v]; }
  /// Maximum depth over all nodes, in edges.
  [[nodiscard]] std::size_t height() const { return height_; }

  /// True iff `u` lies on the path from `v` to the root. Reflexive: a node is
  /// its own ancestor. Throws GraphError for unknown ids.
  [[nodiscard]] bool is_ancestor(VertexId u, VertexId v) const;
  [[nodiscard]] bool is_ancestor_index(VertexIndex u, VertexIndex v) const;

  /// Ancestor ids of `v` from `v` itself up to the root.
  [[nodiscard]] std::vector<VertexId> ancestors(VertexId v) const;

  /// Non-root node -> parent, by id.
  [[nodiscard]] std::map<VertexId, VertexId> parent_map() const;

  friend bool operator==(const RootedTree& a, const RootedTree& b) {
    return a.nodes_ == b.nodes_ && a.root_ == b.root_ && a.parent_ == b.parent_;
  }

 private:
  static constexpr VertexIndex kNoParent = ~VertexIndex{0};

  std::vector<VertexId> nodes_;
  VertexIndex root_ = 0;
  std::vector<VertexIndex> parent_;
  std::vector<std::vector<VertexIndex>> children_;
  std::vector<std::size_t> depth_;
  std::size_t height_ = 0;
};

}  // namespace certilab
