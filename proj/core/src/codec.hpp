#pragma once

// Field codecs shared by the certificate formats. Every certificate opens with
// the Elias-gamma coded width w of its identifier fields; ids, distances and
// counts are then written on w bits.

#include <cstdint>
#include <optional>
#include <vector>

#include "certilab/bits.hpp"
#include "certilab/graph.hpp"

namespace certilab::detail {

inline constexpr unsigned kMaxFieldWidth = 63;

inline unsigned id_width(const Graph& g) { return bit_width_for(g.max_id()); }

inline void write_width(BitWriter& out, unsigned w) { out.gamma(w); }

/// Reads w and fails the reader unless 1 <= w <= kMaxFieldWidth.
inline unsigned read_width(BitReader& in) {
  std::uint64_t w = in.gamma();
  if (w == 0 || w > kMaxFieldWidth) {
    in.fail();
    return 1;
  }
  return static_cast<unsigned>(w);
}

/// A vertex's entry in a rooted spanning tree: parent pointer and hop count.
struct TreePointer {
  bool is_root = false;
  VertexId parent = 0;
  std::uint64_t dist = 0;

  friend bool operator==(const TreePointer&, const TreePointer&) = default;
};

inline void write_pointer(BitWriter& out, const TreePointer& p, unsigned w) {
  out.bit(p.is_root);
  if (!p.is_root) {
    out.uint(p.parent, w);
  }
  out.uint(p.dist, w);
}

inline TreePointer read_pointer(BitReader& in, unsigned w) {
  TreePointer p;
  p.is_root = in.bit();
  if (!p.is_root) {
    p.parent = in.uint(w);
  }
  p.dist = in.uint(w);
  return p;
}

struct PointerNeighbor {
  VertexId id;
  TreePointer pointer;
};

/// Local correctness of a tree pointer: the root is `root` at distance 0;
/// anyone else points to a neighbour whose distance is one less.
inline bool pointer_ok(VertexId self, VertexId root, const TreePointer& own,
                       const std::vector<PointerNeighbor>& tree_neighbors) {
  if (own.is_root) {
    return self == root && own.dist == 0;
  }
  if (self == root || own.dist == 0 || own.parent == self) {
    return false;
  }
  for (const auto& n : tree_neighbors) {
    if (n.id == own.parent && n.pointer.dist + 1 == own.dist) {
      return true;
    }
  }
  return false;
}

/// BFS tree inside `within` (all vertices when empty) from `root`; each parent
/// is the smallest-id neighbour one step closer.
struct BfsTree {
  std::vector<std::optional<VertexIndex>> parent;
  std::vector<std::uint64_t> dist;
  std::vector<bool> reached;
};

BfsTree bfs_tree(const Graph& g, VertexIndex root, const std::vector<bool>& within = {});

inline TreePointer pointer_of(const Graph& g, const BfsTree& t, VertexIndex v) {
  TreePointer p;
  p.is_root = !t.parent[v].has_value();
  p.parent = p.is_root ? 0 : g.id(*t.parent[v]);
  p.dist = t.dist[v];
  return p;
}

}  // namespace certilab::detail
