#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "certilab/graph.hpp"

namespace certilab {

/// Isomorphism-invariant code of a graph: vertex count followed by the upper
/// triangle of the adjacency matrix under a canonical vertex order. Found by
/// colour refinement plus individualisation (twin cells are branched once).
std::vector<std::uint64_t> canonical_code(const Graph& g);

bool isomorphic(const Graph& a, const Graph& b);

/// Every connected graph on `n` vertices up to isomorphism, ids 1..n.
/// Built by adding a vertex to each connected graph on n - 1 vertices, which
/// reaches every graph because removing a spanning-tree leaf keeps it
/// connected. Counts: 1, 1, 2, 6, 21, 112, 853, 11117 for n = 1..8.
std::vector<Graph> connected_graphs(std::size_t n);

/// Every tree on `n` vertices up to isomorphism, ids 1..n.
std::vector<Graph> free_trees(std::size_t n);

/// Every rooted tree on `n` nodes up to isomorphism, ids 1..n in preorder
/// (root = 1).
std::vector<RootedTree> rooted_trees(std::size_t n);

/// Graph whose vertices and edges are those of a rooted tree.
Graph tree_graph(const RootedTree& t);

/// Random spanning tree (uniform attachment) plus every other pair with
/// probability `p`. Ids are a random permutation of 1..n.
Graph random_connected_graph(std::size_t n, double p, std::mt19937_64& rng);

struct BoundedTreedepthSample {
  Graph graph;
  RootedTree model;  // coherent, edge-depth <= t
};

/// Random graph with a known coherent model of edge-depth at most `t`: a random
/// rooted tree of that depth, each vertex joined to its parent and to every
/// other proper ancestor with probability `p`, ids shuffled over 1..n.
BoundedTreedepthSample random_bounded_td_graph(std::size_t n, std::size_t t, double p,
                                               std::mt19937_64& rng);

}  // namespace certilab
