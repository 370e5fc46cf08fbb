#pragma once

#include <array>
#include <memory>
#include <optional>
#include <vector>

#include "certilab/framework.hpp"
#include "certilab/logic.hpp"

namespace certilab {

/// Decoded spanning-tree certificate.
struct SpanningTreeCert {
  VertexId root_id = 0;
  std::optional<VertexId> parent_id;  // empty at the root
  std::uint64_t dist = 0;
};

/// Certifies nothing but carries a BFS spanning tree rooted at the minimum id:
/// root id, parent id and distance, O(log n) bits.
std::unique_ptr<Scheme> spanning_tree_scheme();

/// Spanning tree plus subtree sizes and the claimed vertex count n, checked
/// against the root's subtree size.
std::unique_ptr<Scheme> vertex_count_scheme();

/// `inner` plus a spanning tree in which every edge is a tree edge, so only
/// trees are accepted. Lifts schemes that assume their input is a tree.
std::unique_ptr<Scheme> acyclic_product(std::unique_ptr<Scheme> inner);
std::optional<SpanningTreeCert> decode_spanning_tree_cert(const Certificate& c);

/// Parent pointers read off an assignment accepted everywhere by the
/// spanning-tree scheme. Throws SoundnessViolation if they do not form a
/// spanning tree of `g`.
RootedTree reconstruct_spanning_tree(const Graph& g, const Assignment& a);

/// Witness ids, their adjacency matrix, and one spanning tree per witness.
/// Throws std::invalid_argument unless the sentence is existential prenex.
std::unique_ptr<Scheme> existential_fo_scheme(const Formula& sentence);

/// Truth classes of connected graphs as seen by quantifier depth 2.
enum class Depth2Class { kSingleVertex = 0, kClique = 1, kDominatingNotClique = 2, kNeither = 3 };

/// Class of a connected graph, from its size and degrees.
Depth2Class depth2_class(const Graph& g);

/// Truth value of the sentence on each class representative
/// (K1, K2, K_{1,2}, P4), indexed by Depth2Class.
std::array<bool, 4> depth2_classification(const Formula& sentence);

/// Certifies membership in the union of classes where the sentence holds.
/// Throws std::invalid_argument if the quantifier depth exceeds 2.
std::unique_ptr<Scheme> depth2_scheme(const Formula& sentence);

}  // namespace certilab
