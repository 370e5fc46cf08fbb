#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "certilab/graph.hpp"

namespace certilab {

/// Elimination tree (treedepth model) of a graph: a rooted tree on the
/// graph's vertex set where every edge joins an ancestor/descendant pair.
///
/// Two depth conventions are exposed. `level` counts vertices on the path to
/// the root (root = 1); `depth` counts edges (root = 0). A model with L levels
/// has edge-depth L - 1.
class Model {
 public:
  /// Throws GraphError if `tree` is not a model of `g`.
  Model(const Graph& g, RootedTree tree);

  [[nodiscard]] const RootedTree& tree() const { return tree_; }
  [[nodiscard]] std::size_t depth(VertexIndex v) const { return tree_.depth(v); }
  [[nodiscard]] std::size_t level(VertexIndex v) const { return tree_.depth(v) + 1; }
  [[nodiscard]] std::size_t levels() const { return tree_.height() + 1; }
  [[nodiscard]] std::size_t edge_depth() const { return tree_.height(); }

  friend bool operator==(const Model&, const Model&) = default;

 private:
  RootedTree tree_;
};

bool is_model(const Graph& g, const RootedTree& tree);

/// True iff every non-root vertex has a vertex of its subtree adjacent to its
/// parent. Throws GraphError if `tree` is not a model of `g`.
bool is_coherent(const Graph& g, const RootedTree& tree);
inline bool is_coherent(const Graph& g, const Model& m) { return is_coherent(g, m.tree()); }

struct TreedepthResult {
  std::size_t levels;
  std::size_t edge_depth;
  Model witness;
};

inline constexpr std::size_t kTreedepthCap = 20;
inline constexpr std::size_t kCopsCap = 26;

/// Exact treedepth by memoised recursion over connected vertex subsets:
/// levels(S) = 1 + min over roots v of max over components C of S - v of
/// levels(C). Ties go to the smallest id. Throws CapExceeded above `cap`.
TreedepthResult treedepth_exact(const Graph& g, std::size_t cap = kTreedepthCap);

/// Minimum number of immobile cops that catch a visible robber who may move
/// freely (avoiding placed cops) once the next cop position is announced.
/// Decided by game-tree search with iterative deepening on the cop count.
/// Throws CapExceeded above `cap` vertices.
std::size_t cops_robber_number(const Graph& g, std::size_t cap = kCopsCap);

/// Repeatedly re-attaches a subtree that does not touch its parent to its
/// lowest ancestor adjacent to the subtree, until the model is coherent.
/// Every move lowers the sum of depths, and the height never grows.
Model make_coherent(const Graph& g, const Model& m);

/// A coherent model with at most `max_levels` levels, or nullopt when the
/// treedepth exceeds it. Uses the exact oracle (hence its cap).
std::optional<Model> coherent_model(const Graph& g, std::size_t max_levels,
                                    std::size_t cap = kTreedepthCap);

/// Coherent model for graphs beyond the exact cap: recursively roots each
/// component at the centroid of a BFS spanning tree. Optimal on paths, not in
/// general.
Model separator_model(const Graph& g);

/// Model file: {"root": id, "parent": {"id": id, ...}}.
std::string serialize_model(const RootedTree& tree);
RootedTree parse_model(std::string_view text);

}  // namespace certilab
