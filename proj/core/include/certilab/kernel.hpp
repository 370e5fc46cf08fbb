#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "certilab/bits.hpp"
#include "certilab/logic.hpp"
#include "certilab/treedepth.hpp"

namespace certilab {

/// Adjacency of a vertex to its proper ancestors, root first: bit j tells
/// whether the vertex is adjacent to its ancestor at edge-depth j.
using AncestorVector = std::vector<bool>;

/// Throws GraphError if `m` is not a model of `g` or `v` is out of range.
AncestorVector ancestor_vector(const Graph& g, const Model& m, VertexIndex v);

/// Index into a TypeTable.
using TypeCode = std::uint32_t;

/// One type: the node's depth and ancestor vector, plus how many children it
/// has of each type. `children` is sorted by code, counts are positive.
struct TypeEntry {
  std::size_t depth = 0;
  AncestorVector vector;
  std::vector<std::pair<TypeCode, std::uint32_t>> children;

  friend bool operator==(const TypeEntry&, const TypeEntry&) = default;
};

/// Hash-consed types. Canonical order: deeper entries first, then by ancestor
/// vector, then by the (child code, count) list. Child codes always point to
/// earlier entries, so a type is fully described by its code and the table,
/// and two vertices have equal types iff they get equal codes.
struct TypeTable {
  std::vector<TypeEntry> entries;

  friend bool operator==(const TypeTable&, const TypeTable&) = default;
};

/// Binary layout: gamma(entry count); per entry gamma(depth), the vector bits,
/// gamma(group count) and per group the child code on
/// bit_width_for(entries - 1) bits and gamma(count).
void write_type_table(BitWriter& out, const TypeTable& table);
/// Fails the reader on malformed input or a table that is not canonical
/// (strict order, child depth = depth + 1, counts in [1, max_count]).
TypeTable read_type_table(BitReader& in, std::uint32_t max_count);

/// Id-free rendering of the type tree below `code`, children sorted.
std::string type_string(const TypeTable& table, TypeCode code);

/// Number of nodes of the tree described by `code`; saturates at `cap` + 1.
std::uint64_t expanded_size(const TypeTable& table, TypeCode code, std::uint64_t cap);

struct ExpandedType {
  Graph graph;
  RootedTree model;
};

/// Graph described by the type `code` of a root: one node per tree node, ids
/// 1..m in preorder with children by code, edges given by the ancestor
/// vectors. Throws GraphError if the result is disconnected or larger than
/// `cap`, or if `code` is not a depth-0 entry.
ExpandedType expand_type(const TypeTable& table, TypeCode code, std::size_t cap);

struct KernelResult {
  Graph kernel;
  Model kernel_model;
  std::set<VertexId> pruned;  // roots of the removed subtrees
  /// End type of every vertex of G, by vertex index.
  std::vector<TypeCode> end_types;
  TypeTable table;
  std::vector<bool> kept;  // by vertex index of G
};

/// Deepest-first valid pruning: parents are handled by decreasing depth, and a
/// parent with more than k children of one type loses the subtrees of the
/// largest-id surplus children. Throws GraphError unless `m` is a coherent
/// model of `g`, and std::invalid_argument when k = 0.
KernelResult k_reduce(const Graph& g, const Model& m, std::size_t k);

/// f_d(k, t) with f_t = 2^t and f_d = 2^d (k + 1)^{f_{d+1}}, exact. nullopt
/// when the value needs more than `max_bits` bits.
std::optional<boost::multiprecision::cpp_int> type_count_bound(std::size_t d, std::size_t k,
                                                                std::size_t t,
                                                                std::size_t max_bits = 1U << 16);

/// For every pruned child u of a kept vertex v: v keeps exactly k children
/// whose end type is the end type of u.
bool lemma_same_type_check(const KernelResult& result, const Graph& g, const Model& m, std::size_t k);

/// "No t distinct vertices form a path": true iff the graph has no P_t
/// subgraph, which for paths is the same as having no P_t minor.
/// Quantifier depth t. Throws std::invalid_argument for t < 2.
Formula pt_minor_formula(std::size_t t);

}  // namespace certilab
