#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "certilab/automata.hpp"
#include "certilab/bits.hpp"
#include "certilab/framework.hpp"
#include "certilab/graph.hpp"

namespace certilab {

/// A graph G(s_A, s_B) split for the two-party simulation. V_alpha and V_beta
/// carry ids 1..r. Alice owns V_A and V_alpha (including u when present), Bob
/// owns V_B and V_beta.
struct GadgetLayout {
  Graph graph;
  std::vector<VertexId> v_a;
  std::vector<VertexId> v_alpha;
  std::vector<VertexId> v_beta;
  std::vector<VertexId> v_b;
  std::optional<VertexId> u;  // member of v_alpha
  std::size_t r = 0;
};

/// Edges only inside V_A, inside V_B, or in V_A x V_alpha, V_alpha x V_alpha,
/// V_alpha x V_beta, V_beta x V_beta, V_beta x V_B; the four parts partition
/// the vertex set; V_alpha and V_beta carry exactly the ids 1..r.
bool check_layout(const GadgetLayout& layout);

/// Permutation pi of {0..n-1}; the matching pairs i with pi[i].
using Matching = std::vector<std::size_t>;

/// floor(log2(n!)), the longest string bitstring_to_matching accepts.
std::size_t matching_capacity(std::size_t n);

/// The string read as a binary integer (first bit most significant), decoded
/// as a Lehmer code. Every string of length matching_capacity(n) decodes;
/// longer ones only when their value is below n!. Throws
/// std::invalid_argument otherwise.
Matching bitstring_to_matching(const Bits& s, std::size_t n);

/// Two rows of n four-vertex paths A-alpha-beta-B, u adjacent to every alpha
/// vertex, Alice's matching between the two A rows and Bob's between the two
/// B rows. `subdivision` extra vertices go on every A-alpha and beta-B edge
/// (they join V_alpha and V_beta). Ids: V_alpha row by row, then V_beta,
/// then u with id r; then V_A and V_B.
GadgetLayout treedepth_gadget(const Bits& s_a, const Bits& s_b, std::size_t n, std::size_t subdivision = 0);

/// Number of rooted trees with m nodes and height at most `height`, up to
/// isomorphism.
boost::multiprecision::cpp_int rooted_tree_count(std::size_t m, std::size_t height);

/// Trees of a given size and height bound in a fixed total order. Node ids
/// are 1..m in preorder, root 1.
RootedTree unrank_tree(std::size_t m, std::size_t height, const boost::multiprecision::cpp_int& rank);
/// Inverse of unrank_tree. Throws std::invalid_argument if the tree is
/// higher than `height`.
boost::multiprecision::cpp_int rank_tree(const RootedTree& t, std::size_t height);

/// Smallest m with rooted_tree_count(m, height) >= 2^len, or nullopt when
/// none exists below 64 nodes.
std::optional<std::size_t> tree_size_for(std::size_t len, std::size_t height);

/// unrank_tree(tree_size_for(|s|), height, value of s). Throws
/// std::invalid_argument when the family has fewer than 2^|s| trees.
RootedTree bitstring_to_tree(const Bits& s, std::size_t height);

/// Path a-alpha-beta-b with the tree of s_A hanging from a and the tree of
/// s_B from b. Ids: alpha 1, beta 2, then A's tree, then B's.
GadgetLayout automorphism_gadget(const Bits& s_a, const Bits& s_b, std::size_t height);

inline constexpr std::size_t kAutomorphismCap = 16;

/// Backtracking over vertex maps that preserve degrees and adjacency and fix
/// no vertex. Throws CapExceeded above `cap` vertices.
bool has_fpf_automorphism(const Graph& g, std::size_t cap = kAutomorphismCap);

/// Automaton accepting exactly the trees isomorphic to `t` (unrooted, since
/// the tree scheme lets the prover pick the root). One state per subtree
/// shape of `t` rooted at its root. Throws CapExceeded past kRunStateCap
/// shapes.
UopAutomaton isomorphic_to(const RootedTree& t);

using GadgetFamily = std::function<GadgetLayout(const Bits& s_a, const Bits& s_b)>;

struct ProtocolOptions {
  unsigned q = 1;                            // certificate bits per vertex
  std::size_t exhaustive_prover_bits = 16;   // r * q up to this: every s_P
  std::uint64_t sampled_prover_strings = 4096;
  std::size_t max_side_bits = 20;            // q * |V_A| and q * |V_B|
  std::uint64_t seed = kDefaultSeed;
};

struct ProtocolResult {
  bool accepted = false;
  bool exhaustive = false;  // search over prover strings was complete, so the verdict is exact
  std::uint64_t prover_strings = 0;
  std::optional<Bits> witness;  // accepting s_P
};

/// Alice's verdict on a prover string: some q-bit labeling of V_A makes every
/// vertex of V_A and V_alpha accept, with V_alpha and V_beta labelled by s_P
/// (vertex with id i gets bits [(i-1) q, i q)). Her views are read from
/// family(s_A, s_A), which agrees with G(s_A, s_B) around her vertices.
/// Throws CapExceeded when q * |V_A| exceeds `max_side_bits`.
bool alice_accepts(const Scheme& s, const GadgetFamily& family, const Bits& s_a, const Bits& s_p, unsigned q,
                   std::size_t max_side_bits = 20);
bool bob_accepts(const Scheme& s, const GadgetFamily& family, const Bits& s_b, const Bits& s_p, unsigned q,
                 std::size_t max_side_bits = 20);

/// Nondeterministic two-party protocol for equality built from a scheme with
/// q-bit certificates: accept iff some prover string makes both sides accept.
/// Throws CapExceeded when a side exceeds max_side_bits.
ProtocolResult simulate_cc_protocol(const Scheme& s, const GadgetFamily& family, const Bits& s_a, const Bits& s_b,
                                    const ProtocolOptions& options = {});

/// The prover string an assignment of G(s_A, s_B) induces on V_alpha and
/// V_beta. Throws std::invalid_argument unless those certificates have q bits.
Bits prover_string(const GadgetLayout& layout, const Assignment& a, unsigned q);

}  // namespace certilab
