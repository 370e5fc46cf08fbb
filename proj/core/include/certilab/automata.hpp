#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "certilab/framework.hpp"
#include "certilab/graph.hpp"

namespace certilab {

/// Boolean combination of comparisons between sums of one state's child
/// count and constants, e.g. (and (<= 2 (var q)) (not (<= (var p) 0))).
/// Every comparison mentions exactly one state.
class UopConstraint {
 public:
  enum class Kind { kLe, kAnd, kNot, kVar, kConst, kPlus };

  struct Node {
    Kind kind = Kind::kConst;
    std::size_t state = 0;    // kVar
    std::uint64_t value = 0;  // kConst
    std::vector<Node> kids;
  };

  /// Parses the s-expression grammar over the given state names. Throws
  /// ParseError on syntax errors, unknown states and non-unary comparisons.
  static UopConstraint parse(std::string_view text, const std::vector<std::string>& states);

  static UopConstraint at_least(std::size_t state, std::uint64_t c);
  static UopConstraint at_most(std::size_t state, std::uint64_t c);
  static UopConstraint conj(std::vector<UopConstraint> parts);
  static UopConstraint neg(UopConstraint c);
  static UopConstraint disj(std::vector<UopConstraint> parts);
  /// Always true (0 <= y_state).
  static UopConstraint always(std::size_t state = 0);

  /// Counts by state index; missing entries count as zero.
  [[nodiscard]] bool eval(const std::vector<std::uint64_t>& counts) const;
  /// Sum of the constants; counts above it are indistinguishable.
  [[nodiscard]] std::uint64_t constant_sum() const;
  [[nodiscard]] std::string to_string(const std::vector<std::string>& states) const;
  [[nodiscard]] const Node& root() const { return root_; }

 private:
  explicit UopConstraint(Node root);
  Node root_;
};

struct UopAutomaton {
  std::vector<std::string> states;
  std::vector<std::string> labels;
  std::vector<bool> accepting;                   // by state
  std::vector<std::vector<UopConstraint>> delta;  // [state][label]

  [[nodiscard]] std::size_t state_index(std::string_view name) const;
  [[nodiscard]] std::size_t label_index(std::string_view name) const;
};

/// Throws ParseError on malformed files or a delta that is not total.
UopAutomaton parse_automaton(std::string_view json);
/// Canonical JSON text (states, labels, accepting, delta in state/label order).
std::string serialize_automaton(const UopAutomaton& a);

/// Count over string names, absent = 0.
bool eval_constraint(const UopConstraint& c, const UopAutomaton& a,
                     const std::map<std::string, std::uint64_t>& counts);

inline constexpr std::size_t kRunStateCap = 8;
inline constexpr std::uint64_t kRunCountSpaceCap = 1'000'000;

/// Accepting run on a labeled rooted tree: a state per node index, or nullopt.
/// Bottom-up, each node gets the set of states it can take; the multiset
/// condition is decided over child count vectors capped past every constant
/// of the automaton. Throws CapExceeded when the automaton has more than
/// kRunStateCap states or the capped count space exceeds kRunCountSpaceCap.
std::optional<std::vector<std::size_t>> find_run(const RootedTree& tree, const std::vector<std::size_t>& labels,
                                                 const UopAutomaton& a);

/// True iff `run` is an accepting run of `a` on the labeled tree.
bool is_accepting_run(const RootedTree& tree, const std::vector<std::size_t>& labels, const UopAutomaton& a,
                      const std::vector<std::size_t>& run);

/// Catalog, all over the single label "v".
/// Rooted height at most d; states h0..hd track the exact height.
UopAutomaton height_at_most(std::size_t d);
/// Every node has at most c children; one state.
UopAutomaton max_children(std::size_t c);
/// Some node has at least c children; states "none" and "found".
UopAutomaton exists_heavy_vertex(std::size_t c);

/// 16-bit FNV-1a digest of the canonical serialization.
std::uint16_t automaton_fingerprint(const UopAutomaton& a);

/// How each certificate names the automaton.
enum class AutomatonMode { kFingerprint, kFullDescription, kCompact };

/// Rooted tree from the graph rooted at `root`; throws GraphError unless `g`
/// is a tree.
RootedTree root_tree(const Graph& g, VertexId root);

/// Certifies, on trees, that some rooting has an accepting run (every vertex
/// carries the label "labels[0]"). Certificate: distance to the root mod 3 on
/// two bits, the automaton's name per `mode`, and the run state.
std::unique_ptr<Scheme> mso_tree_scheme(const UopAutomaton& a, AutomatonMode mode = AutomatonMode::kFingerprint);

struct TreeRunCert {
  unsigned counter = 0;  // distance to the root mod 3
  std::size_t state = 0;
};

/// nullopt on malformed input or a name that does not match `a`.
std::optional<TreeRunCert> decode_tree_run_cert(const Certificate& c, const UopAutomaton& a, AutomatonMode mode);

/// Rooting and run read off an assignment accepted everywhere: each vertex's
/// parent is its neighbour one counter step below. Throws SoundnessViolation
/// if this is not a rooted spanning tree carrying an accepting run.
std::pair<RootedTree, std::vector<std::size_t>> reconstruct_rooting(const Graph& g, const Assignment& accepted,
                                                                    const UopAutomaton& a, AutomatonMode mode);

}  // namespace certilab
