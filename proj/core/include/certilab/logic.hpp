#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "certilab/graph.hpp"

namespace certilab {

enum class FormulaKind {
  kEqual,      // (= x y)
  kAdjacent,   // (adj x y)
  kMember,     // (in x X)
  kNot,
  kAnd,
  kOr,
  kForall,     // vertex quantifiers
  kExists,
  kForallSet,  // vertex-set quantifiers
  kExistsSet,
};

/// FO/MSO formula over the signature {=, adjacency}, with vertex variables
/// (lowercase) and vertex-set variables (uppercase).
///
/// Atoms use `lhs`/`rhs` (membership: vertex `lhs`, set `rhs`); quantifiers
/// bind `lhs` in `children[0]`; connectives use `children` only.
struct Formula {
  FormulaKind kind = FormulaKind::kEqual;
  std::string lhs;
  std::string rhs;
  std::vector<Formula> children;

  friend bool operator==(const Formula&, const Formula&) = default;
};

Formula eq(std::string x, std::string y);
Formula adj(std::string x, std::string y);
Formula in(std::string x, std::string set);
Formula neg(Formula f);
Formula conj(std::vector<Formula> parts);
Formula disj(std::vector<Formula> parts);
Formula forall(std::string x, Formula body);
Formula exists(std::string x, Formula body);
Formula forall_set(std::string x, Formula body);
Formula exists_set(std::string x, Formula body);

/// Parses the s-expression grammar:
///   (forall x F) (exists x F) (forallset X F) (existsset X F)
///   (and F F+) (or F F+) (not F) (= x y) (adj x y) (in x X)
/// With `closed`, free variables are rejected. Throws ParseError.
Formula parse_formula(std::string_view text, bool closed = true);

/// Inverse of parse_formula (single line).
std::string to_string(const Formula& f);

std::set<std::string> free_variables(const Formula& f);
std::size_t quantifier_depth(const Formula& f);
bool has_set_quantifier(const Formula& f);

/// Prenex with existential vertex quantifiers only and a quantifier-free
/// matrix without set membership.
bool is_existential_prenex(const Formula& f);

/// Bindings for free variables; sets are vertex-index masks.
struct Environment {
  std::map<std::string, VertexIndex> vertices;
  std::map<std::string, std::vector<bool>> sets;
};

struct EvalLimits {
  /// Formulas with set quantifiers enumerate 2^n subsets.
  std::size_t max_vertices_mso = 18;
  /// First-order formulas of quantifier depth >= 3 are limited to this size.
  std::size_t max_vertices_fo = 64;
};

/// Brute-force satisfaction. Throws CapExceeded past the limits and
/// GraphError for unbound or mis-kinded variables.
bool evaluate(const Graph& g, const Formula& f, const Environment& env = {}, EvalLimits limits = {});

// Named sentences.
Formula has_edge_sentence();
Formula triangle_sentence();
Formula triangle_free_sentence();
Formula diameter2_sentence();
Formula dominating_vertex_sentence();
Formula clique_sentence();
/// "No vertex has `d` distinct neighbours"; quantifier depth d + 1.
Formula max_degree_below_sentence(std::size_t d);

/// Random closed FO sentences of quantifier depth between 1 and `max_depth`,
/// drawn from a fixed recursive grammar with the given seed. Deterministic.
std::vector<Formula> fo_sentence_pool(std::size_t max_depth, std::size_t count, std::uint64_t seed);

/// Random existential prenex sentences with 1..max_vars variables.
std::vector<Formula> existential_sentence_pool(std::size_t max_vars, std::size_t count, std::uint64_t seed);

inline constexpr std::size_t kEfVertexCap = 12;
inline constexpr std::size_t kEfRoundCap = 5;

/// Whether Duplicator wins the k-round Ehrenfeucht-Fraisse game on (g, h).
/// Exhaustive game search memoised on the sorted set of pebbled pairs.
/// Throws CapExceeded past the caps.
bool ef_equivalent(const Graph& g, const Graph& h, std::size_t k,
                   std::size_t vertex_cap = kEfVertexCap, std::size_t round_cap = kEfRoundCap);

/// When Spoiler wins, a sentence of quantifier depth <= k true on g and false
/// on h, read off Spoiler's winning strategy; nullopt when Duplicator wins.
std::optional<Formula> distinguishing_sentence(const Graph& g, const Graph& h, std::size_t k,
                                               std::size_t vertex_cap = kEfVertexCap,
                                               std::size_t round_cap = kEfRoundCap);

}  // namespace certilab
