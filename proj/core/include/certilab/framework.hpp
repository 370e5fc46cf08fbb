#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "certilab/bits.hpp"
#include "certilab/graph.hpp"

namespace certilab {

using Certificate = Bits;

/// One certificate per vertex, indexed by VertexIndex of the graph it labels.
using Assignment = std::vector<Certificate>;

/// Fixed seed used whenever the caller does not supply one.
inline constexpr std::uint64_t kDefaultSeed = 0x5eed'cafe'f00dULL;

struct NeighborView {
  VertexId id;
  const Certificate* cert;
};

/// What a vertex sees under radius-1 verification: its own id and certificate,
/// and one (id, certificate) entry per incident edge. Nothing about edges
/// among the neighbours is exposed. Entries are sorted by id, but verifiers
/// must not depend on the order. The view borrows the assignment's storage.
struct LocalView {
  VertexId self_id;
  const Certificate* self_cert;
  std::vector<NeighborView> neighbors;

  [[nodiscard]] std::size_t degree() const { return neighbors.size(); }
  [[nodiscard]] const Certificate& cert() const { return *self_cert; }
};

/// Result of running a prover. A prover may refuse (no-instance, cap hit);
/// completeness is only ever asked of yes-instances.
struct ProverOutcome {
  std::optional<Assignment> assignment;
  std::string refusal;

  static ProverOutcome accept(Assignment a) { return {std::move(a), {}}; }
  static ProverOutcome refuse(std::string why) { return {std::nullopt, std::move(why)}; }
  [[nodiscard]] bool refused() const { return !assignment.has_value(); }
};

class ForgeryContext;

/// A local certification scheme: a prover paired with a radius-1 verifier.
///
/// verify() must be a deterministic pure function of the view and the
/// scheme's fixed parameters, and must be total: undecodable certificates
/// lead to rejection, never to an exception.
class Scheme {
 public:
  virtual ~Scheme() = default;

  [[nodiscard]] virtual std::string name() const = 0;
  /// Asymptotic size claim, for reports only.
  [[nodiscard]] virtual std::string declared_size() const = 0;
  [[nodiscard]] virtual ProverOutcome prove(const Graph& g) const = 0;
  [[nodiscard]] virtual bool verify(const LocalView& view) const = 0;

  /// Scheme-shaped forgeries for the adversary. Implementations offer
  /// candidate assignments to `ctx` and stop when it asks them to.
  virtual void structured_forgeries(const Graph& g, ForgeryContext& ctx) const;

  /// Largest honest-looking certificate length, used to size random payloads.
  [[nodiscard]] virtual std::size_t random_payload_bits(const Graph& g) const;
};

LocalView make_view(const Graph& g, const Assignment& a, VertexIndex v);

struct Verdict {
  std::vector<char> accepted;  // per vertex index

  [[nodiscard]] bool all() const;
  [[nodiscard]] std::vector<VertexIndex> rejecting() const;
};

/// Runs the verifier at every vertex. Throws GraphError if the assignment is
/// not total. `jobs` > 1 evaluates vertices on worker threads.
Verdict run_verification(const Scheme& s, const Graph& g, const Assignment& a, unsigned jobs = 1);

/// Global acceptance with early exit on the first rejecting vertex.
bool accepted_everywhere(const Scheme& s, const Graph& g, const Assignment& a);

struct CompletenessResult {
  bool accepted = false;
  bool prover_refused = false;
  std::string refusal;
  Verdict verdict;
};

CompletenessResult check_completeness(const Scheme& s, const Graph& g);

/// Largest certificate in bits.
std::size_t measure_size(const Assignment& a);

struct AdversaryBudget {
  /// Raw exhaustive enumeration runs when (#bit strings of length <= L)^n
  /// fits under this cap for some L >= 1; also caps backtracking nodes.
  std::uint64_t exhaustive_cap = std::uint64_t{1} << 24;
  /// Uniformly random payload assignments tried after the structured phases.
  std::uint64_t random_forgeries = 1'000'000;
  /// Mutations tried per donor assignment.
  std::uint64_t mutations_per_donor = 2'000;
  std::uint64_t seed = kDefaultSeed;
  bool raw_exhaustive = true;
  bool structured = true;
  bool mutations = true;
};

struct AdversaryOutcome {
  std::optional<Assignment> forged;  // accepted everywhere, if one was found
  std::uint64_t tried = 0;
  std::string strategy;              // phase that produced `forged`
  bool exhaustive = false;           // some phase enumerated a whole space
};

/// Searches for an assignment accepted at every vertex. Phases, in order:
/// raw exhaustive enumeration of short bit strings, the scheme's structured
/// forgeries, mutations of honest certificates from related yes-instances
/// (spanning subgraphs the prover accepts), and uniformly random payloads.
AdversaryOutcome adversary_search(const Scheme& s, const Graph& g, const AdversaryBudget& budget = {});

/// Collector handed to Scheme::structured_forgeries.
class ForgeryContext {
 public:
  ForgeryContext(const Scheme& s, const Graph& g, const AdversaryBudget& budget);

  /// Verifies `a` everywhere; returns true (and keeps `a`) when accepted.
  bool offer(const Assignment& a);
  /// True once an accepted assignment was found or the budget is exhausted.
  [[nodiscard]] bool done() const { return found_.has_value() || tried_ >= budget_->exhaustive_cap; }
  [[nodiscard]] const AdversaryBudget& budget() const { return *budget_; }
  [[nodiscard]] std::uint64_t tried() const { return tried_; }
  void count(std::uint64_t n) { tried_ += n; }
  /// Record that a phase covered its whole space.
  void mark_exhaustive() { exhaustive_ = true; }
  [[nodiscard]] bool exhaustive() const { return exhaustive_; }
  [[nodiscard]] std::optional<Assignment>& found() { return found_; }

 private:
  const Scheme* scheme_;
  const Graph* graph_;
  const AdversaryBudget* budget_;
  std::uint64_t tried_ = 0;
  bool exhaustive_ = false;
  std::optional<Assignment> found_;
};

/// Per-vertex finite candidate lists searched by backtracking: vertices are
/// assigned in BFS order and a vertex is verified as soon as its closed
/// neighbourhood is fully assigned, so rejected prefixes are cut early.
/// The search is complete over the product space unless the node cap is hit.
struct BacktrackResult {
  std::optional<Assignment> accepted;
  std::uint64_t nodes = 0;
  bool complete = false;  // whole space covered
};

BacktrackResult backtrack_search(const Scheme& s, const Graph& g,
                                 const std::vector<std::vector<Certificate>>& candidates,
                                 std::uint64_t node_cap);

/// Visits every assignment from the candidate space accepted everywhere;
/// `visit` returns false to stop. Returns the number of search nodes.
std::uint64_t enumerate_accepted(const Scheme& s, const Graph& g,
                                 const std::vector<std::vector<Certificate>>& candidates,
                                 const std::function<bool(const Assignment&)>& visit);

/// Assignment file: JSON object mapping decimal ids to "<bits>:<hex>" payloads.
std::string serialize_assignment(const Graph& g, const Assignment& a);
/// Throws ParseError on malformed files and GraphError when the id set does
/// not match the graph's vertex set.
Assignment parse_assignment(const Graph& g, std::string_view text);

}  // namespace certilab
