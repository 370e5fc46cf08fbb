#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <memory>
#include <optional>
#include <vector>

#include "certilab/bits.hpp"
#include "certilab/framework.hpp"
#include "certilab/treedepth.hpp"

namespace certilab {

/// One vertex's share of the spanning tree of G_a for the ancestor a at
/// depth `depth`; the tree is rooted at an exit vertex of a.
struct Fragment {
  std::size_t depth = 0;
  bool is_root = false;
  VertexId parent = 0;  // meaningful when !is_root
  std::uint64_t dist = 0;

  friend bool operator==(const Fragment&, const Fragment&) = default;
};

/// Certificate of the treedepth scheme.
///
/// Layout: gamma(w), gamma(list length), the ancestor ids on w bits each (own
/// id first, root last), gamma(fragment count), then per fragment
/// gamma(depth), a root bit, the parent id on w bits unless root, and the
/// distance on w bits. Fragments are listed by depth 1..d.
struct TreedepthCert {
  unsigned width = 1;
  std::vector<VertexId> ancestors;
  std::vector<Fragment> fragments;

  friend bool operator==(const TreedepthCert&, const TreedepthCert&) = default;
};

void write_td_cert(BitWriter& out, const TreedepthCert& c);
/// Reads one certificate; on malformed input the reader is failed.
TreedepthCert read_td_cert(BitReader& in);
Certificate encode_td_cert(const TreedepthCert& c);
/// Whole-string decode; nullopt on malformed input or trailing bits.
std::optional<TreedepthCert> decode_td_cert(const Certificate& c);

/// The four local checks for edge-depth bound t, on decoded certificates.
bool td_checks(VertexId self, const TreedepthCert& own,
               const std::vector<std::pair<VertexId, TreedepthCert>>& neighbors, std::size_t t);

/// Certificates for a coherent model (ancestor lists plus fragments of BFS
/// trees of G_a rooted at the smallest-id exit vertex of a). Throws
/// GraphError if the model is not coherent.
std::vector<TreedepthCert> td_certificates(const Graph& g, const Model& coherent);
Assignment td_certify(const Graph& g, const Model& coherent);

/// The coherent model the provers certify: from the exact oracle up to
/// `exact_cap` vertices, from the separator heuristic above it. nullopt (with
/// the reason in `why`) when it is deeper than t.
std::optional<Model> prover_model(const Graph& g, std::size_t t, std::size_t exact_cap = kTreedepthCap,
                                  std::string* why = nullptr);

/// Prover for "edge-depth <= t": the exact oracle up to `exact_cap`
/// vertices, the separator heuristic above it.
ProverOutcome td_prover(const Graph& g, std::size_t t, std::size_t exact_cap = kTreedepthCap);

bool td_verifier(const LocalView& view, std::size_t t);

using TdCandidateSink = std::function<void(const std::vector<TreedepthCert>&)>;

/// Exhaustive search over ancestor-list assignments that use the graph's own
/// ids. Lists are pruned along edges by checks (1) and (2); every complete
/// assignment that admits fragments passing check (4) is completed with BFS
/// fragments and handed to `sink`. Marks `ctx` exhaustive when the whole
/// space was covered.
void forge_td_lists(const Graph& g, std::size_t t, ForgeryContext& ctx, const TdCandidateSink& sink);

std::unique_ptr<Scheme> treedepth_scheme(std::size_t t, std::size_t exact_cap = kTreedepthCap);

/// Rebuilds the model certified by an assignment accepted everywhere: each
/// vertex with list L follows its own fragment to the fragment root and takes
/// the root's neighbour whose list is L without its first element as the
/// step towards its parent. Throws SoundnessViolation when this fails or the
/// result is not a model whose ancestor lists are the certified ones.
RootedTree reconstruct_forest(const Graph& g, const Assignment& accepted);

}  // namespace certilab
