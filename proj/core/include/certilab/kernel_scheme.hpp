#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

#include "certilab/framework.hpp"
#include "certilab/kernel.hpp"
#include "certilab/logic.hpp"
#include "certilab/treedepth_cert.hpp"

namespace certilab {

/// Certificate of the kernel scheme.
///
/// Layout: the treedepth certificate, one pruned flag per list entry (own
/// first, root last), the type table, then one type code per list entry on
/// bit_width_for(entries - 1) bits.
struct KernelCert {
  TreedepthCert td;
  std::vector<bool> pruned;
  TypeTable table;
  std::vector<TypeCode> codes;

  friend bool operator==(const KernelCert&, const KernelCert&) = default;
};

Certificate encode_kernel_cert(const KernelCert& c);
/// nullopt on malformed input, trailing bits, or flag/code counts that do
/// not match the list length.
std::optional<KernelCert> decode_kernel_cert(const Certificate& c, std::size_t k);

/// Certificates for a coherent model and its k-reduction.
std::vector<KernelCert> kernel_certificates(const Graph& g, const Model& coherent, const KernelResult& r);

/// Local checks on decoded certificates: the treedepth checks, own type
/// against adjacency to the ancestors, agreement with neighbours on the
/// shared part of the list, and the child counts of every visible child.
bool kernel_checks(VertexId self, const KernelCert& own,
                   const std::vector<std::pair<VertexId, KernelCert>>& neighbors, std::size_t k,
                   std::size_t t);

/// Certifies that the kernel described by the certificates is a k-reduction
/// of G from the certified model of edge-depth at most t.
std::unique_ptr<Scheme> kernel_scheme(std::size_t k, std::size_t t, std::size_t exact_cap = kTreedepthCap);

inline constexpr std::size_t kFoCertDepthCap = 4;
/// Largest kernel the verifier expands and evaluates.
inline constexpr std::size_t kFoKernelCap = 64;

/// Kernel scheme with k = quantifier depth of the sentence; every vertex also
/// evaluates the sentence on the kernel described by the root's type. The
/// prover refuses when the kernel fails the sentence. Throws
/// std::invalid_argument for set quantifiers, open formulas or depth above
/// kFoCertDepthCap.
std::unique_ptr<Scheme> fo_cert_scheme(const Formula& sentence, std::size_t t,
                                       std::size_t exact_cap = kTreedepthCap);

}  // namespace certilab
