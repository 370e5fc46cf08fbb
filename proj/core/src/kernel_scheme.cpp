#include "certilab/kernel_scheme.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>

#include "certilab/corpus.hpp"
#include "certilab/errors.hpp"

namespace certilab {

namespace {

void write_kernel_cert(BitWriter& out, const KernelCert& c) {
  write_td_cert(out, c.td);
  for (bool p : c.pruned) {
    out.bit(p);
  }
  write_type_table(out, c.table);
  const unsigned cw = bit_width_for(c.table.entries.size() - 1);
  for (TypeCode code : c.codes) {
    out.uint(code, cw);
  }
}

}  // namespace

Certificate encode_kernel_cert(const KernelCert& c) {
  BitWriter out;
  write_kernel_cert(out, c);
  return out.finish();
}

std::optional<KernelCert> decode_kernel_cert(const Certificate& cert, std::size_t k) {
  BitReader in(cert);
  KernelCert c;
  c.td = read_td_cert(in);
  const std::size_t len = c.td.ancestors.size();
  if (!in.ok() || len > in.remaining()) {
    return std::nullopt;
  }
  for (std::size_t i = 0; i < len; ++i) {
    c.pruned.push_back(in.bit());
  }
  c.table = read_type_table(in, static_cast<std::uint32_t>(k));
  if (!in.ok()) {
    return std::nullopt;
  }
  const unsigned cw = bit_width_for(c.table.entries.size() - 1);
  for (std::size_t i = 0; i < len; ++i) {
    std::uint64_t code = in.uint(cw);
    if (code >= c.table.entries.size()) {
      return std::nullopt;
    }
    c.codes.push_back(static_cast<TypeCode>(code));
  }
  if (!in.ok() || !in.at_end()) {
    return std::nullopt;
  }
  return c;
}

std::vector<KernelCert> kernel_certificates(const Graph& g, const Model& coherent, const KernelResult& r) {
  auto td = td_certificates(g, coherent);
  std::vector<KernelCert> out(g.size());
  for (VertexIndex v = 0; v < g.size(); ++v) {
    KernelCert& c = out[v];
    for (VertexId a : td[v].ancestors) {
      VertexIndex ai = g.index(a);
      c.pruned.push_back(r.pruned.contains(a));
      c.codes.push_back(r.end_types[ai]);
    }
    c.td = std::move(td[v]);
    c.table = r.table;
  }
  return out;
}

bool kernel_checks(VertexId self, const KernelCert& own,
                   const std::vector<std::pair<VertexId, KernelCert>>& neighbors, std::size_t k,
                   std::size_t t) {
  std::vector<std::pair<VertexId, TreedepthCert>> td;
  td.reserve(neighbors.size());
  for (const auto& [id, c] : neighbors) {
    td.emplace_back(id, c.td);
  }
  if (!td_checks(self, own.td, td, t)) {
    return false;
  }
  const auto& list = own.td.ancestors;
  const std::size_t d = list.size() - 1;
  // Entry i of the list sits at depth d - i.
  for (std::size_t i = 0; i <= d; ++i) {
    if (own.table.entries[own.codes[i]].depth != d - i) {
      return false;
    }
  }
  if (own.pruned.back()) {
    return false;
  }
  const TypeEntry& mine = own.table.entries[own.codes.front()];
  for (std::size_t j = 0; j < d; ++j) {
    const VertexId ancestor = list[d - j];
    bool adjacent = std::any_of(neighbors.begin(), neighbors.end(),
                                [&](const auto& n) { return n.first == ancestor; });
    if (mine.vector[j] != adjacent) {
      return false;
    }
  }

  // Child id -> (code, pruned), as reported by the child's subtree.
  std::map<VertexId, std::pair<TypeCode, bool>> children;
  for (const auto& [id, c] : neighbors) {
    if (c.table != own.table) {
      return false;
    }
    const std::size_t len = c.td.ancestors.size();
    const std::size_t shared = std::min(len, list.size());
    for (std::size_t i = 1; i <= shared; ++i) {
      if (c.codes[len - i] != own.codes[list.size() - i] || c.pruned[len - i] != own.pruned[list.size() - i]) {
        return false;
      }
    }
    if (len > list.size()) {
      const std::size_t at = len - list.size() - 1;
      const std::pair<TypeCode, bool> entry{c.codes[at], c.pruned[at]};
      auto [it, inserted] = children.try_emplace(c.td.ancestors[at], entry);
      if (!inserted && it->second != entry) {
        return false;
      }
    }
  }
  std::map<TypeCode, std::pair<std::uint32_t, std::uint32_t>> tally;  // code -> (kept, pruned)
  for (const auto& [id, entry] : children) {
    auto& [kept, pruned] = tally[entry.first];
    (entry.second ? pruned : kept) += 1;
  }
  std::vector<std::pair<TypeCode, std::uint32_t>> groups;
  for (const auto& [code, counts] : tally) {
    const auto [kept, pruned] = counts;
    if (kept > k || (pruned > 0 && kept != k)) {
      return false;
    }
    if (kept > 0) {
      groups.emplace_back(code, kept);
    }
  }
  return groups == mine.children;
}

namespace {

struct DecodedView {
  KernelCert own;
  std::vector<std::pair<VertexId, KernelCert>> neighbors;
};

std::optional<DecodedView> decode_view(const LocalView& view, std::size_t k) {
  auto own = decode_kernel_cert(view.cert(), k);
  if (!own) {
    return std::nullopt;
  }
  DecodedView out{std::move(*own), {}};
  out.neighbors.reserve(view.degree());
  for (const auto& n : view.neighbors) {
    auto c = decode_kernel_cert(*n.cert, k);
    if (!c) {
      return std::nullopt;
    }
    out.neighbors.emplace_back(n.id, std::move(*c));
  }
  return out;
}

Assignment encode_all(const std::vector<KernelCert>& certs) {
  Assignment a;
  for (const auto& c : certs) {
    a.push_back(encode_kernel_cert(c));
  }
  return a;
}

// The model spelled out by a list assignment, if the lists form one.
std::optional<Model> model_from_lists(const Graph& g, const std::vector<TreedepthCert>& certs) {
  std::map<VertexId, VertexId> parent;
  std::optional<VertexId> root;
  for (const auto& c : certs) {
    if (c.ancestors.size() == 1) {
      root = c.ancestors.front();
    } else if (c.ancestors.size() > 1) {
      parent[c.ancestors[0]] = c.ancestors[1];
    }
  }
  if (!root) {
    return std::nullopt;
  }
  try {
    Model m(g, RootedTree(*root, parent));
    if (!is_coherent(g, m)) {
      return std::nullopt;
    }
    return m;
  } catch (const GraphError&) {
    return std::nullopt;
  }
}

class KernelScheme : public Scheme {
 public:
  KernelScheme(std::size_t k, std::size_t t, std::size_t cap) : k_(k), t_(t), cap_(cap) {
    if (k == 0) {
      throw std::invalid_argument("kernel scheme needs k >= 1");
    }
  }

  std::string name() const override { return "kernel"; }
  std::string declared_size() const override { return "O(t log n + g(k, t))"; }

  ProverOutcome prove(const Graph& g) const override {
    std::string why;
    auto model = prover_model(g, t_, cap_, &why);
    if (!model) {
      return ProverOutcome::refuse(why);
    }
    KernelResult r = k_reduce(g, *model, k_);
    if (auto refusal = refuse_kernel(r)) {
      return ProverOutcome::refuse(*refusal);
    }
    return ProverOutcome::accept(encode_all(kernel_certificates(g, *model, r)));
  }

  bool verify(const LocalView& view) const override {
    auto dv = decode_view(view, k_);
    if (!dv || !kernel_checks(view.self_id, dv->own, dv->neighbors, k_, t_)) {
      return false;
    }
    return accept_kernel(dv->own);
  }

  void structured_forgeries(const Graph& g, ForgeryContext& ctx) const override {
    // Every list assignment that passes the treedepth checks is completed
    // with the k-reduction of the model it spells out, and with variants
    // that hide the pruning or swap in the table of a small accepted kernel.
    std::vector<std::vector<KernelCert>> decoys = decoy_tables();
    forge_td_lists(g, t_, ctx, [&](const std::vector<TreedepthCert>& td) {
      auto m = model_from_lists(g, td);
      if (!m || ctx.done()) {
        return;
      }
      KernelResult r = k_reduce(g, *m, k_);
      auto certs = kernel_certificates(g, *m, r);
      if (ctx.offer(encode_all(certs))) {
        return;
      }
      auto hidden = certs;
      for (auto& c : hidden) {
        std::fill(c.pruned.begin(), c.pruned.end(), false);
      }
      if (ctx.offer(encode_all(hidden))) {
        return;
      }
      for (const auto& decoy : decoys) {
        auto swapped = certs;
        const auto& table = decoy.front().table;
        for (auto& c : swapped) {
          c.table = table;
          for (std::size_t i = 0; i < c.codes.size(); ++i) {
            c.codes[i] = first_code_at_depth(table, c.codes.size() - 1 - i);
          }
        }
        if (ctx.offer(encode_all(swapped))) {
          return;
        }
      }
    });
  }

  std::size_t random_payload_bits(const Graph& g) const override {
    auto outcome = prove(g);
    if (outcome.assignment) {
      return measure_size(*outcome.assignment);
    }
    return treedepth_scheme(t_, cap_)->random_payload_bits(g) + 4 * (t_ + 1);
  }

 protected:
  // Extra acceptance condition on a certificate that passed the checks.
  virtual bool accept_kernel(const KernelCert& /*own*/) const { return true; }
  virtual std::optional<std::string> refuse_kernel(const KernelResult& /*r*/) const { return std::nullopt; }
  // Tables of small graphs the scheme accepts, used as forgery material.
  virtual std::vector<std::vector<KernelCert>> decoy_tables() const { return {}; }

  static TypeCode first_code_at_depth(const TypeTable& table, std::size_t depth) {
    for (TypeCode c = 0; c < table.entries.size(); ++c) {
      if (table.entries[c].depth == depth) {
        return c;
      }
    }
    return 0;
  }

  std::size_t k_;
  std::size_t t_;
  std::size_t cap_;
};

class FoCertScheme : public KernelScheme {
 public:
  FoCertScheme(Formula sentence, std::size_t t, std::size_t cap)
      : KernelScheme(std::max<std::size_t>(1, quantifier_depth(sentence)), t, cap), sentence_(std::move(sentence)) {}

  std::string name() const override { return "fo"; }
  std::string declared_size() const override { return "O(t log n + f(t, phi))"; }

 protected:
  bool accept_kernel(const KernelCert& own) const override { return holds(own.table, own.codes.back()); }

  std::optional<std::string> refuse_kernel(const KernelResult& r) const override {
    if (r.kernel.size() > kFoKernelCap) {
      return "kernel has " + std::to_string(r.kernel.size()) + " vertices, above the evaluation cap";
    }
    if (!evaluate(r.kernel, sentence_)) {
      return "the kernel does not satisfy the sentence";
    }
    return std::nullopt;
  }

  std::vector<std::vector<KernelCert>> decoy_tables() const override {
    std::vector<std::vector<KernelCert>> out;
    for (std::size_t n = 1; n <= 4; ++n) {
      for (const Graph& h : connected_graphs(n)) {
        if (!evaluate(h, sentence_)) {
          continue;
        }
        auto m = prover_model(h, t_, cap_);
        if (!m) {
          continue;
        }
        KernelResult r = k_reduce(h, *m, k_);
        out.push_back(kernel_certificates(h, *m, r));
      }
    }
    return out;
  }

 private:
  bool holds(const TypeTable& table, TypeCode root) const {
    BitWriter key;
    write_type_table(key, table);
    key.uint(root, 32);
    const Bits bits = key.finish();
    {
      std::lock_guard lock(mutex_);
      if (auto it = cache_.find(bits); it != cache_.end()) {
        return it->second;
      }
    }
    bool value = false;
    try {
      ExpandedType h = expand_type(table, root, kFoKernelCap);
      value = evaluate(h.graph, sentence_);
    } catch (const Error&) {
      value = false;
    }
    std::lock_guard lock(mutex_);
    cache_.emplace(bits, value);
    return value;
  }

  Formula sentence_;
  mutable std::mutex mutex_;
  mutable std::map<Bits, bool> cache_;
};

}  // namespace

std::unique_ptr<Scheme> kernel_scheme(std::size_t k, std::size_t t, std::size_t exact_cap) {
  return std::make_unique<KernelScheme>(k, t, exact_cap);
}

std::unique_ptr<Scheme> fo_cert_scheme(const Formula& sentence, std::size_t t, std::size_t exact_cap) {
  if (!free_variables(sentence).empty()) {
    throw std::invalid_argument("fo_cert_scheme needs a closed sentence");
  }
  if (has_set_quantifier(sentence)) {
    throw std::invalid_argument("fo_cert_scheme handles first-order sentences only");
  }
  if (quantifier_depth(sentence) > kFoCertDepthCap) {
    throw std::invalid_argument("quantifier depth " + std::to_string(quantifier_depth(sentence)) +
                                " exceeds the cap of " + std::to_string(kFoCertDepthCap));
  }
  return std::make_unique<FoCertScheme>(sentence, t, exact_cap);
}

}  // namespace certilab
