#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "certilab/errors.hpp"
#include "certilab/framework.hpp"

namespace certilab {

void Scheme::structured_forgeries(const Graph& /*g*/, ForgeryContext& /*ctx*/) const {}

std::size_t Scheme::random_payload_bits(const Graph& g) const {
  auto outcome = prove(g);
  if (!outcome.refused()) {
    return std::max<std::size_t>(8, measure_size(*outcome.assignment));
  }
  return 64;
}

ForgeryContext::ForgeryContext(const Scheme& s, const Graph& g, const AdversaryBudget& budget)
    : scheme_(&s), graph_(&g), budget_(&budget) {}

bool ForgeryContext::offer(const Assignment& a) {
  ++tried_;
  if (found_) {
    return true;
  }
  if (accepted_everywhere(*scheme_, *graph_, a)) {
    found_ = a;
    return true;
  }
  return false;
}

namespace {

// Disjoint-set forest for random spanning trees.
class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) {
      return false;
    }
    parent_[a] = b;
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

// Spanning subgraphs of `g` (same vertex set and ids), used as related
// instances whose honest certificates seed mutation forgeries.
std::vector<Graph> related_instances(const Graph& g, std::mt19937_64& rng, std::size_t count) {
  std::vector<Graph> out;
  auto edges = g.edges();
  std::vector<VertexId> ids(g.ids().begin(), g.ids().end());
  // Single-edge deletions first: the closest relatives.
  for (std::size_t skip = 0; skip < edges.size() && out.size() < count / 2; ++skip) {
    std::vector<IdEdge> kept;
    for (std::size_t i = 0; i < edges.size(); ++i) {
      if (i != skip) {
        kept.push_back(edges[i]);
      }
    }
    try {
      out.emplace_back(ids, kept, Graph::Limits{0});
    } catch (const GraphError&) {
      // bridge: deletion disconnects
    }
  }
  // Random spanning trees.
  while (out.size() < count && !edges.empty()) {
    std::shuffle(edges.begin(), edges.end(), rng);
    UnionFind uf(g.size());
    std::vector<IdEdge> tree;
    for (const auto& e : edges) {
      if (uf.unite(g.index(e.first), g.index(e.second))) {
        tree.push_back(e);
      }
    }
    out.emplace_back(ids, tree, Graph::Limits{0});
  }
  return out;
}

Certificate random_certificate(std::mt19937_64& rng, std::size_t max_bits) {
  std::uniform_int_distribution<std::size_t> len_dist(0, max_bits);
  std::size_t len = len_dist(rng);
  Certificate c;
  std::uint64_t word = 0;
  for (std::size_t i = 0; i < len; ++i) {
    if (i % 64 == 0) {
      word = rng();
    }
    c.push_back(((word >> (i % 64)) & 1U) != 0);
  }
  return c;
}

Certificate mutate(const Certificate& c, std::mt19937_64& rng) {
  Certificate out = c;
  switch (rng() % 4) {
    case 0:
    case 1:
      if (!out.empty()) {
        out.flip(rng() % out.size());
      }
      break;
    case 2: {
      Certificate shorter;
      std::size_t keep = out.empty() ? 0 : rng() % out.size();
      for (std::size_t i = 0; i < keep; ++i) {
        shorter.push_back(out[i]);
      }
      out = shorter;
      break;
    }
    default:
      out.push_back((rng() & 1U) != 0);
      break;
  }
  return out;
}

void raw_exhaustive_phase(const Scheme& s, const Graph& g, const AdversaryBudget& budget,
                          AdversaryOutcome& outcome) {
  // Largest L with (2^(L+1) - 1)^n <= cap.
  const double log_cap = std::log2(static_cast<double>(budget.exhaustive_cap));
  std::size_t best = 0;
  for (std::size_t len = 1; len <= 20; ++len) {
    double per_vertex = std::log2(std::pow(2.0, static_cast<double>(len + 1)) - 1.0);
    if (per_vertex * static_cast<double>(g.size()) <= log_cap) {
      best = len;
    }
  }
  if (best == 0) {
    return;
  }
  std::vector<Certificate> all;
  for (std::size_t len = 0; len <= best; ++len) {
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << len); ++v) {
      all.push_back(Bits::from_uint(v, static_cast<unsigned>(len)));
    }
  }
  std::vector<std::vector<Certificate>> space(g.size(), all);
  auto result = backtrack_search(s, g, space, budget.exhaustive_cap);
  outcome.tried += result.nodes;
  if (result.accepted) {
    outcome.forged = std::move(result.accepted);
    outcome.strategy = "raw-exhaustive(<=" + std::to_string(best) + " bits)";
  } else if (result.complete) {
    outcome.exhaustive = true;
  }
}

}  // namespace

AdversaryOutcome adversary_search(const Scheme& s, const Graph& g, const AdversaryBudget& budget) {
  AdversaryOutcome outcome;
  std::mt19937_64 rng(budget.seed);

  if (budget.raw_exhaustive) {
    raw_exhaustive_phase(s, g, budget, outcome);
    if (outcome.forged) {
      return outcome;
    }
  }

  if (budget.structured) {
    ForgeryContext ctx(s, g, budget);
    s.structured_forgeries(g, ctx);
    outcome.tried += ctx.tried();
    outcome.exhaustive = outcome.exhaustive || ctx.exhaustive();
    if (ctx.found()) {
      outcome.forged = std::move(ctx.found());
      outcome.strategy = "structured";
      return outcome;
    }
  }

  if (budget.mutations && budget.mutations_per_donor > 0) {
    for (const auto& related : related_instances(g, rng, 8)) {
      auto honest = s.prove(related);
      if (honest.refused()) {
        continue;
      }
      const Assignment& donor = *honest.assignment;
      ++outcome.tried;
      if (accepted_everywhere(s, g, donor)) {
        outcome.forged = donor;
        outcome.strategy = "donor";
        return outcome;
      }
      for (std::uint64_t i = 0; i < budget.mutations_per_donor; ++i) {
        Assignment forged = donor;
        std::size_t touched = 1 + rng() % std::min<std::size_t>(3, g.size());
        for (std::size_t j = 0; j < touched; ++j) {
          VertexIndex v = static_cast<VertexIndex>(rng() % g.size());
          if (rng() % 3 == 0) {
            forged[v] = donor[rng() % g.size()];
          } else {
            forged[v] = mutate(forged[v], rng);
          }
        }
        ++outcome.tried;
        if (accepted_everywhere(s, g, forged)) {
          outcome.forged = std::move(forged);
          outcome.strategy = "mutation";
          return outcome;
        }
      }
    }
  }

  if (budget.random_forgeries > 0) {
    const std::size_t max_bits = s.random_payload_bits(g);
    Assignment forged(g.size());
    for (std::uint64_t i = 0; i < budget.random_forgeries; ++i) {
      for (auto& c : forged) {
        c = random_certificate(rng, max_bits);
      }
      ++outcome.tried;
      if (accepted_everywhere(s, g, forged)) {
        outcome.forged = forged;
        outcome.strategy = "random";
        return outcome;
      }
    }
  }
  return outcome;
}

}  // namespace certilab
