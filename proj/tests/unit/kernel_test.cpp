#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "certilab/corpus.hpp"
#include "certilab/errors.hpp"
#include "certilab/kernel.hpp"
#include "certilab/kernel_scheme.hpp"
#include "certilab/logic.hpp"
#include "certilab/treedepth.hpp"

namespace certilab {
namespace {

using boost::multiprecision::cpp_int;

RootedTree fig1_tree() { return RootedTree(4, {{2, 4}, {6, 4}, {1, 2}, {3, 2}, {5, 6}, {7, 6}}); }

Model star_model(const Graph& star) {
  std::map<VertexId, VertexId> parent;
  for (VertexIndex v = 1; v < star.size(); ++v) {
    parent[star.id(v)] = 1;
  }
  return Model(star, RootedTree(1, parent));
}

TEST(AncestorVectors, Examples) {
  Graph p7 = make_path(7);
  Model m(p7, fig1_tree());
  EXPECT_TRUE(ancestor_vector(p7, m, p7.index(4)).empty());
  EXPECT_EQ(ancestor_vector(p7, m, p7.index(1)), (AncestorVector{false, true}));
  EXPECT_EQ(ancestor_vector(p7, m, p7.index(3)), (AncestorVector{true, true}));
  Graph s = make_star(3);
  EXPECT_EQ(ancestor_vector(s, star_model(s), 1), (AncestorVector{true}));
}

TEST(KReduce, StarKeepsK) {
  Graph s = make_star(5);
  auto r = k_reduce(s, star_model(s), 2);
  EXPECT_EQ(r.kernel.size(), 3u);
  EXPECT_EQ(r.pruned.size(), 3u);
  EXPECT_EQ(r.pruned, (std::set<VertexId>{4, 5, 6}));
  EXPECT_TRUE(isomorphic(r.kernel, make_star(2)));
  EXPECT_TRUE(lemma_same_type_check(r, s, star_model(s), 2));
}

TEST(KReduce, FixedPoint) {
  Graph s = make_star(2);
  auto r = k_reduce(s, star_model(s), 2);
  EXPECT_EQ(r.kernel, s);
  EXPECT_TRUE(r.pruned.empty());
  EXPECT_TRUE(lemma_same_type_check(r, s, star_model(s), 2));
}

TEST(KReduce, P7WithK1) {
  Graph p7 = make_path(7);
  Model m(p7, fig1_tree());
  auto r = k_reduce(p7, m, 1);
  // 2's children 1 and 3 have vectors [0,1] and [1,1]: different types. The
  // subtrees of 2 and 6 are mirror images with equal types, so 6's is pruned.
  EXPECT_EQ(r.pruned, (std::set<VertexId>{6}));
  EXPECT_EQ(std::count(r.kept.begin(), r.kept.end(), true), 4);
  EXPECT_EQ(r.kernel.size(), 4u);
  EXPECT_TRUE(ef_equivalent(p7, r.kernel, 1));
}

TEST(KReduce, Preconditions) {
  Graph p3 = make_path(3);
  Model chain(p3, RootedTree(1, {{2, 1}, {3, 2}}));
  EXPECT_THROW(k_reduce(p3, chain, 0), std::invalid_argument);
  // Root 2 with chain 2 -> 1 -> 3 is a model of P3 but not coherent.
  Model incoherent(p3, RootedTree(2, {{1, 2}, {3, 1}}));
  EXPECT_THROW(k_reduce(p3, incoherent, 1), GraphError);
}

TEST(KReduce, EndTypesOfEqualSubtreesAgree) {
  Graph s = make_star(4);
  auto r = k_reduce(s, star_model(s), 1);
  EXPECT_EQ(r.end_types[1], r.end_types[2]);
  EXPECT_EQ(r.end_types[2], r.end_types[4]);
  EXPECT_NE(r.end_types[0], r.end_types[1]);
}

TEST(TypeTable, RoundTripAndExpansion) {
  std::mt19937_64 rng(14);
  for (int i = 0; i < 60; ++i) {
    auto sample = random_bounded_td_graph(6 + rng() % 10, 1 + rng() % 3, 0.4, rng);
    Model m = make_coherent(sample.graph, Model(sample.graph, sample.model));
    std::size_t k = 1 + rng() % 3;
    auto r = k_reduce(sample.graph, m, k);
    BitWriter out;
    write_type_table(out, r.table);
    Bits bits = out.finish();
    BitReader in(bits);
    EXPECT_EQ(read_type_table(in, static_cast<std::uint32_t>(k)), r.table);
    EXPECT_TRUE(in.ok() && in.at_end());
    TypeCode root = r.end_types[m.tree().root_index()];
    auto e = expand_type(r.table, root, 1000);
    EXPECT_TRUE(isomorphic(e.graph, r.kernel));
    EXPECT_EQ(expanded_size(r.table, root, 1000), r.kernel.size());
  }
}

TEST(TypeTable, NonCanonicalTablesRejected) {
  TypeTable t;
  t.entries.push_back({1, {true}, {}});
  t.entries.push_back({0, {}, {{0, 3}}});
  BitWriter out;
  write_type_table(out, t);
  Bits bits = out.finish();
  BitReader ok(bits);
  EXPECT_EQ(read_type_table(ok, 3), t);
  EXPECT_TRUE(ok.ok());
  BitReader over(bits);
  (void)read_type_table(over, 2);  // count 3 exceeds k = 2
  EXPECT_FALSE(over.ok());
  TypeTable swapped;
  swapped.entries = {t.entries[1], t.entries[0]};
  BitWriter w2;
  write_type_table(w2, swapped);
  Bits b2 = w2.finish();
  BitReader in2(b2);
  (void)read_type_table(in2, 3);
  EXPECT_FALSE(in2.ok());
}

TEST(TypeCountBound, Values) {
  EXPECT_EQ(*type_count_bound(3, 1, 3), cpp_int(8));
  EXPECT_EQ(*type_count_bound(2, 2, 2), cpp_int(4));
  // f_{t-1}(1, t) = 2^{t-1} * 2^{2^t}
  for (std::size_t t = 1; t <= 4; ++t) {
    cpp_int expected = (cpp_int(1) << (t - 1)) * (cpp_int(1) << (std::size_t{1} << t));
    EXPECT_EQ(*type_count_bound(t - 1, 1, t), expected);
  }
  EXPECT_FALSE(type_count_bound(0, 3, 4).has_value());
}

TEST(TypeCountBound, ObservedTypesFit) {
  std::mt19937_64 rng(15);
  for (int i = 0; i < 80; ++i) {
    std::size_t t = 1 + rng() % 3;
    std::size_t k = 1 + rng() % 3;
    auto sample = random_bounded_td_graph(4 + rng() % 12, t, 0.5, rng);
    Model m = make_coherent(sample.graph, Model(sample.graph, sample.model));
    auto r = k_reduce(sample.graph, m, k);
    std::map<std::size_t, std::set<TypeCode>> by_depth;
    for (VertexIndex v = 0; v < sample.graph.size(); ++v) {
      by_depth[m.depth(v)].insert(r.end_types[v]);
    }
    for (const auto& [d, codes] : by_depth) {
      auto bound = type_count_bound(d, k, t);
      if (bound) {
        EXPECT_LE(cpp_int(codes.size()), *bound);
      }
    }
  }
}

TEST(Lemma, RandomCorpus) {
  std::mt19937_64 rng(16);
  for (int i = 0; i < 150; ++i) {
    std::size_t t = 1 + rng() % 3;
    std::size_t k = 1 + rng() % 3;
    auto sample = random_bounded_td_graph(4 + rng() % 11, t, 0.4, rng);
    Model m = make_coherent(sample.graph, Model(sample.graph, sample.model));
    auto r = k_reduce(sample.graph, m, k);
    EXPECT_TRUE(lemma_same_type_check(r, sample.graph, m, k));
    EXPECT_TRUE(is_coherent(r.kernel, r.kernel_model));
  }
}

TEST(Lemma, KernelsAreEfEquivalent) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 40; ++i) {
    std::size_t t = 1 + rng() % 2;
    std::size_t k = 1 + rng() % 2;
    auto sample = random_bounded_td_graph(4 + rng() % 8, t, 0.4, rng);
    Model m = make_coherent(sample.graph, Model(sample.graph, sample.model));
    auto r = k_reduce(sample.graph, m, k);
    EXPECT_TRUE(ef_equivalent(sample.graph, r.kernel, k));
  }
}

TEST(PtMinor, Values) {
  EXPECT_TRUE(evaluate(make_star(3), pt_minor_formula(4)));
  EXPECT_FALSE(evaluate(make_path(4), pt_minor_formula(4)));
  EXPECT_TRUE(evaluate(make_clique(2), pt_minor_formula(3)));
  EXPECT_EQ(quantifier_depth(pt_minor_formula(4)), 4u);
  EXPECT_THROW(pt_minor_formula(1), std::invalid_argument);
}

// --- kernel scheme -----------------------------------------------------------

TEST(KernelScheme, StarCompleteness) {
  auto s = kernel_scheme(2, 1);
  Graph star = make_star(5);
  auto out = s->prove(star);
  ASSERT_FALSE(out.refused());
  EXPECT_TRUE(run_verification(*s, star, *out.assignment).all());
  std::size_t flagged = 0;
  for (VertexIndex v = 1; v < star.size(); ++v) {
    auto c = decode_kernel_cert((*out.assignment)[v], 2);
    ASSERT_TRUE(c);
    flagged += c->pruned.front() ? 1 : 0;
  }
  EXPECT_EQ(flagged, 3u);
}

TEST(KernelScheme, RoundTrip) {
  Graph p7 = make_path(7);
  Model m(p7, fig1_tree());
  auto r = k_reduce(p7, m, 1);
  for (const auto& c : kernel_certificates(p7, m, r)) {
    EXPECT_EQ(decode_kernel_cert(encode_kernel_cert(c), 1), c);
  }
}

TEST(KernelScheme, HiddenPruningRejected) {
  Graph star = make_star(5);
  auto r = k_reduce(star, star_model(star), 2);
  auto certs = kernel_certificates(star, star_model(star), r);
  for (auto& c : certs) {
    std::fill(c.pruned.begin(), c.pruned.end(), false);
  }
  std::vector<std::pair<VertexId, KernelCert>> leaves;
  for (VertexIndex v = 1; v < star.size(); ++v) {
    leaves.emplace_back(star.id(v), certs[v]);
  }
  EXPECT_FALSE(kernel_checks(1, certs[0], leaves, 2, 1));
}

TEST(KernelScheme, ForgedCodeRejectedNearby) {
  Graph p7 = make_path(7);
  auto s = kernel_scheme(1, 2);
  Model m(p7, fig1_tree());
  auto r = k_reduce(p7, m, 1);
  auto certs = kernel_certificates(p7, m, r);
  for (VertexIndex v = 0; v < p7.size(); ++v) {
    auto forged = certs;
    auto& own = forged[v].codes.front();
    own = (own + 1) % static_cast<TypeCode>(forged[v].table.entries.size());
    Assignment a;
    for (const auto& c : forged) {
      a.push_back(encode_kernel_cert(c));
    }
    Verdict verdict = run_verification(*s, p7, a);
    bool caught = !verdict.accepted[v];
    for (VertexIndex w : p7.neighbors(v)) {
      caught = caught || !verdict.accepted[w];
    }
    EXPECT_TRUE(caught) << "vertex " << p7.id(v);
  }
}

TEST(KernelScheme, CompletenessOnSmallGraphs) {
  for (std::size_t k = 1; k <= 2; ++k) {
    for (std::size_t t = 1; t <= 2; ++t) {
      auto s = kernel_scheme(k, t);
      for (std::size_t n = 1; n <= 6; ++n) {
        for (const Graph& g : connected_graphs(n)) {
          if (treedepth_exact(g).edge_depth > t) {
            continue;
          }
          EXPECT_TRUE(check_completeness(*s, g).accepted) << serialize_graph(g);
        }
      }
    }
  }
}

TEST(FoScheme, Examples) {
  {
    auto s = fo_cert_scheme(dominating_vertex_sentence(), 1);
    EXPECT_TRUE(check_completeness(*s, make_star(5)).accepted);
  }
  {
    auto s = fo_cert_scheme(max_degree_below_sentence(3), 4);
    Graph p20 = make_path(20);
    EXPECT_TRUE(evaluate(p20, max_degree_below_sentence(3)));
    EXPECT_TRUE(check_completeness(*s, p20).accepted);
  }
  {
    auto s = fo_cert_scheme(clique_sentence(), 2);
    Graph p5 = make_path(5);
    EXPECT_TRUE(s->prove(p5).refused());
    AdversaryBudget budget;
    budget.random_forgeries = 20'000;
    budget.mutations_per_donor = 100;
    EXPECT_FALSE(adversary_search(*s, p5, budget).forged.has_value());
  }
}

TEST(FoScheme, Preconditions) {
  EXPECT_THROW(fo_cert_scheme(parse_formula("(adj x y)", false), 2), std::invalid_argument);
  EXPECT_THROW(fo_cert_scheme(parse_formula("(existsset X (forall x (in x X)))"), 2), std::invalid_argument);
  EXPECT_THROW(fo_cert_scheme(max_degree_below_sentence(4), 2), std::invalid_argument);
}

TEST(FoScheme, AgreesWithEvaluate) {
  std::vector<Formula> sentences{triangle_free_sentence(), diameter2_sentence(), dominating_vertex_sentence()};
  for (const Formula& f : sentences) {
    auto s = fo_cert_scheme(f, 2);
    for (std::size_t n = 1; n <= 5; ++n) {
      for (const Graph& g : connected_graphs(n)) {
        if (treedepth_exact(g).edge_depth > 2) {
          continue;
        }
        EXPECT_EQ(check_completeness(*s, g).accepted, evaluate(g, f)) << to_string(f) << serialize_graph(g);
      }
    }
  }
}

}  // namespace
}  // namespace certilab
