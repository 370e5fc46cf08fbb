#include <gtest/gtest.h>

#include <random>

#include "certilab/corpus.hpp"
#include "certilab/errors.hpp"
#include "certilab/logic.hpp"

namespace certilab {
namespace {

TEST(Parse, HasEdge) {
  EXPECT_EQ(parse_formula("(exists x (exists y (adj x y)))"), has_edge_sentence());
}

TEST(Parse, RoundTrip) {
  for (const Formula& f : fo_sentence_pool(3, 40, 1)) {
    EXPECT_EQ(parse_formula(to_string(f)), f);
  }
  Formula mso = parse_formula("(existsset X (forall x (or (in x X) (not (in x X)))))");
  EXPECT_EQ(parse_formula(to_string(mso)), mso);
}

TEST(Parse, Errors) {
  EXPECT_THROW(parse_formula("(adj x y)"), ParseError);
  EXPECT_NO_THROW(parse_formula("(adj x y)", false));
  EXPECT_THROW(parse_formula("(exists x (adj x y)"), ParseError);
  EXPECT_THROW(parse_formula("(frobnicate x)"), ParseError);
  EXPECT_THROW(parse_formula("(exists x (in x y))"), ParseError);
}

TEST(Depth, NamedSentences) {
  EXPECT_EQ(quantifier_depth(diameter2_sentence()), 3u);
  EXPECT_EQ(quantifier_depth(triangle_free_sentence()), 3u);
  EXPECT_EQ(quantifier_depth(parse_formula("(adj x y)", false)), 0u);
  EXPECT_EQ(quantifier_depth(dominating_vertex_sentence()), 2u);
  EXPECT_EQ(quantifier_depth(max_degree_below_sentence(3)), 4u);
}

TEST(Depth, PrenexCountsQuantifiers) {
  Formula f = parse_formula("(forall x (exists y (forall z (or (adj x y) (= y z)))))");
  EXPECT_EQ(quantifier_depth(f), 3u);
}

TEST(Evaluate, Examples) {
  EXPECT_TRUE(evaluate(make_cycle(3), triangle_sentence()));
  EXPECT_FALSE(evaluate(make_cycle(5), triangle_sentence()));
  EXPECT_TRUE(evaluate(make_star(3), diameter2_sentence()));
  EXPECT_FALSE(evaluate(make_path(4), diameter2_sentence()));
  EXPECT_TRUE(evaluate(make_cycle(5), triangle_free_sentence()));
  EXPECT_TRUE(evaluate(make_star(5), dominating_vertex_sentence()));
  EXPECT_FALSE(evaluate(make_path(4), dominating_vertex_sentence()));
  EXPECT_TRUE(evaluate(make_clique(4), clique_sentence()));
  EXPECT_FALSE(evaluate(make_star(3), max_degree_below_sentence(3)));
  EXPECT_TRUE(evaluate(make_path(20), max_degree_below_sentence(3)));
}

TEST(Evaluate, SetQuantifiers) {
  // Two-colourability in MSO.
  Formula bip = parse_formula(
      "(existsset X (forall x (forall y (or (not (adj x y)) (and (in x X) (not (in y X))) "
      "(and (in y X) (not (in x X)))))))");
  EXPECT_TRUE(evaluate(make_cycle(6), bip));
  EXPECT_FALSE(evaluate(make_cycle(5), bip));
  EXPECT_THROW(evaluate(make_path(19), bip), CapExceeded);
}

TEST(Evaluate, FreeVariables) {
  Graph p = make_path(3);
  Formula f = parse_formula("(adj x y)", false);
  Environment env;
  env.vertices["x"] = 0;
  env.vertices["y"] = 1;
  EXPECT_TRUE(evaluate(p, f, env));
  env.vertices["y"] = 2;
  EXPECT_FALSE(evaluate(p, f, env));
  EXPECT_THROW(evaluate(p, f), GraphError);
}

TEST(Evaluate, IsomorphismInvariant) {
  std::mt19937_64 rng(13);
  auto pool = fo_sentence_pool(3, 15, 2);
  for (int i = 0; i < 25; ++i) {
    Graph g = random_connected_graph(7, 0.35, rng);
    std::vector<VertexId> perm(g.ids().begin(), g.ids().end());
    std::shuffle(perm.begin(), perm.end(), rng);
    std::map<VertexId, VertexId> m;
    for (VertexIndex v = 0; v < g.size(); ++v) {
      m[g.id(v)] = perm[v] * 3;
    }
    Graph h = relabel(g, m);
    for (const Formula& f : pool) {
      EXPECT_EQ(evaluate(g, f), evaluate(h, f));
    }
  }
}

TEST(Ef, Examples) {
  Graph p3 = make_path(3);
  Graph p4 = make_path(4);
  for (std::size_t k = 1; k <= 3; ++k) {
    EXPECT_TRUE(ef_equivalent(p4, p4, k));
  }
  EXPECT_FALSE(ef_equivalent(p3, p4, 2));
  EXPECT_TRUE(ef_equivalent(make_star(3), make_star(5), 3));
  EXPECT_FALSE(ef_equivalent(make_star(3), make_star(5), 4));
}

TEST(Ef, Caps) {
  EXPECT_THROW(ef_equivalent(make_path(13), make_path(13), 2), CapExceeded);
  EXPECT_THROW(ef_equivalent(make_path(3), make_path(3), 6), CapExceeded);
}

// Equivalent graphs agree on every pooled sentence of the same depth; for
// inequivalent ones the extracted sentence separates them.
TEST(Ef, AgreesWithSentences) {
  std::mt19937_64 rng(6);
  std::vector<std::vector<Formula>> pools{{}, fo_sentence_pool(1, 10, 3), fo_sentence_pool(2, 30, 3),
                                           fo_sentence_pool(3, 30, 3)};
  pools[2].push_back(dominating_vertex_sentence());
  pools[3].push_back(diameter2_sentence());
  pools[3].push_back(triangle_free_sentence());
  std::size_t equivalent = 0;
  std::size_t separated = 0;
  for (int i = 0; i < 120; ++i) {
    Graph g = random_connected_graph(2 + rng() % 5, 0.4, rng);
    Graph h = random_connected_graph(2 + rng() % 5, 0.4, rng);
    std::size_t k = 1 + rng() % 3;
    bool eq = ef_equivalent(g, h, k);
    auto witness = distinguishing_sentence(g, h, k);
    EXPECT_EQ(eq, !witness.has_value());
    if (eq) {
      ++equivalent;
      for (std::size_t d = 1; d <= k; ++d) {
        for (const Formula& f : pools[d]) {
          EXPECT_EQ(evaluate(g, f), evaluate(h, f)) << to_string(f);
        }
      }
    } else {
      ++separated;
      EXPECT_LE(quantifier_depth(*witness), k);
      EXPECT_TRUE(evaluate(g, *witness));
      EXPECT_FALSE(evaluate(h, *witness));
    }
  }
  EXPECT_GT(equivalent, 0u);
  EXPECT_GT(separated, 0u);
}

TEST(Pools, Deterministic) {
  EXPECT_EQ(fo_sentence_pool(3, 20, 9), fo_sentence_pool(3, 20, 9));
  for (const Formula& f : fo_sentence_pool(3, 50, 4)) {
    EXPECT_TRUE(free_variables(f).empty());
    EXPECT_LE(quantifier_depth(f), 3u);
    EXPECT_GE(quantifier_depth(f), 1u);
  }
  for (const Formula& f : existential_sentence_pool(3, 20, 4)) {
    EXPECT_TRUE(is_existential_prenex(f));
  }
}

}  // namespace
}  // namespace certilab
