#include <gtest/gtest.h>

#include <random>

#include "certilab/automata.hpp"
#include "certilab/corpus.hpp"
#include "certilab/errors.hpp"
#include "oracles.hpp"

namespace certilab {
namespace {

RootedTree fig1_tree() { return RootedTree(4, {{2, 4}, {6, 4}, {1, 2}, {3, 2}, {5, 6}, {7, 6}}); }

RootedTree star_at_center(std::size_t leaves) {
  std::map<VertexId, VertexId> parent;
  for (VertexId v = 2; v <= leaves + 1; ++v) {
    parent[v] = 1;
  }
  return RootedTree(1, parent);
}

RootedTree path_from_end(std::size_t n) {
  std::map<VertexId, VertexId> parent;
  for (VertexId v = 2; v <= n; ++v) {
    parent[v] = v - 1;
  }
  return RootedTree(1, parent);
}

std::vector<std::size_t> unlabeled(const RootedTree& t) { return std::vector<std::size_t>(t.size(), 0); }

// Every (counter, state) certificate in fingerprint mode, written independently
// of the scheme's encoder.
std::vector<Certificate> alphabet(const UopAutomaton& a) {
  std::vector<Certificate> out;
  for (unsigned counter = 0; counter < 3; ++counter) {
    for (std::size_t q = 0; q < a.states.size(); ++q) {
      BitWriter w;
      w.uint(counter, 2);
      w.uint(automaton_fingerprint(a), 16);
      w.uint(q, bit_width_for(a.states.size() - 1));
      out.push_back(w.finish());
    }
  }
  return out;
}

bool some_rooting_accepts(const Graph& tree, const UopAutomaton& a) {
  for (VertexId r : tree.ids()) {
    RootedTree t = root_tree(tree, r);
    if (oracle::run_exists(t, unlabeled(t), a)) {
      return true;
    }
  }
  return false;
}

TEST(Constraints, Examples) {
  std::vector<std::string> states{"q0", "q1"};
  auto ge2 = UopConstraint::parse("(<= 2 (var q0))", states);
  EXPECT_TRUE(ge2.eval({3}));
  EXPECT_FALSE(ge2.eval({1}));
  auto none = UopConstraint::parse("(not (<= 1 (var q1)))", states);
  EXPECT_TRUE(none.eval({}));
  auto both = UopConstraint::parse("(and (<= (var q0) 1) (<= (var q1) 0))", states);
  EXPECT_TRUE(both.eval({1}));
  EXPECT_FALSE(both.eval({1, 1}));
  auto sum = UopConstraint::parse("(<= (+ (var q0) (var q0)) 4)", states);
  EXPECT_TRUE(sum.eval({2}));
  EXPECT_FALSE(sum.eval({3}));
}

TEST(Constraints, RejectsNonUnary) {
  std::vector<std::string> states{"p", "q"};
  EXPECT_THROW(UopConstraint::parse("(<= (var p) (var q))", states), ParseError);
  EXPECT_THROW(UopConstraint::parse("(<= (+ (var p) (var q)) 2)", states), ParseError);
  EXPECT_THROW(UopConstraint::parse("(<= 1 (var r))", states), ParseError);
  EXPECT_THROW(UopConstraint::parse("(<= 1 (var p)", states), ParseError);
}

TEST(Constraints, TextRoundTrip) {
  std::vector<std::string> states{"p", "q"};
  auto c = UopConstraint::conj({UopConstraint::at_least(0, 2), UopConstraint::neg(UopConstraint::at_most(1, 3))});
  auto back = UopConstraint::parse(c.to_string(states), states);
  for (std::uint64_t x = 0; x < 6; ++x) {
    for (std::uint64_t y = 0; y < 6; ++y) {
      EXPECT_EQ(back.eval({x, y}), c.eval({x, y}));
    }
  }
  EXPECT_EQ(c.constant_sum(), 5u);
}

TEST(FindRun, Examples) {
  UopAutomaton h1 = height_at_most(1);
  RootedTree star = star_at_center(3);
  auto run = find_run(star, unlabeled(star), h1);
  ASSERT_TRUE(run);
  EXPECT_EQ((*run)[star.root_index()], h1.state_index("h1"));
  EXPECT_TRUE(is_accepting_run(star, unlabeled(star), h1, *run));
  RootedTree p3 = path_from_end(3);
  EXPECT_FALSE(find_run(p3, unlabeled(p3), h1).has_value());
  UopAutomaton empty = max_children(5);
  empty.accepting = {false};
  EXPECT_FALSE(find_run(star, unlabeled(star), empty).has_value());
}

TEST(FindRun, RejectsWrongRuns) {
  UopAutomaton h1 = height_at_most(1);
  RootedTree star = star_at_center(2);
  EXPECT_FALSE(is_accepting_run(star, unlabeled(star), h1, {0, 0, 0}));
  EXPECT_TRUE(is_accepting_run(star, unlabeled(star), h1, {1, 0, 0}));
}

TEST(Catalog, Examples) {
  RootedTree f = fig1_tree();
  EXPECT_TRUE(find_run(f, unlabeled(f), height_at_most(2)).has_value());
  EXPECT_FALSE(find_run(f, unlabeled(f), height_at_most(1)).has_value());
  RootedTree star = star_at_center(3);
  EXPECT_TRUE(find_run(star, unlabeled(star), exists_heavy_vertex(3)).has_value());
  EXPECT_FALSE(some_rooting_accepts(make_path(4), exists_heavy_vertex(3)));
}

TEST(Catalog, MaxChildrenOneMeansPath) {
  UopAutomaton a = max_children(1);
  for (std::size_t n = 1; n <= 6; ++n) {
    for (const RootedTree& t : rooted_trees(n)) {
      bool path = t.height() + 1 == t.size();
      EXPECT_EQ(find_run(t, unlabeled(t), a).has_value(), path);
    }
  }
}

TEST(Catalog, HeightMatchesTree) {
  for (std::size_t n = 1; n <= 6; ++n) {
    for (const RootedTree& t : rooted_trees(n)) {
      for (std::size_t d = 0; d <= 3; ++d) {
        EXPECT_EQ(find_run(t, unlabeled(t), height_at_most(d)).has_value(), t.height() <= d);
      }
    }
  }
}

TEST(FindRun, MatchesExhaustiveOracle) {
  std::mt19937_64 rng(21);
  for (int round = 0; round < 6; ++round) {
    std::size_t states = 1 + round % 3;
    UopAutomaton a = oracle::random_automaton(states, 2, rng);
    for (std::size_t n = 1; n <= 5; ++n) {
      for (const RootedTree& t : rooted_trees(n)) {
        for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
          std::vector<std::size_t> labels(n);
          for (std::size_t i = 0; i < n; ++i) {
            labels[i] = (mask >> i) & 1U;
          }
          auto run = find_run(t, labels, a);
          EXPECT_EQ(run.has_value(), oracle::run_exists(t, labels, a));
          if (run) {
            EXPECT_TRUE(is_accepting_run(t, labels, a, *run));
          }
        }
      }
    }
  }
}

TEST(FindRun, Caps) {
  UopAutomaton big = height_at_most(kRunStateCap);
  RootedTree p = path_from_end(2);
  EXPECT_THROW(find_run(p, unlabeled(p), big), CapExceeded);
}

TEST(AutomatonFile, RoundTrip) {
  for (const UopAutomaton& a : {height_at_most(3), max_children(2), exists_heavy_vertex(3)}) {
    std::string text = serialize_automaton(a);
    UopAutomaton b = parse_automaton(text);
    EXPECT_EQ(serialize_automaton(b), text);
    EXPECT_EQ(automaton_fingerprint(a), automaton_fingerprint(b));
  }
  EXPECT_NE(automaton_fingerprint(height_at_most(2)), automaton_fingerprint(height_at_most(3)));
}

TEST(AutomatonFile, Errors) {
  const std::string no_delta = R"j({"states":["q"],"labels":["v"],"accepting":["q"],"delta":[]})j";
  const std::string bad_accepting = R"j({"states":["q"],"labels":["v"],"accepting":["r"],)j"
                                    R"j("delta":[{"state":"q","label":"v","constraint":"(<= 0 (var q))"}]})j";
  const std::string good = R"j({"states":["q"],"labels":["v"],"accepting":["q"],)j"
                           R"j("delta":[{"state":"q","label":"v","constraint":"(<= 0 (var q))"}]})j";
  EXPECT_THROW(parse_automaton("{"), ParseError);
  EXPECT_THROW(parse_automaton(no_delta), ParseError);
  EXPECT_THROW(parse_automaton(bad_accepting), ParseError);
  EXPECT_NO_THROW(parse_automaton(good));
}

TEST(TreeScheme, Fig1ShapeAccepted) {
  Graph tree = tree_graph(fig1_tree());
  for (AutomatonMode mode : {AutomatonMode::kFingerprint, AutomatonMode::kFullDescription, AutomatonMode::kCompact}) {
    auto s = mso_tree_scheme(height_at_most(2), mode);
    Assignment a = *s->prove(tree).assignment;
    EXPECT_TRUE(run_verification(*s, tree, a).all());
    auto [rooting, run] = reconstruct_rooting(tree, a, height_at_most(2), mode);
    EXPECT_LE(rooting.height(), 2u);
  }
}

TEST(TreeScheme, LongPathHasNoForgery) {
  UopAutomaton a = height_at_most(2);
  auto s = mso_tree_scheme(a);
  Graph p7 = make_path(7);
  EXPECT_TRUE(s->prove(p7).refused());
  std::vector<std::vector<Certificate>> space(7, alphabet(a));
  auto r = backtrack_search(*s, p7, space, ~std::uint64_t{0});
  EXPECT_TRUE(r.complete);
  EXPECT_FALSE(r.accepted.has_value());
}

// Rooting is existential: P3 rooted at its middle has height 1.
TEST(TreeScheme, RootChoiceIsFree) {
  auto s = mso_tree_scheme(height_at_most(1));
  EXPECT_TRUE(check_completeness(*s, make_path(3)).accepted);
  EXPECT_TRUE(s->prove(make_path(4)).refused());
}

TEST(TreeScheme, ConstantSize) {
  auto s = mso_tree_scheme(height_at_most(2));
  auto m = mso_tree_scheme(max_children(2));
  std::optional<std::size_t> size;
  for (std::size_t n : {10u, 100u, 1000u}) {
    Assignment a = *m->prove(make_path(n)).assignment;
    for (const auto& c : a) {
      if (!size) {
        size = c.size();
      }
      EXPECT_EQ(c.size(), *size);
    }
  }
  EXPECT_EQ(*size, 2u + 16u + bit_width_for(0));
  EXPECT_EQ(s->prove(make_path(10)).refused(), true);
}

TEST(TreeScheme, CompactModeDropsTheName) {
  auto s = mso_tree_scheme(height_at_most(2), AutomatonMode::kCompact);
  Assignment a = *s->prove(make_star(4)).assignment;
  EXPECT_EQ(a.front().size(), 2u + 2u);
}

// The certificate alphabet is finite, so every accepted assignment on a small
// tree can be listed; each must carry a rooting with an accepting run.
TEST(TreeScheme, CompleteEnumerationOnSmallTrees) {
  for (const UopAutomaton& a : {height_at_most(1), max_children(1), exists_heavy_vertex(2)}) {
    auto s = mso_tree_scheme(a);
    for (std::size_t n = 1; n <= 5; ++n) {
      for (const Graph& tree : free_trees(n)) {
        bool truth = some_rooting_accepts(tree, a);
        std::size_t accepted = 0;
        std::vector<std::vector<Certificate>> space(n, alphabet(a));
        enumerate_accepted(*s, tree, space, [&](const Assignment& assignment) {
          ++accepted;
          auto [rooting, run] = reconstruct_rooting(tree, assignment, a, AutomatonMode::kFingerprint);
          EXPECT_TRUE(is_accepting_run(rooting, unlabeled(rooting), a, run));
          return true;
        });
        EXPECT_EQ(accepted > 0, truth) << serialize_graph(tree);
      }
    }
  }
}

TEST(TreeScheme, CycleLimitation) {
  // Mod-3 counters close up on C3, so the bare scheme needs the tree promise.
  auto s = mso_tree_scheme(max_children(2));
  std::vector<std::vector<Certificate>> space(3, alphabet(max_children(2)));
  auto r = backtrack_search(*s, make_cycle(3), space, ~std::uint64_t{0});
  EXPECT_TRUE(r.accepted.has_value());
}

}  // namespace
}  // namespace certilab
