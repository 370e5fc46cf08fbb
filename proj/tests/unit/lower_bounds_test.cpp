#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "certilab/automata.hpp"
#include "certilab/corpus.hpp"
#include "certilab/errors.hpp"
#include "certilab/lower_bounds.hpp"
#include "certilab/treedepth.hpp"
#include "oracles.hpp"

namespace certilab {
namespace {

using boost::multiprecision::cpp_int;

Bits bits(const std::string& s) { return Bits::from_string(s); }

std::vector<Bits> all_strings(std::size_t len) {
  std::vector<Bits> out;
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << len); ++v) {
    out.push_back(Bits::from_uint(v, static_cast<unsigned>(len)));
  }
  return out;
}

// Connected components of g - u, as vertex counts and edge counts.
std::vector<std::pair<std::size_t, std::size_t>> components_without(const Graph& g, VertexId u) {
  std::vector<bool> seen(g.size(), false);
  seen[g.index(u)] = true;
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (VertexIndex s = 0; s < g.size(); ++s) {
    if (seen[s]) {
      continue;
    }
    std::vector<VertexIndex> stack{s};
    seen[s] = true;
    std::size_t vertices = 0;
    std::size_t degree_sum = 0;
    while (!stack.empty()) {
      VertexIndex v = stack.back();
      stack.pop_back();
      ++vertices;
      for (VertexIndex w : g.neighbors(v)) {
        if (g.id(w) == u) {
          continue;
        }
        ++degree_sum;
        if (!seen[w]) {
          seen[w] = true;
          stack.push_back(w);
        }
      }
    }
    out.emplace_back(vertices, degree_sum / 2);
  }
  std::sort(out.begin(), out.end());
  return out;
}

TEST(Matching, Examples) {
  EXPECT_EQ(bitstring_to_matching(bits("0"), 2), (Matching{0, 1}));
  EXPECT_EQ(bitstring_to_matching(bits("1"), 2), (Matching{1, 0}));
  EXPECT_EQ(matching_capacity(3), 2u);
  std::set<Matching> distinct;
  for (std::uint64_t v = 0; v < 4; ++v) {
    Matching m = bitstring_to_matching(Bits::from_uint(v, 2), 3);
    EXPECT_EQ(m, oracle::nth_permutation(3, v));
    distinct.insert(m);
  }
  EXPECT_EQ(distinct.size(), 4u);
  EXPECT_THROW(bitstring_to_matching(bits("11"), 2), std::invalid_argument);
  EXPECT_NO_THROW(bitstring_to_matching(bits("01"), 2));
}

TEST(Matching, LehmerOrderUpToFive) {
  for (std::size_t n = 1; n <= 5; ++n) {
    std::size_t cap = matching_capacity(n);
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << cap); ++v) {
      EXPECT_EQ(bitstring_to_matching(Bits::from_uint(v, static_cast<unsigned>(cap)), n),
                oracle::nth_permutation(n, v));
    }
  }
}

TEST(TreedepthGadget, LayoutAndIds) {
  for (std::size_t n = 1; n <= 3; ++n) {
    for (std::size_t sv = 0; sv <= 1; ++sv) {
      auto g = treedepth_gadget(Bits{}, Bits{}, n, sv);
      EXPECT_TRUE(check_layout(g));
      EXPECT_EQ(g.r, 4 * n * (1 + sv) + 1);
      ASSERT_TRUE(g.u);
      EXPECT_EQ(*g.u, g.r);
      EXPECT_EQ(g.graph.size(), g.r + 4 * n);
    }
  }
}

TEST(TreedepthGadget, EqualStringsGiveEightCycles) {
  for (std::size_t sv = 0; sv <= 1; ++sv) {
    auto g = treedepth_gadget(bits("1"), bits("1"), 2, sv);
    auto comps = components_without(g.graph, *g.u);
    std::size_t len = 8 + 4 * sv;
    EXPECT_EQ(comps, (std::vector<std::pair<std::size_t, std::size_t>>{{len, len}, {len, len}}));
  }
}

TEST(TreedepthGadget, UnequalStringsGiveOneLongCycle) {
  auto g = treedepth_gadget(bits("0"), bits("1"), 2, 0);
  auto comps = components_without(g.graph, *g.u);
  EXPECT_EQ(comps, (std::vector<std::pair<std::size_t, std::size_t>>{{16, 16}}));
}

TEST(TreedepthGadget, CopsGap) {
  EXPECT_EQ(cops_robber_number(treedepth_gadget(Bits{}, Bits{}, 1).graph), 5u);
  EXPECT_EQ(cops_robber_number(treedepth_gadget(bits("0"), bits("0"), 2).graph), 5u);
  EXPECT_EQ(cops_robber_number(treedepth_gadget(bits("0"), bits("1"), 2).graph), 6u);
}

TEST(TreedepthGadget, BrokenLayoutsDetected) {
  auto g = treedepth_gadget(bits("0"), bits("0"), 2);
  auto swapped = g;
  std::swap(swapped.v_alpha, swapped.v_beta);
  EXPECT_FALSE(check_layout(swapped));
  auto moved = g;
  moved.v_b.push_back(moved.v_a.back());
  moved.v_a.pop_back();
  EXPECT_FALSE(check_layout(moved));
}

TEST(TreeRanking, CountsMatchCorpus) {
  for (std::size_t m = 1; m <= 7; ++m) {
    for (std::size_t h = 0; h <= 4; ++h) {
      std::size_t expected = 0;
      for (const RootedTree& t : rooted_trees(m)) {
        expected += t.height() <= h ? 1 : 0;
      }
      EXPECT_EQ(rooted_tree_count(m, h), cpp_int(expected)) << m << " " << h;
    }
  }
  // Height 1 has one tree per size; height 2 follows the partitions of m - 1.
  EXPECT_EQ(rooted_tree_count(9, 1), cpp_int(1));
  EXPECT_EQ(rooted_tree_count(5, 2), cpp_int(5));
  EXPECT_EQ(rooted_tree_count(11, 2), cpp_int(42));
}

TEST(TreeRanking, RoundTrip) {
  for (std::size_t m = 1; m <= 7; ++m) {
    for (std::size_t h = 1; h <= 3; ++h) {
      cpp_int count = rooted_tree_count(m, h);
      for (cpp_int i = 0; i < count; ++i) {
        RootedTree t = unrank_tree(m, h, i);
        EXPECT_EQ(t.size(), m);
        EXPECT_LE(t.height(), h);
        EXPECT_EQ(rank_tree(t, h), i);
      }
    }
  }
  // Corpus trees rank and unrank to an isomorphic tree.
  for (const RootedTree& t : rooted_trees(6)) {
    if (t.height() <= 3) {
      RootedTree back = unrank_tree(6, 3, rank_tree(t, 3));
      EXPECT_EQ(rank_tree(back, 3), rank_tree(t, 3));
      EXPECT_EQ(back.height(), t.height());
    }
  }
}

TEST(TreeRanking, BitStrings) {
  RootedTree single = bitstring_to_tree(Bits{}, 2);
  EXPECT_EQ(single.size(), 1u);
  EXPECT_EQ(tree_size_for(2, 2), 5u);
  std::set<cpp_int> ranks;
  for (const Bits& s : all_strings(2)) {
    RootedTree t = bitstring_to_tree(s, 2);
    EXPECT_EQ(t.size(), 5u);
    ranks.insert(rank_tree(t, 2));
  }
  EXPECT_EQ(ranks.size(), 4u);
  EXPECT_FALSE(tree_size_for(1, 1).has_value());
  EXPECT_THROW(bitstring_to_tree(bits("1"), 1), std::invalid_argument);
}

TEST(Automorphisms, Examples) {
  EXPECT_TRUE(has_fpf_automorphism(make_cycle(4)));
  EXPECT_FALSE(has_fpf_automorphism(make_path(3)));
  EXPECT_FALSE(has_fpf_automorphism(make_star(3)));
  EXPECT_TRUE(has_fpf_automorphism(make_path(4)));
  EXPECT_THROW(has_fpf_automorphism(make_path(17)), CapExceeded);
}

TEST(Automorphisms, AgreesWithPermutationOracle) {
  for (std::size_t n = 1; n <= 6; ++n) {
    for (const Graph& g : connected_graphs(n)) {
      EXPECT_EQ(has_fpf_automorphism(g), oracle::fpf_by_permutations(g)) << serialize_graph(g);
    }
  }
  std::mt19937_64 rng(31);
  for (int i = 0; i < 40; ++i) {
    Graph g = random_connected_graph(7 + rng() % 3, 0.3, rng);
    EXPECT_EQ(has_fpf_automorphism(g), oracle::fpf_by_permutations(g));
  }
}

TEST(AutomorphismGadget, SingleNodesGiveP4) {
  auto g = automorphism_gadget(Bits{}, Bits{}, 2);
  EXPECT_TRUE(isomorphic(g.graph, make_path(4)));
  EXPECT_TRUE(check_layout(g));
  EXPECT_EQ(g.r, 2u);
  EXPECT_TRUE(has_fpf_automorphism(g.graph));
}

TEST(AutomorphismGadget, FpfIffEqual) {
  for (std::size_t len = 1; len <= 2; ++len) {
    for (const Bits& a : all_strings(len)) {
      for (const Bits& b : all_strings(len)) {
        auto g = automorphism_gadget(a, b, 2);
        EXPECT_TRUE(check_layout(g));
        EXPECT_EQ(has_fpf_automorphism(g.graph), a == b) << a.to_string() << " " << b.to_string();
      }
    }
  }
}

TEST(IsomorphicTo, AcceptsExactlyTheShape) {
  for (std::size_t n = 1; n <= 6; ++n) {
    auto trees = free_trees(n);
    for (const Graph& target : trees) {
      UopAutomaton a = isomorphic_to(root_tree(target, target.id(0)));
      auto s = mso_tree_scheme(a);
      for (const Graph& other : trees) {
        EXPECT_EQ(check_completeness(*s, other).accepted, isomorphic(target, other));
      }
    }
  }
}

GadgetFamily automorphism_family() {
  return [](const Bits& a, const Bits& b) { return automorphism_gadget(a, b, 2); };
}

GadgetFamily treedepth_family(std::size_t n) {
  return [n](const Bits& a, const Bits& b) { return treedepth_gadget(a, b, n); };
}

bool global_acceptance(const Scheme& s, const GadgetFamily& family, const Bits& a, const Bits& b, unsigned q) {
  return oracle::some_q_bit_assignment_accepted(s, family(a, b).graph, q);
}

TEST(Protocol, MatchesGlobalSearch) {
  auto coloring = oracle::two_coloring_scheme();
  auto rooting = oracle::rooting_scheme();
  struct Case {
    const Scheme* scheme;
    unsigned q;
  };
  for (Case c : {Case{coloring.get(), 1}, Case{rooting.get(), 2}}) {
    GadgetFamily family = automorphism_family();
    for (const Bits& a : all_strings(1)) {
      for (const Bits& b : all_strings(1)) {
        ProtocolOptions options;
        options.q = c.q;
        auto r = simulate_cc_protocol(*c.scheme, family, a, b, options);
        EXPECT_TRUE(r.exhaustive);
        EXPECT_EQ(r.accepted, global_acceptance(*c.scheme, family, a, b, c.q));
      }
    }
  }
}

TEST(Protocol, HonestProverStringIsAccepted) {
  auto s = oracle::two_coloring_scheme();
  auto layout = automorphism_gadget(bits("1"), bits("1"), 2);
  Assignment honest(layout.graph.size());
  RootedTree rooted = root_tree(layout.graph, 1);
  for (VertexIndex v = 0; v < layout.graph.size(); ++v) {
    honest[v].push_back(rooted.depth(rooted.index(layout.graph.id(v))) % 2 == 1);
  }
  ASSERT_TRUE(run_verification(*s, layout.graph, honest).all());
  Bits sp = prover_string(layout, honest, 1);
  EXPECT_EQ(sp.size(), 2u);
  EXPECT_TRUE(alice_accepts(*s, automorphism_family(), bits("1"), sp, 1));
  EXPECT_TRUE(bob_accepts(*s, automorphism_family(), bits("1"), sp, 1));
  Bits same;
  same.push_back(sp[0]);
  same.push_back(sp[0]);
  EXPECT_FALSE(alice_accepts(*s, automorphism_family(), bits("1"), same, 1));
}

TEST(Protocol, TreeSchemeSeparatesStrings) {
  // A scheme for "isomorphic to the gadget of 1/1" accepts that gadget and
  // nothing else; the protocol must agree.
  auto target = automorphism_gadget(bits("1"), bits("1"), 2);
  UopAutomaton a = isomorphic_to(root_tree(target.graph, 1));
  auto s = mso_tree_scheme(a, AutomatonMode::kCompact);
  GadgetFamily family = automorphism_family();
  ProtocolOptions options;
  options.q = static_cast<unsigned>(2 + bit_width_for(a.states.size() - 1));
  options.max_side_bits = 22;
  auto yes = simulate_cc_protocol(*s, family, bits("1"), bits("1"), options);
  EXPECT_TRUE(yes.accepted);
  auto no = simulate_cc_protocol(*s, family, bits("1"), bits("0"), options);
  EXPECT_FALSE(no.accepted);
  EXPECT_TRUE(no.exhaustive);
}

TEST(Protocol, SideCap) {
  auto s = oracle::two_coloring_scheme();
  ProtocolOptions options;
  options.max_side_bits = 1;
  EXPECT_THROW(simulate_cc_protocol(*s, treedepth_family(1), Bits{}, Bits{}, options), CapExceeded);
}

}  // namespace
}  // namespace certilab
