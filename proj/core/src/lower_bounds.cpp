#include "certilab/lower_bounds.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <tuple>

#include "certilab/errors.hpp"

namespace certilab {

using boost::multiprecision::cpp_int;

namespace {

cpp_int bits_value(const Bits& s) {
  cpp_int v = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    v = (v << 1) | (s[i] ? 1 : 0);
  }
  return v;
}

cpp_int factorial(std::size_t n) {
  cpp_int f = 1;
  for (std::size_t i = 2; i <= n; ++i) {
    f *= i;
  }
  return f;
}

}  // namespace

bool check_layout(const GadgetLayout& layout) {
  enum Part { kA, kAlpha, kBeta, kB };
  std::map<VertexId, Part> part;
  auto add = [&](const std::vector<VertexId>& ids, Part p) {
    for (VertexId id : ids) {
      if (!part.emplace(id, p).second) {
        return false;
      }
    }
    return true;
  };
  if (!add(layout.v_a, kA) || !add(layout.v_alpha, kAlpha) || !add(layout.v_beta, kBeta) || !add(layout.v_b, kB)) {
    return false;
  }
  const Graph& g = layout.graph;
  if (part.size() != g.size()) {
    return false;
  }
  for (VertexId id : g.ids()) {
    if (!part.contains(id)) {
      return false;
    }
  }
  if (layout.u && (!part.contains(*layout.u) || part[*layout.u] != kAlpha)) {
    return false;
  }
  // V_alpha and V_beta are exactly the ids 1..r.
  std::set<VertexId> middle(layout.v_alpha.begin(), layout.v_alpha.end());
  middle.insert(layout.v_beta.begin(), layout.v_beta.end());
  if (middle.size() != layout.r || (layout.r > 0 && (*middle.begin() != 1 || *middle.rbegin() != layout.r))) {
    return false;
  }
  for (const auto& [x, y] : g.edges()) {
    Part a = std::min(part[x], part[y]);
    Part b = std::max(part[x], part[y]);
    if (b - a > 1) {
      return false;
    }
  }
  return true;
}

std::size_t matching_capacity(std::size_t n) {
  cpp_int f = factorial(n);
  return f <= 1 ? 0 : static_cast<std::size_t>(boost::multiprecision::msb(f));
}

Matching bitstring_to_matching(const Bits& s, std::size_t n) {
  cpp_int value = bits_value(s);
  if (value >= factorial(n)) {
    throw std::invalid_argument("string " + s.to_string() + " has no matching on " + std::to_string(n) +
                                " vertices");
  }
  std::vector<std::size_t> pool(n);
  for (std::size_t i = 0; i < n; ++i) {
    pool[i] = i;
  }
  Matching out;
  for (std::size_t i = 0; i < n; ++i) {
    cpp_int f = factorial(n - 1 - i);
    auto digit = static_cast<std::size_t>(value / f);
    value %= f;
    out.push_back(pool[digit]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(digit));
  }
  return out;
}

GadgetLayout treedepth_gadget(const Bits& s_a, const Bits& s_b, std::size_t n, std::size_t subdivision) {
  if (n == 0) {
    throw std::invalid_argument("treedepth_gadget needs n >= 1");
  }
  const Matching ma = bitstring_to_matching(s_a, n);
  const Matching mb = bitstring_to_matching(s_b, n);
  const std::size_t sv = subdivision;

  VertexId next = 1;
  // [row][i] -> chain of ids from alpha back towards A (alpha, then the
  // subdivision vertices on the A-alpha edge).
  std::vector<std::vector<std::vector<VertexId>>> alpha(2, std::vector<std::vector<VertexId>>(n));
  std::vector<std::vector<std::vector<VertexId>>> beta(2, std::vector<std::vector<VertexId>>(n));
  GadgetLayout layout{Graph({1}, {}), {}, {}, {}, {}, std::nullopt, 0};
  for (int row = 0; row < 2; ++row) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j <= sv; ++j) {
        alpha[row][i].push_back(next);
        layout.v_alpha.push_back(next++);
      }
    }
  }
  for (int row = 0; row < 2; ++row) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j <= sv; ++j) {
        beta[row][i].push_back(next);
        layout.v_beta.push_back(next++);
      }
    }
  }
  const VertexId u = next++;
  layout.u = u;
  layout.v_alpha.push_back(u);
  layout.r = u;
  std::vector<std::vector<VertexId>> a(2, std::vector<VertexId>(n));
  std::vector<std::vector<VertexId>> b(2, std::vector<VertexId>(n));
  for (int row = 0; row < 2; ++row) {
    for (std::size_t i = 0; i < n; ++i) {
      a[row][i] = next;
      layout.v_a.push_back(next++);
    }
  }
  for (int row = 0; row < 2; ++row) {
    for (std::size_t i = 0; i < n; ++i) {
      b[row][i] = next;
      layout.v_b.push_back(next++);
    }
  }

  std::vector<IdEdge> edges;
  for (int row = 0; row < 2; ++row) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto& al = alpha[row][i];
      const auto& be = beta[row][i];
      for (std::size_t j = 0; j + 1 < al.size(); ++j) {
        edges.emplace_back(al[j], al[j + 1]);
      }
      edges.emplace_back(al.back(), a[row][i]);
      edges.emplace_back(al.front(), be.front());
      for (std::size_t j = 0; j + 1 < be.size(); ++j) {
        edges.emplace_back(be[j], be[j + 1]);
      }
      edges.emplace_back(be.back(), b[row][i]);
      edges.emplace_back(u, al.front());
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    edges.emplace_back(a[0][i], a[1][ma[i]]);
    edges.emplace_back(b[0][i], b[1][mb[i]]);
  }
  std::vector<VertexId> ids;
  for (VertexId id = 1; id < next; ++id) {
    ids.push_back(id);
  }
  layout.graph = Graph(ids, edges, Graph::Limits{0});
  return layout;
}

// ---------------------------------------------------------------------------
// Rooted trees of bounded height, ranked.
//
// Trees of size m and height <= h are ordered by their forest of root
// subtrees. Forests of total size s with parts of size <= z list first those
// whose parts are all < z, then by the number j of size-z parts, then by the
// multiset of those parts' ranks, then by the rest.

namespace {

struct Shape {
  std::vector<Shape> kids;
};

class TreeCounter {
 public:
  cpp_int trees(std::size_t m, std::size_t h) {
    if (m == 1) {
      return 1;
    }
    if (h == 0 || m == 0) {
      return 0;
    }
    auto key = std::make_pair(m, h);
    if (auto it = trees_.find(key); it != trees_.end()) {
      return it->second;
    }
    cpp_int v = forests(m - 1, h - 1, m - 1);
    trees_[key] = v;
    return v;
  }

  // Forests of trees of height <= h, total size s, parts of size <= z.
  cpp_int forests(std::size_t s, std::size_t h, std::size_t z) {
    if (s == 0) {
      return 1;
    }
    if (z == 0) {
      return 0;
    }
    z = std::min(z, s);
    auto key = std::make_tuple(s, h, z);
    if (auto it = forests_.find(key); it != forests_.end()) {
      return it->second;
    }
    cpp_int v = forests(s, h, z - 1);
    const cpp_int nz = trees(z, h);
    for (std::size_t j = 1; j * z <= s; ++j) {
      v += multichoose(nz, j) * forests(s - j * z, h, z - 1);
    }
    forests_[key] = v;
    return v;
  }

  static cpp_int multichoose(const cpp_int& n, std::size_t j) {
    // C(n + j - 1, j)
    cpp_int num = 1;
    cpp_int den = 1;
    for (std::size_t i = 0; i < j; ++i) {
      num *= n + i;
      den *= i + 1;
    }
    return num / den;
  }

  Shape unrank(std::size_t m, std::size_t h, cpp_int rank) {
    Shape out;
    if (m > 1) {
      unrank_forest(m - 1, h - 1, m - 1, std::move(rank), out.kids);
    }
    return out;
  }

  cpp_int rank(const Shape& t, std::size_t h) {
    std::size_t m = size(t);
    if (m == 1) {
      return 0;
    }
    std::vector<std::pair<std::size_t, cpp_int>> parts;
    for (const auto& k : t.kids) {
      parts.emplace_back(size(k), rank(k, h - 1));
    }
    return rank_forest(m - 1, h - 1, m - 1, parts);
  }

  static std::size_t size(const Shape& t) {
    std::size_t s = 1;
    for (const auto& k : t.kids) {
      s += size(k);
    }
    return s;
  }

 private:
  void unrank_forest(std::size_t s, std::size_t h, std::size_t z, cpp_int rank, std::vector<Shape>& out) {
    while (s > 0) {
      z = std::min(z, s);
      cpp_int below = forests(s, h, z - 1);
      if (rank < below) {
        --z;
        continue;
      }
      rank -= below;
      const cpp_int nz = trees(z, h);
      for (std::size_t j = 1;; ++j) {
        if (j * z > s) {
          throw std::logic_error("tree unranking ran past its count");
        }
        const cpp_int rest = forests(s - j * z, h, z - 1);
        const cpp_int block = multichoose(nz, j) * rest;
        if (rank < block) {
          cpp_int pick = rank / rest;
          rank %= rest;
          for (const cpp_int& r : unrank_multiset(nz, j, pick)) {
            out.push_back(unrank(z, h, r));
          }
          s -= j * z;
          --z;
          break;
        }
        rank -= block;
      }
    }
  }

  cpp_int rank_forest(std::size_t s, std::size_t h, std::size_t z,
                      std::vector<std::pair<std::size_t, cpp_int>> parts) {
    cpp_int r = 0;
    while (s > 0) {
      z = std::min(z, s);
      std::size_t top = 0;
      for (const auto& p : parts) {
        top = std::max(top, p.first);
      }
      while (z > top) {
        --z;  // the forest lies in the "all parts smaller" block
      }
      r += forests(s, h, z - 1);
      std::vector<cpp_int> chosen;
      std::vector<std::pair<std::size_t, cpp_int>> rest_parts;
      for (auto& p : parts) {
        if (p.first == z) {
          chosen.push_back(p.second);
        } else {
          rest_parts.push_back(std::move(p));
        }
      }
      const std::size_t j = chosen.size();
      const cpp_int nz = trees(z, h);
      for (std::size_t jj = 1; jj < j; ++jj) {
        r += multichoose(nz, jj) * forests(s - jj * z, h, z - 1);
      }
      std::sort(chosen.begin(), chosen.end());
      const cpp_int rest = forests(s - j * z, h, z - 1);
      r += rank_multiset(nz, chosen) * rest;
      s -= j * z;
      --z;
      parts = std::move(rest_parts);
    }
    return r;
  }

  // Non-decreasing sequences of length j over [0, n), lexicographic.
  static std::vector<cpp_int> unrank_multiset(cpp_int n, std::size_t j, cpp_int idx) {
    std::vector<cpp_int> out;
    cpp_int offset = 0;
    for (; j > 0; --j) {
      const cpp_int total = multichoose(n, j);
      // Largest v with total - C(n - v + j - 1, j) <= idx.
      cpp_int lo = 0;
      cpp_int hi = n - 1;
      while (lo < hi) {
        cpp_int mid = (lo + hi + 1) / 2;
        if (total - multichoose(n - mid, j) <= idx) {
          lo = mid;
        } else {
          hi = mid - 1;
        }
      }
      idx -= total - multichoose(n - lo, j);
      out.push_back(offset + lo);
      offset += lo;
      n -= lo;
    }
    return out;
  }

  static cpp_int rank_multiset(cpp_int n, const std::vector<cpp_int>& seq) {
    cpp_int idx = 0;
    cpp_int offset = 0;
    std::size_t j = seq.size();
    for (const cpp_int& x : seq) {
      const cpp_int v = x - offset;
      idx += multichoose(n, j) - multichoose(n - v, j);
      offset = x;
      n -= v;
      --j;
    }
    return idx;
  }

  std::map<std::pair<std::size_t, std::size_t>, cpp_int> trees_;
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, cpp_int> forests_;
};

TreeCounter& counter() {
  thread_local TreeCounter c;
  return c;
}

RootedTree shape_to_tree(const Shape& s, VertexId first_id = 1) {
  std::map<VertexId, VertexId> parent;
  VertexId next = first_id;
  auto place = [&](auto&& self, const Shape& node) -> VertexId {
    VertexId id = next++;
    for (const auto& k : node.kids) {
      parent[self(self, k)] = id;
    }
    return id;
  };
  VertexId root = place(place, s);
  return RootedTree(root, parent);
}

Shape tree_to_shape(const RootedTree& t, VertexIndex v) {
  Shape s;
  for (VertexIndex c : t.children(v)) {
    s.kids.push_back(tree_to_shape(t, c));
  }
  return s;
}

}  // namespace

cpp_int rooted_tree_count(std::size_t m, std::size_t height) {
  if (m == 0) {
    return 0;
  }
  return counter().trees(m, height);
}

RootedTree unrank_tree(std::size_t m, std::size_t height, const cpp_int& rank) {
  if (rank < 0 || rank >= rooted_tree_count(m, height)) {
    throw std::invalid_argument("tree rank out of range");
  }
  return shape_to_tree(counter().unrank(m, height, rank));
}

cpp_int rank_tree(const RootedTree& t, std::size_t height) {
  if (t.height() > height) {
    throw std::invalid_argument("tree is higher than the bound");
  }
  return counter().rank(tree_to_shape(t, t.root_index()), height);
}

std::optional<std::size_t> tree_size_for(std::size_t len, std::size_t height) {
  const cpp_int need = cpp_int(1) << len;
  for (std::size_t m = 1; m < 64; ++m) {
    if (rooted_tree_count(m, height) >= need) {
      return m;
    }
  }
  return std::nullopt;
}

RootedTree bitstring_to_tree(const Bits& s, std::size_t height) {
  auto m = tree_size_for(s.size(), height);
  if (!m) {
    throw std::invalid_argument("no tree family of height " + std::to_string(height) + " holds " +
                                std::to_string(s.size()) + "-bit strings");
  }
  return unrank_tree(*m, height, bits_value(s));
}

GadgetLayout automorphism_gadget(const Bits& s_a, const Bits& s_b, std::size_t height) {
  if (s_a.size() != s_b.size()) {
    throw std::invalid_argument("automorphism_gadget needs strings of equal length");
  }
  const RootedTree ta = bitstring_to_tree(s_a, height);
  const RootedTree tb = bitstring_to_tree(s_b, height);
  const VertexId alpha = 1;
  const VertexId beta = 2;
  const VertexId a0 = 3;
  const VertexId b0 = a0 + ta.size();
  GadgetLayout layout{Graph({1}, {}), {}, {alpha}, {beta}, {}, std::nullopt, 2};
  std::vector<IdEdge> edges{{alpha, beta}};
  auto hang = [&](const RootedTree& t, VertexId base, std::vector<VertexId>& part, VertexId anchor) {
    for (VertexId id : t.nodes()) {
      part.push_back(base + id - 1);
    }
    for (const auto& [child, parent] : t.parent_map()) {
      edges.emplace_back(base + parent - 1, base + child - 1);
    }
    edges.emplace_back(anchor, base + t.root() - 1);
  };
  hang(ta, a0, layout.v_a, alpha);
  hang(tb, b0, layout.v_b, beta);
  std::vector<VertexId> ids;
  for (VertexId id = 1; id < b0 + tb.size(); ++id) {
    ids.push_back(id);
  }
  layout.graph = Graph(ids, edges, Graph::Limits{0});
  return layout;
}

bool has_fpf_automorphism(const Graph& g, std::size_t cap) {
  const std::size_t n = g.size();
  if (n > cap) {
    throw CapExceeded("automorphism search capped at " + std::to_string(cap) + " vertices");
  }
  // BFS order, so each vertex after the first has an already mapped neighbour.
  std::vector<VertexIndex> order;
  std::vector<bool> seen(n, false);
  std::deque<VertexIndex> queue{0};
  seen[0] = true;
  while (!queue.empty()) {
    VertexIndex v = queue.front();
    queue.pop_front();
    order.push_back(v);
    for (VertexIndex w : g.neighbors(v)) {
      if (!seen[w]) {
        seen[w] = true;
        queue.push_back(w);
      }
    }
  }
  std::vector<std::optional<VertexIndex>> image(n);
  std::vector<bool> used(n, false);
  auto extend = [&](auto&& self, std::size_t pos) -> bool {
    if (pos == n) {
      return true;
    }
    VertexIndex v = order[pos];
    for (VertexIndex w = 0; w < n; ++w) {
      if (w == v || used[w] || g.degree(w) != g.degree(v)) {
        continue;
      }
      bool ok = true;
      for (std::size_t i = 0; i < pos && ok; ++i) {
        VertexIndex x = order[i];
        ok = g.adjacent(v, x) == g.adjacent(w, *image[x]);
      }
      if (!ok) {
        continue;
      }
      image[v] = w;
      used[w] = true;
      if (self(self, pos + 1)) {
        return true;
      }
      used[w] = false;
      image[v].reset();
    }
    return false;
  };
  return extend(extend, 0);
}

UopAutomaton isomorphic_to(const RootedTree& t) {
  // Shape ids bottom-up: a shape is the sorted list of its children's shapes.
  std::map<std::vector<std::size_t>, std::size_t> ids;
  std::vector<std::vector<std::size_t>> shapes;
  std::vector<std::size_t> shape_of(t.size(), 0);
  std::vector<VertexIndex> order(t.size());
  for (VertexIndex v = 0; v < t.size(); ++v) {
    order[v] = v;
  }
  std::sort(order.begin(), order.end(), [&](VertexIndex a, VertexIndex b) { return t.depth(a) > t.depth(b); });
  for (VertexIndex v : order) {
    std::vector<std::size_t> kids;
    for (VertexIndex c : t.children(v)) {
      kids.push_back(shape_of[c]);
    }
    std::sort(kids.begin(), kids.end());
    auto [it, inserted] = ids.try_emplace(kids, shapes.size());
    if (inserted) {
      shapes.push_back(kids);
    }
    shape_of[v] = it->second;
  }
  const std::size_t k = shapes.size();
  if (k > kRunStateCap) {
    throw CapExceeded("tree has " + std::to_string(k) + " subtree shapes, cap is " + std::to_string(kRunStateCap));
  }
  UopAutomaton a;
  for (std::size_t i = 0; i < k; ++i) {
    a.states.push_back("s" + std::to_string(i));
  }
  a.labels = {"v"};
  a.accepting.assign(k, false);
  a.accepting[shape_of[t.root_index()]] = true;
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<UopConstraint> parts;
    for (std::size_t q = 0; q < k; ++q) {
      auto c = static_cast<std::uint64_t>(std::count(shapes[i].begin(), shapes[i].end(), q));
      parts.push_back(UopConstraint::at_most(q, c));
      if (c > 0) {
        parts.push_back(UopConstraint::at_least(q, c));
      }
    }
    a.delta.push_back({UopConstraint::conj(std::move(parts))});
  }
  return a;
}

// ---------------------------------------------------------------------------
// Two-party simulation

namespace {

Assignment with_prover_string(const GadgetLayout& layout, const Bits& s_p, unsigned q) {
  if (s_p.size() != layout.r * q) {
    throw std::invalid_argument("prover string must have r * q bits");
  }
  Assignment a(layout.graph.size());
  for (VertexId id = 1; id <= layout.r; ++id) {
    Bits piece;
    for (unsigned i = 0; i < q; ++i) {
      piece.push_back(s_p[(id - 1) * q + i]);
    }
    a[layout.graph.index(id)] = std::move(piece);
  }
  return a;
}

bool side_accepts(const Scheme& s, const GadgetLayout& layout, const std::vector<VertexId>& free,
                  const std::vector<VertexId>& middle, const Bits& s_p, unsigned q, std::size_t max_side_bits) {
  const Graph& g = layout.graph;
  const std::size_t bits = q * free.size();
  if (bits > max_side_bits) {
    throw CapExceeded("side labeling space has " + std::to_string(bits) + " bits, cap is " +
                      std::to_string(max_side_bits));
  }
  Assignment a = with_prover_string(layout, s_p, q);
  std::vector<VertexIndex> checked;
  for (VertexId id : free) {
    checked.push_back(g.index(id));
  }
  for (VertexId id : middle) {
    checked.push_back(g.index(id));
  }
  for (std::uint64_t labeling = 0; labeling < (std::uint64_t{1} << bits); ++labeling) {
    for (std::size_t i = 0; i < free.size(); ++i) {
      a[g.index(free[i])] = Bits::from_uint((labeling >> (i * q)) & ((std::uint64_t{1} << q) - 1), q);
    }
    bool all = true;
    for (VertexIndex v : checked) {
      if (!s.verify(make_view(g, a, v))) {
        all = false;
        break;
      }
    }
    if (all) {
      return true;
    }
  }
  return false;
}

}  // namespace

bool alice_accepts(const Scheme& s, const GadgetFamily& family, const Bits& s_a, const Bits& s_p, unsigned q,
                   std::size_t max_side_bits) {
  GadgetLayout layout = family(s_a, s_a);
  return side_accepts(s, layout, layout.v_a, layout.v_alpha, s_p, q, max_side_bits);
}

bool bob_accepts(const Scheme& s, const GadgetFamily& family, const Bits& s_b, const Bits& s_p, unsigned q,
                 std::size_t max_side_bits) {
  GadgetLayout layout = family(s_b, s_b);
  return side_accepts(s, layout, layout.v_b, layout.v_beta, s_p, q, max_side_bits);
}

ProtocolResult simulate_cc_protocol(const Scheme& s, const GadgetFamily& family, const Bits& s_a, const Bits& s_b,
                                    const ProtocolOptions& options) {
  const unsigned q = options.q;
  if (q == 0 || q > 16) {
    throw std::invalid_argument("q must be in [1, 16]");
  }
  const GadgetLayout la = family(s_a, s_a);
  const GadgetLayout lb = family(s_b, s_b);
  if (la.r != lb.r) {
    throw std::invalid_argument("the two sides disagree on r");
  }
  const std::size_t bits = la.r * q;
  ProtocolResult result;
  auto attempt = [&](const Bits& s_p) {
    ++result.prover_strings;
    if (side_accepts(s, la, la.v_a, la.v_alpha, s_p, q, options.max_side_bits) &&
        side_accepts(s, lb, lb.v_b, lb.v_beta, s_p, q, options.max_side_bits)) {
      result.accepted = true;
      result.witness = s_p;
      return true;
    }
    return false;
  };
  auto to_bits = [&](std::uint64_t v) {
    Bits b;
    for (std::size_t i = bits; i-- > 0;) {
      b.push_back(((v >> i) & 1U) != 0);
    }
    return b;
  };
  if (bits <= options.exhaustive_prover_bits) {
    result.exhaustive = true;
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << bits); ++v) {
      if (attempt(to_bits(v))) {
        return result;
      }
    }
    return result;
  }
  std::mt19937_64 rng(options.seed);
  std::bernoulli_distribution coin(0.5);
  for (std::uint64_t i = 0; i < options.sampled_prover_strings; ++i) {
    Bits b;
    for (std::size_t j = 0; j < bits; ++j) {
      b.push_back(coin(rng));
    }
    if (attempt(b)) {
      return result;
    }
  }
  return result;
}

Bits prover_string(const GadgetLayout& layout, const Assignment& a, unsigned q) {
  Bits out;
  for (VertexId id = 1; id <= layout.r; ++id) {
    const Bits& c = a.at(layout.graph.index(id));
    if (c.size() != q) {
      throw std::invalid_argument("certificate of vertex " + std::to_string(id) + " does not have q bits");
    }
    out.append(c);
  }
  return out;
}

}  // namespace certilab
