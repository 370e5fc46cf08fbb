#include "certilab/corpus.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "certilab/errors.hpp"

namespace certilab {

namespace {

using Code = std::vector<std::uint64_t>;

class Canonizer {
 public:
  explicit Canonizer(const Graph& g) : g_(g), n_(g.size()) {}

  Code run() {
    std::vector<std::size_t> colors(n_, 0);
    refine(colors);
    search(colors);
    return best_;
  }

 private:
  // Colour refinement; colours are ranks of (old colour, neighbour colours).
  void refine(std::vector<std::size_t>& colors) const {
    std::size_t classes = count_classes(colors);
    while (true) {
      std::vector<std::pair<std::vector<std::size_t>, VertexIndex>> sig(n_);
      for (VertexIndex v = 0; v < n_; ++v) {
        std::vector<std::size_t> s{colors[v]};
        for (VertexIndex w : g_.neighbors(v)) {
          s.push_back(colors[w]);
        }
        std::sort(s.begin() + 1, s.end());
        sig[v] = {std::move(s), v};
      }
      std::vector<std::vector<std::size_t>> keys;
      keys.reserve(n_);
      for (auto& [s, v] : sig) {
        keys.push_back(s);
      }
      std::sort(keys.begin(), keys.end());
      keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
      for (VertexIndex v = 0; v < n_; ++v) {
        colors[v] = static_cast<std::size_t>(std::lower_bound(keys.begin(), keys.end(), sig[v].first) -
                                             keys.begin());
      }
      if (keys.size() == classes) {
        return;
      }
      classes = keys.size();
    }
  }

  static std::size_t count_classes(const std::vector<std::size_t>& colors) {
    std::set<std::size_t> s(colors.begin(), colors.end());
    return s.size();
  }

  bool twins(VertexIndex u, VertexIndex v) const {
    std::vector<VertexIndex> a;
    std::vector<VertexIndex> b;
    for (VertexIndex w : g_.neighbors(u)) {
      if (w != v) {
        a.push_back(w);
      }
    }
    for (VertexIndex w : g_.neighbors(v)) {
      if (w != u) {
        b.push_back(w);
      }
    }
    return a == b;
  }

  void search(const std::vector<std::size_t>& colors) {
    // Smallest non-singleton cell.
    std::map<std::size_t, std::vector<VertexIndex>> cells;
    for (VertexIndex v = 0; v < n_; ++v) {
      cells[colors[v]].push_back(v);
    }
    const std::vector<VertexIndex>* target = nullptr;
    for (const auto& [c, members] : cells) {
      if (members.size() > 1 && (target == nullptr || members.size() < target->size())) {
        target = &members;
      }
    }
    if (target == nullptr) {
      leaf(colors);
      return;
    }
    std::vector<VertexIndex> branch = *target;
    if (std::all_of(branch.begin() + 1, branch.end(), [&](VertexIndex v) { return twins(branch[0], v); })) {
      branch.resize(1);
    }
    for (VertexIndex v : branch) {
      std::vector<std::size_t> next(n_);
      for (VertexIndex w = 0; w < n_; ++w) {
        next[w] = 2 * colors[w] + 1;
      }
      next[v] = 2 * colors[v];
      refine(next);
      search(next);
    }
  }

  void leaf(const std::vector<std::size_t>& colors) {
    std::vector<VertexIndex> at(n_);
    for (VertexIndex v = 0; v < n_; ++v) {
      at[colors[v]] = v;
    }
    Code code{n_};
    std::uint64_t word = 0;
    unsigned used = 0;
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = i + 1; j < n_; ++j) {
        word = (word << 1) | (g_.adjacent(at[i], at[j]) ? 1U : 0U);
        if (++used == 64) {
          code.push_back(word);
          word = 0;
          used = 0;
        }
      }
    }
    if (used > 0) {
      code.push_back(word << (64 - used));
    }
    if (best_.empty() || code < best_) {
      best_ = std::move(code);
    }
  }

  const Graph& g_;
  std::size_t n_;
  Code best_;
};

Graph with_contiguous_ids(std::size_t n, const std::vector<IdEdge>& edges) {
  std::vector<VertexId> ids(n);
  std::iota(ids.begin(), ids.end(), VertexId{1});
  return Graph(ids, edges, Graph::Limits{0});
}

}  // namespace

std::vector<std::uint64_t> canonical_code(const Graph& g) { return Canonizer(g).run(); }

bool isomorphic(const Graph& a, const Graph& b) {
  return a.size() == b.size() && a.edge_count() == b.edge_count() && canonical_code(a) == canonical_code(b);
}

std::vector<Graph> connected_graphs(std::size_t n) {
  if (n == 0) {
    throw GraphError("connected_graphs: n must be positive");
  }
  std::vector<Graph> current{with_contiguous_ids(1, {})};
  for (std::size_t m = 2; m <= n; ++m) {
    std::set<Code> seen;
    std::vector<Graph> next;
    for (const auto& base : current) {
      auto edges = base.edges();
      for (std::uint64_t subset = 1; subset < (std::uint64_t{1} << (m - 1)); ++subset) {
        auto extended = edges;
        for (std::size_t v = 0; v + 1 < m; ++v) {
          if ((subset >> v) & 1U) {
            extended.emplace_back(v + 1, m);
          }
        }
        Graph candidate = with_contiguous_ids(m, extended);
        if (seen.insert(canonical_code(candidate)).second) {
          next.push_back(std::move(candidate));
        }
      }
    }
    current = std::move(next);
  }
  return current;
}

std::vector<Graph> free_trees(std::size_t n) {
  std::set<Code> seen;
  std::vector<Graph> out;
  for (const auto& t : rooted_trees(n)) {
    Graph g = tree_graph(t);
    if (seen.insert(canonical_code(g)).second) {
      out.push_back(std::move(g));
    }
  }
  return out;
}

std::vector<RootedTree> rooted_trees(std::size_t n) {
  if (n == 0) {
    throw GraphError("rooted_trees: n must be positive");
  }
  // shapes[s] = list of shapes of size s, each a sorted (non-increasing) list
  // of (size, index) child references.
  using Ref = std::pair<std::size_t, std::size_t>;
  std::vector<std::vector<std::vector<Ref>>> shapes(n + 1);
  shapes[1].push_back({});
  for (std::size_t s = 2; s <= n; ++s) {
    // Multisets of child refs with total size s - 1, generated in
    // non-increasing ref order.
    std::vector<Ref> stack;
    auto extend = [&](auto&& self, std::size_t remaining, Ref max_ref) -> void {
      if (remaining == 0) {
        shapes[s].push_back(stack);
        return;
      }
      for (std::size_t size = std::min(remaining, max_ref.first); size >= 1; --size) {
        std::size_t limit = size == max_ref.first ? max_ref.second : shapes[size].size() - 1;
        for (std::size_t idx = 0; idx <= limit; ++idx) {
          stack.emplace_back(size, idx);
          self(self, remaining - size, Ref{size, idx});
          stack.pop_back();
        }
      }
    };
    extend(extend, s - 1, Ref{s - 1, shapes[s - 1].size() - 1});
  }
  std::vector<RootedTree> out;
  for (const auto& top : shapes[n]) {
    std::map<VertexId, VertexId> parent;
    VertexId next_id = 1;
    auto place = [&](auto&& self, const std::vector<Ref>& children, VertexId me) -> void {
      for (const auto& [size, idx] : children) {
        VertexId child = ++next_id;
        parent[child] = me;
        self(self, shapes[size][idx], child);
      }
    };
    place(place, top, 1);
    out.emplace_back(1, parent);
  }
  return out;
}

Graph tree_graph(const RootedTree& t) {
  std::vector<IdEdge> edges;
  for (const auto& [child, par] : t.parent_map()) {
    edges.emplace_back(std::min(child, par), std::max(child, par));
  }
  return Graph(std::vector<VertexId>(t.nodes().begin(), t.nodes().end()), edges, Graph::Limits{0});
}

Graph random_connected_graph(std::size_t n, double p, std::mt19937_64& rng) {
  if (n == 0) {
    throw GraphError("random_connected_graph: n must be positive");
  }
  std::vector<VertexId> ids(n);
  std::iota(ids.begin(), ids.end(), VertexId{1});
  std::shuffle(ids.begin(), ids.end(), rng);
  std::set<IdEdge> edges;
  auto add = [&](std::size_t a, std::size_t b) {
    edges.emplace(std::min(ids[a], ids[b]), std::max(ids[a], ids[b]));
  };
  for (std::size_t v = 1; v < n; ++v) {
    add(v, std::uniform_int_distribution<std::size_t>(0, v - 1)(rng));
  }
  std::bernoulli_distribution coin(p);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (coin(rng)) {
        add(a, b);
      }
    }
  }
  std::sort(ids.begin(), ids.end());
  return Graph(ids, std::vector<IdEdge>(edges.begin(), edges.end()), Graph::Limits{0});
}

BoundedTreedepthSample random_bounded_td_graph(std::size_t n, std::size_t t, double p,
                                               std::mt19937_64& rng) {
  if (n == 0) {
    throw GraphError("random_bounded_td_graph: n must be positive");
  }
  std::vector<std::size_t> parent(n, 0);
  std::vector<std::size_t> depth(n, 0);
  std::vector<std::size_t> eligible{0};
  for (std::size_t v = 1; v < n; ++v) {
    if (eligible.empty()) {
      throw GraphError("random_bounded_td_graph: t = 0 allows a single vertex only");
    }
    std::size_t par = eligible[std::uniform_int_distribution<std::size_t>(0, eligible.size() - 1)(rng)];
    parent[v] = par;
    depth[v] = depth[par] + 1;
    if (depth[v] < t) {
      eligible.push_back(v);
    }
  }
  std::vector<VertexId> id(n);
  std::iota(id.begin(), id.end(), VertexId{1});
  std::shuffle(id.begin(), id.end(), rng);
  std::bernoulli_distribution coin(p);
  std::vector<IdEdge> edges;
  std::map<VertexId, VertexId> model_parent;
  for (std::size_t v = 1; v < n; ++v) {
    model_parent[id[v]] = id[parent[v]];
    edges.emplace_back(std::min(id[v], id[parent[v]]), std::max(id[v], id[parent[v]]));
    for (std::size_t a = parent[v]; a != 0;) {
      a = parent[a];
      if (coin(rng)) {
        edges.emplace_back(std::min(id[v], id[a]), std::max(id[v], id[a]));
      }
    }
  }
  std::vector<VertexId> sorted = id;
  std::sort(sorted.begin(), sorted.end());
  return {Graph(sorted, edges, Graph::Limits{0}), RootedTree(id[0], model_parent)};
}

}  // namespace certilab
