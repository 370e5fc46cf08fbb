#include "certilab/treedepth.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <deque>
#include <unordered_map>

#include <json.hpp>

#include "certilab/errors.hpp"

namespace certilab {

namespace {

using Mask = std::uint32_t;

std::vector<Mask> adjacency_masks(const Graph& g) {
  std::vector<Mask> adj(g.size(), 0);
  for (VertexIndex v = 0; v < g.size(); ++v) {
    for (VertexIndex w : g.neighbors(v)) {
      adj[v] |= Mask{1} << w;
    }
  }
  return adj;
}

Mask component_containing(const std::vector<Mask>& adj, Mask within, int start) {
  Mask comp = Mask{1} << start;
  Mask frontier = comp;
  while (frontier != 0) {
    Mask next = 0;
    for (Mask f = frontier; f != 0; f &= f - 1) {
      next |= adj[std::countr_zero(f)];
    }
    next &= within & ~comp;
    comp |= next;
    frontier = next;
  }
  return comp;
}

// Calls fn(component) for each connected component of `within`, lowest first.
template <typename Fn>
bool for_each_component(const std::vector<Mask>& adj, Mask within, Fn&& fn) {
  while (within != 0) {
    Mask comp = component_containing(adj, within, std::countr_zero(within));
    within &= ~comp;
    if (!fn(comp)) {
      return false;
    }
  }
  return true;
}

class TreedepthSolver {
 public:
  explicit TreedepthSolver(const Graph& g) : adj_(adjacency_masks(g)) {}

  // Levels of the connected vertex set `s`.
  int levels(Mask s) {
    if (std::has_single_bit(s)) {
      return 1;
    }
    if (auto it = memo_.find(s); it != memo_.end()) {
      return it->second.levels;
    }
    int best = std::popcount(s);  // a chain always works
    int best_root = std::countr_zero(s);
    for (Mask rest_roots = s; rest_roots != 0; rest_roots &= rest_roots - 1) {
      int v = std::countr_zero(rest_roots);
      Mask rest = s & ~(Mask{1} << v);
      int worst = 0;
      for_each_component(adj_, rest, [&](Mask comp) {
        worst = std::max(worst, levels(comp));
        return worst + 1 < best;
      });
      if (worst + 1 < best) {
        best = worst + 1;
        best_root = v;
      }
    }
    memo_[s] = {best, best_root};
    return best;
  }

  int root_of(Mask s) {
    if (std::has_single_bit(s)) {
      return std::countr_zero(s);
    }
    levels(s);
    return memo_.at(s).root;
  }

  void build(Mask s, std::optional<int> parent, const Graph& g, std::map<VertexId, VertexId>& out) {
    int root = root_of(s);
    if (parent) {
      out[g.id(static_cast<VertexIndex>(root))] = g.id(static_cast<VertexIndex>(*parent));
    }
    Mask rest = s & ~(Mask{1} << root);
    for_each_component(adj_, rest, [&](Mask comp) {
      build(comp, root, g, out);
      return true;
    });
  }

 private:
  struct Entry {
    int levels;
    int root;
  };
  std::vector<Mask> adj_;
  std::unordered_map<Mask, Entry> memo_;
};

class CopsGame {
 public:
  explicit CopsGame(const Graph& g) : adj_(adjacency_masks(g)) {}

  // Can `cops` further cops catch a robber free to roam the connected region
  // `region` of the graph minus the cops already placed? A cop announced
  // outside the region leaves it unchanged and only spends a cop, so only
  // vertices inside the region are tried.
  bool catches(Mask region, int cops) {
    if (cops == 0) {
      return false;
    }
    const std::uint64_t key = (static_cast<std::uint64_t>(cops) << 32) | region;
    if (auto it = memo_.find(key); it != memo_.end()) {
      return it->second;
    }
    bool result = false;
    for (Mask candidates = region; candidates != 0 && !result; candidates &= candidates - 1) {
      int v = std::countr_zero(candidates);
      Mask rest = region & ~(Mask{1} << v);
      // The robber runs to whichever component of the remaining region is best.
      result = for_each_component(adj_, rest, [&](Mask escape) { return catches(escape, cops - 1); });
    }
    memo_[key] = result;
    return result;
  }

 private:
  std::vector<Mask> adj_;
  std::unordered_map<std::uint64_t, bool> memo_;
};

// Walks up from `v` until reaching depth `target`.
VertexIndex ancestor_at_depth(const RootedTree& t, VertexIndex v, std::size_t target) {
  while (t.depth(v) > target) {
    v = *t.parent(v);
  }
  return v;
}

// touches[v]: some vertex of v's subtree is adjacent to v's parent.
std::vector<bool> subtree_touches_parent(const Graph& g, const RootedTree& t) {
  std::vector<bool> touches(g.size(), false);
  for (VertexIndex x = 0; x < g.size(); ++x) {
    for (VertexIndex y : g.neighbors(x)) {
      if (t.depth(y) < t.depth(x)) {
        touches[ancestor_at_depth(t, x, t.depth(y) + 1)] = true;
      }
    }
  }
  return touches;
}

bool same_vertex_set(const Graph& g, const RootedTree& t) {
  return g.size() == t.size() && std::equal(g.ids().begin(), g.ids().end(), t.nodes().begin());
}

}  // namespace

bool is_model(const Graph& g, const RootedTree& tree) {
  if (!same_vertex_set(g, tree)) {
    return false;
  }
  for (VertexIndex u = 0; u < g.size(); ++u) {
    for (VertexIndex v : g.neighbors(u)) {
      if (u < v && !tree.is_ancestor_index(u, v) && !tree.is_ancestor_index(v, u)) {
        return false;
      }
    }
  }
  return true;
}

Model::Model(const Graph& g, RootedTree tree) : tree_(std::move(tree)) {
  if (!same_vertex_set(g, tree_)) {
    throw GraphError("model node set differs from the graph's vertex set");
  }
  if (!is_model(g, tree_)) {
    throw GraphError("some edge does not join an ancestor/descendant pair");
  }
}

bool is_coherent(const Graph& g, const RootedTree& tree) {
  if (!is_model(g, tree)) {
    throw GraphError("not a model of the graph");
  }
  auto touches = subtree_touches_parent(g, tree);
  for (VertexIndex v = 0; v < g.size(); ++v) {
    if (tree.parent(v) && !touches[v]) {
      return false;
    }
  }
  return true;
}

TreedepthResult treedepth_exact(const Graph& g, std::size_t cap) {
  if (g.size() > cap || g.size() > 32) {
    throw CapExceeded("treedepth_exact: " + std::to_string(g.size()) + " vertices exceed the cap of " +
                      std::to_string(std::min<std::size_t>(cap, 32)));
  }
  TreedepthSolver solver(g);
  const Mask all = g.size() == 32 ? ~Mask{0} : (Mask{1} << g.size()) - 1;
  const int levels = solver.levels(all);
  std::map<VertexId, VertexId> parent;
  solver.build(all, std::nullopt, g, parent);
  VertexId root = g.id(static_cast<VertexIndex>(solver.root_of(all)));
  Model witness(g, RootedTree(root, parent));
  return {static_cast<std::size_t>(levels), static_cast<std::size_t>(levels - 1), std::move(witness)};
}

std::size_t cops_robber_number(const Graph& g, std::size_t cap) {
  if (g.size() > cap || g.size() > 32) {
    throw CapExceeded("cops_robber_number: " + std::to_string(g.size()) +
                      " vertices exceed the cap of " + std::to_string(std::min<std::size_t>(cap, 32)));
  }
  CopsGame game(g);
  const Mask all = g.size() == 32 ? ~Mask{0} : (Mask{1} << g.size()) - 1;
  for (int cops = 1;; ++cops) {
    if (game.catches(all, cops)) {
      return static_cast<std::size_t>(cops);
    }
  }
}

Model make_coherent(const Graph& g, const Model& m) {
  const RootedTree* current = &m.tree();
  std::optional<RootedTree> rebuilt;
  while (true) {
    const RootedTree& t = *current;
    auto touches = subtree_touches_parent(g, t);
    std::optional<VertexIndex> bad;
    for (VertexIndex v = 0; v < g.size(); ++v) {
      if (t.parent(v) && !touches[v]) {
        bad = v;
        break;
      }
    }
    if (!bad) {
      break;
    }
    // Subtree of the offending vertex.
    std::vector<bool> in_subtree(g.size(), false);
    std::vector<VertexIndex> stack{*bad};
    while (!stack.empty()) {
      VertexIndex x = stack.back();
      stack.pop_back();
      in_subtree[x] = true;
      for (VertexIndex c : t.children(x)) {
        stack.push_back(c);
      }
    }
    // Lowest ancestor adjacent to the subtree; exists because g is connected.
    std::optional<VertexIndex> target;
    for (VertexIndex x = 0; x < g.size(); ++x) {
      if (!in_subtree[x]) {
        continue;
      }
      for (VertexIndex y : g.neighbors(x)) {
        if (!in_subtree[y] && (!target || t.depth(y) > t.depth(*target))) {
          target = y;
        }
      }
    }
    auto parent = t.parent_map();
    parent[g.id(*bad)] = g.id(*target);
    rebuilt.emplace(t.root(), parent);
    current = &*rebuilt;
  }
  return Model(g, *current);
}

std::optional<Model> coherent_model(const Graph& g, std::size_t max_levels, std::size_t cap) {
  auto exact = treedepth_exact(g, cap);
  if (exact.levels > max_levels) {
    return std::nullopt;
  }
  return make_coherent(g, exact.witness);
}

Model separator_model(const Graph& g) {
  const std::size_t n = g.size();
  std::vector<bool> removed(n, false);
  std::vector<int> stamp(n, -1);
  int next_stamp = 0;
  std::map<VertexId, VertexId> parent;
  std::optional<VertexId> root;

  struct Task {
    std::vector<VertexIndex> vertices;
    std::optional<VertexIndex> parent;
  };
  std::vector<Task> tasks;
  {
    std::vector<VertexIndex> all(n);
    for (VertexIndex v = 0; v < n; ++v) {
      all[v] = v;
    }
    tasks.push_back({std::move(all), std::nullopt});
  }
  std::vector<VertexIndex> bfs_parent(n);
  std::vector<std::size_t> subtree(n);
  while (!tasks.empty()) {
    Task task = std::move(tasks.back());
    tasks.pop_back();
    const int mine = next_stamp++;
    for (VertexIndex v : task.vertices) {
      stamp[v] = mine;
    }
    // BFS spanning tree of the component.
    std::vector<VertexIndex> order{task.vertices.front()};
    bfs_parent[order[0]] = order[0];
    stamp[order[0]] = -2 - mine;  // visited marker
    for (std::size_t i = 0; i < order.size(); ++i) {
      VertexIndex v = order[i];
      for (VertexIndex w : g.neighbors(v)) {
        if (stamp[w] == mine) {
          stamp[w] = -2 - mine;
          bfs_parent[w] = v;
          order.push_back(w);
        }
      }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      subtree[*it] = 1;
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      if (bfs_parent[*it] != *it) {
        subtree[bfs_parent[*it]] += subtree[*it];
      }
    }
    // Centroid: descend into the heavy child while it holds more than half.
    const std::size_t total = order.size();
    VertexIndex c = order[0];
    while (true) {
      std::optional<VertexIndex> heavy;
      for (VertexIndex w : g.neighbors(c)) {
        if (stamp[w] == -2 - mine && bfs_parent[w] == c && w != c && subtree[w] * 2 > total) {
          heavy = w;
        }
      }
      if (!heavy) {
        break;
      }
      c = *heavy;
    }
    if (task.parent) {
      parent[g.id(c)] = g.id(*task.parent);
    } else {
      root = g.id(c);
    }
    removed[c] = true;
    // Components of the rest become child tasks.
    const int split = next_stamp++;
    for (VertexIndex v : order) {
      if (removed[v] || stamp[v] == split) {
        continue;
      }
      std::vector<VertexIndex> comp{v};
      stamp[v] = split;
      for (std::size_t i = 0; i < comp.size(); ++i) {
        for (VertexIndex w : g.neighbors(comp[i])) {
          if (!removed[w] && stamp[w] == -2 - mine) {
            stamp[w] = split;
            comp.push_back(w);
          }
        }
      }
      tasks.push_back({std::move(comp), c});
    }
  }
  return Model(g, RootedTree(*root, parent));
}

std::string serialize_model(const RootedTree& tree) {
  nlohmann::ordered_json doc;
  doc["root"] = tree.root();
  nlohmann::ordered_json parents = nlohmann::ordered_json::object();
  for (const auto& [child, par] : tree.parent_map()) {
    parents[std::to_string(child)] = par;
  }
  doc["parent"] = std::move(parents);
  return doc.dump();
}

RootedTree parse_model(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("model file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("root") || !doc["root"].is_number_unsigned() ||
      !doc.contains("parent") || !doc["parent"].is_object()) {
    throw ParseError("model file must be {\"root\": id, \"parent\": {id: id, ...}}");
  }
  std::map<VertexId, VertexId> parent;
  for (const auto& [key, value] : doc["parent"].items()) {
    if (!value.is_number_unsigned()) {
      throw ParseError("parent ids must be positive integers");
    }
    try {
      parent[std::stoull(key)] = value.get<VertexId>();
    } catch (const std::logic_error&) {
      throw ParseError("model key '" + key + "' is not a decimal id");
    }
  }
  return RootedTree(doc["root"].get<VertexId>(), parent);
}

}  // namespace certilab
