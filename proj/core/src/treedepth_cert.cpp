#include "certilab/treedepth_cert.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "certilab/errors.hpp"
#include "codec.hpp"

namespace certilab {

void write_td_cert(BitWriter& out, const TreedepthCert& c) {
  detail::write_width(out, c.width);
  out.gamma(c.ancestors.size());
  for (VertexId id : c.ancestors) {
    out.uint(id, c.width);
  }
  out.gamma(c.fragments.size());
  for (const auto& f : c.fragments) {
    out.gamma(f.depth);
    detail::write_pointer(out, {f.is_root, f.parent, f.dist}, c.width);
  }
}

TreedepthCert read_td_cert(BitReader& in) {
  TreedepthCert c;
  c.width = detail::read_width(in);
  // Lengths are bounded by what is left, so forged lengths cannot blow up.
  std::uint64_t len = in.gamma();
  if (len > in.remaining() / c.width) {
    in.fail();
    return c;
  }
  for (std::uint64_t i = 0; i < len; ++i) {
    c.ancestors.push_back(in.uint(c.width));
  }
  std::uint64_t frags = in.gamma();
  if (frags > in.remaining()) {
    in.fail();
    return c;
  }
  for (std::uint64_t i = 0; i < frags && in.ok(); ++i) {
    Fragment f;
    f.depth = in.gamma();
    auto p = detail::read_pointer(in, c.width);
    f.is_root = p.is_root;
    f.parent = p.parent;
    f.dist = p.dist;
    c.fragments.push_back(f);
  }
  return c;
}

Certificate encode_td_cert(const TreedepthCert& c) {
  BitWriter out;
  write_td_cert(out, c);
  return out.finish();
}

std::optional<TreedepthCert> decode_td_cert(const Certificate& cert) {
  BitReader in(cert);
  TreedepthCert c = read_td_cert(in);
  if (!in.ok() || !in.at_end()) {
    return std::nullopt;
  }
  return c;
}

namespace {

// Last `len` entries of `list`.
std::vector<VertexId> suffix(const std::vector<VertexId>& list, std::size_t len) {
  return {list.end() - static_cast<std::ptrdiff_t>(len), list.end()};
}

bool has_suffix(const std::vector<VertexId>& list, const std::vector<VertexId>& suf) {
  return list.size() >= suf.size() && std::equal(suf.rbegin(), suf.rend(), list.rbegin());
}

bool comparable(const std::vector<VertexId>& a, const std::vector<VertexId>& b) {
  return a.size() <= b.size() ? has_suffix(b, a) : has_suffix(a, b);
}

bool distinct(std::vector<VertexId> ids) {
  std::sort(ids.begin(), ids.end());
  return std::adjacent_find(ids.begin(), ids.end()) == ids.end();
}

}  // namespace

bool td_checks(VertexId self, const TreedepthCert& own,
               const std::vector<std::pair<VertexId, TreedepthCert>>& neighbors, std::size_t t) {
  const auto& list = own.ancestors;
  // (1) length d + 1 with d <= t, own id first, common last id.
  if (list.empty() || list.size() > t + 1 || list.front() != self || !distinct(list)) {
    return false;
  }
  const std::size_t d = list.size() - 1;
  for (const auto& [id, c] : neighbors) {
    if (c.ancestors.empty() || c.ancestors.back() != list.back()) {
      return false;
    }
    // (2) neighbours are ancestors or descendants.
    if (!comparable(list, c.ancestors)) {
      return false;
    }
  }
  // (3) one fragment per depth 1..d.
  if (own.fragments.size() != d) {
    return false;
  }
  for (std::size_t k = 1; k <= d; ++k) {
    const Fragment& f = own.fragments[k - 1];
    if (f.depth != k) {
      return false;
    }
    // (4) fragment of G_a for the ancestor a at depth k.
    const auto group = suffix(list, k + 1);
    if (f.is_root) {
      if (f.dist != 0) {
        return false;
      }
      const auto up = suffix(list, k);
      bool exit_ok = std::any_of(neighbors.begin(), neighbors.end(),
                                 [&](const auto& n) { return n.second.ancestors == up; });
      if (!exit_ok) {
        return false;
      }
    } else {
      if (f.dist == 0 || f.parent == self) {
        return false;
      }
      bool parent_ok = std::any_of(neighbors.begin(), neighbors.end(), [&](const auto& n) {
        const auto& [id, c] = n;
        return id == f.parent && has_suffix(c.ancestors, group) && c.fragments.size() >= k &&
               c.fragments[k - 1].depth == k && c.fragments[k - 1].dist + 1 == f.dist;
      });
      if (!parent_ok) {
        return false;
      }
    }
  }
  return true;
}

bool td_verifier(const LocalView& view, std::size_t t) {
  auto own = decode_td_cert(view.cert());
  if (!own) {
    return false;
  }
  std::vector<std::pair<VertexId, TreedepthCert>> nbrs;
  nbrs.reserve(view.degree());
  for (const auto& n : view.neighbors) {
    auto c = decode_td_cert(*n.cert);
    if (!c) {
      return false;
    }
    nbrs.emplace_back(n.id, std::move(*c));
  }
  return td_checks(view.self_id, *own, nbrs, t);
}

namespace {

// Fragments for the vertex group `members` (indices), rooted at every vertex
// of `roots`, by multi-source BFS inside the group. `stamp`/`mark` select the
// group. Parents are the smallest-id neighbour one step closer. Returns false
// if some member cannot reach a root inside the group.
bool fragments_for_group(const Graph& g, const std::vector<VertexIndex>& members,
                         const std::vector<VertexIndex>& roots, std::size_t depth, std::vector<int>& stamp,
                         int mark, std::vector<std::uint64_t>& dist, std::vector<bool>& seen,
                         std::vector<std::vector<Fragment>>& out) {
  std::deque<VertexIndex> queue;
  for (VertexIndex r : roots) {
    seen[r] = true;
    dist[r] = 0;
    queue.push_back(r);
  }
  while (!queue.empty()) {
    VertexIndex v = queue.front();
    queue.pop_front();
    for (VertexIndex w : g.neighbors(v)) {
      if (stamp[w] == mark && !seen[w]) {
        seen[w] = true;
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
    }
  }
  bool all_reached = true;
  for (VertexIndex v : members) {
    if (!seen[v]) {
      all_reached = false;
      continue;
    }
    Fragment f;
    f.depth = depth;
    f.dist = dist[v];
    f.is_root = dist[v] == 0;
    if (!f.is_root) {
      for (VertexIndex w : g.neighbors(v)) {
        if (stamp[w] == mark && seen[w] && dist[w] + 1 == dist[v]) {
          f.parent = g.id(w);
          break;
        }
      }
    }
    out[v].push_back(f);
  }
  for (VertexIndex v : members) {
    seen[v] = false;
  }
  return all_reached;
}

}  // namespace

std::vector<TreedepthCert> td_certificates(const Graph& g, const Model& model) {
  if (!is_coherent(g, model)) {
    throw GraphError("td_certificates: the model is not coherent");
  }
  const RootedTree& tree = model.tree();
  const unsigned w = detail::id_width(g);
  std::vector<TreedepthCert> certs(g.size());
  for (VertexIndex v = 0; v < g.size(); ++v) {
    certs[v].width = w;
    certs[v].ancestors = tree.ancestors(g.id(v));
  }
  // Vertices in preorder so that every subtree is a contiguous range.
  std::vector<VertexIndex> preorder;
  std::vector<std::size_t> start(g.size());
  std::vector<std::size_t> end(g.size());
  {
    std::vector<std::pair<VertexIndex, bool>> stack{{tree.root_index(), false}};
    while (!stack.empty()) {
      auto [v, closing] = stack.back();
      stack.pop_back();
      if (closing) {
        end[v] = preorder.size();
        continue;
      }
      start[v] = preorder.size();
      preorder.push_back(v);
      stack.emplace_back(v, true);
      auto kids = tree.children(v);
      for (auto it = kids.rbegin(); it != kids.rend(); ++it) {
        stack.emplace_back(*it, false);
      }
    }
  }
  std::vector<std::vector<Fragment>> frags(g.size());
  std::vector<int> stamp(g.size(), -1);
  std::vector<std::uint64_t> dist(g.size(), 0);
  std::vector<bool> seen(g.size(), false);
  // Shallow ancestors first, so each vertex's fragments come out by depth.
  std::vector<VertexIndex> by_depth(preorder.begin(), preorder.end());
  std::stable_sort(by_depth.begin(), by_depth.end(),
                   [&](VertexIndex a, VertexIndex b) { return tree.depth(a) < tree.depth(b); });
  for (VertexIndex a : by_depth) {
    auto parent = tree.parent(a);
    if (!parent) {
      continue;
    }
    std::vector<VertexIndex> members(preorder.begin() + static_cast<std::ptrdiff_t>(start[a]),
                                     preorder.begin() + static_cast<std::ptrdiff_t>(end[a]));
    const int mark = static_cast<int>(a);
    std::optional<VertexIndex> exit;
    for (VertexIndex u : members) {
      stamp[u] = mark;
      if ((!exit || u < *exit) && g.adjacent(u, *parent)) {
        exit = u;
      }
    }
    if (!fragments_for_group(g, members, {*exit}, tree.depth(a), stamp, mark, dist, seen, frags)) {
      throw GraphError("td_certificates: a subtree does not induce a connected subgraph");
    }
  }
  for (VertexIndex v = 0; v < g.size(); ++v) {
    certs[v].fragments = std::move(frags[v]);
  }
  return certs;
}

Assignment td_certify(const Graph& g, const Model& coherent) {
  Assignment a;
  for (const auto& c : td_certificates(g, coherent)) {
    a.push_back(encode_td_cert(c));
  }
  return a;
}

std::optional<Model> prover_model(const Graph& g, std::size_t t, std::size_t exact_cap, std::string* why) {
  if (g.size() <= exact_cap) {
    auto model = coherent_model(g, t + 1, exact_cap);
    if (!model && why) {
      *why = "edge-depth exceeds " + std::to_string(t);
    }
    return model;
  }
  Model model = separator_model(g);
  if (model.edge_depth() > t) {
    if (why) {
      *why = "graph above the exact cap and the separator model has edge-depth " +
             std::to_string(model.edge_depth()) + " > " + std::to_string(t);
    }
    return std::nullopt;
  }
  return model;
}

ProverOutcome td_prover(const Graph& g, std::size_t t, std::size_t exact_cap) {
  std::string why;
  auto model = prover_model(g, t, exact_cap, &why);
  if (!model) {
    return ProverOutcome::refuse(why);
  }
  return ProverOutcome::accept(td_certify(g, *model));
}

RootedTree reconstruct_forest(const Graph& g, const Assignment& accepted) {
  if (accepted.size() != g.size()) {
    throw SoundnessViolation("assignment is not total");
  }
  std::vector<TreedepthCert> certs;
  for (VertexIndex v = 0; v < g.size(); ++v) {
    auto c = decode_td_cert(accepted[v]);
    if (!c || c->ancestors.empty()) {
      throw SoundnessViolation("undecodable certificate at vertex " + std::to_string(g.id(v)));
    }
    certs.push_back(std::move(*c));
  }
  std::optional<VertexId> root;
  std::map<VertexId, VertexId> parent;
  for (VertexIndex u = 0; u < g.size(); ++u) {
    const auto& list = certs[u].ancestors;
    if (list.size() == 1) {
      if (root) {
        throw SoundnessViolation("two vertices claim to be the root");
      }
      root = g.id(u);
      continue;
    }
    const std::size_t d = list.size() - 1;
    if (certs[u].fragments.size() < d) {
      throw SoundnessViolation("missing fragment at vertex " + std::to_string(g.id(u)));
    }
    // Walk the depth-d fragment to its root; distances strictly decrease.
    VertexIndex cur = u;
    while (!certs[cur].fragments[d - 1].is_root) {
      auto next = g.find(certs[cur].fragments[d - 1].parent);
      if (!next || !g.adjacent(cur, *next) || certs[*next].fragments.size() < d ||
          certs[*next].fragments[d - 1].dist + 1 != certs[cur].fragments[d - 1].dist ||
          !has_suffix(certs[*next].ancestors, suffix(list, d + 1))) {
        throw SoundnessViolation("broken fragment path from vertex " + std::to_string(g.id(u)));
      }
      cur = *next;
    }
    const std::vector<VertexId> up(list.begin() + 1, list.end());
    std::optional<VertexIndex> step;
    for (VertexIndex w : g.neighbors(cur)) {
      if (certs[w].ancestors == up) {
        step = w;
        break;
      }
    }
    if (!step || g.id(*step) != list[1]) {
      throw SoundnessViolation("no vertex carries the shortened list of vertex " + std::to_string(g.id(u)));
    }
    parent[g.id(u)] = list[1];
  }
  if (!root) {
    throw SoundnessViolation("no root");
  }
  try {
    RootedTree tree(*root, parent);
    if (!is_model(g, tree)) {
      throw SoundnessViolation("reconstructed tree is not a model of the graph");
    }
    for (VertexIndex v = 0; v < g.size(); ++v) {
      if (tree.ancestors(g.id(v)) != certs[v].ancestors) {
        throw SoundnessViolation("certified list of " + std::to_string(g.id(v)) +
                                 " differs from its ancestors in the reconstruction");
      }
    }
    return tree;
  } catch (const GraphError& e) {
    throw SoundnessViolation(std::string("parent pointers do not form a tree: ") + e.what());
  }
}

namespace {

// Exhaustive search over ancestor-list assignments on the graph's own ids.
// Lists naming an id outside the graph can never be accepted: the fragment
// root for the depth where that id is the ancestor would need a neighbour
// whose list starts with it. Lists are pruned by checks (1) and (2) along
// edges; each complete list assignment is then completed with fragments if
// any completion can pass check (4), which is decided exactly: every vertex
// needs, inside its group of vertices sharing its (k+1)-suffix, a path to a
// vertex adjacent to a carrier of its k-suffix.
class ListForger {
 public:
  ListForger(const Graph& g, std::size_t t, ForgeryContext& ctx, const TdCandidateSink& sink)
      : g_(g), t_(t), ctx_(ctx), sink_(sink) {}

  void run() {
    bool complete = true;
    for (VertexIndex r = 0; r < g_.size() && !ctx_.done(); ++r) {
      complete = search_root(r) && complete;
    }
    if (complete && !ctx_.done()) {
      ctx_.mark_exhaustive();
    }
  }

 private:
  bool search_root(VertexIndex r) {
    root_ = r;
    lists_.assign(g_.size(), {});
    order_.clear();
    std::vector<bool> seen(g_.size(), false);
    std::deque<VertexIndex> queue{r};
    seen[r] = true;
    while (!queue.empty()) {
      VertexIndex v = queue.front();
      queue.pop_front();
      order_.push_back(v);
      for (VertexIndex w : g_.neighbors(v)) {
        if (!seen[w]) {
          seen[w] = true;
          queue.push_back(w);
        }
      }
    }
    return descend(0);
  }

  // Candidate lists of v: [v, m..., root] with distinct middle ids.
  void candidates(VertexIndex v, std::vector<std::vector<VertexId>>& out) {
    std::vector<VertexId> cur{g_.id(v)};
    if (v == root_) {
      out.push_back(cur);
      return;
    }
    auto rec = [&](auto&& self) -> void {
      auto full = cur;
      full.push_back(g_.id(root_));
      out.push_back(std::move(full));
      if (cur.size() + 1 >= t_ + 1) {
        return;
      }
      for (VertexIndex m = 0; m < g_.size(); ++m) {
        VertexId id = g_.id(m);
        if (m == root_ || std::find(cur.begin(), cur.end(), id) != cur.end()) {
          continue;
        }
        cur.push_back(id);
        self(self);
        cur.pop_back();
      }
    };
    if (t_ >= 1) {
      rec(rec);
    }
  }

  bool descend(std::size_t pos) {
    if (ctx_.done()) {
      return false;
    }
    if (pos == order_.size()) {
      try_complete();
      return true;
    }
    VertexIndex v = order_[pos];
    std::vector<std::vector<VertexId>> options;
    candidates(v, options);
    for (auto& list : options) {
      ctx_.count(1);
      bool ok = true;
      for (VertexIndex w : g_.neighbors(v)) {
        if (!lists_[w].empty() && !comparable(lists_[w], list)) {
          ok = false;
          break;
        }
      }
      if (!ok) {
        continue;
      }
      lists_[v] = list;
      if (!descend(pos + 1)) {
        lists_[v].clear();
        return false;
      }
      lists_[v].clear();
    }
    return true;
  }

  void try_complete() {
    const std::size_t n = g_.size();
    std::vector<std::vector<Fragment>> frags(n);
    // Groups keyed by suffix, shallow first so fragments come out by depth.
    std::map<std::pair<std::size_t, std::vector<VertexId>>, std::vector<VertexIndex>> groups;
    for (VertexIndex v = 0; v < n; ++v) {
      for (std::size_t k = 1; k + 1 <= lists_[v].size(); ++k) {
        groups[{k, suffix(lists_[v], k + 1)}].push_back(v);
      }
    }
    std::vector<int> stamp(n, -1);
    std::vector<std::uint64_t> dist(n, 0);
    std::vector<bool> seen(n, false);
    int mark = 0;
    for (const auto& [key, members] : groups) {
      const auto& [k, group_suffix] = key;
      const std::vector<VertexId> up(group_suffix.begin() + 1, group_suffix.end());
      std::vector<VertexIndex> roots;
      for (VertexIndex u : members) {
        stamp[u] = mark;
        for (VertexIndex w : g_.neighbors(u)) {
          if (lists_[w] == up) {
            roots.push_back(u);
            break;
          }
        }
      }
      if (roots.empty()) {
        return;
      }
      if (!fragments_for_group(g_, members, roots, k, stamp, mark, dist, seen, frags)) {
        return;  // some member has no path to an exit inside its group
      }
      ++mark;
    }
    const unsigned w = detail::id_width(g_);
    std::vector<TreedepthCert> certs;
    for (VertexIndex v = 0; v < n; ++v) {
      certs.push_back({w, lists_[v], frags[v]});
    }
    sink_(certs);
  }

  const Graph& g_;
  std::size_t t_;
  ForgeryContext& ctx_;
  const TdCandidateSink& sink_;
  VertexIndex root_ = 0;
  std::vector<VertexIndex> order_;
  std::vector<std::vector<VertexId>> lists_;
};

}  // namespace

void forge_td_lists(const Graph& g, std::size_t t, ForgeryContext& ctx, const TdCandidateSink& sink) {
  ListForger(g, t, ctx, sink).run();
}

namespace {

class TreedepthScheme : public Scheme {
 public:
  TreedepthScheme(std::size_t t, std::size_t cap) : t_(t), cap_(cap) {}

  std::string name() const override { return "treedepth"; }
  std::string declared_size() const override { return "O(t log n)"; }
  ProverOutcome prove(const Graph& g) const override { return td_prover(g, t_, cap_); }
  bool verify(const LocalView& view) const override { return td_verifier(view, t_); }

  void structured_forgeries(const Graph& g, ForgeryContext& ctx) const override {
    forge_td_lists(g, t_, ctx, [&](const std::vector<TreedepthCert>& certs) {
      Assignment a;
      for (const auto& c : certs) {
        a.push_back(encode_td_cert(c));
      }
      ctx.offer(a);
    });
  }

  std::size_t random_payload_bits(const Graph& g) const override {
    // Size of a full-depth certificate on this graph's id range.
    TreedepthCert c;
    c.width = detail::id_width(g);
    c.ancestors.assign(t_ + 1, g.max_id());
    for (std::size_t k = 1; k <= t_; ++k) {
      c.fragments.push_back({k, false, g.max_id(), g.size()});
    }
    return encode_td_cert(c).size();
  }

 private:
  std::size_t t_;
  std::size_t cap_;
};

}  // namespace

std::unique_ptr<Scheme> treedepth_scheme(std::size_t t, std::size_t exact_cap) {
  return std::make_unique<TreedepthScheme>(t, exact_cap);
}

}  // namespace certilab
