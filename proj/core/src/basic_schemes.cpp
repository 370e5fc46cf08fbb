#include "certilab/basic_schemes.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <stdexcept>

#include "certilab/errors.hpp"
#include "codec.hpp"

namespace certilab {

namespace detail {

BfsTree bfs_tree(const Graph& g, VertexIndex root, const std::vector<bool>& within) {
  auto inside = [&](VertexIndex v) { return within.empty() || within[v]; };
  BfsTree t;
  t.parent.assign(g.size(), std::nullopt);
  t.dist.assign(g.size(), 0);
  t.reached.assign(g.size(), false);
  std::deque<VertexIndex> queue{root};
  t.reached[root] = true;
  while (!queue.empty()) {
    VertexIndex v = queue.front();
    queue.pop_front();
    for (VertexIndex w : g.neighbors(v)) {
      if (inside(w) && !t.reached[w]) {
        t.reached[w] = true;
        t.dist[w] = t.dist[v] + 1;
        queue.push_back(w);
      }
    }
  }
  for (VertexIndex v = 0; v < g.size(); ++v) {
    if (!t.reached[v] || v == root) {
      continue;
    }
    for (VertexIndex w : g.neighbors(v)) {  // ascending, so the first hit is the smallest id
      if (t.reached[w] && inside(w) && t.dist[w] + 1 == t.dist[v]) {
        t.parent[v] = w;
        break;
      }
    }
  }
  return t;
}

}  // namespace detail

namespace {

using detail::PointerNeighbor;
using detail::TreePointer;

// --- spanning tree ---------------------------------------------------------

struct TreeCert {
  unsigned w = 1;
  VertexId root = 0;
  TreePointer ptr;
};

void write_tree(BitWriter& out, const TreeCert& c) {
  detail::write_width(out, c.w);
  out.uint(c.root, c.w);
  detail::write_pointer(out, c.ptr, c.w);
}

TreeCert read_tree(BitReader& in) {
  TreeCert c;
  c.w = detail::read_width(in);
  c.root = in.uint(c.w);
  c.ptr = detail::read_pointer(in, c.w);
  return c;
}

std::optional<TreeCert> decode_tree(const Certificate& cert) {
  BitReader in(cert);
  TreeCert c = read_tree(in);
  if (!in.ok() || !in.at_end()) {
    return std::nullopt;
  }
  return c;
}

// Decodes every neighbour with `decode`; nullopt if any fails.
template <typename T, typename Decode>
std::optional<std::vector<std::pair<VertexId, T>>> decode_neighbors(const LocalView& view, Decode decode) {
  std::vector<std::pair<VertexId, T>> out;
  out.reserve(view.degree());
  for (const auto& n : view.neighbors) {
    auto c = decode(*n.cert);
    if (!c) {
      return std::nullopt;
    }
    out.emplace_back(n.id, std::move(*c));
  }
  return out;
}

std::vector<TreeCert> honest_tree(const Graph& g) {
  const unsigned w = detail::id_width(g);
  auto bfs = detail::bfs_tree(g, 0);
  std::vector<TreeCert> out;
  for (VertexIndex v = 0; v < g.size(); ++v) {
    out.push_back({w, g.id(0), detail::pointer_of(g, bfs, v)});
  }
  return out;
}

class SpanningTreeScheme : public Scheme {
 public:
  std::string name() const override { return "spanning-tree"; }
  std::string declared_size() const override { return "O(log n)"; }

  ProverOutcome prove(const Graph& g) const override {
    Assignment a;
    for (const auto& c : honest_tree(g)) {
      BitWriter out;
      write_tree(out, c);
      a.push_back(out.finish());
    }
    return ProverOutcome::accept(std::move(a));
  }

  bool verify(const LocalView& view) const override {
    auto own = decode_tree(view.cert());
    if (!own) {
      return false;
    }
    auto nbrs = decode_neighbors<TreeCert>(view, decode_tree);
    if (!nbrs) {
      return false;
    }
    std::vector<PointerNeighbor> tree;
    for (const auto& [id, c] : *nbrs) {
      if (c.w != own->w || c.root != own->root) {
        return false;
      }
      tree.push_back({id, c.ptr});
    }
    return detail::pointer_ok(view.self_id, own->root, own->ptr, tree);
  }
};

// --- vertex count ----------------------------------------------------------

struct CountCert {
  TreeCert tree;
  std::uint64_t count = 0;
  std::uint64_t n = 0;
};

void write_count(BitWriter& out, const CountCert& c) {
  write_tree(out, c.tree);
  out.uint(c.count, c.tree.w);
  out.uint(c.n, c.tree.w);
}

CountCert read_count(BitReader& in) {
  CountCert c;
  c.tree = read_tree(in);
  c.count = in.uint(c.tree.w);
  c.n = in.uint(c.tree.w);
  return c;
}

std::vector<CountCert> honest_count(const Graph& g, VertexIndex root) {
  const unsigned w = detail::id_width(g);
  auto bfs = detail::bfs_tree(g, root);
  std::vector<VertexIndex> order(g.size());
  for (VertexIndex v = 0; v < g.size(); ++v) {
    order[v] = v;
  }
  std::sort(order.begin(), order.end(), [&](VertexIndex a, VertexIndex b) { return bfs.dist[a] > bfs.dist[b]; });
  std::vector<std::uint64_t> count(g.size(), 1);
  for (VertexIndex v : order) {
    if (bfs.parent[v]) {
      count[*bfs.parent[v]] += count[v];
    }
  }
  std::vector<CountCert> out;
  for (VertexIndex v = 0; v < g.size(); ++v) {
    out.push_back({{w, g.id(root), detail::pointer_of(g, bfs, v)}, count[v], g.size()});
  }
  return out;
}

// Uniform fields, tree pointer, subtree-count sum and root count = n.
bool count_ok(VertexId self, const CountCert& own, const std::vector<std::pair<VertexId, CountCert>>& nbrs) {
  std::vector<PointerNeighbor> tree;
  std::uint64_t sum = 1;
  for (const auto& [id, c] : nbrs) {
    if (c.tree.w != own.tree.w || c.tree.root != own.tree.root || c.n != own.n) {
      return false;
    }
    tree.push_back({id, c.tree.ptr});
    if (!c.tree.ptr.is_root && c.tree.ptr.parent == self) {
      sum += c.count;
      if (sum > own.n) {
        return false;  // also rules out overflow
      }
    }
  }
  if (!detail::pointer_ok(self, own.tree.root, own.tree.ptr, tree)) {
    return false;
  }
  if (own.count != sum) {
    return false;
  }
  return !own.tree.ptr.is_root || own.count == own.n;
}

std::optional<CountCert> decode_count(const Certificate& cert) {
  BitReader in(cert);
  CountCert c = read_count(in);
  if (!in.ok() || !in.at_end()) {
    return std::nullopt;
  }
  return c;
}

class VertexCountScheme : public Scheme {
 public:
  std::string name() const override { return "count"; }
  std::string declared_size() const override { return "O(log n)"; }

  ProverOutcome prove(const Graph& g) const override {
    Assignment a;
    for (const auto& c : honest_count(g, 0)) {
      BitWriter out;
      write_count(out, c);
      a.push_back(out.finish());
    }
    return ProverOutcome::accept(std::move(a));
  }

  bool verify(const LocalView& view) const override {
    auto own = decode_count(view.cert());
    if (!own) {
      return false;
    }
    auto nbrs = decode_neighbors<CountCert>(view, decode_count);
    return nbrs && count_ok(view.self_id, *own, *nbrs);
  }
};

// --- existential FO --------------------------------------------------------

// Quantifier-free evaluation on a tuple: variable -> position, with equality
// and adjacency given as callbacks on positions.
bool eval_matrix(const Formula& f, const std::map<std::string, std::size_t>& slot,
                 const std::function<bool(std::size_t, std::size_t)>& equal,
                 const std::function<bool(std::size_t, std::size_t)>& adjacent) {
  switch (f.kind) {
    case FormulaKind::kEqual:
      return equal(slot.at(f.lhs), slot.at(f.rhs));
    case FormulaKind::kAdjacent:
      return adjacent(slot.at(f.lhs), slot.at(f.rhs));
    case FormulaKind::kNot:
      return !eval_matrix(f.children[0], slot, equal, adjacent);
    case FormulaKind::kAnd:
      return std::all_of(f.children.begin(), f.children.end(),
                         [&](const Formula& c) { return eval_matrix(c, slot, equal, adjacent); });
    case FormulaKind::kOr:
      return std::any_of(f.children.begin(), f.children.end(),
                         [&](const Formula& c) { return eval_matrix(c, slot, equal, adjacent); });
    default:
      throw std::invalid_argument("matrix is not quantifier-free");
  }
}

struct ExistentialCert {
  unsigned w = 1;
  std::vector<VertexId> witnesses;
  std::vector<bool> matrix;  // upper triangle, row-major
  std::vector<TreePointer> trees;
};

std::size_t pair_index(std::size_t i, std::size_t j, std::size_t k) {
  if (i > j) {
    std::swap(i, j);
  }
  return i * k - i * (i + 1) / 2 + (j - i - 1);
}

class ExistentialScheme : public Scheme {
 public:
  explicit ExistentialScheme(Formula sentence) : sentence_(std::move(sentence)) {
    if (!is_existential_prenex(sentence_) || !free_variables(sentence_).empty()) {
      throw std::invalid_argument("existential_fo_scheme: sentence must be closed existential prenex");
    }
    const Formula* cur = &sentence_;
    while (cur->kind == FormulaKind::kExists) {
      slot_[cur->lhs] = k_;  // a repeated name is shadowed by the inner binding
      ++k_;
      cur = &cur->children[0];
    }
    matrix_ = *cur;
  }

  std::string name() const override { return "existential-fo"; }
  std::string declared_size() const override { return "O(k log n + k^2)"; }

  ProverOutcome prove(const Graph& g) const override {
    auto tuple = first_witnesses(g);
    if (!tuple) {
      return ProverOutcome::refuse("no witnesses: the sentence is false on this graph");
    }
    return ProverOutcome::accept(assignment_for(g, *tuple, true_matrix(g, *tuple)));
  }

  bool verify(const LocalView& view) const override {
    auto own = decode(view.cert());
    if (!own) {
      return false;
    }
    auto nbrs = decode_neighbors<ExistentialCert>(view, [this](const Certificate& c) { return decode(c); });
    if (!nbrs) {
      return false;
    }
    for (const auto& [id, c] : *nbrs) {
      if (c.w != own->w || c.witnesses != own->witnesses || c.matrix != own->matrix) {
        return false;
      }
    }
    for (std::size_t j = 0; j < k_; ++j) {
      std::vector<PointerNeighbor> tree;
      for (const auto& [id, c] : *nbrs) {
        tree.push_back({id, c.trees[j]});
      }
      if (!detail::pointer_ok(view.self_id, own->witnesses[j], own->trees[j], tree)) {
        return false;
      }
    }
    // A witness checks its own matrix row against what it sees.
    for (std::size_t i = 0; i < k_; ++i) {
      if (own->witnesses[i] != view.self_id) {
        continue;
      }
      for (std::size_t j = 0; j < k_; ++j) {
        if (j == i) {
          continue;
        }
        bool actual = own->witnesses[j] != view.self_id &&
                      std::any_of(view.neighbors.begin(), view.neighbors.end(),
                                  [&](const NeighborView& n) { return n.id == own->witnesses[j]; });
        if (own->matrix[pair_index(i, j, k_)] != actual) {
          return false;
        }
      }
    }
    return eval_matrix(
        matrix_, slot_, [&](std::size_t i, std::size_t j) { return own->witnesses[i] == own->witnesses[j]; },
        [&](std::size_t i, std::size_t j) { return i != j && own->matrix[pair_index(i, j, k_)]; });
  }

  void structured_forgeries(const Graph& g, ForgeryContext& ctx) const override {
    // Every witness tuple over the graph's ids with every matrix that makes
    // the matrix formula true, completed by honest BFS trees.
    const std::size_t n = g.size();
    const std::size_t pairs = k_ * (k_ - 1) / 2;
    if (pairs > 20) {
      return;
    }
    std::vector<VertexIndex> tuple(k_, 0);
    while (true) {
      for (std::uint64_t m = 0; m < (std::uint64_t{1} << pairs); ++m) {
        std::vector<bool> matrix(pairs);
        for (std::size_t b = 0; b < pairs; ++b) {
          matrix[b] = ((m >> b) & 1U) != 0;
        }
        bool sat = eval_matrix(
            matrix_, slot_, [&](std::size_t i, std::size_t j) { return tuple[i] == tuple[j]; },
            [&](std::size_t i, std::size_t j) { return i != j && matrix[pair_index(i, j, k_)]; });
        if (!sat) {
          ctx.count(1);
          continue;
        }
        if (ctx.offer(assignment_for(g, tuple, matrix)) || ctx.done()) {
          return;
        }
      }
      std::size_t pos = 0;
      while (pos < k_ && ++tuple[pos] == n) {
        tuple[pos++] = 0;
      }
      if (pos == k_) {
        break;
      }
    }
    ctx.mark_exhaustive();
  }

 private:
  std::optional<std::vector<VertexIndex>> first_witnesses(const Graph& g) const {
    std::vector<VertexIndex> tuple(k_, 0);
    if (k_ == 0) {
      return std::nullopt;
    }
    while (true) {
      bool sat = eval_matrix(
          matrix_, slot_, [&](std::size_t i, std::size_t j) { return tuple[i] == tuple[j]; },
          [&](std::size_t i, std::size_t j) { return g.adjacent(tuple[i], tuple[j]); });
      if (sat) {
        return tuple;
      }
      // Lexicographic order with the first witness most significant.
      std::size_t pos = k_;
      while (pos > 0 && ++tuple[pos - 1] == g.size()) {
        tuple[--pos] = 0;
      }
      if (pos == 0) {
        return std::nullopt;
      }
    }
  }

  std::vector<bool> true_matrix(const Graph& g, const std::vector<VertexIndex>& tuple) const {
    std::vector<bool> m(k_ * (k_ - 1) / 2);
    for (std::size_t i = 0; i < k_; ++i) {
      for (std::size_t j = i + 1; j < k_; ++j) {
        m[pair_index(i, j, k_)] = g.adjacent(tuple[i], tuple[j]);
      }
    }
    return m;
  }

  Assignment assignment_for(const Graph& g, const std::vector<VertexIndex>& tuple,
                            const std::vector<bool>& matrix) const {
    std::vector<detail::BfsTree> trees;
    for (VertexIndex r : tuple) {
      trees.push_back(detail::bfs_tree(g, r));
    }
    const unsigned w = detail::id_width(g);
    Assignment a;
    for (VertexIndex v = 0; v < g.size(); ++v) {
      ExistentialCert c;
      c.w = w;
      for (VertexIndex r : tuple) {
        c.witnesses.push_back(g.id(r));
      }
      c.matrix = matrix;
      for (const auto& t : trees) {
        c.trees.push_back(detail::pointer_of(g, t, v));
      }
      a.push_back(encode(c));
    }
    return a;
  }

  Certificate encode(const ExistentialCert& c) const {
    BitWriter out;
    detail::write_width(out, c.w);
    for (VertexId id : c.witnesses) {
      out.uint(id, c.w);
    }
    for (bool b : c.matrix) {
      out.bit(b);
    }
    for (const auto& p : c.trees) {
      detail::write_pointer(out, p, c.w);
    }
    return out.finish();
  }

  std::optional<ExistentialCert> decode(const Certificate& cert) const {
    BitReader in(cert);
    ExistentialCert c;
    c.w = detail::read_width(in);
    for (std::size_t i = 0; i < k_; ++i) {
      c.witnesses.push_back(in.uint(c.w));
    }
    for (std::size_t i = 0; i < k_ * (k_ - 1) / 2; ++i) {
      c.matrix.push_back(in.bit());
    }
    for (std::size_t i = 0; i < k_; ++i) {
      c.trees.push_back(detail::read_pointer(in, c.w));
    }
    if (!in.ok() || !in.at_end()) {
      return std::nullopt;
    }
    return c;
  }

  Formula sentence_;
  Formula matrix_;
  std::map<std::string, std::size_t> slot_;
  std::size_t k_ = 0;
};

// --- quantifier depth 2 ----------------------------------------------------

// Layout: 2-bit class tag; then, except for the single-vertex class, a count
// certificate; the dominating class adds a second tree rooted at a vertex
// that does not dominate (root id + pointer).
struct Depth2Cert {
  Depth2Class tag = Depth2Class::kSingleVertex;
  CountCert count;
  VertexId root2 = 0;
  TreePointer ptr2;
};

Certificate encode_depth2(const Depth2Cert& c) {
  BitWriter out;
  out.uint(static_cast<std::uint64_t>(c.tag), 2);
  if (c.tag != Depth2Class::kSingleVertex) {
    write_count(out, c.count);
  }
  if (c.tag == Depth2Class::kDominatingNotClique) {
    out.uint(c.root2, c.count.tree.w);
    detail::write_pointer(out, c.ptr2, c.count.tree.w);
  }
  return out.finish();
}

std::optional<Depth2Cert> decode_depth2(const Certificate& cert) {
  BitReader in(cert);
  Depth2Cert c;
  c.tag = static_cast<Depth2Class>(in.uint(2));
  if (c.tag != Depth2Class::kSingleVertex) {
    c.count = read_count(in);
  }
  if (c.tag == Depth2Class::kDominatingNotClique) {
    c.root2 = in.uint(c.count.tree.w);
    c.ptr2 = detail::read_pointer(in, c.count.tree.w);
  }
  if (!in.ok() || !in.at_end()) {
    return std::nullopt;
  }
  return c;
}

class Depth2Scheme : public Scheme {
 public:
  explicit Depth2Scheme(const Formula& sentence) : classes_(depth2_classification(sentence)) {}

  std::string name() const override { return "depth2-fo"; }
  std::string declared_size() const override { return "O(log n)"; }

  ProverOutcome prove(const Graph& g) const override {
    Depth2Class cls = depth2_class(g);
    if (!classes_[static_cast<std::size_t>(cls)]) {
      return ProverOutcome::refuse("the sentence is false on this graph's class");
    }
    VertexIndex root = 0;
    if (cls == Depth2Class::kDominatingNotClique) {
      while (g.degree(root) + 1 != g.size()) {
        ++root;
      }
    }
    std::optional<VertexIndex> root2;
    if (cls == Depth2Class::kDominatingNotClique) {
      root2 = 0;
      while (g.degree(*root2) + 1 == g.size()) {
        ++*root2;
      }
    }
    return ProverOutcome::accept(build(g, cls, root, root2, g.size()));
  }

  bool verify(const LocalView& view) const override {
    auto own = decode_depth2(view.cert());
    if (!own || !classes_[static_cast<std::size_t>(own->tag)]) {
      return false;
    }
    auto nbrs = decode_neighbors<Depth2Cert>(view, decode_depth2);
    if (!nbrs) {
      return false;
    }
    for (const auto& [id, c] : *nbrs) {
      if (c.tag != own->tag) {
        return false;
      }
    }
    const std::uint64_t degree = view.degree();
    if (own->tag == Depth2Class::kSingleVertex) {
      return degree == 0;
    }
    std::vector<std::pair<VertexId, CountCert>> counts;
    for (const auto& [id, c] : *nbrs) {
      counts.emplace_back(id, c.count);
    }
    if (!count_ok(view.self_id, own->count, counts)) {
      return false;
    }
    const std::uint64_t n = own->count.n;
    switch (own->tag) {
      case Depth2Class::kClique:
        return n >= 2 && degree + 1 == n;
      case Depth2Class::kNeither:
        return degree + 1 < n;
      case Depth2Class::kDominatingNotClique: {
        if (own->count.tree.ptr.is_root && degree + 1 != n) {
          return false;
        }
        std::vector<PointerNeighbor> tree;
        for (const auto& [id, c] : *nbrs) {
          if (c.root2 != own->root2) {
            return false;
          }
          tree.push_back({id, c.ptr2});
        }
        if (!detail::pointer_ok(view.self_id, own->root2, own->ptr2, tree)) {
          return false;
        }
        return !own->ptr2.is_root || degree + 1 < n;
      }
      default:
        return false;
    }
  }

  void structured_forgeries(const Graph& g, ForgeryContext& ctx) const override {
    // Every accepted class tag, every root (pair), claimed counts near n.
    for (std::size_t t = 0; t < 4; ++t) {
      if (!classes_[t]) {
        continue;
      }
      auto cls = static_cast<Depth2Class>(t);
      for (VertexIndex r = 0; r < g.size(); ++r) {
        for (std::uint64_t n = g.size() > 1 ? g.size() - 1 : 1; n <= g.size() + 1; ++n) {
          if (cls == Depth2Class::kDominatingNotClique) {
            for (VertexIndex r2 = 0; r2 < g.size(); ++r2) {
              if (ctx.offer(build(g, cls, r, r2, n)) || ctx.done()) {
                return;
              }
            }
          } else if (ctx.offer(build(g, cls, r, std::nullopt, n)) || ctx.done()) {
            return;
          }
        }
      }
    }
    ctx.mark_exhaustive();
  }

 private:
  static Assignment build(const Graph& g, Depth2Class cls, VertexIndex root, std::optional<VertexIndex> root2,
                          std::uint64_t claimed_n) {
    auto counts = honest_count(g, root);
    std::optional<detail::BfsTree> second;
    if (root2) {
      second = detail::bfs_tree(g, *root2);
    }
    Assignment a;
    for (VertexIndex v = 0; v < g.size(); ++v) {
      Depth2Cert c;
      c.tag = cls;
      c.count = counts[v];
      c.count.n = claimed_n;
      if (second) {
        c.root2 = g.id(*root2);
        c.ptr2 = detail::pointer_of(g, *second, v);
      }
      a.push_back(encode_depth2(c));
    }
    return a;
  }

  std::array<bool, 4> classes_;
};

// --- acyclicity product ----------------------------------------------------

// Layout: gamma(inner length), the inner certificate, a spanning tree
// certificate.
class AcyclicProduct : public Scheme {
 public:
  explicit AcyclicProduct(std::unique_ptr<Scheme> inner) : inner_(std::move(inner)) {}

  std::string name() const override { return inner_->name() + "+acyclic"; }
  std::string declared_size() const override { return inner_->declared_size() + " + O(log n)"; }

  ProverOutcome prove(const Graph& g) const override {
    if (g.edge_count() + 1 != g.size()) {
      return ProverOutcome::refuse("the graph has a cycle");
    }
    auto inner = inner_->prove(g);
    if (inner.refused()) {
      return inner;
    }
    auto tree = honest_tree(g);
    Assignment a;
    for (VertexIndex v = 0; v < g.size(); ++v) {
      BitWriter out;
      const Certificate& c = (*inner.assignment)[v];
      out.gamma(c.size());
      out.bits(c);
      write_tree(out, tree[v]);
      a.push_back(out.finish());
    }
    return ProverOutcome::accept(std::move(a));
  }

  bool verify(const LocalView& view) const override {
    auto own = split(view.cert());
    if (!own) {
      return false;
    }
    std::vector<Certificate> inner_nbrs;
    std::vector<PointerNeighbor> tree;
    inner_nbrs.reserve(view.degree());
    for (const auto& n : view.neighbors) {
      auto c = split(*n.cert);
      if (!c || c->second.w != own->second.w || c->second.root != own->second.root) {
        return false;
      }
      // Every edge must be a tree edge.
      bool up = !own->second.ptr.is_root && own->second.ptr.parent == n.id;
      bool down = !c->second.ptr.is_root && c->second.ptr.parent == view.self_id;
      if (!up && !down) {
        return false;
      }
      tree.push_back({n.id, c->second.ptr});
      inner_nbrs.push_back(std::move(c->first));
    }
    if (!detail::pointer_ok(view.self_id, own->second.root, own->second.ptr, tree)) {
      return false;
    }
    LocalView inner{view.self_id, &own->first, {}};
    for (std::size_t i = 0; i < view.degree(); ++i) {
      inner.neighbors.push_back({view.neighbors[i].id, &inner_nbrs[i]});
    }
    return inner_->verify(inner);
  }

  std::size_t random_payload_bits(const Graph& g) const override {
    return inner_->random_payload_bits(g) + 4 * detail::id_width(g) + 16;
  }

 private:
  static std::optional<std::pair<Certificate, TreeCert>> split(const Certificate& cert) {
    BitReader in(cert);
    std::uint64_t len = in.gamma();
    if (!in.ok() || len > in.remaining()) {
      return std::nullopt;
    }
    Certificate inner;
    for (std::uint64_t i = 0; i < len; ++i) {
      inner.push_back(in.bit());
    }
    TreeCert t = read_tree(in);
    if (!in.ok() || !in.at_end()) {
      return std::nullopt;
    }
    return std::make_pair(std::move(inner), t);
  }

  std::unique_ptr<Scheme> inner_;
};

}  // namespace

std::unique_ptr<Scheme> spanning_tree_scheme() { return std::make_unique<SpanningTreeScheme>(); }
std::unique_ptr<Scheme> vertex_count_scheme() { return std::make_unique<VertexCountScheme>(); }
std::unique_ptr<Scheme> acyclic_product(std::unique_ptr<Scheme> inner) {
  return std::make_unique<AcyclicProduct>(std::move(inner));
}

std::optional<SpanningTreeCert> decode_spanning_tree_cert(const Certificate& c) {
  auto t = decode_tree(c);
  if (!t) {
    return std::nullopt;
  }
  SpanningTreeCert out;
  out.root_id = t->root;
  if (!t->ptr.is_root) {
    out.parent_id = t->ptr.parent;
  }
  out.dist = t->ptr.dist;
  return out;
}

RootedTree reconstruct_spanning_tree(const Graph& g, const Assignment& a) {
  if (a.size() != g.size()) {
    throw SoundnessViolation("assignment is not total");
  }
  std::optional<VertexId> root;
  std::map<VertexId, VertexId> parent;
  for (VertexIndex v = 0; v < g.size(); ++v) {
    auto c = decode_spanning_tree_cert(a[v]);
    if (!c) {
      throw SoundnessViolation("undecodable certificate at vertex " + std::to_string(g.id(v)));
    }
    if (c->parent_id) {
      auto p = g.find(*c->parent_id);
      if (!p || !g.adjacent(v, *p)) {
        throw SoundnessViolation("parent of " + std::to_string(g.id(v)) + " is not a neighbour");
      }
      parent[g.id(v)] = *c->parent_id;
    } else {
      if (root) {
        throw SoundnessViolation("two roots");
      }
      root = g.id(v);
    }
  }
  if (!root) {
    throw SoundnessViolation("no root");
  }
  try {
    RootedTree t(*root, parent);
    if (t.size() != g.size()) {
      throw SoundnessViolation("tree does not span the graph");
    }
    return t;
  } catch (const GraphError& e) {
    throw SoundnessViolation(std::string("parent pointers do not form a tree: ") + e.what());
  }
}

std::unique_ptr<Scheme> existential_fo_scheme(const Formula& sentence) {
  return std::make_unique<ExistentialScheme>(sentence);
}

Depth2Class depth2_class(const Graph& g) {
  if (g.size() == 1) {
    return Depth2Class::kSingleVertex;
  }
  std::size_t dominating = 0;
  for (VertexIndex v = 0; v < g.size(); ++v) {
    if (g.degree(v) + 1 == g.size()) {
      ++dominating;
    }
  }
  if (dominating == g.size()) {
    return Depth2Class::kClique;
  }
  return dominating > 0 ? Depth2Class::kDominatingNotClique : Depth2Class::kNeither;
}

std::array<bool, 4> depth2_classification(const Formula& sentence) {
  if (quantifier_depth(sentence) > 2 || has_set_quantifier(sentence)) {
    throw std::invalid_argument("depth2_scheme: first-order sentence of quantifier depth <= 2 required");
  }
  const std::array<Graph, 4> reps{make_path(1), make_clique(2), make_star(2), make_path(4)};
  std::array<bool, 4> out{};
  for (std::size_t i = 0; i < 4; ++i) {
    out[i] = evaluate(reps[i], sentence);
  }
  return out;
}

std::unique_ptr<Scheme> depth2_scheme(const Formula& sentence) { return std::make_unique<Depth2Scheme>(sentence); }

}  // namespace certilab
