#include "certilab/kernel.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>
#include <tuple>

#include "certilab/errors.hpp"

namespace certilab {

namespace {

bool entry_less(const TypeEntry& a, const TypeEntry& b) {
  if (a.depth != b.depth) {
    return a.depth > b.depth;
  }
  return std::tie(a.vector, a.children) < std::tie(b.vector, b.children);
}

std::vector<VertexIndex> ancestors_root_first(const RootedTree& t, VertexIndex v) {
  std::vector<VertexIndex> up;
  for (auto p = t.parent(v); p; p = t.parent(*p)) {
    up.push_back(*p);
  }
  std::reverse(up.begin(), up.end());
  return up;
}

AncestorVector vector_of(const Graph& g, const RootedTree& t, VertexIndex v) {
  AncestorVector out;
  for (VertexIndex a : ancestors_root_first(t, v)) {
    out.push_back(g.adjacent(v, a));
  }
  return out;
}

}  // namespace

AncestorVector ancestor_vector(const Graph& g, const Model& m, VertexIndex v) {
  if (m.tree().size() != g.size() || !std::equal(g.ids().begin(), g.ids().end(), m.tree().nodes().begin())) {
    throw GraphError("model does not cover the graph's vertex set");
  }
  if (v >= g.size()) {
    throw GraphError("vertex index out of range");
  }
  return vector_of(g, m.tree(), v);
}

void write_type_table(BitWriter& out, const TypeTable& table) {
  out.gamma(table.entries.size());
  const unsigned cw = bit_width_for(table.entries.empty() ? 0 : table.entries.size() - 1);
  for (const auto& e : table.entries) {
    out.gamma(e.depth);
    for (bool b : e.vector) {
      out.bit(b);
    }
    out.gamma(e.children.size());
    for (const auto& [code, count] : e.children) {
      out.uint(code, cw);
      out.gamma(count);
    }
  }
}

TypeTable read_type_table(BitReader& in, std::uint32_t max_count) {
  TypeTable table;
  std::uint64_t n = in.gamma();
  if (n == 0 || n > in.remaining()) {
    in.fail();
    return table;
  }
  const unsigned cw = bit_width_for(n - 1);
  for (std::uint64_t i = 0; i < n && in.ok(); ++i) {
    TypeEntry e;
    e.depth = in.gamma();
    if (e.depth > in.remaining()) {
      in.fail();
      break;
    }
    for (std::size_t j = 0; j < e.depth; ++j) {
      e.vector.push_back(in.bit());
    }
    std::uint64_t groups = in.gamma();
    if (groups > in.remaining()) {
      in.fail();
      break;
    }
    for (std::uint64_t j = 0; j < groups && in.ok(); ++j) {
      std::uint64_t code = in.uint(cw);
      std::uint64_t count = in.gamma();
      if (code >= i || count == 0 || count > max_count ||
          table.entries[code].depth != e.depth + 1 ||
          (!e.children.empty() && e.children.back().first >= code)) {
        in.fail();
        break;
      }
      e.children.emplace_back(static_cast<TypeCode>(code), static_cast<std::uint32_t>(count));
    }
    if (!table.entries.empty() && !entry_less(table.entries.back(), e)) {
      in.fail();
    }
    table.entries.push_back(std::move(e));
  }
  return table;
}

std::string type_string(const TypeTable& table, TypeCode code) {
  const TypeEntry& e = table.entries.at(code);
  std::string s = "[";
  for (bool b : e.vector) {
    s += b ? '1' : '0';
  }
  s += "]";
  if (!e.children.empty()) {
    s += "(";
    bool first = true;
    for (const auto& [c, count] : e.children) {
      if (!first) {
        s += ",";
      }
      first = false;
      s += std::to_string(count) + "*" + type_string(table, c);
    }
    s += ")";
  }
  return s;
}

std::uint64_t expanded_size(const TypeTable& table, TypeCode code, std::uint64_t cap) {
  // Children have smaller codes, so sizes fill in by increasing code.
  std::vector<std::uint64_t> size(code + 1, 1);
  for (TypeCode c = 0; c <= code; ++c) {
    std::uint64_t s = 1;
    for (const auto& [child, count] : table.entries.at(c).children) {
      s += size[child] * count;
      s = std::min(s, cap + 1);
    }
    size[c] = s;
  }
  return size[code];
}

ExpandedType expand_type(const TypeTable& table, TypeCode code, std::size_t cap) {
  if (code >= table.entries.size() || table.entries[code].depth != 0) {
    throw GraphError("kernel description must start at a depth-0 type");
  }
  if (expanded_size(table, code, cap) > cap) {
    throw GraphError("kernel description expands past " + std::to_string(cap) + " vertices");
  }
  std::vector<VertexId> ids;
  std::vector<IdEdge> edges;
  std::map<VertexId, VertexId> parent;
  std::vector<VertexId> path;
  std::function<void(TypeCode)> place = [&](TypeCode c) {
    VertexId id = ids.size() + 1;
    ids.push_back(id);
    const TypeEntry& e = table.entries[c];
    for (std::size_t j = 0; j < e.vector.size(); ++j) {
      if (e.vector[j]) {
        edges.emplace_back(path[j], id);
      }
    }
    if (!path.empty()) {
      parent[id] = path.back();
    }
    path.push_back(id);
    for (const auto& [child, count] : e.children) {
      for (std::uint32_t i = 0; i < count; ++i) {
        place(child);
      }
    }
    path.pop_back();
  };
  place(code);
  Graph g(ids, edges, Graph::Limits{0});
  return {std::move(g), RootedTree(1, parent)};
}

KernelResult k_reduce(const Graph& g, const Model& m, std::size_t k) {
  if (k == 0) {
    throw std::invalid_argument("k-reduction needs k >= 1");
  }
  if (!is_coherent(g, m)) {
    throw GraphError("k-reduction needs a coherent model");
  }
  const RootedTree& tree = m.tree();
  const std::size_t n = g.size();

  // Provisional hash-consing; provisional ids are renumbered canonically below.
  std::map<std::tuple<std::size_t, AncestorVector, std::vector<std::pair<TypeCode, std::uint32_t>>>,
           TypeCode>
      intern;
  std::vector<TypeEntry> provisional;
  std::vector<TypeCode> type(n, 0);
  std::vector<bool> kept(n, true);
  std::set<VertexId> pruned;

  std::vector<VertexIndex> order(n);
  for (VertexIndex v = 0; v < n; ++v) {
    order[v] = v;
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](VertexIndex a, VertexIndex b) { return tree.depth(a) > tree.depth(b); });

  std::function<void(VertexIndex)> drop = [&](VertexIndex v) {
    kept[v] = false;
    for (VertexIndex c : tree.children(v)) {
      if (kept[c]) {
        drop(c);
      }
    }
  };

  for (VertexIndex v : order) {
    std::map<TypeCode, std::vector<VertexIndex>> by_type;
    for (VertexIndex c : tree.children(v)) {
      if (kept[c]) {
        by_type[type[c]].push_back(c);
      }
    }
    std::vector<std::pair<TypeCode, std::uint32_t>> groups;
    for (auto& [code, members] : by_type) {
      std::sort(members.begin(), members.end());
      while (members.size() > k) {
        pruned.insert(g.id(members.back()));
        drop(members.back());
        members.pop_back();
      }
      groups.emplace_back(code, static_cast<std::uint32_t>(members.size()));
    }
    AncestorVector vec = vector_of(g, tree, v);
    auto key = std::make_tuple(tree.depth(v), vec, groups);
    auto [it, inserted] = intern.try_emplace(key, static_cast<TypeCode>(provisional.size()));
    if (inserted) {
      provisional.push_back({tree.depth(v), std::move(vec), std::move(groups)});
    }
    type[v] = it->second;
  }

  // Canonical renumbering, deepest first; children are renamed before their
  // parents are compared.
  std::vector<TypeCode> rename(provisional.size(), 0);
  std::map<std::size_t, std::vector<TypeCode>, std::greater<>> by_depth;
  for (TypeCode c = 0; c < provisional.size(); ++c) {
    by_depth[provisional[c].depth].push_back(c);
  }
  TypeTable table;
  for (auto& [depth, codes] : by_depth) {
    std::vector<std::pair<TypeEntry, TypeCode>> level;
    for (TypeCode c : codes) {
      TypeEntry e = provisional[c];
      for (auto& group : e.children) {
        group.first = rename[group.first];
      }
      std::sort(e.children.begin(), e.children.end());
      level.emplace_back(std::move(e), c);
    }
    std::sort(level.begin(), level.end(),
              [](const auto& a, const auto& b) { return entry_less(a.first, b.first); });
    for (auto& [e, c] : level) {
      rename[c] = static_cast<TypeCode>(table.entries.size());
      table.entries.push_back(std::move(e));
    }
  }
  for (auto& t : type) {
    t = rename[t];
  }

  std::vector<VertexIndex> survivors;
  std::map<VertexId, VertexId> parent;
  for (VertexIndex v = 0; v < n; ++v) {
    if (!kept[v]) {
      continue;
    }
    survivors.push_back(v);
    if (auto p = tree.parent(v)) {
      parent[g.id(v)] = g.id(*p);
    }
  }
  Graph h = induced_subgraph(g, survivors);
  Model hm(h, RootedTree(tree.root(), parent));
  return {std::move(h), std::move(hm), std::move(pruned), std::move(type), std::move(table), std::move(kept)};
}

std::optional<boost::multiprecision::cpp_int> type_count_bound(std::size_t d, std::size_t k, std::size_t t,
                                                                std::size_t max_bits) {
  using boost::multiprecision::cpp_int;
  if (d > t) {
    throw std::invalid_argument("type_count_bound needs d <= t");
  }
  cpp_int f = cpp_int(1) << t;
  if (t + 1 > max_bits) {
    return std::nullopt;
  }
  for (std::size_t i = t; i-- > d;) {
    // (k + 1)^f has about f * log2(k + 1) bits.
    const std::size_t base_bits = bit_width_for(k + 1);
    if (f > cpp_int(max_bits)) {
      return std::nullopt;
    }
    const auto exponent = f.convert_to<std::size_t>();
    if ((exponent * (base_bits - 1)) + i > max_bits) {
      return std::nullopt;
    }
    cpp_int power = boost::multiprecision::pow(cpp_int(k + 1), static_cast<unsigned>(exponent));
    f = (cpp_int(1) << i) * power;
    if (static_cast<std::size_t>(boost::multiprecision::msb(f)) + 1 > max_bits) {
      return std::nullopt;
    }
  }
  return f;
}

bool lemma_same_type_check(const KernelResult& result, const Graph& g, const Model& m, std::size_t k) {
  const RootedTree& tree = m.tree();
  for (VertexIndex v = 0; v < g.size(); ++v) {
    if (!result.kept[v]) {
      continue;
    }
    for (VertexIndex u : tree.children(v)) {
      if (!result.pruned.contains(g.id(u))) {
        continue;
      }
      std::size_t same = 0;
      for (VertexIndex c : tree.children(v)) {
        same += result.kept[c] && result.end_types[c] == result.end_types[u];
      }
      if (same != k) {
        return false;
      }
    }
  }
  return true;
}

Formula pt_minor_formula(std::size_t t) {
  if (t < 2) {
    throw std::invalid_argument("pt_minor_formula needs t >= 2");
  }
  std::vector<std::string> xs;
  for (std::size_t i = 1; i <= t; ++i) {
    xs.push_back("x" + std::to_string(i));
  }
  std::vector<Formula> parts;
  for (std::size_t i = 0; i < t; ++i) {
    for (std::size_t j = i + 1; j < t; ++j) {
      parts.push_back(neg(eq(xs[i], xs[j])));
    }
  }
  for (std::size_t i = 0; i + 1 < t; ++i) {
    parts.push_back(adj(xs[i], xs[i + 1]));
  }
  Formula body = conj(std::move(parts));
  for (std::size_t i = t; i-- > 0;) {
    body = exists(xs[i], std::move(body));
  }
  return neg(std::move(body));
}

}  // namespace certilab
