#include "certilab/automata.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "certilab/errors.hpp"

namespace certilab {

using Node = UopConstraint::Node;
using Kind = UopConstraint::Kind;

namespace {

// ---------------------------------------------------------------------------
// Constraint parsing

class SexprParser {
 public:
  SexprParser(std::string_view text, const std::vector<std::string>& states) : text_(text), states_(states) {}

  Node parse_all() {
    Node n = formula();
    skip_space();
    if (pos_ != text_.size()) {
      throw ParseError("trailing text in constraint at offset " + std::to_string(pos_));
    }
    return n;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])) != 0) {
      ++pos_;
    }
  }

  std::string token() {
    skip_space();
    if (pos_ >= text_.size()) {
      throw ParseError("unexpected end of constraint");
    }
    if (text_[pos_] == '(' || text_[pos_] == ')') {
      return std::string(1, text_[pos_++]);
    }
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])) == 0 &&
           text_[pos_] != '(' && text_[pos_] != ')') {
      ++pos_;
    }
    return std::string(text_.substr(start, pos_ - start));
  }

  bool peek_close() {
    skip_space();
    return pos_ < text_.size() && text_[pos_] == ')';
  }

  void expect(const std::string& want) {
    std::string got = token();
    if (got != want) {
      throw ParseError("expected '" + want + "' in constraint, got '" + got + "'");
    }
  }

  Node formula() {
    expect("(");
    std::string op = token();
    Node n;
    if (op == "<=") {
      n.kind = Kind::kLe;
      n.kids.push_back(term());
      n.kids.push_back(term());
      expect(")");
      std::set<std::size_t> vars;
      collect(n, vars);
      if (vars.size() != 1) {
        throw ParseError("comparison must mention exactly one state, found " + std::to_string(vars.size()));
      }
      return n;
    }
    if (op == "and") {
      n.kind = Kind::kAnd;
      while (!peek_close()) {
        n.kids.push_back(formula());
      }
      expect(")");
      if (n.kids.empty()) {
        throw ParseError("'and' needs at least one operand");
      }
      return n;
    }
    if (op == "not") {
      n.kind = Kind::kNot;
      n.kids.push_back(formula());
      expect(")");
      return n;
    }
    throw ParseError("unknown constraint operator '" + op + "'");
  }

  Node term() {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] != '(') {
      std::string lit = token();
      if (lit.empty() || !std::all_of(lit.begin(), lit.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }) ||
          lit.size() > 18) {
        throw ParseError("bad integer '" + lit + "' in constraint");
      }
      Node n;
      n.kind = Kind::kConst;
      n.value = std::stoull(lit);
      return n;
    }
    expect("(");
    std::string op = token();
    Node n;
    if (op == "var") {
      std::string name = token();
      auto it = std::find(states_.begin(), states_.end(), name);
      if (it == states_.end()) {
        throw ParseError("unknown state '" + name + "' in constraint");
      }
      n.kind = Kind::kVar;
      n.state = static_cast<std::size_t>(it - states_.begin());
    } else if (op == "+") {
      n.kind = Kind::kPlus;
      while (!peek_close()) {
        n.kids.push_back(term());
      }
      if (n.kids.size() < 2) {
        throw ParseError("'+' needs at least two operands");
      }
    } else {
      throw ParseError("unknown term operator '" + op + "'");
    }
    expect(")");
    return n;
  }

  static void collect(const Node& n, std::set<std::size_t>& vars) {
    if (n.kind == Kind::kVar) {
      vars.insert(n.state);
    }
    for (const auto& k : n.kids) {
      collect(k, vars);
    }
  }

  std::string_view text_;
  const std::vector<std::string>& states_;
  std::size_t pos_ = 0;
};

std::uint64_t eval_term(const Node& n, const std::vector<std::uint64_t>& counts) {
  switch (n.kind) {
    case Kind::kConst:
      return n.value;
    case Kind::kVar:
      return n.state < counts.size() ? counts[n.state] : 0;
    case Kind::kPlus: {
      std::uint64_t s = 0;
      for (const auto& k : n.kids) {
        s += eval_term(k, counts);
      }
      return s;
    }
    default:
      throw std::logic_error("not a term");
  }
}

bool eval_node(const Node& n, const std::vector<std::uint64_t>& counts) {
  switch (n.kind) {
    case Kind::kLe:
      return eval_term(n.kids[0], counts) <= eval_term(n.kids[1], counts);
    case Kind::kAnd:
      return std::all_of(n.kids.begin(), n.kids.end(), [&](const Node& k) { return eval_node(k, counts); });
    case Kind::kNot:
      return !eval_node(n.kids[0], counts);
    default:
      throw std::logic_error("not a formula");
  }
}

std::uint64_t sum_constants(const Node& n) {
  std::uint64_t s = n.kind == Kind::kConst ? n.value : 0;
  for (const auto& k : n.kids) {
    s += sum_constants(k);
  }
  return s;
}

std::string render(const Node& n, const std::vector<std::string>& states) {
  switch (n.kind) {
    case Kind::kConst:
      return std::to_string(n.value);
    case Kind::kVar:
      return "(var " + states.at(n.state) + ")";
    default:
      break;
  }
  std::string op = n.kind == Kind::kLe ? "<=" : n.kind == Kind::kAnd ? "and" : n.kind == Kind::kNot ? "not" : "+";
  std::string s = "(" + op;
  for (const auto& k : n.kids) {
    s += " " + render(k, states);
  }
  return s + ")";
}

Node constant(std::uint64_t c) {
  Node n;
  n.kind = Kind::kConst;
  n.value = c;
  return n;
}

Node variable(std::size_t q) {
  Node n;
  n.kind = Kind::kVar;
  n.state = q;
  return n;
}

Node compare(Node lhs, Node rhs) {
  Node n;
  n.kind = Kind::kLe;
  n.kids.push_back(std::move(lhs));
  n.kids.push_back(std::move(rhs));
  return n;
}

}  // namespace

UopConstraint::UopConstraint(Node root) : root_(std::move(root)) {}

UopConstraint UopConstraint::parse(std::string_view text, const std::vector<std::string>& states) {
  return UopConstraint(SexprParser(text, states).parse_all());
}

UopConstraint UopConstraint::at_least(std::size_t state, std::uint64_t c) {
  return UopConstraint(compare(constant(c), variable(state)));
}

UopConstraint UopConstraint::at_most(std::size_t state, std::uint64_t c) {
  return UopConstraint(compare(variable(state), constant(c)));
}

UopConstraint UopConstraint::conj(std::vector<UopConstraint> parts) {
  if (parts.empty()) {
    throw std::invalid_argument("empty conjunction");
  }
  if (parts.size() == 1) {
    return std::move(parts.front());
  }
  Node n;
  n.kind = Kind::kAnd;
  for (auto& p : parts) {
    n.kids.push_back(std::move(p.root_));
  }
  return UopConstraint(std::move(n));
}

UopConstraint UopConstraint::neg(UopConstraint c) {
  Node n;
  n.kind = Kind::kNot;
  n.kids.push_back(std::move(c.root_));
  return UopConstraint(std::move(n));
}

UopConstraint UopConstraint::disj(std::vector<UopConstraint> parts) {
  for (auto& p : parts) {
    p = neg(std::move(p));
  }
  return neg(conj(std::move(parts)));
}

UopConstraint UopConstraint::always(std::size_t state) { return at_least(state, 0); }

bool UopConstraint::eval(const std::vector<std::uint64_t>& counts) const { return eval_node(root_, counts); }

std::uint64_t UopConstraint::constant_sum() const { return sum_constants(root_); }

std::string UopConstraint::to_string(const std::vector<std::string>& states) const { return render(root_, states); }

std::size_t UopAutomaton::state_index(std::string_view name) const {
  auto it = std::find(states.begin(), states.end(), name);
  if (it == states.end()) {
    throw ParseError("unknown state '" + std::string(name) + "'");
  }
  return static_cast<std::size_t>(it - states.begin());
}

std::size_t UopAutomaton::label_index(std::string_view name) const {
  auto it = std::find(labels.begin(), labels.end(), name);
  if (it == labels.end()) {
    throw ParseError("unknown label '" + std::string(name) + "'");
  }
  return static_cast<std::size_t>(it - labels.begin());
}

UopAutomaton parse_automaton(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("automaton: ") + e.what());
  }
  try {
    UopAutomaton a;
    a.states = doc.at("states").get<std::vector<std::string>>();
    a.labels = doc.at("labels").get<std::vector<std::string>>();
    if (a.states.empty() || a.labels.empty()) {
      throw ParseError("automaton needs at least one state and one label");
    }
    if (std::set<std::string>(a.states.begin(), a.states.end()).size() != a.states.size() ||
        std::set<std::string>(a.labels.begin(), a.labels.end()).size() != a.labels.size()) {
      throw ParseError("duplicate state or label names");
    }
    a.accepting.assign(a.states.size(), false);
    for (const auto& name : doc.at("accepting").get<std::vector<std::string>>()) {
      a.accepting[a.state_index(name)] = true;
    }
    std::vector<std::vector<std::optional<UopConstraint>>> delta(
        a.states.size(), std::vector<std::optional<UopConstraint>>(a.labels.size()));
    for (const auto& entry : doc.at("delta")) {
      std::size_t q = a.state_index(entry.at("state").get<std::string>());
      std::size_t l = a.label_index(entry.at("label").get<std::string>());
      if (delta[q][l]) {
        throw ParseError("duplicate transition for state " + a.states[q] + ", label " + a.labels[l]);
      }
      delta[q][l] = UopConstraint::parse(entry.at("constraint").get<std::string>(), a.states);
    }
    for (std::size_t q = 0; q < a.states.size(); ++q) {
      a.delta.emplace_back();
      for (std::size_t l = 0; l < a.labels.size(); ++l) {
        if (!delta[q][l]) {
          throw ParseError("no transition for state " + a.states[q] + ", label " + a.labels[l]);
        }
        a.delta.back().push_back(std::move(*delta[q][l]));
      }
    }
    return a;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("automaton: ") + e.what());
  }
}

std::string serialize_automaton(const UopAutomaton& a) {
  nlohmann::ordered_json doc;
  doc["states"] = a.states;
  doc["labels"] = a.labels;
  std::vector<std::string> acc;
  for (std::size_t q = 0; q < a.states.size(); ++q) {
    if (a.accepting[q]) {
      acc.push_back(a.states[q]);
    }
  }
  doc["accepting"] = acc;
  doc["delta"] = nlohmann::ordered_json::array();
  for (std::size_t q = 0; q < a.states.size(); ++q) {
    for (std::size_t l = 0; l < a.labels.size(); ++l) {
      nlohmann::ordered_json e;
      e["state"] = a.states[q];
      e["label"] = a.labels[l];
      e["constraint"] = a.delta[q][l].to_string(a.states);
      doc["delta"].push_back(e);
    }
  }
  return doc.dump();
}

bool eval_constraint(const UopConstraint& c, const UopAutomaton& a,
                     const std::map<std::string, std::uint64_t>& counts) {
  std::vector<std::uint64_t> by_index(a.states.size(), 0);
  for (const auto& [name, count] : counts) {
    by_index[a.state_index(name)] = count;
  }
  return c.eval(by_index);
}

// ---------------------------------------------------------------------------
// Runs

namespace {

// Child count vectors with every coordinate capped at `cap`, packed base cap+1.
class CountSpace {
 public:
  CountSpace(std::size_t states, std::uint64_t cap) : states_(states), cap_(cap) {
    std::uint64_t size = 1;
    for (std::size_t i = 0; i < states; ++i) {
      size *= cap + 1;
      if (size > kRunCountSpaceCap) {
        throw CapExceeded("capped child-count space exceeds " + std::to_string(kRunCountSpaceCap));
      }
      stride_.push_back(size / (cap + 1));
    }
  }

  [[nodiscard]] std::uint64_t count(std::uint64_t packed, std::size_t q) const {
    return (packed / stride_[q]) % (cap_ + 1);
  }

  [[nodiscard]] std::uint64_t add(std::uint64_t packed, std::size_t q) const {
    return count(packed, q) == cap_ ? packed : packed + stride_[q];
  }

  [[nodiscard]] std::vector<std::uint64_t> unpack(std::uint64_t packed) const {
    std::vector<std::uint64_t> out(states_);
    for (std::size_t q = 0; q < states_; ++q) {
      out[q] = count(packed, q);
    }
    return out;
  }

  [[nodiscard]] std::uint64_t cap() const { return cap_; }

 private:
  std::size_t states_;
  std::uint64_t cap_;
  std::vector<std::uint64_t> stride_;
};

void check_labels(const RootedTree& tree, const std::vector<std::size_t>& labels, const UopAutomaton& a) {
  if (labels.size() != tree.size()) {
    throw GraphError("one label per tree node expected");
  }
  for (std::size_t l : labels) {
    if (l >= a.labels.size()) {
      throw GraphError("label index out of range");
    }
  }
}

std::vector<VertexIndex> postorder(const RootedTree& tree) {
  std::vector<VertexIndex> order;
  std::vector<std::pair<VertexIndex, bool>> stack{{tree.root_index(), false}};
  while (!stack.empty()) {
    auto [v, done] = stack.back();
    stack.pop_back();
    if (done) {
      order.push_back(v);
      continue;
    }
    stack.emplace_back(v, true);
    for (VertexIndex c : tree.children(v)) {
      stack.emplace_back(c, false);
    }
  }
  return order;
}

}  // namespace

std::optional<std::vector<std::size_t>> find_run(const RootedTree& tree, const std::vector<std::size_t>& labels,
                                                 const UopAutomaton& a) {
  check_labels(tree, labels, a);
  const std::size_t nq = a.states.size();
  if (nq > kRunStateCap) {
    throw CapExceeded("automaton has " + std::to_string(nq) + " states, cap is " + std::to_string(kRunStateCap));
  }
  std::uint64_t cap = 0;
  for (const auto& row : a.delta) {
    for (const auto& c : row) {
      cap = std::max(cap, c.constant_sum() + 1);
    }
  }
  CountSpace space(nq, cap);

  const std::size_t n = tree.size();
  std::vector<std::uint32_t> admissible(n, 0);  // state bitmask
  // layers[v][i]: sorted capped count vectors reachable with the first i children.
  std::vector<std::vector<std::vector<std::uint64_t>>> layers(n);
  for (VertexIndex v : postorder(tree)) {
    auto& lv = layers[v];
    lv.push_back({0});
    for (VertexIndex c : tree.children(v)) {
      std::vector<std::uint64_t> next;
      for (std::uint64_t r : lv.back()) {
        for (std::size_t q = 0; q < nq; ++q) {
          if ((admissible[c] >> q) & 1U) {
            next.push_back(space.add(r, q));
          }
        }
      }
      std::sort(next.begin(), next.end());
      next.erase(std::unique(next.begin(), next.end()), next.end());
      lv.push_back(std::move(next));
    }
    for (std::size_t q = 0; q < nq; ++q) {
      const auto& c = a.delta[q][labels[v]];
      for (std::uint64_t r : lv.back()) {
        if (c.eval(space.unpack(r))) {
          admissible[v] |= 1U << q;
          break;
        }
      }
    }
  }

  const VertexIndex root = tree.root_index();
  std::optional<std::size_t> root_state;
  for (std::size_t q = 0; q < nq; ++q) {
    if (a.accepting[q] && ((admissible[root] >> q) & 1U)) {
      root_state = q;
      break;
    }
  }
  if (!root_state) {
    return std::nullopt;
  }

  std::vector<std::size_t> run(n, 0);
  std::vector<VertexIndex> stack{root};
  run[root] = *root_state;
  while (!stack.empty()) {
    VertexIndex v = stack.back();
    stack.pop_back();
    const auto& lv = layers[v];
    const auto& c = a.delta[run[v]][labels[v]];
    std::uint64_t target = 0;
    for (std::uint64_t r : lv.back()) {
      if (c.eval(space.unpack(r))) {
        target = r;
        break;
      }
    }
    auto kids = tree.children(v);
    for (std::size_t i = kids.size(); i-- > 0;) {
      const auto& before = lv[i];
      bool placed = false;
      for (std::size_t q = 0; q < nq && !placed; ++q) {
        if (!((admissible[kids[i]] >> q) & 1U)) {
          continue;
        }
        const std::uint64_t have = space.count(target, q);
        if (have == 0) {
          continue;
        }
        // Predecessors of `target` under adding one q-child.
        std::vector<std::uint64_t> preds{target - space.add(0, q)};
        if (have == space.cap()) {
          preds.push_back(target);
        }
        for (std::uint64_t p : preds) {
          if (std::binary_search(before.begin(), before.end(), p) && space.add(p, q) == target) {
            run[kids[i]] = q;
            target = p;
            placed = true;
            break;
          }
        }
      }
      if (!placed) {
        throw std::logic_error("find_run: run reconstruction failed");
      }
      stack.push_back(kids[i]);
    }
  }
  return run;
}

bool is_accepting_run(const RootedTree& tree, const std::vector<std::size_t>& labels, const UopAutomaton& a,
                      const std::vector<std::size_t>& run) {
  check_labels(tree, labels, a);
  if (run.size() != tree.size()) {
    return false;
  }
  for (std::size_t q : run) {
    if (q >= a.states.size()) {
      return false;
    }
  }
  if (!a.accepting[run[tree.root_index()]]) {
    return false;
  }
  for (VertexIndex v = 0; v < tree.size(); ++v) {
    std::vector<std::uint64_t> counts(a.states.size(), 0);
    for (VertexIndex c : tree.children(v)) {
      ++counts[run[c]];
    }
    if (!a.delta[run[v]][labels[v]].eval(counts)) {
      return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Catalog

UopAutomaton height_at_most(std::size_t d) {
  UopAutomaton a;
  for (std::size_t i = 0; i <= d; ++i) {
    a.states.push_back("h" + std::to_string(i));
  }
  a.labels = {"v"};
  a.accepting.assign(d + 1, true);
  for (std::size_t i = 0; i <= d; ++i) {
    // Height exactly i: no child of height >= i, and one of height i - 1.
    std::vector<UopConstraint> parts;
    for (std::size_t j = i; j <= d; ++j) {
      parts.push_back(UopConstraint::at_most(j, 0));
    }
    if (i > 0) {
      parts.push_back(UopConstraint::at_least(i - 1, 1));
    }
    a.delta.push_back({UopConstraint::conj(std::move(parts))});
  }
  return a;
}

UopAutomaton max_children(std::size_t c) {
  UopAutomaton a;
  a.states = {"q"};
  a.labels = {"v"};
  a.accepting = {true};
  a.delta = {{UopConstraint::at_most(0, c)}};
  return a;
}

UopAutomaton exists_heavy_vertex(std::size_t c) {
  UopAutomaton a;
  a.states = {"none", "found"};
  a.labels = {"v"};
  a.accepting = {false, true};
  // With no "found" child, the children are all "none" and y_none is the
  // number of children.
  auto heavy_here = UopConstraint::at_least(0, c);
  auto below = UopConstraint::at_least(1, 1);
  auto none = UopConstraint::conj({UopConstraint::at_most(1, 0), UopConstraint::neg(heavy_here)});
  a.delta = {{none}, {UopConstraint::disj({below, heavy_here})}};
  return a;
}

std::uint16_t automaton_fingerprint(const UopAutomaton& a) {
  std::uint32_t h = 2166136261U;
  for (unsigned char ch : serialize_automaton(a)) {
    h ^= ch;
    h *= 16777619U;
  }
  return static_cast<std::uint16_t>((h >> 16) ^ (h & 0xFFFFU));
}

RootedTree root_tree(const Graph& g, VertexId root) {
  if (g.edge_count() + 1 != g.size()) {
    throw GraphError("graph is not a tree");
  }
  VertexIndex r = g.index(root);
  std::map<VertexId, VertexId> parent;
  std::vector<bool> seen(g.size(), false);
  std::deque<VertexIndex> queue{r};
  seen[r] = true;
  while (!queue.empty()) {
    VertexIndex v = queue.front();
    queue.pop_front();
    for (VertexIndex w : g.neighbors(v)) {
      if (!seen[w]) {
        seen[w] = true;
        parent[g.id(w)] = g.id(v);
        queue.push_back(w);
      }
    }
  }
  return RootedTree(root, parent);
}

// ---------------------------------------------------------------------------
// Scheme

namespace {

unsigned state_width(const UopAutomaton& a) { return bit_width_for(a.states.size() - 1); }

Bits description_bits(const UopAutomaton& a) {
  BitWriter out;
  std::string text = serialize_automaton(a);
  out.gamma(text.size());
  for (unsigned char ch : text) {
    out.uint(ch, 8);
  }
  return out.finish();
}

Certificate encode_tree_run_cert(const TreeRunCert& c, const UopAutomaton& a, AutomatonMode mode,
                                 const Bits& description) {
  BitWriter out;
  out.uint(c.counter, 2);
  if (mode == AutomatonMode::kFingerprint) {
    out.uint(automaton_fingerprint(a), 16);
  } else if (mode == AutomatonMode::kFullDescription) {
    out.bits(description);
  }
  out.uint(c.state, state_width(a));
  return out.finish();
}

std::optional<TreeRunCert> decode_with(const Certificate& cert, const UopAutomaton& a, AutomatonMode mode,
                                       std::uint16_t fingerprint, const Bits& description) {
  BitReader in(cert);
  TreeRunCert c;
  c.counter = static_cast<unsigned>(in.uint(2));
  if (mode == AutomatonMode::kFingerprint) {
    if (in.uint(16) != fingerprint) {
      return std::nullopt;
    }
  } else if (mode == AutomatonMode::kFullDescription) {
    if (cert.size() < description.size() + 2) {
      return std::nullopt;
    }
    for (std::size_t i = 0; i < description.size(); ++i) {
      if (in.bit() != description[i]) {
        return std::nullopt;
      }
    }
  }
  c.state = in.uint(state_width(a));
  if (!in.ok() || !in.at_end() || c.counter > 2 || c.state >= a.states.size()) {
    return std::nullopt;
  }
  return c;
}

class TreeRunScheme : public Scheme {
 public:
  TreeRunScheme(UopAutomaton a, AutomatonMode mode)
      : a_(std::move(a)), mode_(mode), fingerprint_(automaton_fingerprint(a_)), description_(description_bits(a_)) {}

  std::string name() const override { return "tree-automaton"; }
  std::string declared_size() const override { return "O(1)"; }

  ProverOutcome prove(const Graph& g) const override {
    if (g.edge_count() + 1 != g.size()) {
      return ProverOutcome::refuse("graph is not a tree");
    }
    const std::vector<std::size_t> labels(g.size(), 0);
    for (VertexId root : g.ids()) {
      RootedTree tree = root_tree(g, root);
      auto run = find_run(tree, labels, a_);
      if (!run) {
        continue;
      }
      Assignment out;
      for (VertexIndex v = 0; v < g.size(); ++v) {
        TreeRunCert c{static_cast<unsigned>(tree.depth(v) % 3), (*run)[v]};
        out.push_back(encode_tree_run_cert(c, a_, mode_, description_));
      }
      return ProverOutcome::accept(std::move(out));
    }
    return ProverOutcome::refuse("no rooting has an accepting run");
  }

  bool verify(const LocalView& view) const override {
    auto own = decode(view.cert());
    if (!own) {
      return false;
    }
    std::size_t parents = 0;
    std::vector<std::uint64_t> counts(a_.states.size(), 0);
    for (const auto& n : view.neighbors) {
      auto c = decode(*n.cert);
      if (!c) {
        return false;
      }
      if (c->counter == (own->counter + 2) % 3) {
        ++parents;
      } else if (c->counter == (own->counter + 1) % 3) {
        ++counts[c->state];
      } else {
        return false;
      }
    }
    if (parents > 1) {
      return false;
    }
    if (parents == 0 && (own->counter != 0 || !a_.accepting[own->state])) {
      return false;
    }
    return a_.delta[own->state][0].eval(counts);
  }

  void structured_forgeries(const Graph& g, ForgeryContext& ctx) const override {
    // The alphabet is finite: every (counter, state) pair under the right name.
    std::vector<Certificate> alphabet;
    for (unsigned counter = 0; counter < 3; ++counter) {
      for (std::size_t q = 0; q < a_.states.size(); ++q) {
        alphabet.push_back(encode_tree_run_cert({counter, q}, a_, mode_, description_));
      }
    }
    std::vector<std::vector<Certificate>> space(g.size(), alphabet);
    const std::uint64_t left = ctx.budget().exhaustive_cap > ctx.tried() ? ctx.budget().exhaustive_cap - ctx.tried() : 0;
    auto result = backtrack_search(*this, g, space, left);
    ctx.count(result.nodes);
    if (result.accepted) {
      ctx.offer(*result.accepted);
    } else if (result.complete) {
      ctx.mark_exhaustive();
    }
  }

  std::size_t random_payload_bits(const Graph& /*g*/) const override {
    return encode_tree_run_cert({0, 0}, a_, mode_, description_).size();
  }

  [[nodiscard]] std::optional<TreeRunCert> decode(const Certificate& c) const {
    return decode_with(c, a_, mode_, fingerprint_, description_);
  }

 private:
  UopAutomaton a_;
  AutomatonMode mode_;
  std::uint16_t fingerprint_;
  Bits description_;
};

}  // namespace

std::unique_ptr<Scheme> mso_tree_scheme(const UopAutomaton& a, AutomatonMode mode) {
  if (a.states.empty() || a.labels.empty() || a.delta.size() != a.states.size()) {
    throw std::invalid_argument("mso_tree_scheme: malformed automaton");
  }
  return std::make_unique<TreeRunScheme>(a, mode);
}

std::optional<TreeRunCert> decode_tree_run_cert(const Certificate& c, const UopAutomaton& a, AutomatonMode mode) {
  return decode_with(c, a, mode, automaton_fingerprint(a), description_bits(a));
}

std::pair<RootedTree, std::vector<std::size_t>> reconstruct_rooting(const Graph& g, const Assignment& accepted,
                                                                    const UopAutomaton& a, AutomatonMode mode) {
  if (accepted.size() != g.size()) {
    throw SoundnessViolation("assignment is not total");
  }
  std::vector<TreeRunCert> certs;
  for (const auto& c : accepted) {
    auto d = decode_tree_run_cert(c, a, mode);
    if (!d) {
      throw SoundnessViolation("accepted certificate does not decode");
    }
    certs.push_back(*d);
  }
  std::map<VertexId, VertexId> parent;
  std::optional<VertexId> root;
  for (VertexIndex v = 0; v < g.size(); ++v) {
    std::optional<VertexIndex> up;
    for (VertexIndex w : g.neighbors(v)) {
      if (certs[w].counter == (certs[v].counter + 2) % 3) {
        if (up) {
          throw SoundnessViolation("vertex " + std::to_string(g.id(v)) + " has two parents");
        }
        up = w;
      }
    }
    if (up) {
      parent[g.id(v)] = g.id(*up);
    } else if (root) {
      throw SoundnessViolation("two roots");
    } else {
      root = g.id(v);
    }
  }
  if (!root) {
    throw SoundnessViolation("no root");
  }
  try {
    RootedTree tree(*root, parent);
    if (tree.size() != g.size() || parent.size() != g.edge_count()) {
      throw SoundnessViolation("parent pointers do not span the graph as a tree");
    }
    std::vector<std::size_t> run;
    for (const auto& c : certs) {
      run.push_back(c.state);
    }
    if (!is_accepting_run(tree, std::vector<std::size_t>(g.size(), 0), a, run)) {
      throw SoundnessViolation("certified states are not an accepting run");
    }
    return {std::move(tree), std::move(run)};
  } catch (const GraphError& e) {
    throw SoundnessViolation(std::string("parent pointers: ") + e.what());
  }
}

}  // namespace certilab
