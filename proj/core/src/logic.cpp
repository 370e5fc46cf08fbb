#include "certilab/logic.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <random>
#include <stdexcept>

#include "certilab/errors.hpp"

namespace certilab {

namespace {

bool is_vertex_var(std::string_view name) {
  return !name.empty() && std::islower(static_cast<unsigned char>(name[0])) != 0;
}

bool is_set_var(std::string_view name) {
  return !name.empty() && std::isupper(static_cast<unsigned char>(name[0])) != 0;
}

Formula atom(FormulaKind kind, std::string x, std::string y) {
  Formula f;
  f.kind = kind;
  f.lhs = std::move(x);
  f.rhs = std::move(y);
  return f;
}

Formula quantifier(FormulaKind kind, std::string x, Formula body) {
  Formula f;
  f.kind = kind;
  f.lhs = std::move(x);
  f.children.push_back(std::move(body));
  return f;
}

Formula connective(FormulaKind kind, std::vector<Formula> parts) {
  if (parts.empty()) {
    throw std::invalid_argument("empty conjunction or disjunction");
  }
  if (parts.size() == 1) {
    return std::move(parts.front());
  }
  Formula f;
  f.kind = kind;
  f.children = std::move(parts);
  return f;
}

bool is_quantifier(FormulaKind k) {
  return k == FormulaKind::kForall || k == FormulaKind::kExists || k == FormulaKind::kForallSet ||
         k == FormulaKind::kExistsSet;
}

// ---------------------------------------------------------------------------
// Parsing

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Formula parse() {
    Formula f = formula();
    skip_space();
    if (pos_ != text_.size()) {
      error("trailing input");
    }
    return f;
  }

 private:
  [[noreturn]] void error(const std::string& what) const {
    throw ParseError("formula: " + what + " at offset " + std::to_string(pos_));
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])) != 0) {
      ++pos_;
    }
  }

  void expect(char c) {
    skip_space();
    if (pos_ >= text_.size() || text_[pos_] != c) {
      error(std::string("expected '") + c + "'");
    }
    ++pos_;
  }

  bool peek(char c) {
    skip_space();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  std::string word() {
    skip_space();
    std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) != 0 ||
                                   text_[pos_] == '_' || text_[pos_] == '=' || text_[pos_] == '\'')) {
      ++pos_;
    }
    if (start == pos_) {
      error("expected a symbol");
    }
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string vertex_var() {
    std::string v = word();
    if (!is_vertex_var(v)) {
      error("'" + v + "' is not a vertex variable (lowercase)");
    }
    return v;
  }

  std::string set_var() {
    std::string v = word();
    if (!is_set_var(v)) {
      error("'" + v + "' is not a set variable (uppercase)");
    }
    return v;
  }

  Formula formula() {
    expect('(');
    std::string head = word();
    Formula f;
    if (head == "=" || head == "adj") {
      std::string x = vertex_var();
      std::string y = vertex_var();
      f = atom(head == "=" ? FormulaKind::kEqual : FormulaKind::kAdjacent, x, y);
    } else if (head == "in") {
      std::string x = vertex_var();
      std::string s = set_var();
      f = atom(FormulaKind::kMember, x, s);
    } else if (head == "not") {
      f = neg(formula());
    } else if (head == "and" || head == "or") {
      std::vector<Formula> parts;
      while (!peek(')')) {
        parts.push_back(formula());
      }
      if (parts.size() < 2) {
        error("'" + head + "' needs at least two operands");
      }
      f.kind = head == "and" ? FormulaKind::kAnd : FormulaKind::kOr;
      f.children = std::move(parts);
    } else if (head == "forall" || head == "exists") {
      std::string x = vertex_var();
      f = quantifier(head == "forall" ? FormulaKind::kForall : FormulaKind::kExists, x, formula());
    } else if (head == "forallset" || head == "existsset") {
      std::string x = set_var();
      f = quantifier(head == "forallset" ? FormulaKind::kForallSet : FormulaKind::kExistsSet, x, formula());
    } else {
      error("unknown operator '" + head + "'");
    }
    expect(')');
    return f;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

void collect_free(const Formula& f, std::vector<std::string>& bound, std::set<std::string>& out) {
  switch (f.kind) {
    case FormulaKind::kEqual:
    case FormulaKind::kAdjacent:
    case FormulaKind::kMember:
      for (const auto* v : {&f.lhs, &f.rhs}) {
        if (std::find(bound.begin(), bound.end(), *v) == bound.end()) {
          out.insert(*v);
        }
      }
      return;
    default:
      break;
  }
  if (is_quantifier(f.kind)) {
    bound.push_back(f.lhs);
    collect_free(f.children[0], bound, out);
    bound.pop_back();
    return;
  }
  for (const auto& c : f.children) {
    collect_free(c, bound, out);
  }
}

// ---------------------------------------------------------------------------
// Evaluation: variables are resolved to slots once, then the tree is walked.

class Evaluator {
 public:
  Evaluator(const Graph& g, const Formula& f, const Environment& env) : g_(g), n_(g.size()) {
    if (n_ <= 2048) {
      matrix_.assign(n_ * n_, 0);
      for (VertexIndex v = 0; v < n_; ++v) {
        for (VertexIndex w : g.neighbors(v)) {
          matrix_[v * n_ + w] = 1;
        }
      }
    }
    std::vector<std::pair<std::string, int>> scope;
    for (const auto& [name, v] : env.vertices) {
      if (!is_vertex_var(name) || v >= n_) {
        throw GraphError("bad vertex binding for '" + name + "'");
      }
      scope.emplace_back(name, static_cast<int>(vertex_values_.size()));
      vertex_values_.push_back(v);
    }
    std::vector<std::pair<std::string, int>> set_scope;
    for (const auto& [name, s] : env.sets) {
      if (!is_set_var(name) || s.size() != n_) {
        throw GraphError("bad set binding for '" + name + "'");
      }
      set_scope.emplace_back(name, static_cast<int>(set_values_.size()));
      set_values_.push_back(s);
    }
    root_ = compile(f, scope, set_scope);
  }

  bool run() { return eval(root_); }

 private:
  struct Node {
    FormulaKind kind;
    int a = -1;
    int b = -1;
    std::vector<int> kids;
  };

  static int lookup(const std::vector<std::pair<std::string, int>>& scope, const std::string& name) {
    for (auto it = scope.rbegin(); it != scope.rend(); ++it) {
      if (it->first == name) {
        return it->second;
      }
    }
    throw GraphError("unbound variable '" + name + "'");
  }

  int compile(const Formula& f, std::vector<std::pair<std::string, int>>& scope,
              std::vector<std::pair<std::string, int>>& set_scope) {
    Node node{f.kind, -1, -1, {}};
    switch (f.kind) {
      case FormulaKind::kEqual:
      case FormulaKind::kAdjacent:
        node.a = lookup(scope, f.lhs);
        node.b = lookup(scope, f.rhs);
        break;
      case FormulaKind::kMember:
        node.a = lookup(scope, f.lhs);
        node.b = lookup(set_scope, f.rhs);
        break;
      case FormulaKind::kForall:
      case FormulaKind::kExists: {
        node.a = static_cast<int>(vertex_values_.size());
        vertex_values_.push_back(0);
        scope.emplace_back(f.lhs, node.a);
        node.kids.push_back(compile(f.children[0], scope, set_scope));
        scope.pop_back();
        break;
      }
      case FormulaKind::kForallSet:
      case FormulaKind::kExistsSet: {
        node.a = static_cast<int>(set_values_.size());
        set_values_.emplace_back(n_, false);
        set_scope.emplace_back(f.lhs, node.a);
        node.kids.push_back(compile(f.children[0], scope, set_scope));
        set_scope.pop_back();
        break;
      }
      default:
        for (const auto& c : f.children) {
          node.kids.push_back(compile(c, scope, set_scope));
        }
        break;
    }
    nodes_.push_back(std::move(node));
    return static_cast<int>(nodes_.size() - 1);
  }

  bool adjacent(VertexIndex u, VertexIndex v) const {
    return matrix_.empty() ? g_.adjacent(u, v) : matrix_[u * n_ + v] != 0;
  }

  bool eval(int id) {
    const Node& node = nodes_[static_cast<std::size_t>(id)];
    switch (node.kind) {
      case FormulaKind::kEqual:
        return vertex_values_[node.a] == vertex_values_[node.b];
      case FormulaKind::kAdjacent:
        return adjacent(vertex_values_[node.a], vertex_values_[node.b]);
      case FormulaKind::kMember:
        return set_values_[node.b][vertex_values_[node.a]];
      case FormulaKind::kNot:
        return !eval(node.kids[0]);
      case FormulaKind::kAnd:
        return std::all_of(node.kids.begin(), node.kids.end(), [&](int k) { return eval(k); });
      case FormulaKind::kOr:
        return std::any_of(node.kids.begin(), node.kids.end(), [&](int k) { return eval(k); });
      case FormulaKind::kForall:
      case FormulaKind::kExists: {
        const bool want = node.kind == FormulaKind::kExists;
        for (VertexIndex v = 0; v < n_; ++v) {
          vertex_values_[node.a] = v;
          if (eval(node.kids[0]) == want) {
            return want;
          }
        }
        return !want;
      }
      case FormulaKind::kForallSet:
      case FormulaKind::kExistsSet: {
        const bool want = node.kind == FormulaKind::kExistsSet;
        auto& set = set_values_[node.a];
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n_); ++mask) {
          for (std::size_t v = 0; v < n_; ++v) {
            set[v] = ((mask >> v) & 1U) != 0;
          }
          if (eval(node.kids[0]) == want) {
            return want;
          }
        }
        return !want;
      }
    }
    return false;
  }

  const Graph& g_;
  std::size_t n_;
  std::vector<char> matrix_;
  std::vector<Node> nodes_;
  int root_ = -1;
  std::vector<VertexIndex> vertex_values_;
  std::vector<std::vector<bool>> set_values_;
};

// ---------------------------------------------------------------------------
// Random sentence generation

class SentenceGenerator {
 public:
  explicit SentenceGenerator(std::uint64_t seed) : rng_(seed) {}

  Formula sentence(std::size_t depth) {
    std::vector<std::string> bound;
    std::size_t budget = 6;
    return quantified(depth, bound, budget);
  }

 private:
  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

  Formula quantified(std::size_t depth_left, std::vector<std::string>& bound, std::size_t& budget) {
    std::string var = "x" + std::to_string(bound.size() + 1);
    bound.push_back(var);
    Formula body = any(depth_left - 1, bound, budget);
    bound.pop_back();
    return pick(2) == 0 ? exists(var, std::move(body)) : forall(var, std::move(body));
  }

  Formula any(std::size_t depth_left, std::vector<std::string>& bound, std::size_t& budget) {
    std::size_t r = pick(10);
    if (depth_left > 0 && r < 4) {
      return quantified(depth_left, bound, budget);
    }
    if (budget > 0 && r < 6) {
      --budget;
      return neg(any(depth_left, bound, budget));
    }
    if (budget > 0 && r < 8) {
      --budget;
      Formula a = any(depth_left, bound, budget);
      Formula b = any(depth_left, bound, budget);
      return pick(2) == 0 ? conj({std::move(a), std::move(b)}) : disj({std::move(a), std::move(b)});
    }
    const std::string& x = bound[pick(bound.size())];
    const std::string& y = bound[pick(bound.size())];
    return pick(3) == 0 ? eq(x, y) : adj(x, y);
  }

  std::mt19937_64 rng_;
};

}  // namespace

Formula eq(std::string x, std::string y) { return atom(FormulaKind::kEqual, std::move(x), std::move(y)); }
Formula adj(std::string x, std::string y) { return atom(FormulaKind::kAdjacent, std::move(x), std::move(y)); }
Formula in(std::string x, std::string set) { return atom(FormulaKind::kMember, std::move(x), std::move(set)); }

Formula neg(Formula f) {
  Formula out;
  out.kind = FormulaKind::kNot;
  out.children.push_back(std::move(f));
  return out;
}

Formula conj(std::vector<Formula> parts) { return connective(FormulaKind::kAnd, std::move(parts)); }
Formula disj(std::vector<Formula> parts) { return connective(FormulaKind::kOr, std::move(parts)); }
Formula forall(std::string x, Formula body) { return quantifier(FormulaKind::kForall, std::move(x), std::move(body)); }
Formula exists(std::string x, Formula body) { return quantifier(FormulaKind::kExists, std::move(x), std::move(body)); }
Formula forall_set(std::string x, Formula body) {
  return quantifier(FormulaKind::kForallSet, std::move(x), std::move(body));
}
Formula exists_set(std::string x, Formula body) {
  return quantifier(FormulaKind::kExistsSet, std::move(x), std::move(body));
}

Formula parse_formula(std::string_view text, bool closed) {
  Formula f = Parser(text).parse();
  if (closed) {
    auto free = free_variables(f);
    if (!free.empty()) {
      throw ParseError("formula: free variable '" + *free.begin() + "' in a sentence");
    }
  }
  return f;
}

std::string to_string(const Formula& f) {
  switch (f.kind) {
    case FormulaKind::kEqual:
      return "(= " + f.lhs + " " + f.rhs + ")";
    case FormulaKind::kAdjacent:
      return "(adj " + f.lhs + " " + f.rhs + ")";
    case FormulaKind::kMember:
      return "(in " + f.lhs + " " + f.rhs + ")";
    case FormulaKind::kNot:
      return "(not " + to_string(f.children[0]) + ")";
    case FormulaKind::kAnd:
    case FormulaKind::kOr: {
      std::string out = f.kind == FormulaKind::kAnd ? "(and" : "(or";
      for (const auto& c : f.children) {
        out += " " + to_string(c);
      }
      return out + ")";
    }
    case FormulaKind::kForall:
      return "(forall " + f.lhs + " " + to_string(f.children[0]) + ")";
    case FormulaKind::kExists:
      return "(exists " + f.lhs + " " + to_string(f.children[0]) + ")";
    case FormulaKind::kForallSet:
      return "(forallset " + f.lhs + " " + to_string(f.children[0]) + ")";
    case FormulaKind::kExistsSet:
      return "(existsset " + f.lhs + " " + to_string(f.children[0]) + ")";
  }
  return {};
}

std::set<std::string> free_variables(const Formula& f) {
  std::vector<std::string> bound;
  std::set<std::string> out;
  collect_free(f, bound, out);
  return out;
}

std::size_t quantifier_depth(const Formula& f) {
  std::size_t inner = 0;
  for (const auto& c : f.children) {
    inner = std::max(inner, quantifier_depth(c));
  }
  return inner + (is_quantifier(f.kind) ? 1 : 0);
}

bool has_set_quantifier(const Formula& f) {
  if (f.kind == FormulaKind::kForallSet || f.kind == FormulaKind::kExistsSet) {
    return true;
  }
  return std::any_of(f.children.begin(), f.children.end(), [](const Formula& c) { return has_set_quantifier(c); });
}

bool is_existential_prenex(const Formula& f) {
  const Formula* cur = &f;
  while (cur->kind == FormulaKind::kExists) {
    cur = &cur->children[0];
  }
  std::function<bool(const Formula&)> quantifier_free = [&](const Formula& g) {
    if (is_quantifier(g.kind) || g.kind == FormulaKind::kMember) {
      return false;
    }
    return std::all_of(g.children.begin(), g.children.end(), quantifier_free);
  };
  return quantifier_free(*cur);
}

bool evaluate(const Graph& g, const Formula& f, const Environment& env, EvalLimits limits) {
  if (has_set_quantifier(f) && g.size() > limits.max_vertices_mso) {
    throw CapExceeded("evaluate: set quantifiers over " + std::to_string(g.size()) +
                      " vertices exceed the cap of " + std::to_string(limits.max_vertices_mso));
  }
  if (quantifier_depth(f) >= 3 && g.size() > limits.max_vertices_fo) {
    throw CapExceeded("evaluate: quantifier depth " + std::to_string(quantifier_depth(f)) + " over " +
                      std::to_string(g.size()) + " vertices exceeds the cap of " +
                      std::to_string(limits.max_vertices_fo));
  }
  return Evaluator(g, f, env).run();
}

Formula has_edge_sentence() { return exists("x", exists("y", adj("x", "y"))); }

Formula triangle_sentence() {
  return exists("x", exists("y", exists("z", conj({adj("x", "y"), adj("y", "z"), adj("x", "z")}))));
}

Formula triangle_free_sentence() {
  return forall("x", forall("y", forall("z", neg(conj({adj("x", "y"), adj("y", "z"), adj("x", "z")})))));
}

Formula diameter2_sentence() {
  return forall("x", forall("y", disj({eq("x", "y"), adj("x", "y"),
                                       exists("z", conj({adj("x", "z"), adj("z", "y")}))})));
}

Formula dominating_vertex_sentence() { return exists("x", forall("y", disj({eq("x", "y"), adj("x", "y")}))); }

Formula clique_sentence() { return forall("x", forall("y", disj({eq("x", "y"), adj("x", "y")}))); }

Formula max_degree_below_sentence(std::size_t d) {
  if (d == 0) {
    throw std::invalid_argument("max_degree_below_sentence: d must be positive");
  }
  std::vector<Formula> parts;
  for (std::size_t i = 1; i <= d; ++i) {
    parts.push_back(adj("x", "y" + std::to_string(i)));
    for (std::size_t j = i + 1; j <= d; ++j) {
      parts.push_back(neg(eq("y" + std::to_string(i), "y" + std::to_string(j))));
    }
  }
  Formula body = conj(std::move(parts));
  for (std::size_t i = d; i >= 1; --i) {
    body = exists("y" + std::to_string(i), std::move(body));
  }
  return forall("x", neg(std::move(body)));
}

std::vector<Formula> fo_sentence_pool(std::size_t max_depth, std::size_t count, std::uint64_t seed) {
  if (max_depth == 0) {
    return {};
  }
  SentenceGenerator gen(seed);
  std::vector<Formula> out;
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(gen.sentence(1 + i % max_depth));
  }
  return out;
}

std::vector<Formula> existential_sentence_pool(std::size_t max_vars, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  std::vector<Formula> out;
  for (std::size_t i = 0; i < count; ++i) {
    std::size_t k = 1 + i % max_vars;
    std::vector<std::string> vars;
    for (std::size_t j = 1; j <= k; ++j) {
      vars.push_back("x" + std::to_string(j));
    }
    auto literal = [&]() {
      const auto& a = vars[pick(k)];
      const auto& b = vars[pick(k)];
      Formula at = pick(3) == 0 ? eq(a, b) : adj(a, b);
      return pick(3) == 0 ? neg(std::move(at)) : at;
    };
    auto clause = [&]() {
      std::vector<Formula> lits;
      std::size_t len = 1 + pick(3);
      for (std::size_t j = 0; j < len; ++j) {
        lits.push_back(literal());
      }
      return conj(std::move(lits));
    };
    Formula matrix = pick(3) == 0 ? disj({clause(), clause()}) : clause();
    for (std::size_t j = k; j >= 1; --j) {
      matrix = exists(vars[j - 1], std::move(matrix));
    }
    out.push_back(std::move(matrix));
  }
  return out;
}

}  // namespace certilab
