// certilab: command-line front end.
//
// Exit codes: 0 accept/success, 1 verification rejected, 2 prover refused,
// 3 usage error.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "certilab/automata.hpp"
#include "certilab/basic_schemes.hpp"
#include "certilab/corpus.hpp"
#include "certilab/errors.hpp"
#include "certilab/framework.hpp"
#include "certilab/kernel.hpp"
#include "certilab/kernel_scheme.hpp"
#include "certilab/logic.hpp"
#include "certilab/lower_bounds.hpp"
#include "certilab/treedepth.hpp"
#include "certilab/treedepth_cert.hpp"

using namespace certilab;
using json = nlohmann::ordered_json;

namespace {

enum Exit { kAccept = 0, kReject = 1, kRefused = 2, kUsage = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw UsageError("cannot read " + path);
  }
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw UsageError("cannot write " + path);
  }
  out << text;
  if (!text.empty() && text.back() != '\n') {
    out << '\n';
  }
}

Graph load_graph(const std::string& path) { return parse_graph(read_file(path)); }

// Inline s-expressions start with '('; anything else is a file name.
Formula load_formula(const std::string& arg) {
  std::string text = !arg.empty() && arg.front() == '(' ? arg : read_file(arg);
  return parse_formula(text);
}

UopAutomaton load_automaton(const std::string& arg) {
  auto param = [&](const std::string& prefix) -> std::optional<std::size_t> {
    if (arg.rfind(prefix, 0) != 0) {
      return std::nullopt;
    }
    return static_cast<std::size_t>(std::stoul(arg.substr(prefix.size())));
  };
  if (auto d = param("height:")) {
    return height_at_most(*d);
  }
  if (auto c = param("max-children:")) {
    return max_children(*c);
  }
  if (auto c = param("heavy:")) {
    return exists_heavy_vertex(*c);
  }
  return parse_automaton(read_file(arg));
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("CERTILAB_SEED")) {
    return std::stoull(env, nullptr, 0);
  }
  return kDefaultSeed;
}

struct Globals {
  std::uint64_t seed = default_seed();
  unsigned jobs = 1;
  std::string report;
};

struct SchemeArgs {
  std::string name;
  std::size_t t = 1;
  std::size_t k = 1;
  std::string formula;
  std::string automaton;
  std::string mode = "fingerprint";
  bool assume_tree = false;
  std::size_t exact_cap = kTreedepthCap;
};

void add_scheme_options(CLI::App* app, SchemeArgs& a) {
  app->add_option("scheme", a.name,
                  "spanning-tree | count | existential-fo | depth2-fo | treedepth | kernel | fo | tree-automaton")
      ->required();
  app->add_option("--t", a.t, "edge-depth bound (treedepth, kernel, fo)");
  app->add_option("--k", a.k, "pruning threshold (kernel)");
  app->add_option("--formula", a.formula, "sentence, inline s-expression or file");
  app->add_option("--automaton", a.automaton, "automaton file, or height:D | max-children:C | heavy:C");
  app->add_option("--mode", a.mode, "automaton naming: fingerprint | full | compact");
  app->add_flag("--assume-tree", a.assume_tree, "trust that the input is a tree (no acyclicity certificate)");
  app->add_option("--exact-cap", a.exact_cap, "largest graph handed to the exact treedepth oracle");
}

std::unique_ptr<Scheme> make_scheme(const SchemeArgs& a) {
  auto need = [&](const std::string& what, const std::string& value) {
    if (value.empty()) {
      throw UsageError("scheme " + a.name + " needs --" + what);
    }
  };
  if (a.name == "spanning-tree") {
    return spanning_tree_scheme();
  }
  if (a.name == "count") {
    return vertex_count_scheme();
  }
  if (a.name == "existential-fo") {
    need("formula", a.formula);
    return existential_fo_scheme(load_formula(a.formula));
  }
  if (a.name == "depth2-fo") {
    need("formula", a.formula);
    return depth2_scheme(load_formula(a.formula));
  }
  if (a.name == "treedepth") {
    return treedepth_scheme(a.t, a.exact_cap);
  }
  if (a.name == "kernel") {
    return kernel_scheme(a.k, a.t, a.exact_cap);
  }
  if (a.name == "fo") {
    need("formula", a.formula);
    return fo_cert_scheme(load_formula(a.formula), a.t, a.exact_cap);
  }
  if (a.name == "tree-automaton") {
    need("automaton", a.automaton);
    AutomatonMode mode = AutomatonMode::kFingerprint;
    if (a.mode == "full") {
      mode = AutomatonMode::kFullDescription;
    } else if (a.mode == "compact") {
      mode = AutomatonMode::kCompact;
    } else if (a.mode != "fingerprint") {
      throw UsageError("unknown mode " + a.mode);
    }
    auto s = mso_tree_scheme(load_automaton(a.automaton), mode);
    return a.assume_tree ? std::move(s) : acyclic_product(std::move(s));
  }
  throw UsageError("unknown scheme " + a.name);
}

json scheme_params(const SchemeArgs& a) {
  json p;
  p["scheme"] = a.name;
  if (a.name == "treedepth" || a.name == "kernel" || a.name == "fo") {
    p["t"] = a.t;
  }
  if (a.name == "kernel") {
    p["k"] = a.k;
  }
  if (!a.formula.empty()) {
    p["formula"] = a.formula;
  }
  if (!a.automaton.empty()) {
    p["automaton"] = a.automaton;
    p["mode"] = a.mode;
    p["assume_tree"] = a.assume_tree;
  }
  return p;
}

// RunReport: command, parameters, per-vertex decisions, certificate bits,
// oracle values, wall time. Everything except wall_time_ms is determined by
// the inputs and the seed.
class Report {
 public:
  Report(std::string command, const Globals& g) : globals_(&g), start_(std::chrono::steady_clock::now()) {
    doc_["command"] = std::move(command);
    doc_["parameters"] = json::object();
    doc_["parameters"]["seed"] = g.seed;
  }
  json& params() { return doc_["parameters"]; }
  json& oracle() { return doc_["oracle"]; }
  void decisions(const Graph& g, const Verdict& v) {
    json d = json::object();
    for (VertexIndex i = 0; i < g.size(); ++i) {
      d[std::to_string(g.id(i))] = v.accepted[i] != 0;
    }
    doc_["decisions"] = std::move(d);
  }
  void bits(std::size_t b) { doc_["certificate_bits"] = b; }
  json& at(const std::string& key) { return doc_[key]; }
  int finish(int code) {
    doc_["exit_code"] = code;
    auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    doc_["wall_time_ms"] = ms;
    if (!globals_->report.empty()) {
      write_file(globals_->report, doc_.dump(2));
    }
    return code;
  }

 private:
  const Globals* globals_;
  std::chrono::steady_clock::time_point start_;
  json doc_;
};

void print_verdict(const Graph& g, const Verdict& v) {
  std::cout << "vertex  decision\n";
  for (VertexIndex i = 0; i < g.size(); ++i) {
    std::cout << std::left << std::setw(8) << g.id(i) << (v.accepted[i] ? "accept" : "reject") << '\n';
  }
  std::cout << "global: " << (v.all() ? "accept" : "reject") << '\n';
}

// --- subcommands -------------------------------------------------------------

struct CertifyArgs {
  SchemeArgs scheme;
  std::string graph;
  std::string out;
};

int run_certify(const CertifyArgs& a, const Globals& glob) {
  Report report("certify", glob);
  report.params().update(scheme_params(a.scheme));
  report.params()["graph"] = a.graph;
  auto s = make_scheme(a.scheme);
  Graph g = load_graph(a.graph);
  auto outcome = s->prove(g);
  if (outcome.refused()) {
    std::cout << "prover refused: " << outcome.refusal << '\n';
    report.at("refusal") = outcome.refusal;
    return report.finish(kRefused);
  }
  const Assignment& asg = *outcome.assignment;
  Verdict v = run_verification(*s, g, asg, glob.jobs);
  if (!a.out.empty()) {
    write_file(a.out, serialize_assignment(g, asg));
  }
  report.decisions(g, v);
  report.bits(measure_size(asg));
  std::cout << "scheme " << s->name() << " (" << s->declared_size() << ")\n"
            << "vertices " << g.size() << ", max certificate bits " << measure_size(asg) << '\n'
            << "global: " << (v.all() ? "accept" : "reject") << '\n';
  return report.finish(v.all() ? kAccept : kReject);
}

struct VerifyArgs {
  SchemeArgs scheme;
  std::string graph;
  std::string assignment;
};

int run_verify(const VerifyArgs& a, const Globals& glob) {
  Report report("verify", glob);
  report.params().update(scheme_params(a.scheme));
  report.params()["graph"] = a.graph;
  report.params()["assignment"] = a.assignment;
  auto s = make_scheme(a.scheme);
  Graph g = load_graph(a.graph);
  Assignment asg;
  try {
    asg = parse_assignment(g, read_file(a.assignment));
  } catch (const GraphError& e) {
    throw UsageError(e.what());
  }
  Verdict v = run_verification(*s, g, asg, glob.jobs);
  print_verdict(g, v);
  report.decisions(g, v);
  report.bits(measure_size(asg));
  return report.finish(v.all() ? kAccept : kReject);
}

struct AttackArgs {
  SchemeArgs scheme;
  std::string graph;
  std::string out;
  std::uint64_t random = 1'000'000;
  std::uint64_t exhaustive_cap = std::uint64_t{1} << 24;
};

int run_attack(const AttackArgs& a, const Globals& glob) {
  Report report("attack", glob);
  report.params().update(scheme_params(a.scheme));
  report.params()["graph"] = a.graph;
  report.params()["random"] = a.random;
  report.params()["exhaustive_cap"] = a.exhaustive_cap;
  auto s = make_scheme(a.scheme);
  Graph g = load_graph(a.graph);
  AdversaryBudget budget;
  budget.seed = glob.seed;
  budget.random_forgeries = a.random;
  budget.exhaustive_cap = a.exhaustive_cap;
  auto r = adversary_search(*s, g, budget);
  report.at("tried") = r.tried;
  report.at("exhaustive") = r.exhaustive;
  if (r.forged) {
    std::cout << "forgery found by " << r.strategy << " after " << r.tried << " candidates\n";
    report.at("strategy") = r.strategy;
    report.bits(measure_size(*r.forged));
    if (!a.out.empty()) {
      write_file(a.out, serialize_assignment(g, *r.forged));
    }
    return report.finish(kReject);
  }
  std::cout << "no forgery in " << r.tried << " candidates" << (r.exhaustive ? " (some phase exhaustive)" : "")
            << '\n';
  return report.finish(kAccept);
}

struct TreedepthArgs {
  std::string graph;
  std::string model_out;
  bool cops = false;
};

int run_treedepth(const TreedepthArgs& a, const Globals& glob) {
  Report report("treedepth", glob);
  report.params()["graph"] = a.graph;
  Graph g = load_graph(a.graph);
  auto r = treedepth_exact(g);
  std::cout << "levels " << r.levels << " (edge-depth " << r.edge_depth << ")\n";
  report.oracle()["levels"] = r.levels;
  report.oracle()["edge_depth"] = r.edge_depth;
  if (a.cops) {
    auto c = cops_robber_number(g);
    std::cout << "cops " << c << '\n';
    report.oracle()["cops"] = c;
  }
  if (!a.model_out.empty()) {
    write_file(a.model_out, serialize_model(r.witness.tree()));
  }
  return report.finish(kAccept);
}

struct KernelizeArgs {
  std::string graph;
  std::size_t k = 1;
  std::size_t t = 1;
  std::string graph_out;
  std::string model_out;
};

int run_kernelize(const KernelizeArgs& a, const Globals& glob) {
  Report report("kernelize", glob);
  report.params()["graph"] = a.graph;
  report.params()["k"] = a.k;
  report.params()["t"] = a.t;
  Graph g = load_graph(a.graph);
  std::string why;
  auto model = prover_model(g, a.t, kTreedepthCap, &why);
  if (!model) {
    std::cout << "no model of edge-depth " << a.t << ": " << why << '\n';
    return report.finish(kRefused);
  }
  auto r = k_reduce(g, *model, a.k);
  std::cout << "kernel: " << r.kernel.size() << " of " << g.size() << " vertices, " << r.table.entries.size()
            << " types, " << r.pruned.size() << " pruned\n";
  report.oracle()["kernel_vertices"] = r.kernel.size();
  report.oracle()["types"] = r.table.entries.size();
  report.oracle()["pruned"] = r.pruned.size();
  report.oracle()["kernel"] = json::parse(serialize_graph(r.kernel));
  if (!a.graph_out.empty()) {
    write_file(a.graph_out, serialize_graph(r.kernel));
  }
  if (!a.model_out.empty()) {
    write_file(a.model_out, serialize_model(r.kernel_model.tree()));
  }
  return report.finish(kAccept);
}

struct ModelcheckArgs {
  std::string graph;
  std::string formula;
};

int run_modelcheck(const ModelcheckArgs& a, const Globals& glob) {
  Report report("modelcheck", glob);
  report.params()["graph"] = a.graph;
  report.params()["formula"] = a.formula;
  Graph g = load_graph(a.graph);
  Formula f = load_formula(a.formula);
  bool value = evaluate(g, f);
  std::cout << (value ? "true" : "false") << '\n';
  report.oracle()["value"] = value;
  return report.finish(value ? kAccept : kReject);
}

struct EfArgs {
  std::string first;
  std::string second;
  std::size_t k = 1;
};

int run_ef(const EfArgs& a, const Globals& glob) {
  Report report("ef", glob);
  report.params()["first"] = a.first;
  report.params()["second"] = a.second;
  report.params()["k"] = a.k;
  Graph g = load_graph(a.first);
  Graph h = load_graph(a.second);
  auto witness = distinguishing_sentence(g, h, a.k);
  if (!witness) {
    std::cout << "equivalent\n";
    report.oracle()["equivalent"] = true;
    return report.finish(kAccept);
  }
  std::cout << "not equivalent\ndistinguishing sentence: " << to_string(*witness) << '\n';
  report.oracle()["equivalent"] = false;
  report.oracle()["sentence"] = to_string(*witness);
  return report.finish(kReject);
}

struct GadgetArgs {
  std::string kind;
  std::size_t n = 1;
  std::size_t subdivision = 0;
  std::size_t height = 3;
  std::string sa;
  std::string sb;
  std::string out;
  std::string sidecar;
  bool oracle = false;
};

int run_gadget(const GadgetArgs& a, const Globals& glob) {
  Report report("gadget", glob);
  report.params()["kind"] = a.kind;
  report.params()["sa"] = a.sa;
  report.params()["sb"] = a.sb;
  Bits sa = Bits::from_string(a.sa);
  Bits sb = Bits::from_string(a.sb);
  std::optional<GadgetLayout> layout;
  if (a.kind == "treedepth") {
    report.params()["n"] = a.n;
    report.params()["subdivision"] = a.subdivision;
    layout = treedepth_gadget(sa, sb, a.n, a.subdivision);
  } else if (a.kind == "automorphism") {
    report.params()["height"] = a.height;
    layout = automorphism_gadget(sa, sb, a.height);
  } else {
    throw UsageError("unknown gadget " + a.kind + " (treedepth | automorphism)");
  }
  json side;
  side["kind"] = a.kind;
  side["parameters"] = report.params();
  side["r"] = layout->r;
  side["v_a"] = layout->v_a;
  side["v_alpha"] = layout->v_alpha;
  side["v_beta"] = layout->v_beta;
  side["v_b"] = layout->v_b;
  if (layout->u) {
    side["u"] = *layout->u;
  }
  std::cout << "gadget " << a.kind << ": " << layout->graph.size() << " vertices, " << layout->graph.edge_count()
            << " edges, r = " << layout->r << '\n';
  if (a.oracle) {
    if (a.kind == "treedepth") {
      auto c = cops_robber_number(layout->graph);
      std::cout << "cops " << c << '\n';
      report.oracle()["cops"] = c;
    } else {
      bool f = has_fpf_automorphism(layout->graph);
      std::cout << "fixed-point-free automorphism: " << (f ? "yes" : "no") << '\n';
      report.oracle()["fpf_automorphism"] = f;
    }
  }
  report.at("layout") = side;
  if (!a.out.empty()) {
    write_file(a.out, serialize_graph(layout->graph));
    write_file(a.sidecar.empty() ? a.out + ".layout.json" : a.sidecar, side.dump(2));
  } else {
    std::cout << serialize_graph(layout->graph) << '\n';
  }
  return report.finish(kAccept);
}

struct BenchArgs {
  std::string scheme = "treedepth";
  std::string family = "path";
  std::vector<std::size_t> sizes{10, 100, 1000, 10000};
  std::size_t t = 3;
  std::size_t k = 1;
  std::string csv;
};

struct BenchRow {
  std::size_t n;
  std::size_t t;
  std::size_t bits;
  double ms;
};

// Graph and coherent model for one bench size.
std::pair<Graph, Model> bench_instance(const BenchArgs& a, std::size_t n, std::mt19937_64& rng) {
  if (a.family == "path") {
    Graph g = make_path(n);
    Model m = separator_model(g);
    return {g, m};
  }
  if (a.family == "bounded") {
    auto s = random_bounded_td_graph(n, a.t, 0.3, rng);
    return {s.graph, Model(s.graph, s.model)};
  }
  throw UsageError("unknown family " + a.family + " (path | bounded)");
}

int run_bench(const BenchArgs& a, const Globals& glob) {
  Report report("bench", glob);
  report.params()["scheme"] = a.scheme;
  report.params()["family"] = a.family;
  report.params()["sizes"] = a.sizes;
  std::mt19937_64 rng(glob.seed);
  std::vector<BenchRow> rows;
  for (std::size_t n : a.sizes) {
    auto [g, model] = bench_instance(a, n, rng);
    const std::size_t t = model.edge_depth();
    auto start = std::chrono::steady_clock::now();
    Assignment asg;
    std::unique_ptr<Scheme> s;
    if (a.scheme == "treedepth") {
      asg = td_certify(g, model);
      s = treedepth_scheme(t);
    } else if (a.scheme == "kernel") {
      auto r = k_reduce(g, model, a.k);
      for (const auto& c : kernel_certificates(g, model, r)) {
        asg.push_back(encode_kernel_cert(c));
      }
      s = kernel_scheme(a.k, t);
    } else if (a.scheme == "tree-automaton") {
      if (g.edge_count() + 1 != g.size()) {
        throw UsageError("tree-automaton bench needs a tree family");
      }
      s = mso_tree_scheme(max_children(2), AutomatonMode::kFingerprint);
      auto p = s->prove(g);
      if (p.refused()) {
        throw UsageError("prover refused: " + p.refusal);
      }
      asg = std::move(*p.assignment);
    } else {
      throw UsageError("unknown bench scheme " + a.scheme);
    }
    Verdict v = run_verification(*s, g, asg, glob.jobs);
    if (!v.all()) {
      std::cerr << "honest assignment rejected at n = " << n << '\n';
      return report.finish(kReject);
    }
    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    rows.push_back({n, t, measure_size(asg), ms});
  }
  std::ostringstream csv;
  csv << "scheme,family,n,t,max_bits\n";
  for (const auto& r : rows) {
    csv << a.scheme << ',' << a.family << ',' << r.n << ',' << r.t << ',' << r.bits << '\n';
  }
  if (!a.csv.empty()) {
    write_file(a.csv, csv.str());
  }
  std::cout << std::left << std::setw(10) << "n" << std::setw(6) << "t" << std::setw(10) << "max_bits"
            << "ms\n";
  json table = json::array();
  for (const auto& r : rows) {
    std::cout << std::setw(10) << r.n << std::setw(6) << r.t << std::setw(10) << r.bits << std::fixed
              << std::setprecision(1) << r.ms << '\n';
    table.push_back({{"n", r.n}, {"t", r.t}, {"max_bits", r.bits}});
  }
  report.at("rows") = table;
  return report.finish(kAccept);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Local certification toolkit"};
  app.require_subcommand(1);
  Globals glob;
  app.add_option("--seed", glob.seed, "random seed (default: $CERTILAB_SEED or a fixed value)");
  app.add_option("--jobs", glob.jobs, "worker threads for verification")->check(CLI::PositiveNumber);
  app.add_option("--report", glob.report, "write a JSON run report here");

  CertifyArgs certify;
  auto* c = app.add_subcommand("certify", "run the prover, verify, write the assignment");
  add_scheme_options(c, certify.scheme);
  c->add_option("graph", certify.graph, "graph file")->required();
  c->add_option("-o,--out", certify.out, "assignment file to write");

  VerifyArgs verify;
  auto* v = app.add_subcommand("verify", "verify an assignment file vertex by vertex");
  add_scheme_options(v, verify.scheme);
  v->add_option("graph", verify.graph, "graph file")->required();
  v->add_option("assignment", verify.assignment, "assignment file")->required();

  AttackArgs attack;
  auto* at = app.add_subcommand("attack", "search for a forged assignment accepted everywhere");
  add_scheme_options(at, attack.scheme);
  at->add_option("graph", attack.graph, "graph file")->required();
  at->add_option("-o,--out", attack.out, "where to write a forgery");
  at->add_option("--random", attack.random, "random forgeries");
  at->add_option("--exhaustive-cap", attack.exhaustive_cap, "cap on exhaustive and structured phases");

  TreedepthArgs td;
  auto* t = app.add_subcommand("treedepth", "exact treedepth in both conventions");
  t->add_option("graph", td.graph, "graph file")->required();
  t->add_option("--model-out", td.model_out, "write the witness model");
  t->add_flag("--cops", td.cops, "also run the cops-and-robber oracle");

  KernelizeArgs kz;
  auto* k = app.add_subcommand("kernelize", "k-reduce along a coherent model of edge-depth <= t");
  k->add_option("graph", kz.graph, "graph file")->required();
  k->add_option("--k", kz.k, "pruning threshold")->check(CLI::PositiveNumber);
  k->add_option("--t", kz.t, "edge-depth bound");
  k->add_option("--graph-out", kz.graph_out, "kernel graph file");
  k->add_option("--model-out", kz.model_out, "kernel model file");

  ModelcheckArgs mc;
  auto* m = app.add_subcommand("modelcheck", "evaluate a sentence by brute force");
  m->add_option("graph", mc.graph, "graph file")->required();
  m->add_option("--formula", mc.formula, "sentence, inline or file")->required();

  EfArgs ef;
  auto* e = app.add_subcommand("ef", "Ehrenfeucht-Fraisse equivalence");
  e->add_option("first", ef.first, "graph file")->required();
  e->add_option("second", ef.second, "graph file")->required();
  e->add_option("--k", ef.k, "rounds")->required();

  GadgetArgs gd;
  auto* gsub = app.add_subcommand("gadget", "lower-bound gadget graphs");
  gsub->add_option("kind", gd.kind, "treedepth | automorphism")->required();
  gsub->add_option("--n", gd.n, "paths per row (treedepth)");
  gsub->add_option("--subdivision", gd.subdivision, "extra vertices per outer edge (treedepth)");
  gsub->add_option("--height", gd.height, "tree height bound (automorphism)");
  gsub->add_option("--sa", gd.sa, "Alice's string");
  gsub->add_option("--sb", gd.sb, "Bob's string");
  gsub->add_option("-o,--out", gd.out, "graph file (sidecar: <out>.layout.json)");
  gsub->add_option("--sidecar", gd.sidecar, "layout JSON path");
  gsub->add_flag("--oracle", gd.oracle, "run the cops or automorphism oracle on the result");

  BenchArgs bench;
  auto* b = app.add_subcommand("bench", "certificate size sweep");
  b->add_option("--scheme", bench.scheme, "treedepth | kernel | tree-automaton");
  b->add_option("--family", bench.family, "path | bounded");
  b->add_option("--sizes", bench.sizes, "vertex counts")->delimiter(',');
  b->add_option("--t", bench.t, "edge-depth of the bounded family");
  b->add_option("--k", bench.k, "pruning threshold (kernel)");
  b->add_option("--csv", bench.csv, "CSV output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (c->parsed()) {
      return run_certify(certify, glob);
    }
    if (v->parsed()) {
      return run_verify(verify, glob);
    }
    if (at->parsed()) {
      return run_attack(attack, glob);
    }
    if (t->parsed()) {
      return run_treedepth(td, glob);
    }
    if (k->parsed()) {
      return run_kernelize(kz, glob);
    }
    if (m->parsed()) {
      return run_modelcheck(mc, glob);
    }
    if (e->parsed()) {
      return run_ef(ef, glob);
    }
    if (gsub->parsed()) {
      return run_gadget(gd, glob);
    }
    if (b->parsed()) {
      return run_bench(bench, glob);
    }
  } catch (const UsageError& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kUsage;
  } catch (const Error& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
