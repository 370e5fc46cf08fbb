#include "certilab/framework.hpp"

#include <algorithm>
#include <deque>
#include <thread>

#include <json.hpp>

#include "certilab/errors.hpp"

namespace certilab {

LocalView make_view(const Graph& g, const Assignment& a, VertexIndex v) {
  if (v >= g.size()) {
    throw GraphError("vertex index out of range");
  }
  if (a.size() != g.size()) {
    throw GraphError("assignment is not total on the graph");
  }
  LocalView view{g.id(v), &a[v], {}};
  view.neighbors.reserve(g.degree(v));
  for (VertexIndex w : g.neighbors(v)) {
    view.neighbors.push_back({g.id(w), &a[w]});
  }
  return view;
}

bool Verdict::all() const {
  return std::all_of(accepted.begin(), accepted.end(), [](char c) { return c != 0; });
}

std::vector<VertexIndex> Verdict::rejecting() const {
  std::vector<VertexIndex> out;
  for (VertexIndex v = 0; v < accepted.size(); ++v) {
    if (accepted[v] == 0) {
      out.push_back(v);
    }
  }
  return out;
}

Verdict run_verification(const Scheme& s, const Graph& g, const Assignment& a, unsigned jobs) {
  if (a.size() != g.size()) {
    throw GraphError("assignment is not total on the graph");
  }
  Verdict verdict;
  verdict.accepted.assign(g.size(), 0);
  auto run_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t v = begin; v < end; ++v) {
      auto view = make_view(g, a, static_cast<VertexIndex>(v));
      verdict.accepted[v] = s.verify(view) ? 1 : 0;
    }
  };
  jobs = std::max(1U, std::min<unsigned>(jobs, static_cast<unsigned>(g.size())));
  if (jobs == 1) {
    run_range(0, g.size());
    return verdict;
  }
  // Each worker writes a disjoint slice of `accepted`.
  std::vector<std::thread> workers;
  const std::size_t chunk = (g.size() + jobs - 1) / jobs;
  for (std::size_t begin = 0; begin < g.size(); begin += chunk) {
    workers.emplace_back(run_range, begin, std::min(g.size(), begin + chunk));
  }
  for (auto& w : workers) {
    w.join();
  }
  return verdict;
}

bool accepted_everywhere(const Scheme& s, const Graph& g, const Assignment& a) {
  if (a.size() != g.size()) {
    return false;
  }
  for (VertexIndex v = 0; v < g.size(); ++v) {
    if (!s.verify(make_view(g, a, v))) {
      return false;
    }
  }
  return true;
}

CompletenessResult check_completeness(const Scheme& s, const Graph& g) {
  CompletenessResult result;
  auto outcome = s.prove(g);
  if (outcome.refused()) {
    result.prover_refused = true;
    result.refusal = outcome.refusal;
    return result;
  }
  result.verdict = run_verification(s, g, *outcome.assignment);
  result.accepted = result.verdict.all();
  return result;
}

std::size_t measure_size(const Assignment& a) {
  std::size_t best = 0;
  for (const auto& c : a) {
    best = std::max(best, c.size());
  }
  return best;
}

// ---------------------------------------------------------------------------
// Backtracking over per-vertex candidate lists.

namespace {

struct SearchPlan {
  std::vector<VertexIndex> order;                  // assignment order
  std::vector<std::vector<VertexIndex>> check_at;  // vertices verifiable after position i
};

SearchPlan plan_search(const Graph& g) {
  SearchPlan plan;
  std::vector<bool> seen(g.size(), false);
  std::deque<VertexIndex> queue{0};
  seen[0] = true;
  while (!queue.empty()) {
    VertexIndex v = queue.front();
    queue.pop_front();
    plan.order.push_back(v);
    for (VertexIndex w : g.neighbors(v)) {
      if (!seen[w]) {
        seen[w] = true;
        queue.push_back(w);
      }
    }
  }
  std::vector<std::size_t> position(g.size());
  for (std::size_t i = 0; i < plan.order.size(); ++i) {
    position[plan.order[i]] = i;
  }
  plan.check_at.assign(g.size(), {});
  for (VertexIndex v = 0; v < g.size(); ++v) {
    std::size_t last = position[v];
    for (VertexIndex w : g.neighbors(v)) {
      last = std::max(last, position[w]);
    }
    plan.check_at[last].push_back(v);
  }
  return plan;
}

class Backtracker {
 public:
  Backtracker(const Scheme& s, const Graph& g, const std::vector<std::vector<Certificate>>& candidates,
              std::uint64_t node_cap, std::function<bool(const Assignment&)> visit)
      : scheme_(s), graph_(g), candidates_(candidates), cap_(node_cap), visit_(std::move(visit)),
        plan_(plan_search(g)), current_(g.size()) {}

  // Returns false if the visitor asked to stop or the cap was hit.
  bool run() { return descend(0); }
  [[nodiscard]] std::uint64_t nodes() const { return nodes_; }
  [[nodiscard]] bool capped() const { return capped_; }

 private:
  bool descend(std::size_t pos) {
    if (pos == plan_.order.size()) {
      return visit_(current_);
    }
    VertexIndex v = plan_.order[pos];
    for (const auto& cert : candidates_[v]) {
      if (++nodes_ > cap_) {
        capped_ = true;
        return false;
      }
      current_[v] = cert;
      bool ok = true;
      for (VertexIndex w : plan_.check_at[pos]) {
        if (!scheme_.verify(make_view(graph_, current_, w))) {
          ok = false;
          break;
        }
      }
      if (ok && !descend(pos + 1)) {
        return false;
      }
    }
    return true;
  }

  const Scheme& scheme_;
  const Graph& graph_;
  const std::vector<std::vector<Certificate>>& candidates_;
  std::uint64_t cap_;
  std::function<bool(const Assignment&)> visit_;
  SearchPlan plan_;
  Assignment current_;
  std::uint64_t nodes_ = 0;
  bool capped_ = false;
};

}  // namespace

BacktrackResult backtrack_search(const Scheme& s, const Graph& g,
                                 const std::vector<std::vector<Certificate>>& candidates,
                                 std::uint64_t node_cap) {
  if (candidates.size() != g.size()) {
    throw GraphError("candidate space is not total on the graph");
  }
  BacktrackResult result;
  Backtracker bt(s, g, candidates, node_cap, [&](const Assignment& a) {
    result.accepted = a;
    return false;
  });
  bt.run();
  result.nodes = bt.nodes();
  result.complete = !bt.capped() && !result.accepted.has_value();
  return result;
}

std::uint64_t enumerate_accepted(const Scheme& s, const Graph& g,
                                 const std::vector<std::vector<Certificate>>& candidates,
                                 const std::function<bool(const Assignment&)>& visit) {
  if (candidates.size() != g.size()) {
    throw GraphError("candidate space is not total on the graph");
  }
  Backtracker bt(s, g, candidates, ~std::uint64_t{0}, visit);
  bt.run();
  return bt.nodes();
}

// ---------------------------------------------------------------------------
// Assignment files.

std::string serialize_assignment(const Graph& g, const Assignment& a) {
  if (a.size() != g.size()) {
    throw GraphError("assignment is not total on the graph");
  }
  // Keys sorted numerically; nlohmann's object would sort them as strings.
  nlohmann::ordered_json doc = nlohmann::ordered_json::object();
  for (VertexIndex v = 0; v < g.size(); ++v) {
    doc[std::to_string(g.id(v))] = std::to_string(a[v].size()) + ":" + a[v].to_hex();
  }
  return doc.dump(1);
}

Assignment parse_assignment(const Graph& g, std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("assignment file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) {
    throw ParseError("assignment file must be a JSON object");
  }
  Assignment a(g.size());
  std::vector<bool> seen(g.size(), false);
  for (const auto& [key, value] : doc.items()) {
    VertexId id = 0;
    try {
      std::size_t used = 0;
      id = std::stoull(key, &used);
      if (used != key.size()) {
        throw ParseError("bad id");
      }
    } catch (const std::exception&) {
      throw ParseError("assignment key '" + key + "' is not a decimal id");
    }
    auto v = g.find(id);
    if (!v) {
      throw GraphError("assignment mentions vertex " + key + " which is not in the graph");
    }
    if (!value.is_string()) {
      throw ParseError("payload of vertex " + key + " must be a string");
    }
    auto payload = value.get<std::string>();
    auto colon = payload.find(':');
    std::size_t nbits = 0;
    std::string hex;
    if (colon == std::string::npos) {
      hex = payload;
      nbits = hex.size() * 4;
    } else {
      try {
        nbits = std::stoull(payload.substr(0, colon));
      } catch (const std::exception&) {
        throw ParseError("bad bit length in payload of vertex " + key);
      }
      hex = payload.substr(colon + 1);
    }
    a[*v] = Bits::from_hex(hex, nbits);
    seen[*v] = true;
  }
  for (VertexIndex v = 0; v < g.size(); ++v) {
    if (!seen[v]) {
      throw GraphError("assignment has no certificate for vertex " + std::to_string(g.id(v)));
    }
  }
  return a;
}

}  // namespace certilab
