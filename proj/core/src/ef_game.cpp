#include <algorithm>
#include <map>

#include "certilab/errors.hpp"
#include "certilab/logic.hpp"

namespace certilab {

namespace {

using Pair = std::pair<VertexIndex, VertexIndex>;
using Position = std::vector<Pair>;

class EfGame {
 public:
  EfGame(const Graph& a, const Graph& b) : a_(a), b_(b), memo_(kEfRoundCap + 1) {}

  // True iff extending `pos` by (x, y) keeps a partial isomorphism.
  [[nodiscard]] bool consistent(const Position& pos, VertexIndex x, VertexIndex y) const {
    return std::all_of(pos.begin(), pos.end(), [&](const Pair& p) {
      return (p.first == x) == (p.second == y) && a_.adjacent(p.first, x) == b_.adjacent(p.second, y);
    });
  }

  [[nodiscard]] static bool pebbled_left(const Position& pos, VertexIndex x) {
    return std::any_of(pos.begin(), pos.end(), [&](const Pair& p) { return p.first == x; });
  }
  [[nodiscard]] static bool pebbled_right(const Position& pos, VertexIndex y) {
    return std::any_of(pos.begin(), pos.end(), [&](const Pair& p) { return p.second == y; });
  }

  // Duplicator wins `rounds` more rounds from the partial isomorphism `pos`.
  // Re-pebbling an already pebbled vertex only wastes Spoiler's round, so
  // such moves are skipped.
  bool duplicator_wins(const Position& pos, std::size_t rounds) {
    if (rounds == 0) {
      return true;
    }
    Position key = pos;
    std::sort(key.begin(), key.end());
    auto& table = memo_[rounds];
    if (auto it = table.find(key); it != table.end()) {
      return it->second;
    }
    bool result = left_move_answered(pos, rounds) && right_move_answered(pos, rounds);
    table[key] = result;
    return result;
  }

  // Spoiler's move in the left graph that Duplicator cannot answer.
  std::optional<VertexIndex> winning_left_move(const Position& pos, std::size_t rounds) {
    for (VertexIndex x = 0; x < a_.size(); ++x) {
      if (!pebbled_left(pos, x) && !answer_left(pos, x, rounds)) {
        return x;
      }
    }
    return std::nullopt;
  }

  std::optional<VertexIndex> winning_right_move(const Position& pos, std::size_t rounds) {
    for (VertexIndex y = 0; y < b_.size(); ++y) {
      if (!pebbled_right(pos, y) && !answer_right(pos, y, rounds)) {
        return y;
      }
    }
    return std::nullopt;
  }

  [[nodiscard]] const Graph& left() const { return a_; }
  [[nodiscard]] const Graph& right() const { return b_; }

 private:
  bool answer_left(Position pos, VertexIndex x, std::size_t rounds) {
    for (VertexIndex y = 0; y < b_.size(); ++y) {
      if (consistent(pos, x, y)) {
        pos.emplace_back(x, y);
        bool win = duplicator_wins(pos, rounds - 1);
        pos.pop_back();
        if (win) {
          return true;
        }
      }
    }
    return false;
  }

  bool answer_right(Position pos, VertexIndex y, std::size_t rounds) {
    for (VertexIndex x = 0; x < a_.size(); ++x) {
      if (consistent(pos, x, y)) {
        pos.emplace_back(x, y);
        bool win = duplicator_wins(pos, rounds - 1);
        pos.pop_back();
        if (win) {
          return true;
        }
      }
    }
    return false;
  }

  bool left_move_answered(const Position& pos, std::size_t rounds) {
    for (VertexIndex x = 0; x < a_.size(); ++x) {
      if (!pebbled_left(pos, x) && !answer_left(pos, x, rounds)) {
        return false;
      }
    }
    return true;
  }

  bool right_move_answered(const Position& pos, std::size_t rounds) {
    for (VertexIndex y = 0; y < b_.size(); ++y) {
      if (!pebbled_right(pos, y) && !answer_right(pos, y, rounds)) {
        return false;
      }
    }
    return true;
  }

  const Graph& a_;
  const Graph& b_;
  std::vector<std::map<Position, bool>> memo_;
};

std::string var(std::size_t i) { return "x" + std::to_string(i + 1); }

// Conjunction with repeated conjuncts dropped, first occurrence kept.
Formula distinct_conj(std::vector<Formula> parts) {
  std::vector<Formula> kept;
  for (auto& f : parts) {
    if (std::find(kept.begin(), kept.end(), f) == kept.end()) {
      kept.push_back(std::move(f));
    }
  }
  return kept.size() == 1 ? std::move(kept.front()) : conj(std::move(kept));
}

Position swapped(const Position& pos) {
  Position out;
  for (const auto& [x, y] : pos) {
    out.emplace_back(y, x);
  }
  return out;
}

// Builds sentences from Spoiler strategies. games_[0] plays (g, h), games_[1]
// plays (h, g) with pairs swapped.
class Distinguisher {
 public:
  Distinguisher(const Graph& g, const Graph& h) : forward_(g, h), backward_(h, g) {}

  EfGame& forward() { return forward_; }

  // Formula with free variables x1..x|pos| true on the left tuple and false on
  // the right one, where extending by (x, y) broke the partial isomorphism.
  static Formula atomic_difference(EfGame& game, const Position& pos, VertexIndex x, VertexIndex y) {
    const std::string fresh = var(pos.size());
    for (std::size_t i = 0; i < pos.size(); ++i) {
      const auto& [px, py] = pos[i];
      bool eq_left = px == x;
      if (eq_left != (py == y)) {
        return eq_left ? eq(fresh, var(i)) : neg(eq(fresh, var(i)));
      }
      bool adj_left = game.left().adjacent(px, x);
      if (adj_left != game.right().adjacent(py, y)) {
        return adj_left ? adj(fresh, var(i)) : neg(adj(fresh, var(i)));
      }
    }
    throw std::logic_error("atomic_difference called on a consistent extension");
  }

  // Spoiler wins from `pos` with `rounds` rounds in `game`.
  Formula build(bool flipped, const Position& pos, std::size_t rounds) {
    EfGame& game = flipped ? backward_ : forward_;
    if (auto x = game.winning_left_move(pos, rounds)) {
      std::vector<Formula> parts;
      for (VertexIndex y = 0; y < game.right().size(); ++y) {
        if (!game.consistent(pos, *x, y)) {
          parts.push_back(atomic_difference(game, pos, *x, y));
        } else {
          Position next = pos;
          next.emplace_back(*x, y);
          parts.push_back(build(flipped, next, rounds - 1));
        }
      }
      return exists(var(pos.size()), distinct_conj(std::move(parts)));
    }
    // The winning move is on the right: describe it from the other side.
    Position mirrored = swapped(pos);
    EfGame& other = flipped ? forward_ : backward_;
    auto y = other.winning_left_move(mirrored, rounds);
    if (!y) {
      throw std::logic_error("Spoiler has no winning move in a lost position");
    }
    std::vector<Formula> parts;
    for (VertexIndex x = 0; x < other.right().size(); ++x) {
      if (!other.consistent(mirrored, *y, x)) {
        parts.push_back(atomic_difference(other, mirrored, *y, x));
      } else {
        Position next = mirrored;
        next.emplace_back(*y, x);
        parts.push_back(build(!flipped, next, rounds - 1));
      }
    }
    return neg(exists(var(pos.size()), distinct_conj(std::move(parts))));
  }

 private:
  EfGame forward_;
  EfGame backward_;
};

void check_caps(const Graph& g, const Graph& h, std::size_t k, std::size_t vertex_cap, std::size_t round_cap) {
  if (g.size() > vertex_cap || h.size() > vertex_cap) {
    throw CapExceeded("ef_equivalent: graphs above " + std::to_string(vertex_cap) + " vertices");
  }
  if (k > round_cap || k > kEfRoundCap) {
    throw CapExceeded("ef_equivalent: more than " + std::to_string(std::min(round_cap, kEfRoundCap)) +
                      " rounds");
  }
}

}  // namespace

bool ef_equivalent(const Graph& g, const Graph& h, std::size_t k, std::size_t vertex_cap, std::size_t round_cap) {
  check_caps(g, h, k, vertex_cap, round_cap);
  EfGame game(g, h);
  return game.duplicator_wins({}, k);
}

std::optional<Formula> distinguishing_sentence(const Graph& g, const Graph& h, std::size_t k,
                                               std::size_t vertex_cap, std::size_t round_cap) {
  check_caps(g, h, k, vertex_cap, round_cap);
  Distinguisher d(g, h);
  if (d.forward().duplicator_wins({}, k)) {
    return std::nullopt;
  }
  return d.build(false, {}, k);
}

}  // namespace certilab
