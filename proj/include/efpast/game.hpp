#pragma once

#include <cstdint>
#include <vector>

#include <efpast/detail/node_table.hpp>
#include <efpast/terms.hpp>

namespace efpast {

enum class player { spoiler, duplicator };

namespace detail {

// Exact game value by exhaustive memoized search. A configuration is a pair
// of nodes plus the number of rounds left; the introductory round, where
// roots are chosen, is handled separately and does not consume a round.
class game_solver {
public:
  game_solver(const tree_seq& s0, const tree_seq& s1)
      : t0_(node_table::build(s0)), t1_(node_table::build(s1)) {}

  player winner_from(unsigned rounds, std::size_t x0, std::size_t x1) {
    ensure_memo(rounds);
    return config(rounds, x0, x1);
  }

  player winner_introductory(unsigned rounds) {
    if (t0_.roots.empty() && t1_.roots.empty()) return player::duplicator;
    if (t0_.roots.empty() || t1_.roots.empty()) return player::spoiler;
    ensure_memo(rounds);
    // Spoiler picks a side and a root; Duplicator answers with a root.
    for (int side = 0; side < 2; ++side) {
      const auto& mine = side == 0 ? t0_.roots : t1_.roots;
      const auto& theirs = side == 0 ? t1_.roots : t0_.roots;
      for (std::size_t y : mine) {
        bool all_bad = true;
        for (std::size_t z : theirs) {
          std::size_t a = side == 0 ? y : z;
          std::size_t b = side == 0 ? z : y;
          if (config(rounds, a, b) == player::duplicator) {
            all_bad = false;
            break;
          }
        }
        if (all_bad) return player::spoiler;
      }
    }
    return player::duplicator;
  }

  const node_table& table0() const { return t0_; }
  const node_table& table1() const { return t1_; }

private:
  player config(unsigned r, std::size_t x0, std::size_t x1) {
    if (t0_.nodes[x0].label != t1_.nodes[x1].label) return player::spoiler;
    if (r == 0) return player::duplicator;
    std::int8_t& slot = memo_[idx(r, x0, x1)];
    if (slot != 0) return slot == 1 ? player::spoiler : player::duplicator;
    slot = spoiler_wins(r, x0, x1) ? 1 : 2;
    return slot == 1 ? player::spoiler : player::duplicator;
  }

  bool spoiler_wins(unsigned r, std::size_t x0, std::size_t x1) {
    for (int side = 0; side < 2; ++side) {
      const node_table& mine_t = side == 0 ? t0_ : t1_;
      const node_table& theirs_t = side == 0 ? t1_ : t0_;
      std::size_t mx = side == 0 ? x0 : x1;
      std::size_t tx = side == 0 ? x1 : x0;
      for (int desc = 0; desc < 2; ++desc) {
        std::vector<std::size_t> mine =
            desc ? mine_t.proper_descendants(mx) : mine_t.proper_ancestors(mx);
        if (mine.empty()) continue;
        std::vector<std::size_t> theirs =
            desc ? theirs_t.proper_descendants(tx) : theirs_t.proper_ancestors(tx);
        for (std::size_t y : mine) {
          bool all_bad = true;
          for (std::size_t z : theirs) {
            std::size_t a = side == 0 ? y : z;
            std::size_t b = side == 0 ? z : y;
            if (config(r - 1, a, b) == player::duplicator) {
              all_bad = false;
              break;
            }
          }
          // A side with no legal answer loses that branch for Duplicator.
          if (all_bad) return true;
        }
      }
    }
    return false;
  }

  std::size_t idx(unsigned r, std::size_t x0, std::size_t x1) const {
    return (static_cast<std::size_t>(r) * t0_.size() + x0) * t1_.size() + x1;
  }

  void ensure_memo(unsigned rounds) {
    std::size_t need = (static_cast<std::size_t>(rounds) + 1) * t0_.size() * t1_.size();
    if (memo_.size() < need) memo_.assign(need, 0);
  }

  node_table t0_, t1_;
  std::vector<std::int8_t> memo_;
};

} // namespace detail

inline player ef_game_winner(unsigned rounds, const tree_seq& s0, const tree_seq& s1) {
  return detail::game_solver(s0, s1).winner_introductory(rounds);
}

inline player ef_game_winner(unsigned rounds, const tree_seq& s0, const tree_seq& s1,
                             const node_id& x0, const node_id& x1) {
  detail::game_solver g(s0, s1);
  int i0 = g.table0().index_of(x0);
  int i1 = g.table1().index_of(x1);
  if (i0 < 0 || i1 < 0) throw validation_error("invalid start node for the game");
  return g.winner_from(rounds, static_cast<std::size_t>(i0), static_cast<std::size_t>(i1));
}

inline player ef_game_winner(unsigned rounds, const forest& s0, const forest& s1) {
  return ef_game_winner(rounds, s0.trees(), s1.trees());
}

inline player ef_game_winner(unsigned rounds, const maybe_empty_forest& s0,
                             const maybe_empty_forest& s1) {
  return ef_game_winner(rounds, s0.trees, s1.trees);
}

} // namespace efpast
