#include <bit>
#include <map>
#include <stdexcept>

#include "scottlab/efgame.hpp"
#include "scottlab/errors.hpp"

namespace scottlab {

namespace rules {

std::vector<FirstMove> firstPlayerMoves(const Tree& t, const RunState& s, std::size_t universe,
                                        std::size_t capC) {
  std::vector<FirstMove> moves;
  const std::uint32_t masks = std::uint32_t{1} << universe;
  for (NodeId q : t.children(s.node)) {
    for (std::uint32_t c = 0; c < masks; ++c) {
      if ((c & s.constraint) != s.constraint) continue;
      if (static_cast<std::size_t>(std::popcount(c & ~s.constraint)) > capC) continue;
      moves.push_back({q, c});
    }
  }
  return moves;
}

std::vector<MapVector> secondPlayerMoves(const RunState& s, std::size_t universe,
                                         std::size_t capF) {
  std::vector<MapVector> moves;
  std::vector<std::size_t> open;
  for (std::size_t x = 0; x < universe; ++x) {
    if (s.map[x] == kUndefined) open.push_back(x);
  }
  // Odometer over open points, each undefined or one of the universe.
  MapVector f = s.map;
  std::vector<int> digit(open.size(), kUndefined);
  while (true) {
    std::size_t added = 0;
    for (std::size_t k = 0; k < open.size(); ++k) {
      f[open[k]] = digit[k];
      if (digit[k] != kUndefined) ++added;
    }
    if (added <= capF) {
      std::uint32_t dom = 0, ran = 0;
      for (std::size_t x = 0; x < universe; ++x) {
        if (f[x] != kUndefined) {
          dom |= 1u << x;
          ran |= 1u << f[x];
        }
      }
      if ((s.constraint & dom) == s.constraint && (s.constraint & ran) == s.constraint) {
        moves.push_back(f);
      }
    }
    std::size_t k = open.size();
    while (k > 0) {
      --k;
      if (++digit[k] < static_cast<int>(universe)) break;
      digit[k] = kUndefined;
      if (k == 0) return moves;
    }
    if (open.empty()) return moves;
  }
}

PartialMap toPartialMap(const MapVector& f) {
  PartialMap out;
  for (std::size_t x = 0; x < f.size(); ++x) {
    if (f[x] != kUndefined) out.emplace(static_cast<Elem>(x), static_cast<Elem>(f[x]));
  }
  return out;
}

}  // namespace rules

namespace {

using History = std::vector<int>;

class BruteGame {
 public:
  BruteGame(const FiniteStructure& m, const FiniteStructure& n, const EFConfig& cfg)
      : m_(m), n_(n), cfg_(cfg), size_(m.universe()) {}

  Player solve() {
    rules::RunState start{cfg_.tree.root(), 0, rules::MapVector(size_, rules::kUndefined)};
    History h;
    const Player w = firstTurn(start, h);
    const auto& table = w == Player::I ? firstTable_ : secondTable_;
    History replay;
    if (!verify(w, table, start, replay)) {
      throw std::logic_error("EF oracle: recorded strategy does not win every play");
    }
    return w;
  }

 private:
  Player outcome(const rules::MapVector& f) const {
    return isPartialIso(m_, n_, rules::toPartialMap(f)) ? Player::II : Player::I;
  }

  static void append(History& h, const rules::FirstMove& mv) {
    h.push_back(static_cast<int>(mv.child));
    h.push_back(static_cast<int>(mv.constraint));
  }
  static void append(History& h, const rules::MapVector& f) { h.insert(h.end(), f.begin(), f.end()); }

  Player firstTurn(const rules::RunState& s, History& h) {
    if (cfg_.tree.isLeaf(s.node)) return outcome(s.map);
    const auto moves = rules::firstPlayerMoves(cfg_.tree, s, size_, cfg_.capC);
    for (std::size_t i = 0; i < moves.size(); ++i) {
      const std::size_t mark = h.size();
      append(h, moves[i]);
      const Player w = secondTurn({moves[i].child, moves[i].constraint, s.map}, h);
      h.resize(mark);
      if (w == Player::I) {
        firstTable_[h] = i;
        return Player::I;
      }
    }
    return Player::II;
  }

  // s.node and s.constraint already reflect I's move.
  Player secondTurn(const rules::RunState& s, History& h) {
    const auto moves = rules::secondPlayerMoves(s, size_, cfg_.capF);
    for (std::size_t i = 0; i < moves.size(); ++i) {
      const std::size_t mark = h.size();
      append(h, moves[i]);
      const Player w = firstTurn({s.node, s.constraint, moves[i]}, h);
      h.resize(mark);
      if (w == Player::II) {
        secondTable_[h] = i;
        return Player::II;
      }
    }
    return Player::I;  // includes having no legal move
  }

  // Plays the tabled strategy for `me` against every opponent line.
  bool verify(Player me, const std::map<History, std::size_t>& table, const rules::RunState& s,
              History& h) const {
    if (cfg_.tree.isLeaf(s.node)) return outcome(s.map) == me;
    const auto first = rules::firstPlayerMoves(cfg_.tree, s, size_, cfg_.capC);
    auto afterFirst = [&](const rules::FirstMove& mv) {
      const std::size_t mark = h.size();
      append(h, mv);
      const rules::RunState t{mv.child, mv.constraint, s.map};
      const auto second = rules::secondPlayerMoves(t, size_, cfg_.capF);
      bool ok = true;
      if (second.empty()) {
        ok = me == Player::I;
      } else if (me == Player::II) {
        auto it = table.find(h);
        if (it == table.end() || it->second >= second.size()) {
          ok = false;
        } else {
          const std::size_t mark2 = h.size();
          append(h, second[it->second]);
          ok = verify(me, table, {t.node, t.constraint, second[it->second]}, h);
          h.resize(mark2);
        }
      } else {
        for (const auto& f : second) {
          const std::size_t mark2 = h.size();
          append(h, f);
          ok = verify(me, table, {t.node, t.constraint, f}, h);
          h.resize(mark2);
          if (!ok) break;
        }
      }
      h.resize(mark);
      return ok;
    };
    if (me == Player::I) {
      auto it = table.find(h);
      if (it == table.end() || it->second >= first.size()) return false;
      return afterFirst(first[it->second]);
    }
    for (const auto& mv : first) {
      if (!afterFirst(mv)) return false;
    }
    return true;
  }

  const FiniteStructure& m_;
  const FiniteStructure& n_;
  const EFConfig& cfg_;
  std::size_t size_;
  std::map<History, std::size_t> firstTable_;
  std::map<History, std::size_t> secondTable_;
};

}  // namespace

Player efWinnerBrute(const FiniteStructure& m, const FiniteStructure& n, const EFConfig& cfg,
                     BruteBudget budget) {
  requireSameSignature(m, n);
  if (m.universe() != n.universe()) throw PreconditionError("EF game needs equal universes");
  validateConfig(cfg, m.universe());
  if (m.universe() > budget.maxUniverse || rank(cfg.tree) > budget.maxRank ||
      cfg.capC > budget.maxCap || cfg.capF > budget.maxCap) {
    throw ResourceError("EF oracle budget exceeded (universe <= " +
                        std::to_string(budget.maxUniverse) + ", tree rank <= " +
                        std::to_string(budget.maxRank) + ", caps <= " +
                        std::to_string(budget.maxCap) + ")");
  }
  return BruteGame(m, n, cfg).solve();
}

}  // namespace scottlab
