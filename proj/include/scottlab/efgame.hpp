#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "scottlab/structures.hpp"
#include "scottlab/trees.hpp"

namespace scottlab {

enum class Player { I, II };
std::string_view playerName(Player p);  // "I" / "II"

// Game along cfg.tree. Each round I moves from the current node to a child
// and adds at most capC new points to the constraint set C; II then extends
// the partial map by at most capF new domain points so that C lies inside
// both domain and range. At a leaf II wins iff the map is a partial
// isomorphism.
struct EFConfig {
  Tree tree;
  std::size_t capC = 1;
  std::size_t capF = 1;
};

// Requires 1 <= capC <= universe and min(2 capC, universe) <= capF <= universe.
void validateConfig(const EFConfig& cfg, std::size_t universe);

inline constexpr std::size_t kDefaultPositionBudget = 20'000'000;
inline constexpr std::size_t kMaxGameUniverse = 15;

struct EFResult {
  Player winner = Player::II;
  std::size_t positionsExplored = 0;
};

// Memoized backward induction. II only ever plays injective maps that are
// partial isomorphisms; any other move already loses every continuation.
EFResult efWinner(const FiniteStructure& m, const FiniteStructure& n, const EFConfig& cfg,
                  std::size_t positionBudget = kDefaultPositionBudget);

// efWinner with tree = canonical(alpha).
EFResult efAlpha(const FiniteStructure& m, const FiniteStructure& n, std::size_t alpha,
                 std::size_t capC, std::size_t capF,
                 std::size_t positionBudget = kDefaultPositionBudget);

struct BruteBudget {
  std::size_t maxUniverse = 4;
  std::size_t maxRank = 3;
  std::size_t maxCap = 2;
};

// Independent oracle: plain search over complete histories using the literal
// move rules below, no memo and no move pruning. The winner's strategy is
// then written out as an explicit table (history -> move) and replayed
// against every opponent line before the answer is returned.
Player efWinnerBrute(const FiniteStructure& m, const FiniteStructure& n, const EFConfig& cfg,
                     BruteBudget budget = {});

// Literal move rules, shared by the oracle and the run tree.
namespace rules {

inline constexpr int kUndefined = -1;
using MapVector = std::vector<int>;  // f[x] or kUndefined

struct RunState {
  NodeId node = 0;
  std::uint32_t constraint = 0;  // bitmask over the universe
  MapVector map;
};

struct FirstMove {
  NodeId child;
  std::uint32_t constraint;
};

// Children ascending, then constraint sets C' ⊇ C with |C' \ C| <= capC in
// ascending mask order. Empty at a leaf.
std::vector<FirstMove> firstPlayerMoves(const Tree& t, const RunState& s, std::size_t universe,
                                        std::size_t capC);
// Every function f' ⊇ s.map with at most capF new domain points whose domain
// and range both contain s.constraint. Enumerated lexicographically over
// undefined-first values of the free points.
std::vector<MapVector> secondPlayerMoves(const RunState& s, std::size_t universe,
                                         std::size_t capF);

PartialMap toPartialMap(const MapVector& f);

}  // namespace rules

using WinnerMatrix = std::vector<std::vector<Player>>;

// W[i][j] = efWinner(members[i], members[j], cfg). Pairs flagged in skip
// (same shape as the result) are not solved and left as II.
WinnerMatrix winnerMatrixSerial(const std::vector<FiniteStructure>& members, const EFConfig& cfg,
                                const std::vector<std::vector<char>>& skip = {},
                                std::size_t positionBudget = kDefaultPositionBudget);
// Same result computed with an OpenMP loop over pairs.
WinnerMatrix winnerMatrixParallel(const std::vector<FiniteStructure>& members,
                                  const EFConfig& cfg,
                                  const std::vector<std::vector<char>>& skip = {},
                                  std::size_t positionBudget = kDefaultPositionBudget);

}  // namespace scottlab
