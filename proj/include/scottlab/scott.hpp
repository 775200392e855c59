#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "scottlab/borelcode.hpp"
#include "scottlab/efgame.hpp"
#include "scottlab/structures.hpp"

namespace scottlab {

struct Caps {
  std::size_t capC = 1;
  std::size_t capF = 1;
};

// Finite list of structures on a shared signature and universe, read up to
// isomorphism, together with the caps used for every game on it.
class StructureClass {
 public:
  // Throws PreconditionError on an empty list, mixed signatures/universes
  // or caps invalid for the universe.
  StructureClass(std::vector<FiniteStructure> members, Caps caps);

  const std::vector<FiniteStructure>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  Caps caps() const { return caps_; }
  std::size_t universe() const { return members_.front().universe(); }
  EFConfig config(Tree tree) const { return EFConfig{std::move(tree), caps_.capC, caps_.capF}; }

 private:
  std::vector<FiniteStructure> members_;
  Caps caps_;
};

struct ScottOptions {
  bool parallel = true;
  std::size_t positionBudget = kDefaultPositionBudget;
};

// Universe size + 2. With caps equal to the universe one round already
// forces isomorphism, so this only matters for small caps.
std::size_t defaultMaxHeight(const StructureClass& cls);

// Least alpha <= maxHeight such that II winning the game on canonical(alpha)
// against any member implies isomorphism. For a given member index only its
// row is solved; without one, the maximum over all members. nullopt when
// some height exceeds maxHeight.
std::optional<std::size_t> scottHeight(const StructureClass& cls, std::optional<std::size_t> member,
                                       std::size_t maxHeight, const ScottOptions& opts = {});

// Isomorphism relation on ordered pairs of members; pair (i, j) is point
// i * size + j.
PointSet isoRelation(const StructureClass& cls);
PointSpace pairSpace(std::size_t members);

inline constexpr std::size_t kDefaultRunTreeBudget = 2'000'000;

// Tree of all legal partial runs over cfg (moves per the rules in efgame.hpp),
// nodes numbered in preorder with moves in rule order. II positions without
// a legal move are leaves.
Tree runTree(const EFConfig& cfg, std::size_t universe,
             std::size_t nodeBudget = kDefaultRunTreeBudget);

// The run tree with each maximal run labeled by the pairs on which its final
// map is a partial isomorphism; dead-end runs get the empty label.
BorelCode runTreeCode(const StructureClass& cls, const EFConfig& cfg,
                      std::size_t nodeBudget = kDefaultRunTreeBudget);

struct Link2Report {
  std::size_t scottHeight = 0;
  std::size_t runTreeRank = 1;
  bool rankIdentityHolds = false;
  bool codeDecidesIso = false;
  std::size_t borelRankUpperBound = 0;
};

// Checks made on the constructed code beyond the report fields.
struct Link2Diagnostics {
  std::size_t exprPiLevel = 0;     // piLevel(exprFromCode(code))
  bool levelWithinBound = false;   // exprPiLevel <= 2S
  bool heightWithinLevel = false;  // S <= max(exprPiLevel, 1)
};

struct Link2Outcome {
  Link2Report report;
  Link2Diagnostics diagnostics;
};

// Computes S, builds the run tree over canonical(S) and its code, and
// compares the coded relation with isomorphism. Throws PreconditionError
// when S exceeds maxHeight.
Link2Outcome verifyLink2(const StructureClass& cls, std::size_t maxHeight,
                         const ScottOptions& opts = {},
                         std::size_t nodeBudget = kDefaultRunTreeBudget);

}  // namespace scottlab
