#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "scottlab/trees.hpp"

namespace scottlab {

using PointSet = boost::dynamic_bitset<>;

// Finite ordered point space; points are addressed by index.
class PointSpace {
 public:
  // Throws StructuralError on an empty list or duplicate labels.
  explicit PointSpace(std::vector<std::string> labels);
  static PointSpace indexed(std::size_t n);  // labels "0".."n-1"

  std::size_t size() const { return labels_.size(); }
  const std::string& label(std::size_t i) const { return labels_[i]; }
  const std::vector<std::string>& labels() const { return labels_; }
  std::optional<std::size_t> indexOf(const std::string& label) const;
  PointSet none() const { return PointSet(size()); }
  PointSet all() const { return ~none(); }

  friend bool operator==(const PointSpace& a, const PointSpace& b) {
    return a.labels_ == b.labels_;
  }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Tree plus a labeling of its leaves by subsets of the space. Player I moves
// first, from the root; a play ending at leaf p is won by II iff x is in
// labels[p].
struct BorelCode {
  Tree tree;
  PointSpace space;
  std::map<NodeId, PointSet> labels;
};

// Throws StructuralError for unlabeled leaves, labels on internal nodes or
// labels of the wrong size.
void validateCode(const BorelCode& c);

// Points where II wins, by backward induction: even-depth internal nodes
// are conjunctions over children, odd-depth ones disjunctions.
PointSet codedSet(const BorelCode& c);

inline constexpr std::size_t kStrategyEnumBudget = 12;

// Enumerates every choice function on II's positions and checks whether one
// of them beats every play of I.
bool strategyEnumSolve(const BorelCode& c, std::size_t point,
                       std::size_t nodeBudget = kStrategyEnumBudget);

struct SetExpr {
  enum class Op { Base, Union, Intersect };
  Op op = Op::Base;
  PointSet set;                // Base only
  std::vector<SetExpr> args;   // Union / Intersect only

  static SetExpr base(PointSet s);
  static SetExpr unite(std::vector<SetExpr> args);
  static SetExpr intersect(std::vector<SetExpr> args);

  friend bool operator==(const SetExpr&, const SetExpr&) = default;
};

inline constexpr std::size_t kDefaultFanOut = 8;

// Checks argument lists are non-empty and within fanOut and that all base
// sets have spaceSize points. Throws StructuralError.
void validateExpr(const SetExpr& e, std::size_t spaceSize,
                  std::size_t fanOut = kDefaultFanOut);

struct HierarchyLevel {
  std::size_t sigma = 0;
  std::size_t pi = 0;
  friend bool operator==(const HierarchyLevel&, const HierarchyLevel&) = default;
};

PointSet evalExpr(const SetExpr& e);
// Least syntactic levels. Base sets sit at (0, 0); an intersection of sets
// each of which is Pi_a or Sigma_{a-1} is Pi_a (a >= 1), dually for unions,
// and Pi_a, Sigma_a are both contained in level a+1 of the other kind.
HierarchyLevel classifyExpr(const SetExpr& e);

// Code whose tree has rank <= pi + 1. Nested operators of the same kind
// are flattened before building.
BorelCode codeFromExpr(const SetExpr& e, const PointSpace& space);
// Intersection over the root's children of unions over grandchildren;
// piLevel <= rank(tree) - 1.
SetExpr exprFromCode(const BorelCode& c);

// The subcode rooted at node p, renumbered in preorder.
BorelCode subcode(const BorelCode& c, NodeId p);

// Recode c on canonical(m). Each leaf q of canonical(m) looks at the
// largest image node p' below or at q: a leaf preimage passes its label
// down, otherwise the label is empty when p' has an odd number of
// predecessors and the full space when even. Uses the given strong
// embedding, or finds one; throws PreconditionError when none exists.
BorelCode padToCanonical(const BorelCode& c, std::size_t m,
                         const std::optional<TreeEmbedding>& embedding = std::nullopt,
                         std::size_t nodeBudget = kDefaultNodeBudget);

}  // namespace scottlab
