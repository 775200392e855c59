#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace scottlab {

using NodeId = std::uint32_t;

inline constexpr std::size_t kDefaultNodeBudget = 100'000;

// Finite rooted tree. Nodes are the dense ids 0..size()-1; the tree order
// has the root as its minimum, so p < q means p is a proper ancestor of q.
class Tree {
 public:
  // Validates and builds a tree from a parent table (nullopt marks the root).
  // Throws StructuralError on zero or several roots, out-of-range parents or
  // cycles.
  static Tree fromParents(std::span<const std::optional<NodeId>> parents);

  static Tree singleton();
  // The one-node tree.
  Tree();

  std::size_t size() const { return parent_.size(); }
  NodeId root() const { return root_; }
  std::optional<NodeId> parent(NodeId p) const;
  // Immediate successors, ascending by id.
  std::span<const NodeId> children(NodeId p) const { return children_[p]; }
  bool isLeaf(NodeId p) const { return children_[p].empty(); }
  // |pred(p)|: number of proper ancestors.
  std::size_t depth(NodeId p) const { return depth_[p]; }
  bool isProperAncestor(NodeId p, NodeId q) const;
  std::size_t maxBranching() const;
  // Root first, children visited in ascending id order.
  std::vector<NodeId> preorder() const;

  friend bool operator==(const Tree&, const Tree&) = default;

 private:
  friend class TreeBuilder;
  void index();

  static constexpr NodeId kNoParent = ~NodeId{0};
  std::vector<NodeId> parent_;
  std::vector<std::vector<NodeId>> children_;
  std::vector<std::size_t> depth_;
  NodeId root_ = 0;
};

// Grows a tree top-down; ids are handed out sequentially so the result is
// valid by construction.
class TreeBuilder {
 public:
  NodeId addRoot();
  NodeId addChild(NodeId parent);
  std::size_t size() const { return parents_.size(); }
  Tree build() &&;

 private:
  std::vector<NodeId> parents_;
};

// Node ranks: leaves 0, internal p -> max over children of rank + 1.
std::vector<std::size_t> nodeRanks(const Tree& t);
// Tree rank = node rank of the root + 1; always >= 1.
std::size_t rank(const Tree& t);

// Canonical tree T_m of strictly decreasing sequences over {0,...,m-1}.
//
// Node ids are assigned in lexicographic order of the sequences. That order
// coincides with reading the element set of a sequence as a bitmask, so the
// id of <a_0 > a_1 > ... > a_k> is sum 2^{a_i}, the root (empty sequence) is
// 0, and the parent of id x is x with its lowest set bit cleared. T_k is
// the initial-segment-closed subtree of T_m on ids < 2^k for every k <= m.
Tree canonical(std::size_t m, std::size_t nodeBudget = kDefaultNodeBudget);
std::vector<std::size_t> canonicalSequence(NodeId id);
NodeId canonicalNode(std::span<const std::size_t> decreasing);

// Bound on branching. Trees of rank beta + 1 within it embed into
// canonical(width * beta).
class Width {
 public:
  explicit Width(std::size_t w);
  std::size_t value() const { return w_; }

 private:
  std::size_t w_;
};

struct TreeEmbedding {
  Tree source;
  Tree target;
  std::vector<NodeId> map;  // indexed by source node
};

// Embeds t (rank beta+1, branching <= w) into canonical(w * beta): the root
// goes to the empty sequence, and the i-th child c of a node (ascending id)
// prepends w * rank(c) + i to the image of its subtree. The image is closed
// under initial segments.
TreeEmbedding embed(const Tree& t, Width width,
                    std::size_t nodeBudget = kDefaultNodeBudget);

struct EmbeddingCheck {
  bool ok = true;
  std::optional<std::pair<NodeId, NodeId>> witness;  // offending source pair
  std::string reason;
};

// Checks injectivity and that p < q iff map(p) < map(q). With strong=true
// also checks the image is closed under initial segments of the target with
// the root mapped to the target root and immediate successors to immediate
// successors. Throws StructuralError if the map is not total.
EmbeddingCheck validateEmbedding(const TreeEmbedding& e, bool strong = false);

struct EmbedSearchBudget {
  std::size_t maxSource = 8;
  std::size_t maxTarget = 64;
};

// Exhaustive search for an order embedding of src into dst. Deterministic:
// root images are tried in ascending target id, children are placed in
// ascending source id. Returns nullopt when none exists.
std::optional<TreeEmbedding> bruteForceEmbed(const Tree& src, const Tree& dst,
                                             EmbedSearchBudget budget = {});

// Least m such that t embeds into canonical(m) in the strong
// (initial-segment-closed) sense.
std::size_t minimalCanonicalOrder(const Tree& t);
// A strong embedding of t into canonical(m), or nullopt if m is too small.
std::optional<TreeEmbedding> strongEmbedCanonical(
    const Tree& t, std::size_t m, std::size_t nodeBudget = kDefaultNodeBudget);

// Lower-bound family: beta = 1 is a root with w leaves, beta = g+1 hangs w
// copies of witnessTree(w, g) under a fresh root. Rank beta+1, no embedding
// into canonical(a) for a < w * beta.
Tree witnessTree(Width width, std::size_t beta,
                 std::size_t nodeBudget = kDefaultNodeBudget);

// Relabels nodes: node p of t becomes perm[p]. perm must be a permutation.
Tree relabel(const Tree& t, std::span<const NodeId> perm);

}  // namespace scottlab
