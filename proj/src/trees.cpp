#include "scottlab/trees.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <unordered_map>

#include "scottlab/errors.hpp"

namespace scottlab {

Tree Tree::fromParents(std::span<const std::optional<NodeId>> parents) {
  const std::size_t n = parents.size();
  if (n == 0) throw StructuralError("tree has no nodes");
  Tree t;
  t.parent_.assign(n, kNoParent);
  std::optional<NodeId> root;
  for (std::size_t i = 0; i < n; ++i) {
    if (!parents[i]) {
      if (root) {
        throw StructuralError("tree has several roots: " +
                              std::to_string(*root) + " and " +
                              std::to_string(i));
      }
      root = static_cast<NodeId>(i);
      continue;
    }
    if (*parents[i] >= n) {
      throw StructuralError("node " + std::to_string(i) +
                            " has unknown parent " +
                            std::to_string(*parents[i]));
    }
    t.parent_[i] = *parents[i];
  }
  if (!root) throw StructuralError("tree has no root (parent links form a cycle)");
  t.root_ = *root;

  // Every node must reach the root; 0 = unvisited, 1 = on stack, 2 = done.
  std::vector<char> state(n, 0);
  state[t.root_] = 2;
  std::vector<NodeId> path;
  for (std::size_t i = 0; i < n; ++i) {
    NodeId p = static_cast<NodeId>(i);
    path.clear();
    while (state[p] == 0) {
      state[p] = 1;
      path.push_back(p);
      p = t.parent_[p];
    }
    if (state[p] == 1) {
      throw StructuralError("parent links form a cycle through node " +
                            std::to_string(p));
    }
    for (NodeId q : path) state[q] = 2;
  }
  t.index();
  return t;
}

Tree Tree::singleton() { return TreeBuilder{}.build(); }

Tree::Tree() : parent_{kNoParent}, children_(1), depth_{0}, root_(0) {}

void Tree::index() {
  const std::size_t n = parent_.size();
  children_.assign(n, {});
  for (std::size_t i = 0; i < n; ++i) {
    if (parent_[i] != kNoParent) children_[parent_[i]].push_back(static_cast<NodeId>(i));
  }
  // Children lists come out ascending because i is increasing.
  depth_.assign(n, 0);
  std::vector<NodeId> stack{root_};
  while (!stack.empty()) {
    NodeId p = stack.back();
    stack.pop_back();
    for (NodeId c : children_[p]) {
      depth_[c] = depth_[p] + 1;
      stack.push_back(c);
    }
  }
}

std::optional<NodeId> Tree::parent(NodeId p) const {
  if (parent_[p] == kNoParent) return std::nullopt;
  return parent_[p];
}

bool Tree::isProperAncestor(NodeId p, NodeId q) const {
  if (depth_[p] >= depth_[q]) return false;
  while (depth_[q] > depth_[p]) q = parent_[q];
  return p == q;
}

std::size_t Tree::maxBranching() const {
  std::size_t w = 0;
  for (const auto& c : children_) w = std::max(w, c.size());
  return w;
}

std::vector<NodeId> Tree::preorder() const {
  std::vector<NodeId> order;
  order.reserve(size());
  std::vector<NodeId> stack{root_};
  while (!stack.empty()) {
    NodeId p = stack.back();
    stack.pop_back();
    order.push_back(p);
    const auto& cs = children_[p];
    for (auto it = cs.rbegin(); it != cs.rend(); ++it) stack.push_back(*it);
  }
  return order;
}

NodeId TreeBuilder::addRoot() {
  if (!parents_.empty()) throw StructuralError("tree builder already has a root");
  parents_.push_back(Tree::kNoParent);
  return 0;
}

NodeId TreeBuilder::addChild(NodeId parent) {
  if (parent >= parents_.size()) {
    throw StructuralError("tree builder: unknown parent " + std::to_string(parent));
  }
  parents_.push_back(parent);
  return static_cast<NodeId>(parents_.size() - 1);
}

Tree TreeBuilder::build() && {
  if (parents_.empty()) addRoot();
  Tree t;
  t.parent_ = std::move(parents_);
  t.root_ = 0;
  t.index();
  return t;
}

std::vector<std::size_t> nodeRanks(const Tree& t) {
  std::vector<std::size_t> r(t.size(), 0);
  auto order = t.preorder();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    for (NodeId c : t.children(*it)) r[*it] = std::max(r[*it], r[c] + 1);
  }
  return r;
}

std::size_t rank(const Tree& t) { return nodeRanks(t)[t.root()] + 1; }

namespace {

void checkCanonicalBudget(std::size_t m, std::size_t nodeBudget) {
  if (m >= 63 || (std::size_t{1} << m) > nodeBudget) {
    throw ResourceError("canonical(" + std::to_string(m) + ") needs 2^" +
                        std::to_string(m) + " nodes, exceeding the node budget of " +
                        std::to_string(nodeBudget));
  }
}

}  // namespace

Tree canonical(std::size_t m, std::size_t nodeBudget) {
  checkCanonicalBudget(m, nodeBudget);
  const std::size_t n = std::size_t{1} << m;
  std::vector<std::optional<NodeId>> parents(n);
  for (std::size_t id = 1; id < n; ++id) parents[id] = static_cast<NodeId>(id & (id - 1));
  return Tree::fromParents(parents);
}

std::vector<std::size_t> canonicalSequence(NodeId id) {
  std::vector<std::size_t> seq;
  for (int b = 31; b >= 0; --b) {
    if (id & (NodeId{1} << b)) seq.push_back(static_cast<std::size_t>(b));
  }
  return seq;
}

NodeId canonicalNode(std::span<const std::size_t> decreasing) {
  NodeId id = 0;
  for (std::size_t i = 0; i < decreasing.size(); ++i) {
    if (i > 0 && decreasing[i] >= decreasing[i - 1]) {
      throw PreconditionError("sequence is not strictly decreasing");
    }
    if (decreasing[i] >= 32) throw PreconditionError("sequence element too large");
    id |= NodeId{1} << decreasing[i];
  }
  return id;
}

Width::Width(std::size_t w) : w_(w) {
  if (w == 0) throw PreconditionError("width must be at least 1");
}

TreeEmbedding embed(const Tree& t, Width width, std::size_t nodeBudget) {
  const std::size_t w = width.value();
  for (NodeId p = 0; p < t.size(); ++p) {
    if (t.children(p).size() > w) {
      throw PreconditionError("branching exceeds width: node " + std::to_string(p) +
                              " has " + std::to_string(t.children(p).size()) +
                              " children, width is " + std::to_string(w));
    }
  }
  const auto ranks = nodeRanks(t);
  const std::size_t beta = ranks[t.root()];
  TreeEmbedding e{t, canonical(w * beta, nodeBudget), std::vector<NodeId>(t.size(), 0)};
  for (NodeId p : t.preorder()) {
    const auto cs = t.children(p);
    for (std::size_t i = 0; i < cs.size(); ++i) {
      const std::size_t ordinal = w * ranks[cs[i]] + i;
      e.map[cs[i]] = e.map[p] | (NodeId{1} << ordinal);
    }
  }
  return e;
}

EmbeddingCheck validateEmbedding(const TreeEmbedding& e, bool strong) {
  const Tree& s = e.source;
  const Tree& d = e.target;
  if (e.map.size() != s.size()) {
    throw StructuralError("embedding map is not total: " + std::to_string(e.map.size()) +
                          " entries for " + std::to_string(s.size()) + " source nodes");
  }
  for (NodeId p = 0; p < s.size(); ++p) {
    if (e.map[p] >= d.size()) {
      throw StructuralError("embedding maps node " + std::to_string(p) +
                            " outside the target");
    }
  }
  auto fail = [](NodeId p, NodeId q, std::string why) {
    return EmbeddingCheck{false, std::pair{p, q}, std::move(why)};
  };
  for (NodeId p = 0; p < s.size(); ++p) {
    for (NodeId q = p + 1; q < s.size(); ++q) {
      if (e.map[p] == e.map[q]) return fail(p, q, "not injective");
      const bool src = s.isProperAncestor(p, q);
      const bool dst = d.isProperAncestor(e.map[p], e.map[q]);
      if (src != dst) return fail(p, q, "order not preserved");
      const bool srcRev = s.isProperAncestor(q, p);
      const bool dstRev = d.isProperAncestor(e.map[q], e.map[p]);
      if (srcRev != dstRev) return fail(q, p, "order not preserved");
    }
  }
  if (strong) {
    if (e.map[s.root()] != d.root()) {
      return fail(s.root(), s.root(), "root not mapped to target root");
    }
    for (NodeId q = 0; q < s.size(); ++q) {
      auto p = s.parent(q);
      if (!p) continue;
      if (d.parent(e.map[q]) != e.map[*p]) {
        return fail(*p, q, "immediate successor not mapped to immediate successor");
      }
    }
  }
  return {};
}

namespace {

// Exact order-embedding search, memoized on subproblems:
//   fits(c, x)          subtree(c) embeds with c -> x
//   place(p, S, x)      the subtrees at children S of p embed pairwise
//                       incomparably inside the cone of x (x included)
//   spread(p, S, x, i)  same, but using only cones of children i.. of x
class EmbedSearch {
 public:
  EmbedSearch(const Tree& src, const Tree& dst) : src_(src), dst_(dst) {}

  std::optional<std::vector<NodeId>> run() {
    for (NodeId x = 0; x < dst_.size(); ++x) {
      if (fits(src_.root(), x)) {
        std::vector<NodeId> map(src_.size(), 0);
        buildFits(src_.root(), x, map);
        return map;
      }
    }
    return std::nullopt;
  }

 private:
  using Mask = std::uint32_t;

  Mask allChildren(NodeId c) const {
    return static_cast<Mask>((std::uint64_t{1} << src_.children(c).size()) - 1);
  }

  bool fits(NodeId c, NodeId x) {
    const std::uint64_t key = (std::uint64_t{c} << 32) | x;
    if (auto it = fitsMemo_.find(key); it != fitsMemo_.end()) return it->second;
    const bool v = spread(c, allChildren(c), x, 0);
    fitsMemo_.emplace(key, v);
    return v;
  }

  bool place(NodeId p, Mask s, NodeId x) {
    if (std::popcount(s) == 1 && fits(src_.children(p)[std::countr_zero(s)], x)) return true;
    return spread(p, s, x, 0);
  }

  static std::uint64_t key(NodeId p, Mask s, NodeId x, std::size_t i) {
    return (std::uint64_t{p} << 48) ^ (std::uint64_t{s} << 32) ^
           (std::uint64_t{x} << 12) ^ i;
  }

  bool spread(NodeId p, Mask s, NodeId x, std::size_t i) {
    if (s == 0) return true;
    const auto ys = dst_.children(x);
    if (i >= ys.size()) return false;
    const std::uint64_t k = key(p, s, x, i);
    if (auto it = spreadMemo_.find(k); it != spreadMemo_.end()) return it->second;
    bool v = spread(p, s, x, i + 1);
    // Nonempty subsets u of s go into the cone of ys[i].
    for (Mask u = s; !v && u != 0; u = (u - 1) & s) {
      v = place(p, u, ys[i]) && spread(p, s & ~u, x, i + 1);
    }
    spreadMemo_.emplace(k, v);
    return v;
  }

  void buildFits(NodeId c, NodeId x, std::vector<NodeId>& map) {
    map[c] = x;
    buildSpread(c, allChildren(c), x, 0, map);
  }

  void buildPlace(NodeId p, Mask s, NodeId x, std::vector<NodeId>& map) {
    if (std::popcount(s) == 1) {
      NodeId c = src_.children(p)[std::countr_zero(s)];
      if (fits(c, x)) {
        buildFits(c, x, map);
        return;
      }
    }
    buildSpread(p, s, x, 0, map);
  }

  void buildSpread(NodeId p, Mask s, NodeId x, std::size_t i, std::vector<NodeId>& map) {
    if (s == 0) return;
    if (spread(p, s, x, i + 1)) {
      buildSpread(p, s, x, i + 1, map);
      return;
    }
    const NodeId y = dst_.children(x)[i];
    for (Mask u = s; u != 0; u = (u - 1) & s) {
      if (place(p, u, y) && spread(p, s & ~u, x, i + 1)) {
        buildPlace(p, u, y, map);
        buildSpread(p, s & ~u, x, i + 1, map);
        return;
      }
    }
  }

  const Tree& src_;
  const Tree& dst_;
  std::unordered_map<std::uint64_t, bool> fitsMemo_;
  std::unordered_map<std::uint64_t, bool> spreadMemo_;
};

}  // namespace

std::optional<TreeEmbedding> bruteForceEmbed(const Tree& src, const Tree& dst,
                                             EmbedSearchBudget budget) {
  if (src.size() > budget.maxSource || dst.size() > budget.maxTarget) {
    throw ResourceError("embedding search budget exceeded: source " +
                        std::to_string(src.size()) + "/" +
                        std::to_string(budget.maxSource) + ", target " +
                        std::to_string(dst.size()) + "/" +
                        std::to_string(budget.maxTarget));
  }
  if (src.maxBranching() > 16 || src.size() > 0xffff || dst.size() > 0xfffff ||
      dst.maxBranching() > 0xfff) {
    throw ResourceError("embedding search supports at most 16 children per source node");
  }
  EmbedSearch search(src, dst);
  auto map = search.run();
  if (!map) return std::nullopt;
  return TreeEmbedding{src, dst, std::move(*map)};
}

namespace {

// need[q]: least k such that subtree(q) embeds strongly into T_k with q at the
// root; value[c]: the first element assigned to child c.
struct StrongPlan {
  std::vector<std::size_t> need;
  std::vector<std::size_t> value;
};

StrongPlan planStrong(const Tree& t) {
  StrongPlan plan{std::vector<std::size_t>(t.size(), 0),
                  std::vector<std::size_t>(t.size(), 0)};
  auto order = t.preorder();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    std::vector<NodeId> cs(t.children(*it).begin(), t.children(*it).end());
    if (cs.empty()) continue;
    std::stable_sort(cs.begin(), cs.end(), [&](NodeId a, NodeId b) {
      return plan.need[a] < plan.need[b];
    });
    std::size_t next = 0;
    for (NodeId c : cs) {
      plan.value[c] = std::max(plan.need[c], next);
      next = plan.value[c] + 1;
    }
    plan.need[*it] = next;
  }
  return plan;
}

}  // namespace

std::size_t minimalCanonicalOrder(const Tree& t) { return planStrong(t).need[t.root()]; }

std::optional<TreeEmbedding> strongEmbedCanonical(const Tree& t, std::size_t m,
                                                  std::size_t nodeBudget) {
  const auto plan = planStrong(t);
  if (plan.need[t.root()] > m) return std::nullopt;
  TreeEmbedding e{t, canonical(m, nodeBudget), std::vector<NodeId>(t.size(), 0)};
  for (NodeId p : t.preorder()) {
    for (NodeId c : t.children(p)) e.map[c] = e.map[p] | (NodeId{1} << plan.value[c]);
  }
  return e;
}

Tree witnessTree(Width width, std::size_t beta, std::size_t nodeBudget) {
  if (beta == 0) throw PreconditionError("witnessTree needs beta >= 1");
  const std::size_t w = width.value();
  // 1 + w + ... + w^beta nodes.
  std::size_t total = 1, level = 1;
  for (std::size_t i = 0; i < beta; ++i) {
    level *= w;
    total += level;
    if (total > nodeBudget) {
      throw ResourceError("witnessTree(" + std::to_string(w) + ", " +
                          std::to_string(beta) + ") exceeds the node budget of " +
                          std::to_string(nodeBudget));
    }
  }
  TreeBuilder b;
  auto grow = [&](auto&& self, NodeId p, std::size_t depthLeft) -> void {
    if (depthLeft == 0) return;
    for (std::size_t i = 0; i < w; ++i) self(self, b.addChild(p), depthLeft - 1);
  };
  grow(grow, b.addRoot(), beta);
  return std::move(b).build();
}

Tree relabel(const Tree& t, std::span<const NodeId> perm) {
  if (perm.size() != t.size()) throw PreconditionError("relabel: permutation has wrong size");
  std::vector<std::optional<NodeId>> parents(t.size());
  std::vector<char> seen(t.size(), 0);
  for (NodeId p = 0; p < t.size(); ++p) {
    if (perm[p] >= t.size() || seen[perm[p]]) {
      throw PreconditionError("relabel: not a permutation");
    }
    seen[perm[p]] = 1;
    if (auto q = t.parent(p)) parents[perm[p]] = perm[*q];
  }
  return Tree::fromParents(parents);
}

}  // namespace scottlab
