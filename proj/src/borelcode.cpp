#include "scottlab/borelcode.hpp"

#include <algorithm>
#include <limits>

#include "scottlab/errors.hpp"

namespace scottlab {

PointSpace::PointSpace(std::vector<std::string> labels) : labels_(std::move(labels)) {
  if (labels_.empty()) throw StructuralError("point space is empty");
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (!index_.emplace(labels_[i], i).second) {
      throw StructuralError("duplicate point label \"" + labels_[i] + "\"");
    }
  }
}

PointSpace PointSpace::indexed(std::size_t n) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  return PointSpace(std::move(labels));
}

std::optional<std::size_t> PointSpace::indexOf(const std::string& label) const {
  auto it = index_.find(label);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void validateCode(const BorelCode& c) {
  for (const auto& [p, set] : c.labels) {
    if (p >= c.tree.size()) {
      throw StructuralError("label on unknown node " + std::to_string(p));
    }
    if (!c.tree.isLeaf(p)) {
      throw StructuralError("label on internal node " + std::to_string(p));
    }
    if (set.size() != c.space.size()) {
      throw StructuralError("label of node " + std::to_string(p) + " has " +
                            std::to_string(set.size()) + " points, space has " +
                            std::to_string(c.space.size()));
    }
  }
  for (NodeId p = 0; p < c.tree.size(); ++p) {
    if (c.tree.isLeaf(p) && !c.labels.count(p)) {
      throw StructuralError("unlabeled leaf " + std::to_string(p));
    }
  }
}

PointSet codedSet(const BorelCode& c) {
  validateCode(c);
  const Tree& t = c.tree;
  std::vector<PointSet> value(t.size());
  auto order = t.preorder();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const NodeId p = *it;
    if (t.isLeaf(p)) {
      value[p] = c.labels.at(p);
      continue;
    }
    const bool conjunction = t.depth(p) % 2 == 0;
    value[p] = conjunction ? c.space.all() : c.space.none();
    for (NodeId q : t.children(p)) {
      if (conjunction) {
        value[p] &= value[q];
      } else {
        value[p] |= value[q];
      }
    }
  }
  return value[t.root()];
}

namespace {

bool beatsEveryPlay(const BorelCode& c, std::size_t point, NodeId p,
                    const std::vector<NodeId>& choice) {
  const Tree& t = c.tree;
  if (t.isLeaf(p)) return c.labels.at(p).test(point);
  if (t.depth(p) % 2 == 1) return beatsEveryPlay(c, point, choice[p], choice);
  for (NodeId q : t.children(p)) {
    if (!beatsEveryPlay(c, point, q, choice)) return false;
  }
  return true;
}

}  // namespace

bool strategyEnumSolve(const BorelCode& c, std::size_t point, std::size_t nodeBudget) {
  validateCode(c);
  const Tree& t = c.tree;
  if (t.size() > nodeBudget) {
    throw ResourceError("strategy enumeration budget exceeded: " + std::to_string(t.size()) +
                        " nodes, budget " + std::to_string(nodeBudget));
  }
  if (point >= c.space.size()) throw PreconditionError("point out of range");

  std::vector<NodeId> mine;
  for (NodeId p = 0; p < t.size(); ++p) {
    if (!t.isLeaf(p) && t.depth(p) % 2 == 1) mine.push_back(p);
  }
  std::vector<std::size_t> digit(mine.size(), 0);
  std::vector<NodeId> choice(t.size(), 0);
  while (true) {
    for (std::size_t k = 0; k < mine.size(); ++k) choice[mine[k]] = t.children(mine[k])[digit[k]];
    if (beatsEveryPlay(c, point, t.root(), choice)) return true;
    std::size_t k = 0;
    while (k < mine.size() && ++digit[k] == t.children(mine[k]).size()) digit[k++] = 0;
    if (k == mine.size()) return false;
  }
}

SetExpr SetExpr::base(PointSet s) {
  SetExpr e;
  e.set = std::move(s);
  return e;
}

SetExpr SetExpr::unite(std::vector<SetExpr> args) {
  SetExpr e;
  e.op = Op::Union;
  e.args = std::move(args);
  return e;
}

SetExpr SetExpr::intersect(std::vector<SetExpr> args) {
  SetExpr e;
  e.op = Op::Intersect;
  e.args = std::move(args);
  return e;
}

void validateExpr(const SetExpr& e, std::size_t spaceSize, std::size_t fanOut) {
  if (e.op == SetExpr::Op::Base) {
    if (e.set.size() != spaceSize) {
      throw StructuralError("base set has " + std::to_string(e.set.size()) +
                            " points, space has " + std::to_string(spaceSize));
    }
    return;
  }
  if (e.args.empty()) throw StructuralError("empty argument list");
  if (e.args.size() > fanOut) {
    throw StructuralError("argument list of length " + std::to_string(e.args.size()) +
                          " exceeds fan-out " + std::to_string(fanOut));
  }
  for (const auto& a : e.args) validateExpr(a, spaceSize, fanOut);
}

PointSet evalExpr(const SetExpr& e) {
  if (e.op == SetExpr::Op::Base) return e.set;
  PointSet acc = evalExpr(e.args.front());
  for (std::size_t i = 1; i < e.args.size(); ++i) {
    if (e.op == SetExpr::Op::Union) {
      acc |= evalExpr(e.args[i]);
    } else {
      acc &= evalExpr(e.args[i]);
    }
  }
  return acc;
}

HierarchyLevel classifyExpr(const SetExpr& e) {
  if (e.op == SetExpr::Op::Base) return {0, 0};
  // An argument contributes the least a with arg in Pi_a (for intersections)
  // or Sigma_a (for unions), either directly or one level up from the dual.
  std::size_t level = 1;
  for (const auto& a : e.args) {
    const HierarchyLevel h = classifyExpr(a);
    level = e.op == SetExpr::Op::Intersect ? std::max(level, std::min(h.pi, h.sigma + 1))
                                           : std::max(level, std::min(h.sigma, h.pi + 1));
  }
  if (e.op == SetExpr::Op::Intersect) return {level + 1, level};
  return {level, level + 1};
}

namespace {

void flattenInto(const SetExpr& e, SetExpr::Op op, std::vector<const SetExpr*>& out) {
  if (e.op != op) {
    out.push_back(&e);
    return;
  }
  for (const auto& a : e.args) flattenInto(a, op, out);
}

std::vector<const SetExpr*> flatten(const SetExpr& e, SetExpr::Op op) {
  std::vector<const SetExpr*> out;
  flattenInto(e, op, out);
  return out;
}

struct CodeBuilder {
  TreeBuilder tree;
  std::map<NodeId, PointSet> labels;

  // Under p, one child per union argument.
  void unionBelow(const SetExpr& u, NodeId p) {
    for (const SetExpr* b : flatten(u, SetExpr::Op::Union)) {
      const NodeId g = tree.addChild(p);
      if (b->op == SetExpr::Op::Base) {
        labels.emplace(g, b->set);
      } else {
        intersectionAt(*b, g);
      }
    }
  }

  // r becomes the root of a code for e, e a Base or an Intersect.
  void intersectionAt(const SetExpr& e, NodeId r) {
    if (e.op == SetExpr::Op::Base) {
      labels.emplace(r, e.set);
      return;
    }
    for (const SetExpr* a : flatten(e, SetExpr::Op::Intersect)) {
      const NodeId p = tree.addChild(r);
      if (a->op == SetExpr::Op::Base) {
        labels.emplace(p, a->set);
      } else {
        unionBelow(*a, p);
      }
    }
  }
};

}  // namespace

BorelCode codeFromExpr(const SetExpr& e, const PointSpace& space) {
  validateExpr(e, space.size(), std::numeric_limits<std::size_t>::max());
  CodeBuilder b;
  const NodeId r = b.tree.addRoot();
  if (e.op == SetExpr::Op::Union) {
    b.unionBelow(e, b.tree.addChild(r));
  } else {
    b.intersectionAt(e, r);
  }
  return BorelCode{std::move(b.tree).build(), space, std::move(b.labels)};
}

namespace {

SetExpr exprAt(const BorelCode& c, NodeId p) {
  const Tree& t = c.tree;
  if (t.isLeaf(p)) return SetExpr::base(c.labels.at(p));
  std::vector<SetExpr> conj;
  for (NodeId q : t.children(p)) {
    if (t.isLeaf(q)) {
      conj.push_back(SetExpr::base(c.labels.at(q)));
      continue;
    }
    std::vector<SetExpr> disj;
    for (NodeId g : t.children(q)) disj.push_back(exprAt(c, g));
    conj.push_back(SetExpr::unite(std::move(disj)));
  }
  return SetExpr::intersect(std::move(conj));
}

}  // namespace

SetExpr exprFromCode(const BorelCode& c) {
  validateCode(c);
  return exprAt(c, c.tree.root());
}

BorelCode subcode(const BorelCode& c, NodeId p) {
  const Tree& t = c.tree;
  TreeBuilder b;
  std::map<NodeId, PointSet> labels;
  auto copy = [&](auto&& self, NodeId from, NodeId to) -> void {
    if (auto it = c.labels.find(from); it != c.labels.end()) labels.emplace(to, it->second);
    for (NodeId q : t.children(from)) self(self, q, b.addChild(to));
  };
  copy(copy, p, b.addRoot());
  return BorelCode{std::move(b).build(), c.space, std::move(labels)};
}

BorelCode padToCanonical(const BorelCode& c, std::size_t m,
                         const std::optional<TreeEmbedding>& embedding,
                         std::size_t nodeBudget) {
  validateCode(c);
  std::optional<TreeEmbedding> e = embedding;
  if (!e) {
    e = strongEmbedCanonical(c.tree, m, nodeBudget);
    if (!e) {
      throw PreconditionError("tree has no strong embedding into canonical(" +
                              std::to_string(m) + "); needs at least canonical(" +
                              std::to_string(minimalCanonicalOrder(c.tree)) + ")");
    }
  } else {
    if (!(e->source == c.tree)) throw PreconditionError("embedding source is not the code's tree");
    if (!(e->target == canonical(m, nodeBudget))) {
      throw PreconditionError("embedding target is not canonical(" + std::to_string(m) + ")");
    }
    auto check = validateEmbedding(*e, true);
    if (!check.ok) throw PreconditionError("embedding is not strong: " + check.reason);
  }

  const Tree& target = e->target;
  std::vector<std::optional<NodeId>> preimage(target.size());
  for (NodeId p = 0; p < c.tree.size(); ++p) preimage[e->map[p]] = p;

  // anchor[q]: largest image node among q and its predecessors.
  std::vector<NodeId> anchor(target.size(), target.root());
  std::map<NodeId, PointSet> labels;
  for (NodeId q : target.preorder()) {
    if (preimage[q]) {
      anchor[q] = q;
    } else {
      anchor[q] = anchor[*target.parent(q)];
    }
    if (!target.isLeaf(q)) continue;
    const NodeId a = anchor[q];
    const NodeId src = *preimage[a];
    if (c.tree.isLeaf(src)) {
      labels.emplace(q, c.labels.at(src));
    } else {
      labels.emplace(q, target.depth(a) % 2 == 1 ? c.space.none() : c.space.all());
    }
  }
  return BorelCode{target, c.space, std::move(labels)};
}

}  // namespace scottlab
