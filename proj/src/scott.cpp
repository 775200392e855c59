#include "scottlab/scott.hpp"

#include "scottlab/errors.hpp"

namespace scottlab {

StructureClass::StructureClass(std::vector<FiniteStructure> members, Caps caps)
    : members_(std::move(members)), caps_(caps) {
  if (members_.empty()) throw PreconditionError("structure class is empty");
  for (const auto& s : members_) {
    requireSameSignature(members_.front(), s);
    if (s.universe() != members_.front().universe()) {
      throw PreconditionError("class members must share the universe size");
    }
  }
  validateConfig(EFConfig{Tree::singleton(), caps_.capC, caps_.capF}, universe());
}

std::size_t defaultMaxHeight(const StructureClass& cls) { return cls.universe() + 2; }

PointSpace pairSpace(std::size_t members) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < members; ++i) {
    for (std::size_t j = 0; j < members; ++j) {
      labels.push_back(std::to_string(i) + "," + std::to_string(j));
    }
  }
  return PointSpace(std::move(labels));
}

PointSet isoRelation(const StructureClass& cls) {
  const std::size_t k = cls.size();
  PointSet rel(k * k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      rel[i * k + j] = isomorphic(cls.members()[i], cls.members()[j]).has_value();
    }
  }
  return rel;
}

std::optional<std::size_t> scottHeight(const StructureClass& cls, std::optional<std::size_t> member,
                                       std::size_t maxHeight, const ScottOptions& opts) {
  const std::size_t k = cls.size();
  if (member && *member >= k) throw PreconditionError("member index out of range");
  const PointSet iso = isoRelation(cls);

  std::vector<std::optional<std::size_t>> height(k);
  auto wanted = [&](std::size_t i) { return !member || *member == i; };
  for (std::size_t alpha = 0; alpha <= maxHeight; ++alpha) {
    // Only rows still unresolved need solving, and isomorphic pairs never
    // matter.
    std::vector<std::vector<char>> skip(k, std::vector<char>(k, 1));
    bool pending = false;
    for (std::size_t i = 0; i < k; ++i) {
      if (!wanted(i) || height[i]) continue;
      pending = true;
      for (std::size_t j = 0; j < k; ++j) skip[i][j] = iso[i * k + j];
    }
    if (!pending) break;
    const EFConfig cfg = cls.config(canonical(alpha));
    const WinnerMatrix w = opts.parallel
                               ? winnerMatrixParallel(cls.members(), cfg, skip, opts.positionBudget)
                               : winnerMatrixSerial(cls.members(), cfg, skip, opts.positionBudget);
    for (std::size_t i = 0; i < k; ++i) {
      if (!wanted(i) || height[i]) continue;
      bool decides = true;
      for (std::size_t j = 0; j < k; ++j) {
        if (!skip[i][j] && w[i][j] == Player::II) decides = false;
      }
      if (decides) height[i] = alpha;
    }
  }

  std::size_t best = 0;
  for (std::size_t i = 0; i < k; ++i) {
    if (!wanted(i)) continue;
    if (!height[i]) return std::nullopt;
    best = std::max(best, *height[i]);
  }
  return best;
}

namespace {

struct RunTreeBuild {
  TreeBuilder tree;
  std::vector<std::pair<NodeId, rules::MapVector>> maximalRuns;
  std::vector<NodeId> deadEnds;
};

class RunTreeBuilder {
 public:
  RunTreeBuilder(const EFConfig& cfg, std::size_t universe, std::size_t budget)
      : cfg_(cfg), universe_(universe), budget_(budget) {}

  RunTreeBuild build() {
    const NodeId r = out_.tree.addRoot();
    firstTurn({cfg_.tree.root(), 0, rules::MapVector(universe_, rules::kUndefined)}, r);
    return std::move(out_);
  }

 private:
  NodeId grow(NodeId parent) {
    if (out_.tree.size() >= budget_) {
      throw ResourceError("run tree exceeds the node budget of " + std::to_string(budget_) +
                          " nodes");
    }
    return out_.tree.addChild(parent);
  }

  void firstTurn(const rules::RunState& s, NodeId at) {
    if (cfg_.tree.isLeaf(s.node)) {
      out_.maximalRuns.push_back({at, s.map});
      return;
    }
    for (const auto& mv : rules::firstPlayerMoves(cfg_.tree, s, universe_, cfg_.capC)) {
      secondTurn({mv.child, mv.constraint, s.map}, grow(at));
    }
  }

  void secondTurn(const rules::RunState& s, NodeId at) {
    const auto moves = rules::secondPlayerMoves(s, universe_, cfg_.capF);
    if (moves.empty()) out_.deadEnds.push_back(at);
    for (const auto& f : moves) firstTurn({s.node, s.constraint, f}, grow(at));
  }

  const EFConfig& cfg_;
  std::size_t universe_;
  std::size_t budget_;
  RunTreeBuild out_;
};

RunTreeBuild buildRuns(const EFConfig& cfg, std::size_t universe, std::size_t nodeBudget) {
  if (universe == 0 || universe > 8) {
    throw ResourceError("run trees are supported for universes 1..8");
  }
  validateConfig(cfg, universe);
  return RunTreeBuilder(cfg, universe, nodeBudget).build();
}

}  // namespace

Tree runTree(const EFConfig& cfg, std::size_t universe, std::size_t nodeBudget) {
  return std::move(buildRuns(cfg, universe, nodeBudget).tree).build();
}

BorelCode runTreeCode(const StructureClass& cls, const EFConfig& cfg, std::size_t nodeBudget) {
  RunTreeBuild runs = buildRuns(cfg, cls.universe(), nodeBudget);
  const std::size_t k = cls.size();
  PointSpace space = pairSpace(k);
  std::map<NodeId, PointSet> labels;
  for (const auto& [leaf, f] : runs.maximalRuns) {
    const PartialMap map = rules::toPartialMap(f);
    PointSet label(k * k);
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        label[i * k + j] = isPartialIso(cls.members()[i], cls.members()[j], map);
      }
    }
    labels.emplace(leaf, std::move(label));
  }
  for (NodeId leaf : runs.deadEnds) labels.emplace(leaf, space.none());
  return BorelCode{std::move(runs.tree).build(), std::move(space), std::move(labels)};
}

Link2Outcome verifyLink2(const StructureClass& cls, std::size_t maxHeight,
                         const ScottOptions& opts, std::size_t nodeBudget) {
  const auto s = scottHeight(cls, std::nullopt, maxHeight, opts);
  if (!s) {
    throw PreconditionError("Scott height exceeds max height " + std::to_string(maxHeight));
  }
  const BorelCode code = runTreeCode(cls, cls.config(canonical(*s)), nodeBudget);

  Link2Outcome out;
  Link2Report& r = out.report;
  r.scottHeight = *s;
  r.runTreeRank = rank(code.tree);
  r.rankIdentityHolds = r.runTreeRank == 2 * *s + 1;
  r.codeDecidesIso = codedSet(code) == isoRelation(cls);
  r.borelRankUpperBound = 2 * *s;

  Link2Diagnostics& d = out.diagnostics;
  d.exprPiLevel = classifyExpr(exprFromCode(code)).pi;
  d.levelWithinBound = d.exprPiLevel <= 2 * *s;
  d.heightWithinLevel = *s <= std::max<std::size_t>(d.exprPiLevel, 1);
  return out;
}

}  // namespace scottlab
