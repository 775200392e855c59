#include "scottlab/random.hpp"

#include <limits>
#include <vector>

namespace scottlab {

std::size_t Rng::below(std::size_t n) {
  const std::uint64_t bound = n;
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return static_cast<std::size_t>(x % bound);
}

Tree randomTree(Rng& rng, std::size_t maxSize, std::size_t maxBranching, std::size_t maxDepth) {
  const std::size_t size = 1 + rng.below(maxSize);
  TreeBuilder b;
  b.addRoot();
  std::vector<std::size_t> kids{0}, depth{0};
  std::vector<NodeId> open{0};
  while (b.size() < size) {
    if (open.empty()) break;
    const std::size_t k = rng.below(open.size());
    const NodeId p = open[k];
    const NodeId c = b.addChild(p);
    kids.push_back(0);
    depth.push_back(depth[p] + 1);
    if (++kids[p] == maxBranching) {
      open[k] = open.back();
      open.pop_back();
    }
    if (depth[c] < maxDepth && maxBranching > 0) open.push_back(c);
  }
  return std::move(b).build();
}

PointSet randomSet(Rng& rng, std::size_t spaceSize) {
  PointSet s(spaceSize);
  for (std::size_t i = 0; i < spaceSize; ++i) s[i] = rng.chance(0.5);
  return s;
}

BorelCode randomCode(Rng& rng, std::size_t maxSize, std::size_t spaceSize,
                     std::size_t maxBranching) {
  Tree t = randomTree(rng, maxSize, maxBranching);
  std::map<NodeId, PointSet> labels;
  for (NodeId p = 0; p < t.size(); ++p) {
    if (t.isLeaf(p)) labels.emplace(p, randomSet(rng, spaceSize));
  }
  return BorelCode{std::move(t), PointSpace::indexed(spaceSize), std::move(labels)};
}

SetExpr randomExpr(Rng& rng, std::size_t spaceSize, std::size_t maxDepth, std::size_t fanOut) {
  if (maxDepth == 0 || rng.chance(0.25)) return SetExpr::base(randomSet(rng, spaceSize));
  std::vector<SetExpr> args;
  const std::size_t k = 1 + rng.below(fanOut);
  for (std::size_t i = 0; i < k; ++i) args.push_back(randomExpr(rng, spaceSize, maxDepth - 1, fanOut));
  return rng.chance(0.5) ? SetExpr::unite(std::move(args)) : SetExpr::intersect(std::move(args));
}

}  // namespace scottlab
