#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "scottlab/borelcode.hpp"
#include "scottlab/trees.hpp"

namespace scottlab {

// Seeded generator whose outputs depend only on the raw mt19937_64 stream,
// so results are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t next() { return engine_(); }
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  bool chance(double p) { return unit() < p; }
  // Uniform in [0, n); n > 0.
  std::size_t below(std::size_t n);

 private:
  std::mt19937_64 engine_;
};

// Fisher-Yates driven by Rng::below.
template <class T>
void shuffle(Rng& rng, std::vector<T>& v) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.below(i)]);
}

// Grows a tree node by node, attaching each new node to a uniformly chosen
// node that still has room; size is drawn from [1, maxSize].
Tree randomTree(Rng& rng, std::size_t maxSize, std::size_t maxBranching,
                std::size_t maxDepth = ~std::size_t{0});

PointSet randomSet(Rng& rng, std::size_t spaceSize);
BorelCode randomCode(Rng& rng, std::size_t maxSize, std::size_t spaceSize,
                     std::size_t maxBranching = 3);
// A node is a base set with probability 1/4 (always at maxDepth), else a
// union or intersection of 1..fanOut subexpressions.
SetExpr randomExpr(Rng& rng, std::size_t spaceSize, std::size_t maxDepth, std::size_t fanOut);

}  // namespace scottlab
