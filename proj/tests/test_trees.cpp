#include <algorithm>
#include <functional>
#include <numeric>

#include "doctest.h"
#include "scottlab/errors.hpp"
#include "scottlab/random.hpp"
#include "scottlab/trees.hpp"

using namespace scottlab;

namespace {

Tree chain(std::size_t edges) {
  TreeBuilder b;
  NodeId p = b.addRoot();
  for (std::size_t i = 0; i < edges; ++i) p = b.addChild(p);
  return std::move(b).build();
}

Tree star(std::size_t leaves) {
  TreeBuilder b;
  const NodeId r = b.addRoot();
  for (std::size_t i = 0; i < leaves; ++i) b.addChild(r);
  return std::move(b).build();
}

// All strictly decreasing sequences over {0..m-1}, in lexicographic order.
std::vector<std::vector<std::size_t>> decreasingSequences(std::size_t m) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur;
  std::function<void(std::size_t)> grow = [&](std::size_t bound) {
    out.push_back(cur);
    for (std::size_t a = 0; a < bound; ++a) {
      cur.push_back(a);
      grow(a);
      cur.pop_back();
    }
  };
  grow(m);
  std::sort(out.begin(), out.end());
  return out;
}

// Plain order-embedding test by trying every injective map.
bool embedsNaive(const Tree& src, const Tree& dst, bool strong) {
  std::vector<NodeId> map(src.size());
  std::function<bool(NodeId)> place = [&](NodeId p) {
    if (p == src.size()) {
      return validateEmbedding(TreeEmbedding{src, dst, map}, strong).ok;
    }
    for (NodeId y = 0; y < dst.size(); ++y) {
      if (std::find(map.begin(), map.begin() + p, y) != map.begin() + p) continue;
      map[p] = y;
      if (place(p + 1)) return true;
    }
    return false;
  };
  return place(0);
}

}  // namespace

TEST_CASE("rank of small trees") {
  CHECK(rank(Tree::singleton()) == 1);
  for (std::size_t k = 0; k < 6; ++k) CHECK(rank(chain(k)) == k + 1);
  CHECK(rank(canonical(2)) == 3);
  const auto r = nodeRanks(canonical(2));
  CHECK(r == std::vector<std::size_t>{2, 0, 1, 0});
}

TEST_CASE("rank of canonical trees") {
  for (std::size_t m = 0; m <= 12; ++m) CHECK(rank(canonical(m)) == m + 1);
}

TEST_CASE("canonical trees list decreasing sequences lexicographically") {
  CHECK(canonical(0).size() == 1);
  const Tree t2 = canonical(2);
  REQUIRE(t2.size() == 4);
  CHECK(canonicalSequence(0).empty());
  CHECK(canonicalSequence(1) == std::vector<std::size_t>{0});
  CHECK(canonicalSequence(2) == std::vector<std::size_t>{1});
  CHECK(canonicalSequence(3) == std::vector<std::size_t>{1, 0});
  for (std::size_t m = 0; m <= 6; ++m) {
    const Tree t = canonical(m);
    const auto seqs = decreasingSequences(m);
    REQUIRE(seqs.size() == t.size());
    for (NodeId id = 0; id < t.size(); ++id) {
      CHECK(canonicalSequence(id) == seqs[id]);
      CHECK(canonicalNode(seqs[id]) == id);
      // Parent is the sequence with its last entry dropped.
      if (id != 0) {
        auto prefix = seqs[id];
        prefix.pop_back();
        CHECK(canonicalNode(prefix) == *t.parent(id));
      }
    }
  }
}

TEST_CASE("canonical respects the node budget") {
  CHECK_THROWS_AS(canonical(20, 1000), ResourceError);
  CHECK(canonical(10, 1024).size() == 1024);
}

TEST_CASE("fromParents rejects malformed parent tables") {
  using P = std::vector<std::optional<NodeId>>;
  CHECK_THROWS_AS(Tree::fromParents(P{}), StructuralError);
  CHECK_THROWS_AS(Tree::fromParents(P{std::nullopt, std::nullopt}), StructuralError);
  CHECK_THROWS_AS(Tree::fromParents(P{std::nullopt, 2u, 1u}), StructuralError);
  CHECK_THROWS_AS(Tree::fromParents(P{1u, 0u}), StructuralError);
  CHECK_THROWS_AS(Tree::fromParents(P{std::nullopt, 5u}), StructuralError);
  const Tree t = Tree::fromParents(P{2u, 2u, std::nullopt});
  CHECK(t.root() == 2);
  CHECK(rank(t) == 2);
}

TEST_CASE("rank is invariant under relabeling") {
  Rng rng(11);
  for (int i = 0; i < 50; ++i) {
    const Tree t = randomTree(rng, 20, 4);
    std::vector<NodeId> perm(t.size());
    std::iota(perm.begin(), perm.end(), 0);
    shuffle(rng, perm);
    const Tree u = relabel(t, perm);
    CHECK(rank(u) == rank(t));
    CHECK(rank(u) >= 1);
  }
}

TEST_CASE("embed: small cases") {
  const TreeEmbedding single = embed(Tree::singleton(), Width(4));
  CHECK(single.target.size() == 1);
  CHECK(single.map == std::vector<NodeId>{0});

  for (std::size_t w = 1; w <= 4; ++w) {
    const TreeEmbedding e = embed(star(w), Width(w));
    CHECK(e.target.size() == (std::size_t{1} << w));
    for (NodeId i = 0; i < w; ++i) CHECK(e.map[i + 1] == canonicalNode(std::vector<std::size_t>{i}));
    CHECK(validateEmbedding(e, true).ok);
  }

  CHECK_THROWS_AS(embed(star(3), Width(2)), PreconditionError);
  CHECK_THROWS_AS(Width(0), PreconditionError);
  CHECK_THROWS_AS(embed(chain(20), Width(1), 1000), ResourceError);
}

TEST_CASE("embed: random trees land in canonical(w * beta)") {
  Rng rng(5);
  int rank4 = 0;
  for (int i = 0; i < 200; ++i) {
    const std::size_t w = 1 + rng.below(3);
    const Tree t = randomTree(rng, 10, w, 4);
    const TreeEmbedding e = embed(t, Width(w));
    CHECK(e.target.size() == (std::size_t{1} << (w * (rank(t) - 1))));
    CHECK(validateEmbedding(e, true).ok);
    if (w == 3 && rank(t) == 4) {
      ++rank4;
      CHECK(e.target.size() == 512);  // canonical(9)
      CHECK(bruteForceEmbed(t, e.target, {16, 512}).has_value());
    }
  }
  CHECK(rank4 > 0);
}

TEST_CASE("validateEmbedding") {
  const Tree t = canonical(3);
  std::vector<NodeId> id(t.size());
  std::iota(id.begin(), id.end(), 0);
  CHECK(validateEmbedding({t, t, id}).ok);
  CHECK(validateEmbedding({t, t, id}, true).ok);

  auto collapsed = id;
  collapsed[2] = 1;
  const auto bad = validateEmbedding({t, t, collapsed});
  CHECK_FALSE(bad.ok);
  REQUIRE(bad.witness.has_value());
  CHECK(*bad.witness == std::pair<NodeId, NodeId>{1, 2});

  // chain of one edge onto <> and <1,0>: an embedding, not a strong one.
  const Tree c = chain(1);
  CHECK(validateEmbedding({c, canonical(2), {0, 3}}).ok);
  CHECK_FALSE(validateEmbedding({c, canonical(2), {0, 3}}, true).ok);
  // Incomparable nodes must stay incomparable.
  CHECK_FALSE(validateEmbedding({star(2), canonical(2), {0, 2, 3}}).ok);
  CHECK_THROWS_AS(validateEmbedding({c, canonical(2), {0}}), StructuralError);
  CHECK_THROWS_AS(validateEmbedding({c, canonical(2), {0, 9}}), StructuralError);
}

TEST_CASE("bruteForceEmbed: fixed cases") {
  CHECK(bruteForceEmbed(Tree::singleton(), canonical(3)).has_value());
  CHECK_FALSE(bruteForceEmbed(star(3), canonical(2)).has_value());
  auto e = bruteForceEmbed(chain(2), canonical(2));
  REQUIRE(e.has_value());
  CHECK(e->map == std::vector<NodeId>{0, 2, 3});
  CHECK(validateEmbedding(*e).ok);
  CHECK_THROWS_AS(bruteForceEmbed(chain(9), canonical(2)), ResourceError);
  CHECK_THROWS_AS(bruteForceEmbed(chain(2), canonical(7)), ResourceError);
}

TEST_CASE("bruteForceEmbed agrees with trying every map") {
  Rng rng(3);
  for (int i = 0; i < 150; ++i) {
    const Tree src = randomTree(rng, 5, 3);
    const Tree dst = randomTree(rng, 7, 3);
    const auto found = bruteForceEmbed(src, dst);
    CHECK(found.has_value() == embedsNaive(src, dst, false));
    if (found) CHECK(validateEmbedding(*found).ok);
  }
}

TEST_CASE("witnessTree shape and lower bound") {
  const Tree s = witnessTree(Width(3), 1);
  CHECK(s.size() == 4);
  CHECK(rank(s) == 2);
  CHECK(s.children(s.root()).size() == 3);
  const Tree t = witnessTree(Width(2), 2);
  CHECK(t.size() == 7);
  CHECK(rank(t) == 3);
  CHECK_FALSE(bruteForceEmbed(s, canonical(2)).has_value());
  CHECK(bruteForceEmbed(s, canonical(3)).has_value());
  for (std::size_t w = 1; w <= 2; ++w) {
    for (std::size_t beta = 1; beta <= 2; ++beta) {
      const Tree x = witnessTree(Width(w), beta);
      CHECK(rank(x) == beta + 1);
      for (std::size_t a = 0; a < w * beta; ++a) CHECK_FALSE(bruteForceEmbed(x, canonical(a)).has_value());
      CHECK(bruteForceEmbed(x, canonical(w * beta)).has_value());
    }
  }
  CHECK_THROWS_AS(witnessTree(Width(10), 6, 1000), ResourceError);
}

TEST_CASE("minimalCanonicalOrder matches exhaustive strong embedding search") {
  Rng rng(8);
  for (int i = 0; i < 60; ++i) {
    const Tree t = randomTree(rng, 4, 3);
    const std::size_t m = minimalCanonicalOrder(t);
    CHECK(embedsNaive(t, canonical(m), true));
    if (m > 0) CHECK_FALSE(embedsNaive(t, canonical(m - 1), true));
    const auto e = strongEmbedCanonical(t, m + 1);
    REQUIRE(e.has_value());
    CHECK(validateEmbedding(*e, true).ok);
    if (m > 0) CHECK_FALSE(strongEmbedCanonical(t, m - 1).has_value());
  }
}
