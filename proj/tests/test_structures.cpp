#include <algorithm>
#include <numeric>

#include "doctest.h"
#include "scottlab/errors.hpp"
#include "scottlab/io.hpp"
#include "scottlab/random.hpp"
#include "scottlab/structures.hpp"

using namespace scottlab;

namespace {

bool isomorphicByAllPermutations(const FiniteStructure& a, const FiniteStructure& b) {
  if (a.universe() != b.universe()) return false;
  std::vector<Elem> perm(a.universe());
  std::iota(perm.begin(), perm.end(), 0);
  do {
    if (permute(a, perm) == b) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

PartialMap asMap(const std::vector<Elem>& bijection) {
  PartialMap f;
  for (Elem x = 0; x < bijection.size(); ++x) f.emplace(x, bijection[x]);
  return f;
}

const Signature kGraphTag({{"E", 2}, {"Q", 1}});

}  // namespace

TEST_CASE("parse and serialize structures") {
  const std::string text =
      R"({"signature":[{"name":"P","arity":1}],"universe":4,"relations":{"P":[[0]]}})";
  const FiniteStructure s = parseStructure(text);
  CHECK(s.universe() == 4);
  CHECK(s.tuples(0) == std::set<Tuple>{{0}});
  CHECK(serializeStructure(s) ==
        R"({"relations":{"P":[[0]]},"signature":[{"arity":1,"name":"P"}],"universe":4})"
        "\n");

  const std::string messy =
      R"({"universe":3,"relations":{"E":[[2,1],[0,1],[2,1]]},"signature":[{"arity":2,"name":"E"}]})";
  const FiniteStructure t = parseStructure(messy);
  CHECK(serializeStructure(t) ==
        R"({"relations":{"E":[[0,1],[2,1]]},"signature":[{"arity":2,"name":"E"}],"universe":3})"
        "\n");
  CHECK(parseStructure(serializeStructure(t)) == t);
}

TEST_CASE("parse errors name the problem") {
  auto message = [](const std::string& text) {
    try {
      parseStructure(text);
    } catch (const ParseError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  const std::string outOfRange =
      message(R"({"signature":[{"name":"P","arity":1}],"universe":4,"relations":{"P":[[4]]}})");
  CHECK(outOfRange.find("element out of range") != std::string::npos);
  CHECK(outOfRange.find("P") != std::string::npos);
  CHECK(message(R"({"signature":[{"name":"E","arity":2}],"universe":2,"relations":{"E":[[1]]}})")
            .find("arity") != std::string::npos);
  CHECK(message(R"({"signature":[],"universe":2,"relations":{"F":[[1]]}})").find("F") !=
        std::string::npos);
  CHECK(message(R"({"signature":[{"name":"P","arity":1}]})").find("universe") != std::string::npos);
  CHECK(message("{not json").find("malformed") != std::string::npos);
  CHECK(message(R"({"signature":[{"name":"P","arity":1},{"name":"P","arity":2}],"universe":1})")
            .find("duplicate") != std::string::npos);
}

TEST_CASE("isPartialIso") {
  const FiniteStructure m = pmodel(4, 1), n = pmodel(4, 2);
  CHECK(isPartialIso(m, n, {}));
  CHECK(isPartialIso(m, m, {{0, 0}, {1, 1}, {2, 2}, {3, 3}}));
  CHECK_FALSE(isPartialIso(m, n, {{0, 3}}));
  CHECK(isPartialIso(m, n, {{0, 1}, {2, 3}}));
  CHECK_FALSE(isPartialIso(m, n, {{2, 3}, {3, 3}}));  // not injective
  CHECK_THROWS_AS(isPartialIso(m, FiniteStructure(kGraphTag, 4, {{}, {}}), {}), PreconditionError);

  const FiniteStructure g(Signature({{"E", 2}}), 3, {{{0, 1}}});
  CHECK(isPartialIso(g, g, {{0, 0}, {1, 1}}));
  CHECK_FALSE(isPartialIso(g, g, {{0, 1}, {1, 0}}));
}

TEST_CASE("partial isomorphisms invert and restrict") {
  Rng rng(31);
  int positives = 0;
  for (int i = 0; i < 300; ++i) {
    const std::size_t n = 1 + rng.below(4);
    const FiniteStructure a = randomStructure(rng.next(), kGraphTag, n, 0.4);
    const FiniteStructure b = randomStructure(rng.next(), kGraphTag, n, 0.4);
    PartialMap f;
    for (Elem x = 0; x < n; ++x) {
      if (rng.chance(0.6)) f.emplace(x, static_cast<Elem>(rng.below(n)));
    }
    if (!isPartialIso(a, b, f)) continue;
    ++positives;
    PartialMap inverse;
    for (auto [x, y] : f) inverse.emplace(y, x);
    CHECK(isPartialIso(b, a, inverse));
    PartialMap part;
    for (auto [x, y] : f) {
      if (rng.chance(0.5)) part.emplace(x, y);
    }
    CHECK(isPartialIso(a, b, part));
  }
  CHECK(positives > 20);
}

TEST_CASE("isomorphic agrees with trying every bijection") {
  Rng rng(32);
  int found = 0;
  for (int i = 0; i < 300; ++i) {
    const std::size_t n = 1 + rng.below(5);
    const FiniteStructure a = randomStructure(rng.next(), kGraphTag, n, 0.3);
    const FiniteStructure b =
        rng.chance(0.5) ? randomStructure(rng.next(), kGraphTag, n, 0.3) : [&] {
          std::vector<Elem> perm(n);
          std::iota(perm.begin(), perm.end(), 0);
          shuffle(rng, perm);
          return permute(a, perm);
        }();
    const auto f = isomorphic(a, b);
    CHECK(f.has_value() == isomorphicByAllPermutations(a, b));
    if (f) {
      ++found;
      CHECK(permute(a, *f) == b);
      CHECK(isPartialIso(a, b, asMap(*f)));
    }
  }
  CHECK(found > 100);
  CHECK_THROWS_AS(isomorphic(pmodel(9, 1), pmodel(9, 1)), ResourceError);
  CHECK_FALSE(isomorphic(pmodel(3, 1), pmodel(4, 1)).has_value());
}

TEST_CASE("isomorphism is an equivalence on a corpus") {
  std::vector<FiniteStructure> corpus;
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    corpus.push_back(randomStructure(seed, Signature({{"E", 2}}), 3, 0.3));
  }
  for (const auto& a : corpus) {
    CHECK(isomorphic(a, a).has_value());
    for (const auto& b : corpus) {
      const auto f = isomorphic(a, b);
      CHECK(f.has_value() == isomorphic(b, a).has_value());
      if (!f) continue;
      for (const auto& c : corpus) {
        const auto g = isomorphic(b, c);
        if (!g) continue;
        std::vector<Elem> composed(a.universe());
        for (Elem x = 0; x < a.universe(); ++x) composed[x] = (*g)[(*f)[x]];
        CHECK(permute(a, composed) == c);
      }
    }
  }
}

TEST_CASE("pmodels are isomorphic iff their P sizes agree") {
  for (std::size_t n = 1; n <= 5; ++n) {
    for (std::size_t p = 0; p <= n; ++p) {
      for (std::size_t q = 0; q <= n; ++q) {
        const auto a = pmodel(n, p);
        const auto b = permute(pmodel(n, q), [&] {
          std::vector<Elem> rev(n);
          for (Elem x = 0; x < n; ++x) rev[x] = static_cast<Elem>(n - 1 - x);
          return rev;
        }());
        CHECK(isomorphic(a, b).has_value() == (p == q));
      }
    }
  }
}

TEST_CASE("generators") {
  const auto p = pmodel(4, 1);
  CHECK(p.tuples(0) == std::set<Tuple>{{0}});
  CHECK_THROWS_AS(pmodel(2, 3), PreconditionError);

  const auto e = nestedEq(1, 2, 2);
  CHECK(e.universe() == 4);
  CHECK(e.signature()[0].name == "E0");
  CHECK(e.tuples(0) == std::set<Tuple>{{0, 0}, {0, 1}, {1, 0}, {1, 1}, {2, 2}, {2, 3}, {3, 2}, {3, 3}});

  const auto deep = nestedEq(3, 2, 2);
  CHECK(deep.universe() == 16);
  for (std::size_t d = 0; d + 1 < 3; ++d) {
    // E_d refines E_{d+1}, and each E_{d+1} class holds two E_d classes.
    for (const Tuple& t : deep.tuples(d)) CHECK(deep.holds(d + 1, t));
    CHECK(deep.tuples(d + 1).size() == 2 * deep.tuples(d).size());
  }
  for (Elem x = 0; x < 16; ++x) {
    for (Elem y = 0; y < 16; ++y) CHECK(deep.holds(0, Tuple{x, y}) == (x / 2 == y / 2));
  }

  const auto r1 = randomStructure(1, kGraphTag, 5, 0.5);
  CHECK(serializeStructure(r1) == serializeStructure(randomStructure(1, kGraphTag, 5, 0.5)));
  CHECK_FALSE(r1 == randomStructure(2, kGraphTag, 5, 0.5));
  CHECK(randomStructure(3, kGraphTag, 4, 0.0).tuples(0).empty());
  CHECK(randomStructure(3, kGraphTag, 4, 1.0).tuples(0).size() == 16);
  CHECK_THROWS_AS(randomStructure(3, kGraphTag, 4, 1.5), PreconditionError);
}

TEST_CASE("pair structures") {
  Rng rng(33);
  for (int i = 0; i < 100; ++i) {
    const std::size_t k = 1 + rng.below(4);
    const auto m = randomStructure(rng.next(), kGraphTag, k, 0.4);
    const auto n = randomStructure(rng.next(), kGraphTag, k, 0.4);
    const auto a = pairStructure(m, n);
    CHECK(a.universe() == 2 * k);
    const auto& sig = a.signature();
    CHECK(sig.size() == 3);
    CHECK(sig[2].name == "P");
    for (const Tuple& t : a.tuples(2)) CHECK(t[0] % 2 == 0);
    CHECK(a.tuples(2).size() == k);
    for (std::size_t r = 0; r < 2; ++r) {
      for (const Tuple& t : a.tuples(r)) {
        for (Elem x : t) CHECK(x % 2 == t[0] % 2);  // no mixed tuples
      }
    }
    const auto [l, rgt] = decodePair(a);
    CHECK(l == m);
    CHECK(rgt == n);
    const auto [l2, r2] = decodePair(pairStructure(m, m));
    CHECK(l2 == m);
    CHECK(r2 == m);
  }

  // The tag avoids names already in use.
  const auto tagged = pairStructure(pmodel(2, 1), pmodel(2, 0));
  CHECK(tagged.signature()[1].name == "P'");

  CHECK_THROWS_AS(decodePair(pmodel(4, 1)), PreconditionError);
  CHECK_THROWS_AS(decodePair(FiniteStructure(kGraphTag, 2, {{{0, 1}}, {{0}}})), StructuralError);
  CHECK_THROWS_AS(pairStructure(pmodel(2, 1), pmodel(3, 1)), PreconditionError);
}

TEST_CASE("pair structures respect isomorphism") {
  Rng rng(34);
  for (int i = 0; i < 60; ++i) {
    const std::size_t k = 1 + rng.below(3);
    const auto m = randomStructure(rng.next(), kGraphTag, k, 0.4);
    const auto n = randomStructure(rng.next(), kGraphTag, k, 0.4);
    std::vector<Elem> p1(k), p2(k);
    std::iota(p1.begin(), p1.end(), 0);
    std::iota(p2.begin(), p2.end(), 0);
    shuffle(rng, p1);
    shuffle(rng, p2);
    const auto a = pairStructure(m, n);
    const auto b = pairStructure(permute(m, p1), permute(n, p2));
    CHECK(isomorphic(a, b).has_value());
  }
}
