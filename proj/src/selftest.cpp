#include "scottlab/selftest.hpp"

#include <algorithm>
#include <numeric>

#include "scottlab/borelcode.hpp"
#include "scottlab/efgame.hpp"
#include "scottlab/random.hpp"
#include "scottlab/structures.hpp"
#include "scottlab/trees.hpp"

namespace scottlab {

namespace {

void tally(SuiteResult& r, bool agree) {
  ++r.checked;
  if (!agree) ++r.mismatches;
}

SuiteResult canonicalRanks() {
  SuiteResult r{"canonical-rank"};
  for (std::size_t m = 0; m <= 10; ++m) tally(r, rank(canonical(m)) == m + 1);
  return r;
}

SuiteResult embeddings(Rng& rng) {
  SuiteResult r{"tree-embed"};
  for (int i = 0; i < 40; ++i) {
    const std::size_t w = 2 + rng.below(2);
    const Tree t = randomTree(rng, 8, w, 4);
    const TreeEmbedding e = embed(t, Width(w));
    tally(r, validateEmbedding(e, true).ok);
    if (e.target.size() <= 64) tally(r, bruteForceEmbed(t, e.target).has_value());
  }
  for (std::size_t w = 1; w <= 2; ++w) {
    for (std::size_t beta = 1; beta <= 2; ++beta) {
      const Tree t = witnessTree(Width(w), beta);
      for (std::size_t a = 0; a <= w * beta; ++a) {
        const bool found = bruteForceEmbed(t, canonical(a)).has_value();
        tally(r, found == (a == w * beta));
      }
    }
  }
  return r;
}

SuiteResult codeGames(Rng& rng) {
  SuiteResult r{"code-game"};
  for (int i = 0; i < 40; ++i) {
    const BorelCode c = randomCode(rng, 10, 1 + rng.below(4));
    const PointSet s = codedSet(c);
    for (std::size_t x = 0; x < c.space.size(); ++x) tally(r, s[x] == strategyEnumSolve(c, x));
  }
  return r;
}

SuiteResult roundTrips(Rng& rng) {
  SuiteResult r{"code-expr"};
  for (int i = 0; i < 40; ++i) {
    const std::size_t size = 1 + rng.below(6);
    const SetExpr e = randomExpr(rng, size, 3, 3);
    const BorelCode c = codeFromExpr(e, PointSpace::indexed(size));
    tally(r, codedSet(c) == evalExpr(e) && rank(c.tree) <= classifyExpr(e).pi + 1);
    const BorelCode d = randomCode(rng, 10, size);
    const SetExpr back = exprFromCode(d);
    tally(r, evalExpr(back) == codedSet(d) && classifyExpr(back).pi + 1 <= rank(d.tree));
    const BorelCode padded = padToCanonical(d, minimalCanonicalOrder(d.tree));
    tally(r, codedSet(padded) == codedSet(d));
  }
  return r;
}

SuiteResult isoSearch(Rng& rng) {
  SuiteResult r{"struct-iso"};
  const Signature sig({{"E", 2}, {"P", 1}});
  for (int i = 0; i < 30; ++i) {
    const std::size_t n = 1 + rng.below(4);
    const FiniteStructure a = randomStructure(rng.next(), sig, n, 0.4);
    const FiniteStructure b = randomStructure(rng.next(), sig, n, 0.4);
    std::vector<Elem> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    bool brute = false;
    do {
      if (permute(a, perm) == b) brute = true;
    } while (!brute && std::next_permutation(perm.begin(), perm.end()));
    tally(r, isomorphic(a, b).has_value() == brute);
    shuffle(rng, perm);
    tally(r, isomorphic(a, permute(a, perm)).has_value());
  }
  return r;
}

std::vector<FiniteStructure> tinyCorpus() {
  const Signature graph({{"E", 2}});
  std::vector<FiniteStructure> out;
  for (std::size_t p = 0; p <= 2; ++p) out.push_back(pmodel(2, p));
  for (std::uint64_t seed = 1; seed <= 3; ++seed) out.push_back(randomStructure(seed, graph, 2, 0.5));
  return out;
}

SuiteResult efOracle() {
  SuiteResult r{"ef-oracle"};
  const std::vector<Tree> trees{Tree::singleton(), canonical(1), canonical(2)};
  const auto corpus = tinyCorpus();
  for (const auto& m : corpus) {
    for (const auto& n : corpus) {
      if (!(m.signature() == n.signature())) continue;
      for (const Tree& t : trees) {
        for (std::size_t b = 1; b <= 2; ++b) {
          const EFConfig cfg{t, b, 2};
          tally(r, efWinner(m, n, cfg).winner == efWinnerBrute(m, n, cfg));
        }
      }
    }
  }
  return r;
}

SuiteResult winnerMatrices() {
  SuiteResult r{"winner-matrix"};
  std::vector<FiniteStructure> members;
  for (std::size_t p = 0; p <= 3; ++p) members.push_back(pmodel(3, p));
  for (std::size_t alpha = 0; alpha <= 3; ++alpha) {
    const EFConfig cfg{canonical(alpha), 1, 2};
    tally(r, winnerMatrixSerial(members, cfg) == winnerMatrixParallel(members, cfg));
  }
  return r;
}

}  // namespace

std::vector<SuiteResult> runSelftest(std::uint64_t seed) {
  Rng rng(seed);
  std::vector<SuiteResult> out;
  out.push_back(canonicalRanks());
  out.push_back(embeddings(rng));
  out.push_back(codeGames(rng));
  out.push_back(roundTrips(rng));
  out.push_back(isoSearch(rng));
  out.push_back(efOracle());
  out.push_back(winnerMatrices());
  return out;
}

}  // namespace scottlab
