#include "scottlab/structures.hpp"

#include <algorithm>

#include "scottlab/errors.hpp"
#include "scottlab/random.hpp"

namespace scottlab {

namespace {

// Membership tables are dense; keep them bounded.
constexpr std::size_t kMaxTableSize = std::size_t{1} << 24;

std::string tupleText(const Tuple& t) {
  std::string s = "[";
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + std::to_string(t[i]);
  return s + "]";
}

}  // namespace

Signature::Signature(std::vector<Relation> relations) : relations_(std::move(relations)) {
  for (std::size_t i = 0; i < relations_.size(); ++i) {
    if (relations_[i].arity == 0) {
      throw StructuralError("relation " + relations_[i].name + " has arity 0");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (relations_[j].name == relations_[i].name) {
        throw StructuralError("duplicate relation name " + relations_[i].name);
      }
    }
  }
}

std::optional<std::size_t> Signature::indexOf(const std::string& name) const {
  for (std::size_t i = 0; i < relations_.size(); ++i) {
    if (relations_[i].name == name) return i;
  }
  return std::nullopt;
}

FiniteStructure::FiniteStructure(Signature sig, std::size_t universe,
                                 std::vector<std::set<Tuple>> relations)
    : sig_(std::move(sig)), n_(universe), rels_(std::move(relations)) {
  if (n_ == 0) throw StructuralError("universe must be non-empty");
  if (rels_.size() != sig_.size()) {
    throw StructuralError("structure has " + std::to_string(rels_.size()) +
                          " relations, signature has " + std::to_string(sig_.size()));
  }
  table_.resize(rels_.size());
  for (std::size_t r = 0; r < rels_.size(); ++r) {
    const auto& rel = sig_[r];
    std::size_t cells = 1;
    for (std::size_t k = 0; k < rel.arity; ++k) {
      if (cells > kMaxTableSize / n_) {
        throw StructuralError("relation " + rel.name + ": universe^arity too large");
      }
      cells *= n_;
    }
    table_[r].assign(cells, false);
    for (const Tuple& t : rels_[r]) {
      if (t.size() != rel.arity) {
        throw StructuralError("relation " + rel.name + ": tuple " + tupleText(t) +
                              " has length " + std::to_string(t.size()) + ", arity is " +
                              std::to_string(rel.arity));
      }
      for (Elem x : t) {
        if (x >= n_) {
          throw StructuralError("relation " + rel.name + ": tuple " + tupleText(t) +
                                " element out of range (universe " + std::to_string(n_) + ")");
        }
      }
      table_[r][tupleCode(t)] = true;
    }
  }
}

std::size_t FiniteStructure::tupleCode(const Tuple& t) const {
  std::size_t code = 0;
  for (auto it = t.rbegin(); it != t.rend(); ++it) code = code * n_ + *it;
  return code;
}

bool FiniteStructure::holds(std::size_t rel, const Tuple& t) const {
  return table_[rel][tupleCode(t)];
}

void requireSameSignature(const FiniteStructure& m, const FiniteStructure& n) {
  if (!(m.signature() == n.signature())) {
    throw PreconditionError("structures have different signatures");
  }
}

bool isPartialIso(const FiniteStructure& m, const FiniteStructure& n, const PartialMap& f) {
  requireSameSignature(m, n);
  std::vector<Elem> dom, img;
  std::set<Elem> seen;
  for (const auto& [x, y] : f) {
    if (x >= m.universe() || y >= n.universe()) {
      throw PreconditionError("partial map leaves the universe");
    }
    if (!seen.insert(y).second) return false;
    dom.push_back(x);
    img.push_back(y);
  }
  const auto& sig = m.signature();
  for (std::size_t r = 0; r < sig.size(); ++r) {
    const std::size_t k = sig[r].arity;
    if (dom.empty()) break;
    std::vector<std::size_t> idx(k, 0);
    Tuple a(k), b(k);
    while (true) {
      for (std::size_t i = 0; i < k; ++i) {
        a[i] = dom[idx[i]];
        b[i] = img[idx[i]];
      }
      if (m.holds(r, a) != n.holds(r, b)) return false;
      std::size_t i = 0;
      while (i < k && ++idx[i] == dom.size()) idx[i++] = 0;
      if (i == k) break;
    }
  }
  return true;
}

namespace {

// For each element, how often it occurs at each position of each relation.
std::vector<std::vector<std::size_t>> occurrenceProfiles(const FiniteStructure& s) {
  std::vector<std::vector<std::size_t>> prof(s.universe());
  const auto& sig = s.signature();
  std::size_t width = 0;
  for (const auto& r : sig.relations()) width += r.arity;
  for (auto& p : prof) p.assign(width, 0);
  std::size_t base = 0;
  for (std::size_t r = 0; r < sig.size(); ++r) {
    for (const Tuple& t : s.tuples(r)) {
      for (std::size_t i = 0; i < t.size(); ++i) ++prof[t[i]][base + i];
    }
    base += sig[r].arity;
  }
  return prof;
}

}  // namespace

std::optional<std::vector<Elem>> isomorphic(const FiniteStructure& m, const FiniteStructure& n,
                                            std::size_t maxUniverse) {
  requireSameSignature(m, n);
  if (m.universe() > maxUniverse || n.universe() > maxUniverse) {
    throw ResourceError("isomorphism search budget exceeded: universe " +
                        std::to_string(std::max(m.universe(), n.universe())) + ", budget " +
                        std::to_string(maxUniverse));
  }
  if (m.universe() != n.universe()) return std::nullopt;
  const auto& sig = m.signature();
  for (std::size_t r = 0; r < sig.size(); ++r) {
    if (m.tuples(r).size() != n.tuples(r).size()) return std::nullopt;
  }
  const std::size_t size = m.universe();
  const auto pm = occurrenceProfiles(m);
  const auto pn = occurrenceProfiles(n);

  // Tuples of m grouped by their largest element: they become checkable as
  // soon as that element is mapped. With equal relation sizes, preserving
  // every tuple forward is enough for a bijection.
  std::vector<std::vector<std::pair<std::size_t, const Tuple*>>> byMax(size);
  for (std::size_t r = 0; r < sig.size(); ++r) {
    for (const Tuple& t : m.tuples(r)) {
      byMax[*std::max_element(t.begin(), t.end())].push_back({r, &t});
    }
  }

  std::vector<Elem> map(size, 0);
  std::vector<char> used(size, 0);
  Tuple image;
  auto extend = [&](auto&& self, Elem x) -> bool {
    if (x == size) return true;
    for (Elem y = 0; y < size; ++y) {
      if (used[y] || pm[x] != pn[y]) continue;
      map[x] = y;
      bool ok = true;
      for (const auto& [r, t] : byMax[x]) {
        image.resize(t->size());
        for (std::size_t i = 0; i < t->size(); ++i) image[i] = map[(*t)[i]];
        if (!n.holds(r, image)) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      used[y] = 1;
      if (self(self, x + 1)) return true;
      used[y] = 0;
    }
    return false;
  };
  if (!extend(extend, 0)) return std::nullopt;
  return map;
}

FiniteStructure permute(const FiniteStructure& s, const std::vector<Elem>& perm) {
  if (perm.size() != s.universe()) throw PreconditionError("permutation has wrong size");
  std::vector<std::set<Tuple>> rels(s.signature().size());
  for (std::size_t r = 0; r < rels.size(); ++r) {
    for (Tuple t : s.tuples(r)) {
      for (Elem& x : t) x = perm.at(x);
      rels[r].insert(std::move(t));
    }
  }
  return FiniteStructure(s.signature(), s.universe(), std::move(rels));
}

FiniteStructure pmodel(std::size_t n, std::size_t p) {
  if (n == 0 || p > n) {
    throw PreconditionError("pmodel needs 0 <= p <= n and n >= 1, got n=" + std::to_string(n) +
                            " p=" + std::to_string(p));
  }
  std::set<Tuple> tag;
  for (Elem x = 0; x < p; ++x) tag.insert({x});
  return FiniteStructure(Signature({{"P", 1}}), n, {tag});
}

FiniteStructure nestedEq(std::size_t levels, std::size_t branching, std::size_t leafSize) {
  if (levels == 0 || branching == 0 || leafSize == 0) {
    throw PreconditionError("nestedEq needs levels, branching and leafSize >= 1");
  }
  std::size_t n = leafSize;
  for (std::size_t i = 0; i < levels; ++i) {
    if (n > 4096 / branching) throw PreconditionError("nestedEq universe too large");
    n *= branching;
  }
  std::vector<Relation> rels;
  std::vector<std::set<Tuple>> tuples(levels);
  std::size_t block = leafSize;
  for (std::size_t d = 0; d < levels; ++d) {
    rels.push_back({"E" + std::to_string(d), 2});
    for (Elem x = 0; x < n; ++x) {
      for (Elem y = 0; y < n; ++y) {
        if (x / block == y / block) tuples[d].insert({x, y});
      }
    }
    block *= branching;
  }
  return FiniteStructure(Signature(std::move(rels)), n, std::move(tuples));
}

FiniteStructure randomStructure(std::uint64_t seed, const Signature& sig, std::size_t n,
                                double density) {
  if (n == 0) throw PreconditionError("random structure needs a non-empty universe");
  if (!(density >= 0.0 && density <= 1.0)) {
    throw PreconditionError("density must lie in [0, 1]");
  }
  Rng rng(seed);
  std::vector<std::set<Tuple>> rels(sig.size());
  for (std::size_t r = 0; r < sig.size(); ++r) {
    const std::size_t k = sig[r].arity;
    Tuple t(k, 0);
    while (true) {
      if (rng.chance(density)) rels[r].insert(t);
      std::size_t i = k;
      while (i > 0 && ++t[i - 1] == n) t[--i] = 0;
      if (i == 0) break;
    }
  }
  return FiniteStructure(sig, n, std::move(rels));
}

FiniteStructure pairStructure(const FiniteStructure& m, const FiniteStructure& n) {
  requireSameSignature(m, n);
  if (m.universe() != n.universe()) {
    throw PreconditionError("pairStructure needs equal universes");
  }
  std::string tag = "P";
  while (m.signature().indexOf(tag)) tag += "'";
  std::vector<Relation> rels = m.signature().relations();
  rels.push_back({tag, 1});

  std::vector<std::set<Tuple>> tuples(rels.size());
  for (std::size_t r = 0; r + 1 < rels.size(); ++r) {
    for (Tuple t : m.tuples(r)) {
      for (Elem& x : t) x = 2 * x;
      tuples[r].insert(std::move(t));
    }
    for (Tuple t : n.tuples(r)) {
      for (Elem& x : t) x = 2 * x + 1;
      tuples[r].insert(std::move(t));
    }
  }
  for (Elem x = 0; x < m.universe(); ++x) tuples.back().insert({2 * x});
  return FiniteStructure(Signature(std::move(rels)), 2 * m.universe(), std::move(tuples));
}

std::pair<FiniteStructure, FiniteStructure> decodePair(const FiniteStructure& a) {
  const auto& sig = a.signature();
  if (sig.size() == 0 || sig[sig.size() - 1].arity != 1) {
    throw PreconditionError("decodePair: last relation must be a unary tag");
  }
  const std::size_t tagRel = sig.size() - 1;
  std::vector<char> tagged(a.universe(), 0);
  for (const Tuple& t : a.tuples(tagRel)) tagged[t[0]] = 1;
  const std::size_t count = std::count(tagged.begin(), tagged.end(), 1);
  if (2 * count != a.universe()) {
    throw PreconditionError("decodePair: tag holds " + std::to_string(count) + " of " +
                            std::to_string(a.universe()) +
                            " elements; both parts must have equal size");
  }
  // Order-preserving bijections of the tagged part and its complement onto
  // {0,...,k-1}.
  std::vector<Elem> local(a.universe());
  Elem nextTagged = 0, nextOther = 0;
  for (Elem x = 0; x < a.universe(); ++x) local[x] = tagged[x] ? nextTagged++ : nextOther++;

  std::vector<Relation> rels(sig.relations().begin(), sig.relations().end() - 1);
  std::vector<std::set<Tuple>> left(rels.size()), right(rels.size());
  for (std::size_t r = 0; r < rels.size(); ++r) {
    for (const Tuple& t : a.tuples(r)) {
      const bool side = tagged[t[0]];
      Tuple u;
      for (Elem x : t) {
        if (static_cast<bool>(tagged[x]) != side) {
          throw StructuralError("decodePair: relation " + rels[r].name + " has mixed tuple " +
                                tupleText(t));
        }
        u.push_back(local[x]);
      }
      (side ? left : right)[r].insert(std::move(u));
    }
  }
  Signature base(std::move(rels));
  return {FiniteStructure(base, count, std::move(left)),
          FiniteStructure(base, count, std::move(right))};
}

}  // namespace scottlab
