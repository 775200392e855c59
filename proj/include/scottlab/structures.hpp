#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace scottlab {

using Elem = std::uint32_t;
using Tuple = std::vector<Elem>;
// Functional by construction; injectivity is checked where it matters.
using PartialMap = std::map<Elem, Elem>;

struct Relation {
  std::string name;
  std::size_t arity = 1;
  friend bool operator==(const Relation&, const Relation&) = default;
};

class Signature {
 public:
  Signature() = default;
  // Throws StructuralError on duplicate names or zero arity.
  explicit Signature(std::vector<Relation> relations);

  std::size_t size() const { return relations_.size(); }
  const Relation& operator[](std::size_t i) const { return relations_[i]; }
  const std::vector<Relation>& relations() const { return relations_; }
  std::optional<std::size_t> indexOf(const std::string& name) const;

  friend bool operator==(const Signature&, const Signature&) = default;

 private:
  std::vector<Relation> relations_;
};

// Universe {0,...,n-1}; relation i is stored as its set of tuples plus a
// membership table indexed by sum t_k n^k.
class FiniteStructure {
 public:
  // Throws StructuralError on out-of-range elements or arity mismatches.
  FiniteStructure(Signature sig, std::size_t universe,
                  std::vector<std::set<Tuple>> relations);

  const Signature& signature() const { return sig_; }
  std::size_t universe() const { return n_; }
  const std::set<Tuple>& tuples(std::size_t rel) const { return rels_[rel]; }
  bool holds(std::size_t rel, const Tuple& t) const;
  bool holds(std::size_t rel, std::size_t code) const { return table_[rel][code]; }
  std::size_t tupleCode(const Tuple& t) const;

  friend bool operator==(const FiniteStructure& a, const FiniteStructure& b) {
    return a.sig_ == b.sig_ && a.n_ == b.n_ && a.rels_ == b.rels_;
  }

 private:
  Signature sig_;
  std::size_t n_;
  std::vector<std::set<Tuple>> rels_;
  std::vector<std::vector<bool>> table_;
};

// Throws PreconditionError when the signatures differ.
void requireSameSignature(const FiniteStructure& m, const FiniteStructure& n);

// f injective and every tuple over dom(f) is in R^m iff its image is in R^n.
bool isPartialIso(const FiniteStructure& m, const FiniteStructure& n, const PartialMap& f);

inline constexpr std::size_t kIsoSearchBudget = 8;

// A bijection m -> n (as a permutation vector) preserving every relation, or
// nullopt. Backtracking in ascending element order with occurrence-profile
// pruning.
std::optional<std::vector<Elem>> isomorphic(const FiniteStructure& m, const FiniteStructure& n,
                                            std::size_t maxUniverse = kIsoSearchBudget);

// Image of s under the permutation perm (element x becomes perm[x]).
FiniteStructure permute(const FiniteStructure& s, const std::vector<Elem>& perm);

// Unary P = {0,...,p-1} on universe n.
FiniteStructure pmodel(std::size_t n, std::size_t p);
// Binary E_0..E_{levels-1} on leafSize * branching^levels elements; x E_d y
// iff x and y agree after dividing by leafSize * branching^d.
FiniteStructure nestedEq(std::size_t levels, std::size_t branching, std::size_t leafSize);
// Each tuple is included independently with the given probability.
FiniteStructure randomStructure(std::uint64_t seed, const Signature& sig, std::size_t n,
                                double density);

// Tagged disjoint union on 2k elements: the signature gains a unary tag as
// its last relation (named "P", or "P'" etc. if taken) holding the evens;
// m lives on the evens via x -> 2x and n on the odds via x -> 2x+1.
FiniteStructure pairStructure(const FiniteStructure& m, const FiniteStructure& n);
// Inverse of pairStructure. The last relation is the tag; throws
// PreconditionError unless it is unary and exactly half the universe, and
// StructuralError on tuples mixing tagged and untagged elements.
std::pair<FiniteStructure, FiniteStructure> decodePair(const FiniteStructure& a);

}  // namespace scottlab
