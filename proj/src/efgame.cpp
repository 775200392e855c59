#include "scottlab/efgame.hpp"

#include <bit>
#include <unordered_map>

#include "scottlab/errors.hpp"

namespace scottlab {

std::string_view playerName(Player p) { return p == Player::I ? "I" : "II"; }

void validateConfig(const EFConfig& cfg, std::size_t universe) {
  const std::size_t b = cfg.capC, d = cfg.capF;
  if (b < 1 || b > universe) {
    throw PreconditionError("cap-c must lie in [1, " + std::to_string(universe) + "], got " +
                            std::to_string(b));
  }
  const std::size_t lower = std::min(2 * b, universe);
  if (d < lower || d > universe) {
    throw PreconditionError("cap-f must lie in [" + std::to_string(lower) + ", " +
                            std::to_string(universe) + "] for cap-c " + std::to_string(b) +
                            ", got " + std::to_string(d));
  }
}

namespace {

// Maps are packed 4 bits per element, 15 meaning undefined.
constexpr std::uint64_t kNone = 15;

std::uint64_t emptyMap(std::size_t n) {
  std::uint64_t f = 0;
  for (std::size_t x = 0; x < n; ++x) f |= kNone << (4 * x);
  return f;
}

inline std::uint64_t image(std::uint64_t f, std::size_t x) { return (f >> (4 * x)) & 15; }

inline std::uint64_t assign(std::uint64_t f, std::size_t x, std::uint64_t y) {
  return (f & ~(std::uint64_t{15} << (4 * x))) | (y << (4 * x));
}

struct Key {
  std::uint64_t map;
  std::uint32_t node;
  std::uint16_t constraint;
  std::uint8_t secondToMove;
  friend bool operator==(const Key&, const Key&) = default;
};

struct KeyHash {
  std::size_t operator()(const Key& k) const {
    std::uint64_t h = k.map * 0x9E3779B97F4A7C15ull;
    h ^= (std::uint64_t{k.node} << 17) ^ (std::uint64_t{k.constraint} << 1) ^ k.secondToMove;
    h ^= h >> 29;
    h *= 0xBF58476D1CE4E5B9ull;
    return static_cast<std::size_t>(h ^ (h >> 32));
  }
};

class Solver {
 public:
  Solver(const FiniteStructure& m, const FiniteStructure& n, const EFConfig& cfg,
         std::size_t budget)
      : m_(m), n_(n), cfg_(cfg), size_(m.universe()), budget_(budget) {
    full_ = static_cast<std::uint32_t>((1u << size_) - 1);
  }

  Player solve() {
    return firstToMove(cfg_.tree.root(), 0, emptyMap(size_)) ? Player::I : Player::II;
  }

  std::size_t explored() const { return memo_.size(); }

 private:
  // True iff I wins from here, I to move at node p.
  bool firstToMove(NodeId p, std::uint32_t c, std::uint64_t f) {
    const Tree& t = cfg_.tree;
    if (t.isLeaf(p)) return false;  // f is a partial isomorphism by construction
    const Key key{f, p, static_cast<std::uint16_t>(c), 0};
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    charge();
    bool win = false;
    const std::uint32_t free = full_ & ~c;
    for (NodeId q : t.children(p)) {
      // Subsets of the free points, at most capC of them.
      for (std::uint32_t add = free;; add = (add - 1) & free) {
        if (static_cast<std::size_t>(std::popcount(add)) <= cfg_.capC &&
            !secondToMove(q, c | add, f)) {
          win = true;
          break;
        }
        if (add == 0) break;
      }
      if (win) break;
    }
    memo_.emplace(key, win);
    return win;
  }

  // True iff II wins from here, II to move after I went to q demanding c.
  bool secondToMove(NodeId q, std::uint32_t c, std::uint64_t f) {
    const Key key{f, q, static_cast<std::uint16_t>(c), 1};
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    charge();
    std::uint32_t dom = 0, ran = 0;
    for (std::size_t x = 0; x < size_; ++x) {
      if (auto y = image(f, x); y != kNone) {
        dom |= 1u << x;
        ran |= 1u << y;
      }
    }
    bool win = false;
    extend(q, c, f, dom, ran, 0, cfg_.capF, win);
    memo_.emplace(key, win);
    return win;
  }

  // Decides elements x, x+1, ... outside the original domain; sets win when
  // some completed extension leads to a II win.
  void extend(NodeId q, std::uint32_t c, std::uint64_t f, std::uint32_t dom, std::uint32_t ran,
              std::size_t x, std::size_t budgetLeft, bool& win) {
    if (win) return;
    while (x < size_ && (dom >> x & 1)) ++x;
    // Demanded points still missing from the domain must come from x.. on.
    const std::uint32_t upcoming = x < 32 ? ~((1u << x) - 1) : 0;
    const std::uint32_t missingDom = c & ~dom;
    if ((missingDom & ~upcoming) != 0) return;
    const std::uint32_t missingRan = c & ~ran;
    const std::size_t freeLeft = std::popcount(full_ & upcoming & ~dom);
    const std::size_t reach = std::min(budgetLeft, freeLeft);
    if (static_cast<std::size_t>(std::popcount(missingDom)) > reach ||
        static_cast<std::size_t>(std::popcount(missingRan)) > reach) {
      return;
    }
    if (x >= size_) {
      win = !firstToMove(q, c, f);
      return;
    }
    if (!(c >> x & 1)) extend(q, c, f, dom, ran, x + 1, budgetLeft, win);
    if (budgetLeft == 0) return;
    for (std::uint64_t y = 0; y < size_ && !win; ++y) {
      if (ran >> y & 1) continue;
      if (!consistent(f, dom, x, y)) continue;
      extend(q, c, assign(f, x, y), dom | (1u << x), ran | (1u << y), x + 1, budgetLeft - 1,
             win);
    }
  }

  // Adding x -> y to the partial isomorphism f keeps it one: check every
  // tuple over dom ∪ {x} that mentions x.
  bool consistent(std::uint64_t f, std::uint32_t dom, std::size_t x, std::uint64_t y) {
    std::vector<Elem>& src = scratchSrc_;
    std::vector<Elem>& dst = scratchDst_;
    src.clear();
    dst.clear();
    src.push_back(static_cast<Elem>(x));
    dst.push_back(static_cast<Elem>(y));
    for (std::size_t z = 0; z < size_; ++z) {
      if (dom >> z & 1) {
        src.push_back(static_cast<Elem>(z));
        dst.push_back(static_cast<Elem>(image(f, z)));
      }
    }
    const auto& sig = m_.signature();
    const std::size_t pts = src.size();
    for (std::size_t r = 0; r < sig.size(); ++r) {
      const std::size_t k = sig[r].arity;
      idx_.assign(k, 0);
      while (true) {
        bool mentions = false;
        std::size_t cm = 0, cn = 0, scale = 1;
        for (std::size_t i = 0; i < k; ++i) {
          mentions |= idx_[i] == 0;
          cm += src[idx_[i]] * scale;
          cn += dst[idx_[i]] * scale;
          scale *= size_;
        }
        if (mentions && m_.holds(r, cm) != n_.holds(r, cn)) return false;
        std::size_t i = 0;
        while (i < k && ++idx_[i] == pts) idx_[i++] = 0;
        if (i == k) break;
      }
    }
    return true;
  }

  void charge() {
    if (memo_.size() >= budget_) {
      throw ResourceError("EF position budget exceeded after " + std::to_string(memo_.size()) +
                          " positions (budget " + std::to_string(budget_) + ")");
    }
  }

  const FiniteStructure& m_;
  const FiniteStructure& n_;
  const EFConfig& cfg_;
  std::size_t size_;
  std::size_t budget_;
  std::uint32_t full_;
  std::unordered_map<Key, bool, KeyHash> memo_;
  std::vector<Elem> scratchSrc_, scratchDst_;
  std::vector<std::size_t> idx_;
};

}  // namespace

EFResult efWinner(const FiniteStructure& m, const FiniteStructure& n, const EFConfig& cfg,
                  std::size_t positionBudget) {
  requireSameSignature(m, n);
  if (m.universe() != n.universe()) {
    throw PreconditionError("EF game needs equal universes, got " + std::to_string(m.universe()) +
                            " and " + std::to_string(n.universe()));
  }
  if (m.universe() > kMaxGameUniverse) {
    throw ResourceError("EF solver supports universes up to " + std::to_string(kMaxGameUniverse));
  }
  validateConfig(cfg, m.universe());
  if (cfg.tree.isLeaf(cfg.tree.root())) return {Player::II, 1};
  Solver s(m, n, cfg, positionBudget);
  const Player w = s.solve();
  return {w, s.explored()};
}

EFResult efAlpha(const FiniteStructure& m, const FiniteStructure& n, std::size_t alpha,
                 std::size_t capC, std::size_t capF, std::size_t positionBudget) {
  return efWinner(m, n, EFConfig{canonical(alpha), capC, capF}, positionBudget);
}

}  // namespace scottlab
