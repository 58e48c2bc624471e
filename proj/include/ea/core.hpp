#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "ea/errors.hpp"

namespace ea {

using Bits = boost::dynamic_bitset<>;

/// Sentinel for "pair has no sum".
constexpr int kUndefined = -1;

struct ElementId {
  int index = 0;
  std::string label;
};

/// Dense symmetric table of the partial binary sum. Writing (i,j) writes
/// (j,i) as well, so commutativity is structural.
class PartialSumTable {
 public:
  PartialSumTable() = default;
  explicit PartialSumTable(int n) : n_(n), cells_(static_cast<size_t>(n) * n, kUndefined) {}

  int size() const { return n_; }

  bool defined(int i, int j) const { return at(i, j) != kUndefined; }

  /// Value of i+j, or kUndefined.
  int at(int i, int j) const { return cells_[static_cast<size_t>(i) * n_ + j]; }

  void set(int i, int j, int v) {
    cells_[static_cast<size_t>(i) * n_ + j] = static_cast<int16_t>(v);
    cells_[static_cast<size_t>(j) * n_ + i] = static_cast<int16_t>(v);
  }

  void unset(int i, int j) { set(i, j, kUndefined); }

  bool operator==(const PartialSumTable&) const = default;

 private:
  int n_ = 0;
  std::vector<int16_t> cells_;
};

enum class Axiom {
  Structure,      // entry outside carrier, bad bounds: not an axiom violation
  Associativity,  // (a+b)+c defined iff a+(b+c) defined, and then equal
  Supplement,     // every a has exactly one b with a+b = 1
  UnitMinimal,    // 1+a defined forces a = 0
};

const char* axiom_name(Axiom a);

struct Violation {
  Axiom axiom;
  std::array<int, 3> witness{-1, -1, -1};
  std::string detail;
};

struct ValidationReport {
  bool ok = true;
  std::vector<Violation> violations;
};

struct EffectAlgebra {
  std::vector<ElementId> carrier;
  PartialSumTable sum;
  int zero = 0;
  int one = 0;
  bool validated = false;

  int size() const { return static_cast<int>(carrier.size()); }
  const std::string& label(int i) const { return carrier[i].label; }
  std::optional<int> find(const std::string& label) const;

  /// i+j as an element index, or nullopt when undefined.
  std::optional<int> plus(int i, int j) const {
    int v = sum.at(i, j);
    if (v == kUndefined) return std::nullopt;
    return v;
  }
};

/// Builds an algebra from labels and explicit sum triples (index based).
/// Rows x+0=x are filled in implicitly. Contradictory triples throw InputError.
EffectAlgebra make_algebra(std::vector<std::string> labels,
                           const std::vector<std::array<int, 3>>& triples,
                           int zero, int one);

/// Checks axioms on a raw table. With stop_at_first the scan aborts on the
/// first violation (used by sweeps); otherwise every violated instance is
/// listed with a concrete witness.
ValidationReport validate(const PartialSumTable& table, int zero, int one,
                          bool stop_at_first = false);

/// Validates and flips E.validated on success.
ValidationReport validate(EffectAlgebra& e, bool stop_at_first = false);

/// Everything derived from the induced order "a <= b iff a+c = b for some c".
struct OrderStructure {
  std::vector<Bits> up;    // up[a]   = { b : a <= b }
  std::vector<Bits> down;  // down[b] = { a : a <= b }
  std::vector<int> supp;   // the unique a' with a + a' = 1
  std::vector<int> minusTable;  // minusTable[b*n+a] = b-a, only for a <= b
  std::vector<int> meetTable;   // -1 where no meet exists
  std::vector<int> joinTable;
  bool isLattice = false;
  int n = 0;

  bool leq(int a, int b) const { return up[a].test(b); }
  int meet(int a, int b) const { return meetTable[static_cast<size_t>(a) * n + b]; }
  int join(int a, int b) const { return joinTable[static_cast<size_t>(a) * n + b]; }

  /// b - a for a <= b. Asking for an incomparable pair is a usage error,
  /// not an undefined value.
  int minus(int b, int a) const;
};

OrderStructure derive_order(const EffectAlgebra& e);

struct SubAlgebraCheck {
  bool isSubEffectAlgebra = false;
  bool isSublattice = false;  // meaningful only on lattice instances
  std::optional<Violation> witness;
};

/// 1 must lie in q and whenever two of a, b, a+b lie in q, so does the third.
SubAlgebraCheck is_sub_effect_algebra(const EffectAlgebra& e,
                                      const OrderStructure& ord, const Bits& q);

/// Order-reversed algebra on the same carrier: a +* b = (a' + b')'.
EffectAlgebra dual_algebra(const EffectAlgebra& e);

/// Extracts the sub-effect algebra on q as a standalone instance.
/// q must pass is_sub_effect_algebra. Element order is inherited.
EffectAlgebra restrict_to(const EffectAlgebra& e, const OrderStructure& ord,
                          const Bits& q);

/// Convenience bundle: a validated instance with its order.
struct Analyzed {
  EffectAlgebra alg;
  OrderStructure ord;
};

Analyzed analyze_base(EffectAlgebra e);

}  // namespace ea
