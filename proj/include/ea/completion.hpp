#pragma once

#include <vector>

#include "ea/core.hpp"

namespace ea {

/// A finite poset given by its reflexive order relation.
struct Poset {
  std::vector<Bits> down;  // down[x] = { y : y <= x }

  int size() const { return static_cast<int>(down.size()); }
  static Poset of(const OrderStructure& ord) { return Poset{ord.down}; }
};

/// One cut: a Galois-closed (lower set, upper set) pair.
struct Cut {
  Bits lower;
  Bits upper;
};

struct DMCompletion {
  std::vector<Cut> cuts;         // sorted by (size, bit value) of the lower set
  std::vector<int> embedding;    // source element -> cut index
  bool isIsomorphicToSource = false;

  int size() const { return static_cast<int>(cuts.size()); }
  bool leq(int c, int d) const { return cuts[c].lower.is_subset_of(cuts[d].lower); }
  int meet(int c, int d) const;
  int join(int c, int d) const;
  int indexOfLower(const Bits& lower) const;

  /// Cuts covering the bottom cut.
  Bits atoms() const;
};

/// Cut completion: all intersections of principal ideals, plus the full
/// carrier, ordered by inclusion. Works for any finite poset; the source is
/// recovered exactly when it was already a complete lattice.
DMCompletion dm_complete(const Poset& p);

/// The completion of a finite lattice instance reproduces it: the embedding
/// is onto and atoms are carried to atoms.
bool mc_check(const EffectAlgebra& e, const OrderStructure& ord);

struct ClosednessReport {
  Bits subset;
  bool joinsClosed = false;      // joins of subsets of D stay in D
  bool meetsClosed = false;
  bool completeSublattice = false;

  bool allEqual() const {
    return joinsClosed == meetsClosed && meetsClosed == completeSublattice;
  }
};

/// The three finite closedness conditions for a sub-lattice effect algebra D,
/// evaluated independently. On a complete instance they must agree.
ClosednessReport closedness(const EffectAlgebra& e, const OrderStructure& ord,
                            const Bits& d, const Caps& caps = {});

}  // namespace ea
