#pragma once

#include <map>
#include <utility>
#include <vector>

#include "ea/core.hpp"

namespace ea {

/// ord(x) for x = 0: every multiple of 0 exists.
constexpr int kOrdInfinite = -1;

struct AtomTable {
  Bits atoms;
  std::vector<int> ord;  // kOrdInfinite only for 0 on finite carriers
  bool isAtomic = false;
  bool isArchimedean = false;
};

/// Atoms, ord of every element, atomicity and the Archimedean property.
/// ord(x) is computed by iterated sums with a hard stop at the carrier size;
/// multiples of a nonzero x are strictly increasing, so the stop is never hit
/// on a valid instance. The Archimedean test quantifies over nonzero elements
/// (ord(0) is infinite in every effect algebra).
AtomTable atom_analysis(const EffectAlgebra& e, const OrderStructure& ord);

/// k-fold sum of x, or nullopt when it does not exist. k >= 1.
std::optional<int> multiple(const EffectAlgebra& e, int x, int k);

/// x and y are compatible when x v y = x + (y - (x ^ y)).
/// Requires a lattice instance.
bool compatible(const EffectAlgebra& e, const OrderStructure& ord, int x, int y);

struct BlockDecomposition {
  std::vector<Bits> compat;   // pairwise compatibility relation
  std::vector<Bits> blocks;   // maximal pairwise-compatible sets, sorted
  bool isMV = false;
  bool isBlockFinite = true;
  Bits blockIntersection;     // meet of all blocks
  Bits center;                // blockIntersection restricted to sharp elements
};

/// Maximal cliques of the compatibility graph, each re-verified to be a
/// sub-lattice effect algebra (a verification failure is a falsification,
/// not a recoverable condition). Output order: lexicographic by sorted
/// member indices.
BlockDecomposition blocks(const EffectAlgebra& e, const OrderStructure& ord);

/// S(E) = { x : x ^ x' = 0 }, verified to be a sub-lattice effect algebra
/// satisfying the orthomodular law.
Bits sharp_elements(const EffectAlgebra& e, const OrderStructure& ord);

struct Decomposition {
  int target = -1;
  std::vector<std::pair<int, int>> terms;  // (atom, multiplicity), distinct atoms
};

/// Greedy atomic decomposition: repeatedly take the least-index atom below
/// the residual with its maximal multiplicity. The result reconstructs x both
/// as an iterated sum and as a join, and x is sharp exactly when every
/// multiplicity is the order of its atom; all three facts are re-verified and
/// any failure raises FalsificationError. x = 0 yields the empty decomposition.
Decomposition decompose(const EffectAlgebra& e, const OrderStructure& ord,
                        const AtomTable& at, int x);

struct AOWitness {
  int atom;
  int level;                               // 1 <= level <= ord(atom)
  std::vector<std::pair<int, int>> list;   // (atom c, multiplicity j)
};

struct AOReport {
  std::map<int, Bits> perAtom;  // a -> { atoms b : b is not below a' }
  bool isAlmostOrthogonal = true;
  std::map<std::pair<int, int>, AOWitness> witnesses;  // (atom, level)
};

/// Witness sets A_a for every atom together with, per level l, the covering
/// witness list: (b, 1) for every b in A_a other than a itself, plus
/// (a, ord(a)-l+1). The covering property -- x not below (la)' implies some
/// listed jc is below x -- is verified exhaustively.
AOReport almost_orthogonality(const EffectAlgebra& e, const OrderStructure& ord,
                              const AtomTable& at);

/// Compact elements by brute force over all subsets with their joins.
/// Throws CapExceeded instead of guessing beyond caps.subsets.
bool is_compact_element(const EffectAlgebra& e, const OrderStructure& ord,
                        int u, const Caps& caps = {});

/// Strongly compact: u below every common upper bound of D forces a finite
/// subjoin above u. Same brute-force regime as is_compact_element.
bool is_s_compact(const EffectAlgebra& e, const OrderStructure& ord, int u,
                  const Caps& caps = {});

}  // namespace ea
