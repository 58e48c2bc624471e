#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ea/core.hpp"

namespace ea {

/// n-element chain 0 < a < 2a < ... < 1 with ja + ka = (j+k)a.
EffectAlgebra chain(int n, const std::string& atom_letter = "a");

/// Powerset of k atoms under disjoint union. Atom labels p, q, r, ... with an
/// optional suffix so copies keep distinct labels inside horizontal sums.
EffectAlgebra boolean_algebra(int k, const std::string& suffix = "");

/// Glues the summands at shared 0 and 1; no sums across summands. Summands of
/// size 2 carry nothing and are absorbed with a warning.
EffectAlgebra horizontal_sum(const std::vector<EffectAlgebra>& summands,
                             std::vector<std::string>* warnings = nullptr);

/// Componentwise partial sum on the cartesian product.
EffectAlgebra product(const std::vector<EffectAlgebra>& factors);

EffectAlgebra hsum_of_chains(const std::vector<int>& lengths,
                             std::vector<std::string>* warnings = nullptr);
EffectAlgebra hsum_of_booleans(const std::vector<int>& atom_counts,
                               std::vector<std::string>* warnings = nullptr);

/// All effect algebras of the exact carrier size, up to isomorphism, by
/// axiom-pruned backtracking with canonical-form rejection. Deterministic.
std::vector<EffectAlgebra> enumerate_exact(int n, const Caps& caps = {});

/// Sizes 2..max_size concatenated.
std::vector<EffectAlgebra> enumerate_algebras(int max_size, const Caps& caps = {});

/// Canonical table serialization used for isomorphism rejection: elements are
/// grouped by (height, ord, sum-degree) and the lexicographically least table
/// over the consistent relabelings is taken.
std::vector<int16_t> canonical_key(const EffectAlgebra& e);

// ---------------------------------------------------------------------------
// symbolic families

enum class FamilyKind { ChainSum, BooleanSum, MvChain };

struct SymbolicFamily {
  FamilyKind kind = FamilyKind::MvChain;
  /// Per-summand sizes (chain length / boolean atom count); nullopt means a
  /// countably infinite boolean summand.
  std::vector<std::optional<int>> sizes;
  bool infinitelyManySummands = false;  // sizes[0] is the repeated pattern
  bool everyLengthAtLeastThree = false; // chains: one summand per length >= 3
};

enum class Property {
  Atomic,
  Archimedean,
  Complete,
  BlockFinite,
  AlmostOrthogonal,
  TauIHausdorff,
  TauICompact,
  CompactlyGenerated,
  OContinuous,
  TauEqualities,  // interval, order and function-family topologies coincide
};

const char* property_name(Property p);

enum class Truth { Unknown, True, False };

struct Flag {
  Truth value = Truth::Unknown;
  std::string rule;                   // the rule that concluded the value
  std::vector<Property> hypotheses;   // rule hypotheses, all flagged True
};

struct FamilyVerdict {
  std::map<Property, Flag> flags;

  Truth value(Property p) const {
    auto it = flags.find(p);
    return it == flags.end() ? Truth::Unknown : it->second.value;
  }
};

/// Forward-chaining over one rule per verified result; flags that no rule
/// reaches stay Unknown rather than being guessed.
FamilyVerdict family_analyze(const SymbolicFamily& f);

/// Shape of { x : x or x' is a finite sum of atoms } for a symbolic family.
/// With only finite-element summands it is the whole carrier; an infinite
/// boolean summand restricts it to finite atom joins inside one summand
/// together with their supplements.
enum class FiniteCofiniteExtent { EntireCarrier, WithinSummandOnly };

struct E1Description {
  FiniteCofiniteExtent extent;
  std::string text;
};

E1Description family_finite_cofinite(const SymbolicFamily& f);

struct TruncationParams {
  int summands = 2;
  int atomsPerSummand = 2;  // for countably infinite boolean summands
};

/// Finite witness of an infinite family: first k summands, atom counts capped.
EffectAlgebra family_truncate(const SymbolicFamily& f, const TruncationParams& p,
                              const Caps& caps = {});

// ---------------------------------------------------------------------------
// generator/family spec grammar:  hsum(chain:3 * inf) | hsum(boolean:2, boolean:3) | chain:7

struct SpecTerm {
  bool isChain = true;
  std::optional<int> size;  // nullopt = inf
  bool allLengths = false;  // chains: 'any'
};

struct GenSpec {
  bool isHsum = false;
  std::vector<SpecTerm> terms;
  std::optional<int> repeat;   // for 'term * count'
  bool repeatInfinite = false;
};

GenSpec parse_spec(const std::string& text);

/// Finite specs build concrete instances.
EffectAlgebra instantiate(const GenSpec& spec, const Caps& caps = {},
                          std::vector<std::string>* warnings = nullptr);

/// Any spec can be read as a symbolic family (must be kind-homogeneous).
SymbolicFamily to_family(const GenSpec& spec);

}  // namespace ea
