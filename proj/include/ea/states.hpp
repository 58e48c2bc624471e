#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ea/core.hpp"
#include "ea/linear.hpp"
#include "ea/structure.hpp"

namespace ea {

/// A candidate or actual state: one exact rational per element.
struct State {
  RatVec values;

  bool operator==(const State&) const = default;
};

struct StateCheck {
  bool ok = true;
  std::string reason;               // "range", "zero", "one", "additivity"
  std::array<int, 3> witness{-1, -1, -1};
};

/// Exact check of the state conditions; the first violated constraint is
/// reported with its witness.
StateCheck is_state(const EffectAlgebra& e, const State& s);

/// The linear system whose solutions inside the unit box are the states.
struct StatePolytope {
  int vars = 0;
  RatMat rows;                        // deduplicated equalities, anchors first
  RatVec rhs;
  std::vector<std::string> rowNames;  // "anchor:0", "sum:a+b=1", "pin:x"
};

StatePolytope build_state_polytope(const EffectAlgebra& e);

/// Inconsistency evidence: a rational combination of polytope rows whose
/// supremum over the unit box falls short of the combined right-hand side.
struct UnsatCertificate {
  RatVec rowMultipliers;
  std::string note;
};

struct StateSearch {
  std::optional<State> state;                  // lexicographically least
  std::optional<UnsatCertificate> certificate;
  int affineDim = 0;
};

/// Feasibility of the state polytope; the witness is the lexicographically
/// least state in element order. UNSAT is a legitimate outcome.
StateSearch find_state(const EffectAlgebra& e);

/// Internal entry point shared with extensions: extra pin rows force values.
StateSearch solve_state_polytope(const EffectAlgebra& e, StatePolytope p);

/// Every vertex of the state polytope, deduplicated and sorted.
std::vector<State> extreme_states(const EffectAlgebra& e, const Caps& caps = {});

struct ExtensionProblem {
  Bits sub;                       // the sub-effect algebra Q
  RatVec given;                   // values on Q (meaningful where sub is set)
  bool feasible = false;
  std::optional<State> witness;   // lexicographically least extension
  std::optional<UnsatCertificate> certificate;
  bool fastPathApplicable = false;
  bool fastPathHit = false;
};

/// Extends a state given on a sub-effect algebra Q to all of E, deciding by
/// exact feasibility. The atom-wise candidate w(ka) = (k/ord(a)) * w(ord(a)a)
/// is evaluated as a fast-path statistic and re-checked by is_state; it is
/// never trusted as a proof.
ExtensionProblem extend_state(const EffectAlgebra& e, const OrderStructure& ord,
                              const AtomTable& at, const Bits& q, const RatVec& on_q);

/// E1 = { x : x or x' is a finite sum of atoms }, verified to be a
/// sub-lattice effect algebra. On a finite atomic instance this is all of E.
Bits e1_subalgebra(const EffectAlgebra& e, const OrderStructure& ord,
                   const AtomTable& at);

std::string rational_to_string(const Rational& r);
Rational rational_from_string(const std::string& s);

}  // namespace ea
