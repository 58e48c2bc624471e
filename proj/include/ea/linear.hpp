#pragma once

#include <optional>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ea/errors.hpp"

namespace ea {

using Rational = boost::multiprecision::cpp_rational;
using RatVec = std::vector<Rational>;
using RatMat = std::vector<RatVec>;

/// Row-reduced equality system Ax = b with multiplier tracking, so every
/// reduced row (and any inconsistency) is an explicit rational combination
/// of the original rows.
struct ReducedSystem {
  bool consistent = true;
  int cols = 0;
  RatMat rows;                 // reduced-echelon A-part
  RatVec rhs;
  std::vector<int> pivotCol;   // per reduced row
  RatMat multipliers;          // reduced row i = multipliers[i] * original rows
  RatVec certificate;          // when inconsistent: combination giving 0 = c, c != 0
};

/// Multiplier tracking costs an m x m matrix; callers that only need it for
/// infeasibility certificates reduce twice, paying only on the failure path.
ReducedSystem reduce_equalities(const RatMat& a, const RatVec& b,
                                bool track_multipliers = false);

/// Solution set of a consistent system as particular + nullspace basis.
struct AffineForm {
  RatVec particular;           // free coordinates at zero
  std::vector<int> freeCols;
  RatMat basis;                // one nullspace vector per free column
};

AffineForm affine_solutions(const ReducedSystem& rs);

/// min c.x subject to Ax = b and lo <= x <= hi (hi entries may be absent).
struct BoundedLP {
  RatMat a;
  RatVec b;
  RatVec lo;
  RatVec hi;
  std::vector<bool> hasHi;
};

struct LPOutcome {
  bool feasible = false;
  RatVec point;    // feasible: lexicographically least point when requested
  RatVec farkas;   // infeasible: y with sup{y.Ax : x in box} < y.b, verified
};

/// Phase-1 feasibility via artificial variables, Bland's rule throughout.
/// With lex_minimize the variables are then minimized one by one in index
/// order, each optimum pinned before the next solve, which yields the unique
/// lexicographically least point of the polytope.
LPOutcome solve_bounded(BoundedLP lp, bool lex_minimize);

/// All vertices of { t : cons[i].normal . t <= cons[i].offset }, found by
/// enumerating d-subsets of constraints with invertible normal systems.
struct HalfSpace {
  RatVec normal;
  Rational offset;
};

std::vector<RatVec> enumerate_vertices(const std::vector<HalfSpace>& cons, int dim,
                                       std::size_t combination_guard);

}  // namespace ea
