#include "ea/states.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace ea {

std::string rational_to_string(const Rational& r) {
  std::ostringstream os;
  os << numerator(r);
  if (denominator(r) != 1) os << "/" << denominator(r);
  return os.str();
}

Rational rational_from_string(const std::string& s) {
  auto slash = s.find('/');
  try {
    using Int = boost::multiprecision::cpp_int;
    if (slash == std::string::npos) return Rational(Int(s));
    Int num(s.substr(0, slash));
    Int den(s.substr(slash + 1));
    if (den == 0) throw InputError("rational with zero denominator: " + s);
    return Rational(num, den);
  } catch (const std::runtime_error&) {
    throw InputError("malformed rational: " + s);
  }
}

StateCheck is_state(const EffectAlgebra& e, const State& s) {
  StateCheck res;
  const int n = e.size();
  if (static_cast<int>(s.values.size()) != n) {
    res.ok = false;
    res.reason = "range";
    res.witness = {-1, -1, -1};
    return res;
  }
  for (int x = 0; x < n; ++x)
    if (s.values[x] < 0 || s.values[x] > 1) {
      res.ok = false;
      res.reason = "range";
      res.witness = {x, -1, -1};
      return res;
    }
  if (s.values[e.zero] != 0) {
    res.ok = false;
    res.reason = "zero";
    res.witness = {e.zero, -1, -1};
    return res;
  }
  if (s.values[e.one] != 1) {
    res.ok = false;
    res.reason = "one";
    res.witness = {e.one, -1, -1};
    return res;
  }
  for (int x = 0; x < n; ++x)
    for (int y = x; y < n; ++y) {
      int z = e.sum.at(x, y);
      if (z == kUndefined) continue;
      if (s.values[x] + s.values[y] != s.values[z]) {
        res.ok = false;
        res.reason = "additivity";
        res.witness = {x, y, z};
        return res;
      }
    }
  return res;
}

StatePolytope build_state_polytope(const EffectAlgebra& e) {
  const int n = e.size();
  StatePolytope p;
  p.vars = n;

  auto push_row = [&](RatVec row, Rational rhs, std::string name) {
    p.rows.push_back(std::move(row));
    p.rhs.push_back(std::move(rhs));
    p.rowNames.push_back(std::move(name));
  };

  {
    RatVec row(n, 0);
    row[e.zero] = 1;
    push_row(std::move(row), 0, "anchor:" + e.label(e.zero));
  }
  {
    RatVec row(n, 0);
    row[e.one] = 1;
    push_row(std::move(row), 1, "anchor:" + e.label(e.one));
  }

  std::map<RatVec, int> seen;
  for (int x = 0; x < n; ++x)
    for (int y = x; y < n; ++y) {
      int z = e.sum.at(x, y);
      if (z == kUndefined) continue;
      RatVec row(n, 0);
      row[x] += 1;
      row[y] += 1;
      row[z] -= 1;
      bool allZero = std::all_of(row.begin(), row.end(), [](const Rational& v) { return v == 0; });
      if (allZero) continue;  // x + 0 = x rows carry nothing
      if (seen.emplace(row, 1).second)
        push_row(std::move(row), 0, "sum:" + e.label(x) + "+" + e.label(y) + "=" + e.label(z));
    }
  return p;
}

StateSearch solve_state_polytope(const EffectAlgebra& e, StatePolytope p) {
  StateSearch out;
  const int n = p.vars;
  ReducedSystem rs = reduce_equalities(p.rows, p.rhs);
  if (!rs.consistent) {
    ReducedSystem tracked = reduce_equalities(p.rows, p.rhs, true);
    out.certificate =
        UnsatCertificate{tracked.certificate, "equality rows are inconsistent"};
    return out;
  }
  AffineForm form = affine_solutions(rs);
  out.affineDim = static_cast<int>(form.freeCols.size());

  if (out.affineDim == 0) {
    for (size_t i = 0; i < rs.rows.size(); ++i) {
      const Rational& v = rs.rhs[i];
      if (v < 0 || v > 1) {
        // the reduced row pins variable pivotCol[i] outside the unit box
        ReducedSystem tracked = reduce_equalities(p.rows, p.rhs, true);
        RatVec mult(p.rows.size(), 0);
        for (size_t k = 0; k < p.rows.size(); ++k) mult[k] = tracked.multipliers[i][k];
        if (v < 0)
          for (auto& q : mult) q = -q;
        out.certificate = UnsatCertificate{
            std::move(mult), "forced value outside [0,1] for variable " +
                                 e.label(rs.pivotCol[i])};
        return out;
      }
    }
    out.state = State{form.particular};
    return out;
  }

  BoundedLP lp;
  lp.a = rs.rows;
  lp.b = rs.rhs;
  lp.lo.assign(n, 0);
  lp.hi.assign(n, 1);
  lp.hasHi.assign(n, true);
  LPOutcome lpOut = solve_bounded(lp, /*lex_minimize=*/true);
  if (!lpOut.feasible) {
    // mapped through the row-reduction multipliers back to the original rows
    ReducedSystem tracked = reduce_equalities(p.rows, p.rhs, true);
    RatVec mult(p.rows.size(), 0);
    for (size_t i = 0; i < rs.rows.size(); ++i)
      for (size_t k = 0; k < p.rows.size(); ++k)
        mult[k] += lpOut.farkas[i] * tracked.multipliers[i][k];
    out.certificate = UnsatCertificate{std::move(mult), "box-infeasible equality system"};
    return out;
  }
  out.state = State{lpOut.point};
  return out;
}

StateSearch find_state(const EffectAlgebra& e) {
  StateSearch s = solve_state_polytope(e, build_state_polytope(e));
  if (s.state) {
    StateCheck chk = is_state(e, *s.state);
    if (!chk.ok) throw std::logic_error("solver returned a non-state: " + chk.reason);
  }
  return s;
}

std::vector<State> extreme_states(const EffectAlgebra& e, const Caps& caps) {
  const int n = e.size();
  if (static_cast<size_t>(n) > caps.vertices)
    throw CapExceeded("carrier exceeds the vertex enumeration cap");
  StatePolytope p = build_state_polytope(e);
  ReducedSystem rs = reduce_equalities(p.rows, p.rhs);
  std::vector<State> result;
  if (!rs.consistent) return result;
  AffineForm form = affine_solutions(rs);
  const int d = static_cast<int>(form.freeCols.size());

  if (d == 0) {
    State s{form.particular};
    if (is_state(e, s).ok) result.push_back(std::move(s));
    return result;
  }

  std::vector<HalfSpace> cons;
  for (int j = 0; j < n; ++j) {
    RatVec dir(d, 0);
    bool nonzero = false;
    for (int f = 0; f < d; ++f) {
      dir[f] = form.basis[f][j];
      if (dir[f] != 0) nonzero = true;
    }
    if (!nonzero) {
      if (form.particular[j] < 0 || form.particular[j] > 1) return result;
      continue;
    }
    HalfSpace upper{dir, Rational(1) - form.particular[j]};
    for (auto& v : dir) v = -v;
    HalfSpace lower{dir, form.particular[j]};
    cons.push_back(std::move(upper));
    cons.push_back(std::move(lower));
  }

  std::vector<RatVec> ts = enumerate_vertices(cons, d, 5'000'000);
  std::vector<RatVec> points;
  for (const RatVec& t : ts) {
    RatVec v = form.particular;
    for (int f = 0; f < d; ++f) {
      if (t[f] == 0) continue;
      for (int j = 0; j < n; ++j) v[j] += form.basis[f][j] * t[f];
    }
    points.push_back(std::move(v));
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  for (RatVec& v : points) {
    State s{std::move(v)};
    StateCheck chk = is_state(e, s);
    if (!chk.ok) throw std::logic_error("vertex enumeration produced a non-state");
    result.push_back(std::move(s));
  }
  return result;
}

ExtensionProblem extend_state(const EffectAlgebra& e, const OrderStructure& ord,
                              const AtomTable& at, const Bits& q, const RatVec& on_q) {
  ExtensionProblem prob;
  prob.sub = q;
  prob.given = on_q;

  SubAlgebraCheck chk = is_sub_effect_algebra(e, ord, q);
  if (!chk.isSubEffectAlgebra)
    throw InputError("extension base is not a sub-effect algebra");

  // the given values must form a state on Q itself
  EffectAlgebra sub = restrict_to(e, ord, q);
  {
    RatVec subVals;
    for (int a = static_cast<int>(q.find_first()); a != -1;
         a = static_cast<int>(q.find_next(a)))
      subVals.push_back(on_q[a]);
    StateCheck sc = is_state(sub, State{subVals});
    if (!sc.ok) throw InputError("given values are not a state on Q: " + sc.reason);
  }

  // fast path: smear atom multiples from the values of their full multiples
  if (ord.isLattice && at.isAtomic && at.isArchimedean) {
    bool applicable = true;
    RatVec cand(e.size(), 0);
    for (int x = 0; x < e.size() && applicable; ++x) {
      if (x == e.zero) continue;
      Decomposition dec = decompose(e, ord, at, x);
      Rational v = 0;
      for (auto [a, k] : dec.terms) {
        int full = *multiple(e, a, at.ord[a]);
        if (!q.test(full)) { applicable = false; break; }
        v += Rational(k, at.ord[a]) * on_q[full];
      }
      cand[x] = v;
    }
    prob.fastPathApplicable = applicable;
    if (applicable) {
      State candidate{cand};
      bool extends = true;
      for (int a = static_cast<int>(q.find_first()); a != -1;
           a = static_cast<int>(q.find_next(a)))
        if (cand[a] != on_q[a]) { extends = false; break; }
      prob.fastPathHit = extends && is_state(e, candidate).ok;
    }
  }

  StatePolytope p = build_state_polytope(e);
  for (int a = static_cast<int>(q.find_first()); a != -1;
       a = static_cast<int>(q.find_next(a))) {
    RatVec row(e.size(), 0);
    row[a] = 1;
    p.rows.push_back(std::move(row));
    p.rhs.push_back(on_q[a]);
    p.rowNames.push_back("pin:" + e.label(a));
  }
  StateSearch search = solve_state_polytope(e, std::move(p));
  prob.feasible = search.state.has_value();
  if (search.state) {
    StateCheck sc = is_state(e, *search.state);
    if (!sc.ok) throw std::logic_error("extension solver returned a non-state");
    prob.witness = std::move(search.state);
  } else {
    prob.certificate = std::move(search.certificate);
  }
  return prob;
}

Bits e1_subalgebra(const EffectAlgebra& e, const OrderStructure& ord,
                   const AtomTable& at) {
  if (!ord.isLattice || !at.isAtomic || !at.isArchimedean)
    throw InputError("finite-element analysis needs an Archimedean atomic lattice instance");
  const int n = e.size();
  Bits finite(n);
  for (int x = 0; x < n; ++x) {
    if (x == e.zero) {
      finite.set(x);
      continue;
    }
    Decomposition dec = decompose(e, ord, at, x);  // a sum of atom multiples
    if (!dec.terms.empty()) finite.set(x);
  }
  Bits e1(n);
  for (int x = 0; x < n; ++x)
    if (finite.test(x) || finite.test(ord.supp[x])) e1.set(x);

  SubAlgebraCheck chk = is_sub_effect_algebra(e, ord, e1);
  if (!chk.isSubEffectAlgebra || !chk.isSublattice)
    throw FalsificationError("finite-or-cofinite elements fail to form a sub-lattice effect algebra");
  return e1;
}

}  // namespace ea
