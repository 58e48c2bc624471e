#include "ea/linear.hpp"

#include <algorithm>
#include <numeric>

namespace ea {

ReducedSystem reduce_equalities(const RatMat& a, const RatVec& b,
                                bool track_multipliers) {
  ReducedSystem rs;
  const int m = static_cast<int>(a.size());
  rs.cols = m ? static_cast<int>(a[0].size()) : 0;
  const int n = rs.cols;

  RatMat rows = a;
  RatVec rhs = b;
  RatMat mult;
  if (track_multipliers) {
    mult.assign(m, RatVec(m, 0));
    for (int i = 0; i < m; ++i) mult[i][i] = 1;
  }

  int r = 0;
  for (int col = 0; col < n && r < m; ++col) {
    int pivot = -1;
    for (int i = r; i < m; ++i)
      if (rows[i][col] != 0) { pivot = i; break; }
    if (pivot < 0) continue;
    std::swap(rows[pivot], rows[r]);
    std::swap(rhs[pivot], rhs[r]);
    if (track_multipliers) std::swap(mult[pivot], mult[r]);
    Rational inv = rows[r][col];
    for (auto& v : rows[r]) v /= inv;
    rhs[r] /= inv;
    if (track_multipliers)
      for (auto& v : mult[r]) v /= inv;
    for (int i = 0; i < m; ++i) {
      if (i == r || rows[i][col] == 0) continue;
      Rational f = rows[i][col];
      for (int j = 0; j < n; ++j) rows[i][j] -= f * rows[r][j];
      rhs[i] -= f * rhs[r];
      if (track_multipliers)
        for (int j = 0; j < m; ++j) mult[i][j] -= f * mult[r][j];
    }
    rs.pivotCol.push_back(col);
    ++r;
  }

  for (int i = r; i < m; ++i)
    if (rhs[i] != 0) {
      rs.consistent = false;
      if (track_multipliers) rs.certificate = mult[i];
      return rs;
    }

  rs.rows.assign(rows.begin(), rows.begin() + r);
  rs.rhs.assign(rhs.begin(), rhs.begin() + r);
  if (track_multipliers) rs.multipliers.assign(mult.begin(), mult.begin() + r);
  return rs;
}

AffineForm affine_solutions(const ReducedSystem& rs) {
  if (!rs.consistent) throw std::logic_error("affine form of an inconsistent system");
  AffineForm f;
  const int n = rs.cols;
  std::vector<bool> isPivot(n, false);
  for (int c : rs.pivotCol) isPivot[c] = true;
  for (int c = 0; c < n; ++c)
    if (!isPivot[c]) f.freeCols.push_back(c);

  f.particular.assign(n, 0);
  for (size_t i = 0; i < rs.rows.size(); ++i) f.particular[rs.pivotCol[i]] = rs.rhs[i];

  for (int fc : f.freeCols) {
    RatVec v(n, 0);
    v[fc] = 1;
    for (size_t i = 0; i < rs.rows.size(); ++i) v[rs.pivotCol[i]] = -rs.rows[i][fc];
    f.basis.push_back(std::move(v));
  }
  return f;
}

namespace {

enum class VarStatus { Basic, AtLo, AtHi };

struct Tableau {
  // columns: structural 0..n-1, artificial n..n+m-1 (hi unbounded)
  RatMat t;                // m x ncols, equals Binv * Afull
  RatVec value;            // current value of every column variable
  RatVec lo, hi;
  std::vector<bool> hasHi;
  std::vector<int> basis;  // column basic in each live row
  std::vector<bool> liveRow;
  std::vector<VarStatus> status;
  int n = 0, m = 0;

  int ncols() const { return n + m; }
};

// One priced minimization pass with Bland's rule. Returns false on an
// unbounded ray, which cannot happen for the objectives used here.
bool run_simplex(Tableau& tb, const RatVec& c, const std::vector<bool>& may_enter) {
  const int ncols = tb.ncols();
  while (true) {
    // reduced costs z = c - cB * T
    RatVec z = c;
    for (int i = 0; i < tb.m; ++i) {
      if (!tb.liveRow[i]) continue;
      const Rational& cb = c[tb.basis[i]];
      if (cb == 0) continue;
      for (int j = 0; j < ncols; ++j)
        if (tb.t[i][j] != 0) z[j] -= cb * tb.t[i][j];
    }

    int enter = -1;
    bool fromLo = true;
    for (int j = 0; j < ncols; ++j) {
      if (!may_enter[j] || tb.status[j] == VarStatus::Basic) continue;
      if (tb.hasHi[j] && tb.lo[j] == tb.hi[j]) continue;  // pinned, no slack
      if (tb.status[j] == VarStatus::AtLo && z[j] < 0) { enter = j; fromLo = true; break; }
      if (tb.status[j] == VarStatus::AtHi && z[j] > 0) { enter = j; fromLo = false; break; }
    }
    if (enter < 0) return true;  // optimal

    // ratio test; delta is how far the entering variable moves from its bound
    std::optional<Rational> bestDelta;
    int leaveRow = -1;       // -1 means bound flip of the entering column
    int leaveVar = enter;
    bool leaveToLo = false;
    if (tb.hasHi[enter]) bestDelta = tb.hi[enter] - tb.lo[enter];

    for (int i = 0; i < tb.m; ++i) {
      if (!tb.liveRow[i]) continue;
      const Rational& a = tb.t[i][enter];
      if (a == 0) continue;
      int bv = tb.basis[i];
      // basic value moves by -a*delta (entering from lo) or +a*delta (from hi)
      Rational rate = fromLo ? -a : a;
      std::optional<Rational> limit;
      bool toLo = false;
      if (rate < 0) {  // decreasing, limited by lo
        limit = (tb.value[bv] - tb.lo[bv]) / -rate;
        toLo = true;
      } else if (tb.hasHi[bv]) {  // increasing, limited by hi
        limit = (tb.hi[bv] - tb.value[bv]) / rate;
        toLo = false;
      }
      if (!limit) continue;
      if (!bestDelta || *limit < *bestDelta || (*limit == *bestDelta && bv < leaveVar)) {
        bestDelta = *limit;
        leaveRow = i;
        leaveVar = bv;
        leaveToLo = toLo;
      }
    }
    if (!bestDelta) return false;  // unbounded

    const Rational delta = *bestDelta;
    // apply movement to variable values
    if (fromLo)
      tb.value[enter] += delta;
    else
      tb.value[enter] -= delta;
    for (int i = 0; i < tb.m; ++i) {
      if (!tb.liveRow[i] || tb.t[i][enter] == 0) continue;
      Rational move = tb.t[i][enter] * delta;
      tb.value[tb.basis[i]] += fromLo ? -move : move;
    }

    if (leaveRow == -1) {
      tb.status[enter] = fromLo ? VarStatus::AtHi : VarStatus::AtLo;
      continue;  // bound flip only
    }

    // pivot: entering becomes basic in leaveRow
    Rational piv = tb.t[leaveRow][enter];
    for (auto& v : tb.t[leaveRow]) v /= piv;
    for (int i = 0; i < tb.m; ++i) {
      if (!tb.liveRow[i] || i == leaveRow || tb.t[i][enter] == 0) continue;
      Rational f = tb.t[i][enter];
      for (int j = 0; j < tb.ncols(); ++j) tb.t[i][j] -= f * tb.t[leaveRow][j];
    }
    tb.status[leaveVar] = leaveToLo ? VarStatus::AtLo : VarStatus::AtHi;
    tb.value[leaveVar] = leaveToLo ? tb.lo[leaveVar] : tb.hi[leaveVar];
    tb.status[enter] = VarStatus::Basic;
    tb.basis[leaveRow] = enter;
  }
}

}  // namespace

LPOutcome solve_bounded(BoundedLP lp, bool lex_minimize) {
  LPOutcome out;
  const int m = static_cast<int>(lp.a.size());
  const int n = m ? static_cast<int>(lp.a[0].size()) : static_cast<int>(lp.lo.size());

  for (int j = 0; j < n; ++j)
    if (lp.hasHi[j] && lp.hi[j] < lp.lo[j]) {
      // empty box: certificate not expressible through rows; callers pre-check
      throw std::logic_error("solve_bounded called with an empty box");
    }

  Tableau tb;
  tb.n = n;
  tb.m = m;
  tb.t.assign(m, RatVec(n + m, 0));
  tb.lo = lp.lo;
  tb.hi = lp.hi;
  tb.hasHi = lp.hasHi;
  tb.lo.resize(n + m, 0);
  tb.hi.resize(n + m, 0);
  tb.hasHi.resize(n + m, false);
  tb.value.assign(n + m, Rational(0));
  tb.status.assign(n + m, VarStatus::AtLo);
  tb.basis.assign(m, -1);
  tb.liveRow.assign(m, true);

  for (int j = 0; j < n; ++j) {
    tb.value[j] = lp.lo[j];
    tb.status[j] = VarStatus::AtLo;
  }
  RatVec sigma(m, 1);
  for (int i = 0; i < m; ++i) {
    Rational residual = lp.b[i];
    for (int j = 0; j < n; ++j)
      if (lp.a[i][j] != 0) residual -= lp.a[i][j] * tb.value[j];
    if (residual < 0) sigma[i] = -1;
    for (int j = 0; j < n; ++j) tb.t[i][j] = sigma[i] * lp.a[i][j];
    tb.t[i][n + i] = 1;
    tb.basis[i] = n + i;
    tb.status[n + i] = VarStatus::Basic;
    tb.value[n + i] = residual * sigma[i];
  }

  // phase 1: minimize the artificial total
  RatVec c1(n + m, 0);
  for (int i = 0; i < m; ++i) c1[n + i] = 1;
  std::vector<bool> enterAll(n + m, true);
  if (!run_simplex(tb, c1, enterAll))
    throw std::logic_error("phase-1 objective unbounded");

  Rational artTotal = 0;
  for (int i = 0; i < m; ++i) artTotal += tb.value[n + i];
  if (artTotal > 0) {
    // dual values from the artificial columns of the final tableau
    RatVec z = c1;
    for (int i = 0; i < m; ++i) {
      const Rational& cb = c1[tb.basis[i]];
      if (cb == 0) continue;
      for (int j = 0; j < n + m; ++j)
        if (tb.t[i][j] != 0) z[j] -= cb * tb.t[i][j];
    }
    out.farkas.assign(m, 0);
    for (int i = 0; i < m; ++i) out.farkas[i] = sigma[i] * (Rational(1) - z[n + i]);
    // verify sup over the box strictly misses y.b
    Rational yb = 0, sup = 0;
    for (int i = 0; i < m; ++i) yb += out.farkas[i] * lp.b[i];
    for (int j = 0; j < n; ++j) {
      Rational w = 0;
      for (int i = 0; i < m; ++i)
        if (lp.a[i][j] != 0) w += out.farkas[i] * lp.a[i][j];
      if (w > 0) {
        if (!lp.hasHi[j]) throw std::logic_error("farkas certificate touches an unbounded column");
        sup += w * lp.hi[j];
      } else if (w < 0) {
        sup += w * lp.lo[j];
      }
    }
    if (!(sup < yb)) throw std::logic_error("farkas certificate failed verification");
    out.feasible = false;
    return out;
  }

  // drive leftover artificials out of the basis or retire their rows
  std::vector<bool> enterStructural(n + m, false);
  for (int j = 0; j < n; ++j) enterStructural[j] = true;
  for (int i = 0; i < m; ++i) {
    if (!tb.liveRow[i] || tb.basis[i] < n) continue;
    int col = -1;
    for (int j = 0; j < n; ++j)
      if (tb.t[i][j] != 0) { col = j; break; }
    if (col < 0) {
      tb.liveRow[i] = false;  // redundant row
      continue;
    }
    // degenerate pivot: the artificial sits at zero, so values do not move
    Rational piv = tb.t[i][col];
    for (auto& v : tb.t[i]) v /= piv;
    for (int k = 0; k < m; ++k) {
      if (!tb.liveRow[k] || k == i || tb.t[k][col] == 0) continue;
      Rational f = tb.t[k][col];
      for (int j = 0; j < n + m; ++j) tb.t[k][j] -= f * tb.t[i][j];
    }
    // the entering structural keeps its current value; record it as basic
    tb.status[tb.basis[i]] = VarStatus::AtLo;
    tb.value[tb.basis[i]] = 0;
    tb.status[col] = VarStatus::Basic;
    tb.basis[i] = col;
  }

  if (lex_minimize) {
    for (int j = 0; j < n; ++j) {
      if (tb.hasHi[j] && tb.lo[j] == tb.hi[j]) continue;
      RatVec c(n + m, 0);
      c[j] = 1;
      if (!run_simplex(tb, c, enterStructural))
        throw std::logic_error("bounded objective reported unbounded");
      tb.lo[j] = tb.value[j];
      tb.hi[j] = tb.value[j];
      tb.hasHi[j] = true;
    }
  }

  out.feasible = true;
  out.point.assign(tb.value.begin(), tb.value.begin() + n);
  return out;
}

std::vector<RatVec> enumerate_vertices(const std::vector<HalfSpace>& cons, int dim,
                                       std::size_t combination_guard) {
  std::vector<RatVec> vertices;
  const int m = static_cast<int>(cons.size());
  if (dim == 0) return vertices;

  // combination count guard
  double combos = 1;
  for (int i = 0; i < dim; ++i) combos *= static_cast<double>(m - i) / (i + 1);
  if (combos > static_cast<double>(combination_guard))
    throw CapExceeded("vertex enumeration would need too many basis combinations");

  std::vector<int> idx(dim);
  std::iota(idx.begin(), idx.end(), 0);
  auto advance = [&]() -> bool {
    int i = dim - 1;
    while (i >= 0 && idx[i] == m - dim + i) --i;
    if (i < 0) return false;
    ++idx[i];
    for (int j = i + 1; j < dim; ++j) idx[j] = idx[j - 1] + 1;
    return true;
  };
  if (m < dim) return vertices;

  std::vector<RatVec> seen;
  do {
    RatMat a(dim, RatVec(dim));
    RatVec b(dim);
    for (int i = 0; i < dim; ++i) {
      a[i] = cons[idx[i]].normal;
      b[i] = cons[idx[i]].offset;
    }
    ReducedSystem rs = reduce_equalities(a, b);
    if (!rs.consistent || static_cast<int>(rs.pivotCol.size()) != dim) continue;
    AffineForm f = affine_solutions(rs);
    const RatVec& t = f.particular;
    bool ok = true;
    for (const HalfSpace& h : cons) {
      Rational lhs = 0;
      for (int j = 0; j < dim; ++j) lhs += h.normal[j] * t[j];
      if (lhs > h.offset) { ok = false; break; }
    }
    if (ok) seen.push_back(t);
  } while (advance());

  std::sort(seen.begin(), seen.end());
  seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
  return seen;
}

}  // namespace ea
