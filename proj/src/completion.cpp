#include "ea/completion.hpp"

#include <algorithm>
#include <set>

namespace ea {

namespace {

Bits upper_bounds(const Poset& p, const Bits& s) {
  const int n = p.size();
  Bits ub(n);
  ub.set();
  for (int x = static_cast<int>(s.find_first()); x != -1;
       x = static_cast<int>(s.find_next(x))) {
    Bits above(n);
    for (int y = 0; y < n; ++y)
      if (p.down[y].test(x)) above.set(y);
    ub &= above;
  }
  return ub;
}

Bits lower_bounds(const Poset& p, const Bits& s) {
  const int n = p.size();
  Bits lb(n);
  lb.set();
  for (int x = static_cast<int>(s.find_first()); x != -1;
       x = static_cast<int>(s.find_next(x)))
    lb &= p.down[x];
  return lb;
}

bool cut_order(const Bits& a, const Bits& b) {
  if (a.count() != b.count()) return a.count() < b.count();
  return a < b;
}

}  // namespace

int DMCompletion::indexOfLower(const Bits& lower) const {
  for (size_t i = 0; i < cuts.size(); ++i)
    if (cuts[i].lower == lower) return static_cast<int>(i);
  return -1;
}

int DMCompletion::meet(int c, int d) const {
  return indexOfLower(cuts[c].lower & cuts[d].lower);
}

int DMCompletion::join(int c, int d) const {
  // least cut whose lower set contains both
  int best = -1;
  for (size_t i = 0; i < cuts.size(); ++i) {
    if (!cuts[c].lower.is_subset_of(cuts[i].lower)) continue;
    if (!cuts[d].lower.is_subset_of(cuts[i].lower)) continue;
    if (best < 0 || cuts[i].lower.is_subset_of(cuts[best].lower)) best = static_cast<int>(i);
  }
  return best;
}

Bits DMCompletion::atoms() const {
  // cut 0 is the bottom: its lower set is contained in every other
  const int m = size();
  Bits result(m);
  for (int c = 1; c < m; ++c) {
    bool atom = true;
    for (int d = 1; d < m; ++d)
      if (d != c && leq(d, c)) { atom = false; break; }
    if (atom) result.set(c);
  }
  return result;
}

DMCompletion dm_complete(const Poset& p) {
  const int n = p.size();
  std::set<Bits> lowers;
  Bits full(n);
  full.set();
  lowers.insert(full);
  for (int x = 0; x < n; ++x) lowers.insert(p.down[x]);

  // close under pairwise intersection
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<Bits> snapshot(lowers.begin(), lowers.end());
    for (size_t i = 0; i < snapshot.size(); ++i)
      for (size_t j = i + 1; j < snapshot.size(); ++j)
        if (lowers.insert(snapshot[i] & snapshot[j]).second) grew = true;
  }

  DMCompletion dm;
  for (const Bits& l : lowers) {
    Bits u = upper_bounds(p, l);
    if (lower_bounds(p, u) != l)
      throw std::logic_error("intersection of ideals is not Galois closed");
    dm.cuts.push_back({l, u});
  }
  std::sort(dm.cuts.begin(), dm.cuts.end(),
            [](const Cut& a, const Cut& b) { return cut_order(a.lower, b.lower); });

  dm.embedding.assign(n, -1);
  for (int x = 0; x < n; ++x) {
    dm.embedding[x] = dm.indexOfLower(p.down[x]);
    if (dm.embedding[x] < 0) throw std::logic_error("principal ideal lost in completion");
  }
  dm.isIsomorphicToSource = dm.size() == n;
  return dm;
}

bool mc_check(const EffectAlgebra& e, const OrderStructure& ord) {
  if (!e.validated || !ord.isLattice)
    throw InputError("completion identity check needs a validated lattice instance");
  DMCompletion dm = dm_complete(Poset::of(ord));
  if (!dm.isIsomorphicToSource) return false;

  Bits dmAtoms = dm.atoms();
  Bits expected(dm.size());
  const int n = e.size();
  for (int a = 0; a < n; ++a)
    if (a != e.zero && ord.down[a].count() == 2) expected.set(dm.embedding[a]);
  return dmAtoms == expected;
}

ClosednessReport closedness(const EffectAlgebra& e, const OrderStructure& ord,
                            const Bits& d, const Caps& caps) {
  if (!ord.isLattice) throw InputError("closedness needs a lattice instance");
  SubAlgebraCheck chk = is_sub_effect_algebra(e, ord, d);
  if (!chk.isSubEffectAlgebra || !chk.isSublattice)
    throw InputError("closedness applies to sub-lattice effect algebras only");

  ClosednessReport rep;
  rep.subset = d;

  // binary closure decides all finite subset joins/meets; the empty join and
  // meet are the bounds, which every sub-effect algebra contains
  rep.joinsClosed = true;
  rep.meetsClosed = true;
  for (int a = static_cast<int>(d.find_first()); a != -1;
       a = static_cast<int>(d.find_next(a)))
    for (int b = static_cast<int>(d.find_first()); b != -1;
         b = static_cast<int>(d.find_next(b))) {
      if (!d.test(ord.join(a, b))) rep.joinsClosed = false;
      if (!d.test(ord.meet(a, b))) rep.meetsClosed = false;
    }

  // the complete-sublattice condition, by literal subset sweep when feasible
  if (d.count() <= caps.subsets) {
    rep.completeSublattice = true;
    std::vector<int> members;
    for (int a = static_cast<int>(d.find_first()); a != -1;
         a = static_cast<int>(d.find_next(a)))
      members.push_back(a);
    const size_t k = members.size();
    for (uint64_t mask = 1; mask < (uint64_t{1} << k); ++mask) {
      int j = -1, m = -1;
      for (size_t v = 0; v < k; ++v) {
        if (!(mask & (uint64_t{1} << v))) continue;
        j = j < 0 ? members[v] : ord.join(j, members[v]);
        m = m < 0 ? members[v] : ord.meet(m, members[v]);
      }
      if (!d.test(j) || !d.test(m)) { rep.completeSublattice = false; break; }
    }
  } else {
    rep.completeSublattice = rep.joinsClosed && rep.meetsClosed;
  }
  return rep;
}

}  // namespace ea
