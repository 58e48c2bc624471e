#include "ea/structure.hpp"

#include <algorithm>

namespace ea {

namespace {

/// Sorted-member-list order on element sets.
bool set_less(const Bits& a, const Bits& b) {
  for (size_t i = 0; i < a.size(); ++i) {
    if (a.test(i) != b.test(i)) return a.test(i);
  }
  return false;
}

}  // namespace

std::optional<int> multiple(const EffectAlgebra& e, int x, int k) {
  if (k < 1) throw InputError("multiple requires k >= 1");
  int acc = x;
  for (int i = 1; i < k; ++i) {
    auto next = e.plus(acc, x);
    if (!next) return std::nullopt;
    acc = *next;
  }
  return acc;
}

AtomTable atom_analysis(const EffectAlgebra& e, const OrderStructure& ord) {
  const int n = e.size();
  AtomTable at;
  at.atoms = Bits(n);
  at.ord.assign(n, 0);

  for (int a = 0; a < n; ++a)
    if (a != e.zero && ord.down[a].count() == 2) at.atoms.set(a);

  at.isArchimedean = true;
  for (int x = 0; x < n; ++x) {
    if (x == e.zero) {
      at.ord[x] = kOrdInfinite;
      continue;
    }
    int acc = x, k = 1;
    while (true) {
      auto next = e.plus(acc, x);
      if (!next) break;
      acc = *next;
      if (++k > n)
        throw std::logic_error("unbounded multiples of a nonzero element on a finite carrier");
    }
    at.ord[x] = k;
  }

  at.isAtomic = true;
  for (int x = 0; x < n; ++x)
    if (x != e.zero && !(at.atoms & ord.down[x]).any()) at.isAtomic = false;
  return at;
}

bool compatible(const EffectAlgebra& e, const OrderStructure& ord, int x, int y) {
  if (!ord.isLattice) throw InputError("compatibility needs a lattice instance");
  int m = ord.meet(x, y);
  int d = ord.minus(y, m);
  auto s = e.plus(x, d);
  return s && *s == ord.join(x, y);
}

namespace {

void bron_kerbosch(const std::vector<Bits>& adj, Bits r, Bits p, Bits x,
                   std::vector<Bits>& out) {
  if (!p.any() && !x.any()) {
    out.push_back(r);
    return;
  }
  // pivot: vertex of p|x with most neighbours in p
  Bits px = p | x;
  int pivot = -1;
  size_t best = 0;
  for (int v = static_cast<int>(px.find_first()); v != -1;
       v = static_cast<int>(px.find_next(v))) {
    size_t deg = (adj[v] & p).count();
    if (pivot < 0 || deg > best) { pivot = v; best = deg; }
  }
  Bits cand = p & ~adj[pivot];
  for (int v = static_cast<int>(cand.find_first()); v != -1;
       v = static_cast<int>(cand.find_next(v))) {
    Bits r2 = r; r2.set(v);
    bron_kerbosch(adj, r2, p & adj[v], x & adj[v], out);
    p.reset(v);
    x.set(v);
  }
}

}  // namespace

BlockDecomposition blocks(const EffectAlgebra& e, const OrderStructure& ord) {
  if (!ord.isLattice) throw InputError("blocks need a lattice instance");
  const int n = e.size();
  BlockDecomposition bd;
  bd.compat.assign(n, Bits(n));
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b)
      if (compatible(e, ord, a, b)) {
        bd.compat[a].set(b);
        bd.compat[b].set(a);
      }

  std::vector<Bits> adj = bd.compat;  // clique search ignores loops
  for (int a = 0; a < n; ++a) adj[a].reset(a);
  Bits all(n);
  all.set();
  bron_kerbosch(adj, Bits(n), all, Bits(n), bd.blocks);
  std::sort(bd.blocks.begin(), bd.blocks.end(), set_less);

  Bits covered(n);
  bd.blockIntersection = Bits(n);
  bd.blockIntersection.set();
  for (const Bits& m : bd.blocks) {
    covered |= m;
    bd.blockIntersection &= m;
    SubAlgebraCheck chk = is_sub_effect_algebra(e, ord, m);
    if (!chk.isSubEffectAlgebra || !chk.isSublattice)
      throw FalsificationError("a block is not a sub-lattice effect algebra");
    for (int a = static_cast<int>(m.find_first()); a != -1;
         a = static_cast<int>(m.find_next(a)))
      for (int b = static_cast<int>(m.find_first()); b != -1;
           b = static_cast<int>(m.find_next(b)))
        if (!bd.compat[a].test(b))
          throw FalsificationError("a block contains an incompatible pair");
  }
  if (covered.count() != static_cast<size_t>(n))
    throw FalsificationError("blocks fail to cover the carrier");

  Bits full(n);
  full.set();
  bd.isMV = bd.blocks.size() == 1 && bd.blocks[0] == full;
  bd.isBlockFinite = true;
  bd.center = bd.blockIntersection & sharp_elements(e, ord);
  return bd;
}

Bits sharp_elements(const EffectAlgebra& e, const OrderStructure& ord) {
  if (!ord.isLattice) throw InputError("sharp elements need a lattice instance");
  const int n = e.size();
  Bits sharp(n);
  for (int x = 0; x < n; ++x)
    if (ord.meet(x, ord.supp[x]) == e.zero) sharp.set(x);

  SubAlgebraCheck chk = is_sub_effect_algebra(e, ord, sharp);
  if (!chk.isSubEffectAlgebra || !chk.isSublattice)
    throw FalsificationError("sharp elements are not a sub-lattice effect algebra");
  // orthomodular law inside S(E): x <= y gives y = x v (y ^ x')
  for (int x = static_cast<int>(sharp.find_first()); x != -1;
       x = static_cast<int>(sharp.find_next(x)))
    for (int y = static_cast<int>(sharp.find_first()); y != -1;
         y = static_cast<int>(sharp.find_next(y)))
      if (ord.leq(x, y) && ord.join(x, ord.meet(y, ord.supp[x])) != y)
        throw FalsificationError("sharp elements violate the orthomodular law");
  return sharp;
}

Decomposition decompose(const EffectAlgebra& e, const OrderStructure& ord,
                        const AtomTable& at, int x) {
  if (!ord.isLattice || !at.isAtomic || !at.isArchimedean)
    throw InputError("decomposition needs an Archimedean atomic lattice instance");
  Decomposition dec;
  dec.target = x;
  if (x == e.zero) return dec;

  int residual = x;
  Bits used(e.size());
  while (residual != e.zero) {
    int atom = -1;
    for (int a = static_cast<int>(at.atoms.find_first()); a != -1;
         a = static_cast<int>(at.atoms.find_next(a)))
      if (ord.leq(a, residual)) { atom = a; break; }
    if (atom < 0)
      throw FalsificationError("nonzero residual with no atom below it on an atomic instance");
    if (used.test(atom))
      throw FalsificationError("greedy decomposition revisited an atom");
    used.set(atom);
    int k = 1, ka = atom;
    while (true) {
      auto next = e.plus(ka, atom);
      if (!next || !ord.leq(*next, residual)) break;
      ka = *next;
      ++k;
    }
    dec.terms.push_back({atom, k});
    residual = ord.minus(residual, ka);
  }

  // reconstruction by iterated sum and by join, plus the sharpness criterion
  int acc = e.zero;
  int join = e.zero;
  bool full = true;
  for (auto [a, k] : dec.terms) {
    auto ka = multiple(e, a, k);
    if (!ka) throw FalsificationError("decomposition term has no defined multiple");
    auto s = e.plus(acc, *ka);
    if (!s) throw FalsificationError("decomposition terms are not summable");
    acc = *s;
    join = ord.join(join, *ka);
    if (k != at.ord[a]) full = false;
  }
  if (acc != x) throw FalsificationError("decomposition sum does not reconstruct the element");
  if (join != x) throw FalsificationError("decomposition join does not reconstruct the element");
  bool sharp = ord.meet(x, ord.supp[x]) == e.zero;
  if (sharp != full)
    throw FalsificationError("sharpness criterion disagrees with x ^ x' = 0");
  return dec;
}

AOReport almost_orthogonality(const EffectAlgebra& e, const OrderStructure& ord,
                              const AtomTable& at) {
  if (!ord.isLattice || !at.isAtomic || !at.isArchimedean)
    throw InputError("almost orthogonality needs an Archimedean atomic lattice instance");
  const int n = e.size();
  AOReport rep;
  Bits sharp = sharp_elements(e, ord);

  for (int a = static_cast<int>(at.atoms.find_first()); a != -1;
       a = static_cast<int>(at.atoms.find_next(a))) {
    Bits aa(n);
    for (int b = static_cast<int>(at.atoms.find_first()); b != -1;
         b = static_cast<int>(at.atoms.find_next(b)))
      if (!ord.leq(b, ord.supp[a])) aa.set(b);
    rep.perAtom[a] = aa;

    for (int l = 1; l <= at.ord[a]; ++l) {
      AOWitness w;
      w.atom = a;
      w.level = l;
      for (int b = static_cast<int>(aa.find_first()); b != -1;
           b = static_cast<int>(aa.find_next(b)))
        if (b != a) w.list.push_back({b, 1});
      w.list.push_back({a, at.ord[a] - l + 1});
      if (sharp.test(a) != aa.test(a))
        throw FalsificationError("a sharp atom must fail a <= a' and vice versa");

      int la = *multiple(e, a, l);
      int laSupp = ord.supp[la];
      for (auto [c, j] : w.list) {
        auto jc = multiple(e, c, j);
        if (!jc || ord.leq(*jc, laSupp))
          throw FalsificationError("witness multiple is below (la)'");
      }
      for (int x = 0; x < n; ++x) {
        if (ord.leq(x, laSupp)) continue;
        bool covered = false;
        for (auto [c, j] : w.list)
          if (ord.leq(*multiple(e, c, j), x)) { covered = true; break; }
        if (!covered)
          throw FalsificationError("covering property of the witness list fails");
      }
      rep.witnesses[{a, l}] = std::move(w);
    }
  }
  rep.isAlmostOrthogonal = true;  // finite witness sets on a finite carrier
  return rep;
}

namespace {

int join_of_subset(const OrderStructure& ord, int zero, uint64_t mask) {
  int j = zero;
  for (int v = 0; mask; ++v, mask >>= 1)
    if (mask & 1) j = ord.join(j, v);
  return j;
}

}  // namespace

bool is_compact_element(const EffectAlgebra& e, const OrderStructure& ord,
                        int u, const Caps& caps) {
  if (!ord.isLattice) throw InputError("compactness needs a lattice instance");
  const int n = e.size();
  if (static_cast<size_t>(n) > caps.subsets)
    throw CapExceeded("carrier exceeds the subset brute-force cap");
  for (uint64_t mask = 1; mask < (uint64_t{1} << n); ++mask) {
    int j = join_of_subset(ord, e.zero, mask);
    if (!ord.leq(u, j)) continue;
    // need a finite subjoin above u; the whole of D is itself finite
    bool witnessed = false;
    for (uint64_t f = mask; f; f = (f - 1) & mask)
      if (ord.leq(u, join_of_subset(ord, e.zero, f))) { witnessed = true; break; }
    if (!witnessed) return false;
  }
  return true;
}

bool is_s_compact(const EffectAlgebra& e, const OrderStructure& ord, int u,
                  const Caps& caps) {
  if (!ord.isLattice) throw InputError("s-compactness needs a lattice instance");
  const int n = e.size();
  if (static_cast<size_t>(n) > caps.subsets)
    throw CapExceeded("carrier exceeds the subset brute-force cap");
  for (uint64_t mask = 1; mask < (uint64_t{1} << n); ++mask) {
    Bits ub(n);
    ub.set();
    for (int v = 0; v < n; ++v)
      if (mask & (uint64_t{1} << v)) ub &= ord.up[v];
    bool premise = true;
    for (int c = static_cast<int>(ub.find_first()); c != -1;
         c = static_cast<int>(ub.find_next(c)))
      if (!ord.leq(u, c)) { premise = false; break; }
    if (!premise) continue;
    bool witnessed = false;
    for (uint64_t f = mask; f; f = (f - 1) & mask)
      if (ord.leq(u, join_of_subset(ord, e.zero, f))) { witnessed = true; break; }
    if (!witnessed) return false;
  }
  return true;
}

}  // namespace ea
