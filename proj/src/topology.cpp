#include "ea/topology.hpp"

#include <algorithm>
#include <unordered_set>

namespace ea {

namespace {

uint32_t to_mask(const Bits& b) {
  uint32_t m = 0;
  for (int i = static_cast<int>(b.find_first()); i != -1;
       i = static_cast<int>(b.find_next(i)))
    m |= uint32_t{1} << i;
  return m;
}

std::vector<uint32_t> close_family(std::vector<uint32_t> seed, int n) {
  if (n > 24) throw CapExceeded("closed-set families are limited to 24 elements");
  std::unordered_set<uint32_t> in(seed.begin(), seed.end());
  std::vector<uint32_t> all(in.begin(), in.end());
  for (size_t i = 0; i < all.size(); ++i)
    for (size_t j = 0; j < i; ++j) {
      uint32_t u = all[i] | all[j];
      uint32_t v = all[i] & all[j];
      if (in.insert(u).second) all.push_back(u);
      if (in.insert(v).second) all.push_back(v);
    }
  std::sort(all.begin(), all.end());
  return all;
}

std::vector<uint32_t> interval_seed(const EffectAlgebra& e, const OrderStructure& ord) {
  const int n = e.size();
  std::vector<uint32_t> seed{0, n >= 32 ? 0xffffffffu : (uint32_t{1} << n) - 1};
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (ord.leq(a, b)) seed.push_back(to_mask(ord.up[a] & ord.down[b]));
  return seed;
}

bool family_hausdorff(const std::vector<uint32_t>& closed, int n) {
  // minimal open neighbourhoods; disjointness for every pair
  const uint32_t full = (n >= 32) ? 0xffffffffu : (uint32_t{1} << n) - 1;
  std::vector<uint32_t> minOpen(n, full);
  for (uint32_t c : closed) {
    uint32_t open = full & ~c;
    for (int x = 0; x < n; ++x)
      if (open & (uint32_t{1} << x)) minOpen[x] &= open;
  }
  for (int x = 0; x < n; ++x)
    for (int y = x + 1; y < n; ++y)
      if (minOpen[x] & minOpen[y]) return false;
  return true;
}

}  // namespace

Interval make_interval(const OrderStructure& ord, int lo, int hi) {
  if (!ord.leq(lo, hi)) throw InputError("interval with lo not below hi");
  Interval iv;
  iv.lo = lo;
  iv.hi = hi;
  iv.members = ord.up[lo] & ord.down[hi];
  return iv;
}

WitnessContext make_witness_context(EffectAlgebra e) {
  if (!e.validated) {
    ValidationReport rep = validate(e);
    if (!rep.ok) throw InputError("witness context needs a valid instance");
  }
  WitnessContext ctx;
  ctx.alg = std::move(e);
  ctx.ord = derive_order(ctx.alg);
  ctx.atoms = atom_analysis(ctx.alg, ctx.ord);
  ctx.ao = almost_orthogonality(ctx.alg, ctx.ord, ctx.atoms);
  ctx.blockInfo = blocks(ctx.alg, ctx.ord);
  ctx.dualAlg = dual_algebra(ctx.alg);
  ctx.dualOrd = derive_order(ctx.dualAlg);
  ctx.dualAtoms = atom_analysis(ctx.dualAlg, ctx.dualOrd);
  ctx.dualAo = almost_orthogonality(ctx.dualAlg, ctx.dualOrd, ctx.dualAtoms);
  return ctx;
}

GeneratedTopology generate_topology(const EffectAlgebra& e, const OrderStructure& ord,
                                    const Caps& caps) {
  if (!ord.isLattice) throw InputError("interval topology generation needs a lattice instance");
  const int n = e.size();
  if (static_cast<size_t>(n) > caps.topology)
    throw CapExceeded("carrier exceeds the topology generation cap; use the witness operations");
  GeneratedTopology topo;
  topo.n = n;
  topo.closedSets = close_family(interval_seed(e, ord), n);
  topo.isDiscrete = topo.closedSets.size() == (size_t{1} << n);
  topo.isHausdorffWitnessed =
      topo.isDiscrete || family_hausdorff(topo.closedSets, n);
  return topo;
}

namespace {

PartitionWitness partition_on(const EffectAlgebra& e, const OrderStructure& ord,
                              const AtomTable& at, const AOReport& ao, int atom, int level) {
  if (!at.atoms.test(atom)) throw InputError("partition base must be an atom");
  if (level < 1 || level > at.ord[atom]) throw InputError("partition level out of range");

  PartitionWitness w;
  w.atom = atom;
  w.level = level;
  int la = *multiple(e, atom, level);
  w.head = make_interval(ord, e.zero, ord.supp[la]);

  const Bits& aa = ao.perAtom.at(atom);
  for (int b = static_cast<int>(aa.find_first()); b != -1;
       b = static_cast<int>(aa.find_next(b)))
    if (b != atom) w.tail.push_back(make_interval(ord, b, e.one));
  int rest = *multiple(e, atom, at.ord[atom] + 1 - level);
  w.tail.push_back(make_interval(ord, rest, e.one));

  Bits tailUnion(e.size());
  for (const Interval& iv : w.tail) tailUnion |= iv.members;
  if ((w.head.members & tailUnion).any())
    throw FalsificationError("partition head meets its tail");
  Bits full(e.size());
  full.set();
  if ((w.head.members | tailUnion) != full)
    throw FalsificationError("partition fails to cover the carrier");
  return w;
}

/// Prunes intervals contained in the union of the remaining ones.
void prune_cover(std::vector<Interval>& ivs, int n) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i < ivs.size(); ++i) {
      Bits rest(n);
      for (size_t j = 0; j < ivs.size(); ++j)
        if (j != i) rest |= ivs[j].members;
      if (ivs[i].members.is_subset_of(rest)) {
        ivs.erase(ivs.begin() + i);
        changed = true;
        break;
      }
    }
  }
}

}  // namespace

PartitionWitness ao_partition(const WitnessContext& ctx, int atom, int level) {
  return partition_on(ctx.alg, ctx.ord, ctx.atoms, ctx.ao, atom, level);
}

ClopenResult clopen_check(const WitnessContext& ctx, int atomB, int k, int atomA, int l) {
  const EffectAlgebra& e = ctx.alg;
  const OrderStructure& ord = ctx.ord;
  const int n = e.size();
  if (k < 0 || l < 0) throw InputError("multiplicities must be nonnegative");

  int lo = e.zero;
  if (k > 0) {
    if (!ctx.atoms.atoms.test(atomB) || k > ctx.atoms.ord[atomB])
      throw InputError("bad lower atom or multiplicity");
    lo = *multiple(e, atomB, k);
  }
  int hi = e.one;
  if (l > 0) {
    if (!ctx.atoms.atoms.test(atomA) || l > ctx.atoms.ord[atomA])
      throw InputError("bad upper atom or multiplicity");
    hi = ord.supp[*multiple(e, atomA, l)];
  }

  ClopenResult res;
  res.clopen = true;
  if (!ord.leq(lo, hi)) {
    res.interval = Interval{lo, hi, Bits(n)};
    res.complement.push_back(make_interval(ord, e.zero, e.one));
    return res;
  }
  res.interval = make_interval(ord, lo, hi);

  // complement of [kb, 1], via the level-k partition on the order dual
  if (k > 0) {
    int coatom = ord.supp[atomB];
    PartitionWitness dual =
        partition_on(ctx.dualAlg, ctx.dualOrd, ctx.dualAtoms, ctx.dualAo, coatom, k);
    Bits upkb = ord.up[lo];
    if (dual.head.members != upkb)
      throw FalsificationError("dual partition head must be the up-set of kb");
    for (const Interval& iv : dual.tail) {
      // a dual interval [u, 1*] is the instance interval [0, u]
      Interval mapped = make_interval(ord, e.zero, iv.lo);
      if (mapped.members != iv.members)
        throw FalsificationError("dual interval members changed under reflection");
      res.complement.push_back(std::move(mapped));
    }
  }
  // complement of [0, (la)'], via the level-l partition on the instance
  if (l > 0) {
    PartitionWitness part = ao_partition(ctx, atomA, l);
    if (part.head.members != ord.down[hi])
      throw FalsificationError("partition head must be the down-set of (la)'");
    for (const Interval& iv : part.tail) res.complement.push_back(iv);
  }

  Bits compUnion(n);
  for (const Interval& iv : res.complement) compUnion |= iv.members;
  if (compUnion != ~res.interval.members)
    throw FalsificationError("complement intervals fail to reconstruct the complement");
  prune_cover(res.complement, n);
  return res;
}

SeparationWitness separate(const WitnessContext& ctx, int x, int y) {
  const EffectAlgebra& e = ctx.alg;
  const OrderStructure& ord = ctx.ord;
  if (x == y) throw InputError("separation requires two distinct points");

  SeparationWitness w;
  w.swapped = ord.leq(x, y);
  if (w.swapped) std::swap(x, y);
  w.x = x;
  w.y = y;

  for (int b = static_cast<int>(ctx.atoms.atoms.find_first()); b != -1 && w.atomB < 0;
       b = static_cast<int>(ctx.atoms.atoms.find_next(b)))
    for (int k = 1; k <= ctx.atoms.ord[b]; ++k) {
      auto kb = multiple(e, b, k);
      if (!kb) break;
      if (ord.leq(*kb, x) && !ord.leq(*kb, y)) {
        w.atomB = b;
        w.k = k;
        break;
      }
      if (!ord.leq(*kb, x)) break;  // multiples only grow
    }
  if (w.atomB < 0)
    throw FalsificationError("no atom multiple below x avoiding y");

  int kb = *multiple(e, w.atomB, w.k);
  for (int a = static_cast<int>(ctx.atoms.atoms.find_first()); a != -1 && w.atomA < 0;
       a = static_cast<int>(ctx.atoms.atoms.find_next(a)))
    for (int l = 1; l <= ctx.atoms.ord[a]; ++l) {
      int cap = ord.supp[*multiple(e, a, l)];
      if (ord.leq(y, cap) && !ord.leq(kb, cap)) {
        w.atomA = a;
        w.l = l;
        break;
      }
    }
  if (w.atomA < 0)
    throw FalsificationError("no dual atom multiple capping y away from kb");

  w.up = make_interval(ord, kb, e.one);
  w.down = make_interval(ord, e.zero, ord.supp[*multiple(e, w.atomA, w.l)]);
  if (!w.up.members.test(x) || !w.down.members.test(y) ||
      (w.up.members & w.down.members).any())
    throw FalsificationError("separation intervals fail their invariants");
  // both intervals are clopen with verified complements
  clopen_check(ctx, w.atomB, w.k, -1, 0);
  clopen_check(ctx, -1, 0, w.atomA, w.l);
  return w;
}

namespace {

BlockCover cover_outside(const WitnessContext& ctx, int block, int outsider) {
  const EffectAlgebra& e = ctx.alg;
  const OrderStructure& ord = ctx.ord;
  const Bits& m = ctx.blockInfo.blocks[block];
  BlockCover bc;
  bc.block = block;
  for (int a = static_cast<int>(ctx.atoms.atoms.find_first()); a != -1;
       a = static_cast<int>(ctx.atoms.atoms.find_next(a)))
    if (m.test(a) && !ctx.blockInfo.compat[a].test(outsider)) {
      bc.atom = a;
      break;
    }
  if (bc.atom < 0)
    throw FalsificationError("no block atom is incompatible with the outside point");
  bc.level = 1;
  bc.j = make_interval(ord, e.zero, ord.supp[bc.atom]);
  bc.k = make_interval(ord, *multiple(e, bc.atom, ctx.atoms.ord[bc.atom]), e.one);
  if (bc.j.members.test(outsider) || bc.k.members.test(outsider))
    throw FalsificationError("outside point landed in its exclusion intervals");
  return bc;
}

}  // namespace

CoverWitness blockfinite_cover(const WitnessContext& ctx, int x, int y) {
  const EffectAlgebra& e = ctx.alg;
  const OrderStructure& ord = ctx.ord;
  if (ord.leq(x, y)) throw InputError("cover witnesses need x not below y");

  CoverWitness w;
  w.x = x;
  w.y = y;
  const int n = e.size();
  Bits covered(n);
  for (size_t i = 0; i < ctx.blockInfo.blocks.size(); ++i) {
    const Bits& m = ctx.blockInfo.blocks[i];
    BlockCover bc;
    if (m.test(x) && m.test(y)) {
      bc.block = static_cast<int>(i);
      bc.kind = CoverCase::BothInBlock;
      for (int a = static_cast<int>(ctx.atoms.atoms.find_first());
           a != -1 && bc.atom < 0; a = static_cast<int>(ctx.atoms.atoms.find_next(a))) {
        if (!m.test(a)) continue;
        for (int l = 1; l <= ctx.atoms.ord[a]; ++l) {
          int la = *multiple(e, a, l);
          if (ord.leq(la, x) && !ord.leq(la, y)) {
            bc.atom = a;
            bc.level = l;
            break;
          }
          if (!ord.leq(la, x)) break;
        }
      }
      if (bc.atom < 0)
        throw FalsificationError("no in-block atom multiple distinguishes the pair");
      int la = *multiple(e, bc.atom, bc.level);
      int rest = *multiple(e, bc.atom, ctx.atoms.ord[bc.atom] + 1 - bc.level);
      bc.j = make_interval(ord, e.zero, ord.supp[rest]);
      bc.k = make_interval(ord, la, e.one);
      if (!bc.k.members.test(x) || !bc.j.members.test(y))
        throw FalsificationError("in-block intervals miss their points");
    } else if (!m.test(x)) {
      bc = cover_outside(ctx, static_cast<int>(i), x);
      bc.kind = CoverCase::XOutside;
    } else {
      bc = cover_outside(ctx, static_cast<int>(i), y);
      bc.kind = CoverCase::YOutside;
    }
    if ((bc.j.members & bc.k.members).any())
      throw FalsificationError("block cover intervals overlap");
    if (!m.is_subset_of(bc.j.members | bc.k.members))
      throw FalsificationError("block not covered by its two intervals");
    if ((bc.j.members.test(x) && bc.j.members.test(y)) ||
        (bc.k.members.test(x) && bc.k.members.test(y)))
      throw FalsificationError("a cover interval contains both points");
    covered |= bc.j.members | bc.k.members;
    w.perBlock.push_back(std::move(bc));
  }
  Bits full(n);
  full.set();
  if (covered != full) throw FalsificationError("block cover misses part of the carrier");
  return w;
}

PhiFamily phi_eval(const WitnessContext& ctx) {
  const EffectAlgebra& e = ctx.alg;
  const OrderStructure& ord = ctx.ord;
  if (!ord.isLattice || !ctx.atoms.isAtomic || !ctx.atoms.isArchimedean)
    throw InputError("the separating family needs an Archimedean atomic lattice instance");
  const int n = e.size();
  PhiFamily phi;
  phi.u = Bits(n);
  for (int a = static_cast<int>(ctx.atoms.atoms.find_first()); a != -1;
       a = static_cast<int>(ctx.atoms.atoms.find_next(a)))
    for (int l = 1; l <= ctx.atoms.ord[a]; ++l) phi.u.set(*multiple(e, a, l));
  // close under joins
  bool grew = true;
  while (grew) {
    grew = false;
    for (int x = static_cast<int>(phi.u.find_first()); x != -1;
         x = static_cast<int>(phi.u.find_next(x)))
      for (int y = static_cast<int>(phi.u.find_first()); y != -1;
           y = static_cast<int>(phi.u.find_next(y))) {
        int j = ord.join(x, y);
        if (!phi.u.test(j)) {
          phi.u.set(j);
          grew = true;
        }
      }
  }
  phi.v = Bits(n);
  for (int x = static_cast<int>(phi.u.find_first()); x != -1;
       x = static_cast<int>(phi.u.find_next(x)))
    phi.v.set(ord.supp[x]);

  // every element is the join of the family members below it and the meet of
  // the duals above it
  for (int x = 0; x < n; ++x) {
    int join = e.zero;
    for (int u = static_cast<int>(phi.u.find_first()); u != -1;
         u = static_cast<int>(phi.u.find_next(u)))
      if (ord.leq(u, x)) join = ord.join(join, u);
    int meet = e.one;
    for (int v = static_cast<int>(phi.v.find_first()); v != -1;
         v = static_cast<int>(phi.v.find_next(v)))
      if (ord.leq(x, v)) meet = ord.meet(meet, v);
    if (join != x || meet != x)
      throw FalsificationError("family members fail to reconstruct an element");
  }
  return phi;
}

bool phi_separates(const OrderStructure& ord, const PhiFamily& phi, int x, int y) {
  for (int u = static_cast<int>(phi.u.find_first()); u != -1;
       u = static_cast<int>(phi.u.find_next(u)))
    if (ord.leq(u, x) != ord.leq(u, y)) return true;
  for (int v = static_cast<int>(phi.v.find_first()); v != -1;
       v = static_cast<int>(phi.v.find_next(v)))
    if (ord.leq(x, v) != ord.leq(y, v)) return true;
  return false;
}

bool phi_separates_all(const EffectAlgebra& e, const OrderStructure& ord,
                       const PhiFamily& phi) {
  for (int x = 0; x < e.size(); ++x)
    for (int y = x + 1; y < e.size(); ++y)
      if (!phi_separates(ord, phi, x, y)) return false;
  return true;
}

bool topologies_agree(const WitnessContext& ctx, const Caps& caps) {
  const EffectAlgebra& e = ctx.alg;
  const OrderStructure& ord = ctx.ord;
  const int n = e.size();
  if (static_cast<size_t>(n) > caps.topology)
    throw CapExceeded("topology comparison exceeds the generation cap");

  GeneratedTopology ti = generate_topology(e, ord, caps);

  // the order topology of a finite poset is discrete
  std::vector<uint32_t> discrete;
  discrete.reserve(size_t{1} << n);
  for (uint32_t m = 0; m < (uint32_t{1} << n); ++m) discrete.push_back(m);

  PhiFamily phi = phi_eval(ctx);
  std::vector<uint32_t> seed;
  const uint32_t full = (uint32_t{1} << n) - 1;
  seed.push_back(0);
  seed.push_back(full);
  for (int u = static_cast<int>(phi.u.find_first()); u != -1;
       u = static_cast<int>(phi.u.find_next(u))) {
    uint32_t s = to_mask(ord.up[u]);
    seed.push_back(s);
    seed.push_back(full & ~s);
  }
  for (int v = static_cast<int>(phi.v.find_first()); v != -1;
       v = static_cast<int>(phi.v.find_next(v))) {
    uint32_t s = to_mask(ord.down[v]);
    seed.push_back(s);
    seed.push_back(full & ~s);
  }
  std::vector<uint32_t> phiFamily = close_family(std::move(seed), n);

  return ti.closedSets == discrete && phiFamily == discrete;
}

bool subspace_topology_check(const EffectAlgebra& e, const OrderStructure& ord,
                             const Bits& f, const Caps& caps) {
  if (!ord.isLattice) throw InputError("subspace check needs a lattice instance");
  const int n = e.size();
  if (static_cast<size_t>(n) > caps.topology)
    throw CapExceeded("subspace comparison exceeds the generation cap");
  if (!f.any()) throw InputError("empty subset is not a sublattice");
  for (int a = static_cast<int>(f.find_first()); a != -1;
       a = static_cast<int>(f.find_next(a)))
    for (int b = static_cast<int>(f.find_first()); b != -1;
         b = static_cast<int>(f.find_next(b)))
      if (!f.test(ord.meet(a, b)) || !f.test(ord.join(a, b)))
        throw InputError("subset is not a sublattice");

  // index map into the subspace
  std::vector<int> toSub(n, -1);
  std::vector<int> members;
  for (int a = static_cast<int>(f.find_first()); a != -1;
       a = static_cast<int>(f.find_next(a))) {
    toSub[a] = static_cast<int>(members.size());
    members.push_back(a);
  }
  const int k = static_cast<int>(members.size());

  // the subspace's own interval family
  std::vector<uint32_t> seed{0, (uint32_t{1} << k) - 1};
  for (int a : members)
    for (int b : members)
      if (ord.leq(a, b)) {
        uint32_t mask = 0;
        for (int c : members)
          if (ord.leq(a, c) && ord.leq(c, b)) mask |= uint32_t{1} << toSub[c];
        seed.push_back(mask);
      }
  std::vector<uint32_t> own = close_family(std::move(seed), k);

  GeneratedTopology ambient = generate_topology(e, ord, caps);
  std::vector<uint32_t> trace;
  trace.reserve(ambient.closedSets.size());
  for (uint32_t c : ambient.closedSets) {
    uint32_t mask = 0;
    for (int i = 0; i < k; ++i)
      if (c & (uint32_t{1} << members[i])) mask |= uint32_t{1} << i;
    trace.push_back(mask);
  }
  std::sort(trace.begin(), trace.end());
  trace.erase(std::unique(trace.begin(), trace.end()), trace.end());

  return own == trace;
}

}  // namespace ea
