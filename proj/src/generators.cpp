#include "ea/generators.hpp"

#include <algorithm>
#include <set>

#include "ea/structure.hpp"

namespace ea {

namespace {

std::string spreadsheet_letter(int i) {
  std::string s;
  ++i;
  while (i > 0) {
    --i;
    s.insert(s.begin(), static_cast<char>('a' + i % 26));
    i /= 26;
  }
  return s;
}

std::string chain_label(int k, const std::string& letter) {
  if (k == 1) return letter;
  return std::to_string(k) + letter;
}

}  // namespace

EffectAlgebra chain(int n, const std::string& atom_letter) {
  if (n < 2) throw InputError("a chain needs at least 2 elements");
  std::vector<std::string> labels;
  labels.push_back("0");
  for (int k = 1; k < n - 1; ++k) labels.push_back(chain_label(k, atom_letter));
  labels.push_back("1");
  std::vector<std::array<int, 3>> triples;
  for (int i = 1; i < n; ++i)
    for (int j = i; j < n; ++j)
      if (i + j <= n - 1) triples.push_back({i, j, i + j});
  EffectAlgebra e = make_algebra(std::move(labels), triples, 0, n - 1);
  ValidationReport rep = validate(e);
  if (!rep.ok) throw std::logic_error("chain constructor produced an invalid table");
  return e;
}

EffectAlgebra boolean_algebra(int k, const std::string& suffix) {
  if (k < 1) throw InputError("a boolean algebra needs at least one atom (0 = 1 otherwise)");
  if (k > 20) throw InputError("boolean atom count too large");
  auto atom_label = [&](int j) {
    std::string base = k <= 8 ? std::string(1, static_cast<char>('p' + j))
                              : "p" + std::to_string(j + 1);
    return base + suffix;
  };
  // subsets ordered by (popcount, numeric value); 0 first, full set last
  std::vector<uint32_t> order;
  for (uint32_t m = 0; m < (uint32_t{1} << k); ++m) order.push_back(m);
  std::sort(order.begin(), order.end(), [](uint32_t a, uint32_t b) {
    int ca = __builtin_popcount(a), cb = __builtin_popcount(b);
    return ca != cb ? ca < cb : a < b;
  });
  std::vector<int> indexOf(size_t{1} << k);
  std::vector<std::string> labels;
  for (size_t i = 0; i < order.size(); ++i) {
    indexOf[order[i]] = static_cast<int>(i);
    uint32_t m = order[i];
    if (m == 0) {
      labels.push_back("0");
    } else if (m == (uint32_t{1} << k) - 1) {
      labels.push_back(k == 1 ? "1" : "1");
    } else {
      std::string l;
      for (int j = 0; j < k; ++j)
        if (m & (uint32_t{1} << j)) {
          if (!l.empty() && k > 8) l += "+";
          l += atom_label(j);
        }
      labels.push_back(l);
    }
  }
  std::vector<std::array<int, 3>> triples;
  for (uint32_t a = 0; a < (uint32_t{1} << k); ++a)
    for (uint32_t b = a; b < (uint32_t{1} << k); ++b)
      if (!(a & b)) triples.push_back({indexOf[a], indexOf[b], indexOf[a | b]});
  EffectAlgebra e = make_algebra(std::move(labels), triples, 0,
                                 indexOf[(uint32_t{1} << k) - 1]);
  ValidationReport rep = validate(e);
  if (!rep.ok) throw std::logic_error("boolean constructor produced an invalid table");
  return e;
}

EffectAlgebra horizontal_sum(const std::vector<EffectAlgebra>& summands,
                             std::vector<std::string>* warnings) {
  if (summands.empty()) throw InputError("horizontal sum of nothing has no 0 and 1");
  std::vector<const EffectAlgebra*> used;
  for (const EffectAlgebra& s : summands) {
    if (!s.validated) throw InputError("horizontal sum needs validated summands");
    if (s.size() == 2) {
      if (warnings) warnings->push_back("summand of size 2 absorbed");
      continue;
    }
    used.push_back(&s);
  }
  if (used.empty()) {
    // all summands degenerate: the sum collapses to the two shared bounds
    return chain(2);
  }

  std::vector<std::string> labels{"0"};
  // interior labels, suffixed on collision
  std::set<std::string> taken{"0", "1"};
  std::vector<std::vector<int>> map(used.size());
  for (size_t i = 0; i < used.size(); ++i) {
    const EffectAlgebra& s = *used[i];
    map[i].assign(s.size(), -1);
    map[i][s.zero] = 0;
    for (int x = 0; x < s.size(); ++x) {
      if (x == s.zero || x == s.one) continue;
      std::string l = s.label(x);
      if (taken.count(l)) l += "_" + std::to_string(i + 1);
      if (taken.count(l)) throw InputError("label collision not resolvable: " + l);
      taken.insert(l);
      map[i][x] = static_cast<int>(labels.size());
      labels.push_back(std::move(l));
    }
  }
  const int one = static_cast<int>(labels.size());
  labels.push_back("1");
  for (size_t i = 0; i < used.size(); ++i) map[i][used[i]->one] = one;

  std::vector<std::array<int, 3>> triples;
  for (size_t i = 0; i < used.size(); ++i) {
    const EffectAlgebra& s = *used[i];
    for (int x = 0; x < s.size(); ++x)
      for (int y = x; y < s.size(); ++y) {
        int z = s.sum.at(x, y);
        if (z != kUndefined) triples.push_back({map[i][x], map[i][y], map[i][z]});
      }
  }
  EffectAlgebra e = make_algebra(std::move(labels), triples, 0, one);
  ValidationReport rep = validate(e);
  if (!rep.ok) throw std::logic_error("horizontal sum produced an invalid table");
  return e;
}

EffectAlgebra product(const std::vector<EffectAlgebra>& factors) {
  if (factors.empty()) throw InputError("product of nothing has no 0 and 1");
  for (const EffectAlgebra& f : factors)
    if (!f.validated) throw InputError("product needs validated factors");

  int n = 1;
  for (const EffectAlgebra& f : factors) n *= f.size();
  if (n > 4096) throw InputError("product carrier too large");

  auto unpack = [&](int idx) {
    std::vector<int> t(factors.size());
    for (int i = static_cast<int>(factors.size()) - 1; i >= 0; --i) {
      t[i] = idx % factors[i].size();
      idx /= factors[i].size();
    }
    return t;
  };
  auto pack = [&](const std::vector<int>& t) {
    int idx = 0;
    for (size_t i = 0; i < factors.size(); ++i) idx = idx * factors[i].size() + t[i];
    return idx;
  };

  std::vector<std::string> labels;
  for (int idx = 0; idx < n; ++idx) {
    std::vector<int> t = unpack(idx);
    std::string l = "(";
    for (size_t i = 0; i < t.size(); ++i) {
      if (i) l += ",";
      l += factors[i].label(t[i]);
    }
    l += ")";
    labels.push_back(std::move(l));
  }

  std::vector<int> zeroT, oneT;
  for (const EffectAlgebra& f : factors) {
    zeroT.push_back(f.zero);
    oneT.push_back(f.one);
  }

  std::vector<std::array<int, 3>> triples;
  for (int x = 0; x < n; ++x)
    for (int y = x; y < n; ++y) {
      std::vector<int> tx = unpack(x), ty = unpack(y), tz(factors.size());
      bool ok = true;
      for (size_t i = 0; i < factors.size() && ok; ++i) {
        int z = factors[i].sum.at(tx[i], ty[i]);
        if (z == kUndefined) ok = false;
        else tz[i] = z;
      }
      if (ok) triples.push_back({x, y, pack(tz)});
    }
  EffectAlgebra e = make_algebra(std::move(labels), triples, pack(zeroT), pack(oneT));
  ValidationReport rep = validate(e);
  if (!rep.ok) throw std::logic_error("product produced an invalid table");
  return e;
}

EffectAlgebra hsum_of_chains(const std::vector<int>& lengths,
                             std::vector<std::string>* warnings) {
  std::vector<EffectAlgebra> parts;
  int letter = 0;
  for (int len : lengths) parts.push_back(chain(len, spreadsheet_letter(letter++)));
  return horizontal_sum(parts, warnings);
}

EffectAlgebra hsum_of_booleans(const std::vector<int>& atom_counts,
                               std::vector<std::string>* warnings) {
  std::vector<EffectAlgebra> parts;
  const bool multi = atom_counts.size() > 1;
  for (size_t i = 0; i < atom_counts.size(); ++i)
    parts.push_back(boolean_algebra(atom_counts[i],
                                    multi ? std::to_string(i + 1) : std::string()));
  return horizontal_sum(parts, warnings);
}

// ---------------------------------------------------------------------------
// canonical form

namespace {

std::vector<int> element_heights(const OrderStructure& ord, int zero) {
  const int n = ord.n;
  std::vector<int> byDepth(n);
  for (int i = 0; i < n; ++i) byDepth[i] = i;
  std::sort(byDepth.begin(), byDepth.end(), [&](int a, int b) {
    return ord.down[a].count() < ord.down[b].count();
  });
  std::vector<int> h(n, 0);
  for (int x : byDepth) {
    if (x == zero) continue;
    int best = 0;
    for (int y = static_cast<int>(ord.down[x].find_first()); y != -1;
         y = static_cast<int>(ord.down[x].find_next(y)))
      if (y != x) best = std::max(best, h[y] + 1);
    h[x] = best;
  }
  return h;
}

std::vector<int16_t> serialize_permuted(const EffectAlgebra& e,
                                        const std::vector<int>& to_canon) {
  const int n = e.size();
  std::vector<int> from(n);
  for (int i = 0; i < n; ++i) from[to_canon[i]] = i;
  std::vector<int16_t> key;
  key.reserve(static_cast<size_t>(n) * (n + 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      int v = e.sum.at(from[i], from[j]);
      key.push_back(static_cast<int16_t>(v == kUndefined ? -1 : to_canon[v]));
    }
  return key;
}

}  // namespace

std::vector<int16_t> canonical_key(const EffectAlgebra& e) {
  if (!e.validated) throw InputError("canonical form needs a validated instance");
  OrderStructure ord = derive_order(e);
  const int n = e.size();

  std::vector<int> height = element_heights(ord, e.zero);
  std::vector<std::tuple<int, int, int>> inv(n);
  for (int x = 0; x < n; ++x) {
    int ordX = 0;
    if (x != e.zero) {
      int acc = x, k = 1;
      while (true) {
        auto nx = e.plus(acc, x);
        if (!nx) break;
        acc = *nx;
        ++k;
      }
      ordX = k;
    }
    int deg = 0;
    for (int y = 0; y < n; ++y)
      if (e.sum.defined(x, y)) ++deg;
    inv[x] = {height[x], ordX, deg};
  }

  // interior elements sorted by invariant; equal-invariant groups may permute
  std::vector<int> interior;
  for (int x = 0; x < n; ++x)
    if (x != e.zero && x != e.one) interior.push_back(x);
  std::sort(interior.begin(), interior.end(),
            [&](int a, int b) { return inv[a] != inv[b] ? inv[a] < inv[b] : a < b; });

  std::vector<std::pair<size_t, size_t>> groups;
  size_t start = 0;
  for (size_t i = 1; i <= interior.size(); ++i) {
    if (i == interior.size() || inv[interior[i]] != inv[interior[start]]) {
      groups.push_back({start, i});
      start = i;
    }
  }

  double permCount = 1;
  for (auto [s, t] : groups)
    for (size_t f = 2; f <= t - s; ++f) permCount *= static_cast<double>(f);
  if (permCount > 2e6) throw CapExceeded("too many relabelings for canonicalization");

  std::vector<int16_t> best;
  std::vector<int> arrangement = interior;
  // iterate the cartesian product of per-group permutations
  std::vector<std::vector<int>> groupPerm;
  for (auto [s, t] : groups)
    groupPerm.push_back(std::vector<int>(arrangement.begin() + s, arrangement.begin() + t));

  std::vector<size_t> cursor(groups.size(), 0);
  while (true) {
    std::vector<int> order;
    for (auto& g : groupPerm) order.insert(order.end(), g.begin(), g.end());
    std::vector<int> to_canon(n, -1);
    to_canon[e.zero] = 0;
    for (size_t i = 0; i < order.size(); ++i) to_canon[order[i]] = static_cast<int>(i) + 1;
    to_canon[e.one] = n - 1;
    std::vector<int16_t> key = serialize_permuted(e, to_canon);
    if (best.empty() || key < best) best = std::move(key);

    // advance: next permutation odometer over the groups
    size_t g = 0;
    while (g < groupPerm.size() && !std::next_permutation(groupPerm[g].begin(), groupPerm[g].end()))
      ++g;
    if (g == groupPerm.size()) break;
  }
  return best;
}

// ---------------------------------------------------------------------------
// exhaustive enumeration

namespace {

constexpr int kUnassigned = -2;

struct Search {
  int n;
  std::vector<int> cell;  // n*n, kUnassigned / kUndefined / value
  std::vector<std::pair<int, int>> freeCells;
  std::vector<EffectAlgebra>* out;
  std::set<std::vector<int16_t>>* seen;

  int at(int i, int j) const { return cell[static_cast<size_t>(i) * n + j]; }
  void put(int i, int j, int v) {
    cell[static_cast<size_t>(i) * n + j] = v;
    cell[static_cast<size_t>(j) * n + i] = v;
  }

  bool associativity_consistent() const {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        int ab = at(a, b);
        if (ab == kUnassigned) continue;
        for (int c = 0; c < n; ++c) {
          int bc = at(b, c);
          if (bc == kUnassigned) continue;
          // lhs: decided-undefined (-1), decided value (>=0), or unknown
          int lhs = ab == kUndefined ? kUndefined : at(ab, c);
          int rhs = bc == kUndefined ? kUndefined : at(a, bc);
          if (lhs == kUnassigned || rhs == kUnassigned) continue;
          if (lhs != rhs) return false;
        }
      }
    return true;
  }

  bool local_consistent(int i, int j) {
    int v = at(i, j);
    if (v >= 0) {
      // cancellativity: a row never repeats a defined value
      for (int y = 0; y < n; ++y) {
        if (y != j && at(i, y) == v) return false;
        if (y != i && at(j, y) == v) return false;
      }
      // at most one supplement
      if (v == n - 1) {
        for (int y = 0; y < n; ++y) {
          if (y != j && at(i, y) == n - 1) return false;
          if (y != i && at(j, y) == n - 1) return false;
        }
      }
    }
    return associativity_consistent();
  }

  void finish() {
    PartialSumTable t(n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        int v = at(i, j);
        if (v >= 0) t.set(i, j, v);
      }
    if (!validate(t, 0, n - 1, /*stop_at_first=*/true).ok) return;
    EffectAlgebra e;
    e.carrier.reserve(n);
    std::vector<std::string> labels;
    labels.push_back("0");
    for (int i = 1; i < n - 1; ++i) labels.push_back("x" + std::to_string(i));
    labels.push_back("1");
    for (int i = 0; i < n; ++i) e.carrier.push_back({i, labels[i]});
    e.sum = t;
    e.zero = 0;
    e.one = n - 1;
    e.validated = true;
    std::vector<int16_t> key = canonical_key(e);
    if (!seen->insert(key).second) return;

    // rebuild from the canonical table so the output does not depend on
    // discovery order
    PartialSumTable ct(n);
    size_t idx = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j, ++idx)
        if (key[idx] >= 0) ct.set(i, j, key[idx]);
    EffectAlgebra canon;
    for (int i = 0; i < n; ++i) canon.carrier.push_back({i, labels[i]});
    canon.sum = ct;
    canon.zero = 0;
    canon.one = n - 1;
    if (!validate(canon).ok)
      throw std::logic_error("canonical table failed validation");
    out->push_back(std::move(canon));
  }

  void step(size_t k) {
    if (k == freeCells.size()) {
      finish();
      return;
    }
    auto [i, j] = freeCells[k];
    // a sum is never 0 (that forces both terms to 0)
    put(i, j, kUndefined);
    if (local_consistent(i, j)) step(k + 1);
    for (int v = 1; v < n; ++v) {
      put(i, j, v);
      if (local_consistent(i, j)) step(k + 1);
    }
    put(i, j, kUnassigned);
  }
};

}  // namespace

std::vector<EffectAlgebra> enumerate_exact(int n, const Caps& caps) {
  if (n < 2) throw InputError("enumeration starts at carrier size 2");
  if (static_cast<size_t>(n) > caps.enumerate)
    throw CapExceeded("carrier exceeds the enumeration cap");

  std::vector<EffectAlgebra> out;
  std::set<std::vector<int16_t>> seen;
  Search s;
  s.n = n;
  s.cell.assign(static_cast<size_t>(n) * n, kUnassigned);
  s.out = &out;
  s.seen = &seen;
  for (int x = 0; x < n; ++x) s.put(x, 0, x);
  for (int x = 1; x < n; ++x) s.put(n - 1, x, x == 0 ? n - 1 : kUndefined);
  s.put(n - 1, 0, n - 1);
  for (int i = 1; i <= n - 2; ++i)
    for (int j = i; j <= n - 2; ++j) s.freeCells.push_back({i, j});
  s.step(0);

  std::sort(out.begin(), out.end(), [](const EffectAlgebra& a, const EffectAlgebra& b) {
    return canonical_key(a) < canonical_key(b);
  });
  return out;
}

std::vector<EffectAlgebra> enumerate_algebras(int max_size, const Caps& caps) {
  std::vector<EffectAlgebra> all;
  for (int n = 2; n <= max_size; ++n) {
    std::vector<EffectAlgebra> part = enumerate_exact(n, caps);
    all.insert(all.end(), std::make_move_iterator(part.begin()),
               std::make_move_iterator(part.end()));
  }
  return all;
}

// ---------------------------------------------------------------------------
// symbolic families

const char* property_name(Property p) {
  switch (p) {
    case Property::Atomic: return "atomic";
    case Property::Archimedean: return "archimedean";
    case Property::Complete: return "complete";
    case Property::BlockFinite: return "block-finite";
    case Property::AlmostOrthogonal: return "almost-orthogonal";
    case Property::TauIHausdorff: return "interval-topology-hausdorff";
    case Property::TauICompact: return "interval-topology-compact";
    case Property::CompactlyGenerated: return "compactly-generated";
    case Property::OContinuous: return "order-continuous";
    case Property::TauEqualities: return "topologies-coincide";
  }
  return "?";
}

namespace {

struct Engine {
  FamilyVerdict verdict;

  Truth value(Property p) const { return verdict.value(p); }

  bool conclude(Property p, Truth v, const std::string& rule,
                std::vector<Property> hyps) {
    Flag& f = verdict.flags[p];
    if (f.value != Truth::Unknown) return false;
    f.value = v;
    f.rule = rule;
    f.hypotheses = std::move(hyps);
    return true;
  }
};

}  // namespace

FamilyVerdict family_analyze(const SymbolicFamily& f) {
  if (f.sizes.empty()) throw InputError("family with no summands");
  for (const auto& s : f.sizes) {
    if (f.kind != FamilyKind::BooleanSum && !s)
      throw InputError("chain summands have finite length");
    if (s && *s < 2) throw InputError("summand size below 2");
  }

  const bool summandCountFinite = !f.infinitelyManySummands && !f.everyLengthAtLeastThree;
  const int summandCount =
      summandCountFinite ? static_cast<int>(f.sizes.size()) : -1;
  bool allAtomCountsFinite = true;
  if (f.kind == FamilyKind::BooleanSum) {
    for (const auto& s : f.sizes)
      if (!s) allAtomCountsFinite = false;
  }

  Engine eng;
  // structural facts read off the construction
  eng.conclude(Property::Atomic, Truth::True, "construction", {});
  eng.conclude(Property::Archimedean, Truth::True, "construction", {});
  eng.conclude(Property::Complete, Truth::True, "construction", {});
  eng.conclude(Property::BlockFinite,
               summandCountFinite ? Truth::True : Truth::False, "construction", {});
  {
    // an atom fails orthogonality against every atom of every other summand
    bool ao = summandCount == 1 || (summandCountFinite && allAtomCountsFinite);
    eng.conclude(Property::AlmostOrthogonal, ao ? Truth::True : Truth::False,
                 "atom-audit", {});
  }

  bool changed = true;
  while (changed) {
    changed = false;

    if (f.kind == FamilyKind::MvChain && eng.value(Property::Archimedean) == Truth::True &&
        eng.value(Property::Atomic) == Truth::True) {
      changed |= eng.conclude(Property::TauIHausdorff, Truth::True, "mv-hausdorff",
                              {Property::Archimedean, Property::Atomic});
      changed |= eng.conclude(Property::TauEqualities, Truth::True, "mv-hausdorff",
                              {Property::Archimedean, Property::Atomic});
    }

    if (eng.value(Property::AlmostOrthogonal) == Truth::True &&
        eng.value(Property::Archimedean) == Truth::True &&
        eng.value(Property::Atomic) == Truth::True) {
      std::vector<Property> hyps{Property::AlmostOrthogonal, Property::Archimedean,
                                 Property::Atomic};
      changed |= eng.conclude(Property::TauIHausdorff, Truth::True,
                              "hausdorff-of-almost-orthogonal", hyps);
      changed |= eng.conclude(Property::CompactlyGenerated, Truth::True,
                              "compact-generation-of-almost-orthogonal", hyps);
      changed |= eng.conclude(Property::OContinuous, Truth::True,
                              "compact-generation-of-almost-orthogonal", hyps);
      changed |= eng.conclude(Property::TauEqualities, Truth::True,
                              "topology-agreement-of-almost-orthogonal", hyps);
    }

    if (eng.value(Property::Complete) == Truth::True)
      changed |= eng.conclude(Property::TauICompact, Truth::True,
                              "compactness-iff-complete", {Property::Complete});
    if (eng.value(Property::Complete) == Truth::False)
      changed |= eng.conclude(Property::TauICompact, Truth::False,
                              "compactness-iff-complete", {});

    if (eng.value(Property::BlockFinite) == Truth::True &&
        eng.value(Property::Archimedean) == Truth::True &&
        eng.value(Property::Atomic) == Truth::True)
      changed |= eng.conclude(Property::TauIHausdorff, Truth::True,
                              "block-finite-hausdorff",
                              {Property::BlockFinite, Property::Archimedean,
                               Property::Atomic});

    if (f.kind == FamilyKind::ChainSum && !summandCountFinite) {
      // every element is a join of multiples of atoms, and those are compact
      changed |= eng.conclude(Property::CompactlyGenerated, Truth::True,
                              "chain-sum-example", {Property::Atomic});
      changed |= eng.conclude(Property::OContinuous, Truth::True,
                              "chain-sum-example", {Property::Atomic});
    }

    if (eng.value(Property::BlockFinite) == Truth::True &&
        eng.value(Property::Complete) == Truth::True &&
        eng.value(Property::Atomic) == Truth::True &&
        eng.value(Property::AlmostOrthogonal) == Truth::False) {
      std::vector<Property> hyps{Property::BlockFinite, Property::Complete,
                                 Property::Atomic};
      changed |= eng.conclude(Property::CompactlyGenerated, Truth::False,
                              "s-compact-generation-equivalence", hyps);
      changed |= eng.conclude(Property::OContinuous, Truth::False,
                              "s-compact-generation-equivalence", hyps);
      changed |= eng.conclude(Property::TauEqualities, Truth::False,
                              "s-compact-generation-equivalence", hyps);
    }

    if (eng.value(Property::Archimedean) == Truth::True &&
        eng.value(Property::Atomic) == Truth::True &&
        eng.value(Property::AlmostOrthogonal) == Truth::False) {
      std::vector<Property> hyps{Property::Archimedean, Property::Atomic};
      changed |= eng.conclude(Property::TauEqualities, Truth::False,
                              "almost-orthogonality-equivalence", hyps);
      if (eng.value(Property::OContinuous) == Truth::True)
        changed |= eng.conclude(Property::TauIHausdorff, Truth::False,
                                "almost-orthogonality-equivalence", hyps);
      if (eng.value(Property::TauIHausdorff) == Truth::True)
        changed |= eng.conclude(Property::OContinuous, Truth::False,
                                "almost-orthogonality-equivalence", hyps);
    }
  }
  return eng.verdict;
}

E1Description family_finite_cofinite(const SymbolicFamily& f) {
  bool infiniteSummand = false;
  if (f.kind == FamilyKind::BooleanSum)
    for (const auto& s : f.sizes)
      if (!s) infiniteSummand = true;
  if (infiniteSummand)
    return {FiniteCofiniteExtent::WithinSummandOnly,
            "finite joins of atoms within a single summand, and their supplements"};
  return {FiniteCofiniteExtent::EntireCarrier,
          "every element is finite or cofinite"};
}

EffectAlgebra family_truncate(const SymbolicFamily& f, const TruncationParams& p,
                              const Caps& caps) {
  if (p.summands < 1) throw InputError("truncation needs at least one summand");

  std::vector<int> sizes;
  if (f.everyLengthAtLeastThree) {
    for (int i = 0; i < p.summands; ++i) sizes.push_back(3 + i);
  } else if (f.infinitelyManySummands) {
    for (int i = 0; i < p.summands; ++i)
      sizes.push_back(f.sizes[0] ? *f.sizes[0] : p.atomsPerSummand);
  } else {
    for (const auto& s : f.sizes) sizes.push_back(s ? *s : p.atomsPerSummand);
  }

  long carrier = 2;
  for (int s : sizes)
    carrier += f.kind == FamilyKind::BooleanSum ? (1L << s) - 2 : s - 2;
  if (carrier > static_cast<long>(caps.truncate))
    throw CapExceeded("truncation exceeds the carrier cap");

  if (f.kind == FamilyKind::BooleanSum) return hsum_of_booleans(sizes);
  if (sizes.size() == 1) return chain(sizes[0]);
  return hsum_of_chains(sizes);
}

// ---------------------------------------------------------------------------
// grammar

namespace {

struct Cursor {
  const std::string& s;
  size_t i = 0;

  void skip_ws() {
    while (i < s.size() && s[i] == ' ') ++i;
  }
  bool eat(char c) {
    skip_ws();
    if (i < s.size() && s[i] == c) {
      ++i;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw InputError("spec error at position " + std::to_string(i) + ": " + what);
  }
  std::string word() {
    skip_ws();
    size_t start = i;
    while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])))) ++i;
    return s.substr(start, i - start);
  }
};

SpecTerm parse_term(Cursor& c) {
  SpecTerm t;
  std::string kind = c.word();
  if (kind == "chain") t.isChain = true;
  else if (kind == "boolean") t.isChain = false;
  else c.fail("expected 'chain' or 'boolean', got '" + kind + "'");
  if (!c.eat(':')) c.fail("expected ':' after the kind");
  std::string size = c.word();
  if (size == "inf") {
    if (t.isChain) c.fail("chains have finite length; use 'any' for the all-lengths schema");
    t.size = std::nullopt;
  } else if (size == "any") {
    if (!t.isChain) c.fail("'any' applies to chains only");
    t.allLengths = true;
  } else {
    try {
      t.size = std::stoi(size);
    } catch (const std::exception&) {
      c.fail("expected a size, 'inf' or 'any', got '" + size + "'");
    }
    if (*t.size < 2) c.fail("summand size below 2");
  }
  return t;
}

}  // namespace

GenSpec parse_spec(const std::string& text) {
  Cursor c{text};
  GenSpec spec;
  c.skip_ws();
  if (text.compare(c.i, 5, "hsum(") == 0) {
    spec.isHsum = true;
    c.i += 5;
    spec.terms.push_back(parse_term(c));
    if (c.eat('*')) {
      std::string count = c.word();
      if (count == "inf") spec.repeatInfinite = true;
      else {
        try {
          spec.repeat = std::stoi(count);
        } catch (const std::exception&) {
          c.fail("expected a count or 'inf', got '" + count + "'");
        }
        if (*spec.repeat < 1) c.fail("count below 1");
      }
    } else {
      while (c.eat(',')) spec.terms.push_back(parse_term(c));
    }
    if (!c.eat(')')) c.fail("expected ')'");
  } else {
    spec.terms.push_back(parse_term(c));
  }
  c.skip_ws();
  if (c.i != text.size()) c.fail("trailing input");
  return spec;
}

EffectAlgebra instantiate(const GenSpec& spec, const Caps& caps,
                          std::vector<std::string>* warnings) {
  if (spec.repeatInfinite)
    throw InputError("infinite spec: use the family analysis, or truncate");
  std::vector<SpecTerm> terms;
  if (spec.repeat) {
    for (int i = 0; i < *spec.repeat; ++i) terms.push_back(spec.terms[0]);
  } else {
    terms = spec.terms;
  }
  for (const SpecTerm& t : terms)
    if (!t.size)
      throw InputError("infinite summand: use the family analysis, or truncate");

  long carrier = 2;
  for (const SpecTerm& t : terms)
    carrier += t.isChain ? *t.size - 2 : (1L << *t.size) - 2;
  if (carrier > static_cast<long>(caps.truncate))
    throw CapExceeded("spec instantiates beyond the carrier cap");

  if (terms.size() == 1 && !spec.isHsum) {
    const SpecTerm& t = terms[0];
    return t.isChain ? chain(*t.size) : boolean_algebra(*t.size);
  }

  int chainIdx = 0, boolIdx = 0;
  int boolCount = 0;
  for (const SpecTerm& t : terms)
    if (!t.isChain) ++boolCount;
  std::vector<EffectAlgebra> parts;
  for (const SpecTerm& t : terms) {
    if (t.isChain)
      parts.push_back(chain(*t.size, spreadsheet_letter(chainIdx++)));
    else
      parts.push_back(boolean_algebra(
          *t.size, boolCount > 1 ? std::to_string(++boolIdx) : std::string()));
  }
  return horizontal_sum(parts, warnings);
}

SymbolicFamily to_family(const GenSpec& spec) {
  SymbolicFamily f;
  bool allChain = true, allBool = true;
  for (const SpecTerm& t : spec.terms) {
    allChain &= t.isChain;
    allBool &= !t.isChain;
  }
  if (!allChain && !allBool)
    throw InputError("family analysis covers kind-homogeneous sums only");

  if (allChain && spec.terms.size() == 1 && !spec.isHsum) {
    f.kind = FamilyKind::MvChain;
    f.sizes = {spec.terms[0].size};
    if (spec.terms[0].allLengths) throw InputError("'any' needs an hsum context");
    return f;
  }
  f.kind = allChain ? FamilyKind::ChainSum : FamilyKind::BooleanSum;
  f.infinitelyManySummands = spec.repeatInfinite;
  for (const SpecTerm& t : spec.terms) {
    if (t.allLengths) {
      f.everyLengthAtLeastThree = true;
      f.sizes.push_back(3);
    } else {
      f.sizes.push_back(t.size);
    }
  }
  if (spec.repeat && *spec.repeat > 1) {
    std::vector<std::optional<int>> expanded;
    for (int i = 0; i < *spec.repeat; ++i) expanded.push_back(f.sizes[0]);
    f.sizes = std::move(expanded);
  }
  return f;
}

}  // namespace ea
