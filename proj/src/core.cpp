#include "ea/core.hpp"

#include <algorithm>
#include <sstream>

namespace ea {

const char* axiom_name(Axiom a) {
  switch (a) {
    case Axiom::Structure: return "structure";
    case Axiom::Associativity: return "associativity";
    case Axiom::Supplement: return "unique-supplement";
    case Axiom::UnitMinimal: return "unit-minimal";
  }
  return "?";
}

std::optional<int> EffectAlgebra::find(const std::string& l) const {
  for (const auto& id : carrier)
    if (id.label == l) return id.index;
  return std::nullopt;
}

Caps Caps::parse(const std::string& keyvals) {
  Caps caps;
  std::stringstream ss(keyvals);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos) throw InputError("EA_CAPS entry without '=': " + item);
    std::string key = item.substr(0, eq);
    std::size_t value = 0;
    try {
      value = static_cast<std::size_t>(std::stoul(item.substr(eq + 1)));
    } catch (const std::exception&) {
      throw InputError("EA_CAPS entry with non-numeric value: " + item);
    }
    if (key == "topology") caps.topology = value;
    else if (key == "subsets") caps.subsets = value;
    else if (key == "vertices") caps.vertices = value;
    else if (key == "enumerate") caps.enumerate = value;
    else if (key == "truncate") caps.truncate = value;
    else throw InputError("EA_CAPS unknown key: " + key);
  }
  return caps;
}

EffectAlgebra make_algebra(std::vector<std::string> labels,
                           const std::vector<std::array<int, 3>>& triples,
                           int zero, int one) {
  const int n = static_cast<int>(labels.size());
  if (n < 2) throw InputError("carrier needs at least the two elements 0 and 1");
  if (zero < 0 || zero >= n || one < 0 || one >= n || zero == one)
    throw InputError("zero/one designation out of range or equal");
  for (int i = 0; i < n; ++i) {
    if (labels[i].empty()) throw InputError("empty element label");
    for (int j = i + 1; j < n; ++j)
      if (labels[i] == labels[j]) throw InputError("duplicate element label: " + labels[i]);
  }

  EffectAlgebra e;
  e.carrier.reserve(n);
  for (int i = 0; i < n; ++i) e.carrier.push_back({i, std::move(labels[i])});
  e.sum = PartialSumTable(n);
  e.zero = zero;
  e.one = one;

  for (int x = 0; x < n; ++x) e.sum.set(x, zero, x);
  for (size_t t = 0; t < triples.size(); ++t) {
    auto [x, y, z] = triples[t];
    if (x < 0 || x >= n || y < 0 || y >= n || z < 0 || z >= n)
      throw InputError("sum triple #" + std::to_string(t) + " references an unknown element");
    int prev = e.sum.at(x, y);
    if (prev != kUndefined && prev != z)
      throw InputError("contradictory sum triples for pair (" + e.label(x) + "," +
                       e.label(y) + "): " + e.label(prev) + " vs " + e.label(z));
    e.sum.set(x, y, z);
  }
  return e;
}

ValidationReport validate(const PartialSumTable& table, int zero, int one,
                          bool stop_at_first) {
  ValidationReport rep;
  const int n = table.size();
  auto add = [&](Axiom ax, int a, int b, int c, std::string detail) {
    rep.ok = false;
    rep.violations.push_back({ax, {a, b, c}, std::move(detail)});
  };

  if (n < 2) {
    add(Axiom::Structure, -1, -1, -1, "carrier smaller than 2");
    return rep;
  }
  if (zero < 0 || zero >= n || one < 0 || one >= n || zero == one) {
    add(Axiom::Structure, zero, one, -1, "bad zero/one designation");
    return rep;
  }
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      int v = table.at(i, j);
      if (v != kUndefined && (v < 0 || v >= n)) {
        add(Axiom::Structure, i, j, v, "table entry outside carrier");
        if (stop_at_first) return rep;
      }
    }
  if (!rep.ok) return rep;  // axiom checks assume in-range entries

  // unit-minimal: 1+a defined only for a = 0
  for (int a = 0; a < n; ++a) {
    if (a != zero && table.defined(one, a)) {
      add(Axiom::UnitMinimal, one, a, table.at(one, a), "1+a defined with a != 0");
      if (stop_at_first) return rep;
    }
  }

  // unique supplement
  for (int a = 0; a < n; ++a) {
    int found = -1;
    bool dup = false;
    for (int b = 0; b < n; ++b) {
      if (table.at(a, b) == one) {
        if (found < 0) {
          found = b;
        } else {
          add(Axiom::Supplement, a, found, b, "two supplements");
          dup = true;
          if (stop_at_first) return rep;
          break;
        }
      }
    }
    if (found < 0 && !dup) {
      add(Axiom::Supplement, a, -1, -1, "no supplement");
      if (stop_at_first) return rep;
    }
  }

  // associativity, with the definedness biconditional
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const int ab = table.at(a, b);
      for (int c = 0; c < n; ++c) {
        const int bc = table.at(b, c);
        const int lhs = ab == kUndefined ? kUndefined : table.at(ab, c);
        const int rhs = bc == kUndefined ? kUndefined : table.at(a, bc);
        if (lhs != rhs) {
          add(Axiom::Associativity, a, b, c,
              lhs == kUndefined   ? "(a+b)+c undefined, a+(b+c) defined"
              : rhs == kUndefined ? "(a+b)+c defined, a+(b+c) undefined"
                                  : "sides defined but different");
          if (stop_at_first) return rep;
        }
      }
    }

  return rep;
}

ValidationReport validate(EffectAlgebra& e, bool stop_at_first) {
  ValidationReport rep = validate(e.sum, e.zero, e.one, stop_at_first);
  e.validated = rep.ok;
  return rep;
}

int OrderStructure::minus(int b, int a) const {
  if (!leq(a, b))
    throw InputError("difference requested for an incomparable pair");
  return minusTable[static_cast<size_t>(b) * n + a];
}

namespace {

[[noreturn]] void internal_broken(const char* what) {
  throw std::logic_error(std::string("derived order inconsistent on a validated instance: ") + what);
}

}  // namespace

OrderStructure derive_order(const EffectAlgebra& e) {
  if (!e.validated) throw InputError("derive_order requires a validated instance");
  const int n = e.size();
  OrderStructure o;
  o.n = n;
  o.up.assign(n, Bits(n));
  o.down.assign(n, Bits(n));
  o.supp.assign(n, -1);
  o.minusTable.assign(static_cast<size_t>(n) * n, -1);
  o.meetTable.assign(static_cast<size_t>(n) * n, -1);
  o.joinTable.assign(static_cast<size_t>(n) * n, -1);

  // a <= b via the existential witness a + c = b; the witness is b - a.
  for (int a = 0; a < n; ++a)
    for (int c = 0; c < n; ++c) {
      int b = e.sum.at(a, c);
      if (b == kUndefined) continue;
      int& slot = o.minusTable[static_cast<size_t>(b) * n + a];
      if (slot != -1 && slot != c) internal_broken("difference not unique");
      slot = c;
      o.up[a].set(b);
      o.down[b].set(a);
    }

  for (int a = 0; a < n; ++a) {
    if (!o.up[a].test(a)) internal_broken("order not reflexive");
    for (int b = 0; b < n; ++b)
      if (a != b && o.up[a].test(b) && o.up[b].test(a)) internal_broken("order not antisymmetric");
  }
  for (int a = 0; a < n; ++a)
    for (int b = static_cast<int>(o.up[a].find_first()); b != -1;
         b = static_cast<int>(o.up[a].find_next(b)))
      if (!o.up[b].is_subset_of(o.up[a])) internal_broken("order not transitive");
  if (o.down[e.zero].count() != 1 || o.up[e.one].count() != 1)
    internal_broken("bounds are not extreme");

  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b)
      if (e.sum.at(a, b) == e.one) o.supp[a] = b;
    if (o.supp[a] < 0) internal_broken("missing supplement");
  }

  o.isLattice = true;
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      Bits lows = o.down[a] & o.down[b];
      int m = -1;
      for (int g = static_cast<int>(lows.find_first()); g != -1;
           g = static_cast<int>(lows.find_next(g)))
        if (lows.is_subset_of(o.down[g])) { m = g; break; }
      Bits ups = o.up[a] & o.up[b];
      int j = -1;
      for (int g = static_cast<int>(ups.find_first()); g != -1;
           g = static_cast<int>(ups.find_next(g)))
        if (ups.is_subset_of(o.up[g])) { j = g; break; }
      o.meetTable[static_cast<size_t>(a) * n + b] = m;
      o.meetTable[static_cast<size_t>(b) * n + a] = m;
      o.joinTable[static_cast<size_t>(a) * n + b] = j;
      o.joinTable[static_cast<size_t>(b) * n + a] = j;
      if (m < 0 || j < 0) o.isLattice = false;
    }

  return o;
}

SubAlgebraCheck is_sub_effect_algebra(const EffectAlgebra& e,
                                      const OrderStructure& ord, const Bits& q) {
  SubAlgebraCheck res;
  const int n = e.size();
  if (!q.test(e.one)) {
    res.witness = Violation{Axiom::Structure, {e.one, -1, -1}, "1 missing"};
    return res;
  }
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      int c = e.sum.at(a, b);
      if (c == kUndefined) continue;
      int inside = (q.test(a) ? 1 : 0) + (q.test(b) ? 1 : 0) + (q.test(c) ? 1 : 0);
      if (inside == 2) {
        res.witness = Violation{Axiom::Structure, {a, b, c}, "two of a,b,a+b inside, third outside"};
        return res;
      }
    }
  res.isSubEffectAlgebra = true;

  res.isSublattice = ord.isLattice;
  if (ord.isLattice) {
    for (int a = static_cast<int>(q.find_first()); a != -1 && res.isSublattice;
         a = static_cast<int>(q.find_next(a)))
      for (int b = static_cast<int>(q.find_first()); b != -1;
           b = static_cast<int>(q.find_next(b)))
        if (!q.test(ord.meet(a, b)) || !q.test(ord.join(a, b))) {
          res.isSublattice = false;
          break;
        }
  }
  return res;
}

EffectAlgebra dual_algebra(const EffectAlgebra& e) {
  if (!e.validated) throw InputError("dual_algebra requires a validated instance");
  const int n = e.size();
  std::vector<int> supp(n, -1);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (e.sum.at(a, b) == e.one) supp[a] = b;

  EffectAlgebra d;
  d.carrier = e.carrier;
  d.sum = PartialSumTable(n);
  d.zero = e.one;
  d.one = e.zero;
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      int s = e.sum.at(supp[a], supp[b]);
      if (s != kUndefined) d.sum.set(a, b, supp[s]);
    }
  ValidationReport rep = validate(d);
  if (!rep.ok)
    throw FalsificationError("order dual of a valid instance failed validation");
  return d;
}

EffectAlgebra restrict_to(const EffectAlgebra& e, const OrderStructure& ord,
                          const Bits& q) {
  SubAlgebraCheck chk = is_sub_effect_algebra(e, ord, q);
  if (!chk.isSubEffectAlgebra)
    throw InputError("restrict_to needs a sub-effect algebra");
  std::vector<int> to_new(e.size(), -1);
  std::vector<std::string> labels;
  for (int a = static_cast<int>(q.find_first()); a != -1;
       a = static_cast<int>(q.find_next(a))) {
    to_new[a] = static_cast<int>(labels.size());
    labels.push_back(e.label(a));
  }
  std::vector<std::array<int, 3>> triples;
  for (int a = static_cast<int>(q.find_first()); a != -1;
       a = static_cast<int>(q.find_next(a)))
    for (int b = static_cast<int>(q.find_first()); b != -1;
         b = static_cast<int>(q.find_next(b))) {
      int c = e.sum.at(a, b);
      if (c != kUndefined) triples.push_back({to_new[a], to_new[b], to_new[c]});
    }
  EffectAlgebra sub = make_algebra(std::move(labels), triples, to_new[e.zero], to_new[e.one]);
  ValidationReport rep = validate(sub);
  if (!rep.ok)
    throw FalsificationError("sub-effect algebra restriction failed validation");
  return sub;
}

Analyzed analyze_base(EffectAlgebra e) {
  if (!e.validated) {
    ValidationReport rep = validate(e);
    if (!rep.ok) throw InputError("instance fails the axioms; run verification for witnesses");
  }
  OrderStructure ord = derive_order(e);
  return Analyzed{std::move(e), std::move(ord)};
}

}  // namespace ea
