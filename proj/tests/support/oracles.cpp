#include "support/oracles.hpp"

#include <algorithm>
#include <numeric>

namespace ea::testsupport {

using ea::kUndefined;
using ea::PartialSumTable;

bool naive_effect_algebra(const PartialSumTable& t, int zero, int one) {
  const int n = t.size();
  if (n < 2 || zero < 0 || one < 0 || zero >= n || one >= n || zero == one) return false;

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      int v = t.at(i, j);
      if (v != kUndefined && (v < 0 || v >= n)) return false;
      if (t.at(j, i) != v) return false;  // commutativity, literally
    }

  // 1 + a defined forces a = 0
  for (int a = 0; a < n; ++a)
    if (a != zero && t.at(one, a) != kUndefined) return false;

  // exactly one supplement
  for (int a = 0; a < n; ++a) {
    int count = 0;
    for (int b = 0; b < n; ++b)
      if (t.at(a, b) == one) ++count;
    if (count != 1) return false;
  }

  // associativity with the definedness biconditional
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        bool lhsDef = t.at(a, b) != kUndefined && t.at(t.at(a, b), c) != kUndefined;
        bool rhsDef = t.at(b, c) != kUndefined && t.at(a, t.at(b, c)) != kUndefined;
        if (lhsDef != rhsDef) return false;
        if (lhsDef && t.at(t.at(a, b), c) != t.at(a, t.at(b, c))) return false;
      }

  return true;
}

std::optional<int> oracle_meet(const ea::EffectAlgebra& e, int a, int b) {
  const int n = e.size();
  // leq by the defining witness search
  auto leq = [&](int x, int y) {
    for (int c = 0; c < n; ++c)
      if (e.sum.at(x, c) == y) return true;
    return false;
  };
  for (int g = 0; g < n; ++g) {
    if (!leq(g, a) || !leq(g, b)) continue;
    bool greatest = true;
    for (int c = 0; c < n; ++c)
      if (leq(c, a) && leq(c, b) && !leq(c, g)) greatest = false;
    if (greatest) return g;
  }
  return std::nullopt;
}

std::optional<int> oracle_join(const ea::EffectAlgebra& e, int a, int b) {
  const int n = e.size();
  auto leq = [&](int x, int y) {
    for (int c = 0; c < n; ++c)
      if (e.sum.at(x, c) == y) return true;
    return false;
  };
  for (int g = 0; g < n; ++g) {
    if (!leq(a, g) || !leq(b, g)) continue;
    bool least = true;
    for (int c = 0; c < n; ++c)
      if (leq(a, c) && leq(b, c) && !leq(g, c)) least = false;
    if (least) return g;
  }
  return std::nullopt;
}

std::vector<int16_t> oracle_canonical(const PartialSumTable& t) {
  const int n = t.size();
  std::vector<int> interior;
  for (int i = 1; i <= n - 2; ++i) interior.push_back(i);

  std::vector<int16_t> best;
  std::vector<int> perm = interior;
  do {
    std::vector<int> to_canon(n);
    to_canon[0] = 0;
    to_canon[n - 1] = n - 1;
    for (size_t i = 0; i < perm.size(); ++i) to_canon[perm[i]] = static_cast<int>(i) + 1;
    std::vector<int> from(n);
    for (int i = 0; i < n; ++i) from[to_canon[i]] = i;
    std::vector<int16_t> key;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        int v = t.at(from[i], from[j]);
        key.push_back(static_cast<int16_t>(v == kUndefined ? -1 : to_canon[v]));
      }
    if (best.empty() || key < best) best = std::move(key);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

OracleEnumeration oracle_enumerate(int n, bool fix_zero_rows) {
  OracleEnumeration result;
  const int zero = 0, one = n - 1;

  std::vector<std::pair<int, int>> cells;
  const int first = fix_zero_rows ? 1 : 0;
  for (int i = first; i < n; ++i)
    for (int j = i; j < n; ++j) cells.push_back({i, j});

  const int values = n + 1;  // undefined plus every element
  std::vector<int> digit(cells.size(), 0);

  PartialSumTable t(n);
  if (fix_zero_rows)
    for (int x = 0; x < n; ++x) t.set(x, 0, x);
  auto apply = [&](size_t c) {
    int v = digit[c] - 1;  // 0 encodes undefined
    t.set(cells[c].first, cells[c].second, v < 0 ? kUndefined : v);
  };
  while (true) {
    ++result.tablesScanned;
    if (naive_effect_algebra(t, zero, one)) {
      result.canonicalTables.insert(oracle_canonical(t));
    }

    size_t c = 0;
    while (c < cells.size() && digit[c] == values - 1) {
      digit[c] = 0;
      apply(c);
      ++c;
    }
    if (c == cells.size()) break;
    ++digit[c];
    apply(c);
  }
  result.isoClasses = static_cast<int>(result.canonicalTables.size());
  return result;
}

}  // namespace ea::testsupport
