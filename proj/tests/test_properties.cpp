#include "doctest.h"

#include <algorithm>
#include <random>

#include "ea/generators.hpp"
#include "ea/linear.hpp"
#include "ea/states.hpp"
#include "ea/structure.hpp"
#include "support/corpus.hpp"

using namespace ea;
using namespace ea::testsupport;

TEST_CASE("the dual of the dual is the original table") {
  for (const CorpusEntry& entry : small_corpus()) {
    EffectAlgebra e = entry.alg;
    REQUIRE(validate(e).ok);
    EffectAlgebra dd = dual_algebra(dual_algebra(e));
    CHECK(dd.sum == e.sum);
    CHECK(dd.zero == e.zero);
    CHECK(dd.one == e.one);
  }
}

TEST_CASE("canonical keys are invariant under interior relabeling") {
  std::mt19937_64 rng(7);
  std::vector<EffectAlgebra> pool = enumerate_algebras(6);
  for (const CorpusEntry& entry : small_corpus())
    if (entry.alg.size() <= 8) pool.push_back(entry.alg);

  for (EffectAlgebra& e : pool) {
    REQUIRE(validate(e).ok);
    const int n = e.size();
    std::vector<int> pi(n);
    for (int i = 0; i < n; ++i) pi[i] = i;
    // permute everything except the bounds
    std::vector<int> interior;
    for (int i = 0; i < n; ++i)
      if (i != e.zero && i != e.one) interior.push_back(i);
    std::vector<int> shuffled = interior;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    for (size_t i = 0; i < interior.size(); ++i) pi[interior[i]] = shuffled[i];

    std::vector<std::string> labels(n);
    for (int i = 0; i < n; ++i) labels[pi[i]] = e.label(i);
    std::vector<std::array<int, 3>> triples;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        int z = e.sum.at(i, j);
        if (z != kUndefined && i != e.zero && j != e.zero)
          triples.push_back({pi[i], pi[j], pi[z]});
      }
    EffectAlgebra permuted =
        make_algebra(std::move(labels), triples, pi[e.zero], pi[e.one]);
    REQUIRE(validate(permuted).ok);
    CHECK(canonical_key(permuted) == canonical_key(e));
  }
}

TEST_CASE("the 2-of-3 closure of any set containing 1 is a sub-effect algebra") {
  std::mt19937_64 rng(11);
  for (const CorpusEntry& entry : small_corpus()) {
    Analyzed an = analyze_base(entry.alg);
    const int n = an.alg.size();
    std::uniform_int_distribution<int> pick(0, n - 1);
    for (int trial = 0; trial < 20; ++trial) {
      Bits q(n);
      q.set(an.alg.one);
      q.set(pick(rng));
      q.set(pick(rng));
      bool grew = true;
      while (grew) {
        grew = false;
        for (int a = 0; a < n; ++a)
          for (int b = a; b < n; ++b) {
            int c = an.alg.sum.at(a, b);
            if (c == kUndefined) continue;
            int inside = q.test(a) + q.test(b) + q.test(c);
            if (inside != 2) continue;
            q.set(a);
            q.set(b);
            q.set(c);
            grew = true;
          }
      }
      CHECK(is_sub_effect_algebra(an.alg, an.ord, q).isSubEffectAlgebra);
    }
  }
}

namespace {

/// Vertex route for a pinned state polytope: nullspace form plus brute-force
/// vertex enumeration. Returns nullopt when the affine dimension is too big
/// for the brute force.
std::optional<std::vector<RatVec>> vertex_route(const StatePolytope& p) {
  ReducedSystem rs = reduce_equalities(p.rows, p.rhs);
  if (!rs.consistent) return std::vector<RatVec>{};
  AffineForm form = affine_solutions(rs);
  const int d = static_cast<int>(form.freeCols.size());
  const int n = p.vars;
  if (d > 4) return std::nullopt;
  if (d == 0) {
    for (const Rational& v : form.particular)
      if (v < 0 || v > 1) return std::vector<RatVec>{};
    return std::vector<RatVec>{form.particular};
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
      if (form.particular[j] < 0 || form.particular[j] > 1)
        return std::vector<RatVec>{};
      continue;
    }
    HalfSpace upper{dir, Rational(1) - form.particular[j]};
    for (auto& v : dir) v = -v;
    cons.push_back(std::move(upper));
    cons.push_back(HalfSpace{dir, form.particular[j]});
  }
  std::vector<RatVec> points;
  for (const RatVec& t : enumerate_vertices(cons, d, 5'000'000)) {
    RatVec v = form.particular;
    for (int f = 0; f < d; ++f)
      for (int j = 0; j < n; ++j) v[j] += form.basis[f][j] * t[f];
    points.push_back(std::move(v));
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  return points;
}

}  // namespace

TEST_CASE("simplex and vertex enumeration agree on random pinned polytopes") {
  std::mt19937_64 rng(13);
  const Rational values[] = {Rational(0), Rational(1, 4), Rational(1, 3),
                             Rational(1, 2), Rational(1)};
  int agreedFeasible = 0, agreedInfeasible = 0;
  for (const CorpusEntry& entry : small_corpus()) {
    EffectAlgebra e = entry.alg;
    REQUIRE(validate(e).ok);
    const int n = e.size();
    std::uniform_int_distribution<int> pickVar(0, n - 1);
    std::uniform_int_distribution<int> pickVal(0, 4);
    for (int trial = 0; trial < 30; ++trial) {
      StatePolytope p = build_state_polytope(e);
      int pins = trial % 3;
      for (int k = 0; k < pins; ++k) {
        RatVec row(n, 0);
        row[pickVar(rng)] = 1;
        p.rows.push_back(std::move(row));
        p.rhs.push_back(values[pickVal(rng)]);
        p.rowNames.push_back("pin");
      }
      auto vertices = vertex_route(p);
      if (!vertices) continue;  // dimension too large for the oracle
      StateSearch search = solve_state_polytope(e, std::move(p));
      if (search.state) {
        REQUIRE_FALSE(vertices->empty());
        // the lexicographically least point of a polytope is its least vertex
        CHECK(search.state->values == vertices->front());
        ++agreedFeasible;
      } else {
        CHECK(vertices->empty());
        REQUIRE(search.certificate.has_value());
        ++agreedInfeasible;
      }
    }
  }
  CHECK(agreedFeasible > 0);
  CHECK(agreedInfeasible > 0);
}
