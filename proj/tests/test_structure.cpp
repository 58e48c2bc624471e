#include "doctest.h"

#include "ea/generators.hpp"
#include "ea/structure.hpp"
#include "support/corpus.hpp"

using namespace ea;
using namespace ea::testsupport;

namespace {

struct Full {
  EffectAlgebra alg;
  OrderStructure ord;
  AtomTable at;
};

Full full(EffectAlgebra e) {
  Analyzed an = analyze_base(std::move(e));
  AtomTable at = atom_analysis(an.alg, an.ord);
  return {std::move(an.alg), std::move(an.ord), std::move(at)};
}

}  // namespace

TEST_CASE("atoms and orders of the named small instances") {
  SUBCASE("3-chain") {
    Full f = full(chain(3));
    CHECK(f.at.atoms.count() == 1);
    CHECK(f.at.atoms.test(1));
    CHECK(f.at.ord[1] == 2);
    CHECK(f.at.ord[0] == kOrdInfinite);
    CHECK(f.at.isAtomic);
    CHECK(f.at.isArchimedean);
  }
  SUBCASE("boolean square") {
    Full f = full(boolean_algebra(2));
    CHECK(f.at.atoms.count() == 2);
    CHECK(f.at.ord[*f.alg.find("p")] == 1);
    CHECK(f.at.ord[*f.alg.find("q")] == 1);
  }
  SUBCASE("hs2c3") {
    Full f = full(load_fixture("hs2c3"));
    CHECK(f.at.atoms.count() == 2);
    CHECK(f.at.ord[*f.alg.find("a")] == 2);
    CHECK(f.at.ord[*f.alg.find("b")] == 2);
  }
}

TEST_CASE("compatibility") {
  Full b4 = full(boolean_algebra(2));
  CHECK(compatible(b4.alg, b4.ord, *b4.alg.find("p"), *b4.alg.find("q")));

  Full hs = full(load_fixture("hs2c3"));
  CHECK_FALSE(compatible(hs.alg, hs.ord, *hs.alg.find("a"), *hs.alg.find("b")));

  for (const CorpusEntry& entry : small_corpus()) {
    Full f = full(entry.alg);
    for (int x = 0; x < f.alg.size(); ++x) {
      CHECK(compatible(f.alg, f.ord, x, f.alg.zero));
      CHECK(compatible(f.alg, f.ord, x, f.alg.one));
      CHECK(compatible(f.alg, f.ord, x, x));
    }
  }
}

TEST_CASE("blocks of the named instances") {
  SUBCASE("hs2c3 splits into its two chains") {
    Full f = full(load_fixture("hs2c3"));
    BlockDecomposition bd = blocks(f.alg, f.ord);
    REQUIRE(bd.blocks.size() == 2);
    int a = *f.alg.find("a"), b = *f.alg.find("b");
    CHECK(bd.blocks[0].test(a));
    CHECK_FALSE(bd.blocks[0].test(b));
    CHECK(bd.blocks[1].test(b));
    CHECK_FALSE(bd.isMV);
    CHECK(bd.blockIntersection.count() == 2);  // the bounds
    CHECK(bd.center.count() == 2);
  }
  SUBCASE("boolean algebras are single-block") {
    Full f = full(boolean_algebra(2));
    BlockDecomposition bd = blocks(f.alg, f.ord);
    CHECK(bd.blocks.size() == 1);
    CHECK(bd.isMV);
  }
  SUBCASE("two boolean squares glued") {
    Full f = full(hsum_of_booleans({2, 2}));
    BlockDecomposition bd = blocks(f.alg, f.ord);
    CHECK(bd.blocks.size() == 2);
    CHECK(bd.isBlockFinite);
  }
}

TEST_CASE("block structure facts on the small corpus") {
  for (const CorpusEntry& entry : small_corpus()) {
    CAPTURE(entry.name);
    Full f = full(entry.alg);
    BlockDecomposition bd = blocks(f.alg, f.ord);
    Bits covered(f.alg.size());
    for (const Bits& m : bd.blocks) {
      covered |= m;
      // atoms of the block, taken as an algebra of its own, are atoms of the whole
      EffectAlgebra sub = restrict_to(f.alg, f.ord, m);
      OrderStructure subOrd = derive_order(sub);
      AtomTable subAt = atom_analysis(sub, subOrd);
      std::vector<int> members;
      for (int i = static_cast<int>(m.find_first()); i != -1;
           i = static_cast<int>(m.find_next(i)))
        members.push_back(i);
      for (int i = 0; i < sub.size(); ++i)
        if (subAt.atoms.test(i)) CHECK(f.at.atoms.test(members[i]));
    }
    CHECK(covered.count() == static_cast<size_t>(f.alg.size()));
    CHECK(is_sub_effect_algebra(f.alg, f.ord, bd.blockIntersection).isSubEffectAlgebra);
    CHECK(is_sub_effect_algebra(f.alg, f.ord, bd.center).isSubEffectAlgebra);
  }
}

TEST_CASE("sharp elements") {
  Full hs = full(load_fixture("hs2c3"));
  Bits sharp = sharp_elements(hs.alg, hs.ord);
  CHECK(sharp.count() == 2);  // a ^ a' = a is unsharp, same for b

  Full b4 = full(boolean_algebra(2));
  CHECK(sharp_elements(b4.alg, b4.ord).count() == 4);

  Full c3 = full(chain(3));
  CHECK(sharp_elements(c3.alg, c3.ord).count() == 2);
}

TEST_CASE("decompositions of the named instances") {
  SUBCASE("3-chain top is twice its atom") {
    Full f = full(chain(3));
    Decomposition dec = decompose(f.alg, f.ord, f.at, f.alg.one);
    REQUIRE(dec.terms.size() == 1);
    CHECK(dec.terms[0] == std::pair<int, int>{1, 2});
  }
  SUBCASE("boolean square top is the sum of its atoms") {
    Full f = full(boolean_algebra(2));
    Decomposition dec = decompose(f.alg, f.ord, f.at, f.alg.one);
    REQUIRE(dec.terms.size() == 2);
    CHECK(dec.terms[0].second == 1);
    CHECK(dec.terms[1].second == 1);
  }
  SUBCASE("hs2c3 top prefers the least-index atom") {
    Full f = full(load_fixture("hs2c3"));
    Decomposition dec = decompose(f.alg, f.ord, f.at, f.alg.one);
    REQUIRE(dec.terms.size() == 1);
    CHECK(dec.terms[0].first == *f.alg.find("a"));
    CHECK(dec.terms[0].second == 2);
  }
  SUBCASE("zero decomposes into nothing") {
    Full f = full(chain(3));
    CHECK(decompose(f.alg, f.ord, f.at, f.alg.zero).terms.empty());
  }
  SUBCASE("every element of every small instance reconstructs") {
    for (const CorpusEntry& entry : small_corpus()) {
      Full f = full(entry.alg);
      for (int x = 0; x < f.alg.size(); ++x)
        if (x != f.alg.zero) decompose(f.alg, f.ord, f.at, x);  // self-verifying
    }
  }
}

TEST_CASE("almost-orthogonality witness sets use the strict criterion") {
  SUBCASE("hs2c3") {
    Full f = full(load_fixture("hs2c3"));
    AOReport rep = almost_orthogonality(f.alg, f.ord, f.at);
    int a = *f.alg.find("a"), b = *f.alg.find("b");
    CHECK(rep.perAtom.at(a).count() == 1);
    CHECK(rep.perAtom.at(a).test(b));
    CHECK(rep.perAtom.at(b).test(a));
    const AOWitness& w = rep.witnesses.at({a, 1});
    REQUIRE(w.list.size() == 2);
    CHECK(w.list[0] == std::pair<int, int>{b, 1});
    CHECK(w.list[1] == std::pair<int, int>{a, 2});
  }
  SUBCASE("3-chain") {
    Full f = full(chain(3));
    AOReport rep = almost_orthogonality(f.alg, f.ord, f.at);
    CHECK(rep.perAtom.at(1).count() == 0);  // a <= a'
    const AOWitness& w = rep.witnesses.at({1, 1});
    REQUIRE(w.list.size() == 1);
    CHECK(w.list[0] == std::pair<int, int>{1, 2});
  }
  SUBCASE("boolean square: a sharp atom is not below its supplement") {
    Full f = full(boolean_algebra(2));
    AOReport rep = almost_orthogonality(f.alg, f.ord, f.at);
    int p = *f.alg.find("p");
    CHECK(rep.perAtom.at(p).count() == 1);
    CHECK(rep.perAtom.at(p).test(p));
    const AOWitness& w = rep.witnesses.at({p, 1});
    REQUIRE(w.list.size() == 1);
    CHECK(w.list[0] == std::pair<int, int>{p, 1});
  }
}

TEST_CASE("witness lists: minimal multiplicities, necessary side atoms") {
  for (const CorpusEntry& entry : small_corpus()) {
    CAPTURE(entry.name);
    Full f = full(entry.alg);
    AOReport rep = almost_orthogonality(f.alg, f.ord, f.at);
    for (const auto& [key, w] : rep.witnesses) {
      auto [a, l] = key;
      int laSupp = f.ord.supp[*multiple(f.alg, a, l)];
      for (auto [c, j] : w.list) {
        // multiplicities are minimal: one step lower falls below (la)'
        if (j > 1) CHECK(f.ord.leq(*multiple(f.alg, c, j - 1), laSupp));
        // removing a side atom uncovers that atom itself
        if (c != a) {
          bool covered = false;
          for (auto [c2, j2] : w.list)
            if (c2 != c && f.ord.leq(*multiple(f.alg, c2, j2), c)) covered = true;
          CHECK_FALSE(covered);
        }
      }
    }
  }
}

TEST_CASE("compactness brute force") {
  SUBCASE("everything is compact on small lattices") {
    Full e2 = full(chain(2));
    CHECK(is_compact_element(e2.alg, e2.ord, e2.alg.one));
    Full hs = full(load_fixture("hs2c3"));
    for (int u = 0; u < hs.alg.size(); ++u) {
      CHECK(is_compact_element(hs.alg, hs.ord, u));
      CHECK(is_s_compact(hs.alg, hs.ord, u));
    }
  }
  SUBCASE("orthogonal sums of compact elements stay compact") {
    Full b4 = full(boolean_algebra(2));
    for (int c = 0; c < b4.alg.size(); ++c)
      for (int d = 0; d < b4.alg.size(); ++d) {
        if (!b4.ord.leq(c, b4.ord.supp[d])) continue;
        REQUIRE(is_compact_element(b4.alg, b4.ord, c));
        REQUIRE(is_compact_element(b4.alg, b4.ord, d));
        CHECK(is_compact_element(b4.alg, b4.ord, *b4.alg.plus(c, d)));
      }
  }
  SUBCASE("the cap is an error, never a guess") {
    Full f = full(load_fixture("hs2c3"));
    Caps tight;
    tight.subsets = 3;
    CHECK_THROWS_AS(is_compact_element(f.alg, f.ord, 0, tight), CapExceeded);
  }
}

TEST_CASE("meet and orthogonality transfer to multiples on the small corpus") {
  for (const CorpusEntry& entry : small_corpus()) {
    CAPTURE(entry.name);
    Full f = full(entry.alg);
    const int n = f.alg.size();
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) {
        bool base = f.ord.meet(x, y) == f.alg.zero && f.ord.leq(x, f.ord.supp[y]);
        int kMax = x == f.alg.zero ? 1 : f.at.ord[x];
        int lMax = y == f.alg.zero ? 1 : f.at.ord[y];
        for (int k = 1; k <= kMax; ++k)
          for (int l = 1; l <= lMax; ++l) {
            int kx = *multiple(f.alg, x, k);
            int ly = *multiple(f.alg, y, l);
            bool inst = f.ord.meet(kx, ly) == f.alg.zero &&
                        f.ord.leq(kx, f.ord.supp[ly]);
            CHECK(base == inst);
          }
      }
  }
}
