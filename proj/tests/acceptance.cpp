// Acceptance suite: one line per criterion, every tolerance pinned in code.
// Exit 0 when all criteria hold; exit 2 on any falsification.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <vector>

#include "ea/completion.hpp"
#include "ea/core.hpp"
#include "ea/generators.hpp"
#include "ea/io.hpp"
#include "ea/states.hpp"
#include "ea/structure.hpp"
#include "ea/topology.hpp"
#include "support/corpus.hpp"
#include "support/oracles.hpp"

using namespace ea;
using namespace ea::testsupport;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

struct Corpus {
  std::vector<CorpusEntry> all;            // enumerated <= 6 plus constructed <= 64
  std::vector<WitnessContext> lattice;     // analyzed lattice instances
  std::vector<std::string> latticeNames;
  int nonLattice = 0;
};

Corpus build_corpus() {
  Corpus c;
  int idx = 0;
  for (EffectAlgebra& e : enumerate_algebras(6))
    c.all.push_back({"enum" + std::to_string(e.size()) + "-" + std::to_string(idx++), std::move(e)});
  for (CorpusEntry& e : constructed_corpus()) c.all.push_back(std::move(e));

  for (const CorpusEntry& entry : c.all) {
    EffectAlgebra e = entry.alg;
    if (!validate(e).ok) throw FalsificationError("corpus instance fails the axioms: " + entry.name);
    OrderStructure ord = derive_order(e);
    if (!ord.isLattice) {
      ++c.nonLattice;
      continue;
    }
    c.lattice.push_back(make_witness_context(std::move(e)));
    c.latticeNames.push_back(entry.name);
  }
  return c;
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Criterion = std::function<Outcome(Corpus&)>;

// --- A1: validator vs the independent axiom oracle ---------------------------

Outcome a1_axiom_soundness(Corpus&) {
  auto start = std::chrono::steady_clock::now();
  long long scanned = 0, disagreements = 0, valid = 0;

  {
    const int n = 4;
    std::vector<std::pair<int, int>> cells;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) cells.push_back({i, j});
    std::vector<int> digit(cells.size(), 0);
    PartialSumTable t(n);
    for (auto [i, j] : cells) t.set(i, j, kUndefined);
    auto apply = [&](size_t c) {
      t.set(cells[c].first, cells[c].second, digit[c] - 1 < 0 ? kUndefined : digit[c] - 1);
    };
    while (true) {
      ++scanned;
      bool ours = validate(t, 0, n - 1, /*stop_at_first=*/true).ok;
      bool oracle = naive_effect_algebra(t, 0, n - 1);
      if (ours != oracle) ++disagreements;
      if (ours) ++valid;
      size_t c = 0;
      while (c < cells.size() && digit[c] == n) {
        digit[c] = 0;
        apply(c);
        ++c;
      }
      if (c == cells.size()) break;
      ++digit[c];
      apply(c);
    }
  }

  {
    const int n = 5;
    std::mt19937_64 rng(20240811);
    std::uniform_int_distribution<int> value(-1, n - 1);
    PartialSumTable t(n);
    for (int trial = 0; trial < 10000; ++trial) {
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) t.set(i, j, value(rng));
      ++scanned;
      bool ours = validate(t, 0, n - 1, true).ok;
      bool oracle = naive_effect_algebra(t, 0, n - 1);
      if (ours != oracle) ++disagreements;
    }
  }

  double secs = seconds_since(start);
  std::ostringstream os;
  os << scanned << " tables, " << valid << " valid at size 4, " << disagreements
     << " disagreements, " << secs << "s";
  return {disagreements == 0 && secs < 60.0, os.str()};
}

// --- A2: atomic decomposition reconstructs every element ---------------------

Outcome a2_decomposition(Corpus& c) {
  long long elements = 0;
  for (const WitnessContext& ctx : c.lattice) {
    for (int x = 0; x < ctx.alg.size(); ++x) {
      if (x == ctx.alg.zero) continue;
      decompose(ctx.alg, ctx.ord, ctx.atoms, x);  // throws on any failure
      ++elements;
    }
  }
  std::ostringstream os;
  os << elements << " elements across " << c.lattice.size() << " lattice instances, "
     << c.nonLattice << " non-lattice instance(s) outside the hypotheses";
  return {true, os.str()};
}

// --- A3: meet/orthogonality transfer to multiples ----------------------------

Outcome a3_multiples_transfer(Corpus& c) {
  long long checks = 0;
  for (const WitnessContext& ctx : c.lattice) {
    const int n = ctx.alg.size();
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) {
        bool base = ctx.ord.meet(x, y) == ctx.alg.zero && ctx.ord.leq(x, ctx.ord.supp[y]);
        int kMax = x == ctx.alg.zero ? 1 : ctx.atoms.ord[x];
        int lMax = y == ctx.alg.zero ? 1 : ctx.atoms.ord[y];
        int kx = x;
        for (int k = 1; k <= kMax; ++k) {
          if (k > 1) kx = *ctx.alg.plus(kx, x);
          int ly = y;
          for (int l = 1; l <= lMax; ++l) {
            if (l > 1) ly = *ctx.alg.plus(ly, y);
            bool inst =
                ctx.ord.meet(kx, ly) == ctx.alg.zero && ctx.ord.leq(kx, ctx.ord.supp[ly]);
            if (base != inst)
              throw FalsificationError("transfer biconditional fails");
            ++checks;
          }
        }
      }
  }
  return {true, std::to_string(checks) + " quadruples"};
}

// --- A4: clopen partitions and complement reconstructions --------------------

Outcome a4_partitions(Corpus& c) {
  long long partitions = 0, intervals = 0;
  for (const WitnessContext& ctx : c.lattice) {
    const Bits& atoms = ctx.atoms.atoms;
    for (int a = static_cast<int>(atoms.find_first()); a != -1;
         a = static_cast<int>(atoms.find_next(a)))
      for (int l = 1; l <= ctx.atoms.ord[a]; ++l) {
        ao_partition(ctx, a, l);
        ++partitions;
      }
    for (int b = static_cast<int>(atoms.find_first()); b != -1;
         b = static_cast<int>(atoms.find_next(b)))
      for (int a = static_cast<int>(atoms.find_first()); a != -1;
           a = static_cast<int>(atoms.find_next(a)))
        for (int k = 1; k <= ctx.atoms.ord[b]; ++k)
          for (int l = 1; l <= ctx.atoms.ord[a]; ++l) {
            clopen_check(ctx, b, k, a, l);
            ++intervals;
          }
  }
  return {true, std::to_string(partitions) + " partitions, " +
                    std::to_string(intervals) + " clopen intervals"};
}

// --- A5: separation of every distinct pair, timed per instance ---------------

Outcome a5_separation(Corpus& c) {
  long long pairs = 0;
  double worst = 0;
  std::string worstName;
  for (size_t i = 0; i < c.lattice.size(); ++i) {
    const WitnessContext& ctx = c.lattice[i];
    auto start = std::chrono::steady_clock::now();
    for (int x = 0; x < ctx.alg.size(); ++x)
      for (int y = 0; y < ctx.alg.size(); ++y)
        if (x != y) {
          separate(ctx, x, y);
          ++pairs;
        }
    double secs = seconds_since(start);
    if (secs > worst) {
      worst = secs;
      worstName = c.latticeNames[i];
    }
    if (secs >= 1.0)
      throw FalsificationError("separation suite exceeded 1s on " + c.latticeNames[i]);
  }
  std::ostringstream os;
  os << pairs << " pairs, slowest instance " << worstName << " at " << worst << "s";
  return {true, os.str()};
}

// --- A6: block-finite covers --------------------------------------------------

Outcome a6_covers(Corpus& c) {
  long long pairs = 0;
  for (const WitnessContext& ctx : c.lattice)
    for (int x = 0; x < ctx.alg.size(); ++x)
      for (int y = 0; y < ctx.alg.size(); ++y)
        if (!ctx.ord.leq(x, y)) {
          blockfinite_cover(ctx, x, y);
          ++pairs;
        }
  return {true, std::to_string(pairs) + " pairs"};
}

// --- A7: the three topologies coincide; the family separates everywhere ------

Outcome a7_topologies(Corpus& c) {
  Caps caps;
  int compared = 0, separated = 0;
  for (const WitnessContext& ctx : c.lattice) {
    if (static_cast<size_t>(ctx.alg.size()) <= caps.topology) {
      if (!topologies_agree(ctx, caps))
        throw FalsificationError("topologies differ on a small instance");
      ++compared;
    }
    if (ctx.atoms.isAtomic) {
      PhiFamily phi = phi_eval(ctx);
      if (!phi_separates_all(ctx.alg, ctx.ord, phi))
        throw FalsificationError("function family fails to separate");
      ++separated;
    }
  }
  return {true, std::to_string(compared) + " topology comparisons, " +
                    std::to_string(separated) + " separation sweeps"};
}

// --- A8: state values on the named families -----------------------------------

Outcome a8_states(Corpus&) {
  for (int n = 1; n <= 50; ++n) {
    EffectAlgebra c = chain(n + 1);
    if (!validate(c).ok) throw FalsificationError("chain failed validation");
    StateSearch s = find_state(c);
    if (!s.state || s.affineDim != 0)
      throw FalsificationError("chain state not unique");
    for (int k = 0; k <= n; ++k)
      if (s.state->values[k] != Rational(k, n))
        throw FalsificationError("chain state differs from k/n");
    if (!is_state(c, *s.state).ok) throw FalsificationError("chain state is not a state");
  }

  EffectAlgebra b4 = boolean_algebra(2);
  validate(b4);
  std::vector<State> extB4 = extreme_states(b4);
  if (extB4.size() != 2) throw FalsificationError("boolean square must have 2 vertices");
  for (const State& s : extB4)
    if (!is_state(b4, s).ok) throw FalsificationError("vertex is not a state");

  EffectAlgebra hs = hsum_of_chains({3, 3});
  validate(hs);
  std::vector<State> extHs = extreme_states(hs);
  if (extHs.size() != 1) throw FalsificationError("hs2c3 must have 1 vertex");
  if (!is_state(hs, extHs[0]).ok) throw FalsificationError("vertex is not a state");

  return {true, "chains to length 51 exact, vertex counts 2 and 1"};
}

// --- A9: every extreme sharp state extends ------------------------------------

Outcome a9_state_smearing(Corpus&) {
  Caps caps;
  long long extended = 0;
  int skipped = 0;
  for (EffectAlgebra& e : enumerate_algebras(6)) {
    validate(e);
    OrderStructure ord = derive_order(e);
    if (!ord.isLattice) {
      ++skipped;
      continue;
    }
    AtomTable at = atom_analysis(e, ord);
    Bits sharp = sharp_elements(e, ord);
    EffectAlgebra sub = restrict_to(e, ord, sharp);
    for (const State& s : extreme_states(sub, caps)) {
      RatVec onQ(e.size(), 0);
      int i = 0;
      for (int a = static_cast<int>(sharp.find_first()); a != -1;
           a = static_cast<int>(sharp.find_next(a)))
        onQ[a] = s.values[i++];
      ExtensionProblem prob = extend_state(e, ord, at, sharp, onQ);
      if (!prob.feasible)
        throw FalsificationError("an extreme sharp state failed to extend");
      ++extended;
    }
  }
  std::ostringstream os;
  os << extended << " extensions, " << skipped << " non-lattice instance(s) skipped";
  return {true, os.str()};
}

// --- A10: completions ----------------------------------------------------------

Outcome a10_completion(Corpus& c) {
  Caps caps;
  Poset antichain;
  for (int i = 0; i < 2; ++i) {
    Bits d(2);
    d.set(i);
    antichain.down.push_back(d);
  }
  if (dm_complete(antichain).size() != 4)
    throw FalsificationError("two-element antichain must complete to four cuts");

  long long closedChecks = 0;
  for (const WitnessContext& ctx : c.lattice) {
    if (!mc_check(ctx.alg, ctx.ord))
      throw FalsificationError("completion is not the identity with atoms preserved");
    Bits sharp = sharp_elements(ctx.alg, ctx.ord);
    std::vector<Bits> targets = ctx.blockInfo.blocks;
    targets.push_back(sharp);
    targets.push_back(ctx.blockInfo.blockIntersection);
    targets.push_back(ctx.blockInfo.center);
    for (const Bits& d : targets) {
      ClosednessReport rep = closedness(ctx.alg, ctx.ord, d, caps);
      if (!rep.allEqual())
        throw FalsificationError("closedness conditions disagree");
      ++closedChecks;
    }
  }
  std::ostringstream os;
  os << c.lattice.size() << " completions, " << closedChecks << " closedness reports, "
     << c.nonLattice << " non-lattice instance(s) outside the hypotheses";
  return {true, os.str()};
}

// --- A11: symbolic verdicts ------------------------------------------------------

Outcome a11_symbolic(Corpus&) {
  struct Expect {
    Property prop;
    Truth value;
    const char* rule;
  };

  FamilyVerdict chains = family_analyze(to_family(parse_spec("hsum(chain:3 * inf)")));
  const std::vector<Expect> chainRows = {
      {Property::TauIHausdorff, Truth::False, "almost-orthogonality-equivalence"},
      {Property::TauICompact, Truth::True, "compactness-iff-complete"},
      {Property::CompactlyGenerated, Truth::True, "chain-sum-example"},
      {Property::AlmostOrthogonal, Truth::False, "atom-audit"},
      {Property::BlockFinite, Truth::False, "construction"},
  };
  for (const Expect& row : chainRows) {
    const Flag& f = chains.flags.at(row.prop);
    if (f.value != row.value || f.rule != row.rule)
      throw FalsificationError(std::string("chain-family flag mismatch on ") +
                               property_name(row.prop));
  }

  FamilyVerdict booleans = family_analyze(to_family(parse_spec("hsum(boolean:inf * 2)")));
  const std::vector<Expect> booleanRows = {
      {Property::AlmostOrthogonal, Truth::False, "atom-audit"},
      {Property::BlockFinite, Truth::True, "construction"},
      {Property::TauIHausdorff, Truth::True, "block-finite-hausdorff"},
      {Property::TauICompact, Truth::True, "compactness-iff-complete"},
      {Property::CompactlyGenerated, Truth::False, "s-compact-generation-equivalence"},
  };
  for (const Expect& row : booleanRows) {
    const Flag& f = booleans.flags.at(row.prop);
    if (f.value != row.value || f.rule != row.rule)
      throw FalsificationError(std::string("boolean-family flag mismatch on ") +
                               property_name(row.prop));
  }
  return {true, "both example families reproduce, rules as mapped"};
}

// --- A12: enumerator against the unpruned oracle --------------------------------

Outcome a12_enumerator(Corpus&) {
  if (enumerate_exact(2).size() != 1 || enumerate_exact(3).size() != 1)
    throw FalsificationError("sizes 2 and 3 must each have exactly one instance");

  std::ostringstream os;
  for (int n = 2; n <= 5; ++n) {
    OracleEnumeration oracle = oracle_enumerate(n, /*fix_zero_rows=*/n >= 5);
    std::vector<EffectAlgebra> ours = enumerate_exact(n);
    if (static_cast<int>(ours.size()) != oracle.isoClasses)
      throw FalsificationError("count mismatch at size " + std::to_string(n));
    std::set<std::vector<int16_t>> translated;
    for (const EffectAlgebra& e : ours) translated.insert(oracle_canonical(e.sum));
    if (translated != oracle.canonicalTables)
      throw FalsificationError("class mismatch at size " + std::to_string(n));
    os << "n=" << n << ":" << oracle.isoClasses << " ";
  }
  return {true, os.str() + "(pruned = unpruned)"};
}

}  // namespace

int main() {
  struct Entry {
    int id;
    const char* title;
    Criterion run;
  };
  const std::vector<Entry> criteria = {
      {1, "axiom soundness against the brute-force oracle", a1_axiom_soundness},
      {2, "atomic decompositions reconstruct every element", a2_decomposition},
      {3, "meet/orthogonality transfer to all multiples", a3_multiples_transfer},
      {4, "clopen partitions and complement reconstructions", a4_partitions},
      {5, "separation of every distinct pair within 1s", a5_separation},
      {6, "per-block interval covers", a6_covers},
      {7, "topology coincidence and family separation", a7_topologies},
      {8, "exact state values on chains and squares", a8_states},
      {9, "extreme sharp states always extend", a9_state_smearing},
      {10, "completions are identities; closedness agrees", a10_completion},
      {11, "symbolic family verdicts with their rule map", a11_symbolic},
      {12, "enumerator counts match the unpruned oracle", a12_enumerator},
  };

  Corpus corpus = build_corpus();
  std::printf("corpus: %zu instances (%zu lattice, %d non-lattice)\n",
              corpus.all.size(), corpus.lattice.size(), corpus.nonLattice);

  bool allPass = true;
  for (const Entry& entry : criteria) {
    auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = entry.run(corpus);
    } catch (const std::exception& err) {
      outcome = {false, err.what()};
    }
    double secs = seconds_since(start);
    allPass &= outcome.pass;
    std::printf("%s A%-2d %s — %s [%.2fs]\n", outcome.pass ? "PASS" : "FAIL",
                entry.id, entry.title, outcome.detail.c_str(), secs);
  }
  std::printf("%s\n", allPass ? "acceptance: all criteria hold"
                              : "acceptance: FALSIFICATION — triage required");
  return allPass ? 0 : 2;
}
