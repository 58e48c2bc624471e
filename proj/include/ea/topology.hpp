#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ea/core.hpp"
#include "ea/structure.hpp"

namespace ea {

struct Interval {
  int lo = -1;
  int hi = -1;
  Bits members;
};

/// [lo, hi] with its member set; lo <= hi required.
Interval make_interval(const OrderStructure& ord, int lo, int hi);

/// Everything the witness constructions need, including the materialized
/// order dual (analyzed with the same pipeline) and the block decomposition.
struct WitnessContext {
  EffectAlgebra alg;
  OrderStructure ord;
  AtomTable atoms;
  AOReport ao;
  BlockDecomposition blockInfo;
  EffectAlgebra dualAlg;
  OrderStructure dualOrd;
  AtomTable dualAtoms;
  AOReport dualAo;
};

WitnessContext make_witness_context(EffectAlgebra e);

/// Closed sets as bit masks; usable up to 24 elements, capped much lower.
struct GeneratedTopology {
  int n = 0;
  std::vector<uint32_t> closedSets;  // sorted
  bool isDiscrete = false;
  bool isHausdorffWitnessed = false;
};

/// Closure of the interval family under finite union and intersection,
/// together with the empty set and the carrier.
GeneratedTopology generate_topology(const EffectAlgebra& e, const OrderStructure& ord,
                                    const Caps& caps = {});

struct PartitionWitness {
  int atom = -1;
  int level = 0;
  Interval head;                // [0, (la)']
  std::vector<Interval> tail;   // [b,1] for the non-orthogonal atoms, then [(n_a+1-l)a, 1]
};

/// The clopen partition witnessing that [0,(la)'] has an interval-covered
/// complement. Invariants are machine-verified before returning.
PartitionWitness ao_partition(const WitnessContext& ctx, int atom, int level);

struct ClopenResult {
  Interval interval;                 // [kb, (la)'], possibly empty
  bool clopen = false;
  std::vector<Interval> complement;  // exact cover of the complement
};

/// Clopenness of [kb, (la)'] with an explicit interval representation of the
/// complement, assembled from the level-k partition on the dual and the
/// level-l partition on the instance. k = 0 or l = 0 selects the trivial
/// bound on that side.
ClopenResult clopen_check(const WitnessContext& ctx, int atomB, int k, int atomA, int l);

struct SeparationWitness {
  int x = -1, y = -1;
  bool swapped = false;  // the working pair after enforcing x not<= y
  int atomB = -1, k = 0;
  int atomA = -1, l = 0;
  Interval up;    // [kb, 1] containing x
  Interval down;  // [0, (la)'] containing y
};

/// Hausdorff separation of two distinct points by disjoint clopen intervals,
/// found exactly as the constructive argument does: kb below x but not y,
/// then la with y below (la)' and kb not.
SeparationWitness separate(const WitnessContext& ctx, int x, int y);

enum class CoverCase { BothInBlock, XOutside, YOutside };

struct BlockCover {
  int block = -1;
  CoverCase kind = CoverCase::BothInBlock;
  int atom = -1, level = 0;
  Interval j;
  Interval k;
};

struct CoverWitness {
  int x = -1, y = -1;
  std::vector<BlockCover> perBlock;
};

/// For x not below y on a block-finite instance: per block, two intervals
/// covering the block such that no listed interval contains both points.
CoverWitness blockfinite_cover(const WitnessContext& ctx, int x, int y);

struct PhiFamily {
  Bits u;  // joins of atom multiples
  Bits v;  // supplements of members of u
};

/// The separating function family: f_u(x) = [u <= x], g_v(x) = [x <= v].
PhiFamily phi_eval(const WitnessContext& ctx);

bool phi_separates(const OrderStructure& ord, const PhiFamily& phi, int x, int y);

/// All pairs separated by some member of the family.
bool phi_separates_all(const EffectAlgebra& e, const OrderStructure& ord,
                       const PhiFamily& phi);

/// Interval-generated, discrete, and Phi-generated closed families coincide.
bool topologies_agree(const WitnessContext& ctx, const Caps& caps = {});

/// The interval topology of a complete sublattice equals the trace of the
/// ambient interval topology.
bool subspace_topology_check(const EffectAlgebra& e, const OrderStructure& ord,
                             const Bits& f, const Caps& caps = {});

}  // namespace ea
