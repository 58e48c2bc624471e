#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "ea/core.hpp"
#include "ea/structure.hpp"
#include "ea/topology.hpp"

namespace ea {

using Json = nlohmann::ordered_json;

/// Reads the instance document: { "elements": [...], "zero": "...",
/// "one": "...", "plus": [[x,y,z], ...] }. The carrier is reordered so the
/// zero is first and the one last; x+0=x rows are implicit; contradictory
/// triples are a load error. The result is not yet validated.
EffectAlgebra load_instance(std::istream& in);
EffectAlgebra load_instance_text(const std::string& text);

/// Canonical serialization: elements in carrier order, explicit zero/one,
/// sum triples (i <= j, zero rows omitted) sorted by index. Bit-exact.
Json instance_to_json(const EffectAlgebra& e);
std::string instance_to_text(const EffectAlgebra& e);

/// FNV-1a / 64 over the canonical serialization.
std::string instance_digest(const EffectAlgebra& e);

/// Descriptive report: validation, order, structure, topology, states,
/// completion sections.
Json analyze_report(EffectAlgebra e, const Caps& caps = {});

/// Runs every per-instance suite; one PASS/FAIL/SKIPPED entry per check.
Json check_all_report(EffectAlgebra e, const Caps& caps, bool* any_fail,
                      bool* any_skip);

std::string render_human(const Json& report);

struct DotGroup {
  std::string name;
  std::string color;
  Bits members;
};

/// Hasse diagram with atoms on a shared rank and sharp elements doubly
/// outlined; groups get filled colors (witness intervals).
std::string dot_export(const EffectAlgebra& e, const OrderStructure& ord,
                       const AtomTable& at, const Bits& sharp,
                       const std::vector<DotGroup>& groups = {});

}  // namespace ea
