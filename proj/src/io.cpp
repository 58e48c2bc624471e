#include "ea/io.hpp"

#include <istream>
#include <sstream>

#include "ea/completion.hpp"
#include "ea/states.hpp"

namespace ea {

namespace {

int require_label(const EffectAlgebra& e, const std::string& l, const std::string& where) {
  auto idx = e.find(l);
  if (!idx) throw InputError(where + ": unknown element label '" + l + "'");
  return *idx;
}

}  // namespace

EffectAlgebra load_instance(std::istream& in) {
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return load_instance_text(text);
}

EffectAlgebra load_instance_text(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& err) {
    throw InputError(std::string("instance parse error: ") + err.what());
  }
  if (!doc.is_object() || !doc.contains("elements") || !doc["elements"].is_array())
    throw InputError("instance document needs an 'elements' array");

  std::vector<std::string> fileOrder;
  for (const auto& el : doc["elements"]) {
    if (!el.is_string()) throw InputError("elements must be strings");
    fileOrder.push_back(el.get<std::string>());
  }
  if (fileOrder.size() < 2) throw InputError("carrier needs at least 2 elements");

  std::string zeroLabel = doc.value("zero", fileOrder.front());
  std::string oneLabel = doc.value("one", fileOrder.back());

  // reorder: zero first, one last, everything else in file order
  std::vector<std::string> order;
  order.push_back(zeroLabel);
  for (const std::string& l : fileOrder)
    if (l != zeroLabel && l != oneLabel) order.push_back(l);
  order.push_back(oneLabel);
  if (order.size() != fileOrder.size())
    throw InputError("zero/one labels missing from the element list or equal");

  std::vector<std::array<int, 3>> triples;
  EffectAlgebra probe;  // label lookup before construction
  for (size_t i = 0; i < order.size(); ++i)
    probe.carrier.push_back({static_cast<int>(i), order[i]});

  if (doc.contains("plus")) {
    if (!doc["plus"].is_array()) throw InputError("'plus' must be an array of triples");
    size_t t = 0;
    for (const auto& triple : doc["plus"]) {
      std::string where = "plus[" + std::to_string(t++) + "]";
      if (!triple.is_array() || triple.size() != 3)
        throw InputError(where + ": expected [x, y, z]");
      int x = require_label(probe, triple[0].get<std::string>(), where);
      int y = require_label(probe, triple[1].get<std::string>(), where);
      int z = require_label(probe, triple[2].get<std::string>(), where);
      triples.push_back({x, y, z});
    }
  }
  return make_algebra(std::move(order), triples, 0, static_cast<int>(order.size()) - 1);
}

Json instance_to_json(const EffectAlgebra& e) {
  Json doc;
  Json elements = Json::array();
  for (const auto& id : e.carrier) elements.push_back(id.label);
  doc["elements"] = std::move(elements);
  doc["zero"] = e.label(e.zero);
  doc["one"] = e.label(e.one);
  Json plus = Json::array();
  for (int i = 0; i < e.size(); ++i)
    for (int j = i; j < e.size(); ++j) {
      if (i == e.zero || j == e.zero) continue;  // implicit rows
      int z = e.sum.at(i, j);
      if (z == kUndefined) continue;
      plus.push_back(Json::array({e.label(i), e.label(j), e.label(z)}));
    }
  doc["plus"] = std::move(plus);
  return doc;
}

std::string instance_to_text(const EffectAlgebra& e) {
  return instance_to_json(e).dump(2) + "\n";
}

std::string instance_digest(const EffectAlgebra& e) {
  const std::string text = instance_to_text(e);
  uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string("ea64:") + buf;
}

namespace {

Json labels_of(const EffectAlgebra& e, const Bits& set) {
  Json arr = Json::array();
  for (int i = static_cast<int>(set.find_first()); i != -1;
       i = static_cast<int>(set.find_next(i)))
    arr.push_back(e.label(i));
  return arr;
}

Json violations_json(const EffectAlgebra& e, const ValidationReport& rep) {
  Json arr = Json::array();
  for (const Violation& v : rep.violations) {
    Json item;
    item["axiom"] = axiom_name(v.axiom);
    Json wit = Json::array();
    for (int idx : v.witness)
      wit.push_back(idx >= 0 && idx < e.size() ? Json(e.label(idx)) : Json(nullptr));
    item["witness"] = std::move(wit);
    item["detail"] = v.detail;
    arr.push_back(std::move(item));
  }
  return arr;
}

Json state_json(const EffectAlgebra& e, const State& s) {
  Json obj;
  for (int i = 0; i < e.size(); ++i) obj[e.label(i)] = rational_to_string(s.values[i]);
  return obj;
}

}  // namespace

Json analyze_report(EffectAlgebra e, const Caps& caps) {
  Json rep;
  ValidationReport vr = validate(e);
  rep["digest"] = instance_digest(e);
  rep["elements"] = static_cast<int>(e.size());
  rep["validation"] = Json{{"ok", vr.ok}, {"violations", violations_json(e, vr)}};
  if (!vr.ok) return rep;

  OrderStructure ord = derive_order(e);
  AtomTable at = atom_analysis(e, ord);
  Json order;
  order["lattice"] = ord.isLattice;
  order["atomic"] = at.isAtomic;
  order["archimedean"] = at.isArchimedean;
  order["atoms"] = labels_of(e, at.atoms);
  Json ords;
  for (int i = 0; i < e.size(); ++i)
    ords[e.label(i)] = at.ord[i] == kOrdInfinite ? Json("inf") : Json(at.ord[i]);
  order["ord"] = std::move(ords);
  rep["order"] = std::move(order);

  if (ord.isLattice) {
    Bits sharp = sharp_elements(e, ord);
    BlockDecomposition bd = blocks(e, ord);
    Json structure;
    structure["sharp"] = labels_of(e, sharp);
    Json blockArr = Json::array();
    for (const Bits& m : bd.blocks) blockArr.push_back(labels_of(e, m));
    structure["blocks"] = std::move(blockArr);
    structure["mv"] = bd.isMV;
    structure["blockIntersection"] = labels_of(e, bd.blockIntersection);
    structure["center"] = labels_of(e, bd.center);
    AOReport ao = almost_orthogonality(e, ord, at);
    Json aa;
    for (const auto& [a, set] : ao.perAtom) aa[e.label(a)] = labels_of(e, set);
    structure["almostOrthogonalWitnessSets"] = std::move(aa);
    rep["structure"] = std::move(structure);

    Json topo;
    if (static_cast<size_t>(e.size()) <= caps.topology) {
      GeneratedTopology gt = generate_topology(e, ord, caps);
      topo["generated"] =
          Json{{"closedSets", static_cast<int>(gt.closedSets.size())},
               {"discrete", gt.isDiscrete},
               {"hausdorffWitnessed", gt.isHausdorffWitnessed}};
    } else {
      topo["generated"] = Json{{"skipped", "cap"}};
    }
    WitnessContext ctx = make_witness_context(e);
    PhiFamily phi = phi_eval(ctx);
    topo["phi"] = Json{{"lowerFamily", static_cast<int>(phi.u.count())},
                       {"upperFamily", static_cast<int>(phi.v.count())},
                       {"separatesAllPairs", phi_separates_all(e, ord, phi)}};
    rep["topology"] = std::move(topo);
  }

  Json states;
  StateSearch search = find_state(e);
  states["exists"] = search.state.has_value();
  states["affineDimension"] = search.affineDim;
  if (search.state) states["lexLeast"] = state_json(e, *search.state);
  if (static_cast<size_t>(e.size()) <= caps.vertices) {
    std::vector<State> ext = extreme_states(e, caps);
    states["extremeCount"] = static_cast<int>(ext.size());
    Json arr = Json::array();
    for (const State& s : ext) arr.push_back(state_json(e, s));
    states["extreme"] = std::move(arr);
  } else {
    states["extreme"] = Json{{"skipped", "cap"}};
  }
  rep["states"] = std::move(states);

  DMCompletion dm = dm_complete(Poset::of(ord));
  Json completion;
  completion["cuts"] = dm.size();
  completion["isomorphic"] = dm.isIsomorphicToSource;
  if (ord.isLattice) completion["atomsPreserved"] = mc_check(e, ord);
  rep["completion"] = std::move(completion);
  return rep;
}

namespace {

struct CheckSink {
  Json checks = Json::array();
  bool anyFail = false;
  bool anySkip = false;

  void pass(const std::string& name, const std::string& detail = "") {
    checks.push_back(Json{{"name", name}, {"status", "PASS"}, {"detail", detail}});
  }
  void fail(const std::string& name, const std::string& detail) {
    anyFail = true;
    checks.push_back(Json{{"name", name}, {"status", "FAIL"}, {"detail", detail}});
  }
  void skip(const std::string& name, const std::string& why) {
    anySkip = true;
    checks.push_back(
        Json{{"name", name}, {"status", "SKIPPED(" + why + ")"}, {"detail", ""}});
  }

  template <typename F>
  void run(const std::string& name, F&& body) {
    try {
      body();
      pass(name);
    } catch (const CapExceeded& c) {
      skip(name, "cap");
    } catch (const FalsificationError& f) {
      fail(name, f.what());
    }
  }
};

}  // namespace

Json check_all_report(EffectAlgebra e, const Caps& caps, bool* any_fail,
                      bool* any_skip) {
  Json rep;
  ValidationReport vr = validate(e);
  rep["digest"] = instance_digest(e);
  CheckSink sink;

  if (!vr.ok) {
    sink.fail("axioms", "validation found " + std::to_string(vr.violations.size()) +
                            " violated axiom instances");
    rep["checks"] = std::move(sink.checks);
    if (any_fail) *any_fail = true;
    if (any_skip) *any_skip = false;
    return rep;
  }
  sink.pass("axioms");

  OrderStructure ord = derive_order(e);
  AtomTable at = atom_analysis(e, ord);
  const int n = e.size();

  sink.run("orthogonality-order", [&] {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (e.sum.defined(a, b) != ord.leq(a, ord.supp[b]))
          throw FalsificationError("a+b defined must match a <= b'");
  });

  if (!ord.isLattice) {
    sink.skip("lattice-suites", "not-a-lattice");
    rep["checks"] = std::move(sink.checks);
    if (any_fail) *any_fail = sink.anyFail;
    if (any_skip) *any_skip = sink.anySkip;
    return rep;
  }

  WitnessContext ctx = make_witness_context(e);

  sink.run("atomic-decomposition", [&] {
    for (int x = 0; x < n; ++x)
      if (x != e.zero) decompose(e, ord, at, x);
  });

  sink.run("multiples-transfer", [&] {
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) {
        bool base = ord.meet(x, y) == e.zero && ord.leq(x, ord.supp[y]);
        int kMax = x == e.zero ? 1 : at.ord[x];
        int lMax = y == e.zero ? 1 : at.ord[y];
        int kx = x;
        for (int k = 1; k <= kMax; ++k) {
          if (k > 1) kx = *e.plus(kx, x);
          int ly = y;
          for (int l = 1; l <= lMax; ++l) {
            if (l > 1) ly = *e.plus(ly, y);
            bool instance = ord.meet(kx, ly) == e.zero && ord.leq(kx, ord.supp[ly]);
            if (base != instance)
              throw FalsificationError("meet/orthogonality transfer to multiples fails");
          }
        }
      }
  });

  sink.run("clopen-partitions", [&] {
    for (int a = static_cast<int>(at.atoms.find_first()); a != -1;
         a = static_cast<int>(at.atoms.find_next(a)))
      for (int l = 1; l <= at.ord[a]; ++l) ao_partition(ctx, a, l);
    for (int b = static_cast<int>(at.atoms.find_first()); b != -1;
         b = static_cast<int>(at.atoms.find_next(b)))
      for (int a = static_cast<int>(at.atoms.find_first()); a != -1;
           a = static_cast<int>(at.atoms.find_next(a)))
        for (int k = 1; k <= at.ord[b]; ++k)
          for (int l = 1; l <= at.ord[a]; ++l) clopen_check(ctx, b, k, a, l);
  });

  sink.run("hausdorff-separation", [&] {
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        if (x != y) separate(ctx, x, y);
  });

  sink.run("block-finite-cover", [&] {
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        if (!ord.leq(x, y)) blockfinite_cover(ctx, x, y);
  });

  sink.run("function-family-separation", [&] {
    PhiFamily phi = phi_eval(ctx);
    if (!phi_separates_all(e, ord, phi))
      throw FalsificationError("the function family fails to separate a pair");
  });

  sink.run("topology-coincidence", [&] {
    if (!topologies_agree(ctx, caps))
      throw FalsificationError("interval, order and family topologies differ");
  });

  sink.run("subspace-trace", [&] {
    Bits sharp = sharp_elements(e, ord);
    if (!subspace_topology_check(e, ord, sharp, caps))
      throw FalsificationError("sharp-element subspace trace mismatch");
    for (const Bits& m : ctx.blockInfo.blocks)
      if (!subspace_topology_check(e, ord, m, caps))
        throw FalsificationError("block subspace trace mismatch");
  });

  sink.run("completion-identity", [&] {
    if (!mc_check(e, ord))
      throw FalsificationError("completion is not the identity on a finite lattice");
  });

  sink.run("closedness-equivalence", [&] {
    Bits sharp = sharp_elements(e, ord);
    std::vector<Bits> targets = ctx.blockInfo.blocks;
    targets.push_back(sharp);
    targets.push_back(ctx.blockInfo.blockIntersection);
    targets.push_back(ctx.blockInfo.center);
    for (const Bits& d : targets) {
      ClosednessReport cr = closedness(e, ord, d, caps);
      if (!cr.allEqual() || !cr.joinsClosed)
        throw FalsificationError("closedness conditions disagree");
    }
  });

  sink.run("compactness-agreement", [&] {
    for (int u = 0; u < n; ++u) {
      bool c = is_compact_element(e, ord, u, caps);
      bool s = is_s_compact(e, ord, u, caps);
      if (!c || !s)
        throw FalsificationError("an element of a finite lattice must be compact");
    }
  });

  sink.run("state-extension", [&] {
    Bits sharp = sharp_elements(e, ord);
    EffectAlgebra sub = restrict_to(e, ord, sharp);
    std::vector<State> ext = extreme_states(sub, caps);
    for (const State& s : ext) {
      RatVec onQ(n, 0);
      int i = 0;
      for (int a = static_cast<int>(sharp.find_first()); a != -1;
           a = static_cast<int>(sharp.find_next(a)))
        onQ[a] = s.values[i++];
      ExtensionProblem prob = extend_state(e, ord, at, sharp, onQ);
      if (!prob.feasible)
        throw FalsificationError("an extreme sharp state failed to extend");
    }
  });

  sink.run("finite-cofinite-subalgebra", [&] {
    Bits e1 = e1_subalgebra(e, ord, at);
    Bits full(n);
    full.set();
    if (e1 != full)
      throw FalsificationError("finite instance where not every element is finite-or-cofinite");
  });

  rep["checks"] = std::move(sink.checks);
  if (any_fail) *any_fail = sink.anyFail;
  if (any_skip) *any_skip = sink.anySkip;
  return rep;
}

namespace {

void render_value(std::ostringstream& os, const Json& v, int indent);

void render_object(std::ostringstream& os, const Json& v, int indent) {
  for (const auto& [key, value] : v.items()) {
    os << std::string(indent, ' ') << key << ":";
    if (value.is_object() || value.is_array()) {
      os << "\n";
      render_value(os, value, indent + 2);
    } else {
      os << " ";
      render_value(os, value, 0);
      os << "\n";
    }
  }
}

void render_value(std::ostringstream& os, const Json& v, int indent) {
  if (v.is_object()) {
    render_object(os, v, indent);
  } else if (v.is_array()) {
    bool scalarOnly = true;
    for (const auto& item : v)
      if (item.is_object() || item.is_array()) scalarOnly = false;
    if (scalarOnly) {
      os << std::string(indent, ' ') << "[";
      bool first = true;
      for (const auto& item : v) {
        if (!first) os << ", ";
        first = false;
        if (item.is_string()) os << item.get<std::string>();
        else os << item.dump();
      }
      os << "]\n";
    } else {
      for (const auto& item : v) {
        os << std::string(indent, ' ') << "-\n";
        render_value(os, item, indent + 2);
      }
    }
  } else if (v.is_string()) {
    os << v.get<std::string>();
  } else {
    os << v.dump();
  }
}

}  // namespace

std::string render_human(const Json& report) {
  std::ostringstream os;
  render_value(os, report, 0);
  return os.str();
}

std::string dot_export(const EffectAlgebra& e, const OrderStructure& ord,
                       const AtomTable& at, const Bits& sharp,
                       const std::vector<DotGroup>& groups) {
  const int n = e.size();
  std::ostringstream os;
  os << "digraph hasse {\n  rankdir=BT;\n  node [shape=ellipse];\n";
  for (int x = 0; x < n; ++x) {
    os << "  n" << x << " [label=\"" << e.label(x) << "\"";
    if (sharp.test(x)) os << ", peripheries=2";
    std::string fill;
    for (const DotGroup& g : groups)
      if (g.members.test(x)) fill = fill.empty() ? g.color : "lightsalmon";
    if (!fill.empty()) os << ", style=filled, fillcolor=" << fill;
    os << "];\n";
  }
  os << "  { rank=same;";
  for (int a = static_cast<int>(at.atoms.find_first()); a != -1;
       a = static_cast<int>(at.atoms.find_next(a)))
    os << " n" << a << ";";
  os << " }\n";
  // cover edges
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (a == b || !ord.leq(a, b)) continue;
      bool cover = true;
      for (int c = 0; c < n && cover; ++c)
        if (c != a && c != b && ord.leq(a, c) && ord.leq(c, b)) cover = false;
      if (cover) os << "  n" << a << " -> n" << b << ";\n";
    }
  for (const DotGroup& g : groups)
    os << "  // group " << g.name << " -> " << g.color << "\n";
  os << "}\n";
  return os.str();
}

}  // namespace ea
