#include <cstdlib>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "ea/completion.hpp"
#include "ea/core.hpp"
#include "ea/generators.hpp"
#include "ea/io.hpp"
#include "ea/states.hpp"
#include "ea/structure.hpp"
#include "ea/topology.hpp"

namespace {

using ea::Bits;
using ea::Caps;
using ea::EffectAlgebra;
using ea::Json;

enum ExitCode { kOk = 0, kUsage = 1, kFalsified = 2, kCap = 3 };

Caps caps_from_env() {
  const char* env = std::getenv("EA_CAPS");
  return env ? Caps::parse(env) : Caps{};
}

EffectAlgebra load(const std::string& file) {
  if (file == "-") return ea::load_instance(std::cin);
  std::ifstream in(file);
  if (!in) throw ea::InputError("cannot open file: " + file);
  return ea::load_instance(in);
}

void emit(const Json& report, bool machine) {
  if (machine)
    std::cout << report.dump(2) << "\n";
  else
    std::cout << ea::render_human(report);
}

int element_of(const EffectAlgebra& e, const std::string& label) {
  auto idx = e.find(label);
  if (!idx) throw ea::InputError("unknown element label '" + label + "'");
  return *idx;
}

Json interval_json(const EffectAlgebra& e, const ea::Interval& iv) {
  Json arr = Json::array();
  for (int i = static_cast<int>(iv.members.find_first()); i != -1;
       i = static_cast<int>(iv.members.find_next(i)))
    arr.push_back(e.label(i));
  Json obj;
  obj["lo"] = iv.lo >= 0 ? Json(e.label(iv.lo)) : Json(nullptr);
  obj["hi"] = iv.hi >= 0 ? Json(e.label(iv.hi)) : Json(nullptr);
  obj["members"] = std::move(arr);
  return obj;
}

int run(int argc, char** argv) {
  CLI::App app{"workbench for finite lattice effect algebras"};
  app.require_subcommand(1);
  bool machine = false;
  app.add_flag("--format-machine", machine)->group("");  // hidden alias
  std::string format = "human";
  app.add_option("--format", format, "output format: human or machine")
      ->check(CLI::IsMember({"human", "machine"}));

  Caps caps = caps_from_env();

  std::string file, elem, x, y, spec, highlight, extendFrom;
  int level = 1, maxSize = 5;
  bool extreme = false;

  CLI::App* verify = app.add_subcommand("verify", "check the axioms, with witnesses");
  verify->add_option("FILE", file)->required();

  CLI::App* analyze = app.add_subcommand("analyze", "full descriptive report");
  analyze->add_option("FILE", file)->required();

  CLI::App* blocksCmd = app.add_subcommand("blocks", "maximal compatible sub-algebras");
  blocksCmd->add_option("FILE", file)->required();

  CLI::App* decomposeCmd = app.add_subcommand("decompose", "atomic decomposition of an element");
  decomposeCmd->add_option("FILE", file)->required();
  decomposeCmd->add_option("ELEM", elem)->required();

  CLI::App* separateCmd = app.add_subcommand("separate", "disjoint clopen intervals around two points");
  separateCmd->add_option("FILE", file)->required();
  separateCmd->add_option("X", x)->required();
  separateCmd->add_option("Y", y)->required();

  CLI::App* coverCmd = app.add_subcommand("cover", "per-block interval cover separating two points");
  coverCmd->add_option("FILE", file)->required();
  coverCmd->add_option("X", x)->required();
  coverCmd->add_option("Y", y)->required();

  CLI::App* partitionCmd = app.add_subcommand("partition", "clopen partition at an atom multiple");
  partitionCmd->add_option("FILE", file)->required();
  partitionCmd->add_option("ATOM", elem)->required();
  partitionCmd->add_option("L", level)->required();

  CLI::App* statesCmd = app.add_subcommand("states", "state existence, vertices, extensions");
  statesCmd->add_option("FILE", file)->required();
  statesCmd->add_flag("--extreme", extreme);
  statesCmd->add_option("--extend-from", extendFrom,
                        "extend every extreme state of Q: sharp | e1 | block:I");

  CLI::App* completeCmd = app.add_subcommand("complete", "cut completion with embedding");
  completeCmd->add_option("FILE", file)->required();

  CLI::App* genCmd = app.add_subcommand("gen", "construct an instance from a spec");
  genCmd->add_option("SPEC", spec)->required();

  CLI::App* enumerateCmd = app.add_subcommand("enumerate", "all instances up to isomorphism");
  enumerateCmd->add_option("--max-size", maxSize)->required();

  CLI::App* familyCmd = app.add_subcommand("family", "theorem-backed verdicts for a symbolic family");
  familyCmd->add_option("SPEC", spec)->required();

  CLI::App* checkAll = app.add_subcommand("check-all", "run every per-instance suite");
  checkAll->add_option("FILE", file)->required();

  CLI::App* dotCmd = app.add_subcommand("dot", "order diagram in graph description language");
  dotCmd->add_option("FILE", file)->required();
  dotCmd->add_option("--highlight", highlight, "separate:X:Y | partition:ATOM:L | cover:X:Y");

  for (CLI::App* sub :
       {verify, analyze, blocksCmd, decomposeCmd, separateCmd, coverCmd,
        partitionCmd, statesCmd, completeCmd, genCmd, enumerateCmd, familyCmd,
        checkAll, dotCmd})
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    int rc = app.exit(err);
    return rc == 0 ? kOk : kUsage;
  }
  machine |= format == "machine";

  if (*verify) {
    EffectAlgebra e = load(file);
    ea::ValidationReport rep = validate(e);
    Json out;
    out["digest"] = ea::instance_digest(e);
    out["ok"] = rep.ok;
    Json arr = Json::array();
    for (const ea::Violation& v : rep.violations) {
      Json item;
      item["axiom"] = ea::axiom_name(v.axiom);
      Json wit = Json::array();
      for (int idx : v.witness)
        wit.push_back(idx >= 0 && idx < e.size() ? Json(e.label(idx)) : Json(nullptr));
      item["witness"] = std::move(wit);
      item["detail"] = v.detail;
      arr.push_back(std::move(item));
    }
    out["violations"] = std::move(arr);
    emit(out, machine);
    return rep.ok ? kOk : kFalsified;
  }

  if (*analyze) {
    Json rep = ea::analyze_report(load(file), caps);
    emit(rep, machine);
    return rep["validation"]["ok"].get<bool>() ? kOk : kFalsified;
  }

  if (*blocksCmd) {
    ea::Analyzed an = ea::analyze_base(load(file));
    ea::BlockDecomposition bd = ea::blocks(an.alg, an.ord);
    Json out;
    Json arr = Json::array();
    for (const Bits& m : bd.blocks) {
      Json b = Json::array();
      for (int i = static_cast<int>(m.find_first()); i != -1;
           i = static_cast<int>(m.find_next(i)))
        b.push_back(an.alg.label(i));
      arr.push_back(std::move(b));
    }
    out["blocks"] = std::move(arr);
    out["mv"] = bd.isMV;
    emit(out, machine);
    return kOk;
  }

  if (*decomposeCmd) {
    ea::Analyzed an = ea::analyze_base(load(file));
    ea::AtomTable at = ea::atom_analysis(an.alg, an.ord);
    ea::Decomposition dec = ea::decompose(an.alg, an.ord, at, element_of(an.alg, elem));
    Json out;
    Json terms = Json::array();
    for (auto [a, k] : dec.terms)
      terms.push_back(Json{{"atom", an.alg.label(a)}, {"times", k}});
    out["element"] = elem;
    out["terms"] = std::move(terms);
    emit(out, machine);
    return kOk;
  }

  if (*separateCmd) {
    ea::WitnessContext ctx = ea::make_witness_context(load(file));
    ea::SeparationWitness w =
        ea::separate(ctx, element_of(ctx.alg, x), element_of(ctx.alg, y));
    Json out;
    out["x"] = ctx.alg.label(w.x);
    out["y"] = ctx.alg.label(w.y);
    out["swapped"] = w.swapped;
    out["up"] = interval_json(ctx.alg, w.up);
    out["down"] = interval_json(ctx.alg, w.down);
    emit(out, machine);
    return kOk;
  }

  if (*coverCmd) {
    ea::WitnessContext ctx = ea::make_witness_context(load(file));
    ea::CoverWitness w =
        ea::blockfinite_cover(ctx, element_of(ctx.alg, x), element_of(ctx.alg, y));
    Json out;
    Json arr = Json::array();
    for (const ea::BlockCover& bc : w.perBlock) {
      Json item;
      item["block"] = bc.block;
      item["case"] = bc.kind == ea::CoverCase::BothInBlock ? "both-in-block"
                     : bc.kind == ea::CoverCase::XOutside  ? "x-outside"
                                                           : "y-outside";
      item["J"] = interval_json(ctx.alg, bc.j);
      item["K"] = interval_json(ctx.alg, bc.k);
      arr.push_back(std::move(item));
    }
    out["perBlock"] = std::move(arr);
    emit(out, machine);
    return kOk;
  }

  if (*partitionCmd) {
    ea::WitnessContext ctx = ea::make_witness_context(load(file));
    ea::PartitionWitness w = ea::ao_partition(ctx, element_of(ctx.alg, elem), level);
    Json out;
    out["atom"] = ctx.alg.label(w.atom);
    out["level"] = w.level;
    out["head"] = interval_json(ctx.alg, w.head);
    Json tail = Json::array();
    for (const ea::Interval& iv : w.tail) tail.push_back(interval_json(ctx.alg, iv));
    out["tail"] = std::move(tail);
    emit(out, machine);
    return kOk;
  }

  if (*statesCmd) {
    ea::Analyzed an = ea::analyze_base(load(file));
    const EffectAlgebra& e = an.alg;
    Json out;
    ea::StateSearch search = ea::find_state(e);
    out["exists"] = search.state.has_value();
    out["affineDimension"] = search.affineDim;
    if (search.state) {
      Json s;
      for (int i = 0; i < e.size(); ++i)
        s[e.label(i)] = ea::rational_to_string(search.state->values[i]);
      out["lexLeast"] = std::move(s);
    }
    if (extreme) {
      std::vector<ea::State> ext = ea::extreme_states(e, caps);
      Json arr = Json::array();
      for (const ea::State& s : ext) {
        Json one;
        for (int i = 0; i < e.size(); ++i)
          one[e.label(i)] = ea::rational_to_string(s.values[i]);
        arr.push_back(std::move(one));
      }
      out["extreme"] = std::move(arr);
    }
    if (!extendFrom.empty()) {
      ea::AtomTable at = ea::atom_analysis(e, an.ord);
      Bits q;
      if (extendFrom == "sharp") {
        q = ea::sharp_elements(e, an.ord);
      } else if (extendFrom == "e1") {
        q = ea::e1_subalgebra(e, an.ord, at);
      } else if (extendFrom.rfind("block:", 0) == 0) {
        ea::BlockDecomposition bd = ea::blocks(e, an.ord);
        size_t i = std::stoul(extendFrom.substr(6));
        if (i >= bd.blocks.size()) throw ea::InputError("block index out of range");
        q = bd.blocks[i];
      } else {
        throw ea::InputError("--extend-from takes sharp | e1 | block:I");
      }
      EffectAlgebra sub = ea::restrict_to(e, an.ord, q);
      std::vector<ea::State> ext = ea::extreme_states(sub, caps);
      Json arr = Json::array();
      bool allFeasible = true;
      for (const ea::State& s : ext) {
        ea::RatVec onQ(e.size(), 0);
        int i = 0;
        for (int a = static_cast<int>(q.find_first()); a != -1;
             a = static_cast<int>(q.find_next(a)))
          onQ[a] = s.values[i++];
        ea::ExtensionProblem prob = ea::extend_state(e, an.ord, at, q, onQ);
        allFeasible &= prob.feasible;
        Json item;
        item["feasible"] = prob.feasible;
        item["fastPathApplicable"] = prob.fastPathApplicable;
        item["fastPathHit"] = prob.fastPathHit;
        if (prob.witness) {
          Json w;
          for (int j = 0; j < e.size(); ++j)
            w[e.label(j)] = ea::rational_to_string(prob.witness->values[j]);
          item["witness"] = std::move(w);
        }
        arr.push_back(std::move(item));
      }
      out["extensions"] = std::move(arr);
      emit(out, machine);
      return allFeasible ? kOk : kFalsified;
    }
    emit(out, machine);
    return kOk;
  }

  if (*completeCmd) {
    ea::Analyzed an = ea::analyze_base(load(file));
    ea::DMCompletion dm = ea::dm_complete(ea::Poset::of(an.ord));
    Json out;
    out["cuts"] = dm.size();
    out["isomorphic"] = dm.isIsomorphicToSource;
    out["lattice"] = an.ord.isLattice;
    if (!an.ord.isLattice)
      out["note"] = "order completion only; the partial sum does not transfer";
    Json emb;
    for (int i = 0; i < an.alg.size(); ++i)
      emb[an.alg.label(i)] = dm.embedding[i];
    out["embedding"] = std::move(emb);
    if (dm.isIsomorphicToSource) out["instance"] = ea::instance_to_json(an.alg);
    emit(out, machine);
    return kOk;
  }

  if (*genCmd) {
    std::vector<std::string> warnings;
    EffectAlgebra e = ea::instantiate(ea::parse_spec(spec), caps, &warnings);
    for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
    std::cout << ea::instance_to_text(e);
    return kOk;
  }

  if (*enumerateCmd) {
    std::vector<EffectAlgebra> all = ea::enumerate_algebras(maxSize, caps);
    if (machine) {
      Json arr = Json::array();
      for (const EffectAlgebra& e : all) arr.push_back(ea::instance_to_json(e));
      std::cout << arr.dump(2) << "\n";
    } else {
      std::map<int, int> bySize;
      for (const EffectAlgebra& e : all) bySize[e.size()]++;
      for (auto [size, count] : bySize)
        std::cout << "size " << size << ": " << count << " instance(s)\n";
      std::cout << "total: " << all.size() << "\n";
    }
    return kOk;
  }

  if (*familyCmd) {
    ea::SymbolicFamily fam = ea::to_family(ea::parse_spec(spec));
    ea::FamilyVerdict verdict = ea::family_analyze(fam);
    Json out;
    out["finiteCofiniteElements"] = ea::family_finite_cofinite(fam).text;
    for (const auto& [prop, flag] : verdict.flags) {
      Json item;
      item["value"] = flag.value == ea::Truth::True    ? "TRUE"
                      : flag.value == ea::Truth::False ? "FALSE"
                                                       : "UNKNOWN";
      item["rule"] = flag.rule;
      Json hyps = Json::array();
      for (ea::Property h : flag.hypotheses) hyps.push_back(ea::property_name(h));
      item["hypotheses"] = std::move(hyps);
      out[ea::property_name(prop)] = std::move(item);
    }
    emit(out, machine);
    return kOk;
  }

  if (*checkAll) {
    bool anyFail = false, anySkip = false;
    Json rep = ea::check_all_report(load(file), caps, &anyFail, &anySkip);
    if (machine) {
      emit(rep, true);
    } else {
      for (const auto& item : rep["checks"]) {
        std::cout << item["status"].get<std::string>() << " "
                  << item["name"].get<std::string>();
        std::string detail = item["detail"].get<std::string>();
        if (!detail.empty()) std::cout << ": " << detail;
        std::cout << "\n";
      }
    }
    return anyFail ? kFalsified : kOk;
  }

  if (*dotCmd) {
    ea::WitnessContext ctx = ea::make_witness_context(load(file));
    Bits sharp = ea::sharp_elements(ctx.alg, ctx.ord);
    std::vector<ea::DotGroup> groups;
    if (!highlight.empty()) {
      std::vector<std::string> parts;
      std::stringstream ss(highlight);
      std::string item;
      while (std::getline(ss, item, ':')) parts.push_back(item);
      if (parts.size() != 3) throw ea::InputError("--highlight takes kind:arg1:arg2");
      if (parts[0] == "separate") {
        ea::SeparationWitness w =
            ea::separate(ctx, element_of(ctx.alg, parts[1]), element_of(ctx.alg, parts[2]));
        groups.push_back({"up", "lightblue", w.up.members});
        groups.push_back({"down", "lightyellow", w.down.members});
      } else if (parts[0] == "partition") {
        ea::PartitionWitness w =
            ea::ao_partition(ctx, element_of(ctx.alg, parts[1]), std::stoi(parts[2]));
        groups.push_back({"head", "lightyellow", w.head.members});
        Bits tail(ctx.alg.size());
        for (const ea::Interval& iv : w.tail) tail |= iv.members;
        groups.push_back({"tail", "lightblue", tail});
      } else if (parts[0] == "cover") {
        ea::CoverWitness w = ea::blockfinite_cover(
            ctx, element_of(ctx.alg, parts[1]), element_of(ctx.alg, parts[2]));
        Bits js(ctx.alg.size()), ks(ctx.alg.size());
        for (const ea::BlockCover& bc : w.perBlock) {
          js |= bc.j.members;
          ks |= bc.k.members;
        }
        groups.push_back({"J", "lightyellow", js});
        groups.push_back({"K", "lightblue", ks});
      } else {
        throw ea::InputError("--highlight kind must be separate, partition or cover");
      }
    }
    std::cout << ea::dot_export(ctx.alg, ctx.ord, ctx.atoms, sharp, groups);
    return kOk;
  }

  return kUsage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ea::CapExceeded& err) {
    std::cerr << "cap exceeded: " << err.what() << "\n";
    return kCap;
  } catch (const ea::FalsificationError& err) {
    std::cerr << "FALSIFIED: " << err.what() << "\n";
    return kFalsified;
  } catch (const ea::InputError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kUsage;
  } catch (const std::exception& err) {
    std::cerr << "internal error: " << err.what() << "\n";
    return kUsage;
  }
}
