#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "symmod/decide.hpp"
#include "symmod/parse.hpp"
#include "symmod/translate.hpp"

using namespace symmod;

namespace {

constexpr int kYes = 0, kNo = 1, kUnknown = 2, kInputError = 3;

struct Options {
  std::string theory;
  int alphabet = -1;
  std::string flavor;
  int bound = 4;
  int max_classes = 6;
  int depth = 4;
  double budget = 60;
  std::string output;
  std::string cert;
  std::string fragment = "osc-star";
  std::string axiom;
  std::vector<std::string> files;
};

Flavor flavor_of(const std::string& name) {
  auto f = parse_flavor(name);
  if (!f) throw Error("unknown flavor '" + name + "'");
  return *f;
}

void emit(const Options& o, const std::string& text) {
  if (o.output.empty()) return;
  write_text_file(o.output, text);
  std::cout << "wrote " << o.output << "\n";
}

SymbolicStructure load_sst(const Options& o) {
  SymbolicStructure s = read_sst_file(o.files.at(0));
  if (!o.theory.empty()) {
    if (o.theory == "lia") s.theory = TheoryDescriptor::lia();
    else if (o.theory == "str") s.theory = TheoryDescriptor::str(o.alphabet < 0 ? s.theory.ell : o.alphabet);
    else throw Error("unknown theory '" + o.theory + "' (expected lia or str)");
  } else if (o.alphabet >= 0 && s.theory.id == TheoryId::Str) {
    s.theory = TheoryDescriptor::str(o.alphabet);
  }
  return s;
}

int check_fragment(const Options& o) {
  FolDocument d = read_fol_file(o.files.at(0));
  FormulaPtr phi = d.conjunction();
  FragmentReport r;
  if (o.fragment == "sf") r = check_sf(phi, d.signature);
  else if (o.fragment == "osc") r = check_osc(phi, d.signature);
  else if (o.fragment == "osc-star") r = check_osc_star(phi, d.signature);
  else throw Error("unknown fragment '" + o.fragment + "' (expected sf, osc or osc-star)");
  std::cout << o.fragment << ": " << to_string(r) << "\n";
  if (!o.axiom.empty()) {
    FolDocument ax{d.signature, axiom_conjuncts(flavor_of(o.axiom), d.signature)};
    std::cout << "; axiom " << o.axiom << "\n" << print_fol(ax);
  }
  return r.member ? kYes : kNo;
}

int translate(const Options& o) {
  FolDocument d = read_fol_file(o.files.at(0));
  Translation t = translate_to_osc_star(d.conjunction(), d.signature);
  std::string text = print_fol({t.signature, {t.formula}});
  if (t.certificate.empty()) std::cout << "already in OSC*\n";
  else std::cout << t.case_formulas.size() << " cases, " << t.certificate.specializations.size()
                 << " specialized symbols, " << t.certificate.flattenings.size() << " flattened terms\n";
  if (o.output.empty()) std::cout << text;
  emit(o, text);
  if (!o.cert.empty()) {
    write_text_file(o.cert, print_certificate(t.certificate));
    std::cout << "wrote " << o.cert << "\n";
  }
  return kYes;
}

int wf(const Options& o) {
  SymbolicStructure s = load_sst(o);
  WfReport r = check_well_defined(s, *make_theory(s.theory));
  for (const auto& v : r.violations) std::cout << "violation: " << v << "\n";
  std::cout << (r.ok() ? "well-defined" : "not well-defined") << "\n";
  return r.ok() ? kYes : kNo;
}

int mc(const Options& o) {
  SymbolicStructure s = load_sst(o);
  FolDocument d = read_fol_file(o.files.at(1), s.signature);
  TheoryPtr th = make_theory(s.theory);
  bool all = true;
  for (const auto& f : d.formulas) {
    bool v = model_check(s, *th, f);
    all = all && v;
    std::cout << (v ? "VALID   " : "INVALID ") << to_string(f) << "\n";
  }
  std::cout << (all ? "VALID" : "INVALID") << "\n";
  return all ? kYes : kNo;
}

int explicate(const Options& o) {
  SymbolicStructure s = load_sst(o);
  Explication e = explicate_sample(s, *make_theory(s.theory), o.bound);
  std::ostringstream out;
  auto name = [&](int i) { return i == Explication::kOutOfSample ? std::string("?") : to_string(e.elements[i]); };
  out << "; " << e.elements.size() << " elements of size <= " << o.bound << "\n";
  for (const auto& [node, ids] : e.by_node) {
    out << "(node " << node;
    for (int i : ids) out << " " << to_string(e.elements[i].value);
    out << ")\n";
  }
  for (const auto& [c, i] : e.constants) out << "(const " << c << " " << name(i) << ")\n";
  for (const auto& [f, table] : e.functions)
    for (const auto& [args, v] : table) {
      out << "(fun " << f;
      for (int a : args) out << " " << name(a);
      out << " -> " << name(v) << ")\n";
    }
  for (const auto& [r, tuples] : e.relations)
    for (const auto& args : tuples) {
      out << "(rel " << r;
      for (int a : args) out << " " << name(a);
      out << ")\n";
    }
  std::cout << out.str();
  emit(o, out.str());
  return kYes;
}

int profile(const Options& o) {
  AtomProfile p = extract_profile(read_fin_file(o.files.at(0)));
  std::string text = print_profile(p);
  std::cout << text;
  emit(o, text);
  if (o.flavor.empty()) return kYes;
  ProfileReport r = validate_profile(p, flavor_of(o.flavor));
  for (const auto& v : r.violations) std::cout << "violation: " << v << "\n";
  std::cout << (r.ok() ? "valid profile" : "invalid profile") << "\n";
  return r.ok() ? kYes : kNo;
}

int construct_cmd(const Options& o) {
  if (o.flavor.empty()) throw Error("construct needs --flavor");
  Flavor flavor = flavor_of(o.flavor);
  AtomProfile p = read_profile_file(o.files.at(0));
  ProfileReport r = validate_profile(p, flavor);
  if (!r.ok()) {
    for (const auto& v : r.violations) std::cout << "violation: " << v << "\n";
    return kNo;
  }
  FormulaPtr phi = mk_true();
  if (o.files.size() > 1) phi = read_fol_file(o.files[1], p.signature).conjunction();
  ConstructionResult c = construct_and_verify(p, flavor, phi);
  std::string text = print_sst(c.structure);
  if (o.output.empty()) std::cout << text;
  emit(o, text);
  for (const auto& v : c.wf.violations) std::cout << "violation: " << v << "\n";
  std::cout << (c.wf.ok() ? "well-defined" : "not well-defined") << ", " << (c.valid ? "VALID" : "INVALID")
            << " for the " << o.flavor << " axiom" << (o.files.size() > 1 ? " and the formula" : "") << "\n";
  return c.wf.ok() && c.valid ? kYes : kNo;
}

int decide_cmd(const Options& o) {
  if (o.flavor.empty()) throw Error("decide needs --flavor");
  Flavor flavor = flavor_of(o.flavor);
  FolDocument d = read_fol_file(o.files.at(0));
  FormulaPtr phi = d.conjunction();
  Signature sig = d.signature;
  if (!check_osc_star(phi, sig).member && check_osc(phi, sig).member) {
    Translation t = translate_to_osc_star(phi, sig);
    std::cout << "translated to OSC* (" << t.case_formulas.size() << " cases)\n";
    phi = t.formula;
    sig = t.signature;
  }
  DecideOptions opts;
  opts.max_classes = o.max_classes;
  opts.max_depth = o.depth;
  opts.budget_seconds = o.budget;
  DecisionOutcome out = decide(phi, sig, flavor, opts);
  std::cout << out.report << "\n" << verdict_name(out.verdict) << "\n";
  if (out.verdict == Verdict::Sat) {
    std::string text = print_sst(*out.witness);
    if (o.output.empty()) std::cout << text;
    emit(o, text);
    return kYes;
  }
  if (out.verdict == Verdict::Unsat) {
    std::cout << "refuted at depth " << out.refutation.depth << " with " << out.refutation.instances.size()
              << " ground instances\n";
    return kNo;
  }
  return kUnknown;
}

int finite_search(const Options& o) {
  FolDocument d = read_fol_file(o.files.at(0));
  FormulaPtr psi = d.conjunction();
  if (!o.flavor.empty()) psi = mk_and({build_axiom(flavor_of(o.flavor), d.signature), psi});
  auto m = finite_model_search(psi, d.signature, o.bound);
  if (!m) {
    std::cout << "no model with at most " << o.bound << " elements per sort\n";
    return kNo;
  }
  std::string text = print_fin(*m);
  if (o.output.empty()) std::cout << text;
  emit(o, text);
  std::cout << "model found\n";
  return kYes;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symbolic models for ordered structures"};
  app.require_subcommand(1);
  Options o;

  auto files = [&](CLI::App* c, const std::string& what, int n) {
    c->add_option("files", o.files, what)->required()->expected(n, n)->check(CLI::ExistingFile);
  };
  auto sst_flags = [&](CLI::App* c) {
    c->add_option("--theory", o.theory, "override the theory (lia or str)");
    c->add_option("--alphabet", o.alphabet, "STR letters 0..N");
  };

  auto* cf = app.add_subcommand("check-fragment", "fragment membership of a .fol file");
  files(cf, "FORMULA.fol", 1);
  cf->add_option("--fragment", o.fragment, "sf, osc or osc-star")->capture_default_str();
  cf->add_option("--axiom", o.axiom, "also print the axiom of this flavor");

  auto* tr = app.add_subcommand("translate", "OSC to OSC*");
  files(tr, "FORMULA.fol", 1);
  tr->add_option("-o", o.output, "write the translated .fol");
  tr->add_option("--cert", o.cert, "write the back-translation certificate");

  auto* w = app.add_subcommand("wf", "well-definedness of a .sst");
  files(w, "STRUCTURE.sst", 1);
  sst_flags(w);

  auto* m = app.add_subcommand("mc", "model check a .fol against a .sst");
  files(m, "STRUCTURE.sst FORMULA.fol", 2);
  sst_flags(m);

  auto* ex = app.add_subcommand("explicate", "finite window of the explicit structure");
  files(ex, "STRUCTURE.sst", 1);
  sst_flags(ex);
  ex->add_option("--bound", o.bound, "element size bound")->capture_default_str();
  ex->add_option("-o", o.output, "output file");

  auto* pr = app.add_subcommand("profile", "atom profile of a finite structure");
  files(pr, "STRUCTURE.fin", 1);
  pr->add_option("--flavor", o.flavor, "validate against this flavor");
  pr->add_option("-o", o.output, "write the .prof");

  auto* co = app.add_subcommand("construct", "symbolic structure from a profile");
  co->add_option("files", o.files, "PROFILE.prof [FORMULA.fol]")->required()->expected(1, 2)->check(CLI::ExistingFile);
  co->add_option("--flavor", o.flavor, "order flavor")->required();
  co->add_option("-o", o.output, "write the .sst");

  auto* de = app.add_subcommand("decide", "satisfiability modulo an order axiom");
  files(de, "FORMULA.fol", 1);
  de->add_option("--flavor", o.flavor, "order flavor")->required();
  de->add_option("--max-classes", o.max_classes, "profile class budget")->capture_default_str();
  de->add_option("--depth", o.depth, "refutation depth")->capture_default_str();
  de->add_option("--budget", o.budget, "seconds")->capture_default_str();
  de->add_option("-o", o.output, "write the witness .sst");

  auto* fs = app.add_subcommand("finite-search", "finite model search");
  files(fs, "FORMULA.fol", 1);
  fs->add_option("--bound", o.bound, "maximum size per sort")->capture_default_str();
  fs->add_option("--flavor", o.flavor, "conjoin this order axiom");
  fs->add_option("-o", o.output, "write the .fin");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kInputError;
  }

  try {
    if (*cf) return check_fragment(o);
    if (*tr) return translate(o);
    if (*w) return wf(o);
    if (*m) return mc(o);
    if (*ex) return explicate(o);
    if (*pr) return profile(o);
    if (*co) return construct_cmd(o);
    if (*de) return decide_cmd(o);
    if (*fs) return finite_search(o);
  } catch (const ResourceError& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return kUnknown;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
