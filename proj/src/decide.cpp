#include "symmod/decide.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <set>

#include "symmod/sat.hpp"

namespace symmod {

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Sat:
      return "sat";
    case Verdict::Unsat:
      return "unsat";
    case Verdict::Unknown:
      return "unknown";
  }
  return "unknown";
}

namespace {

using Clock = std::chrono::steady_clock;
using Block = std::vector<char>;

struct OutOfTime {};

void collect_leaves(const FormulaPtr& f, std::vector<FormulaPtr>& out) {
  if (f->kind == Formula::Kind::Forall) out.push_back(f);
  else if (f->kind == Formula::Kind::And || f->kind == Formula::Kind::Or)
    for (const auto& s : f->subs) collect_leaves(s, out);
}

bool skeleton(const FormulaPtr& f, const std::map<const Formula*, bool>& chosen) {
  switch (f->kind) {
    case Formula::Kind::True:
      return true;
    case Formula::Kind::False:
      return false;
    case Formula::Kind::Forall:
      return chosen.at(f.get());
    case Formula::Kind::And:
      return std::all_of(f->subs.begin(), f->subs.end(), [&](const FormulaPtr& s) { return skeleton(s, chosen); });
    case Formula::Kind::Or:
      return std::any_of(f->subs.begin(), f->subs.end(), [&](const FormulaPtr& s) { return skeleton(s, chosen); });
    default:
      throw UnsupportedError("decide: unexpected connective in " + to_string(f));
  }
}

// Minimal sets of universal leaves whose truth makes phi true, smallest first.
std::vector<std::vector<FormulaPtr>> selections(const FormulaPtr& phi) {
  std::vector<FormulaPtr> leaves;
  collect_leaves(phi, leaves);
  if (leaves.size() > 20) throw ResourceError("decide: more than 20 universal subformulas");
  const unsigned n = static_cast<unsigned>(leaves.size());
  std::vector<unsigned> masks(1u << n);
  for (unsigned m = 0; m < masks.size(); ++m) masks[m] = m;
  std::stable_sort(masks.begin(), masks.end(),
                   [](unsigned a, unsigned b) { return __builtin_popcount(a) < __builtin_popcount(b); });
  std::vector<unsigned> found;
  std::vector<std::vector<FormulaPtr>> out;
  for (unsigned m : masks) {
    if (std::any_of(found.begin(), found.end(), [&](unsigned f) { return (f & m) == f; })) continue;
    std::map<const Formula*, bool> chosen;
    for (unsigned i = 0; i < n; ++i) chosen[leaves[i].get()] = (m >> i) & 1;
    if (!skeleton(phi, chosen)) continue;
    found.push_back(m);
    std::vector<FormulaPtr> sel;
    for (unsigned i = 0; i < n; ++i)
      if ((m >> i) & 1) sel.push_back(leaves[i]);
    out.push_back(sel);
  }
  return out;
}

// Propositional encoding of the local picture over points T followed by the
// constants. With terms == false only the constants are points and their
// facts are free variables.
struct Encoder {
  const AtomUniverse& u;
  CnfBuilder& b;
  bool terms;
  std::vector<int> atom;                 // atom index -> literal
  std::vector<std::vector<int>> glt, geq;  // constants
  std::vector<std::vector<int>> gpred;

  Encoder(const AtomUniverse& uu, CnfBuilder& bb, const GroundFacts* g) : u(uu), b(bb), terms(g != nullptr) {
    const size_t nc = u.constants().size();
    glt.assign(nc, std::vector<int>(nc, b.bottom()));
    geq = glt;
    gpred.assign(u.predicates().size(), std::vector<int>(nc, b.bottom()));
    auto lit = [&](bool v) { return v ? b.top() : b.bottom(); };
    for (size_t c = 0; c < nc; ++c) {
      geq[c][c] = b.top();
      for (size_t d = 0; d < nc; ++d) {
        if (c == d) continue;
        glt[c][d] = g ? lit(g->lt[c][d]) : b.fresh();
        if (d > c) geq[c][d] = geq[d][c] = g ? lit(g->eq[c][d]) : b.fresh();
      }
      for (size_t q = 0; q < u.predicates().size(); ++q) gpred[q][c] = g ? lit(g->pred[q][c]) : b.fresh();
    }
    if (terms)
      for (int a = 0; a < u.size(); ++a) atom.push_back(b.fresh());
  }

  int nt() const { return terms ? u.term_count() : 0; }
  int points() const { return nt() + static_cast<int>(u.constants().size()); }
  size_t ci(int p) const { return static_cast<size_t>(p - nt()); }
  int at(int a) const { return atom[static_cast<size_t>(a)]; }

  int lt(int i, int j) const {
    if (i == j) return b.bottom();
    if (i < nt() && j < nt()) return at(u.lt(i, j));
    if (i < nt()) return at(u.lt_const(i, static_cast<int>(ci(j))));
    if (j < nt()) return at(u.const_lt(static_cast<int>(ci(i)), j));
    return glt[ci(i)][ci(j)];
  }
  int eq(int i, int j) const {
    if (i == j) return b.top();
    if (i < nt() && j < nt()) return at(u.eq(i, j));
    if (i < nt()) return at(u.eq_const(i, static_cast<int>(ci(j))));
    if (j < nt()) return at(u.eq_const(j, static_cast<int>(ci(i))));
    return geq[ci(i)][ci(j)];
  }
  int pred(size_t q, int i) const { return i < nt() ? at(u.pred(i, static_cast<int>(q))) : gpred[q][ci(i)]; }

  void picture(Flavor flavor) {
    SatSolver& s = b.solver();
    const int n = points();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        s.add_clause({-lt(i, j), -eq(i, j)});
        if (is_tot(flavor) && i < j) s.add_clause({lt(i, j), eq(i, j), lt(j, i)});
        for (int k = 0; k < n; ++k) {
          if (k == i || k == j) continue;
          s.add_clause({-lt(i, j), -lt(j, k), lt(i, k)});
          s.add_clause({-eq(i, j), -eq(j, k), eq(i, k)});
          s.add_clause({-eq(i, j), -lt(i, k), lt(j, k)});
          s.add_clause({-eq(i, j), -lt(k, i), lt(k, j)});
          if (is_pref(flavor) && i < j) s.add_clause({-lt(i, k), -lt(j, k), lt(i, j), eq(i, j), lt(j, i)});
        }
        if (i < j) s.add_clause({-lt(i, j), -lt(j, i)});
        for (size_t q = 0; q < u.predicates().size(); ++q) {
          s.add_clause({-eq(i, j), -pred(q, i), pred(q, j)});
        }
      }
    for (int t = 1; t < nt(); ++t) {
      if (has_prosucc(flavor)) b.require(lt(0, t));
      if (has_regpred(flavor)) b.require(lt(t, 0));
    }
  }

  int point(const TermPtr& t, const std::string& var) const {
    switch (t->kind) {
      case Term::Kind::Var:
        if (t->name != var) throw UnsupportedError("decide: unexpected variable " + t->name);
        return 0;
      case Term::Kind::Const:
        return nt() + u.constant_index(t->name);
      case Term::Kind::App:
        return u.function_index(t->name);
      default:
        throw UnsupportedError("decide: unexpected term " + to_string(t));
    }
  }

  int formula(const FormulaPtr& f, const std::string& var) {
    std::vector<int> xs;
    switch (f->kind) {
      case Formula::Kind::True:
        return b.top();
      case Formula::Kind::False:
        return b.bottom();
      case Formula::Kind::Eq:
        return eq(point(f->terms[0], var), point(f->terms[1], var));
      case Formula::Kind::Atom: {
        if (f->name == u.order()) return lt(point(f->terms[0], var), point(f->terms[1], var));
        auto q = std::find(u.predicates().begin(), u.predicates().end(), f->name);
        if (q == u.predicates().end()) throw UnsupportedError("decide: unknown relation " + f->name);
        return pred(static_cast<size_t>(q - u.predicates().begin()), point(f->terms[0], var));
      }
      case Formula::Kind::Not:
        return -formula(f->subs[0], var);
      case Formula::Kind::Implies:
        return b.make_implies(formula(f->subs[0], var), formula(f->subs[1], var));
      case Formula::Kind::And:
      case Formula::Kind::Or:
        for (const auto& s : f->subs) xs.push_back(formula(s, var));
        return f->kind == Formula::Kind::And ? b.make_and(xs) : b.make_or(xs);
      default:
        throw UnsupportedError("decide: quantifier inside a universal body: " + to_string(f));
    }
  }
};

std::vector<GroundFacts> ground_configurations(const AtomUniverse& u, Flavor flavor, Clock::time_point deadline) {
  SatSolver s;
  CnfBuilder b(s);
  Encoder e(u, b, nullptr);
  e.picture(flavor);
  const size_t nc = u.constants().size();
  std::vector<GroundFacts> out;
  while (s.solve() == SatSolver::Result::Sat) {
    if (Clock::now() > deadline) throw OutOfTime{};
    GroundFacts g;
    g.lt.assign(nc, std::vector<char>(nc, 0));
    g.eq.assign(nc, std::vector<char>(nc, 0));
    g.pred.assign(u.predicates().size(), std::vector<char>(nc, 0));
    std::vector<int> block;
    auto read = [&](int lit) {
      bool v = s.lit_value(lit);
      if (std::abs(lit) != std::abs(b.top())) block.push_back(v ? -lit : lit);
      return static_cast<char>(v);
    };
    for (size_t c = 0; c < nc; ++c) {
      for (size_t d = 0; d < nc; ++d) {
        g.lt[c][d] = read(e.glt[c][d]);
        g.eq[c][d] = read(e.geq[c][d]);
      }
      for (size_t q = 0; q < u.predicates().size(); ++q) g.pred[q][c] = read(e.gpred[q][c]);
    }
    out.push_back(std::move(g));
    std::sort(block.begin(), block.end());
    block.erase(std::unique(block.begin(), block.end()), block.end());
    if (block.empty()) break;
    s.add_clause(block);
  }
  return out;
}

class ProfileSearch {
 public:
  ProfileSearch(const AtomUniverse& u, const FormulaPtr& phi, Flavor flavor, const GroundFacts& g,
                const std::vector<FormulaPtr>& selected, const DecideOptions& opts, Clock::time_point deadline,
                DecisionOutcome& out)
      : u_(u), phi_(phi), flavor_(flavor), g_(g), selected_(selected), opts_(opts), deadline_(deadline), out_(out) {}

  bool run(int max_classes) {
    max_classes_ = max_classes;
    std::vector<std::optional<Block>> pending;
    std::set<Block> seen;
    const size_t nc = u_.constants().size();
    for (size_t c = 0; c < nc; ++c) {
      Block blk(static_cast<size_t>(u_.block_size()), 0);
      for (size_t q = 0; q < u_.predicates().size(); ++q) blk[static_cast<size_t>(u_.pred(0, static_cast<int>(q)))] = g_.pred[q][c];
      for (size_t d = 0; d < nc; ++d) {
        blk[static_cast<size_t>(u_.eq_const(0, static_cast<int>(d)))] = g_.eq[c][d];
        blk[static_cast<size_t>(u_.lt_const(0, static_cast<int>(d)))] = g_.lt[c][d];
        blk[static_cast<size_t>(u_.const_lt(static_cast<int>(d), 0))] = g_.lt[d][c];
      }
      if (seen.insert(blk).second) pending.push_back(blk);
    }
    if (pending.empty()) pending.push_back(std::nullopt);
    classes_.clear();
    return dfs(pending);
  }

 private:
  std::vector<Block> known(const std::vector<std::optional<Block>>& pending) const {
    std::vector<Block> out;
    for (const auto& c : classes_) out.push_back(term_block(u_, c, 0));
    for (const auto& p : pending)
      if (p) out.push_back(*p);
    return out;
  }

  std::vector<AtomSet> candidates(const std::optional<Block>& blk, const std::vector<Block>& known, bool closed,
                                  const std::set<AtomSet>& exclude, int limit) const {
    SatSolver s;
    CnfBuilder b(s);
    Encoder e(u_, b, &g_);
    e.picture(flavor_);
    for (const auto& leaf : selected_) b.require(e.formula(leaf->body(), leaf->name));
    if (blk)
      for (size_t k = 0; k < blk->size(); ++k) b.require((*blk)[k] ? e.at(static_cast<int>(k)) : -e.at(static_cast<int>(k)));
    else
      for (size_t c = 0; c < u_.constants().size(); ++c) b.require(-e.at(u_.eq_const(0, static_cast<int>(c))));
    if (closed) {
      const int bs = u_.block_size();
      for (int f = 1; f < u_.term_count(); ++f) {
        std::vector<int> options{e.at(u_.eq(0, f))};
        for (const Block& kb : known) {
          std::vector<int> match;
          for (int k = 0; k < bs; ++k) match.push_back(kb[static_cast<size_t>(k)] ? e.at(f * bs + k) : -e.at(f * bs + k));
          options.push_back(b.make_and(match));
        }
        s.add_clause(options);
      }
    }
    auto block_type = [&](const AtomSet& t) {
      std::vector<int> c;
      for (int a = 0; a < u_.size(); ++a) c.push_back(t[static_cast<size_t>(a)] ? -e.at(a) : e.at(a));
      s.add_clause(c);
    };
    for (const auto& t : exclude) block_type(t);
    std::vector<AtomSet> out;
    while (static_cast<int>(out.size()) < limit && s.solve() == SatSolver::Result::Sat) {
      if (Clock::now() > deadline_) throw OutOfTime{};
      AtomSet t(static_cast<size_t>(u_.size()), 0);
      for (int a = 0; a < u_.size(); ++a) t[static_cast<size_t>(a)] = s.value(e.at(a));
      out.push_back(t);
      block_type(t);
    }
    return out;
  }

  bool finish() {
    AtomProfile p;
    p.signature = u_.signature();
    for (const auto& c : classes_) p.classes.push_back({"", c});
    sort_classes(p);
    for (size_t i = 0; i < p.classes.size(); ++i) p.classes[i].name = "n" + std::to_string(i);
    std::string key;
    for (const auto& c : p.classes) key += encoding(c.atoms) + "|";
    if (!tried_.insert(key).second) return false;
    if (!validate_profile(p, flavor_).ok()) return false;
    ++out_.profiles_checked;
    try {
      ConstructionResult r = construct_and_verify(p, flavor_, phi_);
      if (!r.valid) return false;
      out_.witness = std::move(r.structure);
      out_.profile = std::move(p);
      return true;
    } catch (const Error&) {
      return false;
    }
  }

  bool dfs(std::vector<std::optional<Block>> pending) {
    if (Clock::now() > deadline_) throw OutOfTime{};
    if (pending.empty()) return finish();
    if (static_cast<int>(classes_.size() + pending.size()) > max_classes_) return false;
    std::optional<Block> blk = pending.front();
    pending.erase(pending.begin());
    std::vector<Block> kn = known(pending);
    if (blk) kn.push_back(*blk);

    std::set<AtomSet> tried;
    for (bool closed : {true, false}) {
      for (const AtomSet& t : candidates(blk, kn, closed, tried, opts_.candidates_per_class)) {
        tried.insert(t);
        std::vector<Block> have = kn;
        have.push_back(term_block(u_, t, 0));
        std::vector<std::optional<Block>> next = pending;
        for (int f = 1; f < u_.term_count(); ++f) {
          if (t[static_cast<size_t>(u_.eq(0, f))]) continue;
          Block img = term_block(u_, t, f);
          if (std::find(have.begin(), have.end(), img) != have.end()) continue;
          have.push_back(img);
          next.push_back(img);
        }
        classes_.push_back(t);
        if (dfs(next)) return true;
        classes_.pop_back();
      }
    }
    return false;
  }

  const AtomUniverse& u_;
  FormulaPtr phi_;
  Flavor flavor_;
  const GroundFacts& g_;
  const std::vector<FormulaPtr>& selected_;
  const DecideOptions& opts_;
  Clock::time_point deadline_;
  DecisionOutcome& out_;
  int max_classes_ = 0;
  std::vector<AtomSet> classes_;
  std::set<std::string> tried_;
};

}  // namespace

DecisionOutcome decide(const FormulaPtr& phi, const Signature& sig, Flavor flavor, const DecideOptions& opts) {
  FragmentReport fr = check_osc_star(phi, sig);
  if (!fr.member) throw UnsupportedError("decide: not in OSC*: " + to_string(fr));
  const auto start = Clock::now();
  const auto deadline = start + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(opts.budget_seconds));
  AtomUniverse u(sig);
  FormulaPtr alpha_phi = mk_and({build_axiom(flavor, sig), phi});
  DecisionOutcome out;

  auto refute = [&](int depth) {
    if (depth > opts.max_depth || depth <= out.refute_depth) return false;
    Refutation r = bounded_refute(alpha_phi, sig, depth);
    out.refute_depth = depth;
    if (!r.refuted) return false;
    out.refutation = std::move(r);
    out.verdict = Verdict::Unsat;
    return true;
  };

  try {
    if (!refute(0)) {
      std::vector<std::vector<FormulaPtr>> sels = selections(phi);
      std::vector<GroundFacts> grounds = ground_configurations(u, flavor, deadline);
      for (int k = 1; k <= opts.max_classes && out.verdict == Verdict::Unknown; ++k) {
        for (const auto& g : grounds) {
          for (const auto& sel : sels) {
            ProfileSearch search(u, phi, flavor, g, sel, opts, deadline, out);
            if (search.run(k)) {
              out.verdict = Verdict::Sat;
              break;
            }
          }
          if (out.verdict == Verdict::Sat) break;
        }
        if (out.verdict == Verdict::Unknown && Clock::now() < deadline) refute(k);
      }
      for (int d = out.refute_depth + 1; out.verdict == Verdict::Unknown && d <= opts.max_depth; ++d) {
        if (Clock::now() > deadline) break;
        refute(d);
      }
    }
  } catch (const OutOfTime&) {
  }
  out.seconds = std::chrono::duration<double>(Clock::now() - start).count();

  std::string& rep = out.report;
  rep = "verdict: " + verdict_name(out.verdict) + "\n";
  if (out.verdict == Verdict::Sat)
    rep += "witness: " + std::to_string(out.witness->nodes.size()) + " node(s) over " + out.witness->theory.name() + "\n";
  if (out.verdict == Verdict::Unsat)
    rep += "refuted at depth " + std::to_string(out.refutation.depth) + " with " +
           std::to_string(out.refutation.instances.size()) + " ground instances\n";
  rep += "profiles checked: " + std::to_string(out.profiles_checked) + "\n";
  rep += "refutation depth tried: " + std::to_string(out.refute_depth) + "\n";
  return out;
}

}  // namespace symmod
