#pragma once

#include <functional>
#include <map>
#include <random>
#include <regex>

#include "symmod/regex.hpp"
#include "symmod/str_theory.hpp"

namespace {

using namespace symmod;

const std::string S = kStrSort;

TermPtr X(const std::string& n) { return mk_var(n, S); }

Word W(const std::string& s) {
  Word w;
  for (char c : s) w.push_back(c - '0');
  return w;
}

std::vector<Word> all_words(int ell, int max_len) {
  std::vector<Word> out{{}};
  for (size_t i = 0; i < out.size(); ++i) {
    if (static_cast<int>(out[i].size()) == max_len) continue;
    for (int l = 0; l <= ell; ++l) {
      Word w = out[i];
      w.push_back(l);
      out.push_back(w);
    }
  }
  return out;
}

std::string text(const Word& w) {
  std::string s;
  for (int l : w) s += static_cast<char>('0' + l);
  return s;
}

// Hand-coded tree navigation, written directly from the definitions.
namespace oracle {

bool only(const Word& w, int lo, int hi) {
  for (int l : w)
    if (l < lo || l > hi) return false;
  return true;
}
bool neg_sp(const Word& w) { return !w.empty() && only(w, 0, 0); }
bool pos(const Word& w, int ell) { return only(w, 1, ell); }
bool neg_br(const Word& w, int ell) {
  size_t k = 0;
  while (k < w.size() && w[k] == 0) ++k;
  if (k == 0 || k == w.size() || w[k] < 2 || w[k] > ell) return false;
  return only(Word(w.begin() + k + 1, w.end()), 1, ell);
}
bool in_tree(const Word& w, int ell) { return pos(w, ell) || neg_sp(w) || neg_br(w, ell); }

Word plus(Word w, int l) {
  w.push_back(l);
  return w;
}
Word trim1(Word w) {
  if (!w.empty()) w.pop_back();
  return w;
}
Word pref0(const Word& w) {
  Word p;
  for (int l : w) {
    if (l != 0) break;
    p.push_back(0);
  }
  return p;
}
Word strip0(Word w) {
  while (!w.empty() && w.back() == 0) w.pop_back();
  return w;
}
Word parent(const Word& w) { return w.empty() || neg_sp(w) ? plus(w, 0) : trim1(w); }
Word child(const Word& w, int j) {
  if (j == 1) return neg_sp(w) ? trim1(w) : plus(w, 1);
  return plus(w, j);
}
bool is_child(const Word& w, int j) {
  if (j == 1) return only(w, 0, 1);
  return !w.empty() && w.back() == j;
}
Word sibling(const Word& w, int j) { return is_child(w, j) ? child(parent(w), 1) : child(parent(w), j); }

Word apply(const std::string& fn, int j, const Word& w) {
  if (fn == "trim1") return trim1(w);
  if (fn == "pref0" || fn == "neg-rt") return pref0(w);
  if (fn == "strip0") return strip0(w);
  if (fn == "parent") return parent(w);
  if (fn == "child") return child(w, j);
  if (fn == "sibling") return sibling(w, j);
  throw std::logic_error(fn);
}

// x1 is below x2 iff x1 is a proper ancestor of x2 under `parent`.
bool tree_less(const Word& x1, const Word& x2, int ell) {
  if (!in_tree(x2, ell)) return false;
  Word a = x2;
  for (int step = 0; step < 2 * static_cast<int>(x1.size() + x2.size()) + 2; ++step) {
    a = parent(a);
    if (a == x1) return true;
  }
  return false;
}

}  // namespace oracle

// Independent evaluator for the primitive vocabulary; regular predicates go
// through std::regex.
struct Primitive {
  int ell;

  Word term(const TermPtr& t, const std::map<std::string, Word>& env) const {
    if (t->kind == Term::Kind::Var) return env.at(t->name);
    if (t->kind == Term::Kind::Const) return {};
    Word a = term(t->args[0], env);
    if (t->name == "app") return oracle::plus(a, std::stoi(t->param.text));
    int j = t->param.empty() ? 0 : std::stoi(t->param.text);
    return oracle::apply(t->name, j, a);
  }

  bool eval(const FormulaPtr& f, const std::map<std::string, Word>& env) const {
    using K = Formula::Kind;
    switch (f->kind) {
      case K::True:
        return true;
      case K::False:
        return false;
      case K::Eq:
        return term(f->terms[0], env) == term(f->terms[1], env);
      case K::Not:
        return !eval(f->body(), env);
      case K::And:
        for (const auto& s : f->subs)
          if (!eval(s, env)) return false;
        return true;
      case K::Or:
        for (const auto& s : f->subs)
          if (eval(s, env)) return true;
        return false;
      case K::Implies:
        return !eval(f->subs[0], env) || eval(f->subs[1], env);
      case K::Atom: {
        if (f->name == "prefix") {
          Word a = term(f->terms[0], env), b = term(f->terms[1], env);
          return a.size() < b.size() && std::equal(a.begin(), a.end(), b.begin());
        }
        if (f->name == "re") return std::regex_match(text(term(f->terms[0], env)), std::regex(f->param.text));
        if (f->name == "is-child") return oracle::is_child(term(f->terms[0], env), std::stoi(f->param.text));
        if (f->name == "neg-sp") return oracle::neg_sp(term(f->terms[0], env));
        if (f->name == "pos") return oracle::pos(term(f->terms[0], env), ell);
        if (f->name == "neg-br") return oracle::neg_br(term(f->terms[0], env), ell);
        if (f->name == "beta") return oracle::tree_less(term(f->terms[0], env), term(f->terms[1], env), ell);
        break;
      }
      default:
        break;
    }
    throw std::logic_error("oracle: unsupported " + to_string(f));
  }
};

const char* kRegexes[] = {"0*", "(0|1)*1", "1+0?", "(01)*", "0(1|0)*0", "()", "1*0*"};

TermPtr random_term(std::mt19937& rng, int ell, const std::vector<std::string>& vars, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 4);
  switch (pick(rng)) {
    case 0:
      return X(vars[rng() % vars.size()]);
    case 1:
      return rng() % 4 == 0 ? str_eps() : X(vars[rng() % vars.size()]);
    case 2:
      return str_app(random_term(rng, ell, vars, depth - 1), static_cast<int>(rng() % (ell + 1)));
    case 3:
      return str_fn(rng() % 2 ? "trim1" : "parent", random_term(rng, ell, vars, depth - 1));
    default:
      return str_fn(rng() % 2 ? "child" : "pref0", random_term(rng, ell, vars, depth - 1), 1);
  }
}

FormulaPtr random_formula(std::mt19937& rng, int ell, const std::vector<std::string>& vars, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 3 : 6);
  switch (pick(rng)) {
    case 0:
      return str_prefix(random_term(rng, ell, vars, 1), random_term(rng, ell, vars, 1));
    case 1:
      return mk_eq(random_term(rng, ell, vars, 1), random_term(rng, ell, vars, 1));
    case 2:
      return str_re(kRegexes[rng() % std::size(kRegexes)], random_term(rng, ell, vars, 1));
    case 3:
      return rng() % 2 ? str_rel("neg-sp", {random_term(rng, ell, vars, 1)})
                       : str_rel("is-child", {random_term(rng, ell, vars, 0)}, 1);
    case 4:
      return mk_not(random_formula(rng, ell, vars, depth - 1));
    case 5:
      return mk_and({random_formula(rng, ell, vars, depth - 1), random_formula(rng, ell, vars, depth - 1)});
    default:
      return mk_or({random_formula(rng, ell, vars, depth - 1), random_formula(rng, ell, vars, depth - 1)});
  }
}

}  // namespace
