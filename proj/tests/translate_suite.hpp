#pragma once

#include <string>

#include "symmod/parse.hpp"

namespace {

using namespace symmod;

const char* kTwoSortBase = "(sort s inf) (sort v) (rel lt (s s)) (order lt) ";

FolDocument two_sort_doc(const std::string& text) { return parse_fol(std::string(kTwoSortBase) + text); }

struct Item {
  const char* name;
  const char* text;
  bool sat;
};

const Item kTranslationSuite[] = {
    {"specialized constants",
     "(rel P (s)) (const v1 v) (const v2 v) (fun msg (v) s)"
     "(lt (msg v1) (msg v2)) (forall (x s) (=> (lt x (msg v1)) (P x)))",
     true},
    {"equal arguments collapse", "(const v1 v) (const v2 v) (fun msg (v) s) (= v1 v2) (lt (msg v1) (msg v2))"
     "(forall (x s) (not (lt x x)))",
     false},
    {"nested ground terms", "(fun f (s) s) (fun g (s) s) (const c s) (lt (f (g c)) c) (not (= (g c) c))", true},
    {"skolem over a value", "(rel R (s v)) (const a v) (forall (y v) (exists (x s) (and (R x y) (lt x x))))", true},
    {"pure atoms", "(rel P (s)) (rel Q (v)) (const a v) (const b v) (Q a) (not (Q b)) (forall (x s) (or (P x) (Q b)))",
     true},
    {"pure atoms clash", "(rel Q (v)) (const a v) (Q a) (forall (y v) (not (Q y)))", false},
    {"pure functions",
     "(sort u) (rel K (s u)) (fun h (v) u) (const a v) (const b v) (not (= (h a) (h b)))"
     "(exists (z s) (and (K z (h a)) (not (K z (h b)))))",
     true},
    {"universal over values",
     "(rel T (s v)) (fun m (v) s) (const a v) (const b v)"
     "(forall (y v) (forall (x s) (=> (lt x (m y)) (T x y)))) (or (= a b) (lt (m a) (m b)))",
     true},
    {"mixed function of the variable",
     "(fun g (s v) s) (const a v) (const b v) (forall (x s) (and (lt (g x a) x) (not (= (g x b) x))))", true},
    {"existential value witness",
     "(rel P (s)) (rel R (s v)) (exists (y v) (forall (x s) (or (P x) (R x y)))) (forall (x s) (not (P x)))", true},
};

}  // namespace
