#pragma once

#include <set>

#include "disp/rules.hpp"

namespace disp {

enum class TermKind : uint8_t { Var, Lam, App, Pair, Proj1, Proj2, Inj1, Inj2, Case, Unit };

struct SemTerm;
using TermRef = std::shared_ptr<const SemTerm>;

struct SemTerm {
  TermKind kind;
  int var = -1;    // Var id; Lam binder; Case first binder
  int var2 = -1;   // Case second binder
  TermRef a, b, c; // Lam: a=body; App: a b; Pair: a,b; Proj/Inj: a;
                   // Case: a=scrutinee, b,c=branches

  static TermRef mk_var(int v);
  static TermRef lam(int v, TermRef body);
  static TermRef app(TermRef f, TermRef x);
  static TermRef pair(TermRef x, TermRef y);
  static TermRef proj1(TermRef t);
  static TermRef proj2(TermRef t);
  static TermRef inj1(TermRef t);
  static TermRef inj2(TermRef t);
  static TermRef case_of(TermRef scrut, int x, TermRef b1, int y, TermRef b2);
  static TermRef unit();
};

// Normal form under beta, projection and case reduction.
TermRef normalize(const TermRef& t);

// Alpha-invariant canonical rendering (bound variables become de
// Bruijn indices); equal strings iff alpha-equal terms.
std::string alpha_canonical(const TermRef& t);

// Human-readable rendering using the surface syntax.
std::string to_text(const TermRef& t);

std::set<int> free_vars(const TermRef& t);

enum class TyKind : uint8_t { Base, Fun, Prod, Sum, Unit };

struct SemType;
using TypeRef = std::shared_ptr<const SemType>;

struct SemType {
  TyKind kind;
  std::string base;
  TypeRef a, b;
};

TypeRef sem_type_of(const FormulaRef& f);
bool equal(const TypeRef& x, const TypeRef& y);
std::string to_text(const TypeRef& t);

// Infers the type of a well-scoped term; throws ReplayError on a type
// error.
TypeRef type_of(const TermRef& t, const std::map<int, TypeRef>& env);

struct Extraction {
  TermRef term;
  // variable -> formula of the occurrence it names; root occurrences
  // get 0..n-1 in depth-first order
  std::map<int, FormulaRef> var_types;
  int root_var_count = 0;
};

// Curry-Howard reading of a derivation in any of the three systems.
Extraction extract(const DerivRef& d);

// Deduplicated normalized readings of a set of proofs of s.
std::vector<TermRef> readings(const std::vector<DerivRef>& proofs);
std::vector<std::string> reading_keys(const std::vector<DerivRef>& proofs);

}  // namespace disp
