#include "disp/semantics.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

namespace disp {

namespace {
TermRef mk(SemTerm t) { return std::make_shared<const SemTerm>(std::move(t)); }
}  // namespace

TermRef SemTerm::mk_var(int v) { return mk({TermKind::Var, v}); }
TermRef SemTerm::lam(int v, TermRef body) {
  return mk({TermKind::Lam, v, -1, std::move(body)});
}
TermRef SemTerm::app(TermRef f, TermRef x) {
  return mk({TermKind::App, -1, -1, std::move(f), std::move(x)});
}
TermRef SemTerm::pair(TermRef x, TermRef y) {
  return mk({TermKind::Pair, -1, -1, std::move(x), std::move(y)});
}
TermRef SemTerm::proj1(TermRef t) { return mk({TermKind::Proj1, -1, -1, std::move(t)}); }
TermRef SemTerm::proj2(TermRef t) { return mk({TermKind::Proj2, -1, -1, std::move(t)}); }
TermRef SemTerm::inj1(TermRef t) { return mk({TermKind::Inj1, -1, -1, std::move(t)}); }
TermRef SemTerm::inj2(TermRef t) { return mk({TermKind::Inj2, -1, -1, std::move(t)}); }
TermRef SemTerm::case_of(TermRef scrut, int x, TermRef b1, int y, TermRef b2) {
  return mk({TermKind::Case, x, y, std::move(scrut), std::move(b1), std::move(b2)});
}
TermRef SemTerm::unit() { return mk({TermKind::Unit}); }

std::set<int> free_vars(const TermRef& t) {
  std::set<int> out;
  std::function<void(const TermRef&, std::set<int>&)> go = [&](const TermRef& u,
                                                               std::set<int>& bound) {
    switch (u->kind) {
      case TermKind::Var:
        if (!bound.count(u->var)) out.insert(u->var);
        break;
      case TermKind::Lam: {
        std::set<int> b2 = bound;
        b2.insert(u->var);
        go(u->a, b2);
        break;
      }
      case TermKind::Case: {
        go(u->a, bound);
        std::set<int> b1 = bound, b2 = bound;
        b1.insert(u->var);
        b2.insert(u->var2);
        go(u->b, b1);
        go(u->c, b2);
        break;
      }
      case TermKind::App:
      case TermKind::Pair:
        go(u->a, bound);
        go(u->b, bound);
        break;
      case TermKind::Proj1:
      case TermKind::Proj2:
      case TermKind::Inj1:
      case TermKind::Inj2:
        go(u->a, bound);
        break;
      case TermKind::Unit: break;
    }
  };
  std::set<int> bound;
  go(t, bound);
  return out;
}

namespace {

struct Fresh {
  int next = 0;
  int operator()() { return next++; }
};

int max_var(const TermRef& t) {
  int m = t->var > t->var2 ? t->var : t->var2;
  for (const TermRef* s : {&t->a, &t->b, &t->c})
    if (*s) m = std::max(m, max_var(*s));
  return m;
}

TermRef subst(const TermRef& t, int v, const TermRef& repl, Fresh& fresh);

TermRef rename_binder(const TermRef& t, Fresh& fresh, int which) {
  // which: 0 = lam binder, 1 = case binder 1, 2 = case binder 2
  if (t->kind == TermKind::Lam) {
    int nv = fresh();
    auto var = SemTerm::mk_var(nv);
    return SemTerm::lam(nv, subst(t->a, t->var, var, fresh));
  }
  if (which == 1) {
    int nv = fresh();
    return SemTerm::case_of(t->a, nv, subst(t->b, t->var, SemTerm::mk_var(nv), fresh), t->var2,
                            t->c);
  }
  int nv = fresh();
  return SemTerm::case_of(t->a, t->var, t->b, nv, subst(t->c, t->var2, SemTerm::mk_var(nv), fresh));
}

TermRef subst(const TermRef& t, int v, const TermRef& repl, Fresh& fresh) {
  switch (t->kind) {
    case TermKind::Var: return t->var == v ? repl : t;
    case TermKind::Unit: return t;
    case TermKind::Lam: {
      if (t->var == v) return t;
      if (free_vars(repl).count(t->var)) return subst(rename_binder(t, fresh, 0), v, repl, fresh);
      return SemTerm::lam(t->var, subst(t->a, v, repl, fresh));
    }
    case TermKind::Case: {
      TermRef cur = t;
      if (cur->var != v && free_vars(repl).count(cur->var)) cur = rename_binder(cur, fresh, 1);
      if (cur->var2 != v && free_vars(repl).count(cur->var2)) cur = rename_binder(cur, fresh, 2);
      TermRef b1 = cur->var == v ? cur->b : subst(cur->b, v, repl, fresh);
      TermRef b2 = cur->var2 == v ? cur->c : subst(cur->c, v, repl, fresh);
      return SemTerm::case_of(subst(cur->a, v, repl, fresh), cur->var, b1, cur->var2, b2);
    }
    case TermKind::App: return SemTerm::app(subst(t->a, v, repl, fresh), subst(t->b, v, repl, fresh));
    case TermKind::Pair:
      return SemTerm::pair(subst(t->a, v, repl, fresh), subst(t->b, v, repl, fresh));
    case TermKind::Proj1: return SemTerm::proj1(subst(t->a, v, repl, fresh));
    case TermKind::Proj2: return SemTerm::proj2(subst(t->a, v, repl, fresh));
    case TermKind::Inj1: return SemTerm::inj1(subst(t->a, v, repl, fresh));
    case TermKind::Inj2: return SemTerm::inj2(subst(t->a, v, repl, fresh));
  }
  return t;
}

TermRef normalize_rec(const TermRef& t, Fresh& fresh) {
  switch (t->kind) {
    case TermKind::Var:
    case TermKind::Unit: return t;
    case TermKind::Lam: return SemTerm::lam(t->var, normalize_rec(t->a, fresh));
    case TermKind::App: {
      TermRef f = normalize_rec(t->a, fresh);
      TermRef x = normalize_rec(t->b, fresh);
      if (f->kind == TermKind::Lam) return normalize_rec(subst(f->a, f->var, x, fresh), fresh);
      return SemTerm::app(f, x);
    }
    case TermKind::Pair:
      return SemTerm::pair(normalize_rec(t->a, fresh), normalize_rec(t->b, fresh));
    case TermKind::Proj1: {
      TermRef x = normalize_rec(t->a, fresh);
      if (x->kind == TermKind::Pair) return x->a;
      return SemTerm::proj1(x);
    }
    case TermKind::Proj2: {
      TermRef x = normalize_rec(t->a, fresh);
      if (x->kind == TermKind::Pair) return x->b;
      return SemTerm::proj2(x);
    }
    case TermKind::Inj1: return SemTerm::inj1(normalize_rec(t->a, fresh));
    case TermKind::Inj2: return SemTerm::inj2(normalize_rec(t->a, fresh));
    case TermKind::Case: {
      TermRef s = normalize_rec(t->a, fresh);
      if (s->kind == TermKind::Inj1)
        return normalize_rec(subst(t->b, t->var, s->a, fresh), fresh);
      if (s->kind == TermKind::Inj2)
        return normalize_rec(subst(t->c, t->var2, s->a, fresh), fresh);
      return SemTerm::case_of(s, t->var, normalize_rec(t->b, fresh), t->var2,
                              normalize_rec(t->c, fresh));
    }
  }
  return t;
}

}  // namespace

TermRef normalize(const TermRef& t) {
  Fresh fresh{max_var(t) + 1};
  return normalize_rec(t, fresh);
}

namespace {

void alpha_rec(const TermRef& t, std::vector<int>& stack, std::ostream& os) {
  auto lookup = [&](int v) -> std::optional<int> {
    for (int i = static_cast<int>(stack.size()) - 1; i >= 0; --i)
      if (stack[i] == v) return static_cast<int>(stack.size()) - 1 - i;
    return std::nullopt;
  };
  switch (t->kind) {
    case TermKind::Var:
      if (auto ix = lookup(t->var))
        os << '#' << *ix;
      else
        os << 'v' << t->var;
      break;
    case TermKind::Unit: os << "unit"; break;
    case TermKind::Lam:
      os << "(\\.";
      stack.push_back(t->var);
      alpha_rec(t->a, stack, os);
      stack.pop_back();
      os << ')';
      break;
    case TermKind::App:
      os << '(';
      alpha_rec(t->a, stack, os);
      os << ' ';
      alpha_rec(t->b, stack, os);
      os << ')';
      break;
    case TermKind::Pair:
      os << '(';
      alpha_rec(t->a, stack, os);
      os << ", ";
      alpha_rec(t->b, stack, os);
      os << ')';
      break;
    case TermKind::Proj1:
      os << "(p1 ";
      alpha_rec(t->a, stack, os);
      os << ')';
      break;
    case TermKind::Proj2:
      os << "(p2 ";
      alpha_rec(t->a, stack, os);
      os << ')';
      break;
    case TermKind::Inj1:
      os << "(i1 ";
      alpha_rec(t->a, stack, os);
      os << ')';
      break;
    case TermKind::Inj2:
      os << "(i2 ";
      alpha_rec(t->a, stack, os);
      os << ')';
      break;
    case TermKind::Case:
      os << "(case ";
      alpha_rec(t->a, stack, os);
      os << " of \\.";
      stack.push_back(t->var);
      alpha_rec(t->b, stack, os);
      stack.pop_back();
      os << " | \\.";
      stack.push_back(t->var2);
      alpha_rec(t->c, stack, os);
      stack.pop_back();
      os << ')';
      break;
  }
}

}  // namespace

std::string alpha_canonical(const TermRef& t) {
  std::ostringstream os;
  std::vector<int> stack;
  alpha_rec(t, stack, os);
  return os.str();
}

std::string to_text(const TermRef& t) {
  switch (t->kind) {
    case TermKind::Var: return "v" + std::to_string(t->var);
    case TermKind::Unit: return "unit";
    case TermKind::Lam: return "\\v" + std::to_string(t->var) + "." + to_text(t->a);
    case TermKind::App: return "(" + to_text(t->a) + " " + to_text(t->b) + ")";
    case TermKind::Pair: return "(" + to_text(t->a) + ", " + to_text(t->b) + ")";
    case TermKind::Proj1: return "p1 " + to_text(t->a);
    case TermKind::Proj2: return "p2 " + to_text(t->a);
    case TermKind::Inj1: return "i1 " + to_text(t->a);
    case TermKind::Inj2: return "i2 " + to_text(t->a);
    case TermKind::Case:
      return "case " + to_text(t->a) + " of v" + std::to_string(t->var) + "." + to_text(t->b) +
             " | v" + std::to_string(t->var2) + "." + to_text(t->c);
  }
  return "?";
}

namespace {
TypeRef mkty(SemType t) { return std::make_shared<const SemType>(std::move(t)); }
}  // namespace

TypeRef sem_type_of(const FormulaRef& f) {
  switch (f->conn) {
    case Conn::Atom: return mkty({TyKind::Base, f->atom});
    case Conn::Over: return mkty({TyKind::Fun, {}, sem_type_of(f->right), sem_type_of(f->left)});
    case Conn::Under: return mkty({TyKind::Fun, {}, sem_type_of(f->left), sem_type_of(f->right)});
    case Conn::Up: return mkty({TyKind::Fun, {}, sem_type_of(f->right), sem_type_of(f->left)});
    case Conn::Down: return mkty({TyKind::Fun, {}, sem_type_of(f->left), sem_type_of(f->right)});
    case Conn::Prod:
    case Conn::Wrap:
    case Conn::With:
      return mkty({TyKind::Prod, {}, sem_type_of(f->left), sem_type_of(f->right)});
    case Conn::Plus: return mkty({TyKind::Sum, {}, sem_type_of(f->left), sem_type_of(f->right)});
    case Conn::UnitI:
    case Conn::UnitJ: return mkty({TyKind::Unit});
  }
  return mkty({TyKind::Unit});
}

bool equal(const TypeRef& x, const TypeRef& y) {
  if (x.get() == y.get()) return true;
  if (x->kind != y->kind) return false;
  switch (x->kind) {
    case TyKind::Base: return x->base == y->base;
    case TyKind::Unit: return true;
    default: return equal(x->a, y->a) && equal(x->b, y->b);
  }
}

std::string to_text(const TypeRef& t) {
  switch (t->kind) {
    case TyKind::Base: return t->base;
    case TyKind::Unit: return "1";
    case TyKind::Fun: return "(" + to_text(t->a) + " -> " + to_text(t->b) + ")";
    case TyKind::Prod: return "(" + to_text(t->a) + " x " + to_text(t->b) + ")";
    case TyKind::Sum: return "(" + to_text(t->a) + " + " + to_text(t->b) + ")";
  }
  return "?";
}

namespace {

// Bidirectional checking: enough for extraction outputs, where every
// lambda/injection/case sits in a checkable position.
bool check_type(const TermRef& t, const TypeRef& ty, std::map<int, TypeRef>& env);

TypeRef infer_type(const TermRef& t, std::map<int, TypeRef>& env, bool* ok) {
  *ok = true;
  switch (t->kind) {
    case TermKind::Var: {
      auto it = env.find(t->var);
      if (it == env.end()) {
        *ok = false;
        return nullptr;
      }
      return it->second;
    }
    case TermKind::Unit: return mkty({TyKind::Unit});
    case TermKind::App: {
      bool sub;
      TypeRef f = infer_type(t->a, env, &sub);
      if (!sub || f->kind != TyKind::Fun) {
        *ok = false;
        return nullptr;
      }
      if (!check_type(t->b, f->a, env)) {
        *ok = false;
        return nullptr;
      }
      return f->b;
    }
    case TermKind::Pair: {
      bool s1, s2;
      TypeRef a = infer_type(t->a, env, &s1);
      TypeRef b = infer_type(t->b, env, &s2);
      if (!s1 || !s2) {
        *ok = false;
        return nullptr;
      }
      return mkty({TyKind::Prod, {}, a, b});
    }
    case TermKind::Proj1:
    case TermKind::Proj2: {
      bool sub;
      TypeRef p = infer_type(t->a, env, &sub);
      if (!sub || p->kind != TyKind::Prod) {
        *ok = false;
        return nullptr;
      }
      return t->kind == TermKind::Proj1 ? p->a : p->b;
    }
    default:
      *ok = false;
      return nullptr;
  }
}

bool check_type(const TermRef& t, const TypeRef& ty, std::map<int, TypeRef>& env) {
  switch (t->kind) {
    case TermKind::Lam: {
      if (ty->kind != TyKind::Fun) return false;
      auto saved = env.find(t->var) != env.end() ? std::optional<TypeRef>(env[t->var])
                                                 : std::nullopt;
      env[t->var] = ty->a;
      bool ok = check_type(t->a, ty->b, env);
      if (saved)
        env[t->var] = *saved;
      else
        env.erase(t->var);
      return ok;
    }
    case TermKind::Inj1:
      return ty->kind == TyKind::Sum && check_type(t->a, ty->a, env);
    case TermKind::Inj2:
      return ty->kind == TyKind::Sum && check_type(t->a, ty->b, env);
    case TermKind::Case: {
      bool sub;
      TypeRef s = infer_type(t->a, env, &sub);
      if (!sub || s->kind != TyKind::Sum) return false;
      auto with_binding = [&](int v, const TypeRef& vt, const TermRef& body) {
        auto saved = env.find(v) != env.end() ? std::optional<TypeRef>(env[v]) : std::nullopt;
        env[v] = vt;
        bool ok = check_type(body, ty, env);
        if (saved)
          env[v] = *saved;
        else
          env.erase(v);
        return ok;
      };
      return with_binding(t->var, s->a, t->b) && with_binding(t->var2, s->b, t->c);
    }
    case TermKind::Unit: return ty->kind == TyKind::Unit;
    default: {
      bool sub;
      TypeRef got = infer_type(t, env, &sub);
      return sub && equal(got, ty);
    }
  }
}

}  // namespace

TypeRef type_of(const TermRef& t, const std::map<int, TypeRef>& env) {
  std::map<int, TypeRef> e = env;
  bool ok;
  TypeRef ty = infer_type(t, e, &ok);
  if (!ok) throw ReplayError("term is not typable by inference: " + to_text(t));
  return ty;
}

namespace {

// Extraction walks the derivation top-down, assigning one variable per
// antecedent occurrence. Items shared by pointer between a conclusion
// and its premises keep their variable; rebuilt spine nodes are paired
// structurally; decomposed occurrences get the fresh variables the rule
// labels mention.
struct Extractor {
  std::unordered_map<const Item*, int> var_of;
  std::map<int, FormulaRef> var_types;
  int fresh = 0;

  int var(const ItemRef& it) {
    auto found = var_of.find(it.get());
    if (found != var_of.end()) return found->second;
    int v = fresh++;
    var_of.emplace(it.get(), v);
    var_types.emplace(v, it->type);
    return v;
  }

  void link(const ItemRef& from, const ItemRef& to) {
    // give `to` the variable of `from`
    var_of[to.get()] = var(from);
  }

  void assign_all(const Configuration& c) {
    for (const auto& o : all_occurrences(c)) var(o.item);
  }

  // Pair gamma's occurrences with their images in folded = fold(gamma, fillers).
  void pair_fold(const Configuration& folded, const Configuration& gamma,
                 const std::vector<Configuration>& fillers, size_t& next) {
    size_t fi = 0;
    for (const auto& g : gamma.items) {
      if (g->separator) {
        fi += fillers[next++].items.size();
        continue;
      }
      const auto& f = folded.items[fi++];
      if (g.get() != f.get()) {
        link(f, g);
        size_t sub = next;
        for (size_t j = 0; j < g->args.size(); ++j) pair_fold(f->args[j], g->args[j], fillers, sub);
        next = sub;
      } else {
        for (const auto& a : g->args) next += static_cast<size_t>(a.sort());
      }
    }
  }

  // Pair the rebuilt ancestors of an edit at `down` between a
  // conclusion and the premise it was derived from.
  void pair_spine(const Configuration& concl, const Configuration& premise, const Descents& down) {
    const Configuration* ca = &concl;
    const Configuration* pa = &premise;
    for (auto [i, a] : down) {
      const auto& ci = ca->items[i];
      const auto& pi = pa->items[i];
      if (ci.get() != pi.get()) link(ci, pi);
      ca = &ci->args[a];
      pa = &pi->args[a];
    }
  }

  // Positionally pair two equally-shaped configurations, except that
  // the items at `skip` stay distinct (their arguments still pair).
  void pair_config(const Configuration& a, const Configuration& b, const Path* skip,
                   Descents& down) {
    for (int i = 0; i < static_cast<int>(a.items.size()); ++i) {
      const auto& ia = a.items[i];
      const auto& ib = b.items[i];
      if (ia.get() == ib.get()) continue;
      if (ia->separator || ib->separator) continue;
      bool skipped = skip && skip->down == down && skip->index == i;
      if (!skipped) link(ia, ib);
      for (int j = 0; j < static_cast<int>(std::min(ia->args.size(), ib->args.size())); ++j) {
        down.emplace_back(i, j);
        pair_config(ia->args[j], ib->args[j], skip, down);
        down.pop_back();
      }
    }
  }

  void pair_config(const Configuration& a, const Configuration& b, const Path* skip) {
    Descents d;
    pair_config(a, b, skip, d);
  }

  TermRef go(const DerivRef& d);
};

TermRef subst_free(const TermRef& t, int v, const TermRef& repl) {
  Fresh fresh{std::max(max_var(t), repl ? max_var(repl) : -1) + 1};
  return subst(t, v, repl, fresh);
}

TermRef Extractor::go(const DerivRef& d) {
  const Sequent& concl = d->conclusion;
  switch (d->rule) {
    case RuleName::Id:
      return SemTerm::mk_var(var(concl.antecedent.items[0]));
    case RuleName::IR:
    case RuleName::JR:
      return SemTerm::unit();
    case RuleName::Foc:
      return go(d->premises[0]);
    default: break;
  }
  const Path* at = d->inst.path ? &*d->inst.path : nullptr;
  switch (d->rule) {
    case RuleName::OverL:
    case RuleName::UnderL:
    case RuleName::UpL:
    case RuleName::DownL: {
      const Sequent& minor = d->premises[0]->conclusion;
      const Sequent& major = d->premises[1]->conclusion;
      const ItemRef& citem = item_at(major.antecedent, *at);
      pair_spine(concl.antecedent, major.antecedent, at->down);
      // pair the folded image of the minor antecedent
      int keep = d->principal->type->sort;
      if (d->rule == RuleName::OverL) {
        std::vector<Configuration> tail(citem->args.begin() + keep, citem->args.end());
        Configuration folded = fold(minor.antecedent, tail);
        Region reg{at->down, at->index + 1, at->index + 1 + static_cast<int>(folded.items.size())};
        size_t next = 0;
        pair_fold(Configuration{run_at(concl.antecedent, reg)}, minor.antecedent, tail, next);
      } else if (d->rule == RuleName::UnderL) {
        int ga = static_cast<int>(citem->args.size()) - keep;
        std::vector<Configuration> head(citem->args.begin(), citem->args.begin() + ga);
        Configuration folded = fold(minor.antecedent, head);
        Region reg{at->down, at->index, at->index + static_cast<int>(folded.items.size())};
        size_t next = 0;
        pair_fold(Configuration{run_at(concl.antecedent, reg)}, minor.antecedent, head, next);
      } else if (d->rule == RuleName::UpL) {
        int k = d->inst.k;
        int sb = minor.succedent->sort;
        std::vector<Configuration> mid(citem->args.begin() + (k - 1),
                                       citem->args.begin() + (k - 1) + sb);
        auto cpath = find_item(concl.antecedent, d->principal.get());
        const ItemRef& pr = item_at(concl.antecedent, *cpath);
        size_t next = 0;
        pair_fold(pr->args[k - 1], minor.antecedent, mid, next);
      } else {  // DownL
        int k = d->inst.k;
        int sp = d->principal->type->sort;
        std::vector<Configuration> fillers(citem->args.begin(), citem->args.begin() + (k - 1));
        fillers.push_back(Configuration{{d->principal}});
        fillers.insert(fillers.end(), citem->args.begin() + (k - 1) + sp, citem->args.end());
        Configuration folded = fold(minor.antecedent, fillers);
        Region reg{at->down, at->index, at->index + static_cast<int>(folded.items.size())};
        size_t next = 0;
        pair_fold(Configuration{run_at(concl.antecedent, reg)}, minor.antecedent, fillers, next);
      }
      int z = var(citem);
      auto cpath = find_item(concl.antecedent, d->principal.get());
      int x = var(item_at(concl.antecedent, *cpath));
      TermRef psi = go(d->premises[0]);
      TermRef omega = go(d->premises[1]);
      return subst_free(omega, z, SemTerm::app(SemTerm::mk_var(x), psi));
    }
    case RuleName::ProdL:
    case RuleName::WrapL: {
      const Sequent& p = d->premises[0]->conclusion;
      pair_spine(concl.antecedent, p.antecedent, at->down);
      int z = var(item_at(concl.antecedent, *at));
      const ItemRef& ia = item_at(p.antecedent, *at);
      ItemRef ib;
      if (d->rule == RuleName::ProdL) {
        Path pb = *at;
        pb.index += 1;
        ib = item_at(p.antecedent, pb);
      } else {
        ib = ia->args[d->inst.k - 1].items[0];
      }
      int x = var(ia), y = var(ib);
      TermRef body = go(d->premises[0]);
      body = subst_free(body, x, SemTerm::proj1(SemTerm::mk_var(z)));
      body = subst_free(body, y, SemTerm::proj2(SemTerm::mk_var(z)));
      return body;
    }
    case RuleName::IL:
    case RuleName::JL: {
      pair_spine(concl.antecedent, d->premises[0]->conclusion.antecedent, d->inst.region->down);
      return go(d->premises[0]);
    }
    case RuleName::WithL1:
    case RuleName::WithL2: {
      const Sequent& p = d->premises[0]->conclusion;
      pair_spine(concl.antecedent, p.antecedent, at->down);
      int z = var(item_at(concl.antecedent, *at));
      int x = var(item_at(p.antecedent, *at));
      TermRef body = go(d->premises[0]);
      TermRef proj = d->rule == RuleName::WithL1 ? SemTerm::proj1(SemTerm::mk_var(z))
                                                 : SemTerm::proj2(SemTerm::mk_var(z));
      return subst_free(body, x, proj);
    }
    case RuleName::PlusL: {
      const Sequent& p1 = d->premises[0]->conclusion;
      const Sequent& p2 = d->premises[1]->conclusion;
      pair_config(concl.antecedent, p1.antecedent, &*d->inst.path);
      pair_config(concl.antecedent, p2.antecedent, &*d->inst.path);
      int z = var(item_at(concl.antecedent, *at));
      int x = var(item_at(p1.antecedent, *at));
      int y = var(item_at(p2.antecedent, *at));
      TermRef b1 = go(d->premises[0]);
      TermRef b2 = go(d->premises[1]);
      return SemTerm::case_of(SemTerm::mk_var(z), x, b1, y, b2);
    }
    case RuleName::OverR:
    case RuleName::UnderR: {
      const Sequent& p = d->premises[0]->conclusion;
      int idx = d->rule == RuleName::OverR ? static_cast<int>(p.antecedent.items.size()) - 1 : 0;
      int v = var(p.antecedent.items[idx]);
      return SemTerm::lam(v, go(d->premises[0]));
    }
    case RuleName::UpR: {
      const Sequent& p = d->premises[0]->conclusion;
      int v = var(item_at(p.antecedent, *at));
      return SemTerm::lam(v, go(d->premises[0]));
    }
    case RuleName::DownR: {
      const Sequent& p = d->premises[0]->conclusion;
      int v = var(p.antecedent.items[0]);
      return SemTerm::lam(v, go(d->premises[0]));
    }
    case RuleName::ProdR:
    case RuleName::WrapR: {
      // pair the wrap image of the first antecedent
      if (d->rule == RuleName::WrapR) {
        const Sequent& p0 = d->premises[0]->conclusion;
        const Sequent& p1 = d->premises[1]->conclusion;
        int s = p0.antecedent.sort();
        std::vector<Configuration> fillers(s, Configuration{{Item::sep()}});
        fillers[d->inst.k - 1] = p1.antecedent;
        size_t next = 0;
        pair_fold(concl.antecedent, p0.antecedent, fillers, next);
      }
      TermRef a = go(d->premises[0]);
      TermRef b = go(d->premises[1]);
      return SemTerm::pair(a, b);
    }
    case RuleName::WithR: {
      pair_config(concl.antecedent, d->premises[1]->conclusion.antecedent, nullptr);
      return SemTerm::pair(go(d->premises[0]), go(d->premises[1]));
    }
    case RuleName::PlusR1: return SemTerm::inj1(go(d->premises[0]));
    case RuleName::PlusR2: return SemTerm::inj2(go(d->premises[0]));
    case RuleName::PCut1:
    case RuleName::PCut2:
    case RuleName::NCut1:
    case RuleName::NCut2: {
      const Sequent& l = d->premises[0]->conclusion;
      const Sequent& rt = d->premises[1]->conclusion;
      const ItemRef& citem = item_at(rt.antecedent, *at);
      pair_spine(concl.antecedent, rt.antecedent, at->down);
      Configuration folded = fold(l.antecedent, citem->args);
      Region reg{at->down, at->index, at->index + static_cast<int>(folded.items.size())};
      size_t next = 0;
      pair_fold(Configuration{run_at(concl.antecedent, reg)}, l.antecedent, citem->args, next);
      int z = var(citem);
      TermRef phi = go(d->premises[0]);
      TermRef omega = go(d->premises[1]);
      return subst_free(omega, z, phi);
    }
    default: break;
  }
  throw ReplayError(std::string("extraction: unhandled rule ") + rule_name(d->rule));
}

}  // namespace

Extraction extract(const DerivRef& d) {
  Extractor ex;
  ex.assign_all(d->conclusion.antecedent);
  Extraction out;
  out.root_var_count = ex.fresh;
  out.term = ex.go(d);
  out.var_types = std::move(ex.var_types);
  return out;
}

std::vector<TermRef> readings(const std::vector<DerivRef>& proofs) {
  std::vector<TermRef> out;
  std::set<std::string> seen;
  for (const auto& p : proofs) {
    TermRef t = normalize(extract(p).term);
    std::string key = alpha_canonical(t);
    if (seen.insert(key).second) out.push_back(t);
  }
  return out;
}

std::vector<std::string> reading_keys(const std::vector<DerivRef>& proofs) {
  std::set<std::string> seen;
  for (const auto& p : proofs) seen.insert(alpha_canonical(normalize(extract(p).term)));
  return std::vector<std::string>(seen.begin(), seen.end());
}

}  // namespace disp
