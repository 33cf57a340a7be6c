#include "disp/config.hpp"

#include <algorithm>
#include <sstream>

#include "lexer.hpp"

namespace disp {

int Configuration::sort() const {
  int s = 0;
  for (const auto& it : items) {
    if (it->separator) {
      ++s;
    } else {
      for (const auto& a : it->args) s += a.sort();
    }
  }
  return s;
}

ItemRef Item::sep() {
  static const ItemRef s = std::make_shared<const Item>(Item{true, nullptr, {}});
  return s;
}

ItemRef Item::occ(FormulaRef f, std::vector<Configuration> args) {
  if (static_cast<int>(args.size()) != f->sort)
    throw ArityError("occurrence of " + to_text(f) + " needs " + std::to_string(f->sort) +
                     " arguments, got " + std::to_string(args.size()));
  return std::make_shared<const Item>(Item{false, std::move(f), std::move(args)});
}

Configuration figure(const FormulaRef& f) {
  std::vector<Configuration> args(f->sort, Configuration{{Item::sep()}});
  return Configuration{{Item::occ(f, std::move(args))}};
}

Configuration config_of(std::initializer_list<ItemRef> items) {
  return Configuration{std::vector<ItemRef>(items)};
}

namespace {

void fold_seq(const std::vector<ItemRef>& in, const std::vector<Configuration>& fillers,
              size_t& next, std::vector<ItemRef>& out) {
  for (const auto& it : in) {
    if (it->separator) {
      if (next >= fillers.size()) throw ArityError("fold: too few fillers");
      const auto& f = fillers[next++];
      out.insert(out.end(), f.items.begin(), f.items.end());
    } else if (it->args.empty()) {
      out.push_back(it);
    } else {
      bool touched = false;
      std::vector<Configuration> args;
      args.reserve(it->args.size());
      for (const auto& a : it->args) {
        std::vector<ItemRef> sub;
        size_t before = next;
        fold_seq(a.items, fillers, next, sub);
        args.push_back(Configuration{std::move(sub)});
        if (next != before) touched = true;
      }
      out.push_back(touched ? Item::occ(it->type, std::move(args)) : it);
    }
  }
}

}  // namespace

Configuration fold(const Configuration& g, const std::vector<Configuration>& fillers) {
  if (g.sort() != static_cast<int>(fillers.size()))
    throw ArityError("fold: configuration of sort " + std::to_string(g.sort()) + " given " +
                     std::to_string(fillers.size()) + " fillers");
  std::vector<ItemRef> out;
  size_t next = 0;
  fold_seq(g.items, fillers, next, out);
  return Configuration{std::move(out)};
}

Configuration wrap_at(const Configuration& d, int k, const Configuration& g) {
  int s = d.sort();
  if (k < 1 || k > s)
    throw ArityError("wrap: k=" + std::to_string(k) + " out of range for sort " +
                     std::to_string(s));
  std::vector<Configuration> fillers(s, Configuration{{Item::sep()}});
  fillers[k - 1] = g;
  return fold(d, fillers);
}

bool equal(const ItemRef& a, const ItemRef& b) {
  if (a.get() == b.get()) return true;
  if (a->separator != b->separator) return false;
  if (a->separator) return true;
  if (!equal(a->type, b->type)) return false;
  if (a->args.size() != b->args.size()) return false;
  for (size_t i = 0; i < a->args.size(); ++i)
    if (!equal(a->args[i], b->args[i])) return false;
  return true;
}

bool equal(const Configuration& a, const Configuration& b) {
  if (a.items.size() != b.items.size()) return false;
  for (size_t i = 0; i < a.items.size(); ++i)
    if (!equal(a.items[i], b.items[i])) return false;
  return true;
}

size_t hash_of(const Configuration& c) {
  size_t h = 0xcbf29ce484222325ull;
  auto mix = [&](size_t v) { h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2); };
  for (const auto& it : c.items) {
    if (it->separator) {
      mix(1);
    } else {
      mix(hash_of(it->type));
      for (const auto& a : it->args) mix(hash_of(a));
    }
  }
  return h;
}

namespace {

const Configuration& seq_at(const Configuration& c, const Descents& down) {
  const Configuration* cur = &c;
  for (auto [i, a] : down) {
    if (i < 0 || i >= static_cast<int>(cur->items.size()))
      throw ArityError("path: item index out of range");
    const auto& it = cur->items[i];
    if (it->separator || a < 0 || a >= static_cast<int>(it->args.size()))
      throw ArityError("path: argument index out of range");
    cur = &it->args[a];
  }
  return *cur;
}

Configuration rebuild(const Configuration& c, const Descents& down, size_t d,
                      const std::function<std::vector<ItemRef>(const std::vector<ItemRef>&)>& fn) {
  if (d == down.size()) return Configuration{fn(c.items)};
  auto [i, a] = down[d];
  const auto& it = c.items[i];
  std::vector<Configuration> args = it->args;
  args[a] = rebuild(args[a], down, d + 1, fn);
  std::vector<ItemRef> items = c.items;
  items[i] = Item::occ(it->type, std::move(args));
  return Configuration{std::move(items)};
}

}  // namespace

const ItemRef& item_at(const Configuration& c, const Path& p) {
  const auto& seq = seq_at(c, p.down);
  if (p.index < 0 || p.index >= static_cast<int>(seq.items.size()))
    throw ArityError("path: final index out of range");
  return seq.items[p.index];
}

std::vector<ItemRef> run_at(const Configuration& c, const Region& r) {
  const auto& seq = seq_at(c, r.down);
  if (r.begin < 0 || r.end < r.begin || r.end > static_cast<int>(seq.items.size()))
    throw ArityError("region out of range");
  return std::vector<ItemRef>(seq.items.begin() + r.begin, seq.items.begin() + r.end);
}

Configuration splice_item(const Configuration& c, const Path& p, const std::vector<ItemRef>& run) {
  return splice_region(c, Region{p.down, p.index, p.index + 1}, run);
}

Configuration splice_region(const Configuration& c, const Region& r,
                            const std::vector<ItemRef>& run) {
  return rebuild(c, r.down, 0, [&](const std::vector<ItemRef>& items) {
    if (r.begin < 0 || r.end < r.begin || r.end > static_cast<int>(items.size()))
      throw ArityError("region out of range");
    std::vector<ItemRef> out;
    out.reserve(items.size() - (r.end - r.begin) + run.size());
    out.insert(out.end(), items.begin(), items.begin() + r.begin);
    out.insert(out.end(), run.begin(), run.end());
    out.insert(out.end(), items.begin() + r.end, items.end());
    return out;
  });
}

namespace {

void scan(const Configuration& c, Descents& down,
          const std::function<void(const Path&, const ItemRef&)>& visit) {
  for (int i = 0; i < static_cast<int>(c.items.size()); ++i) {
    const auto& it = c.items[i];
    visit(Path{down, i}, it);
    if (!it->separator) {
      for (int a = 0; a < static_cast<int>(it->args.size()); ++a) {
        down.emplace_back(i, a);
        scan(it->args[a], down, visit);
        down.pop_back();
      }
    }
  }
}

}  // namespace

std::vector<Occurrence> occurrences(const Configuration& c,
                                    const std::function<bool(const FormulaRef&)>& pred) {
  std::vector<Occurrence> out;
  Descents d;
  scan(c, d, [&](const Path& p, const ItemRef& it) {
    if (!it->separator && pred(it->type)) out.push_back(Occurrence{p, it});
  });
  return out;
}

std::vector<Occurrence> all_occurrences(const Configuration& c) {
  return occurrences(c, [](const FormulaRef&) { return true; });
}

std::vector<Path> separator_paths(const Configuration& c) {
  std::vector<Path> out;
  Descents d;
  scan(c, d, [&](const Path& p, const ItemRef& it) {
    if (it->separator) out.push_back(p);
  });
  return out;
}

namespace {

void regions_rec(const Configuration& c, Descents& down, std::vector<Region>& out) {
  int n = static_cast<int>(c.items.size());
  for (int b = 0; b <= n; ++b)
    for (int e = b; e <= n; ++e) out.push_back(Region{down, b, e});
  for (int i = 0; i < n; ++i) {
    const auto& it = c.items[i];
    if (it->separator) continue;
    for (int a = 0; a < static_cast<int>(it->args.size()); ++a) {
      down.emplace_back(i, a);
      regions_rec(it->args[a], down, out);
      down.pop_back();
    }
  }
}

}  // namespace

std::vector<Region> all_regions(const Configuration& c) {
  std::vector<Region> out;
  Descents d;
  regions_rec(c, d, out);
  return out;
}

std::optional<Path> find_item(const Configuration& c, const Item* ptr) {
  std::optional<Path> found;
  Descents d;
  scan(c, d, [&](const Path& p, const ItemRef& it) {
    if (!found && it.get() == ptr) found = p;
  });
  return found;
}

namespace {

// Enumerates cut assignments for one sequence. Each result carries the
// rebuilt item sequence and the fillers cut from it, in order. Every
// separator of the input must land inside some cut region.
struct CutState {
  std::vector<ItemRef> items;
  std::vector<Configuration> fillers;
};

void cuts_of_seq(const std::vector<ItemRef>& seq, size_t i, int budget, CutState cur,
                 std::vector<CutState>& out);

// All ways to distribute cuts inside the arguments of an occurrence.
void cuts_of_item(const ItemRef& it, int budget,
                  std::vector<std::pair<ItemRef, std::vector<Configuration>>>& out) {
  if (it->args.empty()) {
    out.emplace_back(it, std::vector<Configuration>{});
    return;
  }
  struct Partial {
    std::vector<Configuration> args;
    std::vector<Configuration> fillers;
  };
  std::vector<Partial> acc{{{}, {}}};
  for (const auto& arg : it->args) {
    std::vector<Partial> next;
    for (auto& p : acc) {
      std::vector<CutState> sub;
      cuts_of_seq(arg.items, 0, budget - static_cast<int>(p.fillers.size()), CutState{}, sub);
      for (auto& s : sub) {
        Partial q = p;
        q.args.push_back(Configuration{s.items});
        q.fillers.insert(q.fillers.end(), s.fillers.begin(), s.fillers.end());
        next.push_back(std::move(q));
      }
    }
    acc = std::move(next);
  }
  for (auto& p : acc) {
    bool same = p.fillers.empty();
    out.emplace_back(same ? it : Item::occ(it->type, std::move(p.args)), std::move(p.fillers));
  }
}

void cuts_of_seq(const std::vector<ItemRef>& seq, size_t i, int budget, CutState cur,
                 std::vector<CutState>& out) {
  if (i == seq.size()) {
    // a trailing empty region may still be cut here
    out.push_back(cur);
    if (static_cast<int>(cur.fillers.size()) < budget) {
      CutState ext = std::move(cur);
      ext.items.push_back(Item::sep());
      ext.fillers.push_back(Configuration{});
      cuts_of_seq(seq, i, budget, std::move(ext), out);
    }
    return;
  }
  // Option: start a region at i covering items [i, j).
  if (static_cast<int>(cur.fillers.size()) < budget) {
    for (size_t j = i; j <= seq.size(); ++j) {
      CutState ext = cur;
      ext.items.push_back(Item::sep());
      ext.fillers.push_back(Configuration{std::vector<ItemRef>(seq.begin() + i, seq.begin() + j)});
      cuts_of_seq(seq, j, budget, std::move(ext), out);
    }
  }
  // Option: keep item i (separators must be covered by a region).
  const auto& it = seq[i];
  if (it->separator) return;
  if (it->args.empty()) {
    cur.items.push_back(it);
    cuts_of_seq(seq, i + 1, budget, std::move(cur), out);
    return;
  }
  std::vector<std::pair<ItemRef, std::vector<Configuration>>> inner;
  cuts_of_item(it, budget - static_cast<int>(cur.fillers.size()), inner);
  for (auto& [item, fillers] : inner) {
    CutState ext = cur;
    ext.items.push_back(item);
    ext.fillers.insert(ext.fillers.end(), fillers.begin(), fillers.end());
    cuts_of_seq(seq, i + 1, budget, std::move(ext), out);
  }
}

// Recomputes the regions of an unfolding from gamma: the m separators
// of gamma, in depth-first order, mark where the fillers went. Indices
// are translated back into the coordinates of the folded configuration
// (earlier cuts in the same sequence shift everything after them).
std::vector<Region> regions_of_gamma(const Configuration& gamma,
                                     const std::vector<Configuration>& fillers) {
  std::vector<Path> seps = separator_paths(gamma);
  std::vector<Region> regions;
  regions.reserve(seps.size());
  std::map<Descents, int> shift;  // keyed by gamma-coordinate sequence address
  auto translate = [&](const Descents& down) {
    Descents out;
    Descents prefix;
    for (auto [i, a] : down) {
      int delta = shift.count(prefix) ? shift[prefix] : 0;
      out.emplace_back(i + delta, a);
      prefix.emplace_back(i, a);
    }
    return out;
  };
  for (size_t j = 0; j < seps.size(); ++j) {
    const auto& p = seps[j];
    Descents tdown = translate(p.down);
    int delta = shift.count(p.down) ? shift[p.down] : 0;
    int b = p.index + delta;
    int len = static_cast<int>(fillers[j].items.size());
    regions.push_back(Region{tdown, b, b + len});
    shift[p.down] = delta + len - 1;
  }
  return regions;
}

}  // namespace

std::vector<Unfolding> unfoldings(const Configuration& g, int m) {
  std::vector<CutState> states;
  cuts_of_seq(g.items, 0, m, CutState{}, states);
  std::vector<Unfolding> out;
  for (auto& s : states) {
    if (static_cast<int>(s.fillers.size()) != m) continue;
    Configuration gamma{std::move(s.items)};
    out.push_back(Unfolding{gamma, s.fillers, regions_of_gamma(gamma, s.fillers)});
  }
  return out;
}

Sequent make_sequent(Configuration ant, FormulaRef succ, Focus focus) {
  if (ant.sort() != succ->sort)
    throw SortError("sequent not well-sorted: antecedent sort " + std::to_string(ant.sort()) +
                    ", succedent " + to_text(succ) + " of sort " + std::to_string(succ->sort));
  if (focus.kind == FocusKind::Antecedent) {
    const auto& it = item_at(ant, focus.path);
    if (it->separator) throw SortError("focus path addresses a separator");
  }
  return Sequent{std::move(ant), std::move(succ), std::move(focus)};
}

bool equal(const Sequent& a, const Sequent& b) {
  return a.focus == b.focus && equal(a.succedent, b.succedent) && equal(a.antecedent, b.antecedent);
}

size_t hash_of(const Sequent& s) {
  size_t h = hash_of(s.antecedent);
  h ^= hash_of(s.succedent) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  h ^= static_cast<size_t>(s.focus.kind) + (h << 3);
  if (s.focus.kind == FocusKind::Antecedent) {
    for (auto [i, a] : s.focus.path.down) h ^= (i * 131 + a) + (h << 5);
    h ^= static_cast<size_t>(s.focus.path.index) + (h << 7);
  }
  return h;
}

namespace {

int count_formula_connectives(const Configuration& c) {
  int n = 0;
  for (const auto& it : c.items) {
    if (it->separator) continue;
    n += it->type->size;
    for (const auto& a : it->args) n += count_formula_connectives(a);
  }
  return n;
}

}  // namespace

int connective_count(const Sequent& s) {
  return count_formula_connectives(s.antecedent) + s.succedent->size;
}

namespace {

void print_config(const Configuration& c, std::ostream& os, const Path* focus, Descents& down);

void print_item(const Configuration& c, int i, std::ostream& os, const Path* focus,
                Descents& down) {
  const auto& it = c.items[i];
  bool boxed = focus && focus->down == down && focus->index == i;
  if (boxed) os << "<<";
  if (it->separator) {
    os << '1';
  } else {
    os << to_text(it->type);
    if (!it->args.empty()) {
      os << '{';
      for (size_t a = 0; a < it->args.size(); ++a) {
        if (a) os << " : ";
        down.emplace_back(i, static_cast<int>(a));
        print_config(it->args[a], os, focus, down);
        down.pop_back();
      }
      os << '}';
    }
  }
  if (boxed) os << ">>";
}

void print_config(const Configuration& c, std::ostream& os, const Path* focus, Descents& down) {
  if (c.items.empty()) {
    os << "()";
    return;
  }
  for (int i = 0; i < static_cast<int>(c.items.size()); ++i) {
    if (i) os << ", ";
    print_item(c, i, os, focus, down);
  }
}

}  // namespace

std::string to_text(const Configuration& c) {
  std::ostringstream os;
  Descents d;
  if (!c.items.empty()) print_config(c, os, nullptr, d);
  return os.str();
}

std::string to_text(const Sequent& s) {
  std::ostringstream os;
  Descents d;
  if (!s.antecedent.items.empty()) {
    const Path* fp = s.focus.kind == FocusKind::Antecedent ? &s.focus.path : nullptr;
    print_config(s.antecedent, os, fp, d);
    os << ' ';
  }
  os << "=> ";
  if (s.focus.kind == FocusKind::Succedent)
    os << "<<" << to_text(s.succedent) << ">>";
  else
    os << to_text(s.succedent);
  return os.str();
}

namespace {

using detail::Tok;
using detail::TokenStream;

FormulaRef parse_formula_tokens(TokenStream& ts, const AtomTable& atoms);

struct ConfigParser {
  const AtomTable& atoms;
  std::optional<Path> focus;

  Configuration parse(TokenStream& ts, Descents& down, bool top) {
    Configuration c;
    // () means the empty configuration when it is the whole sequence
    if (ts.at(Tok::LParen) && ts.peek2().kind == Tok::RParen) {
      ts.next();
      ts.next();
      return c;
    }
    if (at_config_end(ts, top)) return c;
    while (true) {
      parse_item(ts, c, down);
      if (!ts.accept(Tok::Comma)) break;
    }
    return c;
  }

  bool at_config_end(TokenStream& ts, bool top) {
    return ts.at(Tok::End) || ts.at(Tok::Arrow) || (!top && (ts.at(Tok::RBrace) || ts.at(Tok::Colon)));
  }

  void parse_item(TokenStream& ts, Configuration& c, Descents& down) {
    bool boxed = ts.accept(Tok::FocOpen);
    int index = static_cast<int>(c.items.size());
    if (ts.accept(Tok::Sep)) {
      if (boxed) throw ParseError("a separator cannot be focused", ts.peek().pos);
      c.items.push_back(Item::sep());
      return;
    }
    size_t at = ts.peek().pos;
    FormulaRef f = parse_formula_tokens(ts, atoms);
    std::vector<Configuration> args;
    if (ts.accept(Tok::LBrace)) {
      while (true) {
        down.emplace_back(index, static_cast<int>(args.size()));
        args.push_back(parse(ts, down, false));
        down.pop_back();
        if (!ts.accept(Tok::Colon)) break;
      }
      ts.expect(Tok::RBrace, "}");
    } else if (f->sort > 0) {
      throw ParseError("type " + to_text(f) + " of sort " + std::to_string(f->sort) +
                           " needs brace arguments",
                       at);
    }
    try {
      c.items.push_back(Item::occ(f, std::move(args)));
    } catch (const ArityError& e) {
      throw ParseError(e.what(), at);
    }
    if (boxed) {
      if (focus) throw ParseError("more than one focused item", at);
      focus = Path{down, index};
      ts.expect(Tok::FocClose, ">>");
    }
  }
};

// Formula sub-parser over an existing token stream (mirrors
// parse_formula but stops at configuration-level tokens).
FormulaRef parse_formula_primary(TokenStream& ts, const AtomTable& atoms);

int op_level_cfg(Tok k) {
  switch (k) {
    case Tok::Amp:
    case Tok::PlusSym: return 0;
    case Tok::Slash:
    case Tok::Backslash:
    case Tok::Up:
    case Tok::Down: return 1;
    case Tok::Star:
    case Tok::Odot: return 2;
    default: return -1;
  }
}

FormulaRef parse_formula_level(TokenStream& ts, int level, const AtomTable& atoms) {
  if (level == 3) return parse_formula_primary(ts, atoms);
  FormulaRef lhs = parse_formula_level(ts, level + 1, atoms);
  if (op_level_cfg(ts.peek().kind) == level) {
    auto op = ts.next();
    FormulaRef rhs = parse_formula_level(ts, level + 1, atoms);
    try {
      switch (op.kind) {
        case Tok::Amp: lhs = Formula::with(lhs, rhs); break;
        case Tok::PlusSym: lhs = Formula::plus(lhs, rhs); break;
        case Tok::Slash: lhs = Formula::over(lhs, rhs); break;
        case Tok::Backslash: lhs = Formula::under(lhs, rhs); break;
        case Tok::Up: lhs = Formula::up(op.k, lhs, rhs); break;
        case Tok::Down: lhs = Formula::down(op.k, lhs, rhs); break;
        case Tok::Star: lhs = Formula::prod(lhs, rhs); break;
        case Tok::Odot: lhs = Formula::wrap(op.k, lhs, rhs); break;
        default: break;
      }
    } catch (const SortError& e) {
      throw ParseError(e.what(), op.pos);
    }
    if (op_level_cfg(ts.peek().kind) == level)
      throw ParseError("operators at this precedence are non-associative; add parentheses",
                       ts.peek().pos);
  }
  return lhs;
}

FormulaRef parse_formula_primary(TokenStream& ts, const AtomTable& atoms) {
  const auto& t = ts.peek();
  switch (t.kind) {
    case Tok::Ident: {
      auto tok = ts.next();
      auto d = atoms.lookup(tok.text);
      return Formula::mk_atom(tok.text, d.sort, d.bias);
    }
    case Tok::UnitI: ts.next(); return Formula::unit_i();
    case Tok::UnitJ: ts.next(); return Formula::unit_j();
    case Tok::LParen: {
      ts.next();
      auto f = parse_formula_level(ts, 0, atoms);
      ts.expect(Tok::RParen, ")");
      return f;
    }
    default: throw ParseError("expected a formula", t.pos);
  }
}

FormulaRef parse_formula_tokens(TokenStream& ts, const AtomTable& atoms) {
  return parse_formula_level(ts, 0, atoms);
}

}  // namespace

Configuration parse_config(const std::string& text, const AtomTable& atoms) {
  TokenStream ts(detail::lex(text));
  ConfigParser p{atoms, std::nullopt};
  Descents d;
  auto c = p.parse(ts, d, true);
  if (!ts.at(Tok::End)) throw ParseError("trailing input after configuration", ts.peek().pos);
  if (p.focus) throw ParseError("focus marker outside a sequent", 0);
  return c;
}

Sequent parse_sequent(const std::string& text, const AtomTable& atoms) {
  TokenStream ts(detail::lex(text));
  ConfigParser p{atoms, std::nullopt};
  Descents d;
  auto ant = p.parse(ts, d, true);
  ts.expect(Tok::Arrow, "=>");
  Focus focus = Focus::none();
  if (p.focus) focus = Focus::antecedent(*p.focus);
  bool boxed = ts.accept(Tok::FocOpen);
  FormulaRef succ = parse_formula_tokens(ts, p.atoms);
  if (boxed) {
    ts.expect(Tok::FocClose, ">>");
    if (focus.kind != FocusKind::None) throw ParseError("more than one focus", 0);
    focus = Focus::succedent();
  }
  if (!ts.at(Tok::End)) throw ParseError("trailing input after sequent", ts.peek().pos);
  return make_sequent(std::move(ant), std::move(succ), focus);
}

}  // namespace disp
