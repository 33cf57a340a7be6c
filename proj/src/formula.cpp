#include "disp/formula.hpp"

#include <sstream>

#include "lexer.hpp"

namespace disp {

namespace {

FormulaRef finish(Formula f) {
  return std::make_shared<const Formula>(std::move(f));
}

std::string ks(int k) { return k == 1 ? std::string() : "_" + std::to_string(k); }

}  // namespace

FormulaRef Formula::mk_atom(const std::string& name, int sort, Bias bias) {
  if (name.empty()) throw SortError("atom name must be nonempty");
  if (sort < 0) throw SortError("atom sort must be nonnegative: " + name);
  Formula f;
  f.conn = Conn::Atom;
  f.atom = name;
  f.bias = bias;
  f.sort = sort;
  f.size = 0;
  return finish(std::move(f));
}

FormulaRef Formula::over(FormulaRef c, FormulaRef b) {
  Formula f;
  f.conn = Conn::Over;
  f.sort = c->sort - b->sort;
  if (f.sort < 0)
    throw SortError("sort(" + to_text(c) + ") < sort(" + to_text(b) + ") in /");
  f.size = 1 + c->size + b->size;
  f.left = std::move(c);
  f.right = std::move(b);
  return finish(std::move(f));
}

FormulaRef Formula::under(FormulaRef a, FormulaRef c) {
  Formula f;
  f.conn = Conn::Under;
  f.sort = c->sort - a->sort;
  if (f.sort < 0)
    throw SortError("sort(" + to_text(c) + ") < sort(" + to_text(a) + ") in \\");
  f.size = 1 + a->size + c->size;
  f.left = std::move(a);
  f.right = std::move(c);
  return finish(std::move(f));
}

FormulaRef Formula::prod(FormulaRef a, FormulaRef b) {
  Formula f;
  f.conn = Conn::Prod;
  f.sort = a->sort + b->sort;
  f.size = 1 + a->size + b->size;
  f.left = std::move(a);
  f.right = std::move(b);
  return finish(std::move(f));
}

FormulaRef Formula::unit_i() {
  Formula f;
  f.conn = Conn::UnitI;
  f.sort = 0;
  f.size = 1;
  return finish(std::move(f));
}

FormulaRef Formula::unit_j() {
  Formula f;
  f.conn = Conn::UnitJ;
  f.sort = 1;
  f.size = 1;
  return finish(std::move(f));
}

FormulaRef Formula::up(int k, FormulaRef c, FormulaRef b) {
  Formula f;
  f.conn = Conn::Up;
  f.sort = c->sort - b->sort + 1;
  if (f.sort < 1)
    throw SortError("sort(" + to_text(c) + ") < sort(" + to_text(b) + ") in up");
  if (k < 1 || k > f.sort)
    throw SortError("k=" + std::to_string(k) + " exceeds result sort " +
                    std::to_string(f.sort) + " in " + to_text(c) + " up_k " + to_text(b));
  f.k = k;
  f.size = 1 + c->size + b->size;
  f.left = std::move(c);
  f.right = std::move(b);
  return finish(std::move(f));
}

FormulaRef Formula::down(int k, FormulaRef a, FormulaRef c) {
  Formula f;
  f.conn = Conn::Down;
  if (a->sort < 1) throw SortError("sort(" + to_text(a) + ") must be >= 1 in dn");
  f.sort = c->sort - a->sort + 1;
  if (f.sort < 0)
    throw SortError("sort mismatch in " + to_text(a) + " dn " + to_text(c));
  if (k < 1 || k > a->sort)
    throw SortError("k=" + std::to_string(k) + " exceeds sort " + std::to_string(a->sort) +
                    " of " + to_text(a) + " in dn");
  f.k = k;
  f.size = 1 + a->size + c->size;
  f.left = std::move(a);
  f.right = std::move(c);
  return finish(std::move(f));
}

FormulaRef Formula::wrap(int k, FormulaRef a, FormulaRef b) {
  Formula f;
  f.conn = Conn::Wrap;
  if (a->sort < 1) throw SortError("sort(" + to_text(a) + ") must be >= 1 in odot");
  f.sort = a->sort + b->sort - 1;
  if (k < 1 || k > a->sort)
    throw SortError("k=" + std::to_string(k) + " exceeds sort " + std::to_string(a->sort) +
                    " of " + to_text(a) + " in odot");
  f.k = k;
  f.size = 1 + a->size + b->size;
  f.left = std::move(a);
  f.right = std::move(b);
  return finish(std::move(f));
}

FormulaRef Formula::with(FormulaRef a, FormulaRef b) {
  Formula f;
  f.conn = Conn::With;
  if (a->sort != b->sort)
    throw SortError("sort mismatch in " + to_text(a) + " & " + to_text(b));
  f.sort = a->sort;
  f.size = 1 + a->size + b->size;
  f.left = std::move(a);
  f.right = std::move(b);
  return finish(std::move(f));
}

FormulaRef Formula::plus(FormulaRef a, FormulaRef b) {
  Formula f;
  f.conn = Conn::Plus;
  if (a->sort != b->sort)
    throw SortError("sort mismatch in " + to_text(a) + " + " + to_text(b));
  f.sort = a->sort;
  f.size = 1 + a->size + b->size;
  f.left = std::move(a);
  f.right = std::move(b);
  return finish(std::move(f));
}

int sort_of(const FormulaRef& f) { return f->sort; }

bool equal(const FormulaRef& a, const FormulaRef& b) {
  if (a.get() == b.get()) return true;
  if (a->conn != b->conn) return false;
  switch (a->conn) {
    case Conn::Atom:
      return a->atom == b->atom && a->sort == b->sort && a->bias == b->bias;
    case Conn::UnitI:
    case Conn::UnitJ:
      return true;
    case Conn::Up:
    case Conn::Down:
    case Conn::Wrap:
      if (a->k != b->k) return false;
      [[fallthrough]];
    default:
      return equal(a->left, b->left) && equal(a->right, b->right);
  }
}

size_t hash_of(const FormulaRef& f) {
  size_t h = static_cast<size_t>(f->conn) * 0x9e3779b97f4a7c15ull;
  auto mix = [&](size_t v) { h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2); };
  switch (f->conn) {
    case Conn::Atom:
      mix(std::hash<std::string>{}(f->atom));
      mix(static_cast<size_t>(f->sort));
      mix(f->bias == Bias::Positive ? 1 : 2);
      break;
    case Conn::UnitI:
    case Conn::UnitJ:
      break;
    default:
      mix(static_cast<size_t>(f->k));
      mix(hash_of(f->left));
      mix(hash_of(f->right));
      break;
  }
  return h;
}

namespace {

// Precedence levels: 0 additive (& +), 1 divisions (/ \ up dn),
// 2 products (* odot), 3 primary. All binary operators non-associative.
int level_of(Conn c) {
  switch (c) {
    case Conn::With:
    case Conn::Plus: return 0;
    case Conn::Over:
    case Conn::Under:
    case Conn::Up:
    case Conn::Down: return 1;
    case Conn::Prod:
    case Conn::Wrap: return 2;
    default: return 3;
  }
}

void print(const FormulaRef& f, int min_level, std::ostream& os) {
  int lv = level_of(f->conn);
  bool paren = lv < min_level;
  if (paren) os << '(';
  switch (f->conn) {
    case Conn::Atom: os << f->atom; break;
    case Conn::UnitI: os << 'I'; break;
    case Conn::UnitJ: os << 'J'; break;
    case Conn::Over:
      print(f->left, lv + 1, os);
      os << '/';
      print(f->right, lv + 1, os);
      break;
    case Conn::Under:
      print(f->left, lv + 1, os);
      os << '\\';
      print(f->right, lv + 1, os);
      break;
    case Conn::Prod:
      print(f->left, lv + 1, os);
      os << '*';
      print(f->right, lv + 1, os);
      break;
    case Conn::Up:
      print(f->left, lv + 1, os);
      os << " up" << ks(f->k) << ' ';
      print(f->right, lv + 1, os);
      break;
    case Conn::Down:
      print(f->left, lv + 1, os);
      os << " dn" << ks(f->k) << ' ';
      print(f->right, lv + 1, os);
      break;
    case Conn::Wrap:
      print(f->left, lv + 1, os);
      os << " odot" << ks(f->k) << ' ';
      print(f->right, lv + 1, os);
      break;
    case Conn::With:
      print(f->left, lv + 1, os);
      os << '&';
      print(f->right, lv + 1, os);
      break;
    case Conn::Plus:
      print(f->left, lv + 1, os);
      os << '+';
      print(f->right, lv + 1, os);
      break;
  }
  if (paren) os << ')';
}

}  // namespace

std::string to_text(const FormulaRef& f) {
  std::ostringstream os;
  print(f, 0, os);
  return os.str();
}

Polarity polarity_of(const FormulaRef& f, Position pos) {
  bool ant = pos == Position::Antecedent;
  if (f->is_atom()) {
    if (f->bias == Bias::Positive) return ant ? Polarity::NegInput : Polarity::PosOutput;
    return ant ? Polarity::PosInput : Polarity::NegOutput;
  }
  switch (f->conn) {
    case Conn::Prod:
    case Conn::UnitI:
    case Conn::Wrap:
    case Conn::UnitJ:
    case Conn::Plus:
      return ant ? Polarity::NegInput : Polarity::PosOutput;
    default:
      return ant ? Polarity::PosInput : Polarity::NegOutput;
  }
}

bool synchronous_at(const FormulaRef& f, Position pos) {
  Polarity p = polarity_of(f, pos);
  return p == Polarity::PosInput || p == Polarity::PosOutput;
}

bool complex_async_at(const FormulaRef& f, Position pos) {
  return !f->is_atom() && !synchronous_at(f, pos);
}

namespace {

using detail::Tok;
using detail::TokenStream;

FormulaRef parse_level(TokenStream& ts, int level, const AtomTable& atoms);

FormulaRef parse_primary(TokenStream& ts, const AtomTable& atoms) {
  auto& t = ts.peek();
  switch (t.kind) {
    case Tok::Ident: {
      auto tok = ts.next();
      auto d = atoms.lookup(tok.text);
      return Formula::mk_atom(tok.text, d.sort, d.bias);
    }
    case Tok::UnitI:
      ts.next();
      return Formula::unit_i();
    case Tok::UnitJ:
      ts.next();
      return Formula::unit_j();
    case Tok::LParen: {
      ts.next();
      auto f = parse_level(ts, 0, atoms);
      ts.expect(Tok::RParen, ")");
      return f;
    }
    default:
      throw ParseError("expected a formula", t.pos);
  }
}

FormulaRef apply_binary(const detail::Token& op, FormulaRef a, FormulaRef b) {
  try {
    switch (op.kind) {
      case Tok::Amp: return Formula::with(std::move(a), std::move(b));
      case Tok::PlusSym: return Formula::plus(std::move(a), std::move(b));
      case Tok::Slash: return Formula::over(std::move(a), std::move(b));
      case Tok::Backslash: return Formula::under(std::move(a), std::move(b));
      case Tok::Up: return Formula::up(op.k, std::move(a), std::move(b));
      case Tok::Down: return Formula::down(op.k, std::move(a), std::move(b));
      case Tok::Star: return Formula::prod(std::move(a), std::move(b));
      case Tok::Odot: return Formula::wrap(op.k, std::move(a), std::move(b));
      default: throw ParseError("not a binary operator", op.pos);
    }
  } catch (const SortError& e) {
    throw ParseError(e.what(), op.pos);
  }
}

int op_level(Tok k) {
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

FormulaRef parse_level(TokenStream& ts, int level, const AtomTable& atoms) {
  if (level == 3) return parse_primary(ts, atoms);
  FormulaRef lhs = parse_level(ts, level + 1, atoms);
  if (op_level(ts.peek().kind) == level) {
    auto op = ts.next();
    FormulaRef rhs = parse_level(ts, level + 1, atoms);
    lhs = apply_binary(op, std::move(lhs), std::move(rhs));
    // non-associative: a second operator at the same level needs parens
    if (op_level(ts.peek().kind) == level)
      throw ParseError("operators at this precedence are non-associative; add parentheses",
                       ts.peek().pos);
  }
  return lhs;
}

}  // namespace

FormulaRef parse_formula(const std::string& text, const AtomTable& atoms) {
  TokenStream ts(detail::lex(text));
  auto f = parse_level(ts, 0, atoms);
  if (!ts.at(Tok::End)) throw ParseError("trailing input after formula", ts.peek().pos);
  return f;
}

FormulaRef rebias(const FormulaRef& f, const std::function<Bias(const std::string&)>& bias_of) {
  switch (f->conn) {
    case Conn::Atom: {
      Bias b = bias_of(f->atom);
      if (b == f->bias) return f;
      return Formula::mk_atom(f->atom, f->sort, b);
    }
    case Conn::UnitI:
    case Conn::UnitJ:
      return f;
    default: {
      auto l = rebias(f->left, bias_of);
      auto r = rebias(f->right, bias_of);
      if (l.get() == f->left.get() && r.get() == f->right.get()) return f;
      switch (f->conn) {
        case Conn::Over: return Formula::over(l, r);
        case Conn::Under: return Formula::under(l, r);
        case Conn::Prod: return Formula::prod(l, r);
        case Conn::Up: return Formula::up(f->k, l, r);
        case Conn::Down: return Formula::down(f->k, l, r);
        case Conn::Wrap: return Formula::wrap(f->k, l, r);
        case Conn::With: return Formula::with(l, r);
        case Conn::Plus: return Formula::plus(l, r);
        default: return f;
      }
    }
  }
}

}  // namespace disp
