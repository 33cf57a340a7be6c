#pragma once

#include <string>
#include <vector>

#include "disp/formula.hpp"

namespace disp::detail {

enum class Tok {
  Ident,
  Sep,       // 1
  Slash,     // /
  Backslash, // backslash
  Star,      // *
  Amp,       // &
  PlusSym,   // +
  Up,        // up / up_k
  Down,      // dn / dn_k
  Odot,      // odot / odot_k
  UnitI,
  UnitJ,
  LParen,
  RParen,
  LBrace,
  RBrace,
  Colon,
  Comma,
  Arrow,     // =>
  FocOpen,   // <<
  FocClose,  // >>
  Assign,    // :=
  End,
};

struct Token {
  Tok kind;
  std::string text;  // Ident
  int k = 1;         // Up/Down/Odot subscript
  size_t pos = 0;
};

// Tokenizes formula/configuration/sequent syntax. Unicode connective
// aliases are accepted and mapped to their ASCII forms.
std::vector<Token> lex(const std::string& input);

class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> toks) : toks_(std::move(toks)) {}

  const Token& peek() const { return toks_[i_]; }
  const Token& peek2() const { return toks_[std::min(i_ + 1, toks_.size() - 1)]; }
  Token next() { return toks_[i_ == toks_.size() - 1 ? i_ : i_++]; }
  bool at(Tok k) const { return peek().kind == k; }
  bool accept(Tok k) {
    if (!at(k)) return false;
    next();
    return true;
  }
  Token expect(Tok k, const char* what) {
    if (!at(k)) throw ParseError(std::string("expected ") + what, peek().pos);
    return next();
  }

 private:
  std::vector<Token> toks_;
  size_t i_ = 0;
};

}  // namespace disp::detail
