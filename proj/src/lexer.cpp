#include "lexer.hpp"

#include <cctype>

namespace disp::detail {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

// Returns the number of bytes consumed if `s[i..]` starts with the
// UTF-8 sequence `u`, else 0.
size_t starts_with(const std::string& s, size_t i, const char* u) {
  size_t n = std::char_traits<char>::length(u);
  if (s.compare(i, n, u) == 0) return n;
  return 0;
}

int parse_subscript(const std::string& s, size_t& i) {
  // optional _k suffix; defaults to 1
  if (i < s.size() && s[i] == '_') {
    size_t j = i + 1;
    if (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) {
      int k = 0;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) {
        k = k * 10 + (s[j] - '0');
        ++j;
      }
      i = j;
      return k;
    }
  }
  return 1;
}

}  // namespace

std::vector<Token> lex(const std::string& input) {
  std::vector<Token> out;
  size_t i = 0;
  auto push = [&](Tok k, size_t pos, std::string text = {}, int sub = 1) {
    out.push_back(Token{k, std::move(text), sub, pos});
  };
  while (i < input.size()) {
    char c = input[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    size_t pos = i;
    if (size_t n = starts_with(input, i, "↑")) {  // up arrow
      i += n;
      push(Tok::Up, pos, {}, parse_subscript(input, i));
      continue;
    }
    if (size_t n = starts_with(input, i, "↓")) {  // down arrow
      i += n;
      push(Tok::Down, pos, {}, parse_subscript(input, i));
      continue;
    }
    if (size_t n = starts_with(input, i, "⊙")) {  // circled dot
      i += n;
      push(Tok::Odot, pos, {}, parse_subscript(input, i));
      continue;
    }
    if (size_t n = starts_with(input, i, "•")) {  // bullet
      i += n;
      push(Tok::Star, pos);
      continue;
    }
    if (size_t n = starts_with(input, i, "⊕")) {  // circled plus
      i += n;
      push(Tok::PlusSym, pos);
      continue;
    }
    if (size_t n = starts_with(input, i, "⇒")) {  // double arrow
      i += n;
      push(Tok::Arrow, pos);
      continue;
    }
    switch (c) {
      case '/': push(Tok::Slash, pos); ++i; continue;
      case '\\': push(Tok::Backslash, pos); ++i; continue;
      case '*': push(Tok::Star, pos); ++i; continue;
      case '&': push(Tok::Amp, pos); ++i; continue;
      case '+': push(Tok::PlusSym, pos); ++i; continue;
      case '(': push(Tok::LParen, pos); ++i; continue;
      case ')': push(Tok::RParen, pos); ++i; continue;
      case '{': push(Tok::LBrace, pos); ++i; continue;
      case '}': push(Tok::RBrace, pos); ++i; continue;
      case ',': push(Tok::Comma, pos); ++i; continue;
      case '1': push(Tok::Sep, pos); ++i; continue;
      case ':':
        if (i + 1 < input.size() && input[i + 1] == '=') {
          push(Tok::Assign, pos);
          i += 2;
        } else {
          push(Tok::Colon, pos);
          ++i;
        }
        continue;
      case '=':
        if (i + 1 < input.size() && input[i + 1] == '>') {
          push(Tok::Arrow, pos);
          i += 2;
          continue;
        }
        throw ParseError("unexpected '='", pos);
      case '<':
        if (i + 1 < input.size() && input[i + 1] == '<') {
          push(Tok::FocOpen, pos);
          i += 2;
          continue;
        }
        throw ParseError("unexpected '<'", pos);
      case '>':
        if (i + 1 < input.size() && input[i + 1] == '>') {
          push(Tok::FocClose, pos);
          i += 2;
          continue;
        }
        throw ParseError("unexpected '>'", pos);
      default: break;
    }
    if (ident_start(c)) {
      size_t j = i;
      while (j < input.size() && ident_char(input[j])) ++j;
      std::string word = input.substr(i, j - i);
      if (word == "up") {
        i = j;
        push(Tok::Up, pos, {}, parse_subscript(input, i));
      } else if (word == "dn") {
        i = j;
        push(Tok::Down, pos, {}, parse_subscript(input, i));
      } else if (word == "odot") {
        i = j;
        push(Tok::Odot, pos, {}, parse_subscript(input, i));
      } else if (word == "I") {
        i = j;
        push(Tok::UnitI, pos);
      } else if (word == "J") {
        i = j;
        push(Tok::UnitJ, pos);
      } else {
        i = j;
        push(Tok::Ident, pos, std::move(word));
      }
      continue;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", pos);
  }
  out.push_back(Token{Tok::End, {}, 1, input.size()});
  return out;
}

}  // namespace disp::detail
