#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace disp {

struct SortError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
  size_t pos;
  ParseError(const std::string& msg, size_t at)
      : std::runtime_error(msg + " (at offset " + std::to_string(at) + ")"), pos(at) {}
};

enum class Bias : uint8_t { Positive, Negative };

// Connectives of DA with additives. UnitI/UnitJ are the 0-ary ones.
enum class Conn : uint8_t {
  Atom,
  Over,   // C/B
  Under,  // A\C
  Prod,   // A*B
  UnitI,  // I
  Up,     // C up_k B
  Down,   // A dn_k C
  Wrap,   // A odot_k B
  UnitJ,  // J
  With,   // A&B
  Plus,   // A+B
};

class Formula;
using FormulaRef = std::shared_ptr<const Formula>;

// Immutable type AST. Sort constraints are checked by the factory
// functions; a constructed formula always has a valid sort.
class Formula {
 public:
  Conn conn;
  std::string atom;  // Conn::Atom only
  Bias bias = Bias::Negative;
  int k = 1;  // Up/Down/Wrap only
  FormulaRef left, right;
  int sort = 0;
  int size = 0;  // connective count (units count as one)

  static FormulaRef mk_atom(const std::string& name, int sort = 0, Bias bias = Bias::Negative);
  static FormulaRef over(FormulaRef c, FormulaRef b);
  static FormulaRef under(FormulaRef a, FormulaRef c);
  static FormulaRef prod(FormulaRef a, FormulaRef b);
  static FormulaRef unit_i();
  static FormulaRef unit_j();
  static FormulaRef up(int k, FormulaRef c, FormulaRef b);
  static FormulaRef down(int k, FormulaRef a, FormulaRef c);
  static FormulaRef wrap(int k, FormulaRef a, FormulaRef b);
  static FormulaRef with(FormulaRef a, FormulaRef b);
  static FormulaRef plus(FormulaRef a, FormulaRef b);

  bool is_atom() const { return conn == Conn::Atom; }
};

int sort_of(const FormulaRef& f);
bool equal(const FormulaRef& a, const FormulaRef& b);
size_t hash_of(const FormulaRef& f);
std::string to_text(const FormulaRef& f);

enum class Position : uint8_t { Antecedent, Succedent };
enum class Polarity : uint8_t { PosOutput, PosInput, NegOutput, NegInput };

Polarity polarity_of(const FormulaRef& f, Position pos);
// Synchronous situated formulas are the focusable ones.
bool synchronous_at(const FormulaRef& f, Position pos);
// Nonatomic and asynchronous at the given position.
bool complex_async_at(const FormulaRef& f, Position pos);

// Atom declarations feeding the parser. Undeclared atoms default to
// sort 0, negative bias.
struct AtomTable {
  struct Decl {
    int sort = 0;
    Bias bias = Bias::Negative;
  };
  std::map<std::string, Decl> decls;

  void declare(const std::string& name, int sort, Bias bias) { decls[name] = Decl{sort, bias}; }
  Decl lookup(const std::string& name) const {
    auto it = decls.find(name);
    return it == decls.end() ? Decl{} : it->second;
  }
};

FormulaRef parse_formula(const std::string& text, const AtomTable& atoms = {});

// Rebuild a formula with a different bias assignment for its atoms.
FormulaRef rebias(const FormulaRef& f, const std::function<Bias(const std::string&)>& bias_of);

}  // namespace disp
