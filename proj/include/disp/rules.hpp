#pragma once

#include "disp/config.hpp"

namespace disp {

struct ReplayError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class System : uint8_t { DA, DAf, DAFoc };

const char* system_name(System s);
std::optional<System> system_from_name(const std::string& s);

enum class RuleName : uint8_t {
  Id,
  OverL, OverR,
  UnderL, UnderR,
  ProdL, ProdR,
  IL, IR,
  UpL, UpR,
  DownL, DownR,
  WrapL, WrapR,
  JL, JR,
  WithL1, WithL2, WithR,
  PlusL, PlusR1, PlusR2,
  Foc,
  PCut1, PCut2, NCut1, NCut2,
};

const char* rule_name(RuleName r);
std::optional<RuleName> rule_from_name(const std::string& s);
bool is_cut(RuleName r);

// Metavariables of a rule instance, in premise coordinates, enough to
// recompute the conclusion from the premises.
struct Instantiation {
  std::optional<Path> path;      // principal occurrence in its premise; cut occurrence;
                                 // foc target; consumed figure for UpR
  int k = 1;                     // Up/Down/Wrap rules
  FormulaRef other;              // absent additive component (WithL*, PlusR*)
  std::optional<Region> region;  // IL insertion gap (begin==end); JL consumed run
  bool focus_succedent = false;  // Foc: focus the succedent

  bool operator==(const Instantiation& o) const;
};

// Conclusion of a rule instance, computed from the premises. Also
// returns the principal antecedent item created by a left rule (null
// for right rules and axioms) so callers can locate it.
struct Applied {
  Sequent conclusion;
  ItemRef principal;  // antecedent principal created by the application
};

Applied apply_rule(System sys, RuleName r, const Instantiation& inst,
                   const std::vector<Sequent>& premises);

// Axioms: Id, IR, JR. Validates the sequent shape for the system.
void check_axiom(System sys, RuleName r, const Sequent& s);

class Derivation;
using DerivRef = std::shared_ptr<const Derivation>;

class Derivation {
 public:
  RuleName rule;
  Instantiation inst;
  Sequent conclusion;
  std::vector<DerivRef> premises;
  ItemRef principal;  // see Applied

  // Axiom node; validates against the system.
  static DerivRef axiom(System sys, RuleName r, Sequent s);
  // Internal node; the conclusion is recomputed from the premises.
  static DerivRef make(System sys, RuleName r, Instantiation inst, std::vector<DerivRef> premises);

  size_t node_count() const;
  int cut_count() const;
};

// Revalidates the whole tree against the system and returns the root
// sequent. Throws ReplayError naming the offending node otherwise.
Sequent replay(System sys, const DerivRef& d);

bool equal(const DerivRef& a, const DerivRef& b);
size_t hash_of(const DerivRef& d);

// Strips focus markers and foc nodes from a (cut-free) focused
// derivation, yielding a DA derivation of the same sequent.
DerivRef erase_focus(const DerivRef& d);

}  // namespace disp
