#pragma once

#include "disp/rules.hpp"

namespace disp {

struct SearchLimits {
  uint64_t max_proofs = UINT64_MAX;
  uint64_t node_budget = 1'000'000;
};

struct SearchResult {
  std::vector<DerivRef> proofs;
  bool truncated = false;
  uint64_t expanded = 0;
};

// Every backward rule instance whose conclusion is s (unfocused DA).
struct RuleInstance {
  RuleName rule;
  Instantiation inst;
  std::vector<Sequent> premises;
};
std::vector<RuleInstance> expansions(const Sequent& s);

// Exhaustive Cut-free backward proof search in DA. The result is the
// complete duplicate-free set of derivations unless a limit was hit.
SearchResult prove_all(const Sequent& s, const SearchLimits& limits = {});

uint64_t default_node_budget();

}  // namespace disp
