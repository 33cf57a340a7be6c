#pragma once

#include "disp/rules.hpp"

namespace disp::detail {

struct Expansion {
  RuleName rule;
  Instantiation inst;
  std::vector<Sequent> premises;
};

// Zero-premise rule instances whose conclusion is s. `focused` selects
// the focused reading of the axioms (Id restricted by bias, boxed
// right units).
std::vector<Expansion> axiom_expansions(const Sequent& s, bool focused);

// Backward instances of the right rule for the succedent's head
// connective. For the focused reading, premises carry boxes per the
// polarity of their succedents and the caller focuses the conclusion.
std::vector<Expansion> right_expansions(const Sequent& s, bool focused);

// Backward instances of the left rule whose principal occurrence is
// the item at `path`.
std::vector<Expansion> left_expansions_at(const Sequent& s, const Path& path, bool focused);

bool dfs_precedes(const Descents& a_down, int a_index, const Descents& b_down, int b_index);

}  // namespace disp::detail
