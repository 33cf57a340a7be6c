#pragma once

#include "disp/search.hpp"

namespace disp {

// One deterministic asynchronous step: decomposes the leftmost complex
// asynchronous occurrence, succedent first. Empty when the phase is
// exhausted.
std::optional<RuleInstance> async_step(const Sequent& s);

// Focus placements available once the asynchronous phase is exhausted:
// one per positive-input antecedent occurrence plus the succedent when
// it is positive-output. Ordered antecedent (depth-first) then
// succedent.
std::vector<Sequent> focus_choices(const Sequent& s);

// All synchronous steps on the focused formula, including the closing
// axioms (identity on a focused atom, boxed right units).
std::vector<RuleInstance> sync_step(const Sequent& s);

// Exhaustive strongly focalised proof search. Complete for DA: the
// result is nonempty iff prove_all finds a proof.
SearchResult prove_focused(const Sequent& s, const SearchLimits& limits = {});

}  // namespace disp
