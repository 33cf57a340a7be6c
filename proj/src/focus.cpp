#include "disp/focus.hpp"

#include "backward.hpp"

namespace disp {

namespace {

using detail::Expansion;

RuleInstance to_instance(Expansion&& e) {
  return RuleInstance{e.rule, std::move(e.inst), std::move(e.premises)};
}

}  // namespace

std::optional<RuleInstance> async_step(const Sequent& s) {
  if (s.focus.kind != FocusKind::None)
    throw ReplayError("async_step: sequent already carries a focus");
  if (complex_async_at(s.succedent, Position::Succedent)) {
    auto es = detail::right_expansions(s, false);
    if (es.size() != 1) throw ReplayError("async right rule is not deterministic here");
    return to_instance(std::move(es[0]));
  }
  for (const auto& occ : all_occurrences(s.antecedent)) {
    if (!complex_async_at(occ.item->type, Position::Antecedent)) continue;
    auto es = detail::left_expansions_at(s, occ.path, false);
    if (es.size() != 1) throw ReplayError("async left rule is not deterministic here");
    return to_instance(std::move(es[0]));
  }
  return std::nullopt;
}

std::vector<Sequent> focus_choices(const Sequent& s) {
  if (s.focus.kind != FocusKind::None)
    throw ReplayError("focus_choices: sequent already carries a focus");
  std::vector<Sequent> out;
  for (const auto& occ : all_occurrences(s.antecedent)) {
    if (polarity_of(occ.item->type, Position::Antecedent) == Polarity::PosInput)
      out.push_back(Sequent{s.antecedent, s.succedent, Focus::antecedent(occ.path)});
  }
  if (polarity_of(s.succedent, Position::Succedent) == Polarity::PosOutput)
    out.push_back(Sequent{s.antecedent, s.succedent, Focus::succedent()});
  return out;
}

std::vector<RuleInstance> sync_step(const Sequent& s) {
  std::vector<RuleInstance> out;
  if (s.focus.kind == FocusKind::None)
    throw ReplayError("sync_step: sequent carries no focus");
  for (auto& e : detail::axiom_expansions(s, true)) out.push_back(to_instance(std::move(e)));
  if (s.focus.kind == FocusKind::Succedent) {
    if (!s.succedent->is_atom())
      for (auto& e : detail::right_expansions(s, true)) out.push_back(to_instance(std::move(e)));
  } else {
    const ItemRef& it = item_at(s.antecedent, s.focus.path);
    if (!it->type->is_atom())
      for (auto& e : detail::left_expansions_at(s, s.focus.path, true))
        out.push_back(to_instance(std::move(e)));
  }
  return out;
}

namespace {

struct Ctx {
  uint64_t budget;
  uint64_t max_proofs;
  uint64_t expanded = 0;
  bool truncated = false;
};

std::vector<DerivRef> search_foc(const Sequent& s, Ctx& ctx);

void combine(const RuleInstance& ri, const std::vector<std::vector<DerivRef>>& premise_proofs,
             size_t i, std::vector<DerivRef>& chosen, std::vector<DerivRef>& out, Ctx& ctx) {
  if (out.size() >= ctx.max_proofs) {
    ctx.truncated = true;
    return;
  }
  if (i == premise_proofs.size()) {
    out.push_back(Derivation::make(System::DAFoc, ri.rule, ri.inst, chosen));
    return;
  }
  for (const auto& p : premise_proofs[i]) {
    chosen.push_back(p);
    combine(ri, premise_proofs, i + 1, chosen, out, ctx);
    chosen.pop_back();
    if (out.size() >= ctx.max_proofs) return;
  }
}

void apply_instances(const std::vector<RuleInstance>& ris, const Sequent& s,
                     std::vector<DerivRef>& out, Ctx& ctx) {
  for (const auto& ri : ris) {
    if (ri.premises.empty()) {
      out.push_back(Derivation::axiom(System::DAFoc, ri.rule, s));
      continue;
    }
    std::vector<std::vector<DerivRef>> premise_proofs;
    bool dead = false;
    for (const auto& p : ri.premises) {
      premise_proofs.push_back(search_foc(p, ctx));
      if (premise_proofs.back().empty()) {
        dead = true;
        break;
      }
    }
    if (dead) continue;
    std::vector<DerivRef> chosen;
    combine(ri, premise_proofs, 0, chosen, out, ctx);
    if (out.size() >= ctx.max_proofs) {
      ctx.truncated = true;
      return;
    }
  }
}

std::vector<DerivRef> search_foc(const Sequent& s, Ctx& ctx) {
  std::vector<DerivRef> out;
  if (ctx.expanded >= ctx.budget) {
    ctx.truncated = true;
    return out;
  }
  ++ctx.expanded;
  if (s.focus.kind != FocusKind::None) {
    apply_instances(sync_step(s), s, out, ctx);
    return out;
  }
  if (auto step = async_step(s)) {
    apply_instances({*step}, s, out, ctx);
    return out;
  }
  for (const Sequent& focused : focus_choices(s)) {
    auto sub = search_foc(focused, ctx);
    Instantiation inst;
    if (focused.focus.kind == FocusKind::Succedent)
      inst.focus_succedent = true;
    else
      inst.path = focused.focus.path;
    for (const auto& d : sub) {
      out.push_back(Derivation::make(System::DAFoc, RuleName::Foc, inst, {d}));
      if (out.size() >= ctx.max_proofs) {
        ctx.truncated = true;
        return out;
      }
    }
  }
  return out;
}

}  // namespace

SearchResult prove_focused(const Sequent& s, const SearchLimits& limits) {
  if (s.focus.kind != FocusKind::None)
    throw ReplayError("prove_focused: the query sequent must be unfocused");
  Ctx ctx{limits.node_budget, limits.max_proofs};
  SearchResult r;
  r.proofs = search_foc(s, ctx);
  r.truncated = ctx.truncated;
  r.expanded = ctx.expanded;
  return r;
}

}  // namespace disp
