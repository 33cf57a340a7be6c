#include "disp/search.hpp"

#include <cstdlib>
#include <unordered_set>

#include "backward.hpp"

namespace disp {

uint64_t default_node_budget() {
  if (const char* env = std::getenv("DF_NODE_BUDGET")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
  }
  return 1'000'000;
}

namespace {

using detail::Expansion;

void dedup(std::vector<Expansion>& es) {
  std::vector<Expansion> out;
  for (auto& e : es) {
    bool dup = false;
    for (const auto& o : out) {
      if (o.rule != e.rule || !(o.inst == e.inst) || o.premises.size() != e.premises.size())
        continue;
      bool same = true;
      for (size_t i = 0; i < o.premises.size() && same; ++i)
        same = equal(o.premises[i], e.premises[i]);
      if (same) {
        dup = true;
        break;
      }
    }
    if (!dup) out.push_back(std::move(e));
  }
  es = std::move(out);
}

}  // namespace

std::vector<RuleInstance> expansions(const Sequent& s) {
  if (s.focus.kind != FocusKind::None)
    throw ReplayError("expansions: the unfocused calculus takes unfocused sequents");
  std::vector<Expansion> es = detail::axiom_expansions(s, false);
  for (auto& e : detail::right_expansions(s, false)) es.push_back(std::move(e));
  for (const auto& occ : all_occurrences(s.antecedent))
    for (auto& e : detail::left_expansions_at(s, occ.path, false)) es.push_back(std::move(e));
  dedup(es);
  std::vector<RuleInstance> out;
  out.reserve(es.size());
  for (auto& e : es) out.push_back(RuleInstance{e.rule, std::move(e.inst), std::move(e.premises)});
  return out;
}

namespace {

struct Ctx {
  uint64_t budget;
  uint64_t max_proofs;
  uint64_t expanded = 0;
  bool truncated = false;
};

void combine(System sys, const RuleInstance& ri,
             const std::vector<std::vector<DerivRef>>& premise_proofs, size_t i,
             std::vector<DerivRef>& chosen, std::vector<DerivRef>& out, Ctx& ctx) {
  if (out.size() >= ctx.max_proofs) {
    ctx.truncated = true;
    return;
  }
  if (i == premise_proofs.size()) {
    out.push_back(Derivation::make(sys, ri.rule, ri.inst, chosen));
    return;
  }
  for (const auto& p : premise_proofs[i]) {
    chosen.push_back(p);
    combine(sys, ri, premise_proofs, i + 1, chosen, out, ctx);
    chosen.pop_back();
    if (out.size() >= ctx.max_proofs) return;
  }
}

std::vector<DerivRef> search(const Sequent& s, Ctx& ctx) {
  std::vector<DerivRef> out;
  if (ctx.expanded >= ctx.budget) {
    ctx.truncated = true;
    return out;
  }
  ++ctx.expanded;
  for (const auto& ri : expansions(s)) {
    if (ri.premises.empty()) {
      out.push_back(Derivation::axiom(System::DA, ri.rule, s));
      continue;
    }
    std::vector<std::vector<DerivRef>> premise_proofs;
    bool dead = false;
    for (const auto& p : ri.premises) {
      premise_proofs.push_back(search(p, ctx));
      if (premise_proofs.back().empty()) {
        dead = true;
        break;
      }
    }
    if (dead) continue;
    std::vector<DerivRef> chosen;
    combine(System::DA, ri, premise_proofs, 0, chosen, out, ctx);
    if (out.size() >= ctx.max_proofs) {
      ctx.truncated = true;
      break;
    }
  }
  return out;
}

}  // namespace

SearchResult prove_all(const Sequent& s, const SearchLimits& limits) {
  Ctx ctx{limits.node_budget, limits.max_proofs};
  SearchResult r;
  r.proofs = search(s, ctx);
  r.truncated = ctx.truncated;
  r.expanded = ctx.expanded;
  return r;
}

}  // namespace disp
