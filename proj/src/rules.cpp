#include "disp/rules.hpp"

#include <algorithm>
#include <sstream>

namespace disp {

const char* system_name(System s) {
  switch (s) {
    case System::DA: return "DA";
    case System::DAf: return "DAf";
    case System::DAFoc: return "DA_Foc";
  }
  return "?";
}

std::optional<System> system_from_name(const std::string& s) {
  if (s == "DA") return System::DA;
  if (s == "DAf") return System::DAf;
  if (s == "DA_Foc") return System::DAFoc;
  return std::nullopt;
}

const char* rule_name(RuleName r) {
  switch (r) {
    case RuleName::Id: return "Id";
    case RuleName::OverL: return "/L";
    case RuleName::OverR: return "/R";
    case RuleName::UnderL: return "\\L";
    case RuleName::UnderR: return "\\R";
    case RuleName::ProdL: return "*L";
    case RuleName::ProdR: return "*R";
    case RuleName::IL: return "IL";
    case RuleName::IR: return "IR";
    case RuleName::UpL: return "upL";
    case RuleName::UpR: return "upR";
    case RuleName::DownL: return "dnL";
    case RuleName::DownR: return "dnR";
    case RuleName::WrapL: return "odotL";
    case RuleName::WrapR: return "odotR";
    case RuleName::JL: return "JL";
    case RuleName::JR: return "JR";
    case RuleName::WithL1: return "&L1";
    case RuleName::WithL2: return "&L2";
    case RuleName::WithR: return "&R";
    case RuleName::PlusL: return "+L";
    case RuleName::PlusR1: return "+R1";
    case RuleName::PlusR2: return "+R2";
    case RuleName::Foc: return "foc";
    case RuleName::PCut1: return "pcut1";
    case RuleName::PCut2: return "pcut2";
    case RuleName::NCut1: return "ncut1";
    case RuleName::NCut2: return "ncut2";
  }
  return "?";
}

std::optional<RuleName> rule_from_name(const std::string& s) {
  static const std::map<std::string, RuleName> table = [] {
    std::map<std::string, RuleName> m;
    for (int i = 0; i <= static_cast<int>(RuleName::NCut2); ++i) {
      auto r = static_cast<RuleName>(i);
      m[rule_name(r)] = r;
    }
    return m;
  }();
  auto it = table.find(s);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

bool is_cut(RuleName r) {
  return r == RuleName::PCut1 || r == RuleName::PCut2 || r == RuleName::NCut1 ||
         r == RuleName::NCut2;
}

bool Instantiation::operator==(const Instantiation& o) const {
  if (path != o.path || k != o.k || region != o.region || focus_succedent != o.focus_succedent)
    return false;
  if (!other != !o.other) return false;
  return !other || equal(other, o.other);
}

namespace {

[[noreturn]] void fail(RuleName r, const std::string& msg) {
  throw ReplayError(std::string(rule_name(r)) + ": " + msg);
}

bool boxed_succ(const FormulaRef& f) {
  return polarity_of(f, Position::Succedent) == Polarity::PosOutput;
}
bool boxed_ant(const FormulaRef& f) {
  return polarity_of(f, Position::Antecedent) == Polarity::PosInput;
}

bool is_figure_item(const ItemRef& it) {
  if (it->separator) return false;
  for (const auto& a : it->args)
    if (a.items.size() != 1 || !a.items[0]->separator) return false;
  return true;
}

const ItemRef& occurrence_at(RuleName r, const Sequent& s, const std::optional<Path>& p) {
  if (!p) fail(r, "missing principal path");
  const ItemRef* it;
  try {
    it = &item_at(s.antecedent, *p);
  } catch (const ArityError& e) {
    fail(r, e.what());
  }
  if ((*it)->separator) fail(r, "principal path addresses a separator");
  return *it;
}

void need_focus(RuleName r, const Sequent& s, const Focus& expected, const char* which) {
  if (!(s.focus == expected))
    fail(r, std::string("unexpected focus state in ") + which + " premise of " + to_text(s));
}

// Translate a path through fold(g, fillers): separators before the
// target, in the same sequences, expand to filler-sized runs.
Path translate_through_fold(const Configuration& g, const std::vector<Configuration>& fillers,
                            const Path& p) {
  struct SepInfo {
    Descents down;
    int index;
    int len;
  };
  std::vector<SepInfo> seps;
  {
    auto paths = separator_paths(g);
    for (size_t j = 0; j < paths.size(); ++j)
      seps.push_back(SepInfo{paths[j].down, paths[j].index,
                             static_cast<int>(fillers[j].items.size())});
  }
  auto shift_at = [&](const Descents& down, int index) {
    int delta = 0;
    for (const auto& s : seps)
      if (s.down == down && s.index < index) delta += s.len - 1;
    return index + delta;
  };
  Path out;
  Descents prefix;
  for (auto [i, a] : p.down) {
    out.down.emplace_back(shift_at(prefix, i), a);
    prefix.emplace_back(i, a);
  }
  out.index = shift_at(p.down, p.index);
  return out;
}

Path prepend_splice(const Path& at, const Path& rel) {
  Path out;
  out.down = at.down;
  if (rel.down.empty()) {
    out.index = at.index + rel.index;
  } else {
    out.down.emplace_back(at.index + rel.down[0].first, rel.down[0].second);
    out.down.insert(out.down.end(), rel.down.begin() + 1, rel.down.end());
    out.index = rel.index;
  }
  return out;
}

// Re-locate a focused item after an antecedent edit: by pointer first,
// then by unchanged path (spine rebuilds keep positions).
Focus relocate_focus(RuleName r, const Sequent& premise, const Configuration& new_ant) {
  const ItemRef& it = item_at(premise.antecedent, premise.focus.path);
  if (auto p = find_item(new_ant, it.get())) return Focus::antecedent(*p);
  try {
    const ItemRef& cand = item_at(new_ant, premise.focus.path);
    if (!cand->separator && equal(cand->type, it->type))
      return Focus::antecedent(premise.focus.path);
  } catch (const ArityError&) {
  }
  fail(r, "focused formula was consumed by the rule");
}

// Threads the focus of an asynchronous rule premise into a conclusion
// whose succedent formula is unchanged.
Focus thread_async_focus(RuleName r, const Sequent& premise, const Configuration& new_ant,
                         bool succedent_same) {
  switch (premise.focus.kind) {
    case FocusKind::None: return Focus::none();
    case FocusKind::Succedent:
      if (!succedent_same) fail(r, "succedent focus cannot survive this rule");
      return Focus::succedent();
    case FocusKind::Antecedent: return relocate_focus(r, premise, new_ant);
  }
  return Focus::none();
}

struct RuleCtx {
  System sys;
  RuleName r;
  bool focused() const { return sys != System::DA; }
  // async premises must be entirely unfocused in DA and DA_Foc
  bool async_free() const { return sys != System::DAf; }
};

Focus minor_focus(const RuleCtx& c, const FormulaRef& sub) {
  if (!c.focused()) return Focus::none();
  return boxed_succ(sub) ? Focus::succedent() : Focus::none();
}

Focus major_focus(const RuleCtx& c, const FormulaRef& sub, const Path& at) {
  if (!c.focused()) return Focus::none();
  return boxed_ant(sub) ? Focus::antecedent(at) : Focus::none();
}

Applied left_sync_conclusion(const RuleCtx& c, const Sequent& major, const Path& at,
                             const ItemRef& newitem, const std::vector<ItemRef>& run,
                             int principal_offset) {
  Configuration ant = splice_item(major.antecedent, at, run);
  Focus focus = Focus::none();
  if (c.focused()) {
    Path p = at;
    p.index += principal_offset;
    focus = Focus::antecedent(p);
  }
  Sequent concl = make_sequent(std::move(ant), major.succedent, focus);
  return Applied{std::move(concl), newitem};
}

Applied apply_over_under_l(const RuleCtx& c, const Instantiation& inst,
                           const std::vector<Sequent>& ps, bool over) {
  if (ps.size() != 2) fail(c.r, "needs two premises");
  const Sequent& minor = ps[0];
  const Sequent& major = ps[1];
  const ItemRef& item = occurrence_at(c.r, major, inst.path);
  FormulaRef cf = item->type;
  FormulaRef sub = minor.succedent;
  FormulaRef principal;
  try {
    principal = over ? Formula::over(cf, sub) : Formula::under(sub, cf);
  } catch (const SortError& e) {
    fail(c.r, e.what());
  }
  need_focus(c.r, minor, minor_focus(c, sub), "minor");
  need_focus(c.r, major, major_focus(c, cf, *inst.path), "major");
  int keep = principal->sort;
  std::vector<Configuration> head_args, tail_args;
  if (over) {
    head_args.assign(item->args.begin(), item->args.begin() + keep);
    tail_args.assign(item->args.begin() + keep, item->args.end());
  } else {
    int gamma_n = static_cast<int>(item->args.size()) - keep;
    tail_args.assign(item->args.begin(), item->args.begin() + gamma_n);
    head_args.assign(item->args.begin() + gamma_n, item->args.end());
  }
  ItemRef newitem = Item::occ(principal, std::move(head_args));
  Configuration folded;
  try {
    folded = fold(minor.antecedent, tail_args);
  } catch (const ArityError& e) {
    fail(c.r, e.what());
  }
  std::vector<ItemRef> run;
  int offset = 0;
  if (over) {
    run.push_back(newitem);
    run.insert(run.end(), folded.items.begin(), folded.items.end());
  } else {
    run = folded.items;
    offset = static_cast<int>(run.size());
    run.push_back(newitem);
  }
  return left_sync_conclusion(c, major, *inst.path, newitem, run, offset);
}

Applied apply_up_l(const RuleCtx& c, const Instantiation& inst, const std::vector<Sequent>& ps) {
  if (ps.size() != 2) fail(c.r, "needs two premises");
  const Sequent& minor = ps[0];
  const Sequent& major = ps[1];
  const ItemRef& item = occurrence_at(c.r, major, inst.path);
  FormulaRef cf = item->type;
  FormulaRef sub = minor.succedent;
  FormulaRef principal;
  try {
    principal = Formula::up(inst.k, cf, sub);
  } catch (const SortError& e) {
    fail(c.r, e.what());
  }
  need_focus(c.r, minor, minor_focus(c, sub), "minor");
  need_focus(c.r, major, major_focus(c, cf, *inst.path), "major");
  int sB = sub->sort;
  int k = inst.k;
  std::vector<Configuration> args(item->args.begin(), item->args.begin() + (k - 1));
  Configuration mid;
  try {
    mid = fold(minor.antecedent,
               std::vector<Configuration>(item->args.begin() + (k - 1),
                                          item->args.begin() + (k - 1) + sB));
  } catch (const ArityError& e) {
    fail(c.r, e.what());
  }
  args.push_back(std::move(mid));
  args.insert(args.end(), item->args.begin() + (k - 1) + sB, item->args.end());
  ItemRef newitem = Item::occ(principal, std::move(args));
  return left_sync_conclusion(c, major, *inst.path, newitem, {newitem}, 0);
}

Applied apply_down_l(const RuleCtx& c, const Instantiation& inst, const std::vector<Sequent>& ps) {
  if (ps.size() != 2) fail(c.r, "needs two premises");
  const Sequent& minor = ps[0];
  const Sequent& major = ps[1];
  const ItemRef& item = occurrence_at(c.r, major, inst.path);
  FormulaRef cf = item->type;
  FormulaRef sub = minor.succedent;
  FormulaRef principal;
  try {
    principal = Formula::down(inst.k, sub, cf);
  } catch (const SortError& e) {
    fail(c.r, e.what());
  }
  need_focus(c.r, minor, minor_focus(c, sub), "minor");
  need_focus(c.r, major, major_focus(c, cf, *inst.path), "major");
  int sP = principal->sort;
  int k = inst.k;
  ItemRef newitem =
      Item::occ(principal, std::vector<Configuration>(item->args.begin() + (k - 1),
                                                      item->args.begin() + (k - 1) + sP));
  std::vector<Configuration> fillers(item->args.begin(), item->args.begin() + (k - 1));
  fillers.push_back(Configuration{{newitem}});
  fillers.insert(fillers.end(), item->args.begin() + (k - 1) + sP, item->args.end());
  Configuration run;
  try {
    run = fold(minor.antecedent, fillers);
  } catch (const ArityError& e) {
    fail(c.r, e.what());
  }
  Configuration ant = splice_item(major.antecedent, *inst.path, run.items);
  Focus focus = Focus::none();
  if (c.focused()) {
    auto p = find_item(ant, newitem.get());
    if (!p) fail(c.r, "lost principal occurrence");
    focus = Focus::antecedent(*p);
  }
  return Applied{make_sequent(std::move(ant), major.succedent, focus), newitem};
}

Applied apply_with_l(const RuleCtx& c, const Instantiation& inst, const std::vector<Sequent>& ps,
                     bool first) {
  if (ps.size() != 1) fail(c.r, "needs one premise");
  if (!inst.other) fail(c.r, "missing the absent additive component");
  const Sequent& p = ps[0];
  const ItemRef& item = occurrence_at(c.r, p, inst.path);
  FormulaRef sub = item->type;
  FormulaRef principal;
  try {
    principal = first ? Formula::with(sub, inst.other) : Formula::with(inst.other, sub);
  } catch (const SortError& e) {
    fail(c.r, e.what());
  }
  need_focus(c.r, p, major_focus(c, sub, *inst.path), "only");
  ItemRef newitem = Item::occ(principal, item->args);
  return left_sync_conclusion(c, p, *inst.path, newitem, {newitem}, 0);
}

Applied apply_prod_l(const RuleCtx& c, const Instantiation& inst, const std::vector<Sequent>& ps) {
  if (ps.size() != 1) fail(c.r, "needs one premise");
  const Sequent& p = ps[0];
  const ItemRef& itemA = occurrence_at(c.r, p, inst.path);
  Path pathB = *inst.path;
  pathB.index += 1;
  const ItemRef* itemB;
  try {
    itemB = &item_at(p.antecedent, pathB);
  } catch (const ArityError&) {
    fail(c.r, "no item to the right of the decomposed pair");
  }
  if ((*itemB)->separator) fail(c.r, "second component is a separator");
  FormulaRef principal;
  try {
    principal = Formula::prod(itemA->type, (*itemB)->type);
  } catch (const SortError& e) {
    fail(c.r, e.what());
  }
  std::vector<Configuration> args = itemA->args;
  args.insert(args.end(), (*itemB)->args.begin(), (*itemB)->args.end());
  ItemRef newitem = Item::occ(principal, std::move(args));
  Region cut{inst.path->down, inst.path->index, inst.path->index + 2};
  Configuration ant = splice_region(p.antecedent, cut, {newitem});
  if (c.async_free()) need_focus(c.r, p, Focus::none(), "only");
  Focus focus = thread_async_focus(c.r, p, ant, true);
  return Applied{make_sequent(std::move(ant), p.succedent, focus), newitem};
}

Applied apply_wrap_l(const RuleCtx& c, const Instantiation& inst, const std::vector<Sequent>& ps) {
  if (ps.size() != 1) fail(c.r, "needs one premise");
  const Sequent& p = ps[0];
  const ItemRef& itemA = occurrence_at(c.r, p, inst.path);
  int k = inst.k;
  if (k < 1 || k > static_cast<int>(itemA->args.size())) fail(c.r, "k out of range");
  const Configuration& karg = itemA->args[k - 1];
  if (karg.items.size() != 1 || karg.items[0]->separator)
    fail(c.r, "argument k is not a single occurrence");
  const ItemRef& itemB = karg.items[0];
  FormulaRef principal;
  try {
    principal = Formula::wrap(k, itemA->type, itemB->type);
  } catch (const SortError& e) {
    fail(c.r, e.what());
  }
  std::vector<Configuration> args(itemA->args.begin(), itemA->args.begin() + (k - 1));
  args.insert(args.end(), itemB->args.begin(), itemB->args.end());
  args.insert(args.end(), itemA->args.begin() + k, itemA->args.end());
  ItemRef newitem = Item::occ(principal, std::move(args));
  Configuration ant = splice_item(p.antecedent, *inst.path, {newitem});
  if (c.async_free()) need_focus(c.r, p, Focus::none(), "only");
  Focus focus = thread_async_focus(c.r, p, ant, true);
  return Applied{make_sequent(std::move(ant), p.succedent, focus), newitem};
}

Applied apply_unit_l(const RuleCtx& c, const Instantiation& inst, const std::vector<Sequent>& ps,
                     bool is_i) {
  if (ps.size() != 1) fail(c.r, "needs one premise");
  if (!inst.region) fail(c.r, "missing region");
  const Sequent& p = ps[0];
  const Region& reg = *inst.region;
  ItemRef newitem;
  Configuration ant;
  try {
    if (is_i) {
      if (reg.begin != reg.end) fail(c.r, "insertion gap must be empty");
      newitem = Item::leaf(Formula::unit_i());
      ant = splice_region(p.antecedent, reg, {newitem});
    } else {
      std::vector<ItemRef> run = run_at(p.antecedent, reg);
      newitem = Item::occ(Formula::unit_j(), {Configuration{std::move(run)}});
      ant = splice_region(p.antecedent, reg, {newitem});
    }
  } catch (const ArityError& e) {
    fail(c.r, e.what());
  }
  if (c.async_free()) need_focus(c.r, p, Focus::none(), "only");
  Focus focus = thread_async_focus(c.r, p, ant, true);
  return Applied{make_sequent(std::move(ant), p.succedent, focus), newitem};
}

Applied apply_plus_l(const RuleCtx& c, const Instantiation& inst, const std::vector<Sequent>& ps) {
  if (ps.size() != 2) fail(c.r, "needs two premises");
  const Sequent& p0 = ps[0];
  const Sequent& p1 = ps[1];
  if (!equal(p0.succedent, p1.succedent)) fail(c.r, "premise succedents differ");
  const ItemRef& itemA = occurrence_at(c.r, p0, inst.path);
  const ItemRef& itemB = occurrence_at(c.r, p1, inst.path);
  FormulaRef principal;
  try {
    principal = Formula::plus(itemA->type, itemB->type);
  } catch (const SortError& e) {
    fail(c.r, e.what());
  }
  ItemRef newitem = Item::occ(principal, itemA->args);
  Configuration ant = splice_item(p0.antecedent, *inst.path, {newitem});
  Configuration ant2 = splice_item(p1.antecedent, *inst.path,
                                   {Item::occ(principal, itemB->args)});
  if (!equal(ant, ant2)) fail(c.r, "premise contexts differ");
  if (c.async_free()) {
    need_focus(c.r, p0, Focus::none(), "first");
    need_focus(c.r, p1, Focus::none(), "second");
  } else if (!(p0.focus == p1.focus)) {
    fail(c.r, "premise focus states differ");
  }
  Focus focus = thread_async_focus(c.r, p0, ant, true);
  return Applied{make_sequent(std::move(ant), p0.succedent, focus), newitem};
}

Applied apply_with_r(const RuleCtx& c, const std::vector<Sequent>& ps) {
  if (ps.size() != 2) fail(c.r, "needs two premises");
  const Sequent& p0 = ps[0];
  const Sequent& p1 = ps[1];
  if (!equal(p0.antecedent, p1.antecedent)) fail(c.r, "premise antecedents differ");
  FormulaRef principal;
  try {
    principal = Formula::with(p0.succedent, p1.succedent);
  } catch (const SortError& e) {
    fail(c.r, e.what());
  }
  if (c.async_free()) {
    need_focus(c.r, p0, Focus::none(), "first");
    need_focus(c.r, p1, Focus::none(), "second");
  } else if (!(p0.focus == p1.focus)) {
    fail(c.r, "premise focus states differ");
  }
  Focus focus = thread_async_focus(c.r, p0, p0.antecedent, false);
  return Applied{make_sequent(p0.antecedent, principal, focus), nullptr};
}

Applied apply_over_under_r(const RuleCtx& c, const std::vector<Sequent>& ps, bool over) {
  if (ps.size() != 1) fail(c.r, "needs one premise");
  const Sequent& p = ps[0];
  if (p.antecedent.items.empty()) fail(c.r, "premise antecedent lacks the argument figure");
  int idx = over ? static_cast<int>(p.antecedent.items.size()) - 1 : 0;
  const ItemRef& fig = p.antecedent.items[idx];
  if (fig->separator || !is_figure_item(fig)) fail(c.r, "edge item is not a figure");
  FormulaRef principal;
  try {
    principal = over ? Formula::over(p.succedent, fig->type)
                     : Formula::under(fig->type, p.succedent);
  } catch (const SortError& e) {
    fail(c.r, e.what());
  }
  std::vector<ItemRef> items = p.antecedent.items;
  items.erase(items.begin() + idx);
  Configuration ant{std::move(items)};
  if (c.async_free()) need_focus(c.r, p, Focus::none(), "only");
  if (p.focus.kind == FocusKind::Antecedent) {
    const ItemRef& f = item_at(p.antecedent, p.focus.path);
    if (f.get() == fig.get()) fail(c.r, "focused formula was consumed by the rule");
  }
  Focus focus = thread_async_focus(c.r, p, ant, false);
  return Applied{make_sequent(std::move(ant), principal, focus), nullptr};
}

Applied apply_up_r(const RuleCtx& c, const Instantiation& inst, const std::vector<Sequent>& ps) {
  if (ps.size() != 1) fail(c.r, "needs one premise");
  const Sequent& p = ps[0];
  const ItemRef& fig = occurrence_at(c.r, p, inst.path);
  if (!is_figure_item(fig)) fail(c.r, "item at path is not a figure");
  Configuration ant = splice_item(p.antecedent, *inst.path, {Item::sep()});
  auto seps = separator_paths(ant);
  auto it = std::find(seps.begin(), seps.end(), *inst.path);
  if (it == seps.end() || static_cast<int>(it - seps.begin()) + 1 != inst.k)
    fail(c.r, "figure does not occupy separator position k");
  FormulaRef principal;
  try {
    principal = Formula::up(inst.k, p.succedent, fig->type);
  } catch (const SortError& e) {
    fail(c.r, e.what());
  }
  if (c.async_free()) need_focus(c.r, p, Focus::none(), "only");
  if (p.focus.kind == FocusKind::Antecedent) {
    const ItemRef& f = item_at(p.antecedent, p.focus.path);
    if (f.get() == fig.get()) fail(c.r, "focused formula was consumed by the rule");
  }
  Focus focus = thread_async_focus(c.r, p, ant, false);
  return Applied{make_sequent(std::move(ant), principal, focus), nullptr};
}

Applied apply_down_r(const RuleCtx& c, const Instantiation& inst, const std::vector<Sequent>& ps) {
  if (ps.size() != 1) fail(c.r, "needs one premise");
  const Sequent& p = ps[0];
  if (p.antecedent.items.size() != 1 || p.antecedent.items[0]->separator)
    fail(c.r, "premise antecedent must be a single occurrence");
  const ItemRef& node = p.antecedent.items[0];
  int k = inst.k;
  if (k < 1 || k > static_cast<int>(node->args.size())) fail(c.r, "k out of range");
  for (int j = 0; j < static_cast<int>(node->args.size()); ++j) {
    if (j == k - 1) continue;
    const auto& a = node->args[j];
    if (a.items.size() != 1 || !a.items[0]->separator)
      fail(c.r, "argument " + std::to_string(j + 1) + " must be a lone separator");
  }
  FormulaRef principal;
  try {
    principal = Formula::down(k, node->type, p.succedent);
  } catch (const SortError& e) {
    fail(c.r, e.what());
  }
  Configuration ant = node->args[k - 1];
  if (c.async_free()) need_focus(c.r, p, Focus::none(), "only");
  if (p.focus.kind == FocusKind::Antecedent && p.focus.path.down.empty())
    fail(c.r, "focused formula was consumed by the rule");
  Focus focus = Focus::none();
  if (p.focus.kind == FocusKind::Antecedent) {
    Path q = p.focus.path;
    if (q.down.empty() || q.down[0] != std::make_pair(0, k - 1))
      fail(c.r, "focused formula was consumed by the rule");
    q.down.erase(q.down.begin());
    focus = Focus::antecedent(q);
  } else if (p.focus.kind == FocusKind::Succedent) {
    fail(c.r, "succedent focus cannot survive this rule");
  }
  return Applied{make_sequent(std::move(ant), principal, focus), nullptr};
}

Applied apply_prod_r(const RuleCtx& c, const std::vector<Sequent>& ps) {
  if (ps.size() != 2) fail(c.r, "needs two premises");
  const Sequent& p0 = ps[0];
  const Sequent& p1 = ps[1];
  FormulaRef principal;
  try {
    principal = Formula::prod(p0.succedent, p1.succedent);
  } catch (const SortError& e) {
    fail(c.r, e.what());
  }
  need_focus(c.r, p0, minor_focus(c, p0.succedent), "first");
  need_focus(c.r, p1, minor_focus(c, p1.succedent), "second");
  std::vector<ItemRef> items = p0.antecedent.items;
  items.insert(items.end(), p1.antecedent.items.begin(), p1.antecedent.items.end());
  Focus focus = c.focused() ? Focus::succedent() : Focus::none();
  return Applied{make_sequent(Configuration{std::move(items)}, principal, focus), nullptr};
}

Applied apply_wrap_r(const RuleCtx& c, const Instantiation& inst, const std::vector<Sequent>& ps) {
  if (ps.size() != 2) fail(c.r, "needs two premises");
  const Sequent& p0 = ps[0];
  const Sequent& p1 = ps[1];
  FormulaRef principal;
  try {
    principal = Formula::wrap(inst.k, p0.succedent, p1.succedent);
  } catch (const SortError& e) {
    fail(c.r, e.what());
  }
  need_focus(c.r, p0, minor_focus(c, p0.succedent), "first");
  need_focus(c.r, p1, minor_focus(c, p1.succedent), "second");
  Configuration ant;
  try {
    ant = wrap_at(p0.antecedent, inst.k, p1.antecedent);
  } catch (const ArityError& e) {
    fail(c.r, e.what());
  }
  Focus focus = c.focused() ? Focus::succedent() : Focus::none();
  return Applied{make_sequent(std::move(ant), principal, focus), nullptr};
}

Applied apply_plus_r(const RuleCtx& c, const Instantiation& inst, const std::vector<Sequent>& ps,
                     bool first) {
  if (ps.size() != 1) fail(c.r, "needs one premise");
  if (!inst.other) fail(c.r, "missing the absent additive component");
  const Sequent& p = ps[0];
  FormulaRef principal;
  try {
    principal = first ? Formula::plus(p.succedent, inst.other)
                      : Formula::plus(inst.other, p.succedent);
  } catch (const SortError& e) {
    fail(c.r, e.what());
  }
  need_focus(c.r, p, minor_focus(c, p.succedent), "only");
  Focus focus = c.focused() ? Focus::succedent() : Focus::none();
  return Applied{make_sequent(p.antecedent, principal, focus), nullptr};
}

Applied apply_foc(const RuleCtx& c, const Instantiation& inst, const std::vector<Sequent>& ps) {
  if (c.sys == System::DA) fail(c.r, "foc is not a DA rule");
  if (ps.size() != 1) fail(c.r, "needs one premise");
  const Sequent& p = ps[0];
  if (inst.focus_succedent) {
    if (p.focus.kind != FocusKind::Succedent) fail(c.r, "premise succedent is not focused");
    if (!boxed_succ(p.succedent)) fail(c.r, "only positive output formulas can be focused");
  } else {
    if (!inst.path) fail(c.r, "missing focus path");
    if (!(p.focus == Focus::antecedent(*inst.path)))
      fail(c.r, "premise focus does not match the instantiation");
    const ItemRef& it = item_at(p.antecedent, *inst.path);
    if (it->separator || !boxed_ant(it->type))
      fail(c.r, "only positive input formulas can be focused");
  }
  return Applied{Sequent{p.antecedent, p.succedent, Focus::none()}, nullptr};
}

Applied apply_cut(const RuleCtx& c, const Instantiation& inst, const std::vector<Sequent>& ps) {
  if (c.sys != System::DAf) fail(c.r, "cut rules belong to the weak focused system");
  if (ps.size() != 2) fail(c.r, "needs two premises");
  const Sequent& l = ps[0];
  const Sequent& rt = ps[1];
  const ItemRef& item = occurrence_at(c.r, rt, inst.path);
  if (!equal(item->type, l.succedent))
    fail(c.r, "cut occurrence " + to_text(item->type) + " differs from left succedent " +
                  to_text(l.succedent));
  bool pos = boxed_succ(l.succedent);
  bool occ_focused = rt.focus == Focus::antecedent(*inst.path);
  switch (c.r) {
    case RuleName::PCut1:
      if (!pos) fail(c.r, "cut formula must be synchronous as a succedent");
      if (l.focus.kind != FocusKind::Succedent) fail(c.r, "left premise must focus its succedent");
      if (occ_focused) fail(c.r, "cut occurrence must not be focused");
      break;
    case RuleName::PCut2:
      if (pos) fail(c.r, "cut formula must be asynchronous as a succedent");
      if (l.focus.kind == FocusKind::Succedent) fail(c.r, "left succedent must be unfocused");
      if (!occ_focused) fail(c.r, "cut occurrence must be focused");
      break;
    case RuleName::NCut1:
      if (!pos) fail(c.r, "cut formula must be synchronous as a succedent");
      if (l.focus.kind == FocusKind::Succedent) fail(c.r, "left succedent must be unfocused");
      if (rt.focus.kind != FocusKind::None) fail(c.r, "right premise must be unfocused");
      break;
    case RuleName::NCut2:
      if (pos) fail(c.r, "cut formula must be asynchronous as a succedent");
      if (l.focus.kind != FocusKind::None) fail(c.r, "left premise must be unfocused");
      if (occ_focused) fail(c.r, "cut occurrence must not be focused");
      break;
    default: fail(c.r, "not a cut");
  }
  Configuration spliced;
  try {
    spliced = fold(l.antecedent, item->args);
  } catch (const ArityError& e) {
    fail(c.r, e.what());
  }
  Configuration ant = splice_item(rt.antecedent, *inst.path, spliced.items);
  Focus focus = Focus::none();
  if (c.r == RuleName::PCut1 || c.r == RuleName::NCut2) {
    // focus, if any, comes from the right premise
    if (rt.focus.kind == FocusKind::Succedent) {
      focus = Focus::succedent();
    } else if (rt.focus.kind == FocusKind::Antecedent) {
      focus = relocate_focus(c.r, rt, ant);
    }
  } else {
    // pcut2 / ncut1: focus comes from the left premise, inside the splice
    if (l.focus.kind == FocusKind::Antecedent) {
      Path rel = translate_through_fold(l.antecedent, item->args, l.focus.path);
      focus = Focus::antecedent(prepend_splice(*inst.path, rel));
      const ItemRef& fi = item_at(ant, focus.path);
      const ItemRef& orig = item_at(l.antecedent, l.focus.path);
      if (fi->separator || !equal(fi->type, orig->type)) fail(c.r, "lost left focus in cut");
    }
  }
  return Applied{make_sequent(std::move(ant), rt.succedent, focus), nullptr};
}

}  // namespace

Applied apply_rule(System sys, RuleName r, const Instantiation& inst,
                   const std::vector<Sequent>& premises) {
  RuleCtx c{sys, r};
  switch (r) {
    case RuleName::OverL: return apply_over_under_l(c, inst, premises, true);
    case RuleName::UnderL: return apply_over_under_l(c, inst, premises, false);
    case RuleName::UpL: return apply_up_l(c, inst, premises);
    case RuleName::DownL: return apply_down_l(c, inst, premises);
    case RuleName::ProdL: return apply_prod_l(c, inst, premises);
    case RuleName::WrapL: return apply_wrap_l(c, inst, premises);
    case RuleName::IL: return apply_unit_l(c, inst, premises, true);
    case RuleName::JL: return apply_unit_l(c, inst, premises, false);
    case RuleName::WithL1: return apply_with_l(c, inst, premises, true);
    case RuleName::WithL2: return apply_with_l(c, inst, premises, false);
    case RuleName::PlusL: return apply_plus_l(c, inst, premises);
    case RuleName::OverR: return apply_over_under_r(c, premises, true);
    case RuleName::UnderR: return apply_over_under_r(c, premises, false);
    case RuleName::UpR: return apply_up_r(c, inst, premises);
    case RuleName::DownR: return apply_down_r(c, inst, premises);
    case RuleName::ProdR: return apply_prod_r(c, premises);
    case RuleName::WrapR: return apply_wrap_r(c, inst, premises);
    case RuleName::WithR: return apply_with_r(c, premises);
    case RuleName::PlusR1: return apply_plus_r(c, inst, premises, true);
    case RuleName::PlusR2: return apply_plus_r(c, inst, premises, false);
    case RuleName::Foc: return apply_foc(c, inst, premises);
    case RuleName::PCut1:
    case RuleName::PCut2:
    case RuleName::NCut1:
    case RuleName::NCut2: return apply_cut(c, inst, premises);
    case RuleName::Id:
    case RuleName::IR:
    case RuleName::JR: fail(r, "axioms have no premises");
  }
  fail(r, "unknown rule");
}

void check_axiom(System sys, RuleName r, const Sequent& s) {
  switch (r) {
    case RuleName::Id: {
      if (sys == System::DA) {
        if (s.focus.kind != FocusKind::None) fail(r, "DA sequents carry no focus");
        if (!equal(s.antecedent, figure(s.succedent)))
          fail(r, "antecedent is not the figure of the succedent: " + to_text(s));
        return;
      }
      if (!s.succedent->is_atom()) fail(r, "identity is restricted to atomic types here");
      if (s.antecedent.items.size() != 1 || s.antecedent.items[0]->separator ||
          !equal(s.antecedent.items[0]->type, s.succedent))
        fail(r, "not an identity sequent: " + to_text(s));
      Focus want = s.succedent->bias == Bias::Positive ? Focus::succedent()
                                                       : Focus::antecedent(Path{{}, 0});
      if (!(s.focus == want)) fail(r, "identity focus does not match the atom bias");
      return;
    }
    case RuleName::IR: {
      if (!s.antecedent.items.empty() || s.succedent->conn != Conn::UnitI)
        fail(r, "conclusion must be the empty configuration deriving I");
      Focus want = sys == System::DA ? Focus::none() : Focus::succedent();
      if (!(s.focus == want)) fail(r, "bad focus on IR");
      return;
    }
    case RuleName::JR: {
      if (s.antecedent.items.size() != 1 || !s.antecedent.items[0]->separator ||
          s.succedent->conn != Conn::UnitJ)
        fail(r, "conclusion must be a lone separator deriving J");
      Focus want = sys == System::DA ? Focus::none() : Focus::succedent();
      if (!(s.focus == want)) fail(r, "bad focus on JR");
      return;
    }
    default: fail(r, "not an axiom");
  }
}

namespace {

// Strong focalisation: a focused sequent contains no complex
// asynchronous formula anywhere.
void check_strong(const Sequent& s) {
  if (s.focus.kind == FocusKind::None) return;
  if (complex_async_at(s.succedent, Position::Succedent))
    throw ReplayError("focused sequent contains asynchronous succedent: " + to_text(s));
  for (const auto& o : all_occurrences(s.antecedent))
    if (complex_async_at(o.item->type, Position::Antecedent))
      throw ReplayError("focused sequent contains asynchronous formula " +
                        to_text(o.item->type) + ": " + to_text(s));
}

}  // namespace

DerivRef Derivation::axiom(System sys, RuleName r, Sequent s) {
  check_axiom(sys, r, s);
  if (sys == System::DAFoc) check_strong(s);
  auto d = std::make_shared<Derivation>();
  d->rule = r;
  d->conclusion = std::move(s);
  return d;
}

DerivRef Derivation::make(System sys, RuleName r, Instantiation inst,
                          std::vector<DerivRef> premises) {
  std::vector<Sequent> ps;
  ps.reserve(premises.size());
  for (const auto& p : premises) ps.push_back(p->conclusion);
  Applied a = apply_rule(sys, r, inst, ps);
  if (sys == System::DAFoc) check_strong(a.conclusion);
  auto d = std::make_shared<Derivation>();
  d->rule = r;
  d->inst = std::move(inst);
  d->conclusion = std::move(a.conclusion);
  d->premises = std::move(premises);
  d->principal = std::move(a.principal);
  return d;
}

size_t Derivation::node_count() const {
  size_t n = 1;
  for (const auto& p : premises) n += p->node_count();
  return n;
}

int Derivation::cut_count() const {
  int n = is_cut(rule) ? 1 : 0;
  for (const auto& p : premises) n += p->cut_count();
  return n;
}

namespace {

void replay_rec(System sys, const DerivRef& d) {
  if (d->premises.empty() &&
      (d->rule == RuleName::Id || d->rule == RuleName::IR || d->rule == RuleName::JR)) {
    check_axiom(sys, d->rule, d->conclusion);
    if (sys == System::DAFoc) check_strong(d->conclusion);
    return;
  }
  for (const auto& p : d->premises) replay_rec(sys, p);
  std::vector<Sequent> ps;
  for (const auto& p : d->premises) ps.push_back(p->conclusion);
  Applied a = apply_rule(sys, d->rule, d->inst, ps);
  if (!equal(a.conclusion, d->conclusion))
    throw ReplayError(std::string("invalid inference at ") + rule_name(d->rule) +
                      ": stored conclusion " + to_text(d->conclusion) +
                      " but the rule yields " + to_text(a.conclusion));
  if (sys == System::DAFoc) check_strong(d->conclusion);
}

}  // namespace

Sequent replay(System sys, const DerivRef& d) {
  if (!d) throw ReplayError("empty derivation");
  replay_rec(sys, d);
  return d->conclusion;
}

bool equal(const DerivRef& a, const DerivRef& b) {
  if (a.get() == b.get()) return true;
  if (a->rule != b->rule) return false;
  if (!(a->inst == b->inst)) return false;
  if (!equal(a->conclusion, b->conclusion)) return false;
  if (a->premises.size() != b->premises.size()) return false;
  for (size_t i = 0; i < a->premises.size(); ++i)
    if (!equal(a->premises[i], b->premises[i])) return false;
  return true;
}

size_t hash_of(const DerivRef& d) {
  size_t h = static_cast<size_t>(d->rule) * 0x100000001b3ull;
  auto mix = [&](size_t v) { h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2); };
  mix(hash_of(d->conclusion));
  for (const auto& p : d->premises) mix(hash_of(p));
  return h;
}

DerivRef erase_focus(const DerivRef& d) {
  if (is_cut(d->rule)) throw ReplayError("cannot erase focus from a derivation with cuts");
  if (d->rule == RuleName::Foc) return erase_focus(d->premises[0]);
  if (d->premises.empty()) {
    Sequent s = make_sequent(d->conclusion.antecedent, d->conclusion.succedent, Focus::none());
    return Derivation::axiom(System::DA, d->rule, std::move(s));
  }
  std::vector<DerivRef> ps;
  ps.reserve(d->premises.size());
  for (const auto& p : d->premises) ps.push_back(erase_focus(p));
  return Derivation::make(System::DA, d->rule, d->inst, std::move(ps));
}

}  // namespace disp
