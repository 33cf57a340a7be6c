#include "backward.hpp"

#include <algorithm>

namespace disp::detail {

namespace {

bool boxed_succ(const FormulaRef& f) {
  return polarity_of(f, Position::Succedent) == Polarity::PosOutput;
}
bool boxed_ant(const FormulaRef& f) {
  return polarity_of(f, Position::Antecedent) == Polarity::PosInput;
}

Focus sub_succ_focus(bool focused, const FormulaRef& f) {
  return focused && boxed_succ(f) ? Focus::succedent() : Focus::none();
}

Focus sub_ant_focus(bool focused, const FormulaRef& f, const Path& p) {
  return focused && boxed_ant(f) ? Focus::antecedent(p) : Focus::none();
}

const FormulaRef& marker_atom() {
  static const FormulaRef m = Formula::mk_atom("__hole", 0, Bias::Negative);
  return m;
}

}  // namespace

bool dfs_precedes(const Descents& a_down, int a_index, const Descents& b_down, int b_index) {
  size_t n = std::min(a_down.size(), b_down.size());
  for (size_t t = 0; t < n; ++t) {
    if (a_down[t] != b_down[t]) return a_down[t] < b_down[t];
  }
  int ai = a_down.size() == n ? a_index : a_down[n].first;
  int bi = b_down.size() == n ? b_index : b_down[n].first;
  if (ai != bi) return ai < bi;
  // same position at the divergence level: the shallower one is the
  // item itself (or a region starting at it) and comes first
  return a_down.size() < b_down.size();
}

std::vector<Expansion> axiom_expansions(const Sequent& s, bool focused) {
  std::vector<Expansion> out;
  const auto& succ = s.succedent;
  if (succ->is_atom() && s.antecedent.items.size() == 1 && !s.antecedent.items[0]->separator &&
      equal(s.antecedent.items[0]->type, succ)) {
    bool ok;
    if (!focused) {
      ok = s.focus.kind == FocusKind::None;
    } else if (succ->bias == Bias::Positive) {
      ok = s.focus.kind == FocusKind::Succedent;
    } else {
      ok = s.focus == Focus::antecedent(Path{{}, 0});
    }
    if (ok) out.push_back(Expansion{RuleName::Id, {}, {}});
  }
  Focus want = focused ? Focus::succedent() : Focus::none();
  if (succ->conn == Conn::UnitI && s.antecedent.items.empty() && s.focus == want)
    out.push_back(Expansion{RuleName::IR, {}, {}});
  if (succ->conn == Conn::UnitJ && s.antecedent.items.size() == 1 &&
      s.antecedent.items[0]->separator && s.focus == want)
    out.push_back(Expansion{RuleName::JR, {}, {}});
  return out;
}

std::vector<Expansion> right_expansions(const Sequent& s, bool focused) {
  std::vector<Expansion> out;
  const auto& succ = s.succedent;
  const auto& ant = s.antecedent;
  switch (succ->conn) {
    case Conn::Over: {
      std::vector<ItemRef> items = ant.items;
      auto fig = figure(succ->right);
      items.insert(items.end(), fig.items.begin(), fig.items.end());
      Sequent p = make_sequent(Configuration{std::move(items)}, succ->left, Focus::none());
      out.push_back(Expansion{RuleName::OverR, {}, {std::move(p)}});
      break;
    }
    case Conn::Under: {
      auto fig = figure(succ->left);
      std::vector<ItemRef> items = fig.items;
      items.insert(items.end(), ant.items.begin(), ant.items.end());
      Sequent p = make_sequent(Configuration{std::move(items)}, succ->right, Focus::none());
      out.push_back(Expansion{RuleName::UnderR, {}, {std::move(p)}});
      break;
    }
    case Conn::Up: {
      auto seps = separator_paths(ant);
      int k = succ->k;
      if (k >= 1 && k <= static_cast<int>(seps.size())) {
        Path at = seps[k - 1];
        Configuration pant = splice_item(ant, at, figure(succ->right).items);
        Instantiation inst;
        inst.path = at;
        inst.k = k;
        Sequent p = make_sequent(std::move(pant), succ->left, Focus::none());
        out.push_back(Expansion{RuleName::UpR, std::move(inst), {std::move(p)}});
      }
      break;
    }
    case Conn::Down: {
      int k = succ->k;
      const auto& af = succ->left;
      std::vector<Configuration> args(af->sort, Configuration{{Item::sep()}});
      args[k - 1] = ant;
      Instantiation inst;
      inst.k = k;
      Sequent p = make_sequent(Configuration{{Item::occ(af, std::move(args))}}, succ->right,
                               Focus::none());
      out.push_back(Expansion{RuleName::DownR, std::move(inst), {std::move(p)}});
      break;
    }
    case Conn::Prod: {
      int n = static_cast<int>(ant.items.size());
      for (int j = 0; j <= n; ++j) {
        Configuration g1{std::vector<ItemRef>(ant.items.begin(), ant.items.begin() + j)};
        Configuration g2{std::vector<ItemRef>(ant.items.begin() + j, ant.items.end())};
        if (g1.sort() != succ->left->sort || g2.sort() != succ->right->sort) continue;
        Sequent p1 = make_sequent(std::move(g1), succ->left, sub_succ_focus(focused, succ->left));
        Sequent p2 =
            make_sequent(std::move(g2), succ->right, sub_succ_focus(focused, succ->right));
        out.push_back(Expansion{RuleName::ProdR, {}, {std::move(p1), std::move(p2)}});
      }
      break;
    }
    case Conn::Wrap: {
      int k = succ->k;
      for (const auto& reg : all_regions(ant)) {
        Configuration g2{run_at(ant, reg)};
        if (g2.sort() != succ->right->sort) continue;
        Configuration g1 = splice_region(ant, reg, {Item::sep()});
        if (g1.sort() != succ->left->sort) continue;
        auto seps = separator_paths(g1);
        Path at{reg.down, reg.begin};
        auto it = std::find(seps.begin(), seps.end(), at);
        if (it == seps.end() || static_cast<int>(it - seps.begin()) + 1 != k) continue;
        Instantiation inst;
        inst.k = k;
        Sequent p1 = make_sequent(std::move(g1), succ->left, sub_succ_focus(focused, succ->left));
        Sequent p2 =
            make_sequent(std::move(g2), succ->right, sub_succ_focus(focused, succ->right));
        out.push_back(Expansion{RuleName::WrapR, std::move(inst), {std::move(p1), std::move(p2)}});
      }
      break;
    }
    case Conn::With: {
      Sequent p1 = make_sequent(ant, succ->left, Focus::none());
      Sequent p2 = make_sequent(ant, succ->right, Focus::none());
      out.push_back(Expansion{RuleName::WithR, {}, {std::move(p1), std::move(p2)}});
      break;
    }
    case Conn::Plus: {
      Instantiation i1;
      i1.other = succ->right;
      Sequent p1 = make_sequent(ant, succ->left, sub_succ_focus(focused, succ->left));
      out.push_back(Expansion{RuleName::PlusR1, std::move(i1), {std::move(p1)}});
      Instantiation i2;
      i2.other = succ->left;
      Sequent p2 = make_sequent(ant, succ->right, sub_succ_focus(focused, succ->right));
      out.push_back(Expansion{RuleName::PlusR2, std::move(i2), {std::move(p2)}});
      break;
    }
    default: break;
  }
  return out;
}

namespace {

// Runs of items adjacent to `path` on the given side, shortest first.
std::vector<int> run_lengths(const Configuration& ant, const Path& path, bool after) {
  const Configuration* seq = &ant;
  for (auto [i, a] : path.down) seq = &seq->items[i]->args[a];
  int n = static_cast<int>(seq->items.size());
  int limit = after ? n - path.index - 1 : path.index;
  std::vector<int> out;
  for (int r = 0; r <= limit; ++r) out.push_back(r);
  return out;
}

void over_under_expansions(const Sequent& s, const Path& path, const ItemRef& item, bool focused,
                           bool over, std::vector<Expansion>& out) {
  const auto& t = item->type;  // C/B or A\C
  const FormulaRef& sub = over ? t->right : t->left;   // B or A
  const FormulaRef& body = over ? t->left : t->right;  // C
  for (int r : run_lengths(s.antecedent, path, over)) {
    Region reg = over ? Region{path.down, path.index + 1, path.index + 1 + r}
                      : Region{path.down, path.index - r, path.index};
    Configuration run{run_at(s.antecedent, reg)};
    for (auto& u : unfoldings(run, sub->sort)) {
      std::vector<Configuration> args;
      if (over) {
        args = item->args;
        args.insert(args.end(), u.fillers.begin(), u.fillers.end());
      } else {
        args = u.fillers;
        args.insert(args.end(), item->args.begin(), item->args.end());
      }
      ItemRef newitem = Item::occ(body, std::move(args));
      Region whole = over ? Region{path.down, path.index, path.index + 1 + r}
                          : Region{path.down, path.index - r, path.index + 1};
      Configuration ant2 = splice_region(s.antecedent, whole, {newitem});
      Path bodypath{path.down, whole.begin};
      Sequent p1 = make_sequent(u.gamma, sub, sub_succ_focus(focused, sub));
      Sequent p2 = make_sequent(std::move(ant2), s.succedent,
                                sub_ant_focus(focused, body, bodypath));
      Instantiation inst;
      inst.path = bodypath;
      out.push_back(Expansion{over ? RuleName::OverL : RuleName::UnderL, std::move(inst),
                              {std::move(p1), std::move(p2)}});
    }
  }
}

void up_expansions(const Sequent& s, const Path& path, const ItemRef& item, bool focused,
                   std::vector<Expansion>& out) {
  const auto& t = item->type;  // C up_k B
  int k = t->k;
  const FormulaRef& sub = t->right;
  const FormulaRef& body = t->left;
  const Configuration& karg = item->args[k - 1];
  for (auto& u : unfoldings(karg, sub->sort)) {
    std::vector<Configuration> args(item->args.begin(), item->args.begin() + (k - 1));
    args.insert(args.end(), u.fillers.begin(), u.fillers.end());
    args.insert(args.end(), item->args.begin() + k, item->args.end());
    ItemRef newitem = Item::occ(body, std::move(args));
    Configuration ant2 = splice_item(s.antecedent, path, {newitem});
    Sequent p1 = make_sequent(u.gamma, sub, sub_succ_focus(focused, sub));
    Sequent p2 = make_sequent(std::move(ant2), s.succedent, sub_ant_focus(focused, body, path));
    Instantiation inst;
    inst.path = path;
    inst.k = k;
    out.push_back(Expansion{RuleName::UpL, std::move(inst), {std::move(p1), std::move(p2)}});
  }
}

void down_expansions(const Sequent& s, const Path& path, const ItemRef& item, bool focused,
                     std::vector<Expansion>& out) {
  const auto& t = item->type;  // A dn_k C
  int k0 = t->k;
  const FormulaRef& sub = t->left;   // A
  const FormulaRef& body = t->right; // C
  // Enumerate host runs in every ancestor sequence of the occurrence.
  for (size_t level = 0; level <= path.down.size(); ++level) {
    Descents q(path.down.begin(), path.down.begin() + level);
    const Configuration* seq = &s.antecedent;
    for (auto [i, a] : q) seq = &seq->items[i]->args[a];
    int anchor = level == path.down.size() ? path.index : path.down[level].first;
    int n = static_cast<int>(seq->items.size());
    for (int b = 0; b <= anchor; ++b) {
      for (int e = anchor + 1; e <= n; ++e) {
        Region host{q, b, e};
        Configuration run{run_at(s.antecedent, host)};
        // occurrence position relative to the run
        Path rel;
        if (level == path.down.size()) {
          rel = Path{{}, path.index - b};
        } else {
          rel.down.emplace_back(path.down[level].first - b, path.down[level].second);
          rel.down.insert(rel.down.end(), path.down.begin() + level + 1, path.down.end());
          rel.index = path.index;
        }
        Configuration marked = splice_item(run, rel, {Item::leaf(marker_atom())});
        for (auto& u : unfoldings(marked, sub->sort - 1)) {
          auto marks = occurrences(u.gamma, [&](const FormulaRef& f) {
            return f->is_atom() && f->atom == marker_atom()->atom;
          });
          if (marks.size() != 1) continue;  // the marker fell inside a filler
          Configuration gamma = splice_item(u.gamma, marks[0].path, {Item::sep()});
          auto seps = separator_paths(gamma);
          auto it = std::find(seps.begin(), seps.end(), marks[0].path);
          if (it == seps.end() || static_cast<int>(it - seps.begin()) + 1 != k0) continue;
          // fillers before/after the marker, in depth-first order
          std::vector<Configuration> args;
          size_t before = 0;
          for (size_t j = 0; j < u.regions.size(); ++j) {
            if (dfs_precedes(u.regions[j].down, u.regions[j].begin, rel.down, rel.index))
              ++before;
          }
          args.assign(u.fillers.begin(), u.fillers.begin() + before);
          args.insert(args.end(), item->args.begin(), item->args.end());
          args.insert(args.end(), u.fillers.begin() + before, u.fillers.end());
          ItemRef newitem = Item::occ(body, std::move(args));
          Configuration ant2 = splice_region(s.antecedent, host, {newitem});
          Path bodypath{q, b};
          Sequent p1 = make_sequent(std::move(gamma), sub, sub_succ_focus(focused, sub));
          Sequent p2 = make_sequent(std::move(ant2), s.succedent,
                                    sub_ant_focus(focused, body, bodypath));
          Instantiation inst;
          inst.path = bodypath;
          inst.k = k0;
          out.push_back(
              Expansion{RuleName::DownL, std::move(inst), {std::move(p1), std::move(p2)}});
        }
      }
    }
  }
}

}  // namespace

std::vector<Expansion> left_expansions_at(const Sequent& s, const Path& path, bool focused) {
  std::vector<Expansion> out;
  const ItemRef& item = item_at(s.antecedent, path);
  if (item->separator) return out;
  const auto& t = item->type;
  switch (t->conn) {
    case Conn::Over:
      over_under_expansions(s, path, item, focused, true, out);
      break;
    case Conn::Under:
      over_under_expansions(s, path, item, focused, false, out);
      break;
    case Conn::Up:
      up_expansions(s, path, item, focused, out);
      break;
    case Conn::Down:
      down_expansions(s, path, item, focused, out);
      break;
    case Conn::Prod: {
      int sa = t->left->sort;
      ItemRef ia = Item::occ(t->left, std::vector<Configuration>(item->args.begin(),
                                                                 item->args.begin() + sa));
      ItemRef ib = Item::occ(t->right, std::vector<Configuration>(item->args.begin() + sa,
                                                                  item->args.end()));
      Configuration ant = splice_item(s.antecedent, path, {ia, ib});
      Instantiation inst;
      inst.path = path;
      Sequent p = make_sequent(std::move(ant), s.succedent, Focus::none());
      out.push_back(Expansion{RuleName::ProdL, std::move(inst), {std::move(p)}});
      break;
    }
    case Conn::Wrap: {
      int k = t->k;
      int sb = t->right->sort;
      ItemRef ib = Item::occ(t->right,
                             std::vector<Configuration>(item->args.begin() + (k - 1),
                                                        item->args.begin() + (k - 1) + sb));
      std::vector<Configuration> args(item->args.begin(), item->args.begin() + (k - 1));
      args.push_back(Configuration{{ib}});
      args.insert(args.end(), item->args.begin() + (k - 1) + sb, item->args.end());
      ItemRef ia = Item::occ(t->left, std::move(args));
      Configuration ant = splice_item(s.antecedent, path, {ia});
      Instantiation inst;
      inst.path = path;
      inst.k = k;
      Sequent p = make_sequent(std::move(ant), s.succedent, Focus::none());
      out.push_back(Expansion{RuleName::WrapL, std::move(inst), {std::move(p)}});
      break;
    }
    case Conn::UnitI: {
      Configuration ant = splice_item(s.antecedent, path, {});
      Instantiation inst;
      inst.region = Region{path.down, path.index, path.index};
      Sequent p = make_sequent(std::move(ant), s.succedent, Focus::none());
      out.push_back(Expansion{RuleName::IL, std::move(inst), {std::move(p)}});
      break;
    }
    case Conn::UnitJ: {
      const Configuration& arg = item->args[0];
      Configuration ant = splice_item(s.antecedent, path, arg.items);
      Instantiation inst;
      inst.region = Region{path.down, path.index,
                           path.index + static_cast<int>(arg.items.size())};
      Sequent p = make_sequent(std::move(ant), s.succedent, Focus::none());
      out.push_back(Expansion{RuleName::JL, std::move(inst), {std::move(p)}});
      break;
    }
    case Conn::With: {
      {
        ItemRef ia = Item::occ(t->left, item->args);
        Configuration ant = splice_item(s.antecedent, path, {ia});
        Instantiation inst;
        inst.path = path;
        inst.other = t->right;
        Sequent p = make_sequent(std::move(ant), s.succedent,
                                 sub_ant_focus(focused, t->left, path));
        out.push_back(Expansion{RuleName::WithL1, std::move(inst), {std::move(p)}});
      }
      {
        ItemRef ib = Item::occ(t->right, item->args);
        Configuration ant = splice_item(s.antecedent, path, {ib});
        Instantiation inst;
        inst.path = path;
        inst.other = t->left;
        Sequent p = make_sequent(std::move(ant), s.succedent,
                                 sub_ant_focus(focused, t->right, path));
        out.push_back(Expansion{RuleName::WithL2, std::move(inst), {std::move(p)}});
      }
      break;
    }
    case Conn::Plus: {
      ItemRef ia = Item::occ(t->left, item->args);
      ItemRef ib = Item::occ(t->right, item->args);
      Configuration ant1 = splice_item(s.antecedent, path, {ia});
      Configuration ant2 = splice_item(s.antecedent, path, {ib});
      Instantiation inst;
      inst.path = path;
      Sequent p1 = make_sequent(std::move(ant1), s.succedent, Focus::none());
      Sequent p2 = make_sequent(std::move(ant2), s.succedent, Focus::none());
      out.push_back(Expansion{RuleName::PlusL, std::move(inst), {std::move(p1), std::move(p2)}});
      break;
    }
    case Conn::Atom: break;
  }
  return out;
}

}  // namespace disp::detail
