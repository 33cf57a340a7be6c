#pragma once

#include <optional>
#include <utility>

#include "disp/formula.hpp"

namespace disp {

struct ArityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Item;
using ItemRef = std::shared_ptr<const Item>;

// An antecedent structure: a sequence of separators and type
// occurrences. A sort-n type occurrence carries n argument
// configurations; a sort-0 occurrence carries none.
struct Configuration {
  std::vector<ItemRef> items;

  int sort() const;
  bool empty() const { return items.empty(); }
};

struct Item {
  bool separator = false;
  FormulaRef type;                  // null iff separator
  std::vector<Configuration> args;  // size == type->sort

  static ItemRef sep();
  static ItemRef occ(FormulaRef f, std::vector<Configuration> args);
  static ItemRef leaf(FormulaRef f) { return occ(std::move(f), {}); }
};

// Address of a sequence inside a configuration tree: a chain of
// (item index, argument index) descents. Empty means the top level.
using Descents = std::vector<std::pair<int, int>>;

// Address of one item.
struct Path {
  Descents down;
  int index = 0;

  bool operator==(const Path&) const = default;
  bool operator<(const Path& o) const {
    return std::tie(down, index) < std::tie(o.down, o.index);
  }
};

// A contiguous run of items [begin, end) within one sequence.
struct Region {
  Descents down;
  int begin = 0, end = 0;

  bool operator==(const Region&) const = default;
  bool operator<(const Region& o) const {
    return std::tie(down, begin, end) < std::tie(o.down, o.begin, o.end);
  }
};

Configuration figure(const FormulaRef& f);
Configuration config_of(std::initializer_list<ItemRef> items);

// Replace the successive separators of g by the fillers, in
// left-to-right depth-first order. Requires fillers.size() == g.sort().
Configuration fold(const Configuration& g, const std::vector<Configuration>& fillers);

// Replace the kth separator of d (1-based, depth-first) by g.
Configuration wrap_at(const Configuration& d, int k, const Configuration& g);

bool equal(const Configuration& a, const Configuration& b);
bool equal(const ItemRef& a, const ItemRef& b);
size_t hash_of(const Configuration& c);

const ItemRef& item_at(const Configuration& c, const Path& p);
std::vector<ItemRef> run_at(const Configuration& c, const Region& r);

// Replace the item at p by the given run.
Configuration splice_item(const Configuration& c, const Path& p, const std::vector<ItemRef>& run);
// Replace the region r by the given run.
Configuration splice_region(const Configuration& c, const Region& r, const std::vector<ItemRef>& run);

struct Occurrence {
  Path path;
  ItemRef item;
};

// Every type occurrence satisfying pred, in depth-first order.
std::vector<Occurrence> occurrences(const Configuration& c,
                                    const std::function<bool(const FormulaRef&)>& pred);
std::vector<Occurrence> all_occurrences(const Configuration& c);

// Depth-first paths of every separator item.
std::vector<Path> separator_paths(const Configuration& c);

// All contiguous regions of c, every sequence, including empty ones.
std::vector<Region> all_regions(const Configuration& c);

// First item (depth-first) whose address equals the given pointer.
std::optional<Path> find_item(const Configuration& c, const Item* ptr);

// One way of writing some configuration g as gamma (x) <fillers>:
// gamma is g with each cut region collapsed to a separator, and the
// regions' contents are the fillers.
struct Unfolding {
  Configuration gamma;
  std::vector<Configuration> fillers;
  std::vector<Region> regions;  // in depth-first order, relative to g
};

// Every way of writing g as a fold of a sort-m configuration with m
// fillers. All separators of g end up inside cut regions.
std::vector<Unfolding> unfoldings(const Configuration& g, int m);

enum class FocusKind : uint8_t { None, Succedent, Antecedent };

struct Focus {
  FocusKind kind = FocusKind::None;
  Path path;  // valid iff kind == Antecedent

  static Focus none() { return {}; }
  static Focus succedent() { return Focus{FocusKind::Succedent, {}}; }
  static Focus antecedent(Path p) { return Focus{FocusKind::Antecedent, std::move(p)}; }
  bool operator==(const Focus& o) const {
    if (kind != o.kind) return false;
    return kind != FocusKind::Antecedent || path == o.path;
  }
};

struct Sequent {
  Configuration antecedent;
  FormulaRef succedent;
  Focus focus;
};

// Checked constructor: sorts must agree, a focus path must address a
// type occurrence.
Sequent make_sequent(Configuration ant, FormulaRef succ, Focus focus = Focus::none());

bool equal(const Sequent& a, const Sequent& b);
size_t hash_of(const Sequent& s);
int connective_count(const Sequent& s);

std::string to_text(const Configuration& c);
std::string to_text(const Sequent& s);

Configuration parse_config(const std::string& text, const AtomTable& atoms = {});
Sequent parse_sequent(const std::string& text, const AtomTable& atoms = {});

}  // namespace disp
