#ifndef FLAB_NAMES_HPP
#define FLAB_NAMES_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "flab/hf.hpp"
#include "flab/poset.hpp"

namespace flab {

using NameId = std::uint32_t;

// Entry of a name: a constituent name attached to a condition index.
using NameEntry = std::pair<NameId, int>;

// Interns the ramified names of one forcing notion. A name is a finite set
// of (name, condition) pairs; entries are kept sorted and duplicate-free,
// so structural equality is id equality and names are usable as map keys.
// Id 0 is always the empty name.
class NamePool {
 public:
  explicit NamePool(const Poset& poset);

  NameId empty_name() const { return 0; }

  // Canonicalizes and interns. Conditions must be valid poset indices.
  NameId make(std::vector<NameEntry> entries);

  // The canonical name for x: every level attaches the top condition.
  NameId check_name(Hf x);

  const std::vector<NameEntry>& entries(NameId s) const { return nodes_[s].entries; }
  int rank(NameId s) const { return nodes_[s].rank; }

  // First-level constituent names, deduplicated, in ascending id order.
  std::vector<NameId> potential_elements(NameId t) const;

  // Conditions appearing hereditarily in s.
  CondSet conditions(NameId s) const { return nodes_[s].conds; }

  // True iff s is x-check for some x (all conditions are top, hereditarily);
  // check_value is that x.
  bool is_check(NameId s) const { return nodes_[s].check.has_value(); }
  std::optional<Hf> check_value(NameId s) const { return nodes_[s].check; }

  // s[G] = {u[G] : (u,p) in s, p in G}. G may be any condition set; only
  // membership of entry conditions matters.
  Hf interpret(NameId s, CondSet g) const;
  Hf interpret(NameId s, const Filter& g) const { return interpret(s, g.members); }

  std::size_t size() const { return nodes_.size(); }
  int top_condition() const { return top_; }

 private:
  struct Node {
    std::vector<NameEntry> entries;
    int rank = 0;
    CondSet conds = 0;
    std::optional<Hf> check;
  };

  int top_;
  int poset_size_;
  std::vector<Node> nodes_;
  std::map<std::vector<NameEntry>, NameId> index_;
  mutable std::map<std::pair<NameId, CondSet>, Hf> interp_memo_;
};

}  // namespace flab

#endif
