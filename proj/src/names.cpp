#include "flab/names.hpp"

#include <algorithm>

#include "flab/error.hpp"

namespace flab {

NamePool::NamePool(const Poset& poset) : top_(poset.top()), poset_size_(poset.size()) {
  Node empty;
  empty.check = Hf::empty();  // the empty name is the check-name of {}
  nodes_.push_back(std::move(empty));
  index_[{}] = 0;
}

NameId NamePool::make(std::vector<NameEntry> entries) {
  std::sort(entries.begin(), entries.end());
  entries.erase(std::unique(entries.begin(), entries.end()), entries.end());
  auto it = index_.find(entries);
  if (it != index_.end()) return it->second;

  Node node;
  node.rank = 0;
  bool all_check_at_top = true;
  std::vector<Hf> check_members;
  for (const auto& [child, cond] : entries) {
    if (child >= nodes_.size()) throw LabError(Errc::dangling_name, "unknown constituent name");
    if (cond < 0 || cond >= poset_size_)
      throw LabError(Errc::unknown_condition, "condition index out of range");
    node.rank = std::max(node.rank, nodes_[child].rank + 1);
    node.conds |= nodes_[child].conds | cond_bit(cond);
    if (cond != top_ || !nodes_[child].check)
      all_check_at_top = false;
    else
      check_members.push_back(*nodes_[child].check);
  }
  if (all_check_at_top && !entries.empty()) node.check = Hf::make(std::move(check_members));
  node.entries = entries;
  nodes_.push_back(std::move(node));
  NameId id = static_cast<NameId>(nodes_.size() - 1);
  index_.emplace(std::move(entries), id);
  return id;
}

NameId NamePool::check_name(Hf x) {
  std::vector<NameEntry> entries;
  for (const Hf& m : x.members()) entries.emplace_back(check_name(m), top_);
  return make(std::move(entries));
}

std::vector<NameId> NamePool::potential_elements(NameId t) const {
  std::vector<NameId> out;
  for (const auto& [child, cond] : nodes_[t].entries) out.push_back(child);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Hf NamePool::interpret(NameId s, CondSet g) const {
  // Only the conditions occurring in s matter; normalizing the key keeps
  // the memo small and makes locality definitional.
  g &= nodes_[s].conds;
  auto key = std::make_pair(s, g);
  auto it = interp_memo_.find(key);
  if (it != interp_memo_.end()) return it->second;
  std::vector<Hf> members;
  for (const auto& [child, cond] : nodes_[s].entries)
    if (cond_in(g, cond)) members.push_back(interpret(child, g));
  Hf value = Hf::make(std::move(members));
  interp_memo_.emplace(key, value);
  return value;
}

}  // namespace flab
