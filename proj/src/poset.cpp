#include "flab/poset.hpp"

#include <algorithm>
#include <map>

#include "flab/error.hpp"

namespace flab {

Poset Poset::validate(const std::vector<std::string>& elements,
                      const std::vector<std::pair<std::string, std::string>>& raw_pairs,
                      const std::string& top) {
  if (elements.empty()) throw LabError(Errc::parse, "poset needs at least one condition");
  if (elements.size() > 64) throw LabError(Errc::size_cap, "more than 64 conditions");

  Poset P;
  P.ids_ = elements;
  std::sort(P.ids_.begin(), P.ids_.end());
  if (std::adjacent_find(P.ids_.begin(), P.ids_.end()) != P.ids_.end())
    throw LabError(Errc::parse, "duplicate condition identifier");

  std::map<std::string, int> idx;
  for (int i = 0; i < P.size(); ++i) idx[P.ids_[i]] = i;
  auto at = [&](const std::string& id) {
    auto it = idx.find(id);
    if (it == idx.end()) throw LabError(Errc::unknown_condition, "condition '" + id + "'");
    return it->second;
  };

  int n = P.size();
  P.above_.assign(n, 0);
  for (int i = 0; i < n; ++i) P.above_[i] |= cond_bit(i);
  for (const auto& [a, b] : raw_pairs) P.above_[at(a)] |= cond_bit(at(b));

  // Reflexive-transitive closure via iterated mask union.
  bool changed = true;
  while (changed) {
    changed = false;
    for (int p = 0; p < n; ++p) {
      CondSet acc = P.above_[p];
      CondSet rest = acc;
      while (rest) {
        int q = __builtin_ctzll(rest);
        rest &= rest - 1;
        acc |= P.above_[q];
      }
      if (acc != P.above_[p]) {
        P.above_[p] = acc;
        changed = true;
      }
    }
  }

  for (int p = 0; p < n; ++p)
    for (int q = p + 1; q < n; ++q)
      if (P.leq(p, q) && P.leq(q, p))
        throw LabError(Errc::cycle, "antisymmetry violated between '" + P.ids_[p] + "' and '" +
                                        P.ids_[q] + "'");

  P.top_ = at(top);
  for (int p = 0; p < n; ++p)
    if (!P.leq(p, P.top_))
      throw LabError(Errc::top, "condition '" + P.ids_[p] + "' is not below top");

  P.below_.assign(n, 0);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      if (P.leq(q, p)) P.below_[p] |= cond_bit(q);

  for (int p = 0; p < n; ++p)
    if (P.below_[p] == cond_bit(p)) P.minimal_ |= cond_bit(p);

  return P;
}

int Poset::index(const std::string& id) const {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id) throw LabError(Errc::unknown_condition, "condition '" + id + "'");
  return static_cast<int>(it - ids_.begin());
}

bool Poset::has(const std::string& id) const {
  return std::binary_search(ids_.begin(), ids_.end(), id);
}

bool Poset::is_dense(CondSet d) const {
  for (int p = 0; p < size(); ++p)
    if ((d & below_[p]) == 0) return false;
  return true;
}

std::vector<int> Poset::minimal_elements() const {
  std::vector<int> out;
  for (int p = 0; p < size(); ++p)
    if (cond_in(minimal_, p)) out.push_back(p);
  return out;
}

bool Poset::is_filter(CondSet s) const {
  if (s == 0) return false;
  for (int p = 0; p < size(); ++p) {
    if (!cond_in(s, p)) continue;
    if ((above_[p] & ~s) != 0) return false;  // upward closed
  }
  for (int p = 0; p < size(); ++p) {
    if (!cond_in(s, p)) continue;
    for (int q = 0; q < size(); ++q) {
      if (!cond_in(s, q)) continue;
      if ((below_[p] & below_[q] & s) == 0) return false;  // directed
    }
  }
  return true;
}

std::vector<Filter> Poset::all_generic_filters() const {
  std::vector<Filter> out;
  for (int m : minimal_elements()) out.push_back(upward_closure(m));
  return out;
}

std::vector<CondSet> Poset::all_dense_subsets(int cap) const {
  if (size() > cap)
    throw LabError(Errc::size_cap, "dense-subset enumeration needs |P| <= " + std::to_string(cap));
  std::vector<CondSet> out;
  CondSet full = all();
  for (CondSet d = 0; d <= full; ++d) {
    if (is_dense(d)) out.push_back(d);
    if (d == full) break;
  }
  return out;
}

std::vector<std::pair<int, int>> Poset::cover_pairs() const {
  std::vector<std::pair<int, int>> out;
  for (int p = 0; p < size(); ++p) {
    for (int q = 0; q < size(); ++q) {
      if (p == q || !leq(p, q)) continue;
      bool covered = true;
      for (int r = 0; r < size(); ++r) {
        if (r == p || r == q) continue;
        if (leq(p, r) && leq(r, q)) {
          covered = false;
          break;
        }
      }
      if (covered) out.emplace_back(p, q);
    }
  }
  return out;
}

}  // namespace flab
