#ifndef FLAB_TESTS_SUPPORT_HPP
#define FLAB_TESTS_SUPPORT_HPP

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "flab/instance.hpp"
#include "flab/sigma.hpp"

namespace flab::testing {

// The two-branch fixture with a chosen target set.
inline Instance t1(const std::string& x_braces) {
  GenParams params;
  params.x = Hf::parse(x_braces);
  return gen(Family::two_branch, params, 0);
}

inline Filter filter_of(const Instance& inst, std::vector<std::string> ids) {
  CondSet mask = 0;
  for (const std::string& id : ids) mask |= cond_bit(inst.poset().index(id));
  return Filter{mask};
}

// Interpretation oracle independent of the library's memoized/masked path.
inline Hf naive_interpret(const NamePool& pool, NameId s, CondSet g) {
  std::vector<Hf> members;
  for (const auto& [child, cond] : pool.entries(s))
    if (cond_in(g, cond)) members.push_back(naive_interpret(pool, child, g));
  return Hf::make(std::move(members));
}

// Builds a supercondition from labels and braces values.
inline Supercondition sc_of(const Instance& inst, const std::string& cond,
                            std::vector<std::pair<std::string, std::string>> map) {
  std::vector<std::pair<NameId, Hf>> pairs;
  for (auto& [label, value] : map) pairs.emplace_back(*inst.lookup_name(label), Hf::parse(value));
  return Supercondition{inst.poset().index(cond), Assignment::from_pairs(std::move(pairs))};
}

inline std::set<std::string> render_all(const Instance& inst,
                                        const std::vector<Supercondition>& scs) {
  std::set<std::string> out;
  for (const Supercondition& sc : scs) out.insert(render_supercondition(inst, sc));
  return out;
}

// All filters of a poset by exhaustive subset enumeration (small posets).
inline std::vector<Filter> all_filters(const Poset& P) {
  std::vector<Filter> out;
  CondSet full = P.all();
  for (CondSet f = 1; f <= full; ++f) {
    if (P.is_filter(f)) out.push_back(Filter{f});
    if (f == full) break;
  }
  return out;
}

}  // namespace flab::testing

#endif
