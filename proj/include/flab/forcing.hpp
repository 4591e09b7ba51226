#ifndef FLAB_FORCING_HPP
#define FLAB_FORCING_HPP

#include <cstdint>
#include <mutex>
#include <span>
#include <unordered_map>

#include "flab/names.hpp"
#include "flab/poset.hpp"

namespace flab {

enum class Rel { mem, eq };

enum class Decision { forces, forces_negation, undecided };

const char* decision_name(Decision d);

// The atomic forcing relation, computed by mutual recursion on name rank:
//   p forces s in t  iff  {q <= p : some entry (u,r) of t has q <= r and
//                          q forces s = u} is dense below p;
//   p forces s = t   iff  for every entry (u,r) of s and every q <= p with
//                          q <= r, the conditions forcing u in t are dense
//                          below q, and symmetrically.
// Queries are pure and memoized per relation instance; the cache is
// internally synchronized, so concurrent queries see isolated evaluations.
class ForcingRelation {
 public:
  ForcingRelation(const Poset& poset, const NamePool& pool) : poset_(poset), pool_(pool) {}

  bool forces_mem(int p, NameId s, NameId t) const;
  bool forces_eq(int p, NameId s, NameId t) const;

  // No extension of p forces the positive relation.
  bool forces_neg_mem(int p, NameId s, NameId t) const;
  bool forces_neg_eq(int p, NameId s, NameId t) const;

  // forces / forces-negation / undecided; never both (the positive and
  // negative cases are mutually exclusive by construction).
  Decision decide(int p, Rel rel, NameId s, NameId t) const;

  // d-completeness for t: p forces s in t for every s in d, and decides
  // all membership and equality formulas between members of d.
  bool is_d_complete(int p, std::span<const NameId> d, NameId t) const;

  const Poset& poset() const { return poset_; }

 private:
  bool has_eq_witness(int q, NameId s, NameId t) const;  // q is in the mem-witness set
  bool memo_lookup(std::uint64_t key, bool& value) const;
  void memo_store(std::uint64_t key, bool value) const;

  const Poset& poset_;
  const NamePool& pool_;
  mutable std::mutex memo_mu_;
  mutable std::unordered_map<std::uint64_t, bool> memo_;
};

// Independent semantic route: quantification over all generic filters.
// Ships alongside the recursive relation so the two can be checked against
// each other on every instance.
bool sem_forces_mem(const Poset& poset, const NamePool& pool, int p, NameId s, NameId t);
bool sem_forces_eq(const Poset& poset, const NamePool& pool, int p, NameId s, NameId t);
bool sem_forces_neg_mem(const Poset& poset, const NamePool& pool, int p, NameId s, NameId t);
bool sem_forces_neg_eq(const Poset& poset, const NamePool& pool, int p, NameId s, NameId t);

}  // namespace flab

#endif
