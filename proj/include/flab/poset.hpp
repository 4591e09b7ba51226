#ifndef FLAB_POSET_HPP
#define FLAB_POSET_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace flab {

// Sets of conditions as bitmasks; posets are capped at 64 elements.
using CondSet = std::uint64_t;

inline CondSet cond_bit(int i) { return CondSet{1} << i; }
inline bool cond_in(CondSet s, int i) { return (s >> i) & 1; }

// A filter: upward closed and downward directed set of conditions.
struct Filter {
  CondSet members = 0;
  bool contains(int p) const { return cond_in(members, p); }
  bool operator==(const Filter& o) const { return members == o.members; }
};

// A finite forcing notion: conditions with a partial order (p <= q reads
// "p is stronger") and a designated top. Elements are indexed in
// lexicographic order of their identifiers; all iteration is in index order.
// Immutable after validation.
class Poset {
 public:
  // Computes the reflexive-transitive closure of the raw pairs and checks
  // antisymmetry (CycleError) and maximality of top (TopError).
  static Poset validate(const std::vector<std::string>& elements,
                        const std::vector<std::pair<std::string, std::string>>& raw_pairs,
                        const std::string& top);

  int size() const { return static_cast<int>(ids_.size()); }
  const std::string& id(int i) const { return ids_[i]; }
  // Index of an identifier; UnknownCondition if absent.
  int index(const std::string& id) const;
  bool has(const std::string& id) const;
  int top() const { return top_; }

  bool leq(int p, int q) const { return cond_in(above_[p], q); }
  CondSet above(int p) const { return above_[p]; }  // {q : p <= q}
  CondSet below(int p) const { return below_[p]; }  // {q : q <= p}
  CondSet all() const { return size() == 64 ? ~CondSet{0} : (CondSet{1} << size()) - 1; }
  bool compatible(int p, int q) const { return (below_[p] & below_[q]) != 0; }

  // true iff every condition has an element of d below it.
  bool is_dense(CondSet d) const;

  std::vector<int> minimal_elements() const;
  CondSet minimal_mask() const { return minimal_; }

  Filter upward_closure(int p) const { return Filter{above_[p]}; }
  bool is_filter(CondSet s) const;

  // The filters meeting every dense subset: upward closures of minimal
  // elements, in index order.
  std::vector<Filter> all_generic_filters() const;

  // Every dense subset, for use as a small-scale oracle. SizeCapExceeded
  // when size() > cap.
  std::vector<CondSet> all_dense_subsets(int cap = 12) const;

  // Generating pairs: the covering relation (transitive reduction), in
  // index order. Used for canonical serialization.
  std::vector<std::pair<int, int>> cover_pairs() const;

 private:
  std::vector<std::string> ids_;
  std::vector<CondSet> above_;
  std::vector<CondSet> below_;
  CondSet minimal_ = 0;
  int top_ = -1;
};

}  // namespace flab

#endif
