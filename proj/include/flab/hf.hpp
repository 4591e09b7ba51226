#ifndef FLAB_HF_HPP
#define FLAB_HF_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace flab {

namespace detail {
class HfUniverse;
}

// A hereditarily finite set in canonical form, interned in a process-wide
// universe. Copies are cheap handles; equal values always share one id, so
// structural equality is id equality.
//
// The canonical order is: lower rank first, then lexicographic on the member
// list (members themselves compared canonically). Member lists are stored
// sorted and duplicate-free under this order; the braces rendering of a set
// is therefore unique per extensional value.
class Hf {
 public:
  Hf() : id_(0) {}  // the empty set

  static Hf empty();
  // Builds the canonical set with the given members (duplicates collapse).
  static Hf make(std::vector<Hf> members);
  // Parses a braces value, e.g. "{{},{{}}}". Whitespace is ignored and
  // duplicates are accepted. Throws ParseError on malformed input.
  static Hf parse(std::string_view text);

  const std::vector<Hf>& members() const;
  bool contains(Hf x) const;
  std::size_t size() const { return members().size(); }
  bool is_empty() const { return id_ == 0; }
  int rank() const;

  bool is_transitive() const;
  Hf transitive_closure() const;

  // Canonical braces rendering, e.g. "{{},{{}}}".
  const std::string& str() const;

  bool operator==(const Hf& o) const { return id_ == o.id_; }
  bool operator!=(const Hf& o) const { return id_ != o.id_; }
  // Canonical order (rank, then member list), not id order.
  bool operator<(const Hf& o) const;

  std::uint32_t id() const { return id_; }

 private:
  explicit Hf(std::uint32_t id) : id_(id) {}
  std::uint32_t id_;
  friend class detail::HfUniverse;
};

// All transitive sets of rank <= max_rank with at most max_size elements,
// in canonical order. max_rank must be <= 4; the pool of rank-4 candidates
// already has 2^16 subsets and rank 5 would need 2^65536.
std::vector<Hf> transitive_sets_up_to(int max_rank, std::size_t max_size);

}  // namespace flab

#endif
