#ifndef FLAB_INSTANCE_HPP
#define FLAB_INSTANCE_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "flab/hf.hpp"
#include "flab/names.hpp"
#include "flab/poset.hpp"

namespace flab {

// Size limits keeping brute-force computations tractable. Overridable via
// the FORCING_LAB_CAPS environment variable or a CLI flag, as
// comma-separated key=value with keys p, pe, x, pplus, dense.
struct Caps {
  int max_conditions = 64;
  int max_pe = 8;
  int max_x = 8;
  long long max_pplus = 2'000'000;
  int max_dense_poset = 12;

  // Parses "p=32,pplus=100000" on top of *this; ParamError on bad keys.
  Caps with_overrides(const std::string& overrides) const;
  static Caps from_env();
};

// One forcing instance: a poset P, a root name t interpreting to a
// transitive set under every generic filter, and a target transitive set X.
// Immutable after construction; all validation happens up front.
class Instance {
 public:
  // Builds and validates. The label table maps identifiers to names;
  // the root must be labeled. Throws the specific validation error.
  Instance(Poset poset, NamePool pool, std::vector<std::pair<std::string, NameId>> labels,
           NameId root, Hf x, Caps caps = {});

  const Poset& poset() const { return poset_; }
  const NamePool& pool() const { return pool_; }
  NameId root() const { return root_; }
  Hf x() const { return x_; }
  const Caps& caps() const { return caps_; }

  // Elements of X in canonical order; assignment values range over these.
  const std::vector<Hf>& x_elements() const { return x_elements_; }

  // pe(root), sorted by display label.
  const std::vector<NameId>& pe() const { return pe_; }

  // Display label of a name: the least file label, or "check:{...}" for
  // unlabeled check-names.
  std::string label(NameId s) const;
  std::optional<NameId> lookup_name(const std::string& label) const;
  const std::vector<std::pair<std::string, NameId>>& labels() const { return labels_; }

  // Canonical JSON serialization; loading it back yields an equal digest.
  std::string serialize() const;
  // FNV-1a 64 over the canonical serialization, in hex.
  const std::string& digest() const { return digest_; }

  // Same poset and names with a different target set.
  Instance with_x(Hf new_x) const;

  // Parses and validates the JSON instance format.
  static Instance load(std::istream& in, Caps caps = Caps::from_env());
  static Instance load_file(const std::string& path, Caps caps = Caps::from_env());
  static Instance load_string(const std::string& text, Caps caps = Caps::from_env());

 private:
  Poset poset_;
  NamePool pool_;
  std::vector<std::pair<std::string, NameId>> labels_;
  NameId root_;
  Hf x_;
  Caps caps_;
  std::vector<Hf> x_elements_;
  std::vector<NameId> pe_;
  std::string digest_;
};

// Built-in instance families.
enum class Family { trivial, two_branch, cohen_trunc, product_cohen_trunc };

Family family_from_string(const std::string& s);  // ParamError

struct GenParams {
  int n = 1;
  int m = 1;
  std::optional<Hf> x;  // overrides the family default target
};

// Deterministic per (family, params, seed).
Instance gen(Family family, const GenParams& params, std::uint64_t seed, Caps caps = Caps::from_env());

struct Mutation {
  Instance instance;  // same poset/names, X replaced
  // Proof of difference: every generic filter with its realized value,
  // none of which equals the new X.
  std::vector<std::pair<Filter, Hf>> realized;
};

// Replaces X by a seeded-random transitive set of rank <= rank(X) that no
// generic filter realizes. NoMutationFound when every candidate is realized.
Mutation mutate_x(const Instance& inst, std::uint64_t seed);

}  // namespace flab

#endif
