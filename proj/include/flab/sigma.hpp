#ifndef FLAB_SIGMA_HPP
#define FLAB_SIGMA_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "flab/forcing.hpp"
#include "flab/instance.hpp"

namespace flab {

// A finite partial map from names to HF sets, kept sorted by name id.
class Assignment {
 public:
  Assignment() = default;
  // Deduplicates; IncompatibleAssignments if one key gets two values.
  static Assignment from_pairs(std::vector<std::pair<NameId, Hf>> pairs);

  bool contains(NameId s) const;
  std::optional<Hf> value(NameId s) const;
  bool range_contains(Hf x) const;
  // this extends weaker as a function (dom superset, values agree).
  bool extends(const Assignment& weaker) const;

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::vector<std::pair<NameId, Hf>>& entries() const { return entries_; }

  bool operator==(const Assignment& o) const { return entries_ == o.entries_; }
  bool operator<(const Assignment& o) const { return entries_ < o.entries_; }

 private:
  std::vector<std::pair<NameId, Hf>> entries_;
};

struct Supercondition {
  int condition = 0;
  Assignment assignment;

  bool operator==(const Supercondition& o) const {
    return condition == o.condition && assignment == o.assignment;
  }
  bool operator<(const Supercondition& o) const {
    if (condition != o.condition) return condition < o.condition;
    return assignment < o.assignment;
  }
};

// <p,a> <= <q,b> iff p <= q in the poset and a extends b as a function.
bool sc_leq(const Poset& poset, const Supercondition& stronger, const Supercondition& weaker);

enum class Strategy { minimal_reduction, exhaustive_dense };

Strategy strategy_from_string(const std::string& s);  // ParamError

using ScId = std::int32_t;

struct SigmaTrace {
  // Stage gamma as sorted sc-id lists; stages strictly decrease and the
  // next application of the step reproduces the last one.
  std::vector<std::vector<ScId>> stages;
  int lambda = 0;  // number of strict decreases
};

struct SigmaResult {
  std::vector<ScId> fixed_point;  // sigma-plus, sorted
  SigmaTrace trace;
};

// Enumerates the supercondition poset of an instance and runs the stage
// hierarchy over it. The poset embeds into the product of P with the finite
// partial maps from potential elements into X, which bounds the enumeration
// by |P| * (|X|+1)^|pe|; SizeCapExceeded when that passes the configured
// cap. All queries are pure and the object is immutable after construction.
class SigmaEngine {
 public:
  explicit SigmaEngine(const Instance& inst);
  SigmaEngine(const SigmaEngine&) = delete;
  SigmaEngine& operator=(const SigmaEngine&) = delete;

  const Instance& instance() const { return inst_; }
  const ForcingRelation& forcing() const { return forcing_; }

  int size() const { return static_cast<int>(scs_.size()); }  // |P+|
  Supercondition sc_value(ScId i) const;
  int sc_condition(ScId i) const { return scs_[i].cond; }
  std::optional<ScId> find(const Supercondition& sc) const;
  bool sc_leq_ids(ScId stronger, ScId weaker) const;
  std::string render(ScId i) const;

  std::vector<ScId> sigma0() const { return sigma0_; }
  // One application of the successor-stage operator: keeps members of
  // current for which every dense set admits a witness below them whose
  // assignment covers all of X and settles every potential element.
  std::vector<ScId> sigma_step(std::span<const ScId> current, Strategy strategy) const;
  SigmaResult sigma_plus(Strategy strategy = Strategy::minimal_reduction) const;

  // First witness (in id order) for the extension property: below `from`,
  // condition in dense, assignment defined on s (unless s is forced out of
  // the root) with x in its range, drawn from `within`. Absent demand parts
  // are skipped.
  std::optional<ScId> extension_witness(std::span<const ScId> within, ScId from, CondSet dense,
                                        std::optional<NameId> s, std::optional<Hf> x) const;

  // The supercondition with the same assignment on another condition, when
  // it exists in P+.
  std::optional<ScId> with_condition(ScId i, int cond) const;

  // Membership tables the verifier reuses.
  bool forces_neg_mem_root(int q, NameId s) const;

 private:
  struct Assig {
    std::uint32_t code = 0;     // nibble per pe slot: 0 absent, 1+elem
    std::uint32_t defmask = 0;  // 0xF nibbles at defined slots
    std::uint16_t dom = 0;      // pe-slot mask
    std::uint16_t ran = 0;      // element mask
  };
  struct Sc {
    int cond;
    std::int32_t assig;
  };

  using Blocks = std::vector<std::uint64_t>;  // bitset over assignment ids

  bool assig_extends(std::int32_t sub, std::int32_t super) const;
  int slot_of(NameId s) const;
  Blocks empty_blocks() const;
  std::vector<Blocks> to_cond_sets(std::span<const ScId> ids) const;
  std::vector<ScId> from_cond_sets(const std::vector<Blocks>& sets) const;

  // Owns a copy; the forcing relation references into it, so the engine is
  // pinned in place.
  Instance inst_;
  ForcingRelation forcing_;
  std::vector<NameId> pe_;
  std::vector<Hf> elems_;
  std::uint16_t full_dom_ = 0;
  std::uint16_t full_ran_ = 0;

  std::vector<Assig> assigs_;
  std::unordered_map<std::uint32_t, std::int32_t> by_code_;
  std::vector<Sc> scs_;                        // cond-major, assignment-id order
  std::vector<std::vector<ScId>> sc_index_;    // [cond][assig] -> ScId or -1
  std::vector<std::uint16_t> negmask_;         // [cond] -> pe slots forced out of root
  std::vector<Blocks> valid_;                  // [cond] -> assignments forming P+
  std::vector<Blocks> witnessy_;               // [cond] -> total witnesses at cond
  std::vector<ScId> sigma0_;
};

// Convenience wrappers over a one-shot engine.
std::vector<Supercondition> enumerate_superconditions(const Instance& inst);
std::vector<Supercondition> sigma0_set(const Instance& inst);
// current must lie inside the supercondition poset (ParamError otherwise).
std::vector<Supercondition> sigma_step_set(const Instance& inst,
                                           std::span<const Supercondition> current,
                                           Strategy strategy = Strategy::minimal_reduction);
std::vector<Supercondition> sigma_plus_set(const Instance& inst,
                                           Strategy strategy = Strategy::minimal_reduction);

// Projection and assignment calculus over arbitrary supercondition sets.
CondSet projection(std::span<const Supercondition> gamma);
std::vector<Assignment> assignments_of(std::span<const Supercondition> gamma);
Assignment union_assignment(std::span<const Supercondition> gamma);  // IncompatibleAssignments

// The canonical assignment of a generic filter: s maps to s[G] whenever
// s[G] lands in root[G]; its range is exactly root[G].
Assignment a_of_g(const Instance& inst, const Filter& g);

// {<p,a> in sigma-plus : p in G, a contained in a_of_g(G)}; XMismatch when
// root[G] differs from X.
std::vector<ScId> g_plus(const SigmaEngine& engine, std::span<const ScId> sigma_plus, const Filter& g);

// Projection of sigma-plus onto the conditions.
CondSet xi(const Instance& inst);

std::string render_supercondition(const Instance& inst, const Supercondition& sc);
// One line per stage: gamma=<n> size=<k> removed=[...].
std::vector<std::string> trace_lines(const SigmaEngine& engine, const SigmaTrace& trace);

}  // namespace flab

#endif
