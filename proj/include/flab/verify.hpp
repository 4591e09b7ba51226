#ifndef FLAB_VERIFY_HPP
#define FLAB_VERIFY_HPP

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "flab/sigma.hpp"

namespace flab {

struct CheckEntry {
  std::string id;
  bool pass = false;
  std::string counterexample;  // empty on pass
};

struct Report {
  std::vector<CheckEntry> checks;
  std::string digest;

  bool all_pass() const;
  std::string to_text() const;  // one [PASS]/[FAIL] line per check
  std::string to_json() const;
};

enum class Suite { all, sf, tmain, props, zapt };
Suite suite_from_string(const std::string& s);  // ParamError

// Exhaustive finite-scale verification of one instance. Caches the
// supercondition engine and the computed stage hierarchy.
class Verifier {
 public:
  explicit Verifier(const Instance& inst);
  Verifier(const Verifier&) = delete;
  Verifier& operator=(const Verifier&) = delete;

  const Instance& instance() const { return inst_; }
  const SigmaEngine& engine() const { return engine_; }
  const SigmaResult& result() const { return result_; }

  // Uniform stage bound: 1 + max over generic G of lambda(root[G], root).
  int lambda_bar();

  // Three-way equivalence: a generic filter realizes X iff the fixed point
  // is non-empty iff the stage at the uniform bound is stable and non-empty.
  CheckEntry check_realizability();
  // Same check against an externally supplied fixed point; lets tests
  // fault-inject and watch the harness catch it.
  CheckEntry check_realizability_against(std::span<const ScId> fixed_point);

  // For a filter realizing X: its compatible superconditions form a generic
  // subset of the fixed-point poset and project back onto the filter.
  // XMismatch when root[G] != X.
  CheckEntry check_filter_to_generic(const Filter& g);

  // For a generic subset of the fixed-point poset: its projection is a
  // generic filter realizing X whose canonical assignment is the union of
  // the subset's assignments. NotGeneric when gamma is not generic.
  CheckEntry check_generic_to_filter(std::span<const Supercondition> gamma);

  // The two directions compose to the identity.
  CheckEntry check_realizer_bijection();

  // Full invariant suite.
  Report check_properties();

  Report run_suite(Suite suite);

  // Constructive companion of the realizability check: grows a decreasing
  // chain of superconditions below start, meeting every demand, and returns
  // the induced generic filter with the accumulated assignment.
  // StartNotInSigma when start is outside the fixed point.
  std::pair<Filter, Assignment> build_generic(const Supercondition& start);

  // Generic subsets of the fixed-point poset: upward closures of its
  // minimal elements, in id order.
  std::vector<std::vector<ScId>> generic_subsets();
  std::vector<Supercondition> materialize(std::span<const ScId> ids) const;

 private:
  Instance inst_;
  SigmaEngine engine_;
  SigmaResult result_;
  int lambda_bar_ = -1;
};

// Dual-path family check: for every member (same poset and root, varying
// target) the two evaluation routes for fixed-point non-emptiness must agree
// with brute force. The rank_bound form builds the family from all
// transitive sets of bounded rank.
Report check_family(std::span<const Instance> family);
Report check_family(const Instance& base, int rank_bound = 3);

}  // namespace flab

#endif
