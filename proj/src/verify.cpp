#include "flab/verify.hpp"

#include <algorithm>

#include "flab/error.hpp"
#include "json.hpp"

namespace flab {

namespace {

std::string filter_str(const Poset& P, const Filter& g) {
  std::string out = "{";
  bool first = true;
  for (int p = 0; p < P.size(); ++p) {
    if (!g.contains(p)) continue;
    if (!first) out += ',';
    out += P.id(p);
    first = false;
  }
  return out + "}";
}

std::string condset_str(const Poset& P, CondSet s) { return filter_str(P, Filter{s}); }

bool contains_id(std::span<const ScId> sorted, ScId id) {
  return std::binary_search(sorted.begin(), sorted.end(), id);
}

}  // namespace

bool Report::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckEntry& c) { return c.pass; });
}

std::string Report::to_text() const {
  std::string out;
  for (const CheckEntry& c : checks) {
    out += c.pass ? "[PASS] " : "[FAIL] ";
    out += c.id;
    if (!c.pass && !c.counterexample.empty()) out += "  counterexample: " + c.counterexample;
    out += '\n';
  }
  return out;
}

std::string Report::to_json() const {
  nlohmann::ordered_json j;
  j["checks"] = nlohmann::ordered_json::array();
  for (const CheckEntry& c : checks) {
    nlohmann::ordered_json jc;
    jc["id"] = c.id;
    jc["status"] = c.pass ? "pass" : "fail";
    jc["counterexample"] = c.counterexample;
    j["checks"].push_back(std::move(jc));
  }
  j["digest"] = digest;
  return j.dump();
}

Suite suite_from_string(const std::string& s) {
  if (s == "all") return Suite::all;
  if (s == "sf") return Suite::sf;
  if (s == "tmain") return Suite::tmain;
  if (s == "props") return Suite::props;
  if (s == "zapt") return Suite::zapt;
  throw LabError(Errc::param, "unknown suite '" + s + "'");
}

Verifier::Verifier(const Instance& inst)
    : inst_(inst), engine_(inst_), result_(engine_.sigma_plus(Strategy::minimal_reduction)) {}

int Verifier::lambda_bar() {
  if (lambda_bar_ >= 0) return lambda_bar_;
  const Instance& inst = inst_;
  int worst = 0;
  for (const Filter& g : inst.poset().all_generic_filters()) {
    Hf realized = inst.pool().interpret(inst.root(), g);
    Caps caps = inst.caps();
    caps.max_x = std::max(caps.max_x, static_cast<int>(realized.size()));
    SigmaEngine engine(inst.with_x(realized));
    worst = std::max(worst, engine.sigma_plus().trace.lambda);
  }
  lambda_bar_ = worst + 1;
  return lambda_bar_;
}

CheckEntry Verifier::check_realizability() {
  return check_realizability_against(result_.fixed_point);
}

CheckEntry Verifier::check_realizability_against(std::span<const ScId> fixed_point) {
  const Instance& inst = inst_;
  CheckEntry entry{"realizability", true, ""};

  std::optional<Filter> witness;
  for (const Filter& g : inst.poset().all_generic_filters())
    if (inst.pool().interpret(inst.root(), g) == inst.x()) {
      witness = g;
      break;
    }

  bool realized = witness.has_value();
  bool nonempty = !fixed_point.empty();

  // Stage at the uniform bound: the chain is constant past its own length.
  int bar = lambda_bar();
  auto stage_at = [&](int gamma) -> const std::vector<ScId>& {
    int i = std::min<int>(gamma, static_cast<int>(result_.trace.stages.size()) - 1);
    return result_.trace.stages[i];
  };
  bool stable_nonempty = stage_at(bar) == stage_at(bar + 1) && !stage_at(bar).empty();

  if (realized != nonempty || nonempty != stable_nonempty) {
    entry.pass = false;
    entry.counterexample = "realized=" + std::string(realized ? "yes" : "no") +
                           (witness ? " by G=" + filter_str(inst.poset(), *witness) : "") +
                           " fixed-point-size=" + std::to_string(fixed_point.size()) +
                           " bounded-stage-stable-nonempty=" + (stable_nonempty ? "yes" : "no") +
                           " (bound " + std::to_string(bar) + ")";
  }
  return entry;
}

namespace {

// Minimal elements of a supercondition subset under its induced order.
std::vector<ScId> sigma_minimals(const SigmaEngine& engine, std::span<const ScId> set) {
  std::vector<ScId> out;
  for (ScId i : set) {
    bool minimal = true;
    for (ScId j : set) {
      if (j != i && engine.sc_leq_ids(j, i)) {
        minimal = false;
        break;
      }
    }
    if (minimal) out.push_back(i);
  }
  return out;
}

std::vector<ScId> up_within(const SigmaEngine& engine, std::span<const ScId> set, ScId m) {
  std::vector<ScId> out;
  for (ScId i : set)
    if (engine.sc_leq_ids(m, i)) out.push_back(i);
  return out;
}

struct GenericityVerdict {
  bool generic = true;
  std::string why;
};

// A generic subset of the fixed-point poset: a filter meeting every dense
// subset. Meeting every dense subset of a finite poset is equivalent to
// containing a minimal element; for small fixed points the dense-subset
// quantifier is also run literally as a cross-check.
GenericityVerdict genericity_in(const SigmaEngine& engine, std::span<const ScId> fixed,
                                std::span<const ScId> gamma) {
  GenericityVerdict v;
  for (ScId i : gamma)
    if (!contains_id(fixed, i)) {
      v.generic = false;
      v.why = "member " + engine.render(i) + " outside the fixed point";
      return v;
    }
  for (ScId i : gamma)
    for (ScId j : fixed)
      if (engine.sc_leq_ids(i, j) && !contains_id(gamma, j)) {
        v.generic = false;
        v.why = "not upward closed at " + engine.render(j);
        return v;
      }
  for (ScId i : gamma)
    for (ScId j : gamma) {
      bool met = false;
      for (ScId k : gamma)
        if (engine.sc_leq_ids(k, i) && engine.sc_leq_ids(k, j)) {
          met = true;
          break;
        }
      if (!met) {
        v.generic = false;
        v.why = "not directed at " + engine.render(i) + " and " + engine.render(j);
        return v;
      }
    }
  std::vector<ScId> minimals = sigma_minimals(engine, fixed);
  bool hits_minimal = std::any_of(minimals.begin(), minimals.end(),
                                  [&](ScId m) { return contains_id(gamma, m); });
  if (!hits_minimal) {
    v.generic = false;
    v.why = "meets no minimal element of the fixed point";
    return v;
  }
  if (fixed.size() <= 14) {
    // Literal dense-subset quantifier over the fixed-point poset.
    std::size_t n = fixed.size();
    for (std::size_t bits = 0; bits < (std::size_t{1} << n); ++bits) {
      bool dense = true;
      for (std::size_t i = 0; dense && i < n; ++i) {
        bool below = false;
        for (std::size_t j = 0; !below && j < n; ++j)
          if ((bits & (std::size_t{1} << j)) && engine.sc_leq_ids(fixed[j], fixed[i])) below = true;
        dense = below;
      }
      if (!dense) continue;
      bool met = false;
      for (std::size_t j = 0; !met && j < n; ++j)
        if ((bits & (std::size_t{1} << j)) && contains_id(gamma, fixed[j])) met = true;
      if (!met) {
        v.generic = false;
        v.why = "misses a dense subset of the fixed point";
        return v;
      }
    }
  }
  return v;
}

}  // namespace

CheckEntry Verifier::check_filter_to_generic(const Filter& g) {
  const Instance& inst = inst_;
  Hf realized = inst.pool().interpret(inst.root(), g);
  if (realized != inst.x())
    throw LabError(Errc::x_mismatch, "filter realizes " + realized.str() + ", not " +
                                         inst.x().str());
  CheckEntry entry{"filter-to-generic:" + filter_str(inst.poset(), g), true, ""};

  std::vector<ScId> gamma = g_plus(engine_, result_.fixed_point, g);
  GenericityVerdict v = genericity_in(engine_, result_.fixed_point, gamma);
  if (!v.generic) {
    entry.pass = false;
    entry.counterexample = "compatible set not generic: " + v.why;
    return entry;
  }
  CondSet proj = 0;
  for (ScId i : gamma) proj |= cond_bit(engine_.sc_condition(i));
  if (proj != g.members) {
    entry.pass = false;
    entry.counterexample = "projection " + condset_str(inst.poset(), proj) + " differs from " +
                           filter_str(inst.poset(), g);
  }
  return entry;
}

CheckEntry Verifier::check_generic_to_filter(std::span<const Supercondition> gamma) {
  const Instance& inst = inst_;
  std::vector<ScId> ids;
  for (const Supercondition& sc : gamma) {
    auto id = engine_.find(sc);
    if (!id || !contains_id(result_.fixed_point, *id))
      throw LabError(Errc::not_generic, "supercondition outside the fixed point");
    ids.push_back(*id);
  }
  std::sort(ids.begin(), ids.end());
  GenericityVerdict v = genericity_in(engine_, result_.fixed_point, ids);
  if (!v.generic) throw LabError(Errc::not_generic, v.why);

  std::vector<ScId> minimals = sigma_minimals(engine_, ids);
  std::string tag = minimals.empty() ? "{}" : engine_.render(minimals.front());
  CheckEntry entry{"generic-to-filter:" + tag, true, ""};

  CondSet proj = 0;
  for (ScId i : ids) proj |= cond_bit(engine_.sc_condition(i));
  Filter h{proj};

  const auto generics = inst.poset().all_generic_filters();
  if (std::find(generics.begin(), generics.end(), h) == generics.end()) {
    entry.pass = false;
    entry.counterexample = "projection " + condset_str(inst.poset(), proj) + " is not generic";
    return entry;
  }
  Hf realized = inst.pool().interpret(inst.root(), h);
  if (realized != inst.x()) {
    entry.pass = false;
    entry.counterexample = "projection realizes " + realized.str() + ", not " + inst.x().str();
    return entry;
  }
  std::vector<Supercondition> values;
  for (ScId i : ids) values.push_back(engine_.sc_value(i));
  Assignment joint = union_assignment(values);
  if (!(joint == a_of_g(inst, h))) {
    entry.pass = false;
    entry.counterexample = "union of assignments differs from the canonical assignment of " +
                           filter_str(inst.poset(), h);
  }
  return entry;
}

std::vector<std::vector<ScId>> Verifier::generic_subsets() {
  std::vector<std::vector<ScId>> out;
  for (ScId m : sigma_minimals(engine_, result_.fixed_point))
    out.push_back(up_within(engine_, result_.fixed_point, m));
  return out;
}

std::vector<Supercondition> Verifier::materialize(std::span<const ScId> ids) const {
  std::vector<Supercondition> out;
  for (ScId i : ids) out.push_back(engine_.sc_value(i));
  return out;
}

CheckEntry Verifier::check_realizer_bijection() {
  const Instance& inst = inst_;
  CheckEntry entry{"realizer-bijection", true, ""};

  std::vector<Filter> realizers;
  for (const Filter& g : inst.poset().all_generic_filters())
    if (inst.pool().interpret(inst.root(), g) == inst.x()) realizers.push_back(g);
  std::vector<std::vector<ScId>> generics = generic_subsets();

  if (realizers.size() != generics.size()) {
    entry.pass = false;
    entry.counterexample = std::to_string(realizers.size()) + " realizing filters vs " +
                           std::to_string(generics.size()) + " generic subsets";
    return entry;
  }
  for (const Filter& g : realizers) {
    std::vector<ScId> image = g_plus(engine_, result_.fixed_point, g);
    if (std::find(generics.begin(), generics.end(), image) == generics.end()) {
      entry.pass = false;
      entry.counterexample =
          "image of " + filter_str(inst.poset(), g) + " is not a generic subset";
      return entry;
    }
    CondSet back = 0;
    for (ScId i : image) back |= cond_bit(engine_.sc_condition(i));
    if (back != g.members) {
      entry.pass = false;
      entry.counterexample = "round trip of " + filter_str(inst.poset(), g) + " gives " +
                             condset_str(inst.poset(), back);
      return entry;
    }
  }
  for (const std::vector<ScId>& gamma : generics) {
    CondSet proj = 0;
    for (ScId i : gamma) proj |= cond_bit(engine_.sc_condition(i));
    Filter h{proj};
    if (std::find(realizers.begin(), realizers.end(), h) == realizers.end()) {
      entry.pass = false;
      entry.counterexample = "projection " + condset_str(inst.poset(), proj) + " of a generic "
                             "subset does not realize the target";
      return entry;
    }
    if (g_plus(engine_, result_.fixed_point, h) != gamma) {
      entry.pass = false;
      entry.counterexample =
          "round trip of the generic subset at " + condset_str(inst.poset(), proj) + " differs";
      return entry;
    }
  }
  return entry;
}

std::pair<Filter, Assignment> Verifier::build_generic(const Supercondition& start) {
  const Instance& inst = inst_;
  auto start_id = engine_.find(start);
  if (!start_id || !contains_id(result_.fixed_point, *start_id))
    throw LabError(Errc::start_not_in_sigma,
                   "start " + render_supercondition(inst, start) + " is not in the fixed point");

  // Demands in lexicographic order; the minimal-element dense set drives
  // every step, so the chain condition becomes (and stays) minimal.
  std::vector<std::pair<std::optional<NameId>, std::optional<Hf>>> demands;
  if (inst.pe().empty() || inst.x_elements().empty()) {
    for (NameId s : inst.pe()) demands.emplace_back(s, std::nullopt);
    for (const Hf& x : inst.x_elements()) demands.emplace_back(std::nullopt, x);
    if (demands.empty()) demands.emplace_back(std::nullopt, std::nullopt);
  } else {
    for (NameId s : inst.pe())
      for (const Hf& x : inst.x_elements()) demands.emplace_back(s, x);
  }

  CondSet minimal = inst.poset().minimal_mask();
  ScId cur = *start_id;
  auto covered = [&] {
    Supercondition sc = engine_.sc_value(cur);
    if (!cond_in(minimal, sc.condition)) return false;
    for (NameId s : inst.pe())
      if (!sc.assignment.contains(s) && !engine_.forces_neg_mem_root(sc.condition, s)) return false;
    for (const Hf& x : inst.x_elements())
      if (!sc.assignment.range_contains(x)) return false;
    return true;
  };

  for (int pass = 0; pass < 4 && !covered(); ++pass) {
    for (const auto& [s, x] : demands) {
      auto next = engine_.extension_witness(result_.fixed_point, cur, minimal, s, x);
      if (!next)
        throw std::logic_error("extension property failed inside the fixed point");
      cur = *next;
    }
  }
  if (!covered()) throw std::logic_error("demand cycle failed to converge");

  Supercondition last = engine_.sc_value(cur);
  Filter g = inst.poset().upward_closure(last.condition);
  if (inst.pool().interpret(inst.root(), g) != inst.x())
    throw std::logic_error("constructed filter does not realize the target");
  return {g, last.assignment};
}

Report Verifier::check_properties() {
  const Instance& inst = inst_;
  const Poset& P = inst.poset();
  const NamePool& pool = inst.pool();
  Report report;
  report.digest = inst.digest();
  auto add = [&](std::string id, bool pass, std::string cex = "") {
    report.checks.push_back({std::move(id), pass, pass ? "" : std::move(cex)});
  };

  // Genericity agrees with the dense-subset quantifier, exhaustively.
  if (P.size() <= inst.caps().max_dense_poset) {
    bool ok = true;
    std::string cex;
    std::vector<CondSet> denses = P.all_dense_subsets(inst.caps().max_dense_poset);
    const auto generics = P.all_generic_filters();
    CondSet full = P.all();
    for (CondSet f = 1; ok; ++f) {
      if ((f & ~full) == 0 && P.is_filter(f)) {
        bool meets_all = std::all_of(denses.begin(), denses.end(),
                                     [&](CondSet d) { return (d & f) != 0; });
        bool listed = std::find(generics.begin(), generics.end(), Filter{f}) != generics.end();
        if (meets_all != listed) {
          ok = false;
          cex = "filter " + condset_str(P, f);
        }
      }
      if (f == full) break;
    }
    add("kernel.generic-dense", ok, cex);
  }
  {
    bool ok = P.is_dense(P.minimal_mask());
    for (int p = 0; ok && p < P.size(); ++p) ok = P.is_filter(P.upward_closure(p).members);
    add("kernel.minimal-dense", ok, "minimal elements or an upward closure misbehave");
  }

  // Check-names interpret to their value under every generic filter.
  {
    bool ok = true;
    std::string cex;
    NamePool scratch = pool;  // check_name interns; keep the instance pool pristine
    std::vector<Hf> samples = inst.x_elements();
    samples.push_back(inst.x());
    for (const Filter& g : P.all_generic_filters()) {
      for (const Hf& x : samples) {
        if (scratch.interpret(scratch.check_name(x), g) != x) {
          ok = false;
          cex = "check-name of " + x.str() + " under " + filter_str(P, g);
        }
      }
    }
    add("names.check-interp", ok, cex);
  }

  // root[G] equals the set of s[G] over potential elements forced in by
  // some condition of G.
  {
    bool ok = true;
    std::string cex;
    for (const Filter& g : P.all_generic_filters()) {
      std::vector<Hf> collected;
      for (NameId s : inst.pe()) {
        bool forced_in = false;
        for (int p = 0; p < P.size() && !forced_in; ++p)
          if (g.contains(p) && engine_.forcing().forces_mem(p, s, inst.root())) forced_in = true;
        if (forced_in) collected.push_back(pool.interpret(s, g));
      }
      if (Hf::make(std::move(collected)) != pool.interpret(inst.root(), g)) {
        ok = false;
        cex = "display mismatch under " + filter_str(P, g);
      }
    }
    add("names.display", ok, cex);
  }

  // Interpretation only sees the conditions occurring in the name.
  {
    bool ok = true;
    std::string cex;
    const auto generics = P.all_generic_filters();
    for (NameId s = 0; s < pool.size() && ok; ++s) {
      for (const Filter& g : generics) {
        for (const Filter& h : generics) {
          if ((g.members & pool.conditions(s)) != (h.members & pool.conditions(s))) continue;
          if (pool.interpret(s, g) != pool.interpret(s, h)) {
            ok = false;
            cex = "name " + std::to_string(s) + " under " + filter_str(P, g) + " vs " +
                  filter_str(P, h);
          }
        }
      }
    }
    add("names.locality", ok, cex);
  }

  // Syntactic relation vs semantic quantification, on every triple.
  {
    bool mem_ok = true, eq_ok = true, nmem_ok = true, neq_ok = true;
    bool never_both = true, monotone = true;
    std::string cex_mem, cex_eq, cex_nmem, cex_neq, cex_both, cex_mono;
    const ForcingRelation& fr = engine_.forcing();
    for (int p = 0; p < P.size(); ++p) {
      for (NameId s = 0; s < pool.size(); ++s) {
        for (NameId t = 0; t < pool.size(); ++t) {
          std::string triple = "(" + P.id(p) + ", " + std::to_string(s) + ", " +
                               std::to_string(t) + ")";
          bool fm = fr.forces_mem(p, s, t);
          bool fe = fr.forces_eq(p, s, t);
          bool nm = fr.forces_neg_mem(p, s, t);
          bool ne = fr.forces_neg_eq(p, s, t);
          if (fm != sem_forces_mem(P, pool, p, s, t) && mem_ok) mem_ok = false, cex_mem = triple;
          if (fe != sem_forces_eq(P, pool, p, s, t) && eq_ok) eq_ok = false, cex_eq = triple;
          if (nm != sem_forces_neg_mem(P, pool, p, s, t) && nmem_ok)
            nmem_ok = false, cex_nmem = triple;
          if (ne != sem_forces_neg_eq(P, pool, p, s, t) && neq_ok)
            neq_ok = false, cex_neq = triple;
          if (((fm && nm) || (fe && ne)) && never_both) never_both = false, cex_both = triple;
          if (monotone) {
            CondSet qs = P.below(p);
            while (qs) {
              int q = __builtin_ctzll(qs);
              qs &= qs - 1;
              if ((fm && !fr.forces_mem(q, s, t)) || (fe && !fr.forces_eq(q, s, t)) ||
                  (nm && !fr.forces_neg_mem(q, s, t)) || (ne && !fr.forces_neg_eq(q, s, t))) {
                monotone = false;
                cex_mono = triple + " below " + P.id(q);
                break;
              }
            }
          }
        }
      }
    }
    add("forcing.truth-mem", mem_ok, cex_mem);
    add("forcing.truth-eq", eq_ok, cex_eq);
    add("forcing.truth-neg-mem", nmem_ok, cex_nmem);
    add("forcing.truth-neg-eq", neq_ok, cex_neq);
    add("forcing.decides-consistent", never_both, cex_both);
    add("forcing.monotone", monotone, cex_mono);
  }

  // Superconditions survive strengthening of the bare condition.
  {
    bool ok = true;
    std::string cex;
    for (ScId i = 0; i < engine_.size() && ok; ++i) {
      CondSet qs = P.below(engine_.sc_condition(i));
      while (qs) {
        int q = __builtin_ctzll(qs);
        qs &= qs - 1;
        if (!engine_.with_condition(i, q)) {
          ok = false;
          cex = engine_.render(i) + " strengthened to " + P.id(q);
          break;
        }
      }
    }
    add("pplus.downward", ok, cex);
  }

  // Stages decrease and stabilize.
  {
    bool ok = true;
    const auto& stages = result_.trace.stages;
    for (std::size_t i = 0; i + 1 < stages.size(); ++i) {
      ok = ok && std::includes(stages[i].begin(), stages[i].end(), stages[i + 1].begin(),
                               stages[i + 1].end());
      ok = ok && stages[i].size() > stages[i + 1].size();
    }
    ok = ok && result_.trace.lambda <= engine_.size();
    ok = ok && engine_.sigma_step(result_.fixed_point, Strategy::minimal_reduction) ==
                   result_.fixed_point;
    add("sigma.antitone", ok, "stage chain is not strictly decreasing to a fixed point");
  }

  // Extension property of the fixed point, across every dense set, name
  // and element.
  {
    bool ok = true;
    std::string cex;
    std::vector<CondSet> denses;
    if (P.size() <= inst.caps().max_dense_poset)
      denses = P.all_dense_subsets(inst.caps().max_dense_poset);
    else
      denses = {P.minimal_mask()};
    for (ScId i : result_.fixed_point) {
      for (CondSet d : denses) {
        for (NameId s : inst.pe()) {
          for (const Hf& x : inst.x_elements()) {
            if (!engine_.extension_witness(result_.fixed_point, i, d, s, x)) {
              ok = false;
              cex = "no witness below " + engine_.render(i) + " in " + condset_str(P, d) +
                    " for (" + inst.label(s) + ", " + x.str() + ")";
            }
          }
        }
      }
    }
    add("sigma.extension-witness", ok, cex);
  }

  // The fixed point is closed under weakening, both in the assignment and
  // in the bare condition.
  {
    bool ok = true;
    std::string cex;
    std::vector<ScId> sigma0 = engine_.sigma0();
    for (ScId i : result_.fixed_point) {
      for (ScId j : sigma0) {
        if (engine_.sc_leq_ids(i, j) && !contains_id(result_.fixed_point, j)) {
          ok = false;
          cex = engine_.render(j) + " weakens " + engine_.render(i) + " but drops out";
        }
      }
    }
    add("sigma.weaken-assignments", ok, cex);

    ok = true;
    cex.clear();
    for (ScId i : result_.fixed_point) {
      int p = engine_.sc_condition(i);
      CondSet ups = P.above(p);
      while (ups) {
        int q = __builtin_ctzll(ups);
        ups &= ups - 1;
        auto j = engine_.with_condition(i, q);
        if (j && !contains_id(result_.fixed_point, *j)) {
          ok = false;
          cex = engine_.render(*j) + " weakens " + engine_.render(i) + " but drops out";
        }
      }
    }
    add("sigma.weaken-condition", ok, cex);
  }

  // Both stage strategies compute the same hierarchy.
  if (P.size() <= inst.caps().max_dense_poset) {
    SigmaResult other = engine_.sigma_plus(Strategy::exhaustive_dense);
    bool ok = other.fixed_point == result_.fixed_point &&
              other.trace.stages == result_.trace.stages;
    add("sigma.strategy-agreement", ok, "strategies disagree");
  }

  // Every supercondition compatible with a realizing filter joins the
  // fixed point, and canonical assignments cover the realized set.
  {
    bool sg_ok = true, range_ok = true, bound_ok = true;
    std::string cex_sg, cex_range, cex_bound;
    int bar = lambda_bar();
    for (const Filter& g : P.all_generic_filters()) {
      Hf realized = pool.interpret(inst.root(), g);
      Assignment canonical = a_of_g(inst, g);

      std::vector<Hf> range;
      for (const auto& [name, value] : canonical.entries()) range.push_back(value);
      if (Hf::make(std::move(range)) != realized) {
        range_ok = false;
        cex_range = "under " + filter_str(P, g);
      }

      if (realized == inst.x()) {
        for (ScId i = 0; i < engine_.size(); ++i) {
          Supercondition sc = engine_.sc_value(i);
          if (!g.contains(sc.condition)) continue;
          if (!canonical.extends(sc.assignment)) continue;
          if (!contains_id(result_.fixed_point, i)) {
            sg_ok = false;
            cex_sg = engine_.render(i) + " compatible with " + filter_str(P, g);
          }
        }
      }

      Caps caps = inst.caps();
      caps.max_x = std::max(caps.max_x, static_cast<int>(realized.size()));
      SigmaEngine member(inst.with_x(realized));
      int lam = member.sigma_plus().trace.lambda;
      if (lam >= bar) {
        bound_ok = false;
        cex_bound = "lambda " + std::to_string(lam) + " under " + filter_str(P, g) +
                    " reaches the bound " + std::to_string(bar);
      }
    }
    add("sigma.generic-compatible", sg_ok, cex_sg);
    add("assignment.range", range_ok, cex_range);
    add("lambda.bound", bound_ok, cex_bound);
  }

  return report;
}

Report Verifier::run_suite(Suite suite) {
  const Instance& inst = inst_;
  Report report;
  report.digest = inst.digest();
  auto append = [&](Report sub) {
    for (CheckEntry& c : sub.checks) report.checks.push_back(std::move(c));
  };

  if (suite == Suite::all || suite == Suite::sf) report.checks.push_back(check_realizability());
  if (suite == Suite::all || suite == Suite::tmain) {
    for (const Filter& g : inst.poset().all_generic_filters())
      if (inst.pool().interpret(inst.root(), g) == inst.x())
        report.checks.push_back(check_filter_to_generic(g));
    for (const std::vector<ScId>& gamma : generic_subsets()) {
      std::vector<Supercondition> values = materialize(gamma);
      report.checks.push_back(check_generic_to_filter(values));
    }
    report.checks.push_back(check_realizer_bijection());
  }
  if (suite == Suite::all || suite == Suite::props) append(check_properties());
  if (suite == Suite::all || suite == Suite::zapt) append(check_family(inst));
  return report;
}

Report check_family(std::span<const Instance> family) {
  Report report;
  if (family.empty()) return report;
  report.digest = family.front().digest();
  for (const Instance& member : family) {
    if (member.poset().size() != family.front().poset().size() ||
        member.label(member.root()) != family.front().label(family.front().root()))
      throw LabError(Errc::param, "family members must share the poset and root");
    Hf x = member.x();
    SigmaEngine engine(member);
    bool existential = !engine.sigma_plus(Strategy::minimal_reduction).fixed_point.empty();

    bool universal;
    if (member.poset().size() <= member.caps().max_dense_poset) {
      universal = !engine.sigma_plus(Strategy::exhaustive_dense).fixed_point.empty();
    } else {
      // Second route: the stage at the uniform bound is stable and nonempty.
      Verifier v(member);
      int bar = v.lambda_bar();
      const auto& stages = v.result().trace.stages;
      auto stage_at = [&](int gamma) -> const std::vector<ScId>& {
        return stages[std::min<std::size_t>(gamma, stages.size() - 1)];
      };
      universal = stage_at(bar) == stage_at(bar + 1) && !stage_at(bar).empty();
    }

    bool brute = false;
    for (const Filter& g : member.poset().all_generic_filters())
      if (member.pool().interpret(member.root(), g) == x) {
        brute = true;
        break;
      }

    CheckEntry entry{"family-dual:" + x.str(), true, ""};
    if (existential != universal || universal != brute) {
      entry.pass = false;
      entry.counterexample = "existential=" + std::string(existential ? "yes" : "no") +
                             " universal=" + std::string(universal ? "yes" : "no") +
                             " brute=" + std::string(brute ? "yes" : "no");
    }
    report.checks.push_back(std::move(entry));
  }
  return report;
}

Report check_family(const Instance& base, int rank_bound) {
  std::vector<Instance> family;
  for (const Hf& x :
       transitive_sets_up_to(rank_bound, static_cast<std::size_t>(base.caps().max_x)))
    family.push_back(base.with_x(x));
  Report report = check_family(family);
  report.digest = base.digest();
  return report;
}

}  // namespace flab
