#include "flab/sigma.hpp"

#include <algorithm>
#include <unordered_map>

#include "flab/error.hpp"

namespace flab {

Assignment Assignment::from_pairs(std::vector<std::pair<NameId, Hf>> pairs) {
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  for (std::size_t i = 0; i + 1 < pairs.size(); ++i)
    if (pairs[i].first == pairs[i + 1].first)
      throw LabError(Errc::incompatible_assignments,
                     "two values for one name: " + pairs[i].second.str() + " vs " +
                         pairs[i + 1].second.str());
  Assignment a;
  a.entries_ = std::move(pairs);
  return a;
}

bool Assignment::contains(NameId s) const {
  return std::any_of(entries_.begin(), entries_.end(),
                     [s](const auto& e) { return e.first == s; });
}

std::optional<Hf> Assignment::value(NameId s) const {
  for (const auto& [name, v] : entries_)
    if (name == s) return v;
  return std::nullopt;
}

bool Assignment::range_contains(Hf x) const {
  return std::any_of(entries_.begin(), entries_.end(),
                     [x](const auto& e) { return e.second == x; });
}

bool Assignment::extends(const Assignment& weaker) const {
  return std::includes(entries_.begin(), entries_.end(), weaker.entries_.begin(),
                       weaker.entries_.end());
}

bool sc_leq(const Poset& poset, const Supercondition& stronger, const Supercondition& weaker) {
  return poset.leq(stronger.condition, weaker.condition) &&
         stronger.assignment.extends(weaker.assignment);
}

Strategy strategy_from_string(const std::string& s) {
  if (s == "minimal-reduction") return Strategy::minimal_reduction;
  if (s == "exhaustive-dense") return Strategy::exhaustive_dense;
  throw LabError(Errc::param, "unknown strategy '" + s + "'");
}

namespace {

template <typename F>
void for_each_bit(const std::vector<std::uint64_t>& blocks, F f) {
  for (std::size_t w = 0; w < blocks.size(); ++w) {
    std::uint64_t word = blocks[w];
    while (word) {
      int b = __builtin_ctzll(word);
      word &= word - 1;
      if (!f(static_cast<std::int32_t>(w * 64 + b))) return;
    }
  }
}

}  // namespace

SigmaEngine::SigmaEngine(const Instance& inst)
    : inst_(inst), forcing_(inst_.poset(), inst_.pool()), pe_(inst_.pe()),
      elems_(inst_.x_elements()) {
  const Poset& P = inst_.poset();
  const NamePool& pool = inst_.pool();
  const int nconds = P.size();
  const int k = static_cast<int>(pe_.size());
  const int e = static_cast<int>(elems_.size());
  // Assignments pack one nibble per potential element, so these are hard
  // representation limits independent of the configured caps.
  if (k > 8 || e > 8)
    throw LabError(Errc::size_cap, "at most 8 potential elements and 8 target elements");
  full_dom_ = static_cast<std::uint16_t>((1u << k) - 1);
  full_ran_ = static_cast<std::uint16_t>((1u << e) - 1);

  // Per-slot value options; a check-name key may only carry its own value.
  std::vector<std::vector<int>> options(k);
  for (int i = 0; i < k; ++i) {
    options[i].push_back(-1);
    if (pool.is_check(pe_[i])) {
      Hf v = *pool.check_value(pe_[i]);
      auto it = std::find(elems_.begin(), elems_.end(), v);
      if (it != elems_.end()) options[i].push_back(static_cast<int>(it - elems_.begin()));
    } else {
      for (int x = 0; x < e; ++x) options[i].push_back(x);
    }
  }

  long long count = 1;
  for (int i = 0; i < k; ++i) {
    count *= static_cast<long long>(options[i].size());
    if (count * nconds > inst_.caps().max_pplus)
      throw LabError(Errc::size_cap, "supercondition enumeration larger than the cap");
  }

  // Odometer over the option lists, last slot fastest.
  std::vector<int> pos(k, 0);
  while (true) {
    Assig a;
    for (int i = 0; i < k; ++i) {
      int v = options[i][pos[i]];
      if (v >= 0) {
        a.code |= static_cast<std::uint32_t>(v + 1) << (4 * i);
        a.defmask |= 0xFu << (4 * i);
        a.dom |= static_cast<std::uint16_t>(1u << i);
        a.ran |= static_cast<std::uint16_t>(1u << v);
      }
    }
    by_code_.emplace(a.code, static_cast<std::int32_t>(assigs_.size()));
    assigs_.push_back(a);
    int i = k - 1;
    while (i >= 0 && pos[i] + 1 == static_cast<int>(options[i].size())) pos[i--] = 0;
    if (i < 0) break;
    ++pos[i];
  }
  const std::int32_t na = static_cast<std::int32_t>(assigs_.size());

  // Forcing tables between potential elements and against the root.
  NameId root = inst_.root();
  std::vector<std::vector<std::uint8_t>> fm(nconds), feq(nconds), dec(nconds);
  negmask_.assign(nconds, 0);
  std::vector<std::uint16_t> root_mem(nconds, 0);
  for (int p = 0; p < nconds; ++p) {
    fm[p].assign(k * k, 0);
    feq[p].assign(k * k, 0);
    dec[p].assign(k * k, 0);
    for (int i = 0; i < k; ++i) {
      if (forcing_.forces_mem(p, pe_[i], root)) root_mem[p] |= 1u << i;
      if (forcing_.forces_neg_mem(p, pe_[i], root)) negmask_[p] |= 1u << i;
      for (int j = 0; j < k; ++j) {
        fm[p][i * k + j] = forcing_.forces_mem(p, pe_[i], pe_[j]);
        feq[p][i * k + j] = forcing_.forces_eq(p, pe_[i], pe_[j]);
        bool decided = forcing_.decide(p, Rel::mem, pe_[i], pe_[j]) != Decision::undecided &&
                       forcing_.decide(p, Rel::eq, pe_[i], pe_[j]) != Decision::undecided;
        dec[p][i * k + j] = decided;
      }
    }
  }

  // d-completeness per condition and domain mask.
  std::vector<std::vector<std::uint8_t>> dcomplete(nconds);
  for (int p = 0; p < nconds; ++p) {
    dcomplete[p].assign(1u << k, 1);
    for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
      bool ok = (mask & ~static_cast<std::uint32_t>(root_mem[p])) == 0;
      for (int i = 0; ok && i < k; ++i) {
        if (!(mask & (1u << i))) continue;
        for (int j = 0; ok && j < k; ++j)
          if ((mask & (1u << j)) && !dec[p][i * k + j]) ok = false;
      }
      dcomplete[p][mask] = ok;
    }
  }

  // Membership among the elements of X.
  std::vector<std::uint8_t> elem_mem(e * e, 0);
  for (int i = 0; i < e; ++i)
    for (int j = 0; j < e; ++j) elem_mem[i * e + j] = elems_[j].contains(elems_[i]);

  const std::size_t words = (static_cast<std::size_t>(na) + 63) / 64;
  valid_.assign(nconds, Blocks(words, 0));
  witnessy_.assign(nconds, Blocks(words, 0));
  sc_index_.assign(nconds, std::vector<ScId>(na, -1));

  auto slot_value = [&](const Assig& a, int i) -> int {
    return static_cast<int>((a.code >> (4 * i)) & 0xF) - 1;
  };

  for (int p = 0; p < nconds; ++p) {
    for (std::int32_t aid = 0; aid < na; ++aid) {
      const Assig& a = assigs_[aid];
      if (!dcomplete[p][a.dom]) continue;
      valid_[p][aid / 64] |= std::uint64_t{1} << (aid % 64);
      sc_index_[p][aid] = static_cast<ScId>(scs_.size());
      scs_.push_back(Sc{p, aid});

      // Stage-0 membership: forcing between assigned names must mirror the
      // membership and equality of their values.
      bool in0 = true;
      for (int i = 0; in0 && i < k; ++i) {
        if (!(a.dom & (1u << i))) continue;
        int vi = slot_value(a, i);
        for (int j = 0; in0 && j < k; ++j) {
          if (!(a.dom & (1u << j))) continue;
          int vj = slot_value(a, j);
          if (static_cast<bool>(fm[p][i * k + j]) != static_cast<bool>(elem_mem[vi * e + vj]))
            in0 = false;
          if (static_cast<bool>(feq[p][i * k + j]) != (vi == vj)) in0 = false;
        }
      }
      if (in0) sigma0_.push_back(static_cast<ScId>(scs_.size() - 1));

      // A total witness at p: range covers X and every potential element is
      // either assigned or forced out of the root.
      if (a.ran == full_ran_ && ((a.dom | negmask_[p]) & full_dom_) == full_dom_)
        witnessy_[p][aid / 64] |= std::uint64_t{1} << (aid % 64);
    }
  }
}

bool SigmaEngine::assig_extends(std::int32_t stronger, std::int32_t weaker) const {
  const Assig& a = assigs_[weaker];
  const Assig& b = assigs_[stronger];
  return ((a.code ^ b.code) & a.defmask) == 0;
}

int SigmaEngine::slot_of(NameId s) const {
  auto it = std::find(pe_.begin(), pe_.end(), s);
  return it == pe_.end() ? -1 : static_cast<int>(it - pe_.begin());
}

SigmaEngine::Blocks SigmaEngine::empty_blocks() const {
  return Blocks((assigs_.size() + 63) / 64, 0);
}

std::vector<SigmaEngine::Blocks> SigmaEngine::to_cond_sets(std::span<const ScId> ids) const {
  std::vector<Blocks> sets(inst_.poset().size(), empty_blocks());
  for (ScId id : ids) {
    const Sc& sc = scs_[id];
    sets[sc.cond][sc.assig / 64] |= std::uint64_t{1} << (sc.assig % 64);
  }
  return sets;
}

std::vector<ScId> SigmaEngine::from_cond_sets(const std::vector<Blocks>& sets) const {
  std::vector<ScId> out;
  for (ScId id = 0; id < size(); ++id) {
    const Sc& sc = scs_[id];
    if (sets[sc.cond][sc.assig / 64] & (std::uint64_t{1} << (sc.assig % 64))) out.push_back(id);
  }
  return out;
}

Supercondition SigmaEngine::sc_value(ScId i) const {
  const Sc& sc = scs_[i];
  const Assig& a = assigs_[sc.assig];
  std::vector<std::pair<NameId, Hf>> pairs;
  for (std::size_t slot = 0; slot < pe_.size(); ++slot) {
    int v = static_cast<int>((a.code >> (4 * slot)) & 0xF) - 1;
    if (v >= 0) pairs.emplace_back(pe_[slot], elems_[v]);
  }
  return Supercondition{sc.cond, Assignment::from_pairs(std::move(pairs))};
}

std::optional<ScId> SigmaEngine::find(const Supercondition& sc) const {
  if (sc.condition < 0 || sc.condition >= inst_.poset().size()) return std::nullopt;
  std::uint32_t code = 0;
  for (const auto& [name, v] : sc.assignment.entries()) {
    int slot = slot_of(name);
    auto it = std::find(elems_.begin(), elems_.end(), v);
    if (slot < 0 || it == elems_.end()) return std::nullopt;
    code |= static_cast<std::uint32_t>(it - elems_.begin() + 1) << (4 * slot);
  }
  auto ait = by_code_.find(code);
  if (ait == by_code_.end()) return std::nullopt;
  ScId id = sc_index_[sc.condition][ait->second];
  return id < 0 ? std::nullopt : std::optional<ScId>(id);
}

bool SigmaEngine::sc_leq_ids(ScId stronger, ScId weaker) const {
  const Sc& a = scs_[stronger];
  const Sc& b = scs_[weaker];
  return inst_.poset().leq(a.cond, b.cond) && assig_extends(a.assig, b.assig);
}

std::string SigmaEngine::render(ScId i) const {
  return render_supercondition(inst_, sc_value(i));
}

std::vector<ScId> SigmaEngine::sigma_step(std::span<const ScId> current, Strategy strategy) const {
  const Poset& P = inst_.poset();
  std::vector<Blocks> cur = to_cond_sets(current);
  std::vector<Blocks> pool(P.size(), empty_blocks());
  for (int q = 0; q < P.size(); ++q)
    for (std::size_t w = 0; w < pool[q].size(); ++w) pool[q][w] = witnessy_[q][w] & cur[q][w];

  auto witness_at = [&](int q, std::int32_t aid) {
    bool found = false;
    for_each_bit(pool[q], [&](std::int32_t b) {
      if (assig_extends(b, aid)) {
        found = true;
        return false;
      }
      return true;
    });
    return found;
  };

  std::vector<CondSet> denses;
  if (strategy == Strategy::exhaustive_dense)
    denses = P.all_dense_subsets(inst_.caps().max_dense_poset);

  std::vector<ScId> out;
  for (ScId id : current) {
    const Sc& sc = scs_[id];
    bool keep = true;
    if (strategy == Strategy::minimal_reduction) {
      // A minimal condition lies in every dense set, so one witness with a
      // minimal condition settles the whole dense-set quantifier.
      keep = false;
      CondSet qs = P.minimal_mask() & P.below(sc.cond);
      while (qs && !keep) {
        int q = __builtin_ctzll(qs);
        qs &= qs - 1;
        keep = witness_at(q, sc.assig);
      }
    } else {
      for (CondSet d : denses) {
        bool hit = false;
        CondSet qs = d & P.below(sc.cond);
        while (qs && !hit) {
          int q = __builtin_ctzll(qs);
          qs &= qs - 1;
          hit = witness_at(q, sc.assig);
        }
        if (!hit) {
          keep = false;
          break;
        }
      }
    }
    if (keep) out.push_back(id);
  }
  return out;
}

SigmaResult SigmaEngine::sigma_plus(Strategy strategy) const {
  SigmaResult result;
  result.trace.stages.push_back(sigma0_);
  while (true) {
    std::vector<ScId> next = sigma_step(result.trace.stages.back(), strategy);
    if (next == result.trace.stages.back()) break;
    result.trace.stages.push_back(std::move(next));
  }
  result.trace.lambda = static_cast<int>(result.trace.stages.size()) - 1;
  result.fixed_point = result.trace.stages.back();
  return result;
}

std::optional<ScId> SigmaEngine::extension_witness(std::span<const ScId> within, ScId from,
                                                   CondSet dense, std::optional<NameId> s,
                                                   std::optional<Hf> x) const {
  const Poset& P = inst_.poset();
  int slot = -1;
  if (s) {
    slot = slot_of(*s);
    if (slot < 0) return std::nullopt;
  }
  std::uint16_t xbit = 0;
  if (x) {
    auto eit = std::find(elems_.begin(), elems_.end(), *x);
    if (eit == elems_.end()) return std::nullopt;
    xbit = static_cast<std::uint16_t>(1u << (eit - elems_.begin()));
  }
  const Sc& start = scs_[from];
  for (ScId id : within) {
    const Sc& sc = scs_[id];
    if (!cond_in(dense, sc.cond) || !P.leq(sc.cond, start.cond)) continue;
    if (!assig_extends(sc.assig, start.assig)) continue;
    const Assig& b = assigs_[sc.assig];
    if (xbit && !(b.ran & xbit)) continue;
    if (slot >= 0 && !(b.dom & (1u << slot)) && !(negmask_[sc.cond] & (1u << slot))) continue;
    return id;
  }
  return std::nullopt;
}

std::optional<ScId> SigmaEngine::with_condition(ScId i, int cond) const {
  ScId id = sc_index_[cond][scs_[i].assig];
  return id < 0 ? std::nullopt : std::optional<ScId>(id);
}

bool SigmaEngine::forces_neg_mem_root(int q, NameId s) const {
  int slot = slot_of(s);
  return slot >= 0 && (negmask_[q] & (1u << slot));
}

std::vector<Supercondition> enumerate_superconditions(const Instance& inst) {
  SigmaEngine engine(inst);
  std::vector<Supercondition> out;
  for (ScId i = 0; i < engine.size(); ++i) out.push_back(engine.sc_value(i));
  return out;
}

std::vector<Supercondition> sigma0_set(const Instance& inst) {
  SigmaEngine engine(inst);
  std::vector<Supercondition> out;
  for (ScId i : engine.sigma0()) out.push_back(engine.sc_value(i));
  return out;
}

std::vector<Supercondition> sigma_step_set(const Instance& inst,
                                           std::span<const Supercondition> current,
                                           Strategy strategy) {
  SigmaEngine engine(inst);
  std::vector<ScId> ids;
  for (const Supercondition& sc : current) {
    auto id = engine.find(sc);
    if (!id)
      throw LabError(Errc::param,
                     render_supercondition(inst, sc) + " is not a supercondition here");
    ids.push_back(*id);
  }
  std::sort(ids.begin(), ids.end());
  std::vector<Supercondition> out;
  for (ScId i : engine.sigma_step(ids, strategy)) out.push_back(engine.sc_value(i));
  return out;
}

std::vector<Supercondition> sigma_plus_set(const Instance& inst, Strategy strategy) {
  SigmaEngine engine(inst);
  std::vector<Supercondition> out;
  for (ScId i : engine.sigma_plus(strategy).fixed_point) out.push_back(engine.sc_value(i));
  return out;
}

CondSet projection(std::span<const Supercondition> gamma) {
  CondSet out = 0;
  for (const Supercondition& sc : gamma) out |= cond_bit(sc.condition);
  return out;
}

std::vector<Assignment> assignments_of(std::span<const Supercondition> gamma) {
  std::vector<Assignment> out;
  for (const Supercondition& sc : gamma) out.push_back(sc.assignment);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Assignment union_assignment(std::span<const Supercondition> gamma) {
  std::vector<std::pair<NameId, Hf>> pairs;
  for (const Supercondition& sc : gamma)
    for (const auto& e : sc.assignment.entries()) pairs.push_back(e);
  return Assignment::from_pairs(std::move(pairs));
}

Assignment a_of_g(const Instance& inst, const Filter& g) {
  Hf tg = inst.pool().interpret(inst.root(), g);
  std::vector<std::pair<NameId, Hf>> pairs;
  for (NameId s : inst.pe()) {
    Hf sg = inst.pool().interpret(s, g);
    if (tg.contains(sg)) pairs.emplace_back(s, sg);
  }
  return Assignment::from_pairs(std::move(pairs));
}

std::vector<ScId> g_plus(const SigmaEngine& engine, std::span<const ScId> sigma_plus,
                         const Filter& g) {
  const Instance& inst = engine.instance();
  Hf tg = inst.pool().interpret(inst.root(), g);
  if (tg != inst.x())
    throw LabError(Errc::x_mismatch, "root interprets to " + tg.str() + " under this filter, not " +
                                         inst.x().str());
  Assignment ag = a_of_g(inst, g);
  std::vector<ScId> out;
  for (ScId id : sigma_plus) {
    Supercondition sc = engine.sc_value(id);
    if (g.contains(sc.condition) && ag.extends(sc.assignment)) out.push_back(id);
  }
  return out;
}

CondSet xi(const Instance& inst) {
  SigmaEngine engine(inst);
  CondSet out = 0;
  for (ScId id : engine.sigma_plus().fixed_point) out |= cond_bit(engine.sc_condition(id));
  return out;
}

std::string render_supercondition(const Instance& inst, const Supercondition& sc) {
  std::string out = "(" + inst.poset().id(sc.condition) + ", {";
  // pe order is label order, so rendering is stable.
  bool first = true;
  for (NameId s : inst.pe()) {
    auto v = sc.assignment.value(s);
    if (!v) continue;
    if (!first) out += ',';
    out += inst.label(s) + ":" + v->str();
    first = false;
  }
  return out + "})";
}

std::vector<std::string> trace_lines(const SigmaEngine& engine, const SigmaTrace& trace) {
  std::vector<std::string> lines;
  std::vector<ScId> prev;
  for (ScId i = 0; i < engine.size(); ++i) prev.push_back(i);
  for (std::size_t g = 0; g < trace.stages.size(); ++g) {
    const std::vector<ScId>& stage = trace.stages[g];
    std::vector<ScId> removed;
    std::set_difference(prev.begin(), prev.end(), stage.begin(), stage.end(),
                        std::back_inserter(removed));
    std::string line =
        "gamma=" + std::to_string(g) + " size=" + std::to_string(stage.size()) + " removed=[";
    for (std::size_t i = 0; i < removed.size(); ++i) {
      if (i) line += ' ';
      line += engine.render(removed[i]);
    }
    line += ']';
    lines.push_back(std::move(line));
    prev = stage;
  }
  return lines;
}

}  // namespace flab
