#include "flab/forcing.hpp"

namespace flab {

const char* decision_name(Decision d) {
  switch (d) {
    case Decision::forces: return "forces";
    case Decision::forces_negation: return "forces-negation";
    case Decision::undecided: return "undecided";
  }
  return "?";
}

namespace {

std::uint64_t memo_key(int tag, int p, NameId s, NameId t) {
  return (std::uint64_t{static_cast<std::uint32_t>(tag)} << 62) |
         (std::uint64_t{static_cast<std::uint32_t>(p)} << 56) | (std::uint64_t{s} << 28) |
         std::uint64_t{t};
}

}  // namespace

bool ForcingRelation::memo_lookup(std::uint64_t key, bool& value) const {
  std::lock_guard<std::mutex> lock(memo_mu_);
  auto it = memo_.find(key);
  if (it == memo_.end()) return false;
  value = it->second;
  return true;
}

void ForcingRelation::memo_store(std::uint64_t key, bool value) const {
  std::lock_guard<std::mutex> lock(memo_mu_);
  memo_.emplace(key, value);
}

bool ForcingRelation::forces_mem(int p, NameId s, NameId t) const {
  std::uint64_t key = memo_key(0, p, s, t);
  if (bool cached; memo_lookup(key, cached)) return cached;

  // Dense below p: every q <= p has some q' <= q with an entry of t whose
  // condition is above q' and whose name q'-forcibly equals s.
  bool result = true;
  CondSet below_p = poset_.below(p);
  CondSet rest = below_p;
  while (rest) {
    int q = __builtin_ctzll(rest);
    rest &= rest - 1;
    bool hit = false;
    CondSet cand = poset_.below(q);
    while (cand && !hit) {
      int q2 = __builtin_ctzll(cand);
      cand &= cand - 1;
      hit = has_eq_witness(q2, s, t);
    }
    if (!hit) {
      result = false;
      break;
    }
  }
  memo_store(key, result);
  return result;
}

bool ForcingRelation::has_eq_witness(int q, NameId s, NameId t) const {
  for (const auto& [u, r] : pool_.entries(t))
    if (poset_.leq(q, r) && forces_eq(q, s, u)) return true;
  return false;
}

bool ForcingRelation::forces_eq(int p, NameId s, NameId t) const {
  std::uint64_t key = memo_key(1, p, s, t);
  if (bool cached; memo_lookup(key, cached)) return cached;

  auto side = [&](NameId a, NameId b) {
    for (const auto& [u, r] : pool_.entries(a)) {
      CondSet qs = poset_.below(p) & poset_.below(r);
      while (qs) {
        int q = __builtin_ctzll(qs);
        qs &= qs - 1;
        // u in b must be forced densely below q.
        CondSet rest = poset_.below(q);
        while (rest) {
          int q2 = __builtin_ctzll(rest);
          rest &= rest - 1;
          bool hit = false;
          CondSet cand = poset_.below(q2);
          while (cand && !hit) {
            int q3 = __builtin_ctzll(cand);
            cand &= cand - 1;
            hit = forces_mem(q3, u, b);
          }
          if (!hit) return false;
        }
      }
    }
    return true;
  };

  bool result = side(s, t) && side(t, s);
  memo_store(key, result);
  return result;
}

bool ForcingRelation::forces_neg_mem(int p, NameId s, NameId t) const {
  CondSet rest = poset_.below(p);
  while (rest) {
    int q = __builtin_ctzll(rest);
    rest &= rest - 1;
    if (forces_mem(q, s, t)) return false;
  }
  return true;
}

bool ForcingRelation::forces_neg_eq(int p, NameId s, NameId t) const {
  CondSet rest = poset_.below(p);
  while (rest) {
    int q = __builtin_ctzll(rest);
    rest &= rest - 1;
    if (forces_eq(q, s, t)) return false;
  }
  return true;
}

Decision ForcingRelation::decide(int p, Rel rel, NameId s, NameId t) const {
  bool pos = rel == Rel::mem ? forces_mem(p, s, t) : forces_eq(p, s, t);
  if (pos) return Decision::forces;
  bool neg = rel == Rel::mem ? forces_neg_mem(p, s, t) : forces_neg_eq(p, s, t);
  return neg ? Decision::forces_negation : Decision::undecided;
}

bool ForcingRelation::is_d_complete(int p, std::span<const NameId> d, NameId t) const {
  for (NameId s : d)
    if (!forces_mem(p, s, t)) return false;
  for (NameId s : d)
    for (NameId s2 : d) {
      if (decide(p, Rel::mem, s, s2) == Decision::undecided) return false;
      if (decide(p, Rel::eq, s, s2) == Decision::undecided) return false;
    }
  return true;
}

namespace {

template <typename Pred>
bool for_all_generics_containing(const Poset& poset, int p, Pred pred) {
  for (const Filter& g : poset.all_generic_filters()) {
    if (!g.contains(p)) continue;
    if (!pred(g)) return false;
  }
  return true;
}

}  // namespace

bool sem_forces_mem(const Poset& poset, const NamePool& pool, int p, NameId s, NameId t) {
  return for_all_generics_containing(poset, p, [&](const Filter& g) {
    return pool.interpret(t, g).contains(pool.interpret(s, g));
  });
}

bool sem_forces_eq(const Poset& poset, const NamePool& pool, int p, NameId s, NameId t) {
  return for_all_generics_containing(poset, p, [&](const Filter& g) {
    return pool.interpret(s, g) == pool.interpret(t, g);
  });
}

bool sem_forces_neg_mem(const Poset& poset, const NamePool& pool, int p, NameId s, NameId t) {
  return for_all_generics_containing(poset, p, [&](const Filter& g) {
    return !pool.interpret(t, g).contains(pool.interpret(s, g));
  });
}

bool sem_forces_neg_eq(const Poset& poset, const NamePool& pool, int p, NameId s, NameId t) {
  return for_all_generics_containing(poset, p, [&](const Filter& g) {
    return pool.interpret(s, g) != pool.interpret(t, g);
  });
}

}  // namespace flab
