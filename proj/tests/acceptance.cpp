// Acceptance suite: runs every gate criterion over the fixture and a seeded
// random corpus, printing one [PASS]/[FAIL] line per criterion.

#include <chrono>
#include <cstdlib>
#include <sys/wait.h>
#include <unistd.h>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "flab/error.hpp"
#include "flab/verify.hpp"

using namespace flab;

namespace {

constexpr int kCorpusSize = 200;
constexpr std::uint64_t kCorpusSeed = 20240901;

struct Criterion {
  std::string name;
  bool pass = true;
  std::string detail;
};

std::vector<Criterion> results;

void report(const std::string& name, bool pass, const std::string& detail) {
  results.push_back({name, pass, detail});
  std::cout << (pass ? "[PASS] " : "[FAIL] ") << name << ": " << detail << "\n";
  std::cout.flush();
}

Instance t1(const char* x) {
  GenParams params;
  params.x = Hf::parse(x);
  return gen(Family::two_branch, params, 0);
}

// Random instance within the corpus envelope: |P| <= 6, name rank <= 3,
// |X| <= 5. The root is transitively closed entry-wise so it interprets to
// a transitive set under every filter.
std::optional<Instance> random_instance(std::mt19937_64& rng) {
  auto pick = [&](int n) { return static_cast<int>(rng() % n); };

  int extra = pick(6);  // conditions besides top, |P| <= 6
  std::vector<std::string> conditions = {"top"};
  for (int i = 0; i < extra; ++i) conditions.push_back("c" + std::to_string(i));
  std::vector<std::pair<std::string, std::string>> pairs;
  for (int i = 0; i < extra; ++i) pairs.emplace_back(conditions[i + 1], "top");
  // Edges only along a permutation, so the order stays acyclic.
  std::vector<int> perm(extra);
  for (int i = 0; i < extra; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  for (int i = 0; i < extra; ++i)
    for (int j = i + 1; j < extra; ++j)
      if (pick(100) < 35) pairs.emplace_back(conditions[perm[i] + 1], conditions[perm[j] + 1]);

  Poset poset;
  try {
    poset = Poset::validate(conditions, pairs, "top");
  } catch (const LabError&) {
    return std::nullopt;
  }

  NamePool pool(poset);
  std::vector<NameId> made = {pool.empty_name()};
  std::vector<std::pair<std::string, NameId>> labels = {{"m0", pool.empty_name()}};
  if (pick(2) == 0) {
    // Mix a check-name into the building blocks.
    std::vector<Hf> low = transitive_sets_up_to(2, 3);
    made.push_back(pool.check_name(low[pick(static_cast<int>(low.size()))]));
  }
  int budget = 2 + pick(4);
  for (int i = 0; i < budget; ++i) {
    std::vector<NameEntry> entries;
    int fan = 1 + pick(3);
    for (int j = 0; j < fan; ++j) {
      NameId child = made[pick(static_cast<int>(made.size()))];
      if (pool.rank(child) >= 2) continue;  // keep the root at rank <= 3
      entries.emplace_back(child, pick(poset.size()));
    }
    NameId id = pool.make(std::move(entries));
    if (std::find(made.begin(), made.end(), id) == made.end()) {
      made.push_back(id);
      labels.emplace_back("m" + std::to_string(made.size() - 1), id);
    }
  }

  // Root: a handful of names, closed under taking entries of entries.
  std::vector<NameEntry> root_entries;
  int picks = 1 + pick(3);
  for (int i = 0; i < picks; ++i)
    root_entries.emplace_back(made[pick(static_cast<int>(made.size()))], pick(poset.size()));
  std::vector<NameEntry> closed = root_entries;
  for (std::size_t i = 0; i < closed.size(); ++i)
    for (const NameEntry& inner : pool.entries(closed[i].first))
      if (std::find(closed.begin(), closed.end(), inner) == closed.end()) closed.push_back(inner);
  NameId root = pool.make(std::move(closed));
  labels.emplace_back("t", root);

  if (pool.potential_elements(root).size() > 4) return std::nullopt;

  // Half the time aim at a realized target, otherwise a random transitive set.
  Hf x;
  auto generics = poset.all_generic_filters();
  if (pick(2) == 0) {
    x = pool.interpret(root, generics[pick(static_cast<int>(generics.size()))]);
  } else {
    std::vector<Hf> candidates = transitive_sets_up_to(3, 5);
    x = candidates[pick(static_cast<int>(candidates.size()))];
  }
  if (static_cast<int>(x.size()) > 5) return std::nullopt;

  try {
    return Instance(std::move(poset), std::move(pool), std::move(labels), root, x);
  } catch (const LabError&) {
    return std::nullopt;
  }
}

struct CorpusEntry {
  Instance instance;
  std::unique_ptr<Verifier> verifier;  // built during the timed criterion
};

std::vector<CorpusEntry> corpus;

void build_corpus() {
  corpus.push_back({t1("{{}}"), nullptr});
  corpus.push_back({t1("{{},{{}}}"), nullptr});
  corpus.push_back({t1("{{},{{}},{{{}}}}"), nullptr});

  std::mt19937_64 rng(kCorpusSeed);
  int made = 0;
  while (made < kCorpusSize) {
    auto inst = random_instance(rng);
    if (!inst) continue;
    corpus.push_back({*inst, nullptr});
    ++made;
  }
  // Negatives: mutate each target away from every realized value.
  std::size_t base = corpus.size();
  for (std::size_t i = 0; i < base; ++i) {
    try {
      corpus.push_back({mutate_x(corpus[i].instance, kCorpusSeed + i).instance, nullptr});
    } catch (const LabError&) {
      // every candidate realized; no negative for this one
    }
  }
}

void criterion_realizability() {
  auto start = std::chrono::steady_clock::now();
  int discrepancies = 0;
  std::string first;
  for (CorpusEntry& entry : corpus) {
    entry.verifier = std::make_unique<Verifier>(entry.instance);
    CheckEntry check = entry.verifier->check_realizability();
    if (!check.pass) {
      ++discrepancies;
      if (first.empty()) first = entry.instance.digest() + " " + check.counterexample;
    }
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ostringstream detail;
  detail << corpus.size() << " instances, " << discrepancies << " discrepancies, "
         << secs << "s";
  bool pass = discrepancies == 0 && secs <= 60.0;
  report("realizability-equivalence", pass, detail.str() + (first.empty() ? "" : "; " + first));
}

void criterion_truth_lemma() {
  long long triples = 0;
  int discrepancies = 0;
  for (CorpusEntry& entry : corpus) {
    const Instance& inst = entry.instance;
    const NamePool& pool = inst.pool();
    const Poset& P = inst.poset();
    const ForcingRelation& fr = entry.verifier->engine().forcing();
    for (int p = 0; p < P.size(); ++p)
      for (NameId s = 0; s < pool.size(); ++s)
        for (NameId t = 0; t < pool.size(); ++t) {
          ++triples;
          if (fr.forces_mem(p, s, t) != sem_forces_mem(P, pool, p, s, t)) ++discrepancies;
          if (fr.forces_eq(p, s, t) != sem_forces_eq(P, pool, p, s, t)) ++discrepancies;
          if (fr.forces_neg_mem(p, s, t) != sem_forces_neg_mem(P, pool, p, s, t)) ++discrepancies;
          if (fr.forces_neg_eq(p, s, t) != sem_forces_neg_eq(P, pool, p, s, t)) ++discrepancies;
        }
  }
  report("truth-lemma-oracle", discrepancies == 0,
         std::to_string(triples) + " triples, " + std::to_string(discrepancies) +
             " discrepancies");
}

void criterion_strategy_equivalence() {
  int checked = 0, discrepancies = 0;
  for (CorpusEntry& entry : corpus) {
    if (entry.instance.poset().size() > 8) continue;
    ++checked;
    const SigmaEngine& engine = entry.verifier->engine();
    SigmaResult exhaustive = engine.sigma_plus(Strategy::exhaustive_dense);
    if (exhaustive.fixed_point != entry.verifier->result().fixed_point ||
        exhaustive.trace.stages != entry.verifier->result().trace.stages)
      ++discrepancies;
  }
  report("strategy-equivalence", discrepancies == 0,
         std::to_string(checked) + " instances, " + std::to_string(discrepancies) +
             " discrepancies");
}

void criterion_round_trip() {
  int filters = 0, subsets = 0, failures = 0;
  std::string first;
  for (CorpusEntry& entry : corpus) {
    Verifier& v = *entry.verifier;
    const Instance& inst = entry.instance;
    for (const Filter& g : inst.poset().all_generic_filters()) {
      if (inst.pool().interpret(inst.root(), g) != inst.x()) continue;
      ++filters;
      CheckEntry check = v.check_filter_to_generic(g);
      if (!check.pass) {
        ++failures;
        if (first.empty()) first = inst.digest() + " " + check.counterexample;
      }
    }
    for (const auto& gamma : v.generic_subsets()) {
      ++subsets;
      CheckEntry check = v.check_generic_to_filter(v.materialize(gamma));
      if (!check.pass) {
        ++failures;
        if (first.empty()) first = inst.digest() + " " + check.counterexample;
      }
    }
    CheckEntry bij = v.check_realizer_bijection();
    if (!bij.pass) {
      ++failures;
      if (first.empty()) first = inst.digest() + " " + bij.counterexample;
    }
  }
  report("round-trip", failures == 0,
         std::to_string(filters) + " realizing filters, " + std::to_string(subsets) +
             " generic subsets, " + std::to_string(failures) + " failures" +
             (first.empty() ? "" : "; " + first));
}

void criterion_lemma_suite() {
  int failures = 0;
  std::string first;
  for (CorpusEntry& entry : corpus) {
    Report props = entry.verifier->check_properties();
    for (const CheckEntry& check : props.checks)
      if (!check.pass) {
        ++failures;
        if (first.empty())
          first = entry.instance.digest() + " " + check.id + ": " + check.counterexample;
      }
  }

  // Pinned fixture values: the stage index and the strictness witness.
  Instance x1 = t1("{{}}");
  SigmaEngine engine(x1);
  SigmaResult result = engine.sigma_plus();
  if (result.trace.lambda != 1) {
    ++failures;
    if (first.empty()) first = "fixture lambda = " + std::to_string(result.trace.lambda);
  }
  Supercondition witness{x1.poset().index("p0"),
                         Assignment::from_pairs({{*x1.lookup_name("b"), Hf::empty()}})};
  auto id = engine.find(witness);
  bool strict = id.has_value();
  const auto& stages = result.trace.stages;
  strict = strict && std::binary_search(stages[0].begin(), stages[0].end(), *id);
  strict = strict && !std::binary_search(stages[1].begin(), stages[1].end(), *id);
  if (!strict) {
    ++failures;
    if (first.empty()) first = "strictness witness missing from stage 0 \\ stage 1";
  }

  report("lemma-suite", failures == 0,
         std::to_string(corpus.size()) + " instances, " + std::to_string(failures) +
             " failures" + (first.empty() ? "" : "; " + first));
}

void criterion_builder() {
  long long starts = 0;
  int failures = 0;
  std::string first;
  for (CorpusEntry& entry : corpus) {
    Verifier& v = *entry.verifier;
    const Instance& inst = entry.instance;
    for (ScId id : v.result().fixed_point) {
      ++starts;
      Supercondition start = v.engine().sc_value(id);
      try {
        auto [g, phi] = v.build_generic(start);
        auto [g2, phi2] = v.build_generic(start);
        bool ok = g.contains(start.condition) &&
                  inst.pool().interpret(inst.root(), g) == inst.x() &&
                  a_of_g(inst, g).extends(start.assignment) && g2 == g && phi2 == phi;
        if (!ok) {
          ++failures;
          if (first.empty())
            first = inst.digest() + " start " + render_supercondition(inst, start);
        }
      } catch (const std::exception& e) {
        ++failures;
        if (first.empty()) first = inst.digest() + " " + e.what();
      }
    }
  }
  report("constructive-builder", failures == 0,
         std::to_string(starts) + " starts, " + std::to_string(failures) + " failures" +
             (first.empty() ? "" : "; " + first));
}

void criterion_family() {
  Report family = check_family(t1("{{}}"), 3);
  std::set<std::string> accepted;
  for (const Hf& x : transitive_sets_up_to(3, 8)) {
    SigmaEngine engine(t1("{{}}").with_x(x));
    if (!engine.sigma_plus().fixed_point.empty()) accepted.insert(x.str());
  }
  std::set<std::string> expected = {"{{}}", "{{},{{}}}"};
  bool pass = family.all_pass() && accepted == expected;
  std::string detail = std::to_string(family.checks.size()) + " targets, accepted {";
  bool firstx = true;
  for (const std::string& s : accepted) {
    if (!firstx) detail += ", ";
    detail += s;
    firstx = false;
  }
  detail += "}";
  report("family-dual-path", pass, detail);
}

int run_cli(const std::string& cli, const std::string& args) {
  int status = std::system((cli + " " + args).c_str());
  if (status < 0) return -1;
  return WEXITSTATUS(status);
}

void criterion_cli(const std::string& cli) {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / ("forcing-lab-acceptance-" + std::to_string(::getpid()));
  fs::create_directories(dir);
  std::string quiet = " > /dev/null 2> /dev/null";
  auto at = [&](const char* f) { return (dir / f).string(); };

  {
    std::ofstream bad(at("malformed.json"));
    bad << "{ this is not json";
  }
  int failures = 0;
  std::string first;
  auto expect = [&](const std::string& args, int want) {
    int got = run_cli(cli, args + quiet);
    if (got != want) {
      ++failures;
      if (first.empty())
        first = "'" + args + "' exited " + std::to_string(got) + ", wanted " + std::to_string(want);
    }
  };

  expect("gen two_branch --X '{{}}' --out " + at("t1.json"), 0);
  expect("gen two_branch --X '{{},{{}},{{{}}}}' --out " + at("t1_x3.json"), 0);
  expect("gen cohen_trunc --n 3 --out " + at("cohen3.json"), 0);

  expect("validate " + at("t1.json"), 0);
  expect("validate " + at("missing.json"), 2);
  expect("validate " + at("malformed.json"), 2);

  expect("sigma " + at("t1.json"), 0);
  expect("sigma " + at("t1_x3.json"), 1);
  expect("sigma --strategy exhaustive-dense " + at("cohen3.json"), 2);

  expect("generics " + at("t1.json"), 0);
  expect("forces " + at("t1.json") + " p1 eq b e", 0);
  expect("forces " + at("t1.json") + " top eq b e", 1);
  expect("verify " + at("t1.json") + " --suite all", 0);
  expect("verify " + at("t1_x3.json") + " --suite all", 0);
  expect("gen bogus_family", 2);

  fs::remove_all(dir);
  report("cli-exit-codes", failures == 0,
         failures == 0 ? "matrix of 14 invocations" : first);
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli;
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--cli") cli = argv[i + 1];

  build_corpus();
  std::cout << "corpus: " << corpus.size() << " instances (fixture + " << kCorpusSize
            << " random + mutated negatives)\n";

  criterion_realizability();
  criterion_truth_lemma();
  criterion_strategy_equivalence();
  criterion_round_trip();
  criterion_lemma_suite();
  criterion_builder();
  criterion_family();
  if (!cli.empty())
    criterion_cli(cli);
  else
    report("cli-exit-codes", false, "no --cli path given");

  bool all = true;
  for (const Criterion& c : results) all = all && c.pass;
  std::cout << (all ? "acceptance: all criteria pass\n" : "acceptance: FAILURES\n");
  return all ? 0 : 1;
}
