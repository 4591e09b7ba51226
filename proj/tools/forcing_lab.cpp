#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "flab/error.hpp"
#include "flab/instance.hpp"
#include "flab/sigma.hpp"
#include "flab/verify.hpp"

namespace {

using namespace flab;

Caps caps_for(const std::string& overrides) {
  Caps caps = Caps::from_env();
  if (!overrides.empty()) caps = caps.with_overrides(overrides);
  return caps;
}

void print_filter(const Poset& P, const Filter& g) {
  std::string out = "{";
  bool first = true;
  for (int p = 0; p < P.size(); ++p) {
    if (!g.contains(p)) continue;
    if (!first) out += ',';
    out += P.id(p);
    first = false;
  }
  std::cout << out << "}\n";
}

int cmd_validate(const std::string& file, const std::string& caps) {
  Instance inst = Instance::load_file(file, caps_for(caps));
  std::cout << "digest=" << inst.digest() << "\n";
  return 0;
}

int cmd_sigma(const std::string& file, const std::string& strategy, bool trace,
              const std::string& caps) {
  Instance inst = Instance::load_file(file, caps_for(caps));
  SigmaEngine engine(inst);
  SigmaResult result = engine.sigma_plus(strategy_from_string(strategy));
  std::cout << "digest=" << inst.digest() << "\n";
  std::cout << "sigma_plus size=" << result.fixed_point.size() << "\n";
  for (ScId id : result.fixed_point) std::cout << engine.render(id) << "\n";
  std::cout << "lambda=" << result.trace.lambda << "\n";
  if (trace)
    for (const std::string& line : trace_lines(engine, result.trace)) std::cout << line << "\n";
  return result.fixed_point.empty() ? 1 : 0;
}

int cmd_generics(const std::string& file, const std::string& caps) {
  Instance inst = Instance::load_file(file, caps_for(caps));
  for (const Filter& g : inst.poset().all_generic_filters()) print_filter(inst.poset(), g);
  return 0;
}

int cmd_forces(const std::string& file, const std::string& cond, const std::string& rel,
               const std::string& lhs, const std::string& rhs, const std::string& caps) {
  Instance inst = Instance::load_file(file, caps_for(caps));
  int p = inst.poset().index(cond);
  Rel relation;
  if (rel == "mem")
    relation = Rel::mem;
  else if (rel == "eq")
    relation = Rel::eq;
  else
    throw LabError(Errc::usage, "relation must be 'mem' or 'eq'");

  NamePool pool = inst.pool();  // scratch copy so inline check-names can be built
  auto resolve = [&](const std::string& token) -> NameId {
    if (auto id = inst.lookup_name(token)) return *id;
    if (token.rfind("check:", 0) == 0) return pool.check_name(Hf::parse(token.substr(6)));
    throw LabError(Errc::dangling_name, "name '" + token + "'");
  };
  NameId s = resolve(lhs);
  NameId t = resolve(rhs);
  ForcingRelation forcing(inst.poset(), pool);
  Decision d = forcing.decide(p, relation, s, t);
  std::cout << decision_name(d) << "\n";
  return d == Decision::forces ? 0 : 1;
}

int cmd_verify(const std::string& file, const std::string& suite, bool json,
               const std::string& caps) {
  Instance inst = Instance::load_file(file, caps_for(caps));
  Verifier verifier(inst);
  Report report = verifier.run_suite(suite_from_string(suite));
  if (json)
    std::cout << report.to_json() << "\n";
  else
    std::cout << report.to_text();
  return report.all_pass() ? 0 : 1;
}

int cmd_gen(const std::string& family, int n, int m, const std::string& x, std::uint64_t seed,
            const std::string& out, const std::string& caps) {
  GenParams params;
  params.n = n;
  params.m = m;
  if (!x.empty()) params.x = Hf::parse(x);
  Instance inst = gen(family_from_string(family), params, seed, caps_for(caps));
  if (out.empty()) {
    std::cout << inst.serialize() << "\n";
  } else {
    std::ofstream f(out);
    if (!f) throw LabError(Errc::parse, "cannot write '" + out + "'");
    f << inst.serialize() << "\n";
    std::cout << "digest=" << inst.digest() << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"forcing-lab: finite forcing instances, stage hierarchies and theorem checks"};
  app.require_subcommand(1);

  std::string file, caps, strategy = "minimal-reduction", suite = "all";
  std::string cond, rel, lhs, rhs;
  std::string family, xvalue, out;
  bool trace = false, json = false;
  int n = 1, m = 1;
  std::uint64_t seed = 0;

  auto* validate = app.add_subcommand("validate", "load and validate an instance file");
  validate->add_option("file", file)->required();
  validate->add_option("--caps", caps, "override caps, e.g. p=32,pplus=100000");

  auto* sigma = app.add_subcommand("sigma", "compute the supercondition fixed point");
  sigma->add_option("file", file)->required();
  sigma->add_option("--strategy", strategy, "minimal-reduction or exhaustive-dense");
  sigma->add_flag("--trace", trace, "print one line per stage");
  sigma->add_option("--caps", caps);

  auto* generics = app.add_subcommand("generics", "list the generic filters");
  generics->add_option("file", file)->required();
  generics->add_option("--caps", caps);

  auto* forces = app.add_subcommand("forces", "decide an atomic forcing query");
  forces->add_option("file", file)->required();
  forces->add_option("condition", cond)->required();
  forces->add_option("relation", rel, "mem or eq")->required();
  forces->add_option("lhs", lhs)->required();
  forces->add_option("rhs", rhs)->required();
  forces->add_option("--caps", caps);

  auto* verify = app.add_subcommand("verify", "run the verification suites");
  verify->add_option("file", file)->required();
  verify->add_option("--suite", suite, "all, sf, tmain, props or zapt");
  verify->add_flag("--json", json, "emit the report as JSON");
  verify->add_option("--caps", caps);

  auto* genc = app.add_subcommand("gen", "generate a built-in instance");
  genc->add_option("family", family, "trivial, two_branch, cohen_trunc, product_cohen_trunc")
      ->required();
  genc->add_option("--n", n);
  genc->add_option("--m", m);
  genc->add_option("--X", xvalue, "target set in braces form");
  genc->add_option("--seed", seed);
  genc->add_option("--out", out, "write the instance here instead of stdout");
  genc->add_option("--caps", caps);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;  // help exits clean, usage errors map to 2
  }

  try {
    if (*validate) return cmd_validate(file, caps);
    if (*sigma) return cmd_sigma(file, strategy, trace, caps);
    if (*generics) return cmd_generics(file, caps);
    if (*forces) return cmd_forces(file, cond, rel, lhs, rhs, caps);
    if (*verify) return cmd_verify(file, suite, json, caps);
    if (*genc) return cmd_gen(family, n, m, xvalue, seed, out, caps);
  } catch (const flab::LabError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "InternalError: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
