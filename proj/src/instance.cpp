#include "flab/instance.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "flab/error.hpp"
#include "json.hpp"

namespace flab {

namespace {

using ojson = nlohmann::ordered_json;

constexpr const char* kCheckPrefix = "check:";

bool is_check_ref(const std::string& s) { return s.rfind(kCheckPrefix, 0) == 0; }

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[v & 0xf];
    v >>= 4;
  }
  return out;
}

long long parse_ll(const std::string& s) {
  try {
    std::size_t pos = 0;
    long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw LabError(Errc::param, "bad numeric value '" + s + "' in caps");
  }
}

std::string filter_to_string(const Poset& P, const Filter& g) {
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

}  // namespace

Caps Caps::with_overrides(const std::string& overrides) const {
  Caps caps = *this;
  std::stringstream ss(overrides);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos) throw LabError(Errc::param, "caps entry '" + item + "' is not key=value");
    std::string key = item.substr(0, eq);
    long long value = parse_ll(item.substr(eq + 1));
    if (key == "p")
      caps.max_conditions = static_cast<int>(value);
    else if (key == "pe")
      caps.max_pe = static_cast<int>(value);
    else if (key == "x")
      caps.max_x = static_cast<int>(value);
    else if (key == "pplus")
      caps.max_pplus = value;
    else if (key == "dense")
      caps.max_dense_poset = static_cast<int>(value);
    else
      throw LabError(Errc::param, "unknown caps key '" + key + "'");
  }
  return caps;
}

Caps Caps::from_env() {
  Caps caps;
  if (const char* env = std::getenv("FORCING_LAB_CAPS")) caps = caps.with_overrides(env);
  return caps;
}

Instance::Instance(Poset poset, NamePool pool, std::vector<std::pair<std::string, NameId>> labels,
                   NameId root, Hf x, Caps caps)
    : poset_(std::move(poset)),
      pool_(std::move(pool)),
      labels_(std::move(labels)),
      root_(root),
      x_(x),
      caps_(caps) {
  if (poset_.size() > caps_.max_conditions)
    throw LabError(Errc::size_cap, "poset exceeds the conditions cap");

  std::sort(labels_.begin(), labels_.end());
  for (std::size_t i = 0; i + 1 < labels_.size(); ++i)
    if (labels_[i].first == labels_[i + 1].first && labels_[i].second != labels_[i + 1].second)
      throw LabError(Errc::parse, "label '" + labels_[i].first + "' bound twice");
  labels_.erase(std::unique(labels_.begin(), labels_.end()), labels_.end());

  if (!x_.is_transitive()) {
    Hf witness = Hf::empty();
    for (const Hf& m : x_.members())
      for (const Hf& mm : m.members())
        if (!x_.contains(mm)) witness = mm;
    throw LabError(Errc::non_transitive_x, "X = " + x_.str() + " lacks element " + witness.str());
  }
  if (static_cast<int>(x_.size()) > caps_.max_x)
    throw LabError(Errc::size_cap, "X exceeds the element cap");
  x_elements_ = x_.members();

  pe_ = pool_.potential_elements(root_);
  if (static_cast<int>(pe_.size()) > caps_.max_pe)
    throw LabError(Errc::size_cap, "pe(root) exceeds the name cap");

  for (const Filter& g : poset_.all_generic_filters()) {
    Hf value = pool_.interpret(root_, g);
    if (!value.is_transitive()) {
      Hf bad = Hf::empty();
      for (const Hf& m : value.members())
        for (const Hf& mm : m.members())
          if (!value.contains(mm)) bad = m;
      throw LabError(Errc::non_transitive_t,
                     "root interprets to non-transitive " + value.str() + " under G = " +
                         filter_to_string(poset_, g) + " (element " + bad.str() + ")");
    }
  }

  std::sort(pe_.begin(), pe_.end(),
            [this](NameId a, NameId b) { return label(a) < label(b); });

  digest_ = hex64(fnv1a64(serialize()));
}

std::string Instance::label(NameId s) const {
  for (const auto& [lbl, id] : labels_)
    if (id == s) return lbl;  // labels_ sorted, first hit is least
  if (pool_.is_check(s)) return std::string(kCheckPrefix) + pool_.check_value(s)->str();
  throw LabError(Errc::dangling_name, "name without label");
}

std::optional<NameId> Instance::lookup_name(const std::string& label) const {
  for (const auto& [lbl, id] : labels_)
    if (lbl == label) return id;
  return std::nullopt;
}

std::string Instance::serialize() const {
  ojson j;
  j["conditions"] = ojson::array();
  for (int p = 0; p < poset_.size(); ++p) j["conditions"].push_back(poset_.id(p));
  j["top"] = poset_.id(poset_.top());
  j["order"] = ojson::array();
  for (const auto& [a, b] : poset_.cover_pairs())
    j["order"].push_back(ojson::array({poset_.id(a), poset_.id(b)}));

  // Names in (rank, label) order so constituents precede their parents.
  std::vector<std::pair<std::string, NameId>> ordered = labels_;
  std::stable_sort(ordered.begin(), ordered.end(), [this](const auto& a, const auto& b) {
    return pool_.rank(a.second) < pool_.rank(b.second);
  });
  ojson names = ojson::object();
  for (const auto& [lbl, id] : ordered) {
    ojson entries = ojson::array();
    std::vector<std::pair<std::string, std::string>> rows;
    for (const auto& [child, cond] : pool_.entries(id))
      rows.emplace_back(label(child), poset_.id(cond));
    std::sort(rows.begin(), rows.end());
    for (const auto& [child, cond] : rows) entries.push_back(ojson::array({child, cond}));
    names[lbl] = std::move(entries);
  }
  j["names"] = std::move(names);
  j["root"] = label(root_);
  j["X"] = x_.str();
  return j.dump();
}

Instance Instance::with_x(Hf new_x) const {
  return Instance(poset_, pool_, labels_, root_, new_x, caps_);
}

Instance Instance::load(std::istream& in, Caps caps) {
  ojson j;
  try {
    j = ojson::parse(in);
  } catch (const std::exception& e) {
    throw LabError(Errc::parse, e.what());
  }
  if (!j.is_object()) throw LabError(Errc::parse, "instance file must be a JSON object");

  auto require = [&](const char* key, bool optional = false) -> const ojson* {
    if (!j.contains(key)) {
      if (optional) return nullptr;
      throw LabError(Errc::parse, std::string("missing field '") + key + "'");
    }
    return &j[key];
  };

  const ojson* jconds = require("conditions");
  if (!jconds->is_array()) throw LabError(Errc::parse, "'conditions' must be an array");
  std::vector<std::string> conditions;
  for (const auto& c : *jconds) {
    if (!c.is_string()) throw LabError(Errc::parse, "condition identifiers must be strings");
    conditions.push_back(c.get<std::string>());
  }

  std::vector<std::pair<std::string, std::string>> pairs;
  const ojson* jorder = require("order");
  if (!jorder->is_array()) throw LabError(Errc::parse, "'order' must be an array");
  for (const auto& pr : *jorder) {
    if (!pr.is_array() || pr.size() != 2 || !pr[0].is_string() || !pr[1].is_string())
      throw LabError(Errc::parse, "order entries must be [stronger, weaker] pairs");
    pairs.emplace_back(pr[0].get<std::string>(), pr[1].get<std::string>());
  }

  std::string top;
  if (const ojson* jtop = require("top", true)) {
    if (!jtop->is_string()) throw LabError(Errc::parse, "'top' must be a string");
    top = jtop->get<std::string>();
    if (std::find(conditions.begin(), conditions.end(), top) == conditions.end())
      throw LabError(Errc::unknown_condition, "top '" + top + "'");
  } else {
    // Adjoin a fresh maximum when the file does not designate one.
    top = "top";
    while (std::find(conditions.begin(), conditions.end(), top) != conditions.end()) top += "_";
    for (const std::string& c : conditions) pairs.emplace_back(c, top);
    conditions.push_back(top);
  }

  Poset poset = Poset::validate(conditions, pairs, top);
  NamePool pool(poset);

  const ojson* jnames = require("names");
  if (!jnames->is_object()) throw LabError(Errc::parse, "'names' must be an object");
  std::map<std::string, NameId> table;
  std::vector<std::pair<std::string, NameId>> labels;
  for (auto it = jnames->begin(); it != jnames->end(); ++it) {
    const std::string& lbl = it.key();
    if (is_check_ref(lbl))
      throw LabError(Errc::parse, "name label '" + lbl + "' may not start with 'check:'");
    if (table.count(lbl)) throw LabError(Errc::parse, "name '" + lbl + "' defined twice");
    const ojson& jentries = it.value();
    if (!jentries.is_array()) throw LabError(Errc::parse, "entries of '" + lbl + "' must be an array");
    std::vector<NameEntry> entries;
    for (const auto& je : jentries) {
      if (!je.is_array() || je.size() != 2 || !je[0].is_string() || !je[1].is_string())
        throw LabError(Errc::parse, "name entries must be [child, condition] pairs");
      std::string child = je[0].get<std::string>();
      NameId child_id;
      if (is_check_ref(child)) {
        child_id = pool.check_name(Hf::parse(child.substr(std::string(kCheckPrefix).size())));
      } else {
        auto found = table.find(child);
        if (found == table.end())
          throw LabError(Errc::dangling_name, "'" + child + "' referenced before definition");
        child_id = found->second;
      }
      entries.emplace_back(child_id, poset.index(je[1].get<std::string>()));
    }
    NameId id = pool.make(std::move(entries));
    table[lbl] = id;
    labels.emplace_back(lbl, id);
  }

  const ojson* jroot = require("root");
  if (!jroot->is_string()) throw LabError(Errc::parse, "'root' must be a string");
  auto root_it = table.find(jroot->get<std::string>());
  if (root_it == table.end())
    throw LabError(Errc::dangling_name, "root '" + jroot->get<std::string>() + "' is not defined");

  const ojson* jx = require("X");
  if (!jx->is_string()) throw LabError(Errc::parse, "'X' must be a braces string");
  Hf x = Hf::parse(jx->get<std::string>());

  return Instance(std::move(poset), std::move(pool), std::move(labels), root_it->second, x, caps);
}

Instance Instance::load_file(const std::string& path, Caps caps) {
  std::ifstream in(path);
  if (!in) throw LabError(Errc::parse, "cannot open '" + path + "'");
  return load(in, caps);
}

Instance Instance::load_string(const std::string& text, Caps caps) {
  std::istringstream in(text);
  return load(in, caps);
}

Family family_from_string(const std::string& s) {
  if (s == "trivial") return Family::trivial;
  if (s == "two_branch") return Family::two_branch;
  if (s == "cohen_trunc") return Family::cohen_trunc;
  if (s == "product_cohen_trunc") return Family::product_cohen_trunc;
  throw LabError(Errc::param, "unknown family '" + s + "'");
}

namespace {

Hf von_neumann(int n) {
  Hf v = Hf::empty();
  for (int i = 0; i < n; ++i) {
    std::vector<Hf> ms = v.members();
    ms.push_back(v);
    v = Hf::make(std::move(ms));
  }
  return v;
}

Instance gen_trivial(const GenParams& params, Caps caps) {
  Hf x = params.x.value_or(Hf::empty());
  Poset poset = Poset::validate({"top"}, {}, "top");
  NamePool pool(poset);
  NameId root = pool.check_name(x);
  return Instance(std::move(poset), std::move(pool), {{"t", root}}, root, x, caps);
}

Instance gen_two_branch(const GenParams& params, Caps caps) {
  Hf x = params.x.value_or(Hf::parse("{{}}"));
  Poset poset = Poset::validate({"top", "p0", "p1"}, {{"p0", "top"}, {"p1", "top"}}, "top");
  NamePool pool(poset);
  int p0 = poset.index("p0");
  int top = poset.top();
  NameId e = pool.empty_name();
  NameId b = pool.make({{e, p0}});
  NameId t = pool.make({{e, top}, {b, top}});
  return Instance(std::move(poset), std::move(pool), {{"e", e}, {"b", b}, {"t", t}}, t, x, caps);
}

// Chain of check-names for the von Neumann naturals 0..n-1.
std::vector<NameId> natural_names(NamePool& pool, int n) {
  std::vector<NameId> nats;
  for (int i = 0; i < n; ++i) nats.push_back(pool.check_name(von_neumann(i)));
  return nats;
}

Instance gen_cohen(const GenParams& params, Caps caps) {
  int n = params.n;
  if (n < 1 || n > 5) throw LabError(Errc::param, "cohen_trunc needs 1 <= n <= 5");
  // Nodes of the full binary tree of height n; longer strings are stronger.
  std::vector<std::string> conditions = {"b"};
  std::vector<std::pair<std::string, std::string>> pairs;
  std::vector<std::string> frontier = {"b"};
  for (int level = 0; level < n; ++level) {
    std::vector<std::string> next;
    for (const std::string& node : frontier) {
      for (char bit : {'0', '1'}) {
        std::string child = node + bit;
        conditions.push_back(child);
        pairs.emplace_back(child, node);
        next.push_back(child);
      }
    }
    frontier = std::move(next);
  }
  Poset poset = Poset::validate(conditions, pairs, "b");
  NamePool pool(poset);
  int top = poset.top();

  std::vector<NameId> nats = natural_names(pool, n);
  std::vector<std::pair<std::string, NameId>> labels;
  for (int i = 0; i < n; ++i) labels.emplace_back("n" + std::to_string(i), nats[i]);

  // The generic branch as a subset of n: bit i set iff some condition in G
  // says so.
  std::vector<NameEntry> branch_entries;
  for (const std::string& node : conditions) {
    for (int i = 0; i + 1 < static_cast<int>(node.size()); ++i) {
      if (node[i + 1] == '1') branch_entries.emplace_back(nats[i], poset.index(node));
    }
  }
  NameId branch = pool.make(std::move(branch_entries));
  labels.emplace_back("x", branch);

  std::vector<NameEntry> root_entries = {{branch, top}};
  for (NameId nat : nats) root_entries.emplace_back(nat, top);
  NameId root = pool.make(std::move(root_entries));
  labels.emplace_back("t", root);

  Hf x = params.x.value_or(von_neumann(n));
  return Instance(std::move(poset), std::move(pool), std::move(labels), root, x, caps);
}

Instance gen_product_cohen(const GenParams& params, Caps caps) {
  int n = params.n, m = params.m;
  if (n < 1 || m < 1) throw LabError(Errc::param, "product_cohen_trunc needs n, m >= 1");
  if (n * m > 3) throw LabError(Errc::param, "product_cohen_trunc grid capped at 3 cells");

  // Conditions: partial functions grid -> {0,1}, row-major cell chars
  // '0'/'1'/'-'; more defined cells = stronger.
  int cells = n * m;
  std::vector<std::string> conditions;
  int total = 1;
  for (int i = 0; i < cells; ++i) total *= 3;
  for (int code = 0; code < total; ++code) {
    std::string id = "c";
    int c = code;
    for (int i = 0; i < cells; ++i) {
      id += "-01"[c % 3];
      c /= 3;
    }
    conditions.push_back(id);
  }
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const std::string& f : conditions) {
    for (int i = 0; i < cells; ++i) {
      if (f[1 + i] != '-') {
        std::string g = f;
        g[1 + i] = '-';
        pairs.emplace_back(f, g);
      }
    }
  }
  std::string top_id = "c" + std::string(cells, '-');
  Poset poset = Poset::validate(conditions, pairs, top_id);
  NamePool pool(poset);
  int top = poset.top();

  std::vector<NameId> nats = natural_names(pool, n);
  std::vector<std::pair<std::string, NameId>> labels;
  for (int i = 0; i < n; ++i) labels.emplace_back("n" + std::to_string(i), nats[i]);

  // Column reals: row i belongs to x_k iff some condition sets cell (i,k).
  std::vector<NameId> xs;
  for (int k = 0; k < m; ++k) {
    std::vector<NameEntry> entries;
    for (const std::string& f : conditions)
      for (int i = 0; i < n; ++i)
        if (f[1 + i * m + k] == '1') entries.emplace_back(nats[i], poset.index(f));
    NameId xk = pool.make(std::move(entries));
    xs.push_back(xk);
    labels.emplace_back("x" + std::to_string(k), xk);
  }

  std::vector<NameEntry> root_entries;
  for (NameId xk : xs) root_entries.emplace_back(xk, top);
  for (NameId nat : nats) root_entries.emplace_back(nat, top);
  NameId root = pool.make(std::move(root_entries));
  labels.emplace_back("t", root);

  Hf x = params.x.value_or(von_neumann(n));
  return Instance(std::move(poset), std::move(pool), std::move(labels), root, x, caps);
}

}  // namespace

Instance gen(Family family, const GenParams& params, std::uint64_t /*seed*/, Caps caps) {
  switch (family) {
    case Family::trivial: return gen_trivial(params, caps);
    case Family::two_branch: return gen_two_branch(params, caps);
    case Family::cohen_trunc: return gen_cohen(params, caps);
    case Family::product_cohen_trunc: return gen_product_cohen(params, caps);
  }
  throw LabError(Errc::param, "unknown family");
}

Mutation mutate_x(const Instance& inst, std::uint64_t seed) {
  std::vector<std::pair<Filter, Hf>> realized;
  for (const Filter& g : inst.poset().all_generic_filters())
    realized.emplace_back(g, inst.pool().interpret(inst.root(), g));

  int bound = std::min(inst.x().rank(), 4);
  std::vector<Hf> candidates =
      transitive_sets_up_to(bound, static_cast<std::size_t>(inst.caps().max_x));
  std::erase_if(candidates, [&](const Hf& c) {
    for (const auto& [g, value] : realized)
      if (value == c) return true;
    return false;
  });
  if (candidates.empty())
    throw LabError(Errc::no_mutation_found, "every transitive set of rank <= " +
                                                std::to_string(bound) + " is realized");

  std::mt19937_64 rng(seed);
  Hf pick = candidates[rng() % candidates.size()];
  return Mutation{inst.with_x(pick), std::move(realized)};
}

}  // namespace flab
