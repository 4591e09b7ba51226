#include "flab/hf.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <mutex>
#include <unordered_map>

#include "flab/error.hpp"

namespace flab {

namespace detail {

struct Node {
  std::vector<Hf> members;  // sorted canonically, duplicate-free
  std::string text;         // canonical braces form
  int rank = 0;
  bool transitive = false;
};

// Process-wide intern table. Append-only; a deque keeps node references
// stable across growth. Interning is serialized; lookups read already
// published, immutable nodes and take no lock.
class HfUniverse {
 public:
  static HfUniverse& get() {
    static HfUniverse u;
    return u;
  }

  HfUniverse() {
    Node empty;
    empty.text = "{}";
    empty.transitive = true;
    nodes_.push_back(std::move(empty));
    index_["{}"] = 0;
  }

  Hf intern(std::vector<Hf> members) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    std::string text = "{";
    for (std::size_t i = 0; i < members.size(); ++i) {
      if (i) text += ',';
      text += members[i].str();
    }
    text += '}';

    Node node;
    node.rank = 0;
    node.transitive = true;
    for (const Hf& m : members) {
      node.rank = std::max(node.rank, m.rank() + 1);
      for (const Hf& mm : m.members())
        if (!std::binary_search(members.begin(), members.end(), mm)) node.transitive = false;
    }
    node.members = std::move(members);

    std::lock_guard<std::mutex> lock(mu_);
    auto it = index_.find(text);
    if (it != index_.end()) return Hf(it->second);
    node.text = std::move(text);
    nodes_.push_back(std::move(node));
    std::uint32_t id = static_cast<std::uint32_t>(nodes_.size() - 1);
    index_[nodes_.back().text] = id;
    return Hf(id);
  }

  const Node& node(std::uint32_t id) const { return nodes_[id]; }

 private:
  std::mutex mu_;
  std::deque<Node> nodes_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

}  // namespace detail

namespace {

using detail::HfUniverse;
using detail::Node;

const Node& node_of(std::uint32_t id) { return HfUniverse::get().node(id); }

Hf parse_at(std::string_view s, std::size_t& i) {
  auto skip_ws = [&] {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  };
  skip_ws();
  if (i >= s.size() || s[i] != '{') throw LabError(Errc::parse, "expected '{' in HF value");
  ++i;
  std::vector<Hf> members;
  skip_ws();
  if (i < s.size() && s[i] == '}') {
    ++i;
    return Hf::make(std::move(members));
  }
  while (true) {
    members.push_back(parse_at(s, i));
    skip_ws();
    if (i >= s.size()) throw LabError(Errc::parse, "unterminated HF value");
    if (s[i] == ',') {
      ++i;
      continue;
    }
    if (s[i] == '}') {
      ++i;
      return Hf::make(std::move(members));
    }
    throw LabError(Errc::parse, std::string("unexpected character '") + s[i] + "' in HF value");
  }
}

}  // namespace

Hf Hf::empty() { return Hf(0); }

Hf Hf::make(std::vector<Hf> members) { return HfUniverse::get().intern(std::move(members)); }

Hf Hf::parse(std::string_view text) {
  std::size_t i = 0;
  Hf result = parse_at(text, i);
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  if (i != text.size()) throw LabError(Errc::parse, "trailing characters after HF value");
  return result;
}

const std::vector<Hf>& Hf::members() const { return node_of(id_).members; }

bool Hf::contains(Hf x) const {
  const std::vector<Hf>& ms = node_of(id_).members;
  return std::binary_search(ms.begin(), ms.end(), x);
}

int Hf::rank() const { return node_of(id_).rank; }

bool Hf::is_transitive() const { return node_of(id_).transitive; }

Hf Hf::transitive_closure() const {
  if (is_transitive()) return *this;
  std::vector<Hf> acc = members();
  for (std::size_t i = 0; i < acc.size(); ++i) {
    for (const Hf& m : acc[i].members()) {
      if (std::find(acc.begin(), acc.end(), m) == acc.end()) acc.push_back(m);
    }
  }
  return Hf::make(std::move(acc));
}

const std::string& Hf::str() const { return node_of(id_).text; }

bool Hf::operator<(const Hf& o) const {
  if (id_ == o.id_) return false;
  const Node& a = node_of(id_);
  const Node& b = node_of(o.id_);
  if (a.rank != b.rank) return a.rank < b.rank;
  return std::lexicographical_compare(a.members.begin(), a.members.end(), b.members.begin(),
                                      b.members.end());
}

std::vector<Hf> transitive_sets_up_to(int max_rank, std::size_t max_size) {
  if (max_rank < 0) return {};
  if (max_rank > 4) throw LabError(Errc::size_cap, "transitive enumeration capped at rank 4");
  std::vector<Hf> stage;  // elements of V_max_rank
  for (int r = 0; r < max_rank; ++r) {
    std::vector<Hf> next;
    std::size_t n = stage.size();
    for (std::size_t bits = 0; bits < (std::size_t{1} << n); ++bits) {
      std::vector<Hf> ms;
      for (std::size_t i = 0; i < n; ++i)
        if (bits & (std::size_t{1} << i)) ms.push_back(stage[i]);
      next.push_back(Hf::make(std::move(ms)));
    }
    std::sort(next.begin(), next.end());
    stage = std::move(next);
  }
  std::vector<Hf> out;
  std::size_t n = stage.size();
  for (std::size_t bits = 0; bits < (std::size_t{1} << n); ++bits) {
    std::vector<Hf> ms;
    for (std::size_t i = 0; i < n; ++i)
      if (bits & (std::size_t{1} << i)) ms.push_back(stage[i]);
    if (ms.size() > max_size) continue;
    Hf x = Hf::make(std::move(ms));
    if (x.is_transitive()) out.push_back(x);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace flab
