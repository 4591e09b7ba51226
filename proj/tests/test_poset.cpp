#include <algorithm>

#include "doctest.h"
#include "flab/error.hpp"
#include "flab/poset.hpp"
#include "support.hpp"

using namespace flab;

namespace {

Poset one_point() { return Poset::validate({"top"}, {}, "top"); }

Poset two_branch() {
  return Poset::validate({"top", "p0", "p1"}, {{"p0", "top"}, {"p1", "top"}}, "top");
}

// Full binary tree of height 2: 7 nodes.
Poset tree2() {
  return Poset::validate({"r", "a", "b", "aa", "ab", "ba", "bb"},
                         {{"a", "r"}, {"b", "r"}, {"aa", "a"}, {"ab", "a"}, {"ba", "b"}, {"bb", "b"}},
                         "r");
}

Poset diamond() {
  return Poset::validate({"t", "l", "r", "b"}, {{"l", "t"}, {"r", "t"}, {"b", "l"}, {"b", "r"}},
                         "t");
}

}  // namespace

TEST_CASE("validation computes the closure and rejects bad input") {
  Poset P = two_branch();
  CHECK(P.size() == 3);
  int p0 = P.index("p0"), p1 = P.index("p1"), top = P.index("top");
  CHECK(P.leq(p0, top));
  CHECK(P.leq(p1, top));
  CHECK(!P.leq(p0, p1));
  CHECK(!P.leq(p1, p0));
  CHECK(!P.compatible(p0, p1));
  CHECK(P.leq(p0, p0));

  // Transitivity is derived, not stored.
  Poset chain = Poset::validate({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}}, "c");
  CHECK(chain.leq(chain.index("a"), chain.index("c")));

  CHECK_THROWS_AS(Poset::validate({"a", "b", "t"}, {{"a", "b"}, {"b", "a"}, {"a", "t"}, {"b", "t"}}, "t"),
                  LabError);
  CHECK_THROWS_WITH_AS(Poset::validate({"a", "b"}, {{"b", "a"}}, "b"),
                       doctest::Contains("TopError"), LabError);
  CHECK_THROWS_AS(Poset::validate({"a"}, {{"a", "zz"}}, "a"), LabError);
  CHECK_THROWS_AS(Poset::validate({}, {}, "a"), LabError);
}

TEST_CASE("density") {
  Poset P = two_branch();
  CHECK(P.is_dense(P.all()));
  CHECK(P.is_dense(cond_bit(P.index("p0")) | cond_bit(P.index("p1"))));
  CHECK(!P.is_dense(cond_bit(P.index("p0")) | cond_bit(P.index("top"))));
  CHECK(one_point().is_dense(cond_bit(0)));
}

TEST_CASE("minimal elements") {
  CHECK(one_point().minimal_elements() == std::vector<int>{0});
  Poset P = two_branch();
  CHECK(P.minimal_mask() == (cond_bit(P.index("p0")) | cond_bit(P.index("p1"))));
  Poset T = tree2();
  std::vector<int> leaves = {T.index("aa"), T.index("ab"), T.index("ba"), T.index("bb")};
  std::sort(leaves.begin(), leaves.end());
  CHECK(T.minimal_elements() == leaves);
}

TEST_CASE("upward closures and generic filters") {
  Poset P = two_branch();
  int p0 = P.index("p0"), p1 = P.index("p1"), top = P.index("top");
  CHECK(P.upward_closure(top).members == cond_bit(top));
  CHECK(P.upward_closure(p0).members == (cond_bit(p0) | cond_bit(top)));
  CHECK(P.upward_closure(p1).members == (cond_bit(p1) | cond_bit(top)));

  auto gs = P.all_generic_filters();
  REQUIRE(gs.size() == 2);
  CHECK(gs[0] == P.upward_closure(p0));
  CHECK(gs[1] == P.upward_closure(p1));

  // An antichain of k atoms yields k filters.
  Poset A = Poset::validate({"t", "x", "y", "z"}, {{"x", "t"}, {"y", "t"}, {"z", "t"}}, "t");
  CHECK(A.all_generic_filters().size() == 3);
  CHECK(one_point().all_generic_filters().size() == 1);
}

TEST_CASE("dense subset enumeration") {
  CHECK(one_point().all_dense_subsets() == std::vector<CondSet>{cond_bit(0)});
  Poset P = two_branch();
  CondSet atoms = cond_bit(P.index("p0")) | cond_bit(P.index("p1"));
  auto denses = P.all_dense_subsets();
  REQUIRE(denses.size() == 2);  // exactly the supersets of the two atoms
  for (CondSet d : denses) CHECK((d & atoms) == atoms);

  Poset big = Poset::validate(
      {"a", "b", "c", "d", "e", "f", "g", "h", "i", "j", "k", "l", "m"},
      {{"a", "m"}, {"b", "m"}, {"c", "m"}, {"d", "m"}, {"e", "m"}, {"f", "m"},
       {"g", "m"}, {"h", "m"}, {"i", "m"}, {"j", "m"}, {"k", "m"}, {"l", "m"}},
      "m");
  CHECK_THROWS_AS(big.all_dense_subsets(), LabError);
}

TEST_CASE("generic filters are exactly the filters meeting every dense subset") {
  for (const Poset& P : {one_point(), two_branch(), tree2(), diamond(),
                         Poset::validate({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}}, "c")}) {
    auto denses = P.all_dense_subsets();
    auto generics = P.all_generic_filters();
    for (const Filter& f : flab::testing::all_filters(P)) {
      bool meets_all =
          std::all_of(denses.begin(), denses.end(), [&](CondSet d) { return (d & f.members) != 0; });
      bool listed = std::find(generics.begin(), generics.end(), f) != generics.end();
      CHECK(meets_all == listed);
    }
    // Every dense subset contains every minimal element; the minimal set is
    // itself dense.
    CHECK(P.is_dense(P.minimal_mask()));
    for (CondSet d : denses) CHECK((d & P.minimal_mask()) == P.minimal_mask());
  }
}
