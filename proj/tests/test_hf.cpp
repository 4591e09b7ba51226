#include <algorithm>

#include "doctest.h"
#include "flab/error.hpp"
#include "flab/hf.hpp"

using namespace flab;

TEST_CASE("canonical form collapses duplicates and reorders") {
  CHECK(Hf::parse("{{},{}}").str() == "{{}}");
  CHECK(Hf::parse("{}").str() == "{}");
  CHECK(Hf::parse("{}") == Hf::empty());
  CHECK(Hf::parse("{{{}},{}}") == Hf::parse("{{},{{}}}"));
  CHECK(Hf::parse(" { { } , {\t} } ") == Hf::parse("{{}}"));
  // Parsing is idempotent on the canonical rendering.
  Hf x = Hf::parse("{{},{{}},{{},{{}}}}");
  CHECK(Hf::parse(x.str()) == x);
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(Hf::parse(""), LabError);
  CHECK_THROWS_AS(Hf::parse("{"), LabError);
  CHECK_THROWS_AS(Hf::parse("{},{}"), LabError);
  CHECK_THROWS_AS(Hf::parse("{a}"), LabError);
  CHECK_THROWS_AS(Hf::parse("{{},}"), LabError);
}

TEST_CASE("rank and membership") {
  CHECK(Hf::empty().rank() == 0);
  CHECK(Hf::parse("{{}}").rank() == 1);
  CHECK(Hf::parse("{{{}}}").rank() == 2);
  CHECK(Hf::parse("{{}}").contains(Hf::empty()));
  CHECK(!Hf::parse("{{{}}}").contains(Hf::empty()));
}

TEST_CASE("transitivity and closure") {
  CHECK(Hf::empty().is_transitive());
  CHECK(!Hf::parse("{{{}}}").is_transitive());
  CHECK(Hf::parse("{{{}}}").transitive_closure() == Hf::parse("{{},{{}}}"));
  CHECK(Hf::parse("{{},{{}}}").is_transitive());

  // Closure oracle: iterate adding members of members until stable, and
  // check minimality against every transitive superset in a small pool.
  for (const Hf& x : transitive_sets_up_to(3, 8)) {
    for (const Hf& extra : x.members()) {
      Hf probe = Hf::make({x, extra});
      std::vector<Hf> acc = probe.members();
      bool grew = true;
      while (grew) {
        grew = false;
        for (std::size_t i = 0; i < acc.size(); ++i)
          for (const Hf& m : acc[i].members())
            if (std::find(acc.begin(), acc.end(), m) == acc.end()) {
              acc.push_back(m);
              grew = true;
            }
      }
      CHECK(probe.transitive_closure() == Hf::make(acc));
      CHECK(probe.transitive_closure().is_transitive());
    }
  }
}

TEST_CASE("transitive enumeration of low rank") {
  // Hand-enumerated: the transitive sets of rank <= 3.
  std::vector<Hf> expected = {
      Hf::parse("{}"),
      Hf::parse("{{}}"),
      Hf::parse("{{},{{}}}"),
      Hf::parse("{{},{{}},{{{}}}}"),
      Hf::parse("{{},{{}},{{},{{}}}}"),
      Hf::parse("{{},{{}},{{{}}},{{},{{}}}}"),
  };
  std::sort(expected.begin(), expected.end());
  CHECK(transitive_sets_up_to(3, 8) == expected);
  CHECK(transitive_sets_up_to(0, 8) == std::vector<Hf>{Hf::empty()});
  // The size cap prunes.
  CHECK(transitive_sets_up_to(3, 2).size() == 3);  // {}, {{}}, {{},{{}}}
}

TEST_CASE("canonical order is total and rank-first") {
  std::vector<Hf> pool = transitive_sets_up_to(3, 8);
  for (const Hf& a : pool)
    for (const Hf& b : pool) {
      CHECK(((a < b) + (b < a) + (a == b)) == 1);
      if (a.rank() < b.rank()) CHECK(a < b);
    }
}
