#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "densefactor/densefactor.hpp"
#include "support/oracles.hpp"

using namespace densefactor;

TEST_CASE("membership per base-set kind") {
  auto z = groups::integer_lattice(1);
  BaseSet evens = BaseSet::arithmetic_progression(z, {2}, {0});
  CHECK(evens.contains(Element{{6}}));
  CHECK(evens.contains(Element{{-4}}));
  CHECK_FALSE(evens.contains(Element{{3}}));

  auto boolean = groups::boolean_sum();
  BaseSet cyl = BaseSet::cylinder(boolean, {0}, {});
  CHECK_FALSE(cyl.contains(Element{{2, 5}}));
  CHECK(cyl.contains(Element{{0, 5}}));

  auto z8 = groups::cyclic(8);
  BaseSet ex = BaseSet::explicit_set(z8, {Element{{1}}, Element{{3}}});
  CHECK(ex.contains(Element{{3}}));
  CHECK_FALSE(ex.contains(Element{{2}}));

  BaseSet cof = BaseSet::cofinite(boolean, {boolean->identity()});
  CHECK_FALSE(cof.contains(boolean->identity()));
  CHECK(cof.contains(Element{{4}}));
}

TEST_CASE("members stream in parent enumeration order") {
  auto z = groups::integer_lattice(1);
  BaseSet evens = BaseSet::arithmetic_progression(z, {2}, {0});
  std::vector<Element> expect = {Element{{0}}, Element{{2}}, Element{{-2}},
                                 Element{{4}}};
  for (std::size_t i = 0; i < expect.size(); ++i)
    CHECK(evens.member(i) == expect[i]);

  auto boolean = groups::boolean_sum();
  BaseSet cyl1 = BaseSet::cylinder(boolean, {1}, {});
  CHECK(cyl1.member(0) == Element{{1}});

  auto z8 = groups::cyclic(8);
  BaseSet ex = BaseSet::explicit_set(z8, {Element{{5}}, Element{{1}}});
  CHECK(ex.member(0) == Element{{1}});
  CHECK(ex.member(1) == Element{{5}});
  CHECK_THROWS_AS(ex.member(2), UsageError);
}

TEST_CASE("member streams agree with a contains-filtered enumeration") {
  auto boolean = groups::boolean_sum();
  auto z2 = groups::integer_lattice(2);
  std::vector<BaseSet> sets = {
      BaseSet::cylinder(boolean, {1, 3}, {0}),
      BaseSet::cylinder(boolean, {2}, {}),
      BaseSet::cofinite(boolean, {Element{{0}}, Element{{1}}}),
      BaseSet::arithmetic_progression(z2, {2, 3}, {1, 2}),
  };
  for (const auto& set : sets) {
    INFO(set.describe());
    GroupPtr g = set.group_ptr();
    EnumCursor parent(g);
    MemberCursor members(set);
    std::set<Element> seen;
    std::size_t matched = 0;
    for (int i = 0; i < 3000 && matched < 40; ++i) {
      auto e = parent.next();
      REQUIRE(e.has_value());
      if (!set.contains(*e)) continue;
      auto m = members.next();
      REQUIRE(m.has_value());
      CHECK(*m == *e);               // same order, no skips
      CHECK(seen.insert(*m).second);  // no repeats
      ++matched;
    }
    CHECK(matched == 40);
  }
}

TEST_CASE("cylinder membership is determined by the fixed coordinates") {
  auto boolean = groups::boolean_sum();
  BaseSet cyl = BaseSet::cylinder(boolean, {1}, {4});
  auto gen = testsupport::rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    Element e = testsupport::random_element(boolean, gen);
    bool direct = detail::BooleanSpan::has_coord(e, 1) &&
                  !detail::BooleanSpan::has_coord(e, 4);
    CHECK(cyl.contains(e) == direct);
  }
  // Product membership follows coordinate arithmetic.
  auto z = groups::integer_lattice(1);
  BaseSet ap = BaseSet::arithmetic_progression(z, {5}, {2});
  for (int trial = 0; trial < 200; ++trial) {
    Element a = testsupport::random_element(z, gen);
    Element b = testsupport::random_element(z, gen);
    Element sum = z->op(a, b);
    bool direct = ((sum[0] - 2) % 5) == 0;
    CHECK(ap.contains(sum) == direct);
  }
}

TEST_CASE("infinite guard counts distinct members") {
  auto z = groups::integer_lattice(1);
  BaseSet evens = BaseSet::arithmetic_progression(z, {2}, {0});
  CHECK(infinite_guard(evens, 100) == 100);

  auto z8 = groups::cyclic(8);
  BaseSet ex = BaseSet::explicit_set(z8, {Element{{1}}, Element{{3}}});
  CHECK(infinite_guard(ex, 100) == 2);

  auto boolean = groups::boolean_sum();
  BaseSet cof = BaseSet::cofinite(boolean, {boolean->identity()});
  CHECK(infinite_guard(cof, 50) == 50);
}

TEST_CASE("base families reject mixed groups and bad cylinders") {
  auto boolean = groups::boolean_sum();
  auto z8 = groups::cyclic(8);
  CHECK_THROWS_AS(BaseFamily({BaseSet::cylinder(boolean, {0}, {}),
                              BaseSet::explicit_set(z8, {Element{{1}}})}),
                  UsageError);
  CHECK_THROWS_AS(BaseSet::cylinder(boolean, {2}, {2}), UsageError);
  CHECK_THROWS_AS(BaseSet::cylinder(z8, {0}, {}), UsageError);
  CHECK_THROWS_AS(BaseSet::cofinite(z8, {}), UsageError);
}
