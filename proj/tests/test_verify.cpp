#include <catch2/catch_amalgamated.hpp>

#include "densefactor/densefactor.hpp"
#include "support/oracles.hpp"

using namespace densefactor;
using testsupport::inverses_of;
using testsupport::naive_partial_factorization;

TEST_CASE("partial factorization oracle on the worked examples") {
  auto z8 = groups::cyclic(8);
  CHECK(is_partial_factorization(*z8, {Element{{0}}, Element{{1}}},
                                 {Element{{0}}, Element{{2}}})
            .pass);
  VerificationReport collide = is_partial_factorization(
      *z8, {Element{{0}}, Element{{2}}}, {Element{{0}}, Element{{2}}});
  CHECK_FALSE(collide.pass);
  REQUIRE_FALSE(collide.witnesses.empty());

  CHECK(is_partial_factorization(*z8, {z8->identity()},
                                 {Element{{3}}, Element{{5}}, Element{{7}}})
            .pass);
}

TEST_CASE("factorization oracle checks cardinality") {
  auto z8 = groups::cyclic(8);
  CHECK(is_factorization(*z8,
                         {Element{{0}}, Element{{1}}, Element{{4}},
                          Element{{5}}},
                         {Element{{0}}, Element{{2}}})
            .pass);
  auto z6 = groups::cyclic(6);
  CHECK(is_factorization(*z6, {Element{{0}}, Element{{3}}},
                         {Element{{0}}, Element{{1}}, Element{{2}}})
            .pass);
  VerificationReport partial_only = is_factorization(
      *z8, {Element{{0}}, Element{{1}}}, {Element{{0}}, Element{{2}}});
  CHECK_FALSE(partial_only.pass);  // covers only 4 of 8
}

TEST_CASE("oracle matches the naive double-loop recount on random pairs") {
  auto gen = testsupport::rng(23);
  std::vector<GroupPtr> corpus = {groups::cyclic(16), groups::cyclic(12),
                                  groups::quaternion(),
                                  groups::direct_product({2, 2, 2, 2}),
                                  groups::dihedral(4)};
  for (const auto& g : corpus) {
    INFO(g->describe());
    std::uniform_int_distribution<int> size_dist(1, 5);
    for (int trial = 0; trial < 60; ++trial) {
      std::vector<Element> a, b;
      for (int i = size_dist(gen); i-- > 0;)
        a.push_back(testsupport::random_element(g, gen));
      for (int i = size_dist(gen); i-- > 0;)
        b.push_back(testsupport::random_element(g, gen));
      std::sort(a.begin(), a.end());
      a.erase(std::unique(a.begin(), a.end()), a.end());
      std::sort(b.begin(), b.end());
      b.erase(std::unique(b.begin(), b.end()), b.end());
      bool naive = naive_partial_factorization(*g, a, b);
      CHECK(is_partial_factorization(*g, a, b).pass == naive);
    }
  }
}

TEST_CASE("oracle verdict is mirror-invariant") {
  auto gen = testsupport::rng(31);
  auto s4 = groups::symmetric(4);
  std::uniform_int_distribution<int> size_dist(1, 4);
  for (int trial = 0; trial < 80; ++trial) {
    std::vector<Element> a, b;
    for (int i = size_dist(gen); i-- > 0;)
      a.push_back(testsupport::random_element(s4, gen));
    for (int i = size_dist(gen); i-- > 0;)
      b.push_back(testsupport::random_element(s4, gen));
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    bool forward = is_partial_factorization(*s4, a, b).pass;
    bool mirror = is_partial_factorization(*s4, inverses_of(*s4, b),
                                           inverses_of(*s4, a))
                      .pass;
    CHECK(forward == mirror);
  }
}

TEST_CASE("density report flags exactly the missed base sets") {
  auto z = groups::integer_lattice(1);
  BaseFamily base({BaseSet::arithmetic_progression(z, {2}, {0}),
                   BaseSet::arithmetic_progression(z, {2}, {1})});
  CHECK(density_report({Element{{0}}, Element{{1}}}, base, 2).pass);

  VerificationReport miss =
      density_report({Element{{0}}, Element{{2}}}, base, 2);
  CHECK_FALSE(miss.pass);
  REQUIRE(miss.witnesses.size() == 1);
  CHECK(miss.witnesses.front().find("U_1") != std::string::npos);

  VerificationReport empty = density_report({}, base, 2);
  CHECK_FALSE(empty.pass);
  CHECK(empty.witnesses.size() == 2);

  CHECK_THROWS_AS(density_report({}, base, 3), UsageError);
}

TEST_CASE("squares evidence distinguishes doubling from boolean collapse") {
  auto z = groups::integer_lattice(1);
  BaseSet evens = BaseSet::arithmetic_progression(z, {2}, {0});
  CHECK(squares_check(evens, 50) == 50);

  auto boolean = groups::boolean_sum();
  BaseSet cyl = BaseSet::cylinder(boolean, {0}, {});
  CHECK(squares_check(cyl, 50) == 1);

  auto z8 = groups::cyclic(8);
  std::vector<Element> all;
  for (int i = 0; i < 8; ++i) all.push_back(Element{{i}});
  BaseSet whole = BaseSet::explicit_set(z8, all);
  CHECK(squares_check(whole, 8) == 4);  // doubled residues {0,2,4,6}
}
