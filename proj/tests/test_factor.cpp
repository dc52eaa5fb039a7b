#include <doctest.h>

#include "helpers.hpp"
#include "riskbn/factor.hpp"

using namespace riskbn;
using namespace riskbn::testing;

TEST_CASE("factor product sums and restricts consistently") {
  // f(x) over var 0, g(x,y) over vars 0,1
  Factor f({0}, {2}, {0.3, 0.7});
  Factor g({0, 1}, {2, 2}, {0.9, 0.1, 0.2, 0.8});
  Factor prod = f.multiply(g);
  REQUIRE(prod.scope() == std::vector<int>{0, 1});
  CHECK(prod.table()[0] == doctest::Approx(0.27));
  CHECK(prod.table()[1] == doctest::Approx(0.03));
  CHECK(prod.table()[2] == doctest::Approx(0.14));
  CHECK(prod.table()[3] == doctest::Approx(0.56));

  Factor marg = prod.marginalize(0);
  CHECK(marg.table()[0] == doctest::Approx(0.41));
  CHECK(marg.table()[1] == doctest::Approx(0.59));

  Factor rest = prod.restrict(1, 0);
  CHECK(rest.table()[0] == doctest::Approx(0.27));
  CHECK(rest.table()[1] == doctest::Approx(0.14));
}

TEST_CASE("from_axes permutes tables into ascending scope order") {
  // raw axes (2, 0): value(v2, v0) = 10*v2 + v0
  Factor f = Factor::from_axes({2, 0}, {2, 3}, {0, 1, 2, 10, 11, 12});
  REQUIRE(f.scope() == std::vector<int>{0, 2});
  REQUIRE(f.cards() == std::vector<std::size_t>{3, 2});
  // value at (v0, v2)
  CHECK(f.table()[0 * 2 + 0] == 0);
  CHECK(f.table()[0 * 2 + 1] == 10);
  CHECK(f.table()[2 * 2 + 1] == 12);
}

TEST_CASE("product with disjoint scopes forms an outer product") {
  Factor f({0}, {2}, {0.5, 0.5});
  Factor g({3}, {2}, {0.25, 0.75});
  Factor prod = f.multiply(g);
  REQUIRE(prod.scope() == std::vector<int>{0, 3});
  CHECK(prod.table()[1] == doctest::Approx(0.375));
  CHECK(prod.sum() == doctest::Approx(1.0));
}

TEST_CASE("eliminate_all_except agrees with direct marginalization") {
  Network net = chain(0.3, 0.9, 0.2);
  std::vector<Factor> factors = {Factor::from_cpt(net, 0),
                                 Factor::from_cpt(net, 1)};
  Factor joint = eliminate_all_except(factors, {1});
  // P(b=TRUE) = 0.3*0.9 + 0.7*0.2 = 0.41
  CHECK(joint.table()[0] == doctest::Approx(0.41).epsilon(1e-12));
  CHECK(joint.table()[1] == doctest::Approx(0.59).epsilon(1e-12));
}

TEST_CASE("mismatched cardinalities are rejected") {
  Factor f({0}, {2}, {0.5, 0.5});
  Factor g({0}, {3}, {0.2, 0.3, 0.5});
  CHECK_THROWS_AS(f.multiply(g), Error);
}
