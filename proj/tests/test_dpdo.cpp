#include <random>

#include "doctest.h"
#include "hhdx/dpdo.hpp"
#include "oracles.hpp"

using namespace hhdx;

namespace {

DPDOperator random_op(PrimeField f, std::size_t n, int deg, int q, std::mt19937& rng, int terms = 3) {
  DPDOperator a(f, n);
  for (int k = 0; k < terms; ++k) {
    Exponents e(n);
    DPIndex b(n);
    for (std::size_t i = 0; i < n; ++i) {
      e[i] = rng() % (deg + 1);
      b[i] = rng() % (q + 1);
    }
    a.add_term(e, b, 1 + rng() % (f.p() - 1 + (f.p() == 2 ? 1 : 0)));
  }
  return a;
}

}  // namespace

TEST_CASE("divided power composition rule") {
  for (std::uint32_t p : {2u, 3u, 5u}) {
    PrimeField f(p);
    for (int q = 0; q <= 8; ++q)
      for (int r = 0; r <= 8; ++r) {
        auto lhs = DPDOperator::divided_power(f, 1, 0, q) * DPDOperator::divided_power(f, 1, 0, r);
        auto rhs = DPDOperator::divided_power(f, 1, 0, q + r).scaled(oracle::binomial(q + r, q, p));
        CHECK(lhs == rhs);
      }
  }
}

TEST_CASE("commutator with a coordinate lowers the index") {
  PrimeField f(3);
  auto x = DPDOperator::coordinate(f, 1, 0);
  for (int q = 1; q <= 8; ++q)
    CHECK(dpdo_commutator(DPDOperator::divided_power(f, 1, 0, q), x) == DPDOperator::divided_power(f, 1, 0, q - 1));
}

TEST_CASE("action on monomials") {
  PrimeField f(2);
  auto d2 = DPDOperator::divided_power(f, 1, 0, 2);
  // C(6,2) = 15 = 1 mod 2
  CHECK(dpdo_act(d2, MultiPoly::monomial(f, {6})) == MultiPoly::monomial(f, {4}));
  CHECK(dpdo_act(d2, MultiPoly::monomial(f, {5})).is_zero());
}

TEST_CASE("products are faithful to the action") {
  std::mt19937 rng(8);
  for (std::uint32_t p : {2u, 3u}) {
    PrimeField f(p);
    for (int t = 0; t < 60; ++t) {
      std::size_t n = 1 + t % 2;
      auto a = random_op(f, n, 3, 4, rng), b = random_op(f, n, 3, 4, rng);
      auto g = MultiPoly::monomial(f, Exponents(n, 0));
      for (auto& e : monomials_up_to(n, 6)) g.add_term(e, rng() % p);
      CHECK(dpdo_act(a * b, g) == dpdo_act(a, dpdo_act(b, g)));
    }
  }
}

TEST_CASE("Laurent action and products") {
  PrimeField f(3);
  auto a = parse_operator(f, 1, "x1^-1*d1^(2) + 2*x1");
  auto b = parse_operator(f, 1, "x1^-2 + d1^(1)");
  for (int m = -5; m <= 5; ++m) {
    auto g = MultiPoly::monomial(f, {m});
    CHECK(dpdo_act(a * b, g) == dpdo_act(a, dpdo_act(b, g)));
  }
}

TEST_CASE("associativity") {
  std::mt19937 rng(9);
  PrimeField f(2);
  for (int t = 0; t < 30; ++t) {
    auto a = random_op(f, 2, 2, 3, rng), b = random_op(f, 2, 2, 3, rng), c = random_op(f, 2, 2, 3, rng);
    CHECK((a * b) * c == a * (b * c));
  }
}

TEST_CASE("capacity cap on divided-power indices") {
  PrimeField f(2);
  CHECK_THROWS_AS(DPDOperator::divided_power(f, 1, 0, 17), CapacityError);
  auto top = DPDOperator::divided_power(f, 1, 0, 16);
  auto one = DPDOperator::divided_power(f, 1, 0, 1);
  CHECK_THROWS_AS(top * one, CapacityError);
  // C(18, 9) is even, so this product vanishes and stays under the cap
  auto nine = DPDOperator::divided_power(f, 1, 0, 9);
  CHECK((nine * nine).is_zero());
}

TEST_CASE("order and centrality") {
  PrimeField f(2);
  auto a = parse_operator(f, 1, "x1*d1^(3) + d1^(1)");
  CHECK(order_of(a) == 3);
  CHECK(is_order_le(a, 3, 4));
  CHECK_FALSE(is_order_le(a, 2, 4));
  CHECK(centrality_depth(a) == 2);
  CHECK(centrality_depth(DPDOperator::coordinate(f, 1, 0)) == 0);
}

TEST_CASE("matrix realization of coordinate and derivative") {
  PrimeField f(2);
  auto t = matrix_realize(DPDOperator::coordinate(f, 1, 0), 1, 16);
  REQUIRE(t.size == 2);
  CHECK(t.at(0, 0).is_zero());
  CHECK(t.at(0, 1) == MultiPoly::monomial(f, {2}));
  CHECK(t.at(1, 0) == MultiPoly::constant(f, 1, 1));
  CHECK(t.at(1, 1).is_zero());
  auto d = matrix_realize(DPDOperator::divided_power(f, 1, 0, 1), 1, 16);
  CHECK(d.at(0, 1) == MultiPoly::constant(f, 1, 1));
  CHECK(d.at(0, 0).is_zero());
  CHECK(d.at(1, 0).is_zero());
  CHECK(d.at(1, 1).is_zero());
  CHECK_THROWS_AS(matrix_realize(DPDOperator::divided_power(f, 1, 0, 2), 1, 16), std::invalid_argument);
}

TEST_CASE("Morita compression of basis elements") {
  PrimeField f(2);
  for (int a = 0; a <= 4; ++a)
    for (int b = 0; b <= 4; ++b) {
      auto op = DPDOperator::monomial(f, {a}, {b});
      auto c = morita_compress(op, 1, 16);
      CHECK(c.certified);
      if (a % 2 == 0 && b % 2 == 0)
        CHECK(c.op == DPDOperator::monomial(f, {a / 2}, {b / 2}));
      else
        CHECK(c.op.is_zero());
    }
}

TEST_CASE("parser round trip") {
  std::mt19937 rng(10);
  PrimeField f(5);
  for (int t = 0; t < 30; ++t) {
    auto a = random_op(f, 2, 3, 3, rng);
    CHECK(parse_operator(f, 2, a.to_string()) == a);
  }
  CHECK(parse_operator(f, 1, "t*d^(2) - 3") == parse_operator(f, 1, "x1*d1^(2) + 2"));
  CHECK_THROWS_AS(parse_operator(f, 1, "x1 +* 2"), std::invalid_argument);
}
