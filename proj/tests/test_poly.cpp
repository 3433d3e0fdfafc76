#include <random>

#include "doctest.h"
#include "hhdx/poly.hpp"

using namespace hhdx;

namespace {

MultiPoly random_poly(PrimeField f, std::size_t n, int deg, std::mt19937& rng) {
  MultiPoly g(f, n);
  auto monos = monomials_up_to(n, deg);
  for (int k = 0; k < 5; ++k) g.add_term(monos[rng() % monos.size()], rng() % f.p());
  return g;
}

}  // namespace

TEST_CASE("rendering") {
  PrimeField f(3);
  auto x1 = MultiPoly::variable(f, 2, 0);
  auto x2 = MultiPoly::variable(f, 2, 1);
  CHECK(((x1 + x2) * (x1 + x2)).to_string() == "x1^2 + 2*x1*x2 + x2^2");
  CHECK(MultiPoly(f, 2).to_string() == "0");
  CHECK(MultiPoly::constant(f, 1, 5).to_string() == "2");
}

TEST_CASE("commutative ring axioms") {
  std::mt19937 rng(5);
  for (std::uint32_t p : {2u, 5u}) {
    PrimeField f(p);
    for (int t = 0; t < 50; ++t) {
      auto a = random_poly(f, 2, 4, rng), b = random_poly(f, 2, 4, rng), c = random_poly(f, 2, 4, rng);
      CHECK(a * b == b * a);
      CHECK((a * b) * c == a * (b * c));
      CHECK(a * (b + c) == a * b + a * c);
      CHECK((a - a).is_zero());
    }
  }
}

TEST_CASE("Frobenius is the p-th power map") {
  std::mt19937 rng(6);
  for (std::uint32_t p : {2u, 3u, 5u}) {
    PrimeField f(p);
    for (int t = 0; t < 20; ++t) {
      auto a = random_poly(f, 2, 3, rng);
      CHECK(frobenius_map(a) == a.pow(p));
      CHECK(twist_membership(frobenius_map(a), 1));
    }
  }
}

TEST_CASE("graded truncation flags dropped terms") {
  PrimeField f(2);
  GradedTruncation tr(3);
  auto x = MultiPoly::variable(f, 1, 0);
  auto r = tr.mul(x.pow(2), x.pow(2) + MultiPoly::constant(f, 1, 1));
  CHECK(r.truncated);
  CHECK(r.poly == x.pow(2));
  auto s = tr.mul(x, x.pow(2));
  CHECK_FALSE(s.truncated);
  CHECK(s.poly == x.pow(3));
}

TEST_CASE("twist subring basis") {
  PrimeField f(2);
  TwistSubring s(f, 1, 2);
  auto b = s.monomial_basis(16);
  REQUIRE(b.size() == 5);
  CHECK(b[4] == MultiPoly::monomial(f, {16}));
  CHECK(s.contains(MultiPoly::monomial(f, {8})));
  CHECK_FALSE(s.contains(MultiPoly::monomial(f, {6})));
}

TEST_CASE("monomials are enumerated lexicographically") {
  auto m = monomials_up_to(2, 2);
  std::vector<Exponents> want{{0, 0}, {0, 1}, {0, 2}, {1, 0}, {1, 1}, {2, 0}};
  CHECK(m == want);
}
