#include <random>

#include "doctest.h"
#include "hhdx/complex.hpp"
#include "random_complex.hpp"

using namespace hhdx;

TEST_CASE("cochain complex rejects d o d != 0") {
  PrimeField f(2);
  auto one = SparseMatrix::identity(f, 1);
  CHECK_THROWS_AS(CochainComplex(f, 0, {1, 1, 1}, {one, one}), std::logic_error);
  CHECK_THROWS_AS(CochainComplex(f, 0, {1, 2}, {one}), std::invalid_argument);
}

TEST_CASE("cohomology of a small complex") {
  PrimeField f(3);
  // k -> k^2 -> k, d0 = (1,1)^T, d1 = (1,-1)
  auto d0 = SparseMatrix::from_triplets(f, 2, 1, {{0, 0, 1}, {1, 0, 1}});
  auto d1 = SparseMatrix::from_triplets(f, 1, 2, {{0, 0, 1}, {0, 1, 2}});
  CochainComplex c(f, 0, {1, 2, 1}, {d0, d1});
  CHECK(c.cohomology_dims() == std::vector<std::size_t>{0, 0, 0});
  CHECK(c.euler_characteristic() == 0);
  CochainComplex c2(f, 0, {1, 2, 1}, {d0, SparseMatrix(f, 1, 2)});
  CHECK(c2.cohomology_dims() == std::vector<std::size_t>{0, 1, 1});
  auto h1 = c2.cohomology(1);
  REQUIRE(h1.representatives.size() == 1);
  CHECK(c2.d(1).apply(h1.representatives[0]).empty());
}

TEST_CASE("random double complexes: spectral sequence against Kuenneth") {
  std::mt19937 rng(12);
  for (std::uint32_t p : {2u, 3u, 5u}) {
    PrimeField f(p);
    for (int t = 0; t < 8; ++t) {
      auto rd = testing_support::random_double_complex(f, 1 + t % 3, 1 + (t / 2) % 3, rng);
      CHECK_NOTHROW(rd.dc.check());
      auto tot = totalize(rd.dc);
      CHECK(tot.complex.cohomology_dims() == rd.total);
      auto ss = spectral_sequence(rd.dc, 4);
      CHECK(ss.pages_consistent);
      CHECK(ss.converges);
      CHECK(ss.total_cohomology == rd.total);
      REQUIRE(ss.pages.size() >= 2);
      CHECK(ss.pages[1].index == 2);
      CHECK(ss.pages[1].dims == rd.e2);
    }
  }
}
