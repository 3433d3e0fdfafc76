#include <random>
#include <set>

#include "doctest.h"
#include "hhdx/tower.hpp"

using namespace hhdx;

namespace {

FpMatrix random_matrix(const PrimeField& f, std::size_t r, std::size_t c, std::mt19937& rng) {
  FpMatrix m(f, r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m.at(i, j) = rng() % f.p();
  return m;
}

// All vectors of F_p^n.
std::vector<DenseVec> all_vectors(const PrimeField& f, std::size_t n) {
  std::vector<DenseVec> out{DenseVec(n, 0)};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<DenseVec> next;
    for (auto& v : out)
      for (Residue a = 0; a < f.p(); ++a) {
        auto w = v;
        w[i] = a;
        next.push_back(w);
      }
    out = next;
  }
  return out;
}

// Number of compatible families with x_R in the image of tail^n, by
// enumeration of the top coordinate.
std::size_t brute_lim_size(const Tower& t) {
  const std::size_t R = t.depth(), n = t.dims[R];
  std::set<DenseVec> admissible;
  for (auto& v : all_vectors(t.field, n)) {
    DenseVec w = v;
    if (t.tail)
      for (std::size_t k = 0; k < n; ++k) w = t.tail->apply(w);
    admissible.insert(w);
  }
  // a family is fixed by x_R; distinct x_R give distinct families
  return admissible.size();
}

// #E(F_p) for y^2 = x^3 + a2 x^2 + a4 x + a6, point at infinity included.
std::int64_t count_points(std::int64_t p, const Cubic& c) {
  std::int64_t n = 1;
  for (std::int64_t x = 0; x < p; ++x) {
    const std::int64_t rhs = ((x * x % p * x + c.a2 * x % p * x + c.a4 * x + c.a6) % p + p) % p;
    for (std::int64_t y = 0; y < p; ++y)
      if (y * y % p == rhs) ++n;
  }
  return n;
}

bool nonsingular(const PrimeField& f, const Cubic& c) {
  try {
    hasse_invariant(f, c);
    return true;
  } catch (const std::invalid_argument&) {
    return false;
  }
}

}  // namespace

TEST_CASE("lim of small towers") {
  PrimeField f(3);
  SUBCASE("constant") {
    auto l = lim_and_lim1(Tower::constant(f, 1, 2));
    CHECK(l.lim_dim() == 1);
    CHECK(l.lim1_dim == 0);
    CHECK(l.all_certified);
  }
  SUBCASE("zero maps") {
    Tower t(f, {1, 1, 1}, {FpMatrix(f, 1, 1), FpMatrix(f, 1, 1)});
    auto raw = lim_and_lim1(t);
    CHECK_FALSE(raw.all_certified);
    CHECK(raw.lim_dim() == 1);
    t.tail = FpMatrix(f, 1, 1);
    auto l = lim_and_lim1(t);
    CHECK(l.lim_dim() == 0);
    CHECK(l.lim1_dim == 0);
    CHECK(l.all_certified);
  }
  SUBCASE("rank one maps stabilize at stage one") {
    FpMatrix P(f, 2, 2, {1, 0, 0, 0});
    auto l = lim_and_lim1(Tower::stationary(P, 3));
    CHECK(l.lim_dim() == 1);
    CHECK(l.lim1_dim == 0);
    REQUIRE(l.certificates.size() == 1);
    CHECK(l.certificates[0].stage == 1);
    CHECK(l.certificates[0].image_dim == 1);
    CHECK(l.certificates[0].certified);
  }
}

TEST_CASE("tower validation") {
  PrimeField f(2);
  CHECK_THROWS_AS(Tower(f, {1, 2}, {FpMatrix(f, 2, 1)}), std::invalid_argument);
  CHECK_THROWS_AS(Tower(f, {1, 1}, {FpMatrix(f, 1, 1, {1})}, {{0}, {1}}), std::invalid_argument);
  CHECK_THROWS_AS(Tower::constant(f, 1, 9), CapacityError);
}

TEST_CASE("random towers: Euler identity and brute-force lim") {
  std::mt19937 rng(17);
  for (unsigned p : {2u, 3u}) {
    PrimeField f(p);
    for (int trial = 0; trial < 60; ++trial) {
      const std::size_t R = rng() % 4;
      std::vector<std::size_t> dims;
      for (std::size_t r = 0; r <= R; ++r) dims.push_back(rng() % 4);
      std::vector<FpMatrix> maps;
      for (std::size_t r = 0; r < R; ++r) maps.push_back(random_matrix(f, dims[r], dims[r + 1], rng));
      Tower t(f, dims, maps);
      if (rng() % 2) t.tail = random_matrix(f, dims[R], dims[R], rng);
      auto l = lim_and_lim1(t);
      CHECK(static_cast<long>(l.lim_dim()) - static_cast<long>(l.lim1_dim) ==
            static_cast<long>(l.source_dim) - static_cast<long>(l.target_dim));
      CHECK(l.lim_dim() == l.source_dim - l.difference_rank);
      std::size_t expected = 1;
      for (std::size_t k = 0; k < l.lim_dim(); ++k) expected *= p;
      CHECK(brute_lim_size(t) == expected);
      // every basis family is compatible
      for (auto& fam : l.lim_basis)
        for (std::size_t r = 0; r < R; ++r)
          CHECK(family_component(t, fam, r) == t.maps[r].apply(family_component(t, fam, r + 1)));
      // certificate implies lim^1 = 0
      if (l.all_certified) CHECK(l.lim1_dim == 0);
    }
  }
}

TEST_CASE("graded towers certify per degree") {
  PrimeField f(2);
  // degree 0: k <- k, degree 1: k <- 0
  Tower t(f, {2, 1}, {FpMatrix(f, 2, 1, {1, 0})}, {{0, 1}, {0}});
  t.tail = FpMatrix::identity(f, 1);
  t.tail_degrees = std::set<int>{0};
  auto l = lim_and_lim1(t);
  REQUIRE(l.certificates.size() == 2);
  CHECK(l.certificates[0].certified);
  CHECK_FALSE(l.certificates[1].certified);
  CHECK_FALSE(l.all_certified);
  CHECK(l.lim_dim() == 1);
}

TEST_CASE("filtered sequence on the affine line") {
  PrimeField f(2);
  auto rep = filtered_hh_sequence(f, 3, 16, 8);
  CHECK(rep.frobenius_inclusions);
  CHECK(rep.centralizers_checked);
  CHECK(rep.centralizer_dim == 1);
  CHECK(rep.lim_hh0_certified == 1);
  CHECK(rep.exact_at_certified);
  CHECK(rep.uncertified_degrees == std::vector<int>{8, 16});
  for (auto d : rep.hh1_dims) CHECK(d == 0);
  REQUIRE(rep.hh0_tower.size() == 4);
  CHECK(rep.hh0_tower[3].size() == 3);
  // degree 1: 0 -> 0 -> k -> k -> 0
  CHECK(rep.rows[1].lim_s == 0);
  CHECK(rep.rows[1].lim_q == 1);
  CHECK(rep.rows[1].rank_beta == 1);
  for (unsigned p : {3u, 5u}) {
    auto r = filtered_hh_sequence(PrimeField(p), 2, 2 * static_cast<int>(p * p), static_cast<int>(p * p));
    CHECK(r.exact_at_certified);
    CHECK(r.lim_hh0_certified == 1);
    CHECK(r.centralizer_dim == 1);
  }
  CHECK_THROWS_AS(filtered_hh_sequence(f, 3, 16, 7), TruncationError);
}

TEST_CASE("proper case examples") {
  PrimeField f(5);
  auto ord = proper_case({SemilinearMap::identity(f, 1), SemilinearMap(f, 1, {3})});
  CHECK(ord.hh_dims == std::vector<std::size_t>{1, 1});
  auto ss = proper_case({SemilinearMap::identity(f, 1), SemilinearMap::zero(f, 1)});
  CHECK(ss.hh_dims == std::vector<std::size_t>{1, 0});
  for (auto& d : ss.degrees) CHECK(d.projection_is_stable_part);
}

TEST_CASE("proper case: lim projects onto the semisimple part") {
  std::mt19937 rng(23);
  for (unsigned p : {2u, 3u, 5u}) {
    PrimeField f(p);
    for (int trial = 0; trial < 40; ++trial) {
      const std::size_t n = 1 + rng() % 4;
      std::vector<Residue> m(n * n);
      // bias towards nilpotent parts
      for (auto& x : m) x = rng() % 3 == 0 ? rng() % p : 0;
      SemilinearMap F(f, n, m);
      auto pc = proper_case({F});
      auto& d = pc.degrees[0];
      CHECK(d.projection_is_stable_part);
      CHECK(d.lim_dim == d.stable_dim);
      CHECK(d.lim1_dim == 0);
      CHECK(d.stable_dim + d.nilpotent_dim == n);
    }
  }
}

TEST_CASE("Hasse invariant examples") {
  CHECK(hasse_invariant(PrimeField(3), {1, 0, 1}) == 1);
  CHECK(hasse_invariant(PrimeField(3), {0, -1, 0}) == 0);
  CHECK(hasse_invariant(PrimeField(5), {0, 1, 0}) == 2);
  CHECK_THROWS_AS(hasse_invariant(PrimeField(5), {0, 0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(hasse_invariant(PrimeField(2), {0, 1, 1}), std::invalid_argument);
  auto ss = elliptic_proper_case(PrimeField(3), {0, -1, 0});
  CHECK(ss.hh_dims == std::vector<std::size_t>{1, 0});
  auto ord = elliptic_proper_case(PrimeField(3), {1, 0, 1});
  CHECK(ord.hh_dims == std::vector<std::size_t>{1, 1});
}

TEST_CASE("Hasse invariant: coefficient, Cech Frobenius and point count agree") {
  for (unsigned p : {3u, 5u, 7u}) {
    PrimeField f(p);
    std::size_t curves = 0, supersingular = 0;
    for (std::int64_t a2 = 0; a2 < p; ++a2)
      for (std::int64_t a4 = 0; a4 < p; ++a4)
        for (std::int64_t a6 = 0; a6 < p; ++a6) {
          const Cubic c{a2, a4, a6};
          if (!nonsingular(f, c)) continue;
          const Residue h = hasse_invariant(f, c);
          CHECK(hasse_invariant_cech(f, c) == h);
          const std::int64_t ap = static_cast<std::int64_t>(p) + 1 - count_points(p, c);
          CHECK(f.reduce(ap) == h);
          supersingular += h == 0;
          ++curves;
        }
    CHECK(curves >= 5);
    CHECK(supersingular >= 1);
  }
}

TEST_CASE("Smith tower check") {
  PrimeField f(2);
  auto rep = smith_tower_check(f, 2, 16);
  CHECK(rep.series == "x1^4 + x1^2 + x1");
  CHECK(rep.derivation);
  CHECK(rep.leibniz_checks == 25);
  CHECK(rep.compatible_family);
  CHECK(rep.differences_in_twist);
  CHECK(rep.boundary_in_truncation);
  CHECK(rep.class_dim == 0);
  auto r0 = smith_tower_check(f, 0, 16);
  CHECK(r0.boundary_in_truncation);
  CHECK(r0.compatible_family);
  CHECK_THROWS_AS(smith_tower_check(f, 5, 16), CapacityError);
  auto r3 = smith_tower_check(PrimeField(3), 2, 9);
  CHECK(r3.derivation);
  CHECK(r3.compatible_family);
}
