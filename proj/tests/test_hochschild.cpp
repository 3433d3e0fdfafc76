#include <functional>
#include <random>

#include "doctest.h"
#include "hhdx/hochschild.hpp"

using namespace hhdx;

namespace {

HochschildCochain random_cochain(const StructAlgebra& a, const Bimodule& m, int degree, std::mt19937& rng) {
  std::size_t size = m.dim();
  for (int k = 0; k < degree; ++k) size *= a.dim();
  HochschildCochain c{degree, DenseVec(size)};
  for (auto& x : c.values) x = rng() % a.field().p();
  return c;
}

// Direct evaluation of (d phi)(a_0..a_j) on basis tuples, written from the
// textbook formula with explicit digit vectors.
HochschildCochain naive_differential(const StructAlgebra& A, const Bimodule& M, const HochschildCochain& phi) {
  const PrimeField& f = A.field();
  const std::size_t n = A.dim(), m = M.dim();
  const int j = phi.degree;
  auto index_of = [&](const std::vector<std::size_t>& t) {
    std::size_t s = 0;
    for (auto x : t) s = s * n + x;
    return s;
  };
  auto eval = [&](const std::vector<std::size_t>& t) { return phi.at(index_of(t), m); };
  std::size_t outs = 1;
  for (int k = 0; k <= j; ++k) outs *= n;
  HochschildCochain out{j + 1, DenseVec(outs * m, 0)};
  std::vector<std::size_t> t(static_cast<std::size_t>(j) + 1, 0);
  for (std::size_t o = 0; o < outs; ++o) {
    std::size_t rest = o;
    for (int k = j; k >= 0; --k) {
      t[static_cast<std::size_t>(k)] = rest % n;
      rest /= n;
    }
    DenseVec acc(m, 0);
    auto add = [&](const DenseVec& v, Residue s) {
      for (std::size_t u = 0; u < m; ++u) acc[u] = f.add(acc[u], f.mul(s, v[u]));
    };
    add(M.left(t[0]).apply(eval(std::vector<std::size_t>(t.begin() + 1, t.end()))), 1);
    for (int i = 1; i <= j; ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        Residue c = A.c(t[static_cast<std::size_t>(i) - 1], t[static_cast<std::size_t>(i)], k);
        if (!c) continue;
        std::vector<std::size_t> merged;
        for (int s = 0; s <= j; ++s) {
          if (s == i) continue;
          merged.push_back(s == i - 1 ? k : t[static_cast<std::size_t>(s)]);
        }
        add(eval(merged), f.mul(c, i % 2 ? f.p() - 1 : 1));
      }
    }
    add(M.right(t.back()).apply(eval(std::vector<std::size_t>(t.begin(), t.end() - 1))), (j + 1) % 2 ? f.p() - 1 : 1);
    std::copy(acc.begin(), acc.end(), out.values.begin() + static_cast<std::ptrdiff_t>(o * m));
  }
  return out;
}

std::vector<std::size_t> hh_dims(const StructAlgebra& a, const Bimodule& m) {
  auto c = bar_complex(a, m, 3);
  return {c.cohomology(0, false).dim, c.cohomology(1, false).dim, c.cohomology(2, false).dim};
}

}  // namespace

TEST_CASE("structure constants are validated") {
  PrimeField f(3);
  CHECK_THROWS_AS(StructAlgebra(f, 1, {1}, {2}), std::invalid_argument);
  // e0 e0 = e1, everything else zero: associative but no unit
  CHECK_THROWS_AS(StructAlgebra(f, 2, {0, 1, 0, 0, 0, 0, 0, 0}, {1, 0}), std::invalid_argument);
  CHECK_NOTHROW(StructAlgebra::matrix_algebra(f, 2));
  CHECK_NOTHROW(StructAlgebra::tensor(StructAlgebra::matrix_algebra(f, 2), StructAlgebra::truncated_polynomial(f, 2)));
}

TEST_CASE("bar differential matches direct evaluation") {
  std::mt19937 rng(21);
  for (std::uint32_t p : {2u, 3u}) {
    PrimeField f(p);
    std::vector<StructAlgebra> algebras{StructAlgebra::truncated_polynomial(f, 3), StructAlgebra::matrix_algebra(f, 2),
                                        StructAlgebra::product_of_fields(f, 2)};
    for (auto& a : algebras) {
      auto m = Bimodule::regular(a);
      for (int j = 0; j <= 2; ++j)
        for (int t = 0; t < 3; ++t) {
          auto phi = random_cochain(a, m, j, rng);
          CHECK(bar_differential(a, m, phi).values == naive_differential(a, m, phi).values);
        }
    }
  }
}

TEST_CASE("parallel and serial bar assembly agree") {
  PrimeField f(5);
  auto a = StructAlgebra::matrix_algebra(f, 2);
  auto m = Bimodule::regular(a);
  auto c1 = bar_complex(a, m, 3);
  auto c2 = serial::bar_complex(a, m, 3);
  for (int j = 0; j < 3; ++j) CHECK(c1.d(j) == c2.d(j));
}

TEST_CASE("Hochschild cohomology examples") {
  for (std::uint32_t p : {2u, 3u, 5u}) {
    PrimeField f(p);
    auto k = StructAlgebra::ground_field(f);
    CHECK(hh_dims(k, Bimodule::regular(k)) == std::vector<std::size_t>{1, 0, 0});
    auto m2 = StructAlgebra::matrix_algebra(f, 2);
    CHECK(hh_dims(m2, Bimodule::regular(m2)) == std::vector<std::size_t>{1, 0, 0});
    auto kk = StructAlgebra::product_of_fields(f, 2);
    CHECK(hh_dims(kk, Bimodule::regular(kk)) == std::vector<std::size_t>{2, 0, 0});
  }
}

TEST_CASE("Morita invariance in low degrees") {
  for (std::uint32_t p : {2u, 3u}) {
    PrimeField f(p);
    for (auto a : {StructAlgebra::ground_field(f), StructAlgebra::truncated_polynomial(f, 2),
                   StructAlgebra::product_of_fields(f, 2)}) {
      auto big = StructAlgebra::tensor(StructAlgebra::matrix_algebra(f, 2), a);
      CHECK(hh_dims(a, Bimodule::regular(a)) == hh_dims(big, Bimodule::regular(big)));
    }
  }
}

TEST_CASE("capacity guards") {
  PrimeField f(2);
  auto a = StructAlgebra::truncated_polynomial(f, 13);
  CHECK_THROWS_AS(bar_complex(a, Bimodule::regular(a), 1), CapacityError);
  auto b = StructAlgebra::ground_field(f);
  CHECK_THROWS_AS(bar_complex(b, Bimodule::regular(b), 4), CapacityError);
}

TEST_CASE("cup product: unit, Leibniz, associativity") {
  std::mt19937 rng(22);
  for (std::uint32_t p : {2u, 3u}) {
    PrimeField f(p);
    auto a = StructAlgebra::truncated_polynomial(f, 2);
    auto m = Bimodule::regular(a);
    HochschildCochain one{0, a.unit()};
    for (int t = 0; t < 20; ++t) {
      auto x = random_cochain(a, m, 1, rng), y = random_cochain(a, m, 1, rng), z = random_cochain(a, m, 1, rng);
      CHECK(cup_product(a, m, one, x).values == x.values);
      CHECK(cup_product(a, m, x, one).values == x.values);
      auto lhs = bar_differential(a, m, cup_product(a, m, x, y));
      auto dx = bar_differential(a, m, x), dy = bar_differential(a, m, y);
      auto r1 = cup_product(a, m, dx, y), r2 = cup_product(a, m, x, dy);
      for (std::size_t i = 0; i < lhs.values.size(); ++i)
        CHECK(lhs.values[i] == f.sub(r1.values[i], r2.values[i]));
      CHECK(cup_product(a, m, cup_product(a, m, x, y), z).values ==
            cup_product(a, m, x, cup_product(a, m, y, z)).values);
    }
    auto u = random_cochain(a, m, 0, rng), v = random_cochain(a, m, 0, rng);
    CHECK(cup_product(a, m, u, v).values == a.multiply(u.values, v.values));
    auto plain = Bimodule(a, 2, {a.left_regular(0), a.left_regular(1)}, {a.right_regular(0), a.right_regular(1)});
    CHECK_THROWS_AS(cup_product(a, plain, u, v), std::invalid_argument);
  }
}

TEST_CASE("Koszul complex in one variable") {
  PrimeField f(2);
  const int D = 6, Q = 5;
  auto kc = koszul_commutator_complex(f, 1, D, Q);
  CHECK(kc.window == Q - 1);
  const auto& d = kc.complex.d(0);
  auto ki = kernel_image(d);
  CHECK(ki.kernel.size() == static_cast<std::size_t>(D + 1));
  for (auto& v : ki.kernel)
    for (auto& [idx, c] : v) CHECK(kc.basis[0][idx].b[0] == 0);
  // the image is exactly the span of d^(q), q <= Q - 1
  EchelonBasis img(f, d.rows());
  for (auto& v : ki.image) img.insert(v);
  for (std::size_t i = 0; i < kc.basis[1].size(); ++i)
    CHECK(img.contains({{static_cast<std::uint32_t>(i), 1}}) == (kc.basis[1][i].b[0] <= Q - 1));
}

TEST_CASE("Koszul complex with no divided powers") {
  PrimeField f(3);
  auto kc = koszul_commutator_complex(f, 1, 4, 0);
  CHECK(kc.complex.cohomology_dims() == std::vector<std::size_t>{5, 5});
  CHECK(kc.window == -1);
}

TEST_CASE("Koszul complex in two variables: Kuenneth") {
  PrimeField f(3);
  const int D = 3, Q = 4;
  auto kc = koszul_commutator_complex(f, 2, D, Q);
  auto graded = graded_cohomology_dims(kc.complex, kc.weight);
  for (auto& [w, dims] : graded) {
    if (w > kc.certified_weight) continue;
    if (w == 0)
      CHECK(dims == std::vector<std::size_t>{10, 0, 0});
    else
      CHECK(dims == std::vector<std::size_t>{0, 0, 0});
  }
}

TEST_CASE("Koszul and bar agree on HH^0 for truncated polynomials") {
  for (std::uint32_t p : {2u, 3u}) {
    PrimeField f(p);
    for (unsigned s : {1u, 2u}) {
      const int N = static_cast<int>(ipow(p, s));
      if (N > 9) continue;
      auto a = StructAlgebra::truncated_polynomial(f, static_cast<std::size_t>(N));
      auto bar = bar_complex(a, Bimodule::endomorphisms(a), 1);
      auto kc = koszul_commutator_complex(f, 1, N - 1, N - 1);
      CHECK(bar.cohomology(0, false).dim == static_cast<std::size_t>(N));
      CHECK(kc.complex.cohomology(0, false).dim == bar.cohomology(0, false).dim);
    }
  }
}

TEST_CASE("HH of a pair through Morita and Koszul") {
  PrimeField f(2);
  ChartModel line{1, {false}};
  auto r0 = hh_of_pair(f, line, line, 0, 8, 4);
  CHECK(r0.morita_certified);
  CHECK(r0.dims == std::vector<std::size_t>{9, 0});
  REQUIRE(r0.hh0_basis.size() == 9);
  CHECK(r0.hh0_basis[3] == MultiPoly::monomial(f, {3}));
  auto r1 = hh_of_pair(f, line, line, 1, 16, 8);
  CHECK(r1.morita_certified);
  REQUIRE(r1.hh0_basis.size() == 9);
  for (std::size_t k = 0; k < 9; ++k) CHECK(r1.hh0_basis[k] == MultiPoly::monomial(f, {2 * static_cast<int>(k)}));
  CHECK(r1.dims[1] == 0);
  CHECK_THROWS_AS(hh_of_pair(f, line, line, 0, 8, 0), TruncationError);
  ChartModel punctured{1, {true}};
  auto g = hh_of_pair(f, line, punctured, 1, 8, 4);
  CHECK(g.dims == std::vector<std::size_t>{9, 0});
  CHECK_THROWS_AS(hh_of_pair(f, punctured, line, 1, 8, 4), std::invalid_argument);
}

TEST_CASE("loading structure constants from JSON") {
  auto j = nlohmann::json::parse(R"({"p": 3, "dim": 2,
    "c": [[[1,0],[0,1]], [[0,1],[0,0]]], "unit": [1, 0]})");
  auto loaded = load_structure_constants(j);
  CHECK(loaded.algebra.dim() == 2);
  CHECK(loaded.bimodule.dim() == 2);
  CHECK(hh_dims(loaded.algebra, loaded.bimodule)[0] == 2);
  auto bad = nlohmann::json::parse(R"({"p": 3, "dim": 1, "c": [[[1]]], "unit": [1],
    "bimodule": {"dim": 1, "left": [[[2]]], "right": [[[1]]]}})");
  CHECK_THROWS_AS(load_structure_constants(bad), std::invalid_argument);
}
