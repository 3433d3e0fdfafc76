#include <map>
#include <random>

#include "doctest.h"
#include "hhdx/gs.hpp"

using namespace hhdx;

namespace {

using Pieces = std::map<std::pair<int, int>, DenseVec>;

DenseVec random_vec(std::size_t n, const PrimeField& f, std::mt19937& rng) {
  DenseVec v(n);
  for (auto& x : v) x = rng() % f.p();
  return v;
}

void accumulate(Pieces& into, int i, int j, const DenseVec& v, const PrimeField& f, Residue scale = 1) {
  auto& slot = into[{i, j}];
  if (slot.empty()) slot.assign(v.size(), 0);
  for (std::size_t k = 0; k < v.size(); ++k) slot[k] = f.add(slot[k], f.mul(scale, v[k]));
}

// D = d_h + (-1)^i d_v on a bihomogeneous cochain.
std::vector<GSCochain> total_d(const GSComplex& c, const GSCochain& x) {
  const PrimeField& f = c.complex.field();
  std::vector<GSCochain> out;
  if (x.i < c.complex.max_i())
    out.push_back({x.i + 1, x.j, to_dense(c.complex.horizontal(x.i, x.j).apply(to_sparse(x.values)), c.complex.dim(x.i + 1, x.j))});
  if (x.j < c.complex.max_j()) {
    auto v = to_dense(c.complex.vertical(x.i, x.j).apply(to_sparse(x.values)), c.complex.dim(x.i, x.j + 1));
    for (auto& e : v) e = f.mul(f.sign(x.i), e);
    out.push_back({x.i, x.j + 1, v});
  }
  return out;
}

void cup_into(Pieces& into, const GSComplex& c, const GSCochain& a, const GSCochain& b, Residue scale) {
  if (a.i + b.i > c.complex.max_i()) return;
  auto p = gs_cup(c, a, b);
  accumulate(into, p.i, p.j, p.values, c.complex.field(), scale);
}

bool all_zero(const Pieces& p) {
  for (auto& [k, v] : p)
    for (auto x : v)
      if (x) return false;
  return true;
}

// Checks D(a u b) = Da u b + (-1)^{|a|} a u Db on `trials` random pairs.
void check_leibniz(const GSComplex& c, int trials, std::mt19937& rng) {
  const PrimeField& f = c.complex.field();
  const int I = c.complex.max_i();
  int done = 0;
  while (done < trials) {
    const int i1 = static_cast<int>(rng() % (I + 1)), i2 = static_cast<int>(rng() % (I + 1 - i1));
    const int j1 = static_cast<int>(rng() % 2), j2 = j1 == 1 ? 0 : static_cast<int>(rng() % 2);
    GSCochain a{i1, j1, random_vec(c.complex.dim(i1, j1), f, rng)};
    GSCochain b{i2, j2, random_vec(c.complex.dim(i2, j2), f, rng)};
    Pieces diff;
    for (auto& x : total_d(c, gs_cup(c, a, b))) accumulate(diff, x.i, x.j, x.values, f);
    for (auto& x : total_d(c, a)) cup_into(diff, c, x, b, f.neg(1));
    for (auto& y : total_d(c, b)) cup_into(diff, c, a, y, f.neg(f.sign(i1 + j1)));
    REQUIRE(all_zero(diff));
    ++done;
  }
}

StructAlgebra truncated(const PrimeField& f, std::size_t n) { return StructAlgebra::truncated_polynomial(f, n); }

// k[x]/(x^m) -> k[x]/(x^n), x -> x, as a dim n x dim m matrix
FpMatrix quotient(const PrimeField& f, std::size_t n, std::size_t m) {
  FpMatrix q(f, n, m);
  for (std::size_t k = 0; k < n; ++k) q.at(k, k) = 1;
  return q;
}

AlgebraPresheaf p1_shaped(const PrimeField& f) {
  Poset j(3, {{0, 1}, {0, 2}});
  AlgebraPresheaf a(j, {StructAlgebra::ground_field(f), truncated(f, 2), StructAlgebra::product_of_fields(f, 2)});
  a.set_restriction(0, 1, quotient(f, 1, 2));
  a.set_restriction(0, 2, FpMatrix(f, 1, 2, {1, 0}));
  return a;
}

}  // namespace

TEST_CASE("poset closure, meets and capacity") {
  Poset c = Poset::chain(4);
  CHECK(c.leq(0, 3));
  CHECK_FALSE(c.leq(3, 0));
  CHECK_THROWS_AS(Poset(2, {{0, 1}, {1, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(Poset::discrete(9), CapacityError);

  Poset v(3, {{0, 1}, {0, 2}});
  CHECK(v.meet(1, 2) == std::optional<std::size_t>(0));
  CHECK(v.closed_under_intersection());
  CHECK_FALSE(Poset::discrete(2).meet(0, 1));

  // two incomparable common lower bounds
  Poset bad(4, {{0, 2}, {0, 3}, {1, 2}, {1, 3}});
  CHECK_FALSE(bad.closed_under_intersection());
}

TEST_CASE("nerve of a chain counts strict chains") {
  auto n = nerve(Poset::chain(3), 4);
  REQUIRE(n.size() == 3);
  CHECK(n[0].size() == 3);
  CHECK(n[1].size() == 3);
  CHECK(n[2].size() == 1);
  CHECK(std::is_sorted(n[1].begin(), n[1].end()));
}

TEST_CASE("GS complex on a point is the bar complex") {
  PrimeField f(3);
  auto m2 = StructAlgebra::matrix_algebra(f, 2);
  auto a = AlgebraPresheaf::constant(Poset::point(), m2);
  auto gs = build_gs_complex(a, BimodulePresheaf::regular(a), 0, 2);
  auto reg = Bimodule::regular(m2);
  for (int j = 0; j < 2; ++j) CHECK(gs.complex.vertical(0, j) == bar_differential_matrix(m2, reg, j));
  auto tot = totalize(gs.complex).complex.cohomology_dims();
  CHECK(tot[0] == 1);
  CHECK(tot[1] == 0);
}

TEST_CASE("GS complex of constant presheaves") {
  PrimeField f(5);
  auto k = StructAlgebra::ground_field(f);
  SUBCASE("chain: contractible nerve") {
    auto a = AlgebraPresheaf::constant(Poset::chain(3), k);
    auto gs = build_gs_complex(a, BimodulePresheaf::regular(a), 2, 2);
    auto tot = totalize(gs.complex).complex.cohomology_dims();
    // degrees >= 2 see the cut at j = 2
    CHECK(tot[0] == 1);
    CHECK(tot[1] == 0);
  }
  SUBCASE("two points") {
    auto a = AlgebraPresheaf::constant(Poset::discrete(2), k);
    auto gs = build_gs_complex(a, BimodulePresheaf::regular(a), 0, 1);
    CHECK(totalize(gs.complex).complex.cohomology_dims()[0] == 2);
  }
}

TEST_CASE("GS complex rejects bad input") {
  PrimeField f(3);
  auto k = StructAlgebra::ground_field(f);
  auto a = AlgebraPresheaf::constant(Poset::point(), k);
  CHECK_THROWS_AS(build_gs_complex(a, BimodulePresheaf::regular(a), 5, 1), CapacityError);
  CHECK_THROWS_AS(build_gs_complex(a, BimodulePresheaf::regular(a), 0, 3), CapacityError);
  // x -> 1 is not multiplicative on k[x]/(x^2) -> k
  AlgebraPresheaf b(Poset::chain(2), {k, truncated(f, 2)});
  b.set_restriction(0, 1, FpMatrix(f, 1, 2, {1, 1}));
  CHECK_THROWS_AS(b.check(), std::invalid_argument);
}

TEST_CASE("GS cup product satisfies the Leibniz rule") {
  std::mt19937 rng(11);
  PrimeField f(3);
  SUBCASE("point, M_2") {
    auto a = AlgebraPresheaf::constant(Poset::point(), StructAlgebra::matrix_algebra(f, 2));
    check_leibniz(build_gs_complex(a, BimodulePresheaf::regular(a), 0, 2), 100, rng);
  }
  SUBCASE("chain of truncated polynomial rings") {
    AlgebraPresheaf a(Poset::chain(3), {truncated(f, 1), truncated(f, 2), truncated(f, 3)});
    a.set_restriction(0, 1, quotient(f, 1, 2));
    a.set_restriction(1, 2, quotient(f, 2, 3));
    a.set_restriction(0, 2, quotient(f, 1, 3));
    check_leibniz(build_gs_complex(a, BimodulePresheaf::regular(a), 2, 2), 100, rng);
  }
  SUBCASE("projective-line shaped poset") {
    auto a = p1_shaped(f);
    check_leibniz(build_gs_complex(a, BimodulePresheaf::regular(a), 1, 2), 100, rng);
  }
}

TEST_CASE("GS unit is a two-sided identity") {
  PrimeField f(3);
  auto a = p1_shaped(f);
  auto gs = build_gs_complex(a, BimodulePresheaf::regular(a), 1, 2);
  GSCochain one{0, 0, DenseVec(gs.complex.dim(0, 0), 0)};
  for (std::size_t s = 0; s < gs.simplices[0].size(); ++s) {
    auto& u = a.at(gs.simplices[0][s][0]).unit();
    for (std::size_t k = 0; k < u.size(); ++k) one.values[gs.offset[0][0][s] + k] = u[k];
  }
  std::mt19937 rng(5);
  GSCochain x{1, 1, random_vec(gs.complex.dim(1, 1), f, rng)};
  CHECK(gs_cup(gs, one, x).values == x.values);
  CHECK(gs_cup(gs, x, one).values == x.values);
}

TEST_CASE("nerve and Cech cohomology agree") {
  PrimeField f(5);
  SUBCASE("projective line") {
    auto c = structure_sheaf_model(f, CoverKind::projective_line, 4);
    auto cmp = nerve_vs_cech(f, c, 2);
    CHECK(cmp.agree);
    CHECK(cmp.cech_dims == std::vector<std::size_t>{1, 0, 0});
    CHECK(cmp.cech_by_weight.size() == 1);
  }
  SUBCASE("O(-2)") {
    auto c = structure_sheaf_model(f, CoverKind::projective_line, 4, -2);
    auto cmp = nerve_vs_cech(f, c, 2);
    CHECK(cmp.agree);
    CHECK(cmp.cech_dims == std::vector<std::size_t>{0, 1, 0});
    REQUIRE(cmp.cech_by_weight.count(-1));
    CHECK(cmp.cech_by_weight[-1] == std::vector<std::size_t>{0, 1, 0});
  }
  SUBCASE("random systems on a V") {
    std::mt19937 rng(3);
    for (int t = 0; t < 30; ++t) {
      CoefficientSystem c{Poset(3, {{0, 1}, {0, 2}}), {1 + rng() % 3, 1 + rng() % 3, 1 + rng() % 3}, {}, {}};
      for (std::size_t v : {1, 2}) {
        FpMatrix m(f, c.dims[0], c.dims[v]);
        for (std::size_t x = 0; x < m.rows(); ++x)
          for (std::size_t y = 0; y < m.cols(); ++y) m.at(x, y) = rng() % 5;
        c.restriction.insert_or_assign({0, v}, m);
      }
      auto cmp = nerve_vs_cech(f, c, 2);
      CHECK(cmp.agree);
      const long chi = static_cast<long>(cmp.cech_dims[0]) - static_cast<long>(cmp.cech_dims[1]);
      CHECK(chi == static_cast<long>(c.dims[1] + c.dims[2]) - static_cast<long>(c.dims[0]));
    }
  }
}

TEST_CASE("coefficient systems load from JSON") {
  PrimeField f(3);
  auto j = nlohmann::json::parse(R"({"names": ["U01", "U0", "U1"], "less": [[0, 1], [0, 2]], "dims": [2, 1, 1],
    "weights": [[0, 1], [0], [0]],
    "restrictions": [{"from": 1, "to": 0, "matrix": [[1], [0]]}, {"from": 2, "to": 0, "matrix": [[1], [0]]}]})");
  auto c = load_coefficient_system(f, j);
  CHECK(c.poset.name(2) == "U1");
  auto cmp = nerve_vs_cech(f, c, 2);
  CHECK(cmp.agree);
  CHECK(cmp.cech_dims == std::vector<std::size_t>{1, 1, 0});
  CHECK(cmp.cech_by_weight[1] == std::vector<std::size_t>{0, 1, 0});
  j["weights"][2][0] = 1;
  CHECK_THROWS_AS(load_coefficient_system(f, j), std::invalid_argument);
}

TEST_CASE("subalgebra scenario on the affine line") {
  PrimeField f(2);
  auto s = gs_for_subalgebra_scenario(f, {CoverKind::affine_line, 1, 16, 8});
  CHECK(s.twisted_degree_bound == 8);
  CHECK(s.twisted_dp_bound == 4);
  CHECK(s.e2_concentrated);
  CHECK(s.converges);
  CHECK(s.pages_consistent);
  CHECK(s.matches_cech);
  CHECK(s.morita_certified);
  REQUIRE(s.hh0_basis.size() == 9);
  for (int c = 0; c <= 8; ++c) CHECK(s.hh0_basis[static_cast<std::size_t>(c)] == MultiPoly::monomial(f, {2 * c}));
  CHECK(s.total_dims[0] == 9);
  for (std::size_t n = 1; n < s.total_dims.size(); ++n) CHECK(s.total_dims[n] == 0);
  auto e = edge_multiplicativity(f, s);
  CHECK(e.holds);
  CHECK(e.products_checked > 0);
}

TEST_CASE("subalgebra scenario on the projective line") {
  for (unsigned p : {2u, 3u, 5u}) {
    PrimeField f(p);
    auto s = gs_for_subalgebra_scenario(f, {CoverKind::projective_line, 1, 2 * static_cast<int>(p) * 3, 2 * static_cast<int>(p)});
    CHECK(s.e2_concentrated);
    CHECK(s.converges);
    CHECK(s.matches_cech);
    CHECK(s.total_dims[0] == 1);
    for (std::size_t n = 1; n < s.total_dims.size(); ++n) CHECK(s.total_dims[n] == 0);
    REQUIRE(s.hh0_basis.size() == 1);
    CHECK(s.hh0_basis[0] == MultiPoly::monomial(f, {0}));
  }
}

TEST_CASE("subalgebra scenario on a point matches the pair computation") {
  PrimeField f(3);
  auto s = gs_for_subalgebra_scenario(f, {CoverKind::point, 0, 6, 3});
  auto pair = hh_of_pair(f, {1, {false}}, {1, {false}}, 0, 6, 3);
  CHECK(s.hh0_basis == pair.hh0_basis);
  CHECK(s.total_dims[0] == pair.dims[0]);
  CHECK(s.total_dims[1] == pair.dims[1]);
}

TEST_CASE("subalgebra scenario needs a divided-power window") {
  PrimeField f(3);
  CHECK_THROWS_AS(gs_for_subalgebra_scenario(f, {CoverKind::affine_line, 1, 9, 2}), TruncationError);
}
