#include <random>

#include "doctest.h"
#include "hhdx/linalg.hpp"
#include "oracles.hpp"

using namespace hhdx;

namespace {

FpMatrix random_matrix(PrimeField f, std::size_t r, std::size_t c, std::mt19937& rng, int density_pct = 60) {
  FpMatrix m(f, r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j)
      if (static_cast<int>(rng() % 100) < density_pct) m.at(i, j) = rng() % f.p();
  return m;
}

std::vector<std::vector<std::int64_t>> as_rows(const FpMatrix& m) {
  std::vector<std::vector<std::int64_t>> out(m.rows(), std::vector<std::int64_t>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = m.at(i, j);
  return out;
}

SparseMatrix random_sparse(PrimeField f, std::size_t r, std::size_t c, std::size_t nnz, std::mt19937& rng) {
  std::vector<SparseMatrix::Triplet> t;
  for (std::size_t k = 0; k < nnz; ++k)
    t.push_back({static_cast<std::uint32_t>(rng() % r), static_cast<std::uint32_t>(rng() % c),
                 static_cast<Residue>(rng() % f.p())});
  return SparseMatrix::from_triplets(f, r, c, std::move(t));
}

}  // namespace

TEST_CASE("dense rank against the naive oracle") {
  std::mt19937 rng(1);
  for (std::uint32_t p : {2u, 3u, 7u}) {
    PrimeField f(p);
    for (int t = 0; t < 40; ++t) {
      auto m = random_matrix(f, 1 + rng() % 12, 1 + rng() % 12, rng, 30 + t);
      auto rk = rank_kernel_image(m);
      CHECK(rk.rank == oracle::rank(as_rows(m), p));
      CHECK(rk.kernel.size() + rk.rank == m.cols());
      CHECK(rk.image.size() == rk.rank);
      for (auto& v : rk.kernel)
        for (auto x : m.apply(v)) CHECK(x == 0);
    }
  }
}

TEST_CASE("parallel and serial elimination agree exactly") {
  std::mt19937 rng(2);
  PrimeField f(5);
  for (int t = 0; t < 20; ++t) {
    auto m = random_matrix(f, 30 + rng() % 40, 30 + rng() % 40, rng, 20);
    auto a = rank_kernel_image(m);
    auto b = serial::rank_kernel_image(m);
    CHECK(a.rank == b.rank);
    CHECK(a.kernel == b.kernel);
    CHECK(a.image == b.image);
    CHECK(a.pivot_columns == b.pivot_columns);
  }
}

TEST_CASE("sparse kernel and image") {
  std::mt19937 rng(3);
  PrimeField f(3);
  for (std::size_t cols : {20u, 700u}) {
    for (int t = 0; t < 5; ++t) {
      auto m = random_sparse(f, cols / 2 + 3, cols, cols, rng);
      auto ki = kernel_image(m);
      CHECK(ki.rank == rank(m));
      CHECK(ki.kernel.size() + ki.rank == m.cols());
      if (cols < 100) CHECK(ki.rank == oracle::rank(as_rows(m.to_dense()), 3));
      for (auto& v : ki.kernel) CHECK(m.apply(v).empty());
      // kernel vectors independent
      EchelonBasis eb(f, m.cols());
      for (auto& v : ki.kernel) CHECK(eb.insert(v));
    }
  }
}

TEST_CASE("sparse matrix algebra") {
  std::mt19937 rng(4);
  PrimeField f(7);
  auto a = random_sparse(f, 6, 8, 20, rng);
  auto b = random_sparse(f, 8, 5, 20, rng);
  CHECK((a * b).to_dense() == a.to_dense() * b.to_dense());
  CHECK(a.transpose().transpose() == a);
  CHECK((a + a.scaled(6)).is_zero());
  SparseVec v{{0, 1}, {3, 2}, {7, 5}};
  auto direct = a.apply(v);
  auto via_t = combine_rows(a.transpose(), v);
  CHECK(direct == via_t);
}

TEST_CASE("echelon basis membership") {
  PrimeField f(2);
  EchelonBasis eb(f, 4);
  CHECK(eb.insert({{0, 1}, {1, 1}}));
  CHECK(eb.insert({{1, 1}, {2, 1}}));
  CHECK_FALSE(eb.insert({{0, 1}, {2, 1}}));
  CHECK(eb.contains({{0, 1}, {2, 1}}));
  CHECK_FALSE(eb.contains({{3, 1}}));
  CHECK(eb.size() == 2);
}
