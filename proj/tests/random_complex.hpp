#pragma once

// Random double complexes with known cohomology. Each one is a direct sum of
// tensor products A (x) B of one-variable complexes built from points and
// acyclic edges, followed by a random change of basis in every bidegree.
// Kuenneth then gives E_2^{i,j} = H^i(A) (x) H^j(B) exactly.

#include <random>
#include <vector>

#include "hhdx/complex.hpp"

namespace testing_support {

using hhdx::FpMatrix;
using hhdx::PrimeField;
using hhdx::SparseMatrix;

struct Simple {
  std::vector<std::size_t> dims;
  std::vector<std::size_t> h;   // cohomology dimensions
  std::vector<FpMatrix> d;      // d[i] : C^i -> C^{i+1}
};

inline Simple random_simple(PrimeField f, int top, std::mt19937& rng) {
  Simple s;
  s.dims.assign(top + 1, 0);
  s.h.assign(top + 1, 0);
  struct Piece {
    int deg;
    bool edge;
  };
  std::vector<Piece> pieces;
  int count = 1 + rng() % 4;
  for (int k = 0; k < count; ++k) {
    int deg = rng() % (top + 1);
    bool edge = deg < top && rng() % 2;
    pieces.push_back({deg, edge});
  }
  std::vector<std::vector<std::pair<int, std::size_t>>> slots;  // not needed beyond counting
  std::vector<std::size_t> next(top + 1, 0);
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> edges(top + 1);
  for (auto& pc : pieces) {
    if (pc.edge) {
      std::size_t a = next[pc.deg]++, b = next[pc.deg + 1]++;
      edges[pc.deg].push_back({a, b});
    } else {
      ++next[pc.deg];
      ++s.h[pc.deg];
    }
  }
  s.dims = next;
  for (int i = 0; i < top; ++i) {
    FpMatrix m(f, s.dims[i + 1], s.dims[i]);
    for (auto [a, b] : edges[i]) m.at(b, a) = 1 + rng() % (f.p() - 1);
    s.d.push_back(m);
  }
  return s;
}

inline FpMatrix kron(const FpMatrix& a, const FpMatrix& b) {
  const PrimeField& f = a.field();
  FpMatrix out(f, a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          out.at(i * b.rows() + k, j * b.cols() + l) = f.mul(a.at(i, j), b.at(k, l));
  return out;
}

inline FpMatrix block_diag(const std::vector<FpMatrix>& blocks, PrimeField f) {
  std::size_t r = 0, c = 0;
  for (auto& b : blocks) {
    r += b.rows();
    c += b.cols();
  }
  FpMatrix out(f, r, c);
  std::size_t r0 = 0, c0 = 0;
  for (auto& b : blocks) {
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j) out.at(r0 + i, c0 + j) = b.at(i, j);
    r0 += b.rows();
    c0 += b.cols();
  }
  return out;
}

// Random invertible g together with its inverse.
inline std::pair<FpMatrix, FpMatrix> random_invertible(PrimeField f, std::size_t n, std::mt19937& rng) {
  FpMatrix g = FpMatrix::identity(f, n), gi = FpMatrix::identity(f, n);
  if (n < 2) return {g, gi};
  for (std::size_t step = 0; step < 3 * n; ++step) {
    std::size_t i = rng() % n, j = rng() % n;
    if (i == j) continue;
    hhdx::Residue c = rng() % f.p();
    // g <- E g with E = I + c e_i e_j^T ; gi <- gi E^{-1}
    for (std::size_t k = 0; k < n; ++k) g.at(i, k) = f.add(g.at(i, k), f.mul(c, g.at(j, k)));
    for (std::size_t k = 0; k < n; ++k) gi.at(k, j) = f.sub(gi.at(k, j), f.mul(c, gi.at(k, i)));
  }
  return {g, gi};
}

struct RandomDouble {
  hhdx::DoubleComplex dc;
  std::vector<std::vector<std::size_t>> e2;  // expected E_2 dims
  std::vector<std::size_t> total;            // expected H^n(Tot)
};

inline RandomDouble random_double_complex(PrimeField f, int I, int J, std::mt19937& rng) {
  int summands = 1 + rng() % 2;
  std::vector<Simple> as, bs;
  for (int s = 0; s < summands; ++s) {
    as.push_back(random_simple(f, I, rng));
    bs.push_back(random_simple(f, J, rng));
  }
  std::vector<std::vector<std::size_t>> dims(I + 1, std::vector<std::size_t>(J + 1, 0));
  std::vector<std::vector<std::size_t>> e2(I + 1, std::vector<std::size_t>(J + 1, 0));
  std::vector<std::size_t> total(I + J + 1, 0);
  for (int s = 0; s < summands; ++s)
    for (int i = 0; i <= I; ++i)
      for (int j = 0; j <= J; ++j) {
        dims[i][j] += as[s].dims[i] * bs[s].dims[j];
        e2[i][j] += as[s].h[i] * bs[s].h[j];
        total[i + j] += as[s].h[i] * bs[s].h[j];
      }
  std::vector<std::vector<std::pair<FpMatrix, FpMatrix>>> g(I + 1);
  for (int i = 0; i <= I; ++i)
    for (int j = 0; j <= J; ++j) g[i].push_back(random_invertible(f, dims[i][j], rng));
  hhdx::DoubleComplex dc(f, dims);
  for (int i = 0; i <= I; ++i)
    for (int j = 0; j <= J; ++j) {
      if (i < I) {
        std::vector<FpMatrix> blocks;
        for (int s = 0; s < summands; ++s)
          blocks.push_back(kron(as[s].d[i], FpMatrix::identity(f, bs[s].dims[j])));
        auto m = g[i + 1][j].first * block_diag(blocks, f) * g[i][j].second;
        dc.set_horizontal(i, j, SparseMatrix::from_dense(m));
      }
      if (j < J) {
        std::vector<FpMatrix> blocks;
        for (int s = 0; s < summands; ++s)
          blocks.push_back(kron(FpMatrix::identity(f, as[s].dims[i]), bs[s].d[j]));
        auto m = g[i][j + 1].first * block_diag(blocks, f) * g[i][j].second;
        dc.set_vertical(i, j, SparseMatrix::from_dense(m));
      }
    }
  return {std::move(dc), e2, total};
}

}  // namespace testing_support
