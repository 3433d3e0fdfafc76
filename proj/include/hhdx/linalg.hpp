#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "hhdx/gfp.hpp"

namespace hhdx {

using DenseVec = std::vector<Residue>;
/// Sparse vector: (index, nonzero value) pairs with strictly increasing index.
using SparseVec = std::vector<std::pair<std::uint32_t, Residue>>;

SparseVec to_sparse(const DenseVec& v);
DenseVec to_dense(const SparseVec& v, std::size_t n);
/// y <- y + a*x
void axpy(const PrimeField& f, Residue a, const SparseVec& x, SparseVec& y);
SparseVec scaled(const PrimeField& f, Residue a, const SparseVec& x);

/// Dense row-major matrix over F_p.
class FpMatrix {
 public:
  FpMatrix(PrimeField f, std::size_t rows, std::size_t cols);
  FpMatrix(PrimeField f, std::size_t rows, std::size_t cols, std::vector<Residue> data);

  static FpMatrix identity(PrimeField f, std::size_t n);

  const PrimeField& field() const { return f_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Residue& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  Residue at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  const std::vector<Residue>& data() const { return data_; }

  FpMatrix operator*(const FpMatrix& o) const;
  FpMatrix operator+(const FpMatrix& o) const;
  bool operator==(const FpMatrix& o) const;
  bool is_zero() const;
  DenseVec apply(const DenseVec& v) const;
  FpMatrix transpose() const;

 private:
  PrimeField f_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Residue> data_;
};

struct RankKernelImage {
  std::size_t rank = 0;
  /// Basis of {v : Mv = 0}, one vector per free column of the reduced form.
  std::vector<DenseVec> kernel;
  /// The pivot columns of M, a basis of its column space.
  std::vector<DenseVec> image;
  std::vector<std::size_t> pivot_columns;
};

/// Gauss-Jordan elimination; each pivot's elimination sweep is spread over
/// rows with OpenMP. Pivots are the first nonzero entry scanning row-major,
/// so the result is identical to the serial reference.
RankKernelImage rank_kernel_image(const FpMatrix& m);

namespace serial {
RankKernelImage rank_kernel_image(const FpMatrix& m);
}

/// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> rref(FpMatrix& m, bool parallel = true);

/// Sparse matrix stored by rows.
class SparseMatrix {
 public:
  SparseMatrix(PrimeField f, std::size_t rows, std::size_t cols);

  struct Triplet {
    std::uint32_t row;
    std::uint32_t col;
    Residue value;
  };
  /// Duplicate (row, col) entries are summed.
  static SparseMatrix from_triplets(PrimeField f, std::size_t rows, std::size_t cols,
                                    std::vector<Triplet> triplets);
  static SparseMatrix from_dense(const FpMatrix& m);
  static SparseMatrix identity(PrimeField f, std::size_t n);

  const PrimeField& field() const { return f_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const SparseVec& row(std::size_t r) const { return rows_data_[r]; }
  std::size_t nonzeros() const;

  SparseVec apply(const SparseVec& v) const;
  SparseMatrix operator*(const SparseMatrix& o) const;
  SparseMatrix operator+(const SparseMatrix& o) const;
  SparseMatrix scaled(Residue a) const;
  SparseMatrix transpose() const;
  FpMatrix to_dense() const;
  bool is_zero() const;
  bool operator==(const SparseMatrix& o) const;

 private:
  PrimeField f_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<SparseVec> rows_data_;
};

/// sum_k coeffs[k] * m.row(k), accumulated densely. With m = A^T this is A*v
/// in time proportional to the touched columns.
SparseVec combine_rows(const SparseMatrix& m, const SparseVec& coeffs);

/// Below this column count, rank computations go through the dense kernel.
constexpr std::size_t kDenseColumnLimit = 512;

/// Rows with pairwise distinct leading indices, spanning a subspace of F_p^n.
/// Insertion reduces leading entries only; membership is decided by the same
/// reduction, which terminates at zero exactly for vectors in the span.
class EchelonBasis {
 public:
  EchelonBasis(PrimeField f, std::size_t ambient) : f_(f), n_(ambient) {}

  std::size_t ambient() const { return n_; }
  std::size_t size() const { return rows_.size(); }
  const std::vector<SparseVec>& rows() const { return rows_; }

  /// Reduce v against the basis; the result is zero iff v is in the span.
  SparseVec reduce(SparseVec v) const;
  /// Returns true if v was independent and has been added.
  bool insert(SparseVec v);
  bool contains(const SparseVec& v) const { return reduce(v).empty(); }

 private:
  PrimeField f_;
  std::size_t n_;
  std::vector<SparseVec> rows_;
  std::vector<std::int64_t> pivot_row_;  // by column; -1 when free
  void ensure_index();
};

struct SparseKernelImage {
  std::size_t rank = 0;
  std::vector<SparseVec> kernel;
  /// Independent columns of M, reduced to echelon form.
  std::vector<SparseVec> image;
};

/// Kernel and image of a sparse matrix by column elimination with a tag
/// block, which yields the kernel without a separate back-substitution.
SparseKernelImage kernel_image(const SparseMatrix& m);
std::size_t rank(const SparseMatrix& m);

}  // namespace hhdx
