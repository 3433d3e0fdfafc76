#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "hhdx/linalg.hpp"

namespace hhdx {

/// Bounded cochain complex C^lo -> ... -> C^hi over F_p.
/// d(m) : C^m -> C^{m+1} for lo <= m < hi; d o d = 0 is checked on construction.
class CochainComplex {
 public:
  CochainComplex(PrimeField f, int lo, std::vector<std::size_t> dims, std::vector<SparseMatrix> differentials);

  const PrimeField& field() const { return f_; }
  int lo() const { return lo_; }
  int hi() const { return lo_ + static_cast<int>(dims_.size()) - 1; }
  std::size_t dim(int m) const;
  /// Differential out of degree m; a zero map at the top degree.
  const SparseMatrix& d(int m) const;

  struct Cohomology {
    std::size_t dim = 0;
    /// Cocycles whose classes form a basis of H^m. Left empty when
    /// `with_representatives` was false.
    std::vector<SparseVec> representatives;
  };
  Cohomology cohomology(int m, bool with_representatives = true) const;
  std::vector<std::size_t> cohomology_dims() const;
  long euler_characteristic() const;

 private:
  PrimeField f_;
  int lo_;
  std::vector<std::size_t> dims_;
  std::vector<SparseMatrix> d_;
  SparseMatrix top_;
};

/// Per-degree grading of basis vectors: grades[m - lo][k] is the grade of the
/// k-th basis vector of C^m.
using BasisGrading = std::vector<std::vector<int>>;

/// Throws std::logic_error unless every differential preserves the grading.
void check_grading(const CochainComplex& c, const BasisGrading& grades);

/// The subcomplex spanned by the basis vectors of grade g.
CochainComplex graded_piece(const CochainComplex& c, const BasisGrading& grades, int g);

/// Cohomology dimensions of every graded piece, keyed by grade.
std::map<int, std::vector<std::size_t>> graded_cohomology_dims(const CochainComplex& c, const BasisGrading& grades);

/// Bounded first-quadrant double complex with spaces C^{i,j}, 0 <= i <= I,
/// 0 <= j <= J. The stored horizontal and vertical differentials commute;
/// the total differential is d_h + (-1)^i d_v on column i, which makes the
/// signed pieces anticommute.
class DoubleComplex {
 public:
  DoubleComplex(PrimeField f, std::vector<std::vector<std::size_t>> dims);

  const PrimeField& field() const { return f_; }
  int max_i() const { return static_cast<int>(dims_.size()) - 1; }
  int max_j() const { return dims_.empty() ? -1 : static_cast<int>(dims_[0].size()) - 1; }
  std::size_t dim(int i, int j) const;

  void set_horizontal(int i, int j, SparseMatrix m);
  void set_vertical(int i, int j, SparseMatrix m);
  /// C^{i,j} -> C^{i+1,j}; zero when unset or i = I.
  SparseMatrix horizontal(int i, int j) const;
  /// C^{i,j} -> C^{i,j+1}; zero when unset or j = J.
  SparseMatrix vertical(int i, int j) const;

  /// Verifies d_h^2 = 0, d_v^2 = 0, d_h d_v = d_v d_h; throws on failure.
  void check() const;

 private:
  PrimeField f_;
  std::vector<std::vector<std::size_t>> dims_;
  std::map<std::pair<int, int>, SparseMatrix> h_;
  std::map<std::pair<int, int>, SparseMatrix> v_;
};

struct Totalization {
  CochainComplex complex;
  /// offset[n][i]: start of the C^{i, n-i} block inside Tot^n (columns
  /// ordered by increasing i). -1 when the block is out of range.
  std::vector<std::vector<long>> offset;
};

Totalization totalize(const DoubleComplex& dc);

struct SpectralSequencePage {
  int index = 0;
  /// dims[i][j] = dim E_index^{i,j}
  std::vector<std::vector<std::size_t>> dims;
  /// ranks[i][j] = rank of d_index : E^{i,j} -> E^{i+index, j-index+1}
  std::vector<std::vector<std::size_t>> ranks;
};

struct SpectralSequence {
  std::vector<SpectralSequencePage> pages;  // E_1, E_2, ...
  SpectralSequencePage infinity;
  std::vector<std::size_t> total_cohomology;  // dim H^n(Tot)
  /// E_{l+1} = H(E_l, d_l) on every computed page.
  bool pages_consistent = true;
  /// sum_{i+j=n} dim E_inf^{i,j} = dim H^n(Tot) for every n.
  bool converges = true;
};

/// Spectral sequence of the column filtration F^l = (columns i >= l),
/// computed from explicit subquotients of the total complex:
///   E_r^{i,j} = Z_r^i / (Z_{r-1}^{i+1} + d Z_{r-1}^{i-r+1}),
///   Z_r^i = { x in F^i Tot : dx in F^{i+r} Tot }.
/// Pages E_1 .. E_max_page are returned; E_inf is computed separately.
SpectralSequence spectral_sequence(const DoubleComplex& dc, int max_page);

}  // namespace hhdx
