#include "hhdx/linalg.hpp"

#include <algorithm>
#include <stdexcept>

namespace hhdx {

SparseVec to_sparse(const DenseVec& v) {
  SparseVec out;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0) out.emplace_back(static_cast<std::uint32_t>(i), v[i]);
  return out;
}

DenseVec to_dense(const SparseVec& v, std::size_t n) {
  DenseVec out(n, 0);
  for (auto [i, a] : v) out.at(i) = a;
  return out;
}

void axpy(const PrimeField& f, Residue a, const SparseVec& x, SparseVec& y) {
  if (a == 0 || x.empty()) return;
  SparseVec out;
  out.reserve(x.size() + y.size());
  auto xi = x.begin();
  auto yi = y.begin();
  while (xi != x.end() || yi != y.end()) {
    if (yi == y.end() || (xi != x.end() && xi->first < yi->first)) {
      out.emplace_back(xi->first, f.mul(a, xi->second));
      ++xi;
    } else if (xi == x.end() || yi->first < xi->first) {
      out.push_back(*yi);
      ++yi;
    } else {
      Residue s = f.add(yi->second, f.mul(a, xi->second));
      if (s != 0) out.emplace_back(yi->first, s);
      ++xi;
      ++yi;
    }
  }
  y = std::move(out);
}

SparseVec scaled(const PrimeField& f, Residue a, const SparseVec& x) {
  SparseVec out;
  if (a == 0) return out;
  out.reserve(x.size());
  for (auto [i, v] : x) out.emplace_back(i, f.mul(a, v));
  return out;
}

// ---------------------------------------------------------------------------
// Dense

FpMatrix::FpMatrix(PrimeField f, std::size_t rows, std::size_t cols)
    : f_(f), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

FpMatrix::FpMatrix(PrimeField f, std::size_t rows, std::size_t cols, std::vector<Residue> data)
    : f_(f), rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) throw std::invalid_argument("FpMatrix: data size mismatch");
  for (auto& e : data_) e %= f_.p();
}

FpMatrix FpMatrix::identity(PrimeField f, std::size_t n) {
  FpMatrix m(f, n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

FpMatrix FpMatrix::operator*(const FpMatrix& o) const {
  if (cols_ != o.rows_) throw std::invalid_argument("FpMatrix: shape mismatch in product");
  FpMatrix out(f_, rows_, o.cols_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t k = 0; k < cols_; ++k) {
      Residue a = at(r, k);
      if (a == 0) continue;
      for (std::size_t c = 0; c < o.cols_; ++c)
        out.at(r, c) = f_.add(out.at(r, c), f_.mul(a, o.at(k, c)));
    }
  return out;
}

FpMatrix FpMatrix::operator+(const FpMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("FpMatrix: shape mismatch in sum");
  FpMatrix out(f_, rows_, cols_);
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = f_.add(data_[i], o.data_[i]);
  return out;
}

bool FpMatrix::operator==(const FpMatrix& o) const {
  return f_ == o.f_ && rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
}

bool FpMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](Residue a) { return a == 0; });
}

DenseVec FpMatrix::apply(const DenseVec& v) const {
  if (v.size() != cols_) throw std::invalid_argument("FpMatrix::apply: dimension mismatch");
  DenseVec out(rows_, 0);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out[r] = f_.add(out[r], f_.mul(at(r, c), v[c]));
  return out;
}

FpMatrix FpMatrix::transpose() const {
  FpMatrix out(f_, cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out.at(c, r) = at(r, c);
  return out;
}

std::vector<std::size_t> rref(FpMatrix& m, bool parallel) {
  const PrimeField f = m.field();
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  std::vector<std::size_t> pivots;
  std::size_t lead_row = 0;
  for (std::size_t c = 0; c < cols && lead_row < rows; ++c) {
    std::size_t found = rows;
    for (std::size_t r = lead_row; r < rows; ++r)
      if (m.at(r, c) != 0) {
        found = r;
        break;
      }
    if (found == rows) continue;
    if (found != lead_row)
      for (std::size_t k = 0; k < cols; ++k) std::swap(m.at(found, k), m.at(lead_row, k));
    Residue inv = f.inv(m.at(lead_row, c));
    for (std::size_t k = c; k < cols; ++k) m.at(lead_row, k) = f.mul(m.at(lead_row, k), inv);

    const long long nrows = static_cast<long long>(rows);
    const std::size_t pr = lead_row;
#pragma omp parallel for schedule(static) if (parallel && rows * cols > 4096)
    for (long long r = 0; r < nrows; ++r) {
      if (static_cast<std::size_t>(r) == pr) continue;
      Residue factor = m.at(r, c);
      if (factor == 0) continue;
      Residue neg = f.neg(factor);
      for (std::size_t k = c; k < cols; ++k) {
        Residue pv = m.at(pr, k);
        if (pv != 0) m.at(r, k) = f.add(m.at(r, k), f.mul(neg, pv));
      }
    }
    pivots.push_back(c);
    ++lead_row;
  }
  return pivots;
}

namespace {

RankKernelImage rank_kernel_image_impl(const FpMatrix& m, bool parallel) {
  FpMatrix work = m;
  auto pivots = rref(work, parallel);
  const PrimeField f = m.field();
  RankKernelImage out;
  out.rank = pivots.size();
  out.pivot_columns = pivots;
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : pivots) is_pivot[c] = true;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    DenseVec v(m.cols(), 0);
    v[free] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = f.neg(work.at(i, free));
    out.kernel.push_back(std::move(v));
  }
  for (auto c : pivots) {
    DenseVec col(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) col[r] = m.at(r, c);
    out.image.push_back(std::move(col));
  }
  return out;
}

}  // namespace

RankKernelImage rank_kernel_image(const FpMatrix& m) { return rank_kernel_image_impl(m, true); }

namespace serial {
RankKernelImage rank_kernel_image(const FpMatrix& m) { return rank_kernel_image_impl(m, false); }
}  // namespace serial

// ---------------------------------------------------------------------------
// Sparse

SparseMatrix::SparseMatrix(PrimeField f, std::size_t rows, std::size_t cols)
    : f_(f), rows_(rows), cols_(cols), rows_data_(rows) {}

SparseMatrix SparseMatrix::from_triplets(PrimeField f, std::size_t rows, std::size_t cols,
                                         std::vector<Triplet> triplets) {
  std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  SparseMatrix m(f, rows, cols);
  for (std::size_t i = 0; i < triplets.size();) {
    const auto r = triplets[i].row;
    const auto c = triplets[i].col;
    if (r >= rows || c >= cols) throw std::out_of_range("SparseMatrix: triplet out of range");
    Residue s = 0;
    for (; i < triplets.size() && triplets[i].row == r && triplets[i].col == c; ++i)
      s = f.add(s, triplets[i].value % f.p());
    if (s != 0) m.rows_data_[r].emplace_back(c, s);
  }
  return m;
}

SparseMatrix SparseMatrix::from_dense(const FpMatrix& d) {
  SparseMatrix m(d.field(), d.rows(), d.cols());
  for (std::size_t r = 0; r < d.rows(); ++r)
    for (std::size_t c = 0; c < d.cols(); ++c)
      if (d.at(r, c) != 0) m.rows_data_[r].emplace_back(static_cast<std::uint32_t>(c), d.at(r, c));
  return m;
}

SparseMatrix SparseMatrix::identity(PrimeField f, std::size_t n) {
  SparseMatrix m(f, n, n);
  for (std::size_t i = 0; i < n; ++i) m.rows_data_[i].emplace_back(static_cast<std::uint32_t>(i), 1);
  return m;
}

std::size_t SparseMatrix::nonzeros() const {
  std::size_t n = 0;
  for (const auto& r : rows_data_) n += r.size();
  return n;
}

SparseVec SparseMatrix::apply(const SparseVec& v) const {
  // column access by scanning rows: v is usually short
  SparseVec out;
  for (std::size_t r = 0; r < rows_; ++r) {
    const auto& row = rows_data_[r];
    Residue s = 0;
    auto ri = row.begin();
    auto vi = v.begin();
    while (ri != row.end() && vi != v.end()) {
      if (ri->first < vi->first)
        ++ri;
      else if (vi->first < ri->first)
        ++vi;
      else {
        s = f_.add(s, f_.mul(ri->second, vi->second));
        ++ri;
        ++vi;
      }
    }
    if (s != 0) out.emplace_back(static_cast<std::uint32_t>(r), s);
  }
  return out;
}

SparseMatrix SparseMatrix::operator*(const SparseMatrix& o) const {
  if (cols_ != o.rows_) throw std::invalid_argument("SparseMatrix: shape mismatch in product");
  SparseMatrix out(f_, rows_, o.cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    SparseVec acc;
    for (auto [k, a] : rows_data_[r]) axpy(f_, a, o.rows_data_[k], acc);
    out.rows_data_[r] = std::move(acc);
  }
  return out;
}

SparseMatrix SparseMatrix::operator+(const SparseMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("SparseMatrix: shape mismatch in sum");
  SparseMatrix out = *this;
  for (std::size_t r = 0; r < rows_; ++r) axpy(f_, 1, o.rows_data_[r], out.rows_data_[r]);
  return out;
}

SparseMatrix SparseMatrix::scaled(Residue a) const {
  SparseMatrix out(f_, rows_, cols_);
  for (std::size_t r = 0; r < rows_; ++r) out.rows_data_[r] = hhdx::scaled(f_, a % f_.p(), rows_data_[r]);
  return out;
}

SparseMatrix SparseMatrix::transpose() const {
  SparseMatrix out(f_, cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (auto [c, a] : rows_data_[r]) out.rows_data_[c].emplace_back(static_cast<std::uint32_t>(r), a);
  return out;
}

FpMatrix SparseMatrix::to_dense() const {
  FpMatrix out(f_, rows_, cols_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (auto [c, a] : rows_data_[r]) out.at(r, c) = a;
  return out;
}

bool SparseMatrix::is_zero() const {
  return std::all_of(rows_data_.begin(), rows_data_.end(), [](const SparseVec& r) { return r.empty(); });
}

bool SparseMatrix::operator==(const SparseMatrix& o) const {
  return f_ == o.f_ && rows_ == o.rows_ && cols_ == o.cols_ && rows_data_ == o.rows_data_;
}

SparseVec combine_rows(const SparseMatrix& m, const SparseVec& coeffs) {
  const PrimeField& f = m.field();
  std::vector<Residue> acc(m.cols(), 0);
  std::vector<std::uint32_t> touched;
  for (auto [k, a] : coeffs)
    for (auto [c, b] : m.row(k)) {
      if (acc[c] == 0) touched.push_back(c);
      acc[c] = f.add(acc[c], f.mul(a, b));
    }
  std::sort(touched.begin(), touched.end());
  touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
  SparseVec out;
  for (auto c : touched)
    if (acc[c] != 0) out.emplace_back(c, acc[c]);
  return out;
}

// ---------------------------------------------------------------------------
// Echelon bases

void EchelonBasis::ensure_index() {
  if (pivot_row_.size() != n_) pivot_row_.assign(n_, -1);
}

SparseVec EchelonBasis::reduce(SparseVec v) const {
  if (rows_.empty()) return v;
  std::size_t start = 0;
  // Eliminate leading entries that hit a pivot; once a leading entry has no
  // pivot, later pivots can still occur further right, so keep scanning.
  SparseVec residue;
  while (start < v.size()) {
    auto [col, a] = v[start];
    std::int64_t pr = pivot_row_[col];
    if (pr < 0) {
      residue.emplace_back(col, a);
      ++start;
      continue;
    }
    const SparseVec& row = rows_[static_cast<std::size_t>(pr)];
    // row is normalized with leading coefficient 1
    SparseVec tail(v.begin() + static_cast<std::ptrdiff_t>(start), v.end());
    axpy(f_, f_.neg(a), row, tail);
    v = std::move(tail);
    start = 0;
  }
  return residue;
}

bool EchelonBasis::insert(SparseVec v) {
  ensure_index();
  v = reduce(std::move(v));
  if (v.empty()) return false;
  Residue inv = f_.inv(v.front().second);
  v = hhdx::scaled(f_, inv, v);
  pivot_row_[v.front().first] = static_cast<std::int64_t>(rows_.size());
  rows_.push_back(std::move(v));
  return true;
}

// ---------------------------------------------------------------------------

SparseKernelImage kernel_image(const SparseMatrix& m) {
  const PrimeField f = m.field();
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  // Columns augmented with a tag block: (M e_j | e_j). Echelon pivots are
  // restricted to the image block; a column whose image part vanishes after
  // reduction contributes its tag part as a kernel vector.
  SparseMatrix mt = m.transpose();
  std::vector<SparseVec> pivot_rows;
  std::vector<std::int64_t> pivot_of(rows, -1);
  SparseKernelImage out;
  for (std::size_t j = 0; j < cols; ++j) {
    SparseVec v = mt.row(j);
    v.emplace_back(static_cast<std::uint32_t>(rows + j), 1);
    // reduce the image block
    while (!v.empty() && v.front().first < rows) {
      auto [c, a] = v.front();
      std::int64_t pr = pivot_of[c];
      if (pr < 0) break;
      axpy(f, f.neg(a), pivot_rows[static_cast<std::size_t>(pr)], v);
    }
    if (!v.empty() && v.front().first < rows) {
      Residue inv = f.inv(v.front().second);
      v = scaled(f, inv, v);
      pivot_of[v.front().first] = static_cast<std::int64_t>(pivot_rows.size());
      SparseVec img;
      for (auto [i, a] : v)
        if (i < rows) img.emplace_back(i, a);
      out.image.push_back(std::move(img));
      pivot_rows.push_back(std::move(v));
    } else {
      SparseVec k;
      for (auto [i, a] : v) k.emplace_back(static_cast<std::uint32_t>(i - rows), a);
      out.kernel.push_back(std::move(k));
    }
  }
  out.rank = out.image.size();
  return out;
}

std::size_t rank(const SparseMatrix& m) {
  if (m.cols() < kDenseColumnLimit && m.rows() < 4 * kDenseColumnLimit) {
    FpMatrix d = m.to_dense();
    return rref(d, true).size();
  }
  EchelonBasis b(m.field(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) b.insert(m.row(r));
  return b.size();
}

}  // namespace hhdx
