#include "hhdx/complex.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <tuple>

namespace hhdx {

namespace {

std::vector<SparseVec> kernel_basis(const SparseMatrix& m) {
  if (m.cols() < kDenseColumnLimit && m.rows() < 4 * kDenseColumnLimit) {
    auto rki = rank_kernel_image(m.to_dense());
    std::vector<SparseVec> out;
    out.reserve(rki.kernel.size());
    for (auto& k : rki.kernel) out.push_back(to_sparse(k));
    return out;
  }
  return kernel_image(m).kernel;
}

std::vector<SparseVec> image_basis(const SparseMatrix& m) {
  return kernel_image(m).image;
}

}  // namespace

CochainComplex::CochainComplex(PrimeField f, int lo, std::vector<std::size_t> dims,
                               std::vector<SparseMatrix> differentials)
    : f_(f), lo_(lo), dims_(std::move(dims)), d_(std::move(differentials)), top_(f, 0, 0) {
  if (dims_.empty()) throw std::invalid_argument("CochainComplex: empty degree range");
  if (d_.size() + 1 != dims_.size())
    throw std::invalid_argument("CochainComplex: need one differential per non-top degree");
  for (std::size_t k = 0; k < d_.size(); ++k) {
    if (d_[k].cols() != dims_[k] || d_[k].rows() != dims_[k + 1])
      throw std::invalid_argument("CochainComplex: differential " + std::to_string(lo_ + static_cast<int>(k)) +
                                  " has the wrong shape");
  }
  for (std::size_t k = 0; k + 1 < d_.size(); ++k)
    if (!(d_[k + 1] * d_[k]).is_zero())
      throw std::logic_error("CochainComplex: d o d != 0 at degree " + std::to_string(lo_ + static_cast<int>(k)));
  top_ = SparseMatrix(f_, 0, dims_.back());
}

std::size_t CochainComplex::dim(int m) const {
  if (m < lo() || m > hi()) return 0;
  return dims_[static_cast<std::size_t>(m - lo_)];
}

const SparseMatrix& CochainComplex::d(int m) const {
  if (m < lo() || m > hi()) throw std::out_of_range("CochainComplex::d: degree out of range");
  if (m == hi()) return top_;
  return d_[static_cast<std::size_t>(m - lo_)];
}

CochainComplex::Cohomology CochainComplex::cohomology(int m, bool with_representatives) const {
  if (m < lo() || m > hi()) throw std::out_of_range("CochainComplex::cohomology: degree out of range");
  Cohomology out;
  const std::size_t incoming_rank = (m > lo()) ? rank(d(m - 1)) : 0;
  if (!with_representatives) {
    std::size_t kernel_dim = dim(m) - rank(d(m));
    out.dim = kernel_dim - incoming_rank;
    return out;
  }
  auto kernel = kernel_basis(d(m));
  EchelonBasis span(f_, dim(m));
  if (m > lo())
    for (auto& v : image_basis(d(m - 1))) span.insert(v);
  for (auto& k : kernel)
    if (span.insert(k)) out.representatives.push_back(k);
  out.dim = out.representatives.size();
  return out;
}

std::vector<std::size_t> CochainComplex::cohomology_dims() const {
  std::vector<std::size_t> out;
  for (int m = lo(); m <= hi(); ++m) out.push_back(cohomology(m, false).dim);
  return out;
}

long CochainComplex::euler_characteristic() const {
  long chi = 0;
  for (int m = lo(); m <= hi(); ++m) chi += ((m % 2 == 0) ? 1 : -1) * static_cast<long>(dim(m));
  return chi;
}

void check_grading(const CochainComplex& c, const BasisGrading& grades) {
  if (grades.size() != static_cast<std::size_t>(c.hi() - c.lo() + 1))
    throw std::invalid_argument("check_grading: one grade vector per degree required");
  for (int m = c.lo(); m <= c.hi(); ++m) {
    const auto& gm = grades[static_cast<std::size_t>(m - c.lo())];
    if (gm.size() != c.dim(m)) throw std::invalid_argument("check_grading: grade vector has the wrong length");
    if (m == c.hi()) continue;
    const auto& gn = grades[static_cast<std::size_t>(m + 1 - c.lo())];
    const auto& d = c.d(m);
    for (std::size_t r = 0; r < d.rows(); ++r)
      for (auto& [col, v] : d.row(r))
        if (gm[col] != gn[r]) throw std::logic_error("check_grading: differential does not preserve the grading");
  }
}

CochainComplex graded_piece(const CochainComplex& c, const BasisGrading& grades, int g) {
  const PrimeField& f = c.field();
  std::vector<std::vector<std::int64_t>> position;
  std::vector<std::size_t> dims;
  for (int m = c.lo(); m <= c.hi(); ++m) {
    const auto& gm = grades[static_cast<std::size_t>(m - c.lo())];
    std::vector<std::int64_t> pos(gm.size(), -1);
    std::size_t k = 0;
    for (std::size_t i = 0; i < gm.size(); ++i)
      if (gm[i] == g) pos[i] = static_cast<std::int64_t>(k++);
    position.push_back(std::move(pos));
    dims.push_back(k);
  }
  std::vector<SparseMatrix> ds;
  for (int m = c.lo(); m < c.hi(); ++m) {
    const std::size_t s = static_cast<std::size_t>(m - c.lo());
    std::vector<SparseMatrix::Triplet> t;
    const auto& d = c.d(m);
    for (std::size_t r = 0; r < d.rows(); ++r) {
      if (position[s + 1][r] < 0) continue;
      for (auto& [col, v] : d.row(r))
        if (position[s][col] >= 0)
          t.push_back({static_cast<std::uint32_t>(position[s + 1][r]), static_cast<std::uint32_t>(position[s][col]), v});
    }
    ds.push_back(SparseMatrix::from_triplets(f, dims[s + 1], dims[s], std::move(t)));
  }
  return CochainComplex(f, c.lo(), dims, std::move(ds));
}

std::map<int, std::vector<std::size_t>> graded_cohomology_dims(const CochainComplex& c, const BasisGrading& grades) {
  check_grading(c, grades);
  std::set<int> all;
  for (auto& gm : grades) all.insert(gm.begin(), gm.end());
  std::map<int, std::vector<std::size_t>> out;
  for (int g : all) out[g] = graded_piece(c, grades, g).cohomology_dims();
  return out;
}

// ---------------------------------------------------------------------------

DoubleComplex::DoubleComplex(PrimeField f, std::vector<std::vector<std::size_t>> dims)
    : f_(f), dims_(std::move(dims)) {
  for (auto& col : dims_)
    if (col.size() != dims_.front().size()) throw std::invalid_argument("DoubleComplex: ragged dimension table");
}

std::size_t DoubleComplex::dim(int i, int j) const {
  if (i < 0 || j < 0 || i > max_i() || j > max_j()) return 0;
  return dims_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
}

void DoubleComplex::set_horizontal(int i, int j, SparseMatrix m) {
  if (m.cols() != dim(i, j) || m.rows() != dim(i + 1, j))
    throw std::invalid_argument("DoubleComplex: horizontal map has the wrong shape");
  h_.insert_or_assign({i, j}, std::move(m));
}

void DoubleComplex::set_vertical(int i, int j, SparseMatrix m) {
  if (m.cols() != dim(i, j) || m.rows() != dim(i, j + 1))
    throw std::invalid_argument("DoubleComplex: vertical map has the wrong shape");
  v_.insert_or_assign({i, j}, std::move(m));
}

SparseMatrix DoubleComplex::horizontal(int i, int j) const {
  auto it = h_.find({i, j});
  if (it != h_.end()) return it->second;
  return SparseMatrix(f_, dim(i + 1, j), dim(i, j));
}

SparseMatrix DoubleComplex::vertical(int i, int j) const {
  auto it = v_.find({i, j});
  if (it != v_.end()) return it->second;
  return SparseMatrix(f_, dim(i, j + 1), dim(i, j));
}

void DoubleComplex::check() const {
  for (int i = 0; i <= max_i(); ++i)
    for (int j = 0; j <= max_j(); ++j) {
      auto at = " at (" + std::to_string(i) + "," + std::to_string(j) + ")";
      if (!(horizontal(i + 1, j) * horizontal(i, j)).is_zero())
        throw std::logic_error("DoubleComplex: d_h^2 != 0" + at);
      if (!(vertical(i, j + 1) * vertical(i, j)).is_zero())
        throw std::logic_error("DoubleComplex: d_v^2 != 0" + at);
      if (!(horizontal(i, j + 1) * vertical(i, j) == vertical(i + 1, j) * horizontal(i, j)))
        throw std::logic_error("DoubleComplex: d_h and d_v do not commute" + at);
    }
}

Totalization totalize(const DoubleComplex& dc) {
  const PrimeField f = dc.field();
  const int I = dc.max_i();
  const int J = dc.max_j();
  if (I < 0 || J < 0) throw std::invalid_argument("totalize: empty double complex");
  const int top = I + J;
  std::vector<std::vector<long>> offset(static_cast<std::size_t>(top + 1), std::vector<long>(I + 1, -1));
  std::vector<std::size_t> dims(static_cast<std::size_t>(top + 1), 0);
  for (int n = 0; n <= top; ++n)
    for (int i = 0; i <= I; ++i) {
      int j = n - i;
      if (j < 0 || j > J) continue;
      offset[n][i] = static_cast<long>(dims[n]);
      dims[n] += dc.dim(i, j);
    }
  std::vector<SparseMatrix> ds;
  for (int n = 0; n < top; ++n) {
    std::vector<SparseMatrix::Triplet> trip;
    for (int i = 0; i <= I; ++i) {
      int j = n - i;
      if (j < 0 || j > J) continue;
      const auto col0 = static_cast<std::uint32_t>(offset[n][i]);
      if (i + 1 <= I && offset[n + 1][i + 1] >= 0) {
        auto h = dc.horizontal(i, j);
        const auto row0 = static_cast<std::uint32_t>(offset[n + 1][i + 1]);
        for (std::size_t r = 0; r < h.rows(); ++r)
          for (auto [c, a] : h.row(r)) trip.push_back({row0 + static_cast<std::uint32_t>(r), col0 + c, a});
      }
      if (j + 1 <= J && offset[n + 1][i] >= 0) {
        auto v = dc.vertical(i, j);
        const auto row0 = static_cast<std::uint32_t>(offset[n + 1][i]);
        const Residue s = f.sign(i);
        for (std::size_t r = 0; r < v.rows(); ++r)
          for (auto [c, a] : v.row(r)) trip.push_back({row0 + static_cast<std::uint32_t>(r), col0 + c, f.mul(s, a)});
      }
    }
    ds.push_back(SparseMatrix::from_triplets(f, dims[n + 1], dims[n], std::move(trip)));
  }
  return Totalization{CochainComplex(f, 0, dims, std::move(ds)), std::move(offset)};
}

// ---------------------------------------------------------------------------

namespace {

class FiltrationCalculus {
 public:
  FiltrationCalculus(const DoubleComplex& dc, const Totalization& tot) : dc_(dc), tot_(tot) {
    for (int n = 0; n < tot_.complex.hi(); ++n) dt_.push_back(tot_.complex.d(n).transpose());
  }

  /// First coordinate of F^i Tot^n.
  std::size_t filtration_start(int n, int i) const {
    const auto& C = tot_.complex;
    if (n < 0 || n > C.hi()) return 0;
    if (i <= 0) return 0;
    for (int c = i; c <= dc_.max_i(); ++c)
      if (tot_.offset[n][c] >= 0) return static_cast<std::size_t>(tot_.offset[n][c]);
    return C.dim(n);
  }

  /// Z_r^i inside Tot^n.
  const std::vector<SparseVec>& Z(int r, int i, int n) {
    auto key = std::make_tuple(r, i, n);
    auto it = z_cache_.find(key);
    if (it != z_cache_.end()) return it->second;
    std::vector<SparseVec> basis;
    const auto& C = tot_.complex;
    if (n >= 0 && n <= C.hi()) {
      const std::size_t s = filtration_start(n, i);
      const std::size_t N = C.dim(n);
      const std::size_t t = (n + 1 <= C.hi()) ? filtration_start(n + 1, i + r) : 0;
      if (s < N) {
        const SparseMatrix& d = C.d(n);
        std::vector<SparseMatrix::Triplet> trip;
        for (std::size_t row = 0; row < t && row < d.rows(); ++row)
          for (auto [c, a] : d.row(row))
            if (c >= s) trip.push_back({static_cast<std::uint32_t>(row), static_cast<std::uint32_t>(c - s), a});
        auto restricted = SparseMatrix::from_triplets(C.field(), std::max<std::size_t>(t, 0), N - s, std::move(trip));
        for (auto& k : kernel_basis(restricted)) {
          for (auto& e : k) e.first += static_cast<std::uint32_t>(s);
          basis.push_back(std::move(k));
        }
      }
    }
    return z_cache_.emplace(key, std::move(basis)).first->second;
  }

  std::vector<SparseVec> dZ(int r, int i, int n) {
    std::vector<SparseVec> out;
    const auto& C = tot_.complex;
    if (n < 0 || n + 1 > C.hi()) return out;
    for (auto& z : Z(r, i, n)) out.push_back(combine_rows(dt_[static_cast<std::size_t>(n)], z));
    return out;
  }

  /// Z_{r-1}^{i+1} + d Z_{r-1}^{i-r+1}, inside Tot^n.
  EchelonBasis denominator(int r, int i, int n) {
    const auto& C = tot_.complex;
    EchelonBasis b(C.field(), C.dim(n));
    for (auto& v : Z(r - 1, i + 1, n)) b.insert(v);
    for (auto& v : dZ(r - 1, i - r + 1, n - 1)) b.insert(v);
    return b;
  }

  std::size_t page_dim(int r, int i, int j) {
    const int n = i + j;
    auto den = denominator(r, i, n);
    const std::size_t before = den.size();
    for (auto& v : Z(r, i, n)) den.insert(v);
    // den is contained in Z_r^i, so the growth is dim Z - dim den
    return den.size() - before;
  }

  std::size_t differential_rank(int r, int i, int j) {
    const int n = i + j;
    const auto& C = tot_.complex;
    if (n + 1 > C.hi()) return 0;
    auto den = denominator(r, i + r, n + 1);
    const std::size_t before = den.size();
    for (auto& v : dZ(r, i, n)) den.insert(v);
    return den.size() - before;
  }

 private:
  const DoubleComplex& dc_;
  const Totalization& tot_;
  std::vector<SparseMatrix> dt_;
  std::map<std::tuple<int, int, int>, std::vector<SparseVec>> z_cache_;
};

}  // namespace

SpectralSequence spectral_sequence(const DoubleComplex& dc, int max_page) {
  if (max_page < 1) throw std::invalid_argument("spectral_sequence: max_page must be >= 1");
  dc.check();
  auto tot = totalize(dc);
  FiltrationCalculus calc(dc, tot);
  const int I = dc.max_i();
  const int J = dc.max_j();
  auto empty_table = [&] {
    return std::vector<std::vector<std::size_t>>(static_cast<std::size_t>(I + 1),
                                                 std::vector<std::size_t>(static_cast<std::size_t>(J + 1), 0));
  };
  auto make_page = [&](int r) {
    SpectralSequencePage page;
    page.index = r;
    page.dims = empty_table();
    page.ranks = empty_table();
    for (int i = 0; i <= I; ++i)
      for (int j = 0; j <= J; ++j) {
        page.dims[i][j] = calc.page_dim(r, i, j);
        if (i + r <= I && j - r + 1 >= 0) page.ranks[i][j] = calc.differential_rank(r, i, j);
      }
    return page;
  };

  SpectralSequence ss;
  for (int r = 1; r <= max_page; ++r) ss.pages.push_back(make_page(r));
  ss.infinity = make_page(I + 3);
  ss.infinity.ranks = empty_table();

  for (std::size_t k = 0; k + 1 < ss.pages.size(); ++k) {
    const auto& cur = ss.pages[k];
    const auto& next = ss.pages[k + 1];
    const int r = cur.index;
    for (int i = 0; i <= I; ++i)
      for (int j = 0; j <= J; ++j) {
        std::size_t out = cur.ranks[i][j];
        std::size_t in = 0;
        if (i - r >= 0 && j + r - 1 <= J) in = cur.ranks[i - r][j + r - 1];
        if (cur.dims[i][j] < out + in || next.dims[i][j] != cur.dims[i][j] - out - in) ss.pages_consistent = false;
      }
  }

  ss.total_cohomology = tot.complex.cohomology_dims();
  for (int n = 0; n <= I + J; ++n) {
    std::size_t sum = 0;
    for (int i = 0; i <= I; ++i) {
      int j = n - i;
      if (j >= 0 && j <= J) sum += ss.infinity.dims[i][j];
    }
    if (sum != ss.total_cohomology[n]) ss.converges = false;
  }
  return ss;
}

}  // namespace hhdx
