#include "hhdx/hochschild.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

namespace hhdx {

StructAlgebra::StructAlgebra(PrimeField f, std::size_t dim, std::vector<Residue> constants, DenseVec unit)
    : f_(f), n_(dim), c_(std::move(constants)), unit_(std::move(unit)) {
  if (n_ == 0) throw std::invalid_argument("StructAlgebra: dimension must be positive");
  if (c_.size() != n_ * n_ * n_) throw std::invalid_argument("StructAlgebra: need dim^3 structure constants");
  if (unit_.size() != n_) throw std::invalid_argument("StructAlgebra: unit has the wrong length");
  for (auto& x : c_) x %= f_.p();
  for (auto& x : unit_) x %= f_.p();
  // (e_i e_j) e_k = e_i (e_j e_k)
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j)
      for (std::size_t k = 0; k < n_; ++k)
        for (std::size_t l = 0; l < n_; ++l) {
          Residue lhs = 0, rhs = 0;
          for (std::size_t s = 0; s < n_; ++s) {
            lhs = f_.add(lhs, f_.mul(c(i, j, s), c(s, k, l)));
            rhs = f_.add(rhs, f_.mul(c(j, k, s), c(i, s, l)));
          }
          if (lhs != rhs) throw std::invalid_argument("StructAlgebra: structure constants are not associative");
        }
  for (std::size_t i = 0; i < n_; ++i) {
    DenseVec e(n_, 0);
    e[i] = 1;
    if (multiply(unit_, e) != e || multiply(e, unit_) != e)
      throw std::invalid_argument("StructAlgebra: unit laws fail");
  }
}

DenseVec StructAlgebra::multiply(const DenseVec& a, const DenseVec& b) const {
  DenseVec out(n_, 0);
  for (std::size_t i = 0; i < n_; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < n_; ++j) {
      if (b[j] == 0) continue;
      Residue ab = f_.mul(a[i], b[j]);
      for (std::size_t k = 0; k < n_; ++k)
        if (Residue cc = c(i, j, k)) out[k] = f_.add(out[k], f_.mul(ab, cc));
    }
  }
  return out;
}

FpMatrix StructAlgebra::left_regular(std::size_t i) const {
  FpMatrix m(f_, n_, n_);
  for (std::size_t j = 0; j < n_; ++j)
    for (std::size_t k = 0; k < n_; ++k) m.at(k, j) = c(i, j, k);
  return m;
}

FpMatrix StructAlgebra::right_regular(std::size_t i) const {
  FpMatrix m(f_, n_, n_);
  for (std::size_t j = 0; j < n_; ++j)
    for (std::size_t k = 0; k < n_; ++k) m.at(k, j) = c(j, i, k);
  return m;
}

StructAlgebra StructAlgebra::ground_field(PrimeField f) { return StructAlgebra(f, 1, {1}, {1}); }

StructAlgebra StructAlgebra::matrix_algebra(PrimeField f, std::size_t n) {
  const std::size_t d = n * n;
  std::vector<Residue> c(d * d * d, 0);
  DenseVec unit(d, 0);
  for (std::size_t a = 0; a < n; ++a) {
    unit[a * n + a] = 1;
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t e = 0; e < n; ++e) c[((a * n + b) * d + (b * n + e)) * d + (a * n + e)] = 1;
  }
  return StructAlgebra(f, d, std::move(c), std::move(unit));
}

StructAlgebra StructAlgebra::product_of_fields(PrimeField f, std::size_t m) {
  std::vector<Residue> c(m * m * m, 0);
  for (std::size_t i = 0; i < m; ++i) c[(i * m + i) * m + i] = 1;
  return StructAlgebra(f, m, std::move(c), DenseVec(m, 1));
}

StructAlgebra StructAlgebra::truncated_polynomial(PrimeField f, std::size_t N) {
  std::vector<Residue> c(N * N * N, 0);
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; i + j < N; ++j) c[(i * N + j) * N + i + j] = 1;
  DenseVec unit(N, 0);
  unit[0] = 1;
  return StructAlgebra(f, N, std::move(c), std::move(unit));
}

StructAlgebra StructAlgebra::tensor(const StructAlgebra& a, const StructAlgebra& b) {
  if (!(a.field() == b.field())) throw std::invalid_argument("StructAlgebra::tensor: mismatched fields");
  const PrimeField& f = a.field();
  const std::size_t na = a.dim(), nb = b.dim(), d = na * nb;
  std::vector<Residue> c(d * d * d, 0);
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t i2 = 0; i2 < na; ++i2)
      for (std::size_t k = 0; k < na; ++k) {
        Residue ca = a.c(i, i2, k);
        if (ca == 0) continue;
        for (std::size_t j = 0; j < nb; ++j)
          for (std::size_t j2 = 0; j2 < nb; ++j2)
            for (std::size_t l = 0; l < nb; ++l)
              if (Residue cb = b.c(j, j2, l)) c[((i * nb + j) * d + (i2 * nb + j2)) * d + (k * nb + l)] = f.mul(ca, cb);
      }
  DenseVec unit(d, 0);
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < nb; ++j) unit[i * nb + j] = f.mul(a.unit()[i], b.unit()[j]);
  return StructAlgebra(f, d, std::move(c), std::move(unit));
}

// ---------------------------------------------------------------------------

namespace {

FpMatrix combination(const PrimeField& f, const std::vector<FpMatrix>& ms, const DenseVec& coeffs, std::size_t m) {
  FpMatrix out(f, m, m);
  for (std::size_t i = 0; i < ms.size(); ++i) {
    if (coeffs[i] == 0) continue;
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t c = 0; c < m; ++c) out.at(r, c) = f.add(out.at(r, c), f.mul(coeffs[i], ms[i].at(r, c)));
  }
  return out;
}

DenseVec basis_vector(std::size_t n, std::size_t i) {
  DenseVec e(n, 0);
  e[i] = 1;
  return e;
}

}  // namespace

Bimodule::Bimodule(const StructAlgebra& a, std::size_t dim, std::vector<FpMatrix> left, std::vector<FpMatrix> right,
                   std::optional<StructAlgebra> product)
    : m_(dim), left_(std::move(left)), right_(std::move(right)), product_(std::move(product)) {
  const PrimeField& f = a.field();
  const std::size_t n = a.dim();
  if (left_.size() != n || right_.size() != n) throw std::invalid_argument("Bimodule: one action matrix per basis element");
  for (std::size_t i = 0; i < n; ++i)
    if (left_[i].rows() != m_ || left_[i].cols() != m_ || right_[i].rows() != m_ || right_[i].cols() != m_)
      throw std::invalid_argument("Bimodule: action matrices must be dim x dim");
  const FpMatrix id = FpMatrix::identity(f, m_);
  if (!(combination(f, left_, a.unit(), m_) == id) || !(combination(f, right_, a.unit(), m_) == id))
    throw std::invalid_argument("Bimodule: the unit does not act as the identity");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      DenseVec cij(n);
      for (std::size_t k = 0; k < n; ++k) cij[k] = a.c(i, j, k);
      // e_i (e_j m) = (e_i e_j) m and (m e_i) e_j = m (e_i e_j)
      if (!(left_[i] * left_[j] == combination(f, left_, cij, m_)))
        throw std::invalid_argument("Bimodule: left action is not multiplicative");
      if (!(right_[j] * right_[i] == combination(f, right_, cij, m_)))
        throw std::invalid_argument("Bimodule: right action is not multiplicative");
      if (!(left_[i] * right_[j] == right_[j] * left_[i]))
        throw std::invalid_argument("Bimodule: left and right actions do not commute");
    }
  if (product_) {
    const StructAlgebra& P = *product_;
    if (P.dim() != m_ || !(P.field() == f)) throw std::invalid_argument("Bimodule: product has the wrong dimension");
    // the actions must come from an algebra map A -> M
    for (std::size_t i = 0; i < n; ++i) {
      DenseVec image = left_[i].apply(P.unit());
      if (right_[i].apply(P.unit()) != image)
        throw std::invalid_argument("Bimodule: left and right images of the algebra disagree");
      for (std::size_t k = 0; k < m_; ++k) {
        auto e = basis_vector(m_, k);
        if (left_[i].apply(e) != P.multiply(image, e) || right_[i].apply(e) != P.multiply(e, image))
          throw std::invalid_argument("Bimodule: actions are not multiplication through an algebra map");
      }
    }
  }
}

const StructAlgebra& Bimodule::product() const {
  if (!product_) throw std::invalid_argument("Bimodule: no product declared");
  return *product_;
}

Bimodule Bimodule::regular(const StructAlgebra& a) {
  std::vector<FpMatrix> left, right;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    left.push_back(a.left_regular(i));
    right.push_back(a.right_regular(i));
  }
  return Bimodule(a, a.dim(), std::move(left), std::move(right), a);
}

Bimodule Bimodule::endomorphisms(const StructAlgebra& a) {
  const PrimeField& f = a.field();
  const std::size_t n = a.dim(), m = n * n;
  std::vector<FpMatrix> left, right;
  for (std::size_t i = 0; i < n; ++i) {
    const FpMatrix L = a.left_regular(i);
    FpMatrix l(f, m, m), r(f, m, m);
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t v = 0; v < n; ++v)
        for (std::size_t w = 0; w < n; ++w) {
          // L E_uv = sum_w L[w][u] E_wv ;  E_uv L = sum_w L[v][w] E_uw
          l.at(w * n + v, u * n + v) = L.at(w, u);
          r.at(u * n + w, u * n + v) = L.at(v, w);
        }
    left.push_back(std::move(l));
    right.push_back(std::move(r));
  }
  return Bimodule(a, m, std::move(left), std::move(right), StructAlgebra::matrix_algebra(f, n));
}

// ---------------------------------------------------------------------------

DenseVec HochschildCochain::at(std::size_t tuple_index, std::size_t mdim) const {
  return DenseVec(values.begin() + static_cast<std::ptrdiff_t>(tuple_index * mdim),
                  values.begin() + static_cast<std::ptrdiff_t>((tuple_index + 1) * mdim));
}

namespace {

void check_bar_capacity(const StructAlgebra& a, int max_degree) {
  if (max_degree < 0) throw std::invalid_argument("bar_complex: negative degree");
  if (max_degree > kMaxBarDegree) throw CapacityError("bar_complex: degree above 3");
  if (a.dim() > kMaxBarAlgebraDim) throw CapacityError("bar_complex: algebra dimension above 12");
}

std::size_t tuple_count(std::size_t n, int j) { return static_cast<std::size_t>(ipow(n, static_cast<unsigned>(j))); }

// Rows of d^j belonging to one output tuple (a_0, ..., a_j).
void bar_rows(const StructAlgebra& a, const Bimodule& mod, int j, std::size_t out, std::vector<SparseMatrix::Triplet>& t) {
  const PrimeField& f = a.field();
  const std::size_t n = a.dim(), m = mod.dim();
  std::vector<std::size_t> digit(static_cast<std::size_t>(j) + 1);
  std::size_t rest = out;
  for (int k = j; k >= 0; --k) {
    digit[static_cast<std::size_t>(k)] = rest % n;
    rest /= n;
  }
  const std::size_t inner = tuple_count(n, j);
  auto row = [&](std::size_t u) { return static_cast<std::uint32_t>(out * m + u); };
  auto col = [&](std::size_t tuple, std::size_t v) { return static_cast<std::uint32_t>(tuple * m + v); };

  // a_0 phi(a_1 .. a_j)
  const std::size_t tail = out % inner;
  const FpMatrix& L = mod.left(digit[0]);
  for (std::size_t u = 0; u < m; ++u)
    for (std::size_t v = 0; v < m; ++v)
      if (Residue x = L.at(u, v)) t.push_back({row(u), col(tail, v), x});

  // sum_i (-1)^i phi(.. a_{i-1} a_i ..)
  for (int i = 1; i <= j; ++i) {
    const Residue sgn = f.sign(i);
    const std::size_t l = digit[static_cast<std::size_t>(i) - 1], r = digit[static_cast<std::size_t>(i)];
    for (std::size_t k = 0; k < n; ++k) {
      Residue cc = a.c(l, r, k);
      if (cc == 0) continue;
      std::size_t tuple = 0;
      for (int s = 0; s <= j; ++s) {
        if (s == i) continue;
        tuple = tuple * n + ((s == i - 1) ? k : digit[static_cast<std::size_t>(s)]);
      }
      for (std::size_t u = 0; u < m; ++u) t.push_back({row(u), col(tuple, u), f.mul(sgn, cc)});
    }
  }

  // (-1)^{j+1} phi(a_0 .. a_{j-1}) a_j
  const std::size_t head = out / n;
  const FpMatrix& R = mod.right(digit[static_cast<std::size_t>(j)]);
  const Residue sgn = f.sign(j + 1);
  for (std::size_t u = 0; u < m; ++u)
    for (std::size_t v = 0; v < m; ++v)
      if (Residue x = R.at(u, v)) t.push_back({row(u), col(head, v), f.mul(sgn, x)});
}

SparseMatrix bar_matrix(const StructAlgebra& a, const Bimodule& mod, int j, bool parallel) {
  const std::size_t n = a.dim(), m = mod.dim();
  const std::size_t outs = tuple_count(n, j + 1);
  std::vector<std::vector<SparseMatrix::Triplet>> chunks(outs);
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (std::size_t out = 0; out < outs; ++out) bar_rows(a, mod, j, out, chunks[out]);
  } else {
    for (std::size_t out = 0; out < outs; ++out) bar_rows(a, mod, j, out, chunks[out]);
  }
  std::vector<SparseMatrix::Triplet> all;
  for (auto& c : chunks) all.insert(all.end(), c.begin(), c.end());
  return SparseMatrix::from_triplets(a.field(), outs * m, tuple_count(n, j) * m, std::move(all));
}

CochainComplex build_bar(const StructAlgebra& a, const Bimodule& mod, int max_degree, bool parallel) {
  check_bar_capacity(a, max_degree);
  std::vector<std::size_t> dims;
  std::vector<SparseMatrix> ds;
  for (int j = 0; j <= max_degree; ++j) dims.push_back(tuple_count(a.dim(), j) * mod.dim());
  for (int j = 0; j < max_degree; ++j) ds.push_back(bar_matrix(a, mod, j, parallel));
  return CochainComplex(a.field(), 0, std::move(dims), std::move(ds));
}

}  // namespace

CochainComplex bar_complex(const StructAlgebra& a, const Bimodule& m, int max_degree) {
  return build_bar(a, m, max_degree, true);
}

CochainComplex serial::bar_complex(const StructAlgebra& a, const Bimodule& m, int max_degree) {
  return build_bar(a, m, max_degree, false);
}

SparseMatrix bar_differential_matrix(const StructAlgebra& a, const Bimodule& m, int j, bool parallel) {
  check_bar_capacity(a, j + 1);
  return bar_matrix(a, m, j, parallel);
}

Bimodule pullback(const Bimodule& m, const StructAlgebra& b, const StructAlgebra& a, const FpMatrix& rho) {
  if (rho.rows() != b.dim() || rho.cols() != a.dim()) throw std::invalid_argument("pullback: map has the wrong shape");
  const PrimeField& f = a.field();
  std::vector<FpMatrix> left, right;
  std::vector<FpMatrix> bl, br;
  for (std::size_t k = 0; k < b.dim(); ++k) {
    bl.push_back(m.left(k));
    br.push_back(m.right(k));
  }
  for (std::size_t i = 0; i < a.dim(); ++i) {
    DenseVec col(b.dim());
    for (std::size_t k = 0; k < b.dim(); ++k) col[k] = rho.at(k, i);
    left.push_back(combination(f, bl, col, m.dim()));
    right.push_back(combination(f, br, col, m.dim()));
  }
  std::optional<StructAlgebra> product;
  if (m.has_product()) product = m.product();
  return Bimodule(a, m.dim(), std::move(left), std::move(right), std::move(product));
}

HochschildCochain bar_differential(const StructAlgebra& a, const Bimodule& m, const HochschildCochain& phi) {
  check_bar_capacity(a, phi.degree + 1);
  if (phi.values.size() != tuple_count(a.dim(), phi.degree) * m.dim())
    throw std::invalid_argument("bar_differential: cochain has the wrong size");
  auto d = bar_matrix(a, m, phi.degree, false);
  return {phi.degree + 1, to_dense(d.apply(to_sparse(phi.values)), d.rows())};
}

HochschildCochain cup_product(const StructAlgebra& a, const Bimodule& m, const HochschildCochain& alpha,
                              const HochschildCochain& beta) {
  const StructAlgebra& P = m.product();
  const std::size_t n = a.dim(), md = m.dim();
  const std::size_t na = tuple_count(n, alpha.degree), nb = tuple_count(n, beta.degree);
  if (alpha.values.size() != na * md || beta.values.size() != nb * md)
    throw std::invalid_argument("cup_product: cochain has the wrong size");
  if (alpha.degree + beta.degree > kMaxBarDegree) throw CapacityError("cup_product: degree above 3");
  HochschildCochain out{alpha.degree + beta.degree, DenseVec(na * nb * md, 0)};
  for (std::size_t s = 0; s < na; ++s) {
    DenseVec x = alpha.at(s, md);
    for (std::size_t t = 0; t < nb; ++t) {
      DenseVec y = P.multiply(x, beta.at(t, md));
      std::copy(y.begin(), y.end(), out.values.begin() + static_cast<std::ptrdiff_t>((s * nb + t) * md));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<Exponents> chart_exponents(std::size_t n, int D, const std::vector<bool>& inverted) {
  std::vector<Exponents> out;
  Exponents e(n);
  std::vector<int> lo(n);
  for (std::size_t i = 0; i < n; ++i) lo[i] = (i < inverted.size() && inverted[i]) ? -D : 0;
  for (std::size_t i = 0; i < n; ++i) e[i] = lo[i];
  while (true) {
    int size = 0;
    for (int x : e) size += std::abs(x);
    if (size <= D) out.push_back(e);
    std::size_t i = n;
    while (i > 0) {
      --i;
      if (e[i] < D) {
        ++e[i];
        break;
      }
      e[i] = lo[i];
      if (i == 0) return out;
    }
  }
}

std::vector<DPIndex> dp_box(std::size_t n, int Q) {
  std::vector<DPIndex> out;
  DPIndex b(n, 0);
  while (true) {
    out.push_back(b);
    std::size_t i = n;
    while (i > 0) {
      --i;
      if (b[i] < Q) {
        ++b[i];
        break;
      }
      b[i] = 0;
      if (i == 0) return out;
    }
  }
}

}  // namespace

KoszulComplex koszul_commutator_complex(PrimeField f, std::size_t nvars, int degree_bound, int dp_bound,
                                        const std::vector<bool>& inverted) {
  if (nvars == 0 || nvars > 4) throw std::invalid_argument("koszul_commutator_complex: 1..4 coordinates supported");
  if (degree_bound < 0 || dp_bound < 0) throw std::invalid_argument("koszul_commutator_complex: negative bound");
  const auto as = chart_exponents(nvars, degree_bound, inverted);
  const auto bs = dp_box(nvars, dp_bound);
  const std::size_t msize = as.size() * bs.size();
  if (msize * (1u << nvars) > 4000000) throw CapacityError("koszul_commutator_complex: module too large");
  std::map<DPKey, std::size_t> index;
  for (std::size_t i = 0; i < as.size(); ++i)
    for (std::size_t j = 0; j < bs.size(); ++j) index.emplace(DPKey{as[i], bs[j]}, i * bs.size() + j);

  // subsets grouped by size, ascending masks within a degree
  std::vector<std::vector<unsigned>> subsets(nvars + 1);
  for (unsigned s = 0; s < (1u << nvars); ++s) subsets[static_cast<std::size_t>(std::popcount(s))].push_back(s);

  KoszulComplex out{CochainComplex(f, 0, {0}, {}), {}, {}, dp_bound, dp_bound - static_cast<int>(nvars)};
  std::vector<std::size_t> dims;
  std::vector<std::map<unsigned, std::size_t>> block;
  for (std::size_t k = 0; k <= nvars; ++k) {
    std::map<unsigned, std::size_t> offs;
    std::vector<KoszulBasisElement> basis;
    std::vector<int> weight;
    for (unsigned s : subsets[k]) {
      offs[s] = basis.size();
      for (auto& a : as)
        for (auto& b : bs) {
          basis.push_back({s, a, b});
          weight.push_back(std::accumulate(b.begin(), b.end(), 0) + static_cast<int>(k));
        }
    }
    dims.push_back(basis.size());
    block.push_back(std::move(offs));
    out.basis.push_back(std::move(basis));
    out.weight.push_back(std::move(weight));
  }

  std::vector<DPDOperator> coords;
  for (std::size_t i = 0; i < nvars; ++i) coords.push_back(DPDOperator::coordinate(f, nvars, i));
  std::vector<SparseMatrix> ds;
  for (std::size_t k = 0; k < nvars; ++k) {
    std::vector<SparseMatrix::Triplet> t;
    const auto& src = out.basis[k];
    for (std::size_t col = 0; col < src.size(); ++col) {
      const auto& el = src[col];
      const auto op = DPDOperator::monomial(f, el.a, el.b);
      for (std::size_t i = 0; i < nvars; ++i) {
        if (el.subset & (1u << i)) continue;
        const int below = std::popcount(el.subset & ((1u << i) - 1));
        const Residue sgn = f.sign(below);
        const unsigned target = el.subset | (1u << i);
        const std::size_t base = block[k + 1].at(target);
        const auto bracket = dpdo_commutator(coords[i], op);
        for (auto& [key, c] : bracket.terms()) {
          auto it = index.find(key);
          if (it == index.end()) throw std::logic_error("koszul_commutator_complex: commutator left the module");
          t.push_back({static_cast<std::uint32_t>(base + it->second), static_cast<std::uint32_t>(col), f.mul(sgn, c)});
        }
      }
    }
    ds.push_back(SparseMatrix::from_triplets(f, dims[k + 1], dims[k], std::move(t)));
  }
  out.complex = CochainComplex(f, 0, dims, std::move(ds));
  return out;
}

bool ChartModel::is_laurent() const {
  return std::any_of(inverted.begin(), inverted.end(), [](bool b) { return b; });
}

PairCohomology hh_of_pair(PrimeField f, const ChartModel& u, const ChartModel& v, unsigned r, int degree_bound,
                          int dp_bound) {
  const std::size_t n = u.nvars;
  if (v.nvars != n) throw std::invalid_argument("hh_of_pair: charts have different dimensions");
  for (std::size_t i = 0; i < n; ++i) {
    bool iu = i < u.inverted.size() && u.inverted[i];
    bool iv = i < v.inverted.size() && v.inverted[i];
    if (iu && !iv) throw std::invalid_argument("hh_of_pair: V must be a localization of U");
  }
  const int stride = static_cast<int>(ipow(f.p(), r));
  const int D = degree_bound / stride, Q = dp_bound / stride;
  if (Q - static_cast<int>(n) < 0)
    throw TruncationError("hh_of_pair: divided-power bound leaves an empty certified window");

  PairCohomology out;
  out.depth = r;
  out.certified_weight = Q;

  // e x^{p^r a} d^(p^r b) e must be the twisted basis element y^a d_y^(b)
  out.morita_certified = true;
  const auto as = chart_exponents(n, D, v.inverted);
  const auto bs = dp_box(n, Q);
  for (auto& a : as)
    for (auto& b : bs) {
      Exponents A = a;
      DPIndex B = b;
      for (auto& x : A) x *= stride;
      for (auto& x : B) x *= stride;
      auto c = morita_compress(DPDOperator::monomial(f, A, B), r, degree_bound);
      if (!c.certified || !(c.op == DPDOperator::monomial(f, a, b))) out.morita_certified = false;
    }

  auto kc = koszul_commutator_complex(f, n, D, Q, v.inverted);
  auto graded = graded_cohomology_dims(kc.complex, kc.weight);
  out.dims.assign(n + 1, 0);
  for (auto& [w, dims] : graded) {
    if (w > Q) continue;
    for (std::size_t k = 0; k <= n; ++k) out.dims[k] += dims[k];
  }

  // HH^0 is spanned by the operators with b = 0
  auto piece = graded_piece(kc.complex, kc.weight, 0);
  auto h0 = piece.cohomology(0);
  EchelonBasis span(f, piece.dim(0));
  for (auto& rep : h0.representatives) span.insert(rep);
  std::size_t pos = 0;
  for (auto& el : kc.basis[0]) {
    if (std::accumulate(el.b.begin(), el.b.end(), 0) != 0) continue;
    if (!span.contains({{static_cast<std::uint32_t>(pos), 1}}))
      throw std::logic_error("hh_of_pair: a function failed to commute with the coordinates");
    Exponents x = el.a;
    for (auto& e : x) e *= stride;
    out.hh0_basis.push_back(MultiPoly::monomial(f, x));
    ++pos;
  }
  if (out.hh0_basis.size() != h0.dim) throw std::logic_error("hh_of_pair: HH^0 is larger than the functions");
  return out;
}

// ---------------------------------------------------------------------------

namespace {

FpMatrix matrix_from_json(const PrimeField& f, const nlohmann::json& j, std::size_t m) {
  FpMatrix out(f, m, m);
  if (j.size() != m) throw std::invalid_argument("load_structure_constants: action matrix has the wrong size");
  for (std::size_t r = 0; r < m; ++r) {
    if (j[r].size() != m) throw std::invalid_argument("load_structure_constants: action matrix has the wrong size");
    for (std::size_t c = 0; c < m; ++c) out.at(r, c) = f.reduce(j[r][c].get<std::int64_t>());
  }
  return out;
}

std::vector<Residue> constants_from_json(const PrimeField& f, const nlohmann::json& j, std::size_t n) {
  std::vector<Residue> c(n * n * n);
  if (j.size() != n) throw std::invalid_argument("load_structure_constants: c must be dim x dim x dim");
  for (std::size_t a = 0; a < n; ++a) {
    if (j[a].size() != n) throw std::invalid_argument("load_structure_constants: c must be dim x dim x dim");
    for (std::size_t b = 0; b < n; ++b) {
      if (j[a][b].size() != n) throw std::invalid_argument("load_structure_constants: c must be dim x dim x dim");
      for (std::size_t k = 0; k < n; ++k) c[(a * n + b) * n + k] = f.reduce(j[a][b][k].get<std::int64_t>());
    }
  }
  return c;
}

DenseVec vector_from_json(const PrimeField& f, const nlohmann::json& j, std::size_t n) {
  if (j.size() != n) throw std::invalid_argument("load_structure_constants: vector has the wrong length");
  DenseVec v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = f.reduce(j[i].get<std::int64_t>());
  return v;
}

}  // namespace

LoadedPair load_structure_constants(const nlohmann::json& j) {
  PrimeField f(j.at("p").get<std::uint32_t>());
  const auto n = j.at("dim").get<std::size_t>();
  StructAlgebra a(f, n, constants_from_json(f, j.at("c"), n), vector_from_json(f, j.at("unit"), n));
  if (!j.contains("bimodule")) return {a, Bimodule::regular(a)};
  const auto& bj = j.at("bimodule");
  const auto m = bj.at("dim").get<std::size_t>();
  std::vector<FpMatrix> left, right;
  for (std::size_t i = 0; i < n; ++i) {
    left.push_back(matrix_from_json(f, bj.at("left").at(i), m));
    right.push_back(matrix_from_json(f, bj.at("right").at(i), m));
  }
  std::optional<StructAlgebra> product;
  if (bj.contains("product")) {
    const auto& pj = bj.at("product");
    product.emplace(f, m, constants_from_json(f, pj.at("c"), m), vector_from_json(f, pj.at("unit"), m));
  }
  return {a, Bimodule(a, m, std::move(left), std::move(right), std::move(product))};
}

}  // namespace hhdx
