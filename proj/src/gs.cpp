#include "hhdx/gs.hpp"

#include <algorithm>
#include <functional>

namespace hhdx {

Poset::Poset(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& less, std::vector<std::string> names)
    : n_(n), leq_(n * n, false), names_(std::move(names)) {
  if (n == 0) throw std::invalid_argument("Poset: empty poset");
  if (n > kMaxPosetSize) throw CapacityError("Poset: more than 8 elements");
  for (std::size_t a = 0; a < n; ++a) leq_[a * n + a] = true;
  for (auto [a, b] : less) {
    if (a >= n || b >= n) throw std::invalid_argument("Poset: relation refers to a missing element");
    leq_[a * n + b] = true;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        if (leq_[a * n + k] && leq_[k * n + b]) leq_[a * n + b] = true;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (leq_[a * n + b] && leq_[b * n + a]) throw std::invalid_argument("Poset: relations contain a cycle");
  if (names_.empty())
    for (std::size_t a = 0; a < n; ++a) names_.push_back("U" + std::to_string(a));
  if (names_.size() != n) throw std::invalid_argument("Poset: one name per element");
}

Poset Poset::point() { return Poset(1, {}); }

Poset Poset::chain(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> rel;
  for (std::size_t a = 0; a + 1 < n; ++a) rel.push_back({a, a + 1});
  return Poset(n, rel);
}

Poset Poset::discrete(std::size_t n) { return Poset(n, {}); }

std::optional<std::size_t> Poset::meet(std::size_t a, std::size_t b) const {
  std::vector<std::size_t> lower;
  for (std::size_t c = 0; c < n_; ++c)
    if (leq(c, a) && leq(c, b)) lower.push_back(c);
  for (std::size_t g : lower)
    if (std::all_of(lower.begin(), lower.end(), [&](std::size_t l) { return leq(l, g); })) return g;
  return std::nullopt;
}

bool Poset::closed_under_intersection() const {
  for (std::size_t a = 0; a < n_; ++a)
    for (std::size_t b = a + 1; b < n_; ++b) {
      bool common = false;
      for (std::size_t c = 0; c < n_; ++c) common = common || (leq(c, a) && leq(c, b));
      if (common && !meet(a, b)) return false;
    }
  return true;
}

std::vector<std::vector<Simplex>> nerve(const Poset& j, int max_i) {
  if (max_i < 0) throw std::invalid_argument("nerve: negative degree");
  std::vector<std::vector<Simplex>> out(static_cast<std::size_t>(max_i) + 1);
  std::function<void(Simplex&)> extend = [&](Simplex& s) {
    out[s.size() - 1].push_back(s);
    if (static_cast<int>(s.size()) > max_i) return;
    for (std::size_t v = 0; v < j.size(); ++v)
      if (j.less(s.back(), v)) {
        s.push_back(v);
        extend(s);
        s.pop_back();
      }
  };
  for (std::size_t v = 0; v < j.size(); ++v) {
    Simplex s{v};
    extend(s);
  }
  for (auto& level : out) std::sort(level.begin(), level.end());
  while (out.size() > 1 && out.back().empty()) out.pop_back();
  return out;
}

// ---------------------------------------------------------------------------

AlgebraPresheaf::AlgebraPresheaf(Poset j, std::vector<StructAlgebra> algebras)
    : poset_(std::move(j)), algebras_(std::move(algebras)) {
  if (algebras_.size() != poset_.size()) throw std::invalid_argument("AlgebraPresheaf: one algebra per element");
}

void AlgebraPresheaf::set_restriction(std::size_t u, std::size_t v, FpMatrix m) {
  if (!poset_.less(u, v)) throw std::invalid_argument("AlgebraPresheaf: restriction needs u < v");
  if (m.rows() != algebras_[u].dim() || m.cols() != algebras_[v].dim())
    throw std::invalid_argument("AlgebraPresheaf: restriction has the wrong shape");
  res_.insert_or_assign({u, v}, std::move(m));
}

FpMatrix AlgebraPresheaf::restriction(std::size_t u, std::size_t v) const {
  if (u == v) return FpMatrix::identity(algebras_[u].field(), algebras_[u].dim());
  auto it = res_.find({u, v});
  if (it == res_.end()) throw std::invalid_argument("AlgebraPresheaf: missing restriction");
  return it->second;
}

void AlgebraPresheaf::check() const {
  for (std::size_t u = 0; u < poset_.size(); ++u)
    for (std::size_t v = 0; v < poset_.size(); ++v) {
      if (!poset_.less(u, v)) continue;
      const FpMatrix r = restriction(u, v);
      const StructAlgebra &A = algebras_[v], &B = algebras_[u];
      if (r.apply(A.unit()) != B.unit()) throw std::invalid_argument("AlgebraPresheaf: restriction is not unital");
      for (std::size_t i = 0; i < A.dim(); ++i)
        for (std::size_t k = 0; k < A.dim(); ++k) {
          DenseVec ei(A.dim(), 0), ek(A.dim(), 0);
          ei[i] = 1;
          ek[k] = 1;
          if (r.apply(A.multiply(ei, ek)) != B.multiply(r.apply(ei), r.apply(ek)))
            throw std::invalid_argument("AlgebraPresheaf: restriction is not multiplicative");
        }
      for (std::size_t w = 0; w < poset_.size(); ++w)
        if (poset_.less(v, w) && !(r * restriction(v, w) == restriction(u, w)))
          throw std::invalid_argument("AlgebraPresheaf: restrictions do not compose");
    }
}

AlgebraPresheaf AlgebraPresheaf::constant(Poset j, const StructAlgebra& a) {
  const std::size_t n = j.size();
  AlgebraPresheaf out(j, std::vector<StructAlgebra>(n, a));
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v)
      if (j.less(u, v)) out.set_restriction(u, v, FpMatrix::identity(a.field(), a.dim()));
  return out;
}

BimodulePresheaf::BimodulePresheaf(const AlgebraPresheaf& a, std::vector<Bimodule> modules) : modules_(std::move(modules)) {
  if (modules_.size() != a.poset().size()) throw std::invalid_argument("BimodulePresheaf: one bimodule per element");
}

void BimodulePresheaf::set_restriction(std::size_t u, std::size_t v, FpMatrix m) {
  if (m.rows() != modules_[u].dim() || m.cols() != modules_[v].dim())
    throw std::invalid_argument("BimodulePresheaf: restriction has the wrong shape");
  res_.insert_or_assign({u, v}, std::move(m));
}

FpMatrix BimodulePresheaf::restriction(std::size_t u, std::size_t v) const {
  if (u == v) return FpMatrix::identity(modules_[u].left(0).field(), modules_[u].dim());
  auto it = res_.find({u, v});
  if (it == res_.end()) throw std::invalid_argument("BimodulePresheaf: missing restriction");
  return it->second;
}

void BimodulePresheaf::check(const AlgebraPresheaf& a) const {
  const Poset& j = a.poset();
  for (std::size_t u = 0; u < j.size(); ++u)
    for (std::size_t v = 0; v < j.size(); ++v) {
      if (!j.less(u, v)) continue;
      const FpMatrix R = restriction(u, v), rho = a.restriction(u, v);
      const PrimeField& f = rho.field();
      for (std::size_t i = 0; i < a.at(v).dim(); ++i) {
        // R(e_i m) = rho(e_i) R(m), and on the right
        FpMatrix l(f, modules_[u].dim(), modules_[u].dim()), r(f, modules_[u].dim(), modules_[u].dim());
        for (std::size_t k = 0; k < a.at(u).dim(); ++k) {
          Residue c = rho.at(k, i);
          if (!c) continue;
          for (std::size_t x = 0; x < l.rows(); ++x)
            for (std::size_t y = 0; y < l.cols(); ++y) {
              l.at(x, y) = f.add(l.at(x, y), f.mul(c, modules_[u].left(k).at(x, y)));
              r.at(x, y) = f.add(r.at(x, y), f.mul(c, modules_[u].right(k).at(x, y)));
            }
        }
        if (!(R * modules_[v].left(i) == l * R) || !(R * modules_[v].right(i) == r * R))
          throw std::invalid_argument("BimodulePresheaf: restriction is not a bimodule map");
      }
      for (std::size_t w = 0; w < j.size(); ++w)
        if (j.less(v, w) && !(R * restriction(v, w) == restriction(u, w)))
          throw std::invalid_argument("BimodulePresheaf: restrictions do not compose");
    }
}

BimodulePresheaf BimodulePresheaf::regular(const AlgebraPresheaf& a) {
  std::vector<Bimodule> mods;
  const Poset& j = a.poset();
  for (std::size_t u = 0; u < j.size(); ++u) mods.push_back(Bimodule::regular(a.at(u)));
  BimodulePresheaf out(a, std::move(mods));
  for (std::size_t u = 0; u < j.size(); ++u)
    for (std::size_t v = 0; v < j.size(); ++v)
      if (j.less(u, v)) out.set_restriction(u, v, a.restriction(u, v));
  return out;
}

// ---------------------------------------------------------------------------

namespace {

std::size_t tuples(std::size_t n, int j) { return static_cast<std::size_t>(ipow(n, static_cast<unsigned>(j))); }

// Matrix of phi |-> R o phi o rho^{(x) j} from C^j(A_src, M_src) to
// C^j(A_dst, M_dst), where rho : A_dst -> A_src and R : M_src -> M_dst.
// Entries are appended with the given offsets and sign.
void append_transform(const PrimeField& f, int j, const FpMatrix& rho, const FpMatrix& R, std::size_t row0,
                      std::size_t col0, Residue sign, std::vector<SparseMatrix::Triplet>& out) {
  const std::size_t na = rho.rows(), nb = rho.cols();
  const std::size_t msrc = R.cols(), mdst = R.rows();
  const std::size_t tb = tuples(nb, j), ta = tuples(na, j);
  std::vector<std::size_t> bd(static_cast<std::size_t>(j)), ad(static_cast<std::size_t>(j));
  for (std::size_t b = 0; b < tb; ++b) {
    std::size_t rest = b;
    for (int k = j - 1; k >= 0; --k) {
      bd[static_cast<std::size_t>(k)] = rest % nb;
      rest /= nb;
    }
    for (std::size_t a = 0; a < ta; ++a) {
      rest = a;
      Residue w = sign;
      for (int k = j - 1; k >= 0 && w; --k) {
        ad[static_cast<std::size_t>(k)] = rest % na;
        rest /= na;
        w = f.mul(w, rho.at(ad[static_cast<std::size_t>(k)], bd[static_cast<std::size_t>(k)]));
      }
      if (!w) continue;
      for (std::size_t u = 0; u < mdst; ++u)
        for (std::size_t v = 0; v < msrc; ++v)
          if (Residue x = R.at(u, v))
            out.push_back({static_cast<std::uint32_t>(row0 + b * mdst + u), static_cast<std::uint32_t>(col0 + a * msrc + v),
                           f.mul(w, x)});
    }
  }
}

DenseVec apply_transform(const PrimeField& f, int j, const FpMatrix& rho, const FpMatrix& R, const DenseVec& x) {
  std::vector<SparseMatrix::Triplet> t;
  append_transform(f, j, rho, R, 0, 0, 1, t);
  const std::size_t rows = tuples(rho.cols(), j) * R.rows();
  auto m = SparseMatrix::from_triplets(f, rows, x.size(), std::move(t));
  return to_dense(m.apply(to_sparse(x)), rows);
}

std::size_t simplex_index(const std::vector<Simplex>& level, const Simplex& s) {
  auto it = std::lower_bound(level.begin(), level.end(), s);
  if (it == level.end() || *it != s) throw std::logic_error("simplex missing from the nerve");
  return static_cast<std::size_t>(it - level.begin());
}

Bimodule local_coefficients(const AlgebraPresheaf& a, const BimodulePresheaf& m, std::size_t lo, std::size_t hi) {
  if (lo == hi) return m.at(lo);
  return pullback(m.at(lo), a.at(lo), a.at(hi), a.restriction(lo, hi));
}

}  // namespace

GSComplex build_gs_complex(const AlgebraPresheaf& a, const BimodulePresheaf& m, int max_i, int max_j) {
  if (max_i > kMaxNerveDegree) throw CapacityError("build_gs_complex: nerve degree above 4");
  if (max_j > kMaxGSHochschildDegree) throw CapacityError("build_gs_complex: Hochschild degree above 2");
  if (max_i < 0 || max_j < 0) throw std::invalid_argument("build_gs_complex: negative degree");
  a.check();
  m.check(a);
  const PrimeField& f = a.at(0).field();
  auto simplices = nerve(a.poset(), max_i);
  simplices.resize(static_cast<std::size_t>(max_i) + 1);
  const std::size_t I = static_cast<std::size_t>(max_i), J = static_cast<std::size_t>(max_j);

  std::vector<std::vector<std::size_t>> dims(I + 1, std::vector<std::size_t>(J + 1, 0));
  std::vector<std::vector<std::vector<std::size_t>>> offset(I + 1, std::vector<std::vector<std::size_t>>(J + 1));
  for (std::size_t i = 0; i <= I; ++i)
    for (std::size_t j = 0; j <= J; ++j)
      for (auto& s : simplices[i]) {
        offset[i][j].push_back(dims[i][j]);
        dims[i][j] += tuples(a.at(s.back()).dim(), static_cast<int>(j)) * m.at(s.front()).dim();
      }

  GSComplex out{std::make_shared<AlgebraPresheaf>(a), std::make_shared<BimodulePresheaf>(m), simplices, offset,
                DoubleComplex(f, dims)};

  // vertical: block diagonal Hochschild differentials
  for (std::size_t i = 0; i <= I; ++i) {
    std::vector<std::vector<SparseMatrix::Triplet>> blocks(J);
    for (std::size_t s = 0; s < simplices[i].size(); ++s) {
      const auto& sim = simplices[i][s];
      const Bimodule local = local_coefficients(a, m, sim.front(), sim.back());
      for (std::size_t j = 0; j < J; ++j) {
        auto d = bar_differential_matrix(a.at(sim.back()), local, static_cast<int>(j));
        for (std::size_t r = 0; r < d.rows(); ++r)
          for (auto& [c, v] : d.row(r))
            blocks[j].push_back({static_cast<std::uint32_t>(offset[i][j + 1][s] + r),
                                 static_cast<std::uint32_t>(offset[i][j][s] + c), v});
      }
    }
    for (std::size_t j = 0; j < J; ++j)
      out.complex.set_vertical(static_cast<int>(i), static_cast<int>(j),
                               SparseMatrix::from_triplets(f, dims[i][j + 1], dims[i][j], std::move(blocks[j])));
  }

  // horizontal: alternating face sums
  for (std::size_t i = 0; i < I; ++i)
    for (std::size_t j = 0; j <= J; ++j) {
      std::vector<SparseMatrix::Triplet> t;
      for (std::size_t s = 0; s < simplices[i + 1].size(); ++s) {
        const auto& top = simplices[i + 1][s];
        for (std::size_t k = 0; k <= i + 1; ++k) {
          Simplex face = top;
          face.erase(face.begin() + static_cast<std::ptrdiff_t>(k));
          const std::size_t fs = simplex_index(simplices[i], face);
          const Residue sign = f.sign(static_cast<std::int64_t>(k));
          FpMatrix rho = FpMatrix::identity(f, a.at(top.back()).dim());
          FpMatrix R = FpMatrix::identity(f, m.at(top.front()).dim());
          if (k == 0) R = m.restriction(top[0], top[1]);
          if (k == i + 1) rho = a.restriction(top[i], top[i + 1]);
          append_transform(f, static_cast<int>(j), rho, R, offset[i + 1][j][s], offset[i][j][fs], sign, t);
        }
      }
      out.complex.set_horizontal(static_cast<int>(i), static_cast<int>(j),
                                 SparseMatrix::from_triplets(f, dims[i + 1][j], dims[i][j], std::move(t)));
    }
  out.complex.check();
  return out;
}

HochschildCochain gs_component(const GSComplex& c, const GSCochain& x, std::size_t s) {
  const auto& sim = c.simplices.at(static_cast<std::size_t>(x.i)).at(s);
  const std::size_t len = tuples(c.algebra->at(sim.back()).dim(), x.j) * c.bimodule->at(sim.front()).dim();
  const std::size_t off = c.offset[static_cast<std::size_t>(x.i)][static_cast<std::size_t>(x.j)][s];
  return {x.j, DenseVec(x.values.begin() + static_cast<std::ptrdiff_t>(off),
                        x.values.begin() + static_cast<std::ptrdiff_t>(off + len))};
}

GSCochain gs_cup(const GSComplex& c, const GSCochain& alpha, const GSCochain& beta) {
  const int I = c.complex.max_i(), J = c.complex.max_j();
  const int i = alpha.i + beta.i, j = alpha.j + beta.j;
  if (i > I || j > J) throw std::invalid_argument("gs_cup: product bidegree outside the built complex");
  const AlgebraPresheaf& A = *c.algebra;
  const BimodulePresheaf& M = *c.bimodule;
  for (std::size_t u = 0; u < A.poset().size(); ++u)
    if (!M.at(u).has_product()) throw std::invalid_argument("gs_cup: coefficients carry no product");
  const PrimeField& f = A.at(0).field();
  GSCochain out{i, j, DenseVec(c.complex.dim(i, j), 0)};
  const Residue sign = f.sign(static_cast<std::int64_t>(beta.i) * alpha.j);
  const auto& level = c.simplices[static_cast<std::size_t>(i)];
  for (std::size_t s = 0; s < level.size(); ++s) {
    const auto& sigma = level[s];
    const std::size_t l = static_cast<std::size_t>(alpha.i);
    Simplex tau(sigma.begin(), sigma.begin() + static_cast<std::ptrdiff_t>(l) + 1);
    Simplex nu(sigma.begin() + static_cast<std::ptrdiff_t>(l), sigma.end());
    auto a_tau = gs_component(c, alpha, simplex_index(c.simplices[l], tau));
    auto b_nu = gs_component(c, beta, simplex_index(c.simplices[static_cast<std::size_t>(beta.i)], nu));
    const std::size_t lo = sigma.front(), mid = sigma[l], hi = sigma.back();
    // alpha^tau o phi_A : precompose with A(hi) -> A(mid)
    HochschildCochain a2{alpha.j, apply_transform(f, alpha.j, A.restriction(mid, hi),
                                                  FpMatrix::identity(f, M.at(lo).dim()), a_tau.values)};
    // phi_M o beta^nu : postcompose with M(mid) -> M(lo)
    HochschildCochain b2{beta.j, apply_transform(f, beta.j, FpMatrix::identity(f, A.at(hi).dim()),
                                                 M.restriction(lo, mid), b_nu.values)};
    const Bimodule local = local_coefficients(A, M, lo, hi);
    auto prod = cup_product(A.at(hi), local, a2, b2);
    const std::size_t off = c.offset[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)][s];
    for (std::size_t k = 0; k < prod.values.size(); ++k) out.values[off + k] = f.mul(sign, prod.values[k]);
  }
  return out;
}

std::vector<GSCochain> gs_total_differential(const GSComplex& c, const GSCochain& x) {
  const PrimeField& f = c.complex.field();
  std::vector<GSCochain> out;
  if (x.i < c.complex.max_i())
    out.push_back({x.i + 1, x.j,
                   to_dense(c.complex.horizontal(x.i, x.j).apply(to_sparse(x.values)), c.complex.dim(x.i + 1, x.j))});
  if (x.j < c.complex.max_j()) {
    auto v = to_dense(c.complex.vertical(x.i, x.j).apply(to_sparse(x.values)), c.complex.dim(x.i, x.j + 1));
    for (auto& e : v) e = f.mul(f.sign(x.i), e);
    out.push_back({x.i, x.j + 1, std::move(v)});
  }
  return out;
}

bool gs_leibniz_holds(const GSComplex& c, const GSCochain& a, const GSCochain& b) {
  const PrimeField& f = c.complex.field();
  const int I = c.complex.max_i(), J = c.complex.max_j();
  std::map<std::pair<int, int>, DenseVec> acc;
  auto add = [&](const GSCochain& x, Residue scale) {
    auto& slot = acc[{x.i, x.j}];
    if (slot.empty()) slot.assign(x.values.size(), 0);
    for (std::size_t k = 0; k < x.values.size(); ++k) slot[k] = f.add(slot[k], f.mul(scale, x.values[k]));
  };
  auto cup_add = [&](const GSCochain& x, const GSCochain& y, Residue scale) {
    if (x.i + y.i > I || x.j + y.j > J) return;
    add(gs_cup(c, x, y), scale);
  };
  for (auto& x : gs_total_differential(c, gs_cup(c, a, b))) add(x, 1);
  for (auto& x : gs_total_differential(c, a)) cup_add(x, b, f.neg(1));
  for (auto& y : gs_total_differential(c, b)) cup_add(a, y, f.neg(f.sign(a.i + a.j)));
  for (auto& [k, v] : acc)
    for (auto x : v)
      if (x) return false;
  return true;
}

// ---------------------------------------------------------------------------

FpMatrix CoefficientSystem::restrict_map(PrimeField f, std::size_t u, std::size_t v) const {
  if (u == v) return FpMatrix::identity(f, dims[u]);
  auto it = restriction.find({u, v});
  if (it == restriction.end()) throw std::invalid_argument("CoefficientSystem: missing restriction");
  return it->second;
}

namespace {

struct Cell {
  std::size_t open;
  // (face index in the previous level, sign exponent, face open)
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> faces;
};

CochainComplex cell_complex(PrimeField f, const CoefficientSystem& c, const std::vector<std::vector<Cell>>& cells,
                            BasisGrading* grading) {
  std::vector<std::size_t> dims;
  std::vector<std::vector<std::size_t>> offset(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    std::size_t d = 0;
    for (auto& cell : cells[i]) {
      offset[i].push_back(d);
      d += c.dims[cell.open];
    }
    dims.push_back(d);
  }
  std::vector<SparseMatrix> ds;
  for (std::size_t i = 0; i + 1 < cells.size(); ++i) {
    std::vector<SparseMatrix::Triplet> t;
    for (std::size_t s = 0; s < cells[i + 1].size(); ++s) {
      const Cell& cell = cells[i + 1][s];
      for (auto [fi, k, fo] : cell.faces) {
        const FpMatrix r = c.restrict_map(f, cell.open, fo);
        const Residue sg = f.sign(static_cast<std::int64_t>(k));
        for (std::size_t x = 0; x < r.rows(); ++x)
          for (std::size_t y = 0; y < r.cols(); ++y)
            if (Residue v = r.at(x, y))
              t.push_back({static_cast<std::uint32_t>(offset[i + 1][s] + x),
                           static_cast<std::uint32_t>(offset[i][fi] + y), f.mul(sg, v)});
      }
    }
    ds.push_back(SparseMatrix::from_triplets(f, dims[i + 1], dims[i], std::move(t)));
  }
  if (grading) {
    grading->assign(cells.size(), {});
    for (std::size_t i = 0; i < cells.size(); ++i)
      for (auto& cell : cells[i]) {
        if (c.weights.size() != c.dims.size()) throw std::invalid_argument("CoefficientSystem: no weights");
        auto& w = c.weights[cell.open];
        (*grading)[i].insert((*grading)[i].end(), w.begin(), w.end());
      }
  }
  return CochainComplex(f, 0, dims, std::move(ds));
}

template <class Key>
std::size_t position(const std::vector<Key>& level, const Key& k) {
  auto it = std::lower_bound(level.begin(), level.end(), k);
  if (it == level.end() || *it != k) throw std::logic_error("face missing");
  return static_cast<std::size_t>(it - level.begin());
}

std::vector<std::size_t> truncate_dims(std::vector<std::size_t> v, int max_degree) {
  v.resize(static_cast<std::size_t>(max_degree) + 1, 0);
  return v;
}

std::map<int, std::vector<std::size_t>> nonzero_weights(const std::map<int, std::vector<std::size_t>>& m,
                                                        int max_degree) {
  std::map<int, std::vector<std::size_t>> out;
  for (auto& [w, d] : m) {
    auto t = truncate_dims(d, max_degree);
    if (std::any_of(t.begin(), t.end(), [](std::size_t x) { return x != 0; })) out[w] = t;
  }
  return out;
}

}  // namespace

CochainComplex nerve_complex(PrimeField f, const CoefficientSystem& c, int max_degree, BasisGrading* grading) {
  if (max_degree < 0) throw std::invalid_argument("nerve_complex: negative degree");
  auto simplices = nerve(c.poset, max_degree + 1);
  std::vector<std::vector<Cell>> cells(simplices.size());
  for (std::size_t i = 0; i < simplices.size(); ++i)
    for (auto& s : simplices[i]) {
      Cell cell{s.front(), {}};
      if (i > 0)
        for (std::size_t k = 0; k <= i; ++k) {
          Simplex face = s;
          face.erase(face.begin() + static_cast<std::ptrdiff_t>(k));
          cell.faces.emplace_back(position(simplices[i - 1], face), k, face.front());
        }
      cells[i].push_back(std::move(cell));
    }
  return cell_complex(f, c, cells, grading);
}

CochainComplex cech_complex(PrimeField f, const CoefficientSystem& c, int max_degree, BasisGrading* grading) {
  if (max_degree < 0) throw std::invalid_argument("cech_complex: negative degree");
  if (!c.poset.closed_under_intersection())
    throw std::invalid_argument("cech_complex: poset is not closed under intersection");
  const std::size_t n = c.poset.size();
  std::vector<std::vector<std::vector<std::size_t>>> sets(static_cast<std::size_t>(max_degree) + 2);
  std::vector<std::vector<std::size_t>> opens(sets.size());
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<std::size_t> s;
    for (std::size_t k = 0; k < n; ++k)
      if (mask >> k & 1u) s.push_back(k);
    if (s.size() > sets.size()) continue;
    std::optional<std::size_t> m = s[0];
    for (std::size_t k = 1; k < s.size() && m; ++k) m = c.poset.meet(*m, s[k]);
    if (m) sets[s.size() - 1].push_back(s);
  }
  for (auto& level : sets) std::sort(level.begin(), level.end());
  while (sets.size() > 1 && sets.back().empty()) sets.pop_back();
  auto open_of = [&](const std::vector<std::size_t>& s) {
    std::size_t m = s[0];
    for (std::size_t k = 1; k < s.size(); ++k) m = *c.poset.meet(m, s[k]);
    return m;
  };
  std::vector<std::vector<Cell>> cells(sets.size());
  for (std::size_t i = 0; i < sets.size(); ++i)
    for (auto& s : sets[i]) {
      Cell cell{open_of(s), {}};
      if (i > 0)
        for (std::size_t k = 0; k <= i; ++k) {
          auto face = s;
          face.erase(face.begin() + static_cast<std::ptrdiff_t>(k));
          cell.faces.emplace_back(position(sets[i - 1], face), k, open_of(face));
        }
      cells[i].push_back(std::move(cell));
    }
  return cell_complex(f, c, cells, grading);
}

NerveCechComparison nerve_vs_cech(PrimeField f, const CoefficientSystem& c, int max_degree) {
  NerveCechComparison out;
  const bool graded = c.weights.size() == c.dims.size();
  BasisGrading gn, gc;
  auto nc = nerve_complex(f, c, max_degree, graded ? &gn : nullptr);
  auto cc = cech_complex(f, c, max_degree, graded ? &gc : nullptr);
  out.nerve_dims = truncate_dims(nc.cohomology_dims(), max_degree);
  out.cech_dims = truncate_dims(cc.cohomology_dims(), max_degree);
  if (graded) {
    out.nerve_by_weight = nonzero_weights(graded_cohomology_dims(nc, gn), max_degree);
    out.cech_by_weight = nonzero_weights(graded_cohomology_dims(cc, gc), max_degree);
  }
  out.agree = out.nerve_dims == out.cech_dims && out.nerve_by_weight == out.cech_by_weight;
  return out;
}

CoefficientSystem load_coefficient_system(PrimeField f, const nlohmann::json& j) {
  std::vector<std::string> names = j.value("names", std::vector<std::string>{});
  auto dims = j.at("dims").get<std::vector<std::size_t>>();
  std::vector<std::pair<std::size_t, std::size_t>> less;
  for (auto& r : j.value("less", nlohmann::json::array())) less.push_back({r.at(0).get<std::size_t>(), r.at(1).get<std::size_t>()});
  CoefficientSystem c{Poset(dims.size(), less, names), dims, {}, {}};
  if (j.contains("weights")) {
    c.weights = j.at("weights").get<std::vector<std::vector<int>>>();
    if (c.weights.size() != dims.size()) throw std::invalid_argument("coefficient system: one weight list per open");
    for (std::size_t u = 0; u < dims.size(); ++u)
      if (c.weights[u].size() != dims[u]) throw std::invalid_argument("coefficient system: weight list size");
  }
  for (auto& r : j.value("restrictions", nlohmann::json::array())) {
    const std::size_t v = r.at("from").get<std::size_t>(), u = r.at("to").get<std::size_t>();
    if (!c.poset.less(u, v)) throw std::invalid_argument("coefficient system: restriction needs to < from");
    auto rows = r.at("matrix").get<std::vector<std::vector<std::int64_t>>>();
    if (rows.size() != dims[u]) throw std::invalid_argument("coefficient system: restriction shape");
    FpMatrix m(f, dims[u], dims[v]);
    for (std::size_t x = 0; x < dims[u]; ++x) {
      if (rows[x].size() != dims[v]) throw std::invalid_argument("coefficient system: restriction shape");
      for (std::size_t y = 0; y < dims[v]; ++y) m.at(x, y) = f.reduce(rows[x][y]);
    }
    c.restriction.insert_or_assign({u, v}, std::move(m));
  }
  const std::size_t n = dims.size();
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v) {
      if (!c.poset.less(u, v)) continue;
      if (!c.restriction.count({u, v})) throw std::invalid_argument("coefficient system: missing restriction");
      for (std::size_t w = 0; w < n; ++w)
        if (c.poset.less(v, w) && !c.restriction.count({v, w})) {
          throw std::invalid_argument("coefficient system: missing restriction");
        } else if (c.poset.less(v, w) && !(c.restrict_map(f, u, v) * c.restrict_map(f, v, w) == c.restrict_map(f, u, w))) {
          throw std::invalid_argument("coefficient system: restrictions do not compose");
        }
      if (!c.weights.empty()) {
        const FpMatrix r = c.restrict_map(f, u, v);
        for (std::size_t x = 0; x < r.rows(); ++x)
          for (std::size_t y = 0; y < r.cols(); ++y)
            if (r.at(x, y) && c.weights[u][x] != c.weights[v][y])
              throw std::invalid_argument("coefficient system: restriction does not preserve weight");
      }
    }
  return c;
}

namespace {

// Inclusion of monomial spans: basis lists of exponents, map y^c -> y^c.
FpMatrix span_inclusion(PrimeField f, const std::vector<int>& small, const std::vector<int>& big) {
  FpMatrix m(f, small.size(), big.size());
  for (std::size_t x = 0; x < small.size(); ++x)
    for (std::size_t y = 0; y < big.size(); ++y)
      if (small[x] == big[y]) m.at(x, y) = 1;
  return m;
}

std::vector<int> range(int lo, int hi) {
  std::vector<int> out;
  for (int c = lo; c <= hi; ++c) out.push_back(c);
  return out;
}

}  // namespace

CoefficientSystem structure_sheaf_model(PrimeField f, CoverKind cover, int D, int twist) {
  if (D < 0) throw std::invalid_argument("structure_sheaf_model: negative degree bound");
  std::vector<std::vector<int>> spans;
  Poset j = Poset::point();
  switch (cover) {
    case CoverKind::point:
      j = Poset(1, {}, {"A1"});
      spans = {range(0, D)};
      break;
    case CoverKind::affine_line:
      j = Poset(2, {{0, 1}}, {"Gm", "A1"});
      spans = {range(-D, D), range(0, D)};
      break;
    case CoverKind::projective_line:
      j = Poset(3, {{0, 1}, {0, 2}}, {"U01", "U0", "U1"});
      spans = {range(-D, D), range(0, D), range(-D, std::min(twist, D))};
      break;
  }
  CoefficientSystem c{j, {}, {}, spans};
  for (auto& s : spans) c.dims.push_back(s.size());
  for (std::size_t u = 0; u < j.size(); ++u)
    for (std::size_t v = 0; v < j.size(); ++v)
      if (j.less(u, v)) c.restriction.insert_or_assign({u, v}, span_inclusion(f, spans[v], spans[u]).transpose());
  return c;
}

// ---------------------------------------------------------------------------

namespace {

enum class Gen { y, u };

Gen gen_of(ChartKind k) { return k == ChartKind::affine_u ? Gen::u : Gen::y; }
int gen_weight(Gen g) { return g == Gen::y ? 1 : -1; }

// g^{+1} or g^{-1} written in the coordinate of chart k.
DPDOperator coordinate_in(PrimeField f, Gen g, ChartKind k, int power) {
  int e = power;
  if (k == ChartKind::affine_u) {
    if (g != Gen::u) e = -e;
  } else if (g == Gen::u) {
    e = -e;
  }
  if (e < 0 && k != ChartKind::torus) throw std::logic_error("coordinate is not a unit on this chart");
  return DPDOperator::monomial(f, {e}, {0});
}

std::vector<DPKey> chart_operators(ChartKind k, int w, int max_b) {
  std::vector<DPKey> out;
  for (int b = 0; b <= max_b; ++b) {
    const int a = k == ChartKind::affine_u ? b - w : w + b;
    if (a < 0 && k != ChartKind::torus) continue;
    out.push_back({{a}, {b}});
  }
  std::sort(out.begin(), out.end());
  return out;
}

// u^a d_u^(b) as an operator in y = 1/u.
DPDOperator u_to_y(PrimeField f, int a, int b) {
  auto d = operator_from_action(f, 1, b, [&](const Exponents& m) {
    return MultiPoly::monomial(f, {m[0] + b}, static_cast<std::int64_t>(signed_binomial(-m[0], static_cast<std::uint64_t>(b), f)));
  });
  return DPDOperator::monomial(f, {-a}, {0}) * d;
}

DPDOperator restrict_operator(PrimeField f, const DPKey& k, ChartKind from, ChartKind to) {
  if (from == to || (from == ChartKind::affine_y && to == ChartKind::torus))
    return DPDOperator::monomial(f, k.first, k.second);
  if (from == ChartKind::affine_u && to == ChartKind::torus) return u_to_y(f, k.first[0], k.second[0]);
  throw std::logic_error("no restriction between these charts");
}

struct PieceBuilder {
  PrimeField f;
  const std::vector<ChartKind>& charts;
  const std::vector<std::vector<Simplex>>& simplices;
  int Q;

  WeightPiece build(int c) const {
    const std::size_t I = simplices.size() - 1;
    std::vector<std::vector<std::size_t>> dims(I + 1, std::vector<std::size_t>(2, 0));
    WeightPiece piece{c, DoubleComplex(f, dims), {}};
    piece.basis.assign(I + 1, std::vector<std::vector<std::pair<std::size_t, DPKey>>>(2));
    // index[i][j][s]: key -> position in C^{i,j}
    std::vector<std::vector<std::vector<std::map<DPKey, std::size_t>>>> index(
        I + 1, std::vector<std::vector<std::map<DPKey, std::size_t>>>(2));
    for (std::size_t i = 0; i <= I; ++i)
      for (int j = 0; j <= 1; ++j) {
        auto& idx = index[i][static_cast<std::size_t>(j)];
        idx.resize(simplices[i].size());
        for (std::size_t s = 0; s < simplices[i].size(); ++s) {
          const auto& sim = simplices[i][s];
          const int w = c + j * gen_weight(gen_of(charts[sim.back()]));
          for (auto& key : chart_operators(charts[sim.front()], w, Q - j)) {
            idx[s][key] = piece.basis[i][static_cast<std::size_t>(j)].size();
            piece.basis[i][static_cast<std::size_t>(j)].push_back({s, key});
          }
        }
        dims[i][static_cast<std::size_t>(j)] = piece.basis[i][static_cast<std::size_t>(j)].size();
      }
    piece.complex = DoubleComplex(f, dims);

    auto place = [&](std::vector<SparseMatrix::Triplet>& t, const std::map<DPKey, std::size_t>& target, std::size_t col,
                     const DPDOperator& img, Residue sign) {
      for (auto& [key, v] : img.terms()) {
        auto it = target.find(key);
        if (it == target.end()) throw std::logic_error("operator left the truncated model");
        t.push_back({static_cast<std::uint32_t>(it->second), static_cast<std::uint32_t>(col), f.mul(sign, v)});
      }
    };

    for (std::size_t i = 0; i <= I; ++i) {
      std::vector<SparseMatrix::Triplet> t;
      for (std::size_t col = 0; col < dims[i][0]; ++col) {
        auto& [s, key] = piece.basis[i][0][col];
        const auto& sim = simplices[i][s];
        const auto g = coordinate_in(f, gen_of(charts[sim.back()]), charts[sim.front()], 1);
        place(t, index[i][1][s], col, dpdo_commutator(g, DPDOperator::monomial(f, key.first, key.second)), 1);
      }
      piece.complex.set_vertical(static_cast<int>(i), 0, SparseMatrix::from_triplets(f, dims[i][1], dims[i][0], std::move(t)));
    }

    for (std::size_t i = 0; i < I; ++i)
      for (std::size_t j = 0; j <= 1; ++j) {
        std::vector<SparseMatrix::Triplet> t;
        for (std::size_t col = 0; col < dims[i][j]; ++col) {
          auto& [fs, key] = piece.basis[i][j][col];
          const auto& face = simplices[i][fs];
          // every (i+1)-simplex having `face` as its k-th face
          for (std::size_t s = 0; s < simplices[i + 1].size(); ++s) {
            const auto& top = simplices[i + 1][s];
            for (std::size_t k = 0; k <= i + 1; ++k) {
              Simplex d = top;
              d.erase(d.begin() + static_cast<std::ptrdiff_t>(k));
              if (d != face) continue;
              const Residue sign = f.sign(static_cast<std::int64_t>(k));
              DPDOperator img = DPDOperator::monomial(f, key.first, key.second);
              if (k == 0) {
                img = restrict_operator(f, key, charts[top[1]], charts[top[0]]);
              } else if (k == i + 1 && j == 1) {
                const Gen gs = gen_of(charts[top[i]]), gt = gen_of(charts[top[i + 1]]);
                if (gs != gt) {
                  const auto inv = coordinate_in(f, gs, charts[top[0]], -1);
                  img = (inv * img * inv).scaled(f.neg(1));
                }
              }
              place(t, index[i + 1][j][s], col, img, sign);
            }
          }
        }
        piece.complex.set_horizontal(static_cast<int>(i), static_cast<int>(j),
                                     SparseMatrix::from_triplets(f, dims[i + 1][j], dims[i][j], std::move(t)));
      }
    piece.complex.check();
    return piece;
  }
};

// The function y^c on every vertex, as a vector of C^{0,0}; empty if some
// chart does not contain it.
DenseVec function_cochain(const WeightPiece& piece, const std::vector<ChartKind>& charts,
                          const std::vector<std::vector<Simplex>>& simplices, int c) {
  DenseVec v(piece.complex.dim(0, 0), 0);
  std::vector<bool> hit(simplices[0].size(), false);
  for (std::size_t k = 0; k < piece.basis[0][0].size(); ++k) {
    auto& [s, key] = piece.basis[0][0][k];
    const int a = charts[simplices[0][s].front()] == ChartKind::affine_u ? -c : c;
    if (key == DPKey{{a}, {0}}) {
      v[k] = 1;
      hit[s] = true;
    }
  }
  if (std::find(hit.begin(), hit.end(), false) != hit.end()) return {};
  return v;
}

}  // namespace

SubalgebraScenario gs_for_subalgebra_scenario(PrimeField f, const SubalgebraScenarioConfig& cfg) {
  if (cfg.degree_bound < 0 || cfg.dp_bound < 0) throw std::invalid_argument("subalgebra scenario: negative bound");
  if (cfg.depth > 8) throw CapacityError("subalgebra scenario: depth above 8");
  const int stride = static_cast<int>(ipow(f.p(), cfg.depth));
  SubalgebraScenario out;
  out.config = cfg;
  out.twisted_degree_bound = cfg.degree_bound / stride;
  out.twisted_dp_bound = cfg.dp_bound / stride;
  const int D = out.twisted_degree_bound, Q = out.twisted_dp_bound;
  if (Q < 1) throw TruncationError("subalgebra scenario: divided-power bound below p^r leaves no certified window");
  switch (cfg.cover) {
    case CoverKind::point:
      out.poset = Poset(1, {}, {"A1"});
      out.charts = {ChartKind::affine_y};
      break;
    case CoverKind::affine_line:
      out.poset = Poset(2, {{0, 1}}, {"Gm", "A1"});
      out.charts = {ChartKind::torus, ChartKind::affine_y};
      break;
    case CoverKind::projective_line:
      out.poset = Poset(3, {{0, 1}, {0, 2}}, {"U01", "U0", "U1"});
      out.charts = {ChartKind::torus, ChartKind::affine_y, ChartKind::affine_u};
      break;
  }
  out.simplices = nerve(out.poset, kMaxNerveDegree);
  const std::size_t I = out.simplices.size() - 1;

  // Morita certificates for the basis x^{p^r a} d^(p^r b), affine and Laurent
  out.morita_certified = true;
  for (int a = -D; a <= D; ++a)
    for (int b = 0; b <= Q; ++b) {
      auto c = morita_compress(DPDOperator::monomial(f, {stride * a}, {stride * b}), cfg.depth, cfg.degree_bound);
      if (!c.certified || !(c.op == DPDOperator::monomial(f, {a}, {b}))) out.morita_certified = false;
    }

  const CoefficientSystem model = structure_sheaf_model(f, cfg.cover, D);
  BasisGrading cg;
  const auto cech = cech_complex(f, model, 2, &cg);
  const auto cech_weights = graded_cohomology_dims(cech, cg);

  out.e2.assign(I + 1, std::vector<std::size_t>(2, 0));
  out.e_infinity = out.e2;
  out.e2_concentrated = out.converges = out.pages_consistent = out.matches_cech = true;
  PieceBuilder builder{f, out.charts, out.simplices, Q};
  for (int c = -D; c <= D; ++c) {
    WeightPiece piece = builder.build(c);
    auto ss = spectral_sequence(piece.complex, 3);
    const auto& e2 = ss.pages.size() > 1 ? ss.pages[1].dims : ss.pages[0].dims;
    for (std::size_t i = 0; i <= I; ++i)
      for (std::size_t j = 0; j < 2; ++j) {
        out.e2[i][j] += e2[i][j];
        out.e_infinity[i][j] += ss.infinity.dims[i][j];
        if (j > 0 && e2[i][j]) out.e2_concentrated = false;
      }
    out.converges = out.converges && ss.converges;
    out.pages_consistent = out.pages_consistent && ss.pages_consistent;
    std::vector<std::size_t> expected(std::max<std::size_t>(I + 1, 3), 0);
    if (auto it = cech_weights.find(c); it != cech_weights.end())
      for (std::size_t i = 0; i < it->second.size() && i < expected.size(); ++i) expected[i] = it->second[i];
    for (std::size_t i = 0; i < expected.size(); ++i)
      if ((i <= I ? e2[i][0] : 0) != expected[i]) out.matches_cech = false;

    const auto& tot = ss.total_cohomology;
    if (out.total_dims.size() < tot.size()) out.total_dims.resize(tot.size(), 0);
    for (std::size_t n = 0; n < tot.size(); ++n) out.total_dims[n] += tot[n];
    if (std::any_of(tot.begin(), tot.end(), [](std::size_t x) { return x != 0; })) out.dims_by_weight[c] = tot;

    if (!tot.empty() && tot[0] > 0) {
      // HH^0 in this weight must be the function y^c
      if (tot[0] != 1) throw std::logic_error("subalgebra scenario: HH^0 larger than the functions");
      DenseVec v = function_cochain(piece, out.charts, out.simplices, c);
      if (v.empty()) throw std::logic_error("subalgebra scenario: HH^0 class is not a global function");
      auto tc = totalize(piece.complex);
      if (!tc.complex.d(0).apply(to_sparse(v)).empty())
        throw std::logic_error("subalgebra scenario: global function is not a cocycle");
      out.hh0_basis.push_back(MultiPoly::monomial(f, {stride * c}));
    }
    out.pieces.push_back(std::move(piece));
  }
  return out;
}

EdgeMultiplicativity edge_multiplicativity(PrimeField f, const SubalgebraScenario& s) {
  EdgeMultiplicativity out;
  out.holds = true;
  const int stride = static_cast<int>(ipow(f.p(), s.config.depth));
  std::vector<int> weights;
  for (auto& [c, d] : s.dims_by_weight)
    if (d[0]) weights.push_back(c);
  auto piece_of = [&](int c) -> const WeightPiece& { return s.pieces.at(static_cast<std::size_t>(c + s.twisted_degree_bound)); };
  for (int a : weights)
    for (int b : weights) {
      if (!std::binary_search(weights.begin(), weights.end(), a + b)) continue;
      const DenseVec va = function_cochain(piece_of(a), s.charts, s.simplices, a);
      const DenseVec vb = function_cochain(piece_of(b), s.charts, s.simplices, b);
      const DenseVec target = function_cochain(piece_of(a + b), s.charts, s.simplices, a + b);
      // vertexwise operator product in M(U)
      const auto& pa = piece_of(a), &pb = piece_of(b), &pc = piece_of(a + b);
      std::vector<DPDOperator> prod(s.simplices[0].size(), DPDOperator(f, 1));
      std::vector<DPDOperator> left = prod, right = prod;
      for (std::size_t k = 0; k < va.size(); ++k)
        if (va[k]) left[pa.basis[0][0][k].first] = left[pa.basis[0][0][k].first] +
                   DPDOperator::monomial(f, pa.basis[0][0][k].second.first, pa.basis[0][0][k].second.second, va[k]);
      for (std::size_t k = 0; k < vb.size(); ++k)
        if (vb[k]) right[pb.basis[0][0][k].first] = right[pb.basis[0][0][k].first] +
                   DPDOperator::monomial(f, pb.basis[0][0][k].second.first, pb.basis[0][0][k].second.second, vb[k]);
      DenseVec got(pc.complex.dim(0, 0), 0);
      for (std::size_t v = 0; v < prod.size(); ++v) {
        const DPDOperator lr = left[v] * right[v];
        for (auto& [key, x] : lr.terms()) {
          bool found = false;
          for (std::size_t k = 0; k < pc.basis[0][0].size(); ++k)
            if (pc.basis[0][0][k].first == v && pc.basis[0][0][k].second == key) {
              got[k] = f.add(got[k], x);
              found = true;
            }
          if (!found) out.holds = false;
        }
      }
      const MultiPoly ea = MultiPoly::monomial(f, {stride * a}), eb = MultiPoly::monomial(f, {stride * b});
      const MultiPoly ec = MultiPoly::monomial(f, {stride * (a + b)});
      if (got != target || !(ea * eb == ec)) out.holds = false;
      ++out.products_checked;
    }
  return out;
}

}  // namespace hhdx
