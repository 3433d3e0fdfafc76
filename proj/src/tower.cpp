#include "hhdx/tower.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "hhdx/hochschild.hpp"

namespace hhdx {

namespace {

bool preserves(const FpMatrix& m, const std::vector<int>& rows, const std::vector<int>& cols) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (m.at(i, j) && rows[i] != cols[j]) return false;
  return true;
}

FpMatrix submatrix(const FpMatrix& m, const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) {
  FpMatrix out(m.field(), rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) out.at(i, j) = m.at(rows[i], cols[j]);
  return out;
}

std::size_t matrix_rank(const FpMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  return rank_kernel_image(m).rank;
}

// Columns of m as a matrix whose columns form a basis of its image.
FpMatrix image_basis(const FpMatrix& m) {
  FpMatrix out(m.field(), m.rows(), 0);
  if (m.rows() == 0 || m.cols() == 0) return out;
  auto rk = rank_kernel_image(m);
  FpMatrix b(m.field(), m.rows(), rk.image.size());
  for (std::size_t j = 0; j < rk.image.size(); ++j)
    for (std::size_t i = 0; i < m.rows(); ++i) b.at(i, j) = rk.image[j][i];
  return b;
}

FpMatrix matrix_power(const FpMatrix& m, std::size_t k) {
  FpMatrix out = FpMatrix::identity(m.field(), m.rows());
  for (std::size_t i = 0; i < k; ++i) out = m * out;
  return out;
}

}  // namespace

Tower::Tower(PrimeField f, std::vector<std::size_t> d, std::vector<FpMatrix> m, std::vector<std::vector<int>> deg)
    : field(f), dims(std::move(d)), maps(std::move(m)), degrees(std::move(deg)) {
  if (dims.empty()) throw std::invalid_argument("Tower: no stages");
  if (dims.size() - 1 > kMaxTowerDepth) throw CapacityError("Tower: depth above 8");
  if (maps.size() + 1 != dims.size()) throw std::invalid_argument("Tower: one map per consecutive pair of stages");
  for (std::size_t r = 0; r < maps.size(); ++r)
    if (maps[r].rows() != dims[r] || maps[r].cols() != dims[r + 1])
      throw std::invalid_argument("Tower: map has the wrong shape");
  if (!degrees.empty()) {
    if (degrees.size() != dims.size()) throw std::invalid_argument("Tower: one degree list per stage");
    for (std::size_t r = 0; r < dims.size(); ++r)
      if (degrees[r].size() != dims[r]) throw std::invalid_argument("Tower: degree list size");
    for (std::size_t r = 0; r < maps.size(); ++r)
      if (!preserves(maps[r], degrees[r], degrees[r + 1]))
        throw std::invalid_argument("Tower: map does not preserve degrees");
  }
}

std::set<int> Tower::all_degrees() const {
  if (!graded()) return {0};
  std::set<int> out;
  for (auto& d : degrees) out.insert(d.begin(), d.end());
  return out;
}

bool Tower::tail_known(int degree) const { return tail && (!tail_degrees || tail_degrees->count(degree)); }

FpMatrix Tower::composite(std::size_t r, std::size_t s) const {
  if (r > s) throw std::invalid_argument("Tower::composite: r > s");
  const std::size_t R = depth();
  const std::size_t top = std::min(s, R);
  FpMatrix out = FpMatrix::identity(field, dims[std::min(r, R)]);
  if (r < R)
    for (std::size_t k = r; k < top; ++k) out = out * maps[k];
  if (s > R) {
    if (!tail) throw std::invalid_argument("Tower::composite: no tail declared");
    out = out * matrix_power(*tail, s - std::max(r, R));
  }
  return out;
}

Tower Tower::degree_piece(int degree) const {
  if (!graded()) return *this;
  std::vector<std::vector<std::size_t>> idx(dims.size());
  for (std::size_t r = 0; r < dims.size(); ++r)
    for (std::size_t k = 0; k < dims[r]; ++k)
      if (degrees[r][k] == degree) idx[r].push_back(k);
  std::vector<std::size_t> d;
  std::vector<FpMatrix> m;
  for (auto& i : idx) d.push_back(i.size());
  for (std::size_t r = 0; r < maps.size(); ++r) m.push_back(submatrix(maps[r], idx[r], idx[r + 1]));
  Tower out(field, d, m);
  if (tail_known(degree)) out.tail = submatrix(*tail, idx.back(), idx.back());
  return out;
}

Tower Tower::constant(PrimeField f, std::size_t dim, std::size_t depth) {
  Tower t(f, std::vector<std::size_t>(depth + 1, dim), std::vector<FpMatrix>(depth, FpMatrix::identity(f, dim)));
  t.tail = FpMatrix::identity(f, dim);
  return t;
}

Tower Tower::stationary(const FpMatrix& F, std::size_t depth) {
  if (F.rows() != F.cols()) throw std::invalid_argument("Tower::stationary: map must be square");
  Tower t(F.field(), std::vector<std::size_t>(depth + 1, F.rows()), std::vector<FpMatrix>(depth, F));
  t.tail = F;
  return t;
}

namespace {

struct UngradedLimits {
  std::vector<DenseVec> families;
  std::size_t lim1 = 0, source = 0, target = 0, rank = 0;
  StabilizationCertificate cert;
};

UngradedLimits ungraded_limits(const Tower& t) {
  const PrimeField& f = t.field;
  const std::size_t R = t.depth();
  // N: basis of the admissible x_R
  FpMatrix N = t.tail ? image_basis(matrix_power(*t.tail, t.dims[R])) : FpMatrix::identity(f, t.dims[R]);
  std::vector<std::size_t> off(R + 1, 0);
  for (std::size_t r = 1; r <= R; ++r) off[r] = off[r - 1] + t.dims[r - 1];
  const std::size_t total = off[R] + t.dims[R];

  UngradedLimits out;
  out.source = off[R] + N.cols();
  out.target = off[R];
  FpMatrix d(f, out.target, out.source);
  for (std::size_t r = 0; r < R; ++r) {
    for (std::size_t k = 0; k < t.dims[r]; ++k) d.at(off[r] + k, off[r] + k) = 1;
    const FpMatrix next = r + 1 < R ? t.maps[r] : t.maps[r] * N;
    for (std::size_t i = 0; i < next.rows(); ++i)
      for (std::size_t j = 0; j < next.cols(); ++j) d.at(off[r] + i, off[r + 1] + j) = f.neg(next.at(i, j));
  }
  std::vector<DenseVec> kernel;
  if (out.target == 0) {
    for (std::size_t j = 0; j < out.source; ++j) {
      DenseVec e(out.source, 0);
      e[j] = 1;
      kernel.push_back(e);
    }
  } else if (out.source > 0) {
    auto rk = rank_kernel_image(d);
    out.rank = rk.rank;
    kernel = rk.kernel;
  }
  out.lim1 = out.target - out.rank;
  for (auto& k : kernel) {
    DenseVec fam(total, 0);
    std::copy(k.begin(), k.begin() + static_cast<std::ptrdiff_t>(off[R]), fam.begin());
    for (std::size_t i = 0; i < t.dims[R]; ++i) {
      Residue s = 0;
      for (std::size_t j = 0; j < N.cols(); ++j) s = f.add(s, f.mul(N.at(i, j), k[off[R] + j]));
      fam[off[R] + i] = s;
    }
    out.families.push_back(std::move(fam));
  }

  // image chain in M_0, followed along the tail long enough to settle
  const std::size_t horizon = t.tail ? R + t.dims[R] + 1 : R;
  std::vector<std::size_t> ranks;
  for (std::size_t s = 0; s <= horizon; ++s) ranks.push_back(matrix_rank(t.composite(0, s)));
  std::size_t stage = horizon;
  while (stage > 0 && ranks[stage - 1] == ranks[horizon]) --stage;
  out.cert = {0, stage, ranks[horizon], t.tail.has_value()};
  return out;
}

}  // namespace

TowerLimits lim_and_lim1(const Tower& t) {
  TowerLimits out;
  const std::size_t R = t.depth();
  std::vector<std::size_t> off(R + 1, 0);
  for (std::size_t r = 1; r <= R; ++r) off[r] = off[r - 1] + t.dims[r - 1];
  const std::size_t total = off[R] + t.dims[R];
  out.all_certified = true;
  for (int deg : t.all_degrees()) {
    const Tower piece = t.degree_piece(deg);
    auto u = ungraded_limits(piece);
    out.lim1_dim += u.lim1;
    out.source_dim += u.source;
    out.target_dim += u.target;
    out.difference_rank += u.rank;
    u.cert.degree = deg;
    out.all_certified = out.all_certified && u.cert.certified;
    out.certificates.push_back(u.cert);
    // embed the piece's families back into the full coordinates
    std::vector<std::vector<std::size_t>> idx(R + 1);
    for (std::size_t r = 0; r <= R; ++r)
      for (std::size_t k = 0; k < t.dims[r]; ++k)
        if (!t.graded() || t.degrees[r][k] == deg) idx[r].push_back(k);
    for (auto& fam : u.families) {
      DenseVec full(total, 0);
      std::size_t pos = 0;
      for (std::size_t r = 0; r <= R; ++r)
        for (std::size_t k : idx[r]) full[off[r] + k] = fam[pos++];
      out.lim_basis.push_back(std::move(full));
    }
  }
  return out;
}

DenseVec family_component(const Tower& t, const DenseVec& family, std::size_t r) {
  std::size_t off = 0;
  for (std::size_t k = 0; k < r; ++k) off += t.dims[k];
  return DenseVec(family.begin() + static_cast<std::ptrdiff_t>(off),
                  family.begin() + static_cast<std::ptrdiff_t>(off + t.dims[r]));
}

// ---------------------------------------------------------------------------

namespace {

int exponent_of(const MultiPoly& m) {
  if (m.terms().size() != 1) throw std::logic_error("expected a monomial");
  return m.terms().begin()->first[0];
}

// Degree-d families of `from` pushed through stagewise maps into `to`, as
// ambient vectors of the target product.
std::size_t pushed_rank(const Tower& from, const Tower& to, const std::vector<FpMatrix>& stage_maps,
                        const std::vector<DenseVec>& families) {
  if (families.empty()) return 0;
  const std::size_t R = from.depth();
  std::size_t total = 0;
  for (auto d : to.dims) total += d;
  if (total == 0) return 0;
  FpMatrix m(from.field, total, families.size());
  for (std::size_t c = 0; c < families.size(); ++c) {
    std::size_t off = 0;
    for (std::size_t r = 0; r <= R; ++r) {
      const DenseVec x = stage_maps[r].apply(family_component(from, families[c], r));
      for (std::size_t i = 0; i < x.size(); ++i) m.at(off + i, c) = x[i];
      off += to.dims[r];
    }
  }
  return matrix_rank(m);
}

}  // namespace

FilteredSequenceReport filtered_hh_sequence(PrimeField f, unsigned depth, int degree_bound, int dp_bound) {
  if (depth > kMaxTowerDepth) throw CapacityError("filtered_hh_sequence: depth above 8");
  if (degree_bound < 0) throw std::invalid_argument("filtered_hh_sequence: negative degree bound");
  const std::size_t R = depth;
  const int D = degree_bound;
  FilteredSequenceReport out;
  out.depth = depth;
  out.degree_bound = D;
  out.dp_bound = dp_bound;
  const ChartModel line{1, {false}};
  for (unsigned r = 0; r <= depth; ++r) {
    auto pc = hh_of_pair(f, line, line, r, D, dp_bound);
    out.hh0_tower.push_back(pc.hh0_basis);
    out.hh1_dims.push_back(pc.dims.size() > 1 ? pc.dims[1] : 0);
  }

  // restriction maps on HH^0 and the Frobenius inclusions
  out.frobenius_inclusions = true;
  std::vector<std::vector<int>> sdeg(R + 1);
  for (std::size_t r = 0; r <= R; ++r) {
    for (auto& g : out.hh0_tower[r]) sdeg[r].push_back(exponent_of(g));
    if (out.hh0_tower[r] != TwistSubring(f, 1, static_cast<unsigned>(r)).monomial_basis(D)) out.frobenius_inclusions = false;
    for (auto& g : out.hh0_tower[r])
      if (!twist_membership(g, static_cast<unsigned>(r))) out.frobenius_inclusions = false;
  }
  std::vector<FpMatrix> smaps;
  for (std::size_t r = 0; r < R; ++r) {
    FpMatrix m(f, sdeg[r].size(), sdeg[r + 1].size());
    for (std::size_t j = 0; j < sdeg[r + 1].size(); ++j) {
      auto it = std::find(sdeg[r].begin(), sdeg[r].end(), sdeg[r + 1][j]);
      if (it == sdeg[r].end()) {
        out.frobenius_inclusions = false;
        continue;
      }
      m.at(static_cast<std::size_t>(it - sdeg[r].begin()), j) = 1;
    }
    smaps.push_back(m);
  }

  // centralizer checks
  out.centralizers_checked = true;
  for (std::size_t r = 0; r <= R; ++r) {
    const std::int64_t stride = static_cast<std::int64_t>(ipow(f.p(), static_cast<unsigned>(r)));
    for (auto& g : out.hh0_tower[r])
      for (std::int64_t q = 1; q < stride && q <= D; ++q)
        if (!dpdo_commutator(DPDOperator::divided_power(f, 1, 0, static_cast<int>(q)), DPDOperator::from_poly(g)).is_zero())
          out.centralizers_checked = false;
  }
  {
    std::map<DPKey, std::size_t> rows;
    std::vector<std::vector<std::pair<std::size_t, Residue>>> cols(static_cast<std::size_t>(D) + 1);
    for (int d = 0; d <= D; ++d)
      for (int q = 1; q <= D; ++q) {
        const auto c = dpdo_commutator(DPDOperator::divided_power(f, 1, 0, q), DPDOperator::monomial(f, {d}, {0}));
        for (auto& [k, v] : c.terms()) {
          auto [it, fresh] = rows.try_emplace(k, rows.size());
          (void)fresh;
          cols[static_cast<std::size_t>(d)].push_back({it->second, v});
        }
      }
    FpMatrix m(f, rows.size(), static_cast<std::size_t>(D) + 1);
    for (std::size_t d = 0; d < cols.size(); ++d)
      for (auto& [r, v] : cols[d]) m.at(r, d) = f.add(m.at(r, d), v);
    out.centralizer_dim = static_cast<std::size_t>(D) + 1 - matrix_rank(m);
  }

  // towers S, K = k[t]_{<= D}, K/S
  const std::int64_t top = static_cast<std::int64_t>(ipow(f.p(), depth));
  auto eventually_known = [&](int d) { return d == 0 || d % top != 0; };
  std::set<int> known;
  for (int d = 0; d <= D; ++d)
    if (eventually_known(d)) known.insert(d);

  Tower S(f, [&] {
    std::vector<std::size_t> v;
    for (auto& s : sdeg) v.push_back(s.size());
    return v;
  }(), smaps, sdeg);
  S.tail = FpMatrix::identity(f, sdeg[R].size());
  S.tail_degrees = known;

  std::vector<int> all;
  for (int d = 0; d <= D; ++d) all.push_back(d);
  Tower K(f, std::vector<std::size_t>(R + 1, all.size()), std::vector<FpMatrix>(R, FpMatrix::identity(f, all.size())),
          std::vector<std::vector<int>>(R + 1, all));
  K.tail = FpMatrix::identity(f, all.size());

  std::vector<std::vector<int>> qdeg(R + 1);
  for (std::size_t r = 0; r <= R; ++r) {
    const std::int64_t stride = static_cast<std::int64_t>(ipow(f.p(), static_cast<unsigned>(r)));
    for (int d = 0; d <= D; ++d)
      if (d % stride != 0) qdeg[r].push_back(d);
  }
  std::vector<FpMatrix> qmaps;
  for (std::size_t r = 0; r < R; ++r) {
    FpMatrix m(f, qdeg[r].size(), qdeg[r + 1].size());
    for (std::size_t j = 0; j < qdeg[r + 1].size(); ++j) {
      auto it = std::find(qdeg[r].begin(), qdeg[r].end(), qdeg[r + 1][j]);
      if (it != qdeg[r].end()) m.at(static_cast<std::size_t>(it - qdeg[r].begin()), j) = 1;
    }
    qmaps.push_back(m);
  }
  Tower Qt(f, [&] {
    std::vector<std::size_t> v;
    for (auto& s : qdeg) v.push_back(s.size());
    return v;
  }(), qmaps, qdeg);
  Qt.tail = FpMatrix::identity(f, qdeg[R].size());
  Qt.tail_degrees = known;

  out.exact_at_certified = true;
  for (int d = 0; d <= D; ++d) {
    const Tower s = S.degree_piece(d), k = K.degree_piece(d), q = Qt.degree_piece(d);
    const auto ls = ungraded_limits(s), lk = ungraded_limits(k), lq = ungraded_limits(q);
    std::vector<FpMatrix> incl, proj;
    for (std::size_t r = 0; r <= R; ++r) {
      FpMatrix a(f, k.dims[r], s.dims[r]);
      for (std::size_t j = 0; j < s.dims[r]; ++j) a.at(0, j) = 1;
      incl.push_back(a);
      FpMatrix b(f, q.dims[r], k.dims[r]);
      for (std::size_t i = 0; i < q.dims[r]; ++i) b.at(i, 0) = 1;
      proj.push_back(b);
    }
    SequenceRow row;
    row.degree = d;
    row.certified = ls.cert.certified && lk.cert.certified && lq.cert.certified;
    row.lim_s = ls.families.size();
    row.lim_k = lk.families.size();
    row.lim_q = lq.families.size();
    row.lim1_s = ls.lim1;
    row.lim1_k = lk.lim1;
    row.lim1_q = lq.lim1;
    row.rank_alpha = pushed_rank(s, k, incl, ls.families);
    row.rank_beta = pushed_rank(k, q, proj, lk.families);
    row.exact = row.rank_alpha == row.lim_s && row.rank_alpha + row.rank_beta == row.lim_k &&
                row.lim_q - row.rank_beta == row.lim1_s && row.lim1_k == 0 && row.lim1_q == 0;
    if (row.certified) {
      out.exact_at_certified = out.exact_at_certified && row.exact;
      out.lim_hh0_certified += row.lim_s;
    } else {
      out.uncertified_degrees.push_back(d);
    }
    out.rows.push_back(row);
  }
  return out;
}

// ---------------------------------------------------------------------------

ProperCase proper_case(const std::vector<SemilinearMap>& frobenius) {
  ProperCase out;
  for (auto& F : frobenius) {
    const PrimeField& f = F.field();
    const std::size_t n = F.dim();
    ProperDegree pd;
    pd.cohomology_dim = n;
    auto fit = fitting_decomposition(F);
    pd.stable_dim = fit.semisimple.size();
    pd.nilpotent_dim = fit.nilpotent.size();
    if (n == 0) {
      pd.projection_is_stable_part = true;
      out.degrees.push_back(pd);
      continue;
    }
    // over F_p the semilinear Frobenius is linear
    FpMatrix M(f, n, n, F.entries());
    Tower t = Tower::stationary(M, std::max<std::size_t>(1, n));
    auto lim = lim_and_lim1(t);
    pd.lim_dim = lim.lim_dim();
    pd.lim1_dim = lim.lim1_dim;
    pd.stage = lim.certificates.at(0).stage;
    EchelonBasis proj(f, n), stable(f, n);
    for (auto& fam : lim.lim_basis) proj.insert(to_sparse(family_component(t, fam, 0)));
    for (auto& v : fit.semisimple) stable.insert(to_sparse(v));
    bool inside = true;
    for (auto& row : proj.rows()) inside = inside && stable.contains(row);
    pd.projection_is_stable_part = proj.size() == lim.lim_dim() && proj.size() == stable.size() && inside;
    out.degrees.push_back(pd);
  }
  for (std::size_t m = 0; m < out.degrees.size(); ++m)
    out.hh_dims.push_back(out.degrees[m].lim_dim + (m > 0 ? out.degrees[m - 1].lim1_dim : 0));
  return out;
}

namespace {

MultiPoly cubic_poly(PrimeField f, const Cubic& c) {
  MultiPoly g = MultiPoly::monomial(f, {3});
  g.add_term({2}, f.reduce(c.a2));
  g.add_term({1}, f.reduce(c.a4));
  g.add_term({0}, f.reduce(c.a6));
  return g;
}

void check_curve(PrimeField f, const Cubic& c) {
  if (f.p() == 2) throw std::invalid_argument("hasse_invariant: p = 2 is not supported");
  const std::int64_t b = f.reduce(c.a2), cc = f.reduce(c.a4), d = f.reduce(c.a6);
  // discriminant of x^3 + b x^2 + c x + d, entries already reduced
  const Residue disc = f.reduce(b * b % f.p() * cc % f.p() * cc - 4 * cc * cc % f.p() * cc - 4 * b * b % f.p() * b % f.p() * d -
                                27 * d * d + 18 * b * cc % f.p() * d);
  if (disc == 0) throw std::invalid_argument("hasse_invariant: singular curve");
}

}  // namespace

Residue hasse_invariant(PrimeField f, const Cubic& c) {
  check_curve(f, c);
  return cubic_poly(f, c).pow((f.p() - 1) / 2).coeff({static_cast<int>(f.p()) - 1});
}

Residue hasse_invariant_cech(PrimeField f, const Cubic& c) {
  check_curve(f, c);
  const int p = static_cast<int>(f.p());
  const MultiPoly g = cubic_poly(f, c);
  // a + b y in k[x, 1/x][y] / (y^2 - g)
  using Elt = std::pair<MultiPoly, MultiPoly>;
  auto mul = [&](const Elt& u, const Elt& v) -> Elt {
    return {u.first * v.first + u.second * v.second * g, u.first * v.second + u.second * v.first};
  };
  Elt yp{MultiPoly(f, 1), MultiPoly::constant(f, 1, 1)};
  Elt acc{MultiPoly::constant(f, 1, 1), MultiPoly(f, 1)};
  for (int k = 0; k < p; ++k) acc = mul(acc, yp);
  const MultiPoly shift = MultiPoly::monomial(f, {-p});
  const Elt cocycle{acc.first * shift, acc.second * shift};

  // coordinates: x^k at k + P, y x^k at (2P + 1) + k + P, |k| <= P
  const int P = 3 * p;
  const std::size_t width = static_cast<std::size_t>(2 * P + 1);
  auto coord = [&](bool with_y, int k) { return (with_y ? width : 0) + static_cast<std::size_t>(k + P); };
  DenseVec v(2 * width, 0);
  for (int part = 0; part < 2; ++part)
    for (auto& [e, x] : (part ? cocycle.second : cocycle.first).terms()) {
      if (e[0] < -P || e[0] > P) throw TruncationError("hasse_invariant_cech: cocycle exceeds pole order 3p");
      v[coord(part == 1, e[0])] = x;
    }
  EchelonBasis boundaries(f, 2 * width);
  for (int k = 0; k <= P; ++k) {
    boundaries.insert({{static_cast<std::uint32_t>(coord(false, k)), 1}});   // O(U0)
    boundaries.insert({{static_cast<std::uint32_t>(coord(true, k)), 1}});
    boundaries.insert({{static_cast<std::uint32_t>(coord(false, -k)), 1}});  // O(U1)
    if (k >= 2) boundaries.insert({{static_cast<std::uint32_t>(coord(true, -k)), 1}});
  }
  const SparseVec cls{{static_cast<std::uint32_t>(coord(true, -1)), 1}};
  if (boundaries.contains(cls)) throw std::logic_error("hasse_invariant_cech: [y/x] is a coboundary");
  for (Residue lambda = 0; lambda < f.p(); ++lambda) {
    DenseVec w = v;
    w[coord(true, -1)] = f.sub(w[coord(true, -1)], lambda);
    if (boundaries.contains(to_sparse(w))) return lambda;
  }
  throw std::logic_error("hasse_invariant_cech: H^1 is not spanned by [y/x]");
}

ProperCase elliptic_proper_case(PrimeField f, const Cubic& c) {
  const Residue h = hasse_invariant(f, c);
  return proper_case({SemilinearMap::identity(f, 1), SemilinearMap(f, 1, {h})});
}

// ---------------------------------------------------------------------------

SmithReport smith_tower_check(PrimeField f, unsigned depth, int degree_bound) {
  if (depth > kMaxTowerDepth) throw CapacityError("smith_tower_check: depth above 8");
  const std::int64_t top = static_cast<std::int64_t>(ipow(f.p(), depth));
  if (top > degree_bound) throw CapacityError("smith_tower_check: t^{p^R} exceeds the degree bound");
  SmithReport out;
  out.depth = depth;
  out.degree_bound = degree_bound;
  auto partial = [&](int s) {
    MultiPoly g(f, 1);
    for (int r = 0; r <= s; ++r) g.add_term({static_cast<int>(ipow(f.p(), static_cast<unsigned>(r)))}, 1);
    return g;
  };
  const MultiPoly series = partial(static_cast<int>(depth));
  out.series = series.to_string();
  const DPDOperator F = DPDOperator::from_poly(series);

  const int qmax = std::min(4, divided_power_cap(f));
  std::vector<DPDOperator> gens{DPDOperator::coordinate(f, 1, 0)};
  for (int q = 1; q <= qmax; ++q) gens.push_back(DPDOperator::divided_power(f, 1, 0, q));
  out.derivation = true;
  for (auto& a : gens)
    for (auto& b : gens) {
      const DPDOperator lhs = dpdo_commutator(F, a * b);
      const DPDOperator rhs = dpdo_commutator(F, a) * b + a * dpdo_commutator(F, b);
      if (!(lhs == rhs)) out.derivation = false;
      ++out.leibniz_checks;
    }

  out.compatible_family = out.differences_in_twist = true;
  for (unsigned s = 0; s <= depth; ++s) {
    const MultiPoly rest = series - (s == 0 ? MultiPoly(f, 1) : partial(static_cast<int>(s) - 1));
    const DPDOperator Rop = DPDOperator::from_poly(rest);
    const std::int64_t stride = static_cast<std::int64_t>(ipow(f.p(), s));
    if (!dpdo_commutator(Rop, gens[0]).is_zero()) out.compatible_family = false;
    for (std::int64_t q = 1; q < stride && q <= std::min<std::int64_t>(degree_bound, divided_power_cap(f)); ++q)
      if (!dpdo_commutator(Rop, DPDOperator::divided_power(f, 1, 0, static_cast<int>(q))).is_zero())
        out.compatible_family = false;
    if (!twist_membership(MultiPoly::monomial(f, {static_cast<int>(stride)}), s)) out.differences_in_twist = false;
  }

  // the tower {k[t^{p^r}]_{<= D}} and the witness z
  const std::size_t R = depth;
  std::vector<std::vector<MultiPoly>> basis;
  for (std::size_t r = 0; r <= R; ++r) basis.push_back(TwistSubring(f, 1, static_cast<unsigned>(r)).monomial_basis(degree_bound));
  auto coords = [&](std::size_t r, const MultiPoly& g) {
    DenseVec v(basis[r].size(), 0);
    for (auto& [e, c] : g.terms()) {
      bool found = false;
      for (std::size_t k = 0; k < basis[r].size(); ++k)
        if (basis[r][k].terms().begin()->first == e) {
          v[k] = c;
          found = true;
        }
      if (!found) throw std::logic_error("smith_tower_check: element outside the twist subring");
    }
    return v;
  };
  std::vector<FpMatrix> maps;
  for (std::size_t r = 0; r < R; ++r) {
    FpMatrix m(f, basis[r].size(), basis[r + 1].size());
    for (std::size_t j = 0; j < basis[r + 1].size(); ++j) {
      auto v = coords(r, basis[r + 1][j]);
      for (std::size_t i = 0; i < v.size(); ++i) m.at(i, j) = v[i];
    }
    maps.push_back(m);
  }
  out.boundary_in_truncation = true;
  std::vector<DenseVec> z;
  for (std::size_t r = 0; r <= R; ++r) {
    MultiPoly g(f, 1);
    for (std::size_t s = r; s < R; ++s) g.add_term({static_cast<int>(ipow(f.p(), static_cast<unsigned>(s)))}, 1);
    z.push_back(coords(r, g));
  }
  for (std::size_t r = 0; r < R; ++r) {
    const DenseVec img = maps[r].apply(z[r + 1]);
    DenseVec dz(z[r].size());
    for (std::size_t i = 0; i < dz.size(); ++i) dz[i] = f.sub(z[r][i], img[i]);
    if (dz != coords(r, MultiPoly::monomial(f, {static_cast<int>(ipow(f.p(), static_cast<unsigned>(r)))})))
      out.boundary_in_truncation = false;
  }
  std::vector<std::size_t> dims;
  for (auto& b : basis) dims.push_back(b.size());
  out.class_dim = lim_and_lim1(Tower(f, dims, maps)).lim1_dim;
  return out;
}

}  // namespace hhdx
