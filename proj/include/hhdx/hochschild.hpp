#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hhdx/complex.hpp"
#include "hhdx/dpdo.hpp"
#include "hhdx/errors.hpp"
#include <json.hpp>

namespace hhdx {

/// Finite-dimensional associative unital algebra given by structure
/// constants: e_i e_j = sum_k c(i,j,k) e_k.
class StructAlgebra {
 public:
  /// `constants` is indexed (i * n + j) * n + k. Associativity and the unit
  /// laws are checked.
  StructAlgebra(PrimeField f, std::size_t dim, std::vector<Residue> constants, DenseVec unit);

  static StructAlgebra ground_field(PrimeField f);
  /// M_n(k) on the matrix units E_{ab}, basis index a * n + b.
  static StructAlgebra matrix_algebra(PrimeField f, std::size_t n);
  /// k x ... x k (m copies).
  static StructAlgebra product_of_fields(PrimeField f, std::size_t m);
  /// k[x]/(x^N) on 1, x, ..., x^(N-1).
  static StructAlgebra truncated_polynomial(PrimeField f, std::size_t N);
  /// A (x) B, basis index i * dim(B) + j.
  static StructAlgebra tensor(const StructAlgebra& a, const StructAlgebra& b);

  const PrimeField& field() const { return f_; }
  std::size_t dim() const { return n_; }
  Residue c(std::size_t i, std::size_t j, std::size_t k) const { return c_[(i * n_ + j) * n_ + k]; }
  const DenseVec& unit() const { return unit_; }
  DenseVec multiply(const DenseVec& a, const DenseVec& b) const;
  /// Matrix of m |-> e_i m (left) or m |-> m e_i (right) on A itself.
  FpMatrix left_regular(std::size_t i) const;
  FpMatrix right_regular(std::size_t i) const;

 private:
  PrimeField f_;
  std::size_t n_;
  std::vector<Residue> c_;
  DenseVec unit_;
};

/// A-bimodule given by action matrices of the basis elements. An optional
/// product makes M an algebra receiving A; cup products need it.
class Bimodule {
 public:
  Bimodule(const StructAlgebra& a, std::size_t dim, std::vector<FpMatrix> left, std::vector<FpMatrix> right,
           std::optional<StructAlgebra> product = std::nullopt);

  /// A as a bimodule over itself, with its own product.
  static Bimodule regular(const StructAlgebra& a);
  /// End_k(A) with (a.phi.b)(m) = a phi(b m), product = composition.
  static Bimodule endomorphisms(const StructAlgebra& a);

  std::size_t dim() const { return m_; }
  const FpMatrix& left(std::size_t i) const { return left_[i]; }
  const FpMatrix& right(std::size_t i) const { return right_[i]; }
  bool has_product() const { return product_.has_value(); }
  const StructAlgebra& product() const;

 private:
  std::size_t m_;
  std::vector<FpMatrix> left_;
  std::vector<FpMatrix> right_;
  std::optional<StructAlgebra> product_;
};

constexpr int kMaxBarDegree = 3;
constexpr std::size_t kMaxBarAlgebraDim = 12;

/// Multilinear map A^{(x) j} -> M. Values are stored per basis tuple
/// (a_1, ..., a_j), tuple index sum a_k n^{j-k}, with dim(M) entries each.
struct HochschildCochain {
  int degree = 0;
  DenseVec values;

  DenseVec at(std::size_t tuple_index, std::size_t mdim) const;
};

/// C^0 -> C^1 -> ... -> C^J with the standard Hochschild differential.
/// Assembly is parallel over output tuples.
CochainComplex bar_complex(const StructAlgebra& a, const Bimodule& m, int max_degree);

namespace serial {
CochainComplex bar_complex(const StructAlgebra& a, const Bimodule& m, int max_degree);
}

/// The single differential C^j -> C^{j+1} of the bar complex.
SparseMatrix bar_differential_matrix(const StructAlgebra& a, const Bimodule& m, int j, bool parallel = true);

/// M viewed as an A-bimodule through the algebra map rho : A -> B, where M
/// is a B-bimodule and rho is the dim(B) x dim(A) matrix of the map.
Bimodule pullback(const Bimodule& m, const StructAlgebra& b, const StructAlgebra& a, const FpMatrix& rho);

/// (alpha u beta)(a_1..a_{i+j}) = alpha(a_1..a_i) * beta(a_{i+1}..a_{i+j}).
HochschildCochain cup_product(const StructAlgebra& a, const Bimodule& m, const HochschildCochain& alpha,
                              const HochschildCochain& beta);

/// Applies the bar differential to one cochain.
HochschildCochain bar_differential(const StructAlgebra& a, const Bimodule& m, const HochschildCochain& phi);

/// Basis element of the Koszul complex: the operator x^a d^(b) placed on the
/// exterior monomial e_S (S a bit mask over the coordinates).
struct KoszulBasisElement {
  unsigned subset = 0;
  Exponents a;
  DPIndex b;
};

struct KoszulComplex {
  /// K^0 -> ... -> K^n, K^k = (+)_{|S| = k} M.
  CochainComplex complex;
  std::vector<std::vector<KoszulBasisElement>> basis;
  /// |b| + k, preserved by the differential.
  BasisGrading weight;
  /// Weights <= certified_weight agree with the untruncated module.
  int certified_weight = 0;
  /// Largest divided-power degree in which surjectivity onto K^n is certified,
  /// Q - n; negative when nothing is.
  int window = 0;
};

/// Module of operators x^a d^(b) with every b_i <= Q and sum |a_i| <= D,
/// under the commuting differentials [x_i, -]. Coordinates flagged in
/// `inverted` may carry negative exponents (a chart where x_i is a unit).
KoszulComplex koszul_commutator_complex(PrimeField f, std::size_t nvars, int degree_bound, int dp_bound,
                                        const std::vector<bool>& inverted = {});

/// Affine chart model: n coordinates, some of them inverted.
struct ChartModel {
  std::size_t nvars = 1;
  std::vector<bool> inverted;

  bool is_laurent() const;
};

struct PairCohomology {
  unsigned depth = 0;
  /// dims[k] = dim HH^k within the certified window.
  std::vector<std::size_t> dims;
  /// HH^0 basis, written in the original coordinates (x^{p^r k}).
  std::vector<MultiPoly> hh0_basis;
  /// Weight window used for the statement, in twisted coordinates.
  int certified_weight = 0;
  /// Every compressed basis element passed its Morita certificate.
  bool morita_certified = false;
};

/// HH^*(D^r(U), D(V)) through Morita compression to depth 0 and the Koszul
/// complex in the twisted coordinates. `degree_bound` and `dp_bound` bound
/// the V-side operators before compression.
PairCohomology hh_of_pair(PrimeField f, const ChartModel& u, const ChartModel& v, unsigned r, int degree_bound,
                          int dp_bound);

/// {"p": 3, "dim": n, "c": [[[...]]], "unit": [...],
///  "bimodule": {"dim": m, "left": [n matrices], "right": [n matrices], "product": c'}}
/// Without "bimodule" the regular bimodule is used.
struct LoadedPair {
  StructAlgebra algebra;
  Bimodule bimodule;
};
LoadedPair load_structure_constants(const nlohmann::json& j);

}  // namespace hhdx
