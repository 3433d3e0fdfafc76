#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hhdx/complex.hpp"
#include "hhdx/hochschild.hpp"

namespace hhdx {

constexpr std::size_t kMaxPosetSize = 8;
constexpr int kMaxNerveDegree = 4;
constexpr int kMaxGSHochschildDegree = 2;

/// Finite poset of opens, u <= v meaning u is contained in v.
class Poset {
 public:
  /// `less` lists generating pairs (a, b) with a < b; the order is their
  /// reflexive-transitive closure, which must be antisymmetric.
  Poset(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& less,
        std::vector<std::string> names = {});

  Poset() : Poset(1, {}) {}

  static Poset point();
  /// 0 < 1 < ... < n-1
  static Poset chain(std::size_t n);
  static Poset discrete(std::size_t n);

  std::size_t size() const { return n_; }
  bool leq(std::size_t a, std::size_t b) const { return leq_[a * n_ + b]; }
  bool less(std::size_t a, std::size_t b) const { return a != b && leq(a, b); }
  const std::string& name(std::size_t a) const { return names_[a]; }
  /// Greatest common lower bound, if any.
  std::optional<std::size_t> meet(std::size_t a, std::size_t b) const;
  /// Every pair with a common lower bound has a meet.
  bool closed_under_intersection() const;

 private:
  std::size_t n_;
  std::vector<bool> leq_;
  std::vector<std::string> names_;
};

/// Strict chain U_0 < ... < U_i, stored bottom-up.
using Simplex = std::vector<std::size_t>;

/// nerve[i] lists the i-simplices in lexicographic order.
std::vector<std::vector<Simplex>> nerve(const Poset& j, int max_i);

/// U |-> A(U) with unital algebra maps A(V) -> A(U) for U <= V.
class AlgebraPresheaf {
 public:
  AlgebraPresheaf(Poset j, std::vector<StructAlgebra> algebras);
  /// Sets the restriction A(v) -> A(u), a dim A(u) x dim A(v) matrix.
  void set_restriction(std::size_t u, std::size_t v, FpMatrix m);
  /// Checks unital multiplicativity and functoriality; identity maps on
  /// u = v are implicit. Unset restrictions for u < v are an error.
  void check() const;

  static AlgebraPresheaf constant(Poset j, const StructAlgebra& a);

  const Poset& poset() const { return poset_; }
  const StructAlgebra& at(std::size_t u) const { return algebras_[u]; }
  FpMatrix restriction(std::size_t u, std::size_t v) const;

 private:
  Poset poset_;
  std::vector<StructAlgebra> algebras_;
  std::map<std::pair<std::size_t, std::size_t>, FpMatrix> res_;
};

/// U |-> M(U), an A(U)-bimodule, with restrictions compatible with those of A.
class BimodulePresheaf {
 public:
  BimodulePresheaf(const AlgebraPresheaf& a, std::vector<Bimodule> modules);
  void set_restriction(std::size_t u, std::size_t v, FpMatrix m);
  void check(const AlgebraPresheaf& a) const;

  /// M = A with the algebra restrictions.
  static BimodulePresheaf regular(const AlgebraPresheaf& a);

  const Bimodule& at(std::size_t u) const { return modules_[u]; }
  FpMatrix restriction(std::size_t u, std::size_t v) const;

 private:
  std::vector<Bimodule> modules_;
  std::map<std::pair<std::size_t, std::size_t>, FpMatrix> res_;
};

/// The double complex C^{i,j} = prod_{sigma in N^i} C^j(A(max sigma), M(min sigma)).
/// Horizontal: sum_k (-1)^k over faces; dropping the minimum postcomposes
/// with the restriction of M, dropping the maximum precomposes every
/// argument with the restriction of A, inner faces are identities.
/// Vertical: the Hochschild differential with M(min sigma) pulled back to
/// A(max sigma).
struct GSComplex {
  std::shared_ptr<const AlgebraPresheaf> algebra;
  std::shared_ptr<const BimodulePresheaf> bimodule;
  std::vector<std::vector<Simplex>> simplices;
  /// offset[i][j][s]: first coordinate of simplex s inside C^{i,j}.
  std::vector<std::vector<std::vector<std::size_t>>> offset;
  DoubleComplex complex;
};

GSComplex build_gs_complex(const AlgebraPresheaf& a, const BimodulePresheaf& m, int max_i, int max_j);

struct GSCochain {
  int i = 0;
  int j = 0;
  DenseVec values;
};

/// Bihomogeneous cup product: for sigma = tau u nu with |tau| = alpha.i,
/// (alpha u beta)^sigma = (-1)^{|nu| alpha.j} (alpha^tau o phi_A) u (phi_M o beta^nu).
GSCochain gs_cup(const GSComplex& c, const GSCochain& alpha, const GSCochain& beta);

/// D = d_h + (-1)^i d_v on a bihomogeneous cochain; pieces leaving the built
/// range are dropped.
std::vector<GSCochain> gs_total_differential(const GSComplex& c, const GSCochain& x);

/// D(a u b) = Da u b + (-1)^{|a|} a u Db, with every term outside the built
/// bidegree range dropped. a u b must itself lie in range.
bool gs_leibniz_holds(const GSComplex& c, const GSCochain& a, const GSCochain& b);

/// Hochschild cochain of simplex s inside a GS cochain.
HochschildCochain gs_component(const GSComplex& c, const GSCochain& x, std::size_t s);

// ---------------------------------------------------------------------------
// Coefficient systems on covers and the nerve / Cech comparison.

/// A presheaf of finite-dimensional spaces on a poset, optionally graded by
/// an integer weight preserved by the restrictions.
struct CoefficientSystem {
  Poset poset;
  std::vector<std::size_t> dims;
  /// (u, v) with u < v: the restriction F(v) -> F(u).
  std::map<std::pair<std::size_t, std::size_t>, FpMatrix> restriction;
  /// Optional weights of the basis vectors of each F(u).
  std::vector<std::vector<int>> weights;

  FpMatrix restrict_map(PrimeField f, std::size_t u, std::size_t v) const;
};

struct NerveCechComparison {
  std::vector<std::size_t> nerve_dims;
  std::vector<std::size_t> cech_dims;
  /// Per weight (when weights are present): H^i dimensions from both sides.
  std::map<int, std::vector<std::size_t>> nerve_by_weight;
  std::map<int, std::vector<std::size_t>> cech_by_weight;
  bool agree = false;
};

/// Cohomology of the poset nerve with coefficients sigma |-> F(min sigma)
/// against the Cech complex indexed by all elements of the poset.
NerveCechComparison nerve_vs_cech(PrimeField f, const CoefficientSystem& c, int max_degree = 3);

/// Poset nerve cochain complex with coefficients sigma |-> F(min sigma).
CochainComplex nerve_complex(PrimeField f, const CoefficientSystem& c, int max_degree, BasisGrading* grading = nullptr);

/// Cech complex over all elements of an intersection-closed poset.
CochainComplex cech_complex(PrimeField f, const CoefficientSystem& c, int max_degree, BasisGrading* grading = nullptr);

/// Reads {"names": [...], "less": [[a, b], ...], "dims": [...],
/// "weights": [[...]], "restrictions": [{"from": v, "to": u, "matrix": [[...]]}]}.
CoefficientSystem load_coefficient_system(PrimeField f, const nlohmann::json& j);

// ---------------------------------------------------------------------------
// Subalgebra scenarios: D^r and D on covers of the line.

enum class CoverKind { point, affine_line, projective_line };

/// Twisted chart types: k[y], k[u] with u = 1/y, k[y, 1/y].
enum class ChartKind { affine_y, affine_u, torus };

struct SubalgebraScenarioConfig {
  CoverKind cover = CoverKind::affine_line;
  unsigned depth = 0;
  /// Bounds on the original coordinate t; the twisted coordinate y = t^{p^r}
  /// sees degree_bound / p^r and dp_bound / p^r.
  int degree_bound = 16;
  int dp_bound = 8;
};

/// Double complex of one weight c of the Morita-reduced GS model. Columns are
/// nerve simplices; the vertical direction is the Koszul complex
/// M -> M of [g, -] for the coordinate g of max sigma acting on operators of
/// order <= Q' (<= Q'-1 in degree 1) on min sigma.
struct WeightPiece {
  int weight = 0;
  DoubleComplex complex;
  /// basis[i][j]: (simplex index, operator) per coordinate.
  std::vector<std::vector<std::vector<std::pair<std::size_t, DPKey>>>> basis;
};

struct SubalgebraScenario {
  SubalgebraScenarioConfig config;
  Poset poset;
  std::vector<ChartKind> charts;
  std::vector<std::vector<Simplex>> simplices;
  int twisted_degree_bound = 0;
  int twisted_dp_bound = 0;
  std::vector<WeightPiece> pieces;
  /// Summed over the certified weights.
  std::vector<std::size_t> total_dims;
  std::vector<std::vector<std::size_t>> e2;
  std::vector<std::vector<std::size_t>> e_infinity;
  /// E_2 vanishes for j > 0 in every weight.
  bool e2_concentrated = false;
  /// Sum of dim E_inf = dim H(Tot) in every weight.
  bool converges = false;
  bool pages_consistent = false;
  /// E_2^{i,0} equals the Cech cohomology of the twisted structure sheaf model
  /// in every weight.
  bool matches_cech = false;
  bool morita_certified = false;
  /// Weights carrying HH^0 and HH^1, and their generators in t.
  std::map<int, std::vector<std::size_t>> dims_by_weight;
  std::vector<MultiPoly> hh0_basis;
};

SubalgebraScenario gs_for_subalgebra_scenario(PrimeField f, const SubalgebraScenarioConfig& cfg);

/// The twisted structure sheaf model of the cover as a weighted coefficient
/// system, weights in [-D', D']. `twist` shifts the U1 chart to y^{twist} k[1/y]
/// (twist = -2 gives the O(-2) model).
CoefficientSystem structure_sheaf_model(PrimeField f, CoverKind cover, int twisted_degree_bound, int twist = 0);

/// Degree-0 products in the GS model (operators multiply in M(min sigma)):
/// the product of the HH^0 representatives y^a, y^b must be the representative
/// y^{a+b}, and the edge images t^{p^r a}, t^{p^r b} must multiply to its edge
/// image.
struct EdgeMultiplicativity {
  std::size_t products_checked = 0;
  bool holds = false;
};
EdgeMultiplicativity edge_multiplicativity(PrimeField f, const SubalgebraScenario& s);

}  // namespace hhdx
