#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hhdx/dpdo.hpp"
#include "hhdx/gfp.hpp"
#include "hhdx/linalg.hpp"
#include "hhdx/poly.hpp"

namespace hhdx {

constexpr unsigned kMaxTowerDepth = 8;

/// M_0 <- M_1 <- ... <- M_R with maps[r] : M_{r+1} -> M_r (a dims[r] x dims[r+1]
/// matrix). A graded tower assigns a degree to every basis vector of every
/// stage; the maps must preserve it.
///
/// A finite tower says nothing about the stages beyond R. `tail`, when set,
/// declares the continuation: every later stage is M_R and every later map is
/// the endomorphism `tail`. For graded towers the declaration can be limited
/// to `tail_degrees`; elsewhere the continuation is unknown.
struct Tower {
  PrimeField field;
  std::vector<std::size_t> dims;
  std::vector<FpMatrix> maps;
  std::vector<std::vector<int>> degrees;
  std::optional<FpMatrix> tail;
  std::optional<std::set<int>> tail_degrees;

  Tower(PrimeField f, std::vector<std::size_t> dims, std::vector<FpMatrix> maps,
        std::vector<std::vector<int>> degrees = {});

  /// R
  std::size_t depth() const { return dims.size() - 1; }
  bool graded() const { return !degrees.empty(); }
  /// All degrees occurring in some stage; {0} for an ungraded tower.
  std::set<int> all_degrees() const;
  bool tail_known(int degree) const;
  /// Composite M_s -> M_r for r <= s, following the tail beyond R.
  FpMatrix composite(std::size_t r, std::size_t s) const;
  /// The piece of one degree, with the tail restricted to it when known.
  Tower degree_piece(int degree) const;

  /// The constant tower V <- V <- ... of length R + 1 with identity tail.
  static Tower constant(PrimeField f, std::size_t dim, std::size_t depth);
  /// Every map is F, tail F.
  static Tower stationary(const FpMatrix& F, std::size_t depth);
};

struct StabilizationCertificate {
  int degree = 0;
  /// First stage s with im(M_t -> M_0) constant for all t >= s (computed on
  /// the declared continuation when it is known).
  std::size_t stage = 0;
  /// dim of the stable image in M_0
  std::size_t image_dim = 0;
  bool certified = false;
};

struct TowerLimits {
  /// Compatible families (x_0, ..., x_R) with x_R in the stable image of the
  /// tail; concatenated coordinates. Without a tail, x_R is unconstrained.
  std::vector<DenseVec> lim_basis;
  /// Cokernel of the difference map.
  std::size_t lim1_dim = 0;
  /// Dimensions of the two terms of the difference complex.
  std::size_t source_dim = 0;
  std::size_t target_dim = 0;
  std::size_t difference_rank = 0;
  std::vector<StabilizationCertificate> certificates;
  /// Every degree certified: lim and lim^1 equal the infinite ones.
  bool all_certified = false;

  std::size_t lim_dim() const { return lim_basis.size(); }
};

/// Kernel and cokernel of (x_r) |-> (x_r - f_r(x_{r+1}))_{r < R}. The last
/// transition never enters the difference map; it only feeds the image in
/// the constraint on x_R. With a tail, the source uses the stable image of the
/// tail at stage R in place of M_R.
TowerLimits lim_and_lim1(const Tower& t);

/// lim basis vectors restricted to stage r.
DenseVec family_component(const Tower& t, const DenseVec& family, std::size_t r);

// ---------------------------------------------------------------------------

struct SequenceRow {
  int degree = 0;
  bool certified = false;
  /// dims of lim S, lim K, lim K/S, lim^1 S, lim^1 K, lim^1 K/S
  std::size_t lim_s = 0, lim_k = 0, lim_q = 0, lim1_s = 0, lim1_k = 0, lim1_q = 0;
  std::size_t rank_alpha = 0, rank_beta = 0;
  bool exact = false;
};

struct FilteredSequenceReport {
  unsigned depth = 0;
  int degree_bound = 0;
  int dp_bound = 0;
  /// HH^0(D^r, D) bases from the Hochschild computation, r = 0..R.
  std::vector<std::vector<MultiPoly>> hh0_tower;
  /// dim HH^1(D^r, D) within the certified window, r = 0..R.
  std::vector<std::size_t> hh1_dims;
  /// Restriction HH^0(D^{r+1}) -> HH^0(D^r) is the inclusion
  /// k[t^{p^{r+1}}] c k[t^{p^r}] for every r.
  bool frobenius_inclusions = false;
  /// Every HH^0(D^r) basis element commutes with d^(q), q < p^r.
  bool centralizers_checked = false;
  /// dim of the centralizer of {d^(q) : 1 <= q <= D} in k[t]_{<= D}.
  std::size_t centralizer_dim = 0;
  /// lim_r HH^0(D^r) in the certified degrees.
  std::size_t lim_hh0_certified = 0;
  std::vector<SequenceRow> rows;
  bool exact_at_certified = false;
  std::vector<int> uncertified_degrees;
};

/// The affine line: HH^0(D^r, D) for r <= R from hh_of_pair, the tower
/// S_r = HH^0(D^r) inside K = k[t]_{<= D}, and the six-term sequence of
/// 0 -> S -> K -> K/S -> 0 checked degreewise.
FilteredSequenceReport filtered_hh_sequence(PrimeField f, unsigned depth, int degree_bound, int dp_bound);

// ---------------------------------------------------------------------------

struct ProperDegree {
  std::size_t cohomology_dim = 0;
  std::size_t stable_dim = 0;
  std::size_t nilpotent_dim = 0;
  std::size_t lim_dim = 0;
  std::size_t lim1_dim = 0;
  std::size_t stage = 0;
  /// lim -> M_0 is injective with image the semisimple part.
  bool projection_is_stable_part = false;
};

struct ProperCase {
  std::vector<ProperDegree> degrees;
  /// HH^m = H^m_s dimensions
  std::vector<std::size_t> hh_dims;
};

/// Frobenius towers H^m <- H^m <- ... per cohomology degree.
ProperCase proper_case(const std::vector<SemilinearMap>& frobenius);

/// Weierstrass cubic y^2 = x^3 + a2 x^2 + a4 x + a6.
struct Cubic {
  std::int64_t a2 = 0, a4 = 0, a6 = 0;
};

/// Coefficient of x^{p-1} in f^{(p-1)/2}. Rejects p = 2 and singular curves.
Residue hasse_invariant(PrimeField f, const Cubic& c);

/// Frobenius on H^1(E, O) through the Cech complex of U0 = E - {inf},
/// U1 = E - {x = 0}: the class of y^p / x^p read against the basis [y / x],
/// with cochains truncated at pole order 3p.
Residue hasse_invariant_cech(PrimeField f, const Cubic& c);

/// H^0 = k with F = 1, H^1 = k with F = Hasse invariant.
ProperCase elliptic_proper_case(PrimeField f, const Cubic& c);

// ---------------------------------------------------------------------------

struct SmithReport {
  unsigned depth = 0;
  int degree_bound = 0;
  std::string series;
  /// [f_R, ab] = [f_R, a] b + a [f_R, b] on pairs of generators t, d^(q), q <= 4.
  bool derivation = false;
  std::size_t leibniz_checks = 0;
  /// f_R - f_{s-1} commutes with t and d^(q), q < p^s, for every s <= R.
  bool compatible_family = false;
  /// Successive differences f_s - f_{s-1} = t^{p^s} lie in k[t^{p^s}].
  bool differences_in_twist = false;
  /// The difference family is d(z) for z_r = sum_{r <= r' < R} t^{p^{r'}} in
  /// the truncated tower complex of {k[t^{p^r}]}.
  bool boundary_in_truncation = false;
  /// Its class in the truncated cokernel; always 0 at finite depth.
  std::size_t class_dim = 0;
};

SmithReport smith_tower_check(PrimeField f, unsigned depth, int degree_bound);

}  // namespace hhdx
