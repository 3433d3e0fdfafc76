#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "hhdx/errors.hpp"
#include "hhdx/poly.hpp"

namespace hhdx {

/// Divided-power multi-index (q_1, ..., q_n), all entries >= 0.
using DPIndex = std::vector<int>;

/// Normal-ordered basis element x^a d^(b): polynomial factor on the left.
using DPKey = std::pair<Exponents, DPIndex>;

/// Divided-power differential operator: a finite F_p-combination of
/// normal-ordered monomials x^a d_1^(b_1) ... d_n^(b_n).
class DPDOperator {
 public:
  DPDOperator(PrimeField f, std::size_t nvars);

  static DPDOperator identity(PrimeField f, std::size_t nvars);
  static DPDOperator from_poly(const MultiPoly& g);
  static DPDOperator coordinate(PrimeField f, std::size_t nvars, std::size_t i);
  /// d_i^(q)
  static DPDOperator divided_power(PrimeField f, std::size_t nvars, std::size_t i, int q);
  static DPDOperator monomial(PrimeField f, Exponents a, DPIndex b, std::int64_t c = 1);

  const PrimeField& field() const { return f_; }
  std::size_t nvars() const { return n_; }
  const std::map<DPKey, Residue>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  Residue coeff(const DPKey& k) const;

  void add_term(const Exponents& a, const DPIndex& b, Residue c);

  DPDOperator operator+(const DPDOperator& o) const;
  DPDOperator operator-(const DPDOperator& o) const;
  DPDOperator operator*(const DPDOperator& o) const;
  DPDOperator scaled(Residue c) const;
  bool operator==(const DPDOperator& o) const { return n_ == o.n_ && f_ == o.f_ && terms_ == o.terms_; }

  /// Largest total polynomial degree over the terms; -1 for zero.
  int poly_degree() const;

  /// Terms highest-first, e.g. "x1*d1^(1) + d1^(3)".
  std::string to_string() const;

 private:
  void check_compatible(const DPDOperator& o) const;

  PrimeField f_;
  std::size_t n_;
  std::map<DPKey, Residue> terms_;
};

/// Per-variable cap on divided-power indices; products exceeding it throw
/// CapacityError instead of being truncated.
int divided_power_cap(const PrimeField& f);

/// Normal-ordered product, using d^(q) x^m = sum_j C(m,j) x^(m-j) d^(q-j)
/// and d^(q) d^(q') = C(q+q',q) d^(q+q') in each variable.
DPDOperator dpdo_mul(const DPDOperator& a, const DPDOperator& b);

/// Action on (Laurent) polynomials: x^a d^(b) sends x^m to
/// prod_i C(m_i, b_i) x^(m - b + a).
MultiPoly dpdo_act(const DPDOperator& a, const MultiPoly& g);

DPDOperator dpdo_commutator(const DPDOperator& a, const DPDOperator& b);

/// max |b| over the terms; 0 for the zero operator.
int order_of(const DPDOperator& a);

/// Order test through the commutator criterion: [f_0,[f_1,...,[f_m, A]]] = 0
/// for every (m+1)-tuple of non-constant coordinate monomials of degree
/// <= degree_bound.
bool is_order_le(const DPDOperator& a, int m, int degree_bound);

/// Smallest r with [A, x_i^(p^r)] = 0 for all i.
unsigned centrality_depth(const DPDOperator& a);

/// Square matrix of polynomials in the depth-r twisted coordinates.
struct MatrixRealization {
  unsigned depth = 0;
  std::size_t size = 0;
  /// Free basis {x^a : 0 <= a_i < p^r}, lexicographic.
  std::vector<Exponents> basis;
  /// Row-major; entry (i, j) is the coefficient of basis[i] in A(basis[j]).
  std::vector<MultiPoly> entries;
  bool truncated = false;

  const MultiPoly& at(std::size_t i, std::size_t j) const { return entries[i * size + j]; }
};

MatrixRealization matrix_realize(const DPDOperator& a, unsigned r, int degree_bound);

/// Product of realizations with entries truncated at degree_bound.
MatrixRealization realization_product(const MatrixRealization& a, const MatrixRealization& b, int degree_bound);

struct MoritaCompression {
  /// e A e expressed as an operator in the twisted variables y_i = x_i^(p^r).
  DPDOperator op;
  /// True when the degree bound covers every divided-power index that can
  /// occur in e A e.
  bool certified = false;
};

/// e A e for the idempotent e projecting onto span{x^a : p^r | a}.
MoritaCompression morita_compress(const DPDOperator& a, unsigned r, int degree_bound);

/// Reconstructs sum_l h_l d^(l) from the values N(x^k), |k| <= max_order,
/// using h_l = N(x^l) - sum_{l' < l} C(l, l') x^(l-l') h_{l'}.
DPDOperator operator_from_action(PrimeField f, std::size_t nvars, int max_order,
                                 const std::function<MultiPoly(const Exponents&)>& action);

/// Reads the rendering produced by DPDOperator::to_string (and polynomials),
/// e.g. "2*x1^3*d1^(2) + x2 - 1".
DPDOperator parse_operator(PrimeField f, std::size_t nvars, const std::string& text);

}  // namespace hhdx
