#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "hhdx/gfp.hpp"

namespace hhdx {

/// Exponent vector. Signed so that Laurent chart models can reuse the type;
/// ordinary polynomials have all entries >= 0.
using Exponents = std::vector<int>;

constexpr std::size_t kMaxVariables = 8;
constexpr int kMaxDegree = 1 << 16;

/// Sparse multivariate (Laurent) polynomial over F_p with terms kept in
/// lexicographic order of exponent vectors and no stored zeros.
class MultiPoly {
 public:
  MultiPoly(PrimeField f, std::size_t nvars);

  static MultiPoly constant(PrimeField f, std::size_t nvars, std::int64_t c);
  static MultiPoly monomial(PrimeField f, Exponents e, std::int64_t c = 1);
  static MultiPoly variable(PrimeField f, std::size_t nvars, std::size_t i);

  const PrimeField& field() const { return f_; }
  std::size_t nvars() const { return n_; }
  const std::map<Exponents, Residue>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  Residue coeff(const Exponents& e) const;

  void add_term(const Exponents& e, Residue c);

  MultiPoly operator+(const MultiPoly& o) const;
  MultiPoly operator-(const MultiPoly& o) const;
  MultiPoly operator*(const MultiPoly& o) const;
  MultiPoly scaled(Residue c) const;
  MultiPoly pow(std::uint64_t k) const;
  bool operator==(const MultiPoly& o) const { return n_ == o.n_ && f_ == o.f_ && terms_ == o.terms_; }

  /// Largest total degree among the terms; -1 for the zero polynomial.
  int total_degree() const;
  /// True when no exponent is negative.
  bool is_polynomial() const;

  /// Terms rendered highest-first in lexicographic order, e.g. "x1^2 + 2*x1*x2 + x2^2".
  std::string to_string() const;

 private:
  void check_compatible(const MultiPoly& o) const;

  PrimeField f_;
  std::size_t n_;
  std::map<Exponents, Residue> terms_;
};

std::string monomial_string(const Exponents& e);

/// Result of an operation that discards terms above a degree bound.
struct Truncated {
  MultiPoly poly;
  bool truncated = false;
};

/// Hard truncation at total degree <= D, recording whether anything was dropped.
class GradedTruncation {
 public:
  explicit GradedTruncation(int degree_bound);
  int degree_bound() const { return bound_; }
  Truncated truncate(const MultiPoly& f) const;
  Truncated mul(const MultiPoly& f, const MultiPoly& g) const;

 private:
  int bound_;
};

/// Exact product; same as operator*.
MultiPoly poly_mul(const MultiPoly& f, const MultiPoly& g);

/// True iff every exponent of every term is divisible by p^r.
bool twist_membership(const MultiPoly& f, unsigned r);

/// f |-> f^p, computed termwise: exponents scale by p, coefficients go to
/// their p-th power (a no-op on F_p residues).
MultiPoly frobenius_map(const MultiPoly& f);

/// The subring generated by the p^r-th powers of the coordinates.
class TwistSubring {
 public:
  TwistSubring(PrimeField f, std::size_t nvars, unsigned r);
  unsigned depth() const { return r_; }
  std::uint64_t stride() const { return stride_; }
  bool contains(const MultiPoly& g) const { return twist_membership(g, r_); }
  /// Monomials x^{p^r k} of total degree <= D, lexicographically ordered.
  std::vector<MultiPoly> monomial_basis(int degree_bound) const;

 private:
  PrimeField f_;
  std::size_t n_;
  unsigned r_;
  std::uint64_t stride_;
};

std::uint64_t ipow(std::uint64_t base, unsigned e);

/// All exponent vectors in n variables with entries >= 0 and total degree
/// <= D, in lexicographic order.
std::vector<Exponents> monomials_up_to(std::size_t nvars, int degree_bound);

}  // namespace hhdx
