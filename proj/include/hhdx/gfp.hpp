#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace hhdx {

using Residue = std::uint32_t;

constexpr std::uint32_t kMaxPrime = 97;

bool is_prime(std::uint32_t n);

/// Arithmetic context for the prime field F_p.
///
/// Elements are plain residues in [0, p). The context is a small value type
/// and can be copied freely; it holds no mutable state.
class PrimeField {
 public:
  explicit PrimeField(std::uint32_t p);

  std::uint32_t p() const { return p_; }

  Residue reduce(std::int64_t v) const {
    std::int64_t r = v % static_cast<std::int64_t>(p_);
    return static_cast<Residue>(r < 0 ? r + p_ : r);
  }
  Residue add(Residue a, Residue b) const {
    Residue s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  Residue sub(Residue a, Residue b) const { return a >= b ? a - b : a + p_ - b; }
  Residue neg(Residue a) const { return a == 0 ? 0 : p_ - a; }
  Residue mul(Residue a, Residue b) const { return (a * b) % p_; }
  Residue pow(Residue a, std::uint64_t e) const;
  Residue inv(Residue a) const;
  Residue div(Residue a, Residue b) const { return mul(a, inv(b)); }
  /// (-1)^k as a residue.
  Residue sign(std::int64_t k) const { return (k % 2 == 0) ? 1 : p_ - 1; }

  bool operator==(const PrimeField& o) const { return p_ == o.p_; }

 private:
  std::uint32_t p_;
};

/// A residue bundled with its modulus. Used where a self-contained scalar is
/// more convenient than a (context, residue) pair.
class FpScalar {
 public:
  FpScalar(const PrimeField& f, std::int64_t v) : f_(f), v_(f.reduce(v)) {}

  Residue value() const { return v_; }
  std::uint32_t modulus() const { return f_.p(); }

  FpScalar operator+(const FpScalar& o) const { return make(f_.add(v_, o.same(f_))); }
  FpScalar operator-(const FpScalar& o) const { return make(f_.sub(v_, o.same(f_))); }
  FpScalar operator*(const FpScalar& o) const { return make(f_.mul(v_, o.same(f_))); }
  FpScalar operator/(const FpScalar& o) const { return make(f_.div(v_, o.same(f_))); }
  FpScalar operator-() const { return make(f_.neg(v_)); }
  FpScalar inverse() const { return make(f_.inv(v_)); }
  FpScalar pow(std::uint64_t e) const { return make(f_.pow(v_, e)); }

  bool operator==(const FpScalar& o) const { return f_ == o.f_ && v_ == o.v_; }

 private:
  FpScalar make(Residue v) const { return FpScalar(f_, static_cast<std::int64_t>(v)); }
  Residue same(const PrimeField& f) const {
    if (!(f == f_)) throw std::invalid_argument("FpScalar: mismatched moduli");
    return v_;
  }

  PrimeField f_;
  Residue v_;
};

/// C(m, q) mod p, digit by digit in base p. Zero when q > m.
Residue lucas_binomial(std::uint64_t m, std::uint64_t q, const PrimeField& f);

/// Generalized binomial C(m, q) mod p for signed m, using
/// C(-n, q) = (-1)^q C(n + q - 1, q).
Residue signed_binomial(std::int64_t m, std::uint64_t q, const PrimeField& f);

/// A p-semilinear endomorphism of F_q^n, stored as a matrix together with
/// the convention F(v) = M * v^(p): coordinates are raised to the p-th power
/// first, then multiplied by M. Over the prime field the twist is the
/// identity on coordinates, so the map is F_p-linear.
class SemilinearMap {
 public:
  SemilinearMap(PrimeField f, std::size_t n, std::vector<Residue> row_major);

  static SemilinearMap identity(PrimeField f, std::size_t n);
  static SemilinearMap zero(PrimeField f, std::size_t n);

  std::size_t dim() const { return n_; }
  const PrimeField& field() const { return f_; }
  Residue at(std::size_t r, std::size_t c) const { return m_[r * n_ + c]; }
  const std::vector<Residue>& entries() const { return m_; }

  std::vector<Residue> apply(const std::vector<Residue>& v) const;
  /// F after G, again semilinear: (F o G)(v) = M_F * (M_G * v^(p))^(p).
  SemilinearMap compose(const SemilinearMap& g) const;
  SemilinearMap power(std::size_t k) const;

 private:
  PrimeField f_;
  std::size_t n_;
  std::vector<Residue> m_;
};

struct FittingDecomposition {
  /// Basis of ker F^N, the part where F is nilpotent.
  std::vector<std::vector<Residue>> nilpotent;
  /// Basis of im F^N, the part where F is bijective.
  std::vector<std::vector<Residue>> semisimple;
};

FittingDecomposition fitting_decomposition(const SemilinearMap& F);

}  // namespace hhdx
