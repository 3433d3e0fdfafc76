#include "hhdx/gfp.hpp"

#include "hhdx/linalg.hpp"

namespace hhdx {

bool is_prime(std::uint32_t n) {
  if (n < 2) return false;
  for (std::uint32_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

PrimeField::PrimeField(std::uint32_t p) : p_(p) {
  if (!is_prime(p)) throw std::invalid_argument("PrimeField: " + std::to_string(p) + " is not prime");
  if (p > kMaxPrime) throw std::invalid_argument("PrimeField: p must be at most 97");
}

Residue PrimeField::pow(Residue a, std::uint64_t e) const {
  Residue result = 1 % p_;
  Residue base = a % p_;
  while (e > 0) {
    if (e & 1) result = mul(result, base);
    base = mul(base, base);
    e >>= 1;
  }
  return result;
}

Residue PrimeField::inv(Residue a) const {
  if (a % p_ == 0) throw std::domain_error("PrimeField: division by zero");
  return pow(a, p_ - 2);
}

Residue lucas_binomial(std::uint64_t m, std::uint64_t q, const PrimeField& f) {
  const std::uint64_t p = f.p();
  Residue result = 1;
  while (q > 0 || m > 0) {
    std::uint64_t md = m % p;
    std::uint64_t qd = q % p;
    if (qd > md) return 0;
    // small binomial C(md, qd) with md < p <= 97
    Residue num = 1, den = 1;
    for (std::uint64_t i = 0; i < qd; ++i) {
      num = f.mul(num, static_cast<Residue>(md - i));
      den = f.mul(den, static_cast<Residue>(i + 1));
    }
    result = f.mul(result, f.div(num, den));
    m /= p;
    q /= p;
  }
  return result;
}

Residue signed_binomial(std::int64_t m, std::uint64_t q, const PrimeField& f) {
  if (m >= 0) return lucas_binomial(static_cast<std::uint64_t>(m), q, f);
  std::uint64_t n = static_cast<std::uint64_t>(-m);
  Residue c = lucas_binomial(n + q - 1, q, f);
  return (q % 2 == 0) ? c : f.neg(c);
}

SemilinearMap::SemilinearMap(PrimeField f, std::size_t n, std::vector<Residue> row_major)
    : f_(f), n_(n), m_(std::move(row_major)) {
  if (m_.size() != n * n) throw std::invalid_argument("SemilinearMap: expected n*n entries");
  for (auto& e : m_) e %= f_.p();
}

SemilinearMap SemilinearMap::identity(PrimeField f, std::size_t n) {
  std::vector<Residue> m(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) m[i * n + i] = 1;
  return {f, n, std::move(m)};
}

SemilinearMap SemilinearMap::zero(PrimeField f, std::size_t n) {
  return {f, n, std::vector<Residue>(n * n, 0)};
}

std::vector<Residue> SemilinearMap::apply(const std::vector<Residue>& v) const {
  if (v.size() != n_) throw std::invalid_argument("SemilinearMap::apply: dimension mismatch");
  std::vector<Residue> twisted(n_);
  for (std::size_t i = 0; i < n_; ++i) twisted[i] = f_.pow(v[i], f_.p());
  std::vector<Residue> out(n_, 0);
  for (std::size_t r = 0; r < n_; ++r)
    for (std::size_t c = 0; c < n_; ++c) out[r] = f_.add(out[r], f_.mul(at(r, c), twisted[c]));
  return out;
}

SemilinearMap SemilinearMap::compose(const SemilinearMap& g) const {
  if (g.n_ != n_) throw std::invalid_argument("SemilinearMap::compose: dimension mismatch");
  // M_F * twist(M_G): the twist raises G's entries to the p-th power.
  std::vector<Residue> out(n_ * n_, 0);
  for (std::size_t r = 0; r < n_; ++r)
    for (std::size_t k = 0; k < n_; ++k) {
      Residue a = at(r, k);
      if (a == 0) continue;
      for (std::size_t c = 0; c < n_; ++c)
        out[r * n_ + c] = f_.add(out[r * n_ + c], f_.mul(a, f_.pow(g.at(k, c), f_.p())));
    }
  return {f_, n_, std::move(out)};
}

SemilinearMap SemilinearMap::power(std::size_t k) const {
  SemilinearMap acc = identity(f_, n_);
  for (std::size_t i = 0; i < k; ++i) acc = compose(acc);
  return acc;
}

FittingDecomposition fitting_decomposition(const SemilinearMap& F) {
  const std::size_t n = F.dim();
  FittingDecomposition out;
  if (n == 0) return out;
  // F^N is p^N-semilinear; its kernel and image are those of the matrix
  // product because the coordinate twist is a bijection.
  SemilinearMap fn = F.power(n);
  FpMatrix m(F.field(), n, n, fn.entries());
  auto rki = rank_kernel_image(m);
  out.nilpotent = rki.kernel;
  out.semisimple = rki.image;
  return out;
}

}  // namespace hhdx
