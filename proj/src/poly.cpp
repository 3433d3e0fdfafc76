#include "hhdx/poly.hpp"

#include <numeric>
#include <sstream>
#include <stdexcept>

namespace hhdx {

std::uint64_t ipow(std::uint64_t base, unsigned e) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < e; ++i) r *= base;
  return r;
}

MultiPoly::MultiPoly(PrimeField f, std::size_t nvars) : f_(f), n_(nvars) {
  if (nvars == 0 || nvars > kMaxVariables) throw std::invalid_argument("MultiPoly: 1..8 variables supported");
}

MultiPoly MultiPoly::constant(PrimeField f, std::size_t nvars, std::int64_t c) {
  MultiPoly p(f, nvars);
  p.add_term(Exponents(nvars, 0), f.reduce(c));
  return p;
}

MultiPoly MultiPoly::monomial(PrimeField f, Exponents e, std::int64_t c) {
  MultiPoly p(f, e.size());
  p.add_term(e, f.reduce(c));
  return p;
}

MultiPoly MultiPoly::variable(PrimeField f, std::size_t nvars, std::size_t i) {
  Exponents e(nvars, 0);
  e.at(i) = 1;
  return monomial(f, e);
}

Residue MultiPoly::coeff(const Exponents& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? 0 : it->second;
}

void MultiPoly::add_term(const Exponents& e, Residue c) {
  if (e.size() != n_) throw std::invalid_argument("MultiPoly: exponent vector has the wrong length");
  c %= f_.p();
  if (c == 0) return;
  for (int x : e)
    if (x > kMaxDegree || x < -kMaxDegree) throw std::out_of_range("MultiPoly: exponent exceeds 2^16");
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second = f_.add(it->second, c);
    if (it->second == 0) terms_.erase(it);
  }
}

void MultiPoly::check_compatible(const MultiPoly& o) const {
  if (o.n_ != n_) throw std::invalid_argument("MultiPoly: mismatched variable counts");
  if (!(o.f_ == f_)) throw std::invalid_argument("MultiPoly: mismatched fields");
}

MultiPoly MultiPoly::operator+(const MultiPoly& o) const {
  check_compatible(o);
  MultiPoly out = *this;
  for (auto& [e, c] : o.terms_) out.add_term(e, c);
  return out;
}

MultiPoly MultiPoly::operator-(const MultiPoly& o) const {
  check_compatible(o);
  MultiPoly out = *this;
  for (auto& [e, c] : o.terms_) out.add_term(e, f_.neg(c));
  return out;
}

MultiPoly MultiPoly::operator*(const MultiPoly& o) const {
  check_compatible(o);
  MultiPoly out(f_, n_);
  Exponents e(n_);
  for (auto& [a, ca] : terms_)
    for (auto& [b, cb] : o.terms_) {
      for (std::size_t i = 0; i < n_; ++i) e[i] = a[i] + b[i];
      out.add_term(e, f_.mul(ca, cb));
    }
  return out;
}

MultiPoly MultiPoly::scaled(Residue c) const {
  MultiPoly out(f_, n_);
  for (auto& [e, a] : terms_) out.add_term(e, f_.mul(a, c % f_.p()));
  return out;
}

MultiPoly MultiPoly::pow(std::uint64_t k) const {
  MultiPoly acc = constant(f_, n_, 1);
  MultiPoly base = *this;
  while (k > 0) {
    if (k & 1) acc = acc * base;
    k >>= 1;
    if (k) base = base * base;
  }
  return acc;
}

int MultiPoly::total_degree() const {
  int d = -1;
  for (auto& [e, c] : terms_) d = std::max(d, std::accumulate(e.begin(), e.end(), 0));
  return d;
}

bool MultiPoly::is_polynomial() const {
  for (auto& [e, c] : terms_)
    for (int x : e)
      if (x < 0) return false;
  return true;
}

std::string monomial_string(const Exponents& e) {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] == 0) continue;
    if (!first) os << '*';
    first = false;
    os << 'x' << (i + 1);
    if (e[i] != 1) os << '^' << e[i];
  }
  return first ? std::string("1") : os.str();
}

std::string MultiPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    if (!first) os << " + ";
    first = false;
    const auto& [e, c] = *it;
    std::string m = monomial_string(e);
    if (m == "1")
      os << c;
    else if (c == 1)
      os << m;
    else
      os << c << '*' << m;
  }
  return os.str();
}

GradedTruncation::GradedTruncation(int degree_bound) : bound_(degree_bound) {
  if (degree_bound < 0) throw std::invalid_argument("GradedTruncation: negative degree bound");
}

Truncated GradedTruncation::truncate(const MultiPoly& f) const {
  Truncated out{MultiPoly(f.field(), f.nvars()), false};
  for (auto& [e, c] : f.terms()) {
    if (std::accumulate(e.begin(), e.end(), 0) <= bound_)
      out.poly.add_term(e, c);
    else
      out.truncated = true;
  }
  return out;
}

Truncated GradedTruncation::mul(const MultiPoly& f, const MultiPoly& g) const {
  if (f.nvars() != g.nvars()) throw std::invalid_argument("GradedTruncation::mul: mismatched variable counts");
  Truncated out{MultiPoly(f.field(), f.nvars()), false};
  Exponents e(f.nvars());
  const PrimeField& F = f.field();
  for (auto& [a, ca] : f.terms())
    for (auto& [b, cb] : g.terms()) {
      int deg = 0;
      for (std::size_t i = 0; i < e.size(); ++i) {
        e[i] = a[i] + b[i];
        deg += e[i];
      }
      if (deg > bound_) {
        if (F.mul(ca, cb) != 0) out.truncated = true;
        continue;
      }
      out.poly.add_term(e, F.mul(ca, cb));
    }
  return out;
}

MultiPoly poly_mul(const MultiPoly& f, const MultiPoly& g) { return f * g; }

bool twist_membership(const MultiPoly& f, unsigned r) {
  const auto stride = static_cast<std::int64_t>(ipow(f.field().p(), r));
  for (auto& [e, c] : f.terms())
    for (int x : e)
      if (x % stride != 0) return false;
  return true;
}

MultiPoly frobenius_map(const MultiPoly& f) {
  const PrimeField& F = f.field();
  MultiPoly out(F, f.nvars());
  for (auto& [e, c] : f.terms()) {
    Exponents scaled_e = e;
    for (int& x : scaled_e) x *= static_cast<int>(F.p());
    out.add_term(scaled_e, F.pow(c, F.p()));
  }
  return out;
}

TwistSubring::TwistSubring(PrimeField f, std::size_t nvars, unsigned r)
    : f_(f), n_(nvars), r_(r), stride_(ipow(f.p(), r)) {}

std::vector<MultiPoly> TwistSubring::monomial_basis(int degree_bound) const {
  std::vector<MultiPoly> out;
  for (auto& e : monomials_up_to(n_, degree_bound)) {
    bool ok = true;
    for (int x : e) ok = ok && (static_cast<std::uint64_t>(x) % stride_ == 0);
    if (ok) out.push_back(MultiPoly::monomial(f_, e));
  }
  return out;
}

std::vector<Exponents> monomials_up_to(std::size_t nvars, int degree_bound) {
  std::vector<Exponents> out;
  if (degree_bound < 0) return out;
  Exponents e(nvars, 0);
  // odometer over the box [0, D]^n, keeping total degree <= D
  while (true) {
    if (std::accumulate(e.begin(), e.end(), 0) <= degree_bound) out.push_back(e);
    std::size_t i = nvars;
    while (i > 0) {
      --i;
      if (e[i] < degree_bound) {
        ++e[i];
        break;
      }
      e[i] = 0;
      if (i == 0) return out;
    }
  }
}

}  // namespace hhdx
