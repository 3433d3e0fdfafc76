#include "hhdx/dpdo.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <set>
#include <sstream>

namespace hhdx {

DPDOperator::DPDOperator(PrimeField f, std::size_t nvars) : f_(f), n_(nvars) {
  if (nvars == 0 || nvars > kMaxVariables) throw std::invalid_argument("DPDOperator: 1..8 variables supported");
}

DPDOperator DPDOperator::identity(PrimeField f, std::size_t nvars) {
  DPDOperator op(f, nvars);
  op.add_term(Exponents(nvars, 0), DPIndex(nvars, 0), 1);
  return op;
}

DPDOperator DPDOperator::from_poly(const MultiPoly& g) {
  DPDOperator op(g.field(), g.nvars());
  for (auto& [e, c] : g.terms()) op.add_term(e, DPIndex(g.nvars(), 0), c);
  return op;
}

DPDOperator DPDOperator::coordinate(PrimeField f, std::size_t nvars, std::size_t i) {
  return from_poly(MultiPoly::variable(f, nvars, i));
}

DPDOperator DPDOperator::divided_power(PrimeField f, std::size_t nvars, std::size_t i, int q) {
  DPIndex b(nvars, 0);
  b.at(i) = q;
  return monomial(f, Exponents(nvars, 0), b);
}

DPDOperator DPDOperator::monomial(PrimeField f, Exponents a, DPIndex b, std::int64_t c) {
  DPDOperator op(f, a.size());
  op.add_term(a, b, f.reduce(c));
  return op;
}

Residue DPDOperator::coeff(const DPKey& k) const {
  auto it = terms_.find(k);
  return it == terms_.end() ? 0 : it->second;
}

int divided_power_cap(const PrimeField& f) { return static_cast<int>(ipow(f.p(), 4)); }

void DPDOperator::add_term(const Exponents& a, const DPIndex& b, Residue c) {
  if (a.size() != n_ || b.size() != n_) throw std::invalid_argument("DPDOperator: index vectors have the wrong length");
  c %= f_.p();
  if (c == 0) return;
  const int cap = divided_power_cap(f_);
  for (int q : b) {
    if (q < 0) throw std::invalid_argument("DPDOperator: negative divided-power index");
    if (q > cap) throw CapacityError("DPDOperator: divided-power index " + std::to_string(q) + " exceeds cap p^4");
  }
  auto [it, inserted] = terms_.try_emplace(DPKey{a, b}, c);
  if (!inserted) {
    it->second = f_.add(it->second, c);
    if (it->second == 0) terms_.erase(it);
  }
}

void DPDOperator::check_compatible(const DPDOperator& o) const {
  if (o.n_ != n_) throw std::invalid_argument("DPDOperator: mismatched variable counts");
  if (!(o.f_ == f_)) throw std::invalid_argument("DPDOperator: mismatched fields");
}

DPDOperator DPDOperator::operator+(const DPDOperator& o) const {
  check_compatible(o);
  DPDOperator out = *this;
  for (auto& [k, c] : o.terms_) out.add_term(k.first, k.second, c);
  return out;
}

DPDOperator DPDOperator::operator-(const DPDOperator& o) const {
  check_compatible(o);
  DPDOperator out = *this;
  for (auto& [k, c] : o.terms_) out.add_term(k.first, k.second, f_.neg(c));
  return out;
}

DPDOperator DPDOperator::operator*(const DPDOperator& o) const { return dpdo_mul(*this, o); }

DPDOperator DPDOperator::scaled(Residue c) const {
  DPDOperator out(f_, n_);
  for (auto& [k, a] : terms_) out.add_term(k.first, k.second, f_.mul(a, c % f_.p()));
  return out;
}

int DPDOperator::poly_degree() const {
  int d = -1;
  for (auto& [k, c] : terms_) d = std::max(d, std::accumulate(k.first.begin(), k.first.end(), 0));
  return d;
}

std::string DPDOperator::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [key, c] = *it;
    std::string mono;
    for (std::size_t i = 0; i < n_; ++i) {
      if (key.first[i] == 0) continue;
      if (!mono.empty()) mono += '*';
      mono += "x" + std::to_string(i + 1);
      if (key.first[i] != 1) mono += "^" + std::to_string(key.first[i]);
    }
    for (std::size_t i = 0; i < n_; ++i) {
      if (key.second[i] == 0) continue;
      if (!mono.empty()) mono += '*';
      mono += "d" + std::to_string(i + 1) + "^(" + std::to_string(key.second[i]) + ")";
    }
    if (!first) os << " + ";
    first = false;
    if (mono.empty())
      os << c;
    else if (c == 1)
      os << mono;
    else
      os << c << '*' << mono;
  }
  return os.str();
}

// ---------------------------------------------------------------------------

namespace {

struct Factor {
  Residue coeff;
  int exponent;
  int dp;
};

}  // namespace

DPDOperator dpdo_mul(const DPDOperator& A, const DPDOperator& B) {
  if (A.nvars() != B.nvars()) throw std::invalid_argument("dpdo_mul: mismatched variable counts");
  if (!(A.field() == B.field())) throw std::invalid_argument("dpdo_mul: mismatched fields");
  const PrimeField& f = A.field();
  const std::size_t n = A.nvars();
  // Accumulate without the cap; cancellations may bring indices back under it.
  std::map<DPKey, Residue> acc;
  std::vector<std::vector<Factor>> per_var(n);
  Exponents a(n);
  DPIndex b(n);
  for (auto& [ka, ca] : A.terms())
    for (auto& [kb, cb] : B.terms()) {
      // x^a d^(b) x^c d^(d), one variable at a time
      bool zero = false;
      for (std::size_t i = 0; i < n; ++i) {
        per_var[i].clear();
        const int q = ka.second[i];
        const int m = kb.first[i];
        const int d = kb.second[i];
        const int jmax = (m >= 0) ? std::min(q, m) : q;
        for (int j = 0; j <= jmax; ++j) {
          Residue c1 = signed_binomial(m, static_cast<std::uint64_t>(j), f);
          if (c1 == 0) continue;
          Residue c2 = lucas_binomial(static_cast<std::uint64_t>(q - j + d), static_cast<std::uint64_t>(d), f);
          if (c2 == 0) continue;
          per_var[i].push_back({f.mul(c1, c2), ka.first[i] + m - j, q - j + d});
        }
        if (per_var[i].empty()) {
          zero = true;
          break;
        }
      }
      if (zero) continue;
      // cartesian product over variables
      std::vector<std::size_t> idx(n, 0);
      while (true) {
        Residue c = f.mul(ca, cb);
        for (std::size_t i = 0; i < n; ++i) {
          const Factor& fa = per_var[i][idx[i]];
          c = f.mul(c, fa.coeff);
          a[i] = fa.exponent;
          b[i] = fa.dp;
        }
        auto [it, inserted] = acc.try_emplace(DPKey{a, b}, c);
        if (!inserted) it->second = f.add(it->second, c);
        std::size_t i = 0;
        while (i < n && ++idx[i] == per_var[i].size()) idx[i++] = 0;
        if (i == n) break;
      }
    }
  DPDOperator out(f, n);
  for (auto& [k, c] : acc)
    if (c != 0) out.add_term(k.first, k.second, c);
  return out;
}

MultiPoly dpdo_act(const DPDOperator& A, const MultiPoly& g) {
  if (A.nvars() != g.nvars()) throw std::invalid_argument("dpdo_act: mismatched variable counts");
  const PrimeField& f = A.field();
  const std::size_t n = A.nvars();
  MultiPoly out(f, n);
  Exponents e(n);
  for (auto& [k, ca] : A.terms())
    for (auto& [m, cm] : g.terms()) {
      Residue c = f.mul(ca, cm);
      for (std::size_t i = 0; i < n && c != 0; ++i) {
        c = f.mul(c, signed_binomial(m[i], static_cast<std::uint64_t>(k.second[i]), f));
        e[i] = m[i] - k.second[i] + k.first[i];
      }
      if (c != 0) out.add_term(e, c);
    }
  return out;
}

DPDOperator dpdo_commutator(const DPDOperator& A, const DPDOperator& B) {
  return dpdo_mul(A, B) - dpdo_mul(B, A);
}

int order_of(const DPDOperator& A) {
  int order = 0;
  for (auto& [k, c] : A.terms()) order = std::max(order, std::accumulate(k.second.begin(), k.second.end(), 0));
  return order;
}

bool is_order_le(const DPDOperator& A, int m, int degree_bound) {
  if (m < 0) return A.is_zero();
  std::vector<DPDOperator> coords;
  for (auto& e : monomials_up_to(A.nvars(), degree_bound)) {
    if (std::accumulate(e.begin(), e.end(), 0) == 0) continue;
    coords.push_back(DPDOperator::from_poly(MultiPoly::monomial(A.field(), e)));
  }
  std::vector<DPDOperator> level{A};
  for (int step = 0; step <= m; ++step) {
    std::set<std::map<DPKey, Residue>> seen;
    std::vector<DPDOperator> next;
    for (auto& X : level)
      for (auto& c : coords) {
        auto y = dpdo_commutator(c, X);
        if (y.is_zero()) continue;
        if (seen.insert(y.terms()).second) next.push_back(std::move(y));
        if (next.size() > 200000) throw CapacityError("is_order_le: too many iterated commutators");
      }
    level = std::move(next);
    if (level.empty()) return true;
  }
  return false;
}

unsigned centrality_depth(const DPDOperator& A) {
  int max_dp = 0;
  for (auto& [k, c] : A.terms())
    for (int q : k.second) max_dp = std::max(max_dp, q);
  const PrimeField& f = A.field();
  for (unsigned r = 0;; ++r) {
    bool central = true;
    for (std::size_t i = 0; i < A.nvars() && central; ++i) {
      Exponents e(A.nvars(), 0);
      e[i] = static_cast<int>(ipow(f.p(), r));
      auto y = DPDOperator::from_poly(MultiPoly::monomial(f, e));
      central = dpdo_commutator(A, y).is_zero();
    }
    if (central) return r;
    if (ipow(f.p(), r) > static_cast<std::uint64_t>(max_dp) + 1)
      throw std::logic_error("centrality_depth: commutator with a large p-power did not vanish");
  }
}

// ---------------------------------------------------------------------------

namespace {

std::vector<Exponents> box_basis(std::size_t n, int side) {
  std::vector<Exponents> out;
  Exponents e(n, 0);
  while (true) {
    out.push_back(e);
    std::size_t i = n;
    while (i > 0) {
      --i;
      if (e[i] + 1 < side) {
        ++e[i];
        break;
      }
      e[i] = 0;
      if (i == 0) return out;
    }
  }
}

int floor_div(int a, int b) {
  int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

MatrixRealization matrix_realize(const DPDOperator& A, unsigned r, int degree_bound) {
  if (centrality_depth(A) > r)
    throw std::invalid_argument("matrix_realize: operator does not commute with the depth-" + std::to_string(r) +
                                " twisted coordinates");
  const PrimeField& f = A.field();
  const std::size_t n = A.nvars();
  const int stride = static_cast<int>(ipow(f.p(), r));
  MatrixRealization out;
  out.depth = r;
  out.basis = box_basis(n, stride);
  out.size = out.basis.size();
  std::map<Exponents, std::size_t> index;
  for (std::size_t i = 0; i < out.basis.size(); ++i) index[out.basis[i]] = i;
  out.entries.assign(out.size * out.size, MultiPoly(f, n));
  for (std::size_t col = 0; col < out.size; ++col) {
    auto image = dpdo_act(A, MultiPoly::monomial(f, out.basis[col]));
    for (auto& [e, c] : image.terms()) {
      Exponents rem(n), twisted(n);
      int deg = 0;
      for (std::size_t i = 0; i < n; ++i) {
        int k = floor_div(e[i], stride);
        rem[i] = e[i] - k * stride;
        twisted[i] = k * stride;
        deg += twisted[i];
      }
      if (deg > degree_bound) {
        out.truncated = true;
        continue;
      }
      out.entries[index.at(rem) * out.size + col].add_term(twisted, c);
    }
  }
  return out;
}

MatrixRealization realization_product(const MatrixRealization& a, const MatrixRealization& b, int degree_bound) {
  if (a.size != b.size || a.depth != b.depth) throw std::invalid_argument("realization_product: shape mismatch");
  MatrixRealization out;
  out.depth = a.depth;
  out.size = a.size;
  out.basis = a.basis;
  out.truncated = a.truncated || b.truncated;
  const MultiPoly zero(a.entries.front().field(), a.entries.front().nvars());
  out.entries.assign(a.size * a.size, zero);
  GradedTruncation trunc(degree_bound);
  for (std::size_t i = 0; i < a.size; ++i)
    for (std::size_t j = 0; j < a.size; ++j) {
      MultiPoly s = zero;
      for (std::size_t k = 0; k < a.size; ++k) {
        auto t = trunc.mul(a.at(i, k), b.at(k, j));
        out.truncated = out.truncated || t.truncated;
        s = s + t.poly;
      }
      out.entries[i * a.size + j] = s;
    }
  return out;
}

DPDOperator operator_from_action(PrimeField f, std::size_t n, int max_order,
                                 const std::function<MultiPoly(const Exponents&)>& action) {
  DPDOperator out(f, n);
  // coefficient polynomials h_l, processed by increasing total degree
  std::map<Exponents, MultiPoly> h;
  auto levels = monomials_up_to(n, max_order);
  std::stable_sort(levels.begin(), levels.end(), [](const Exponents& x, const Exponents& y) {
    return std::accumulate(x.begin(), x.end(), 0) < std::accumulate(y.begin(), y.end(), 0);
  });
  for (const auto& l : levels) {
    MultiPoly value = action(l);
    for (auto& [lp, hp] : h) {
      bool below = true;
      Residue c = 1;
      Exponents diff(n);
      for (std::size_t i = 0; i < n && below; ++i) {
        if (lp[i] > l[i]) below = false;
        diff[i] = l[i] - lp[i];
        if (below) c = f.mul(c, lucas_binomial(static_cast<std::uint64_t>(l[i]), static_cast<std::uint64_t>(lp[i]), f));
      }
      if (!below || c == 0) continue;
      value = value - (hp * MultiPoly::monomial(f, diff)).scaled(c);
    }
    for (auto& [e, c] : value.terms()) out.add_term(e, l, c);
    h.emplace(l, std::move(value));
  }
  return out;
}

MoritaCompression morita_compress(const DPDOperator& A, unsigned r, int degree_bound) {
  const PrimeField& f = A.field();
  const std::size_t n = A.nvars();
  const int stride = static_cast<int>(ipow(f.p(), r));
  const int window = degree_bound / stride;
  auto action = [&](const Exponents& k) {
    Exponents e(n);
    for (std::size_t i = 0; i < n; ++i) e[i] = k[i] * stride;
    auto image = dpdo_act(A, MultiPoly::monomial(f, e));
    MultiPoly projected(f, n);
    for (auto& [m, c] : image.terms()) {
      Exponents y(n);
      bool keep = true;
      for (std::size_t i = 0; i < n && keep; ++i) {
        if (m[i] % stride != 0) keep = false;
        y[i] = m[i] / stride;
      }
      if (keep) projected.add_term(y, c);
    }
    return projected;
  };
  MoritaCompression out{operator_from_action(f, n, window, action), false};
  out.certified = order_of(A) / stride <= window;
  return out;
}

// ---------------------------------------------------------------------------

namespace {

class OperatorParser {
 public:
  OperatorParser(PrimeField f, std::size_t n, const std::string& s) : f_(f), n_(n), s_(s) {}

  DPDOperator parse() {
    DPDOperator out(f_, n_);
    skip_ws();
    int sign = 1;
    if (peek() == '-') {
      sign = -1;
      ++pos_;
    } else if (peek() == '+') {
      ++pos_;
    }
    while (true) {
      parse_term(out, sign);
      skip_ws();
      if (pos_ >= s_.size()) break;
      char c = s_[pos_++];
      if (c == '+')
        sign = 1;
      else if (c == '-')
        sign = -1;
      else
        fail("expected '+' or '-'");
    }
    return out;
  }

 private:
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("parse_operator: " + what + " at position " + std::to_string(pos_) + " in '" + s_ + "'");
  }
  long parse_int() {
    skip_ws();
    bool neg = false;
    if (peek() == '-') {
      neg = true;
      ++pos_;
    }
    if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected an integer");
    long v = 0;
    while (std::isdigit(static_cast<unsigned char>(peek()))) v = v * 10 + (s_[pos_++] - '0');
    return neg ? -v : v;
  }
  std::size_t parse_var_index() {
    if (std::isdigit(static_cast<unsigned char>(peek()))) {
      long i = parse_int();
      if (i < 1 || static_cast<std::size_t>(i) > n_) fail("variable index out of range");
      return static_cast<std::size_t>(i - 1);
    }
    if (n_ != 1) fail("variable index required");
    return 0;
  }
  void parse_term(DPDOperator& out, int sign) {
    Exponents a(n_, 0);
    DPIndex b(n_, 0);
    std::int64_t coeff = sign;
    bool any = false;
    while (true) {
      skip_ws();
      char c = peek();
      if (std::isdigit(static_cast<unsigned char>(c))) {
        coeff *= parse_int();
      } else if (c == 'x' || c == 't') {
        ++pos_;
        std::size_t i = (c == 't') ? 0 : parse_var_index();
        int e = 1;
        if (peek() == '^') {
          ++pos_;
          e = static_cast<int>(parse_int());
        }
        a[i] += e;
      } else if (c == 'd') {
        ++pos_;
        std::size_t i = parse_var_index();
        int q = 1;
        if (peek() == '^') {
          ++pos_;
          if (peek() != '(') fail("expected '(' after d^");
          ++pos_;
          q = static_cast<int>(parse_int());
          skip_ws();
          if (peek() != ')') fail("expected ')'");
          ++pos_;
        }
        if (b[i] != 0) fail("repeated divided power of one variable in a term");
        b[i] = q;
      } else {
        fail("unexpected character");
      }
      any = true;
      skip_ws();
      if (peek() != '*') break;
      ++pos_;
    }
    if (!any) fail("empty term");
    out.add_term(a, b, f_.reduce(coeff));
  }

  PrimeField f_;
  std::size_t n_;
  std::string s_;
  std::size_t pos_ = 0;
};

}  // namespace

DPDOperator parse_operator(PrimeField f, std::size_t nvars, const std::string& text) {
  return OperatorParser(f, nvars, text).parse();
}

}  // namespace hhdx
