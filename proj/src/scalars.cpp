#include "qgcb/scalars.hpp"

#include <algorithm>
#include <sstream>

#include "qgcb/errors.hpp"

namespace qgcb {

namespace {

// Dense polynomials in Z[q], ascending coefficients, no trailing zeros.
using Dense = std::vector<Integer>;

void trim(Dense& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

int degree(const Dense& p) { return static_cast<int>(p.size()) - 1; }

Integer dense_content(const Dense& p) {
  Integer g = 0;
  for (const auto& c : p) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    if (g == 1) break;
  }
  return g;
}

void divide_by(Dense& p, const Integer& c) {
  for (auto& x : p) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), c.get_mpz_t());
}

Dense primitive(Dense p) {
  if (p.empty()) return p;
  Integer c = dense_content(p);
  if (p.back() < 0) c = -c;
  divide_by(p, c);
  return p;
}

// lc(b)^k * a mod b.
Dense pseudo_remainder(Dense a, const Dense& b) {
  const Integer& lb = b.back();
  while (!a.empty() && degree(a) >= degree(b)) {
    Integer la = a.back();
    int shift = degree(a) - degree(b);
    for (auto& x : a) x *= lb;
    for (int k = 0; k <= degree(b); ++k) a[k + shift] -= la * b[k];
    trim(a);
  }
  return a;
}

Dense dense_gcd(Dense a, Dense b) {
  if (a.empty()) {
    if (!b.empty() && b.back() < 0)
      for (auto& x : b) x = -x;
    return b;
  }
  if (b.empty()) return dense_gcd(b, a);
  Integer c = gcd(dense_content(a), dense_content(b));
  a = primitive(a);
  b = primitive(b);
  if (degree(a) < degree(b)) std::swap(a, b);
  while (!b.empty()) {
    Dense r = pseudo_remainder(a, b);
    a = std::move(b);
    b = primitive(std::move(r));
  }
  a = primitive(a);
  for (auto& x : a) x *= c;
  return a;
}

// Exact quotient a / b in Z[q], or nullopt.
std::optional<Dense> dense_divide(const Dense& a, const Dense& b) {
  if (a.empty()) return Dense{};
  if (degree(a) < degree(b)) return std::nullopt;
  Dense rem = a;
  Dense quot(degree(a) - degree(b) + 1);
  const Integer& lb = b.back();
  for (int k = degree(a) - degree(b); k >= 0; --k) {
    const Integer& top = rem[k + degree(b)];
    if (top == 0) continue;
    if (!mpz_divisible_p(top.get_mpz_t(), lb.get_mpz_t())) return std::nullopt;
    Integer c;
    mpz_divexact(c.get_mpz_t(), top.get_mpz_t(), lb.get_mpz_t());
    quot[k] = c;
    for (int j = 0; j <= degree(b); ++j) rem[k + j] -= c * b[j];
  }
  trim(rem);
  if (!rem.empty()) return std::nullopt;
  trim(quot);
  return quot;
}

// p = q^{shift} * dense, dense has nonzero constant term.
std::pair<int, Dense> to_dense(const LaurentPoly& p) {
  if (p.is_zero()) return {0, {}};
  int lo = p.min_exp();
  Dense d(p.max_exp() - lo + 1);
  for (const auto& [e, c] : p.terms()) d[e - lo] = c;
  return {lo, d};
}

LaurentPoly from_dense(const Dense& d, int shift) {
  std::vector<LaurentPoly::Term> t;
  for (std::size_t k = 0; k < d.size(); ++k)
    if (d[k] != 0) t.emplace_back(static_cast<int>(k) + shift, d[k]);
  return LaurentPoly::from_terms(std::move(t));
}

}  // namespace

// ---------------------------------------------------------------- LaurentPoly

LaurentPoly::LaurentPoly(long c) {
  if (c != 0) terms_.emplace_back(0, Integer(c));
}

LaurentPoly::LaurentPoly(const Integer& c) {
  if (c != 0) terms_.emplace_back(0, c);
}

LaurentPoly LaurentPoly::from_terms(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return a.first < b.first; });
  LaurentPoly p;
  for (auto& t : terms) {
    if (!p.terms_.empty() && p.terms_.back().first == t.first) {
      p.terms_.back().second += t.second;
      if (p.terms_.back().second == 0) p.terms_.pop_back();
    } else if (t.second != 0) {
      p.terms_.push_back(std::move(t));
    }
  }
  return p;
}

LaurentPoly LaurentPoly::monomial(const Integer& c, int exponent) {
  LaurentPoly p;
  if (c != 0) p.terms_.emplace_back(exponent, c);
  return p;
}

LaurentPoly LaurentPoly::q(int e) { return monomial(Integer(1), e); }

bool LaurentPoly::is_one() const {
  return terms_.size() == 1 && terms_[0].first == 0 && terms_[0].second == 1;
}

Integer LaurentPoly::coeff(int e) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), e,
                             [](const Term& t, int x) { return t.first < x; });
  if (it != terms_.end() && it->first == e) return it->second;
  return 0;
}

LaurentPoly LaurentPoly::bar() const {
  LaurentPoly p;
  p.terms_.reserve(terms_.size());
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it)
    p.terms_.emplace_back(-it->first, it->second);
  return p;
}

LaurentPoly LaurentPoly::shifted(int k) const {
  LaurentPoly p = *this;
  for (auto& t : p.terms_) t.first += k;
  return p;
}

LaurentPoly LaurentPoly::operator-() const {
  LaurentPoly p = *this;
  for (auto& t : p.terms_) t.second = -t.second;
  return p;
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = o;
  std::vector<Term> out;
  out.reserve(terms_.size() + o.terms_.size());
  auto a = terms_.begin();
  auto b = o.terms_.begin();
  while (a != terms_.end() || b != o.terms_.end()) {
    if (b == o.terms_.end() || (a != terms_.end() && a->first < b->first)) {
      out.push_back(std::move(*a++));
    } else if (a == terms_.end() || b->first < a->first) {
      out.push_back(*b++);
    } else {
      Integer s = a->second + b->second;
      if (s != 0) out.emplace_back(a->first, std::move(s));
      ++a;
      ++b;
    }
  }
  terms_ = std::move(out);
  return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& o) { return *this += -o; }

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  if (a.terms_.size() == 1 && a.terms_[0].second == 1) return b.shifted(a.terms_[0].first);
  if (b.terms_.size() == 1 && b.terms_[0].second == 1) return a.shifted(b.terms_[0].first);
  int lo = a.min_exp() + b.min_exp();
  std::vector<Integer> acc(a.max_exp() + b.max_exp() - lo + 1);
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) {
      Integer& slot = acc[ea + eb - lo];
      mpz_addmul(slot.get_mpz_t(), ca.get_mpz_t(), cb.get_mpz_t());
    }
  LaurentPoly p;
  for (std::size_t k = 0; k < acc.size(); ++k)
    if (acc[k] != 0) p.terms_.emplace_back(static_cast<int>(k) + lo, std::move(acc[k]));
  return p;
}

LaurentPoly& LaurentPoly::operator*=(const LaurentPoly& o) { return *this = *this * o; }

LaurentPoly& LaurentPoly::operator*=(const Integer& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.second *= c;
  return *this;
}

bool LaurentPoly::is_unit() const {
  return terms_.size() == 1 && (terms_[0].second == 1 || terms_[0].second == -1);
}

bool LaurentPoly::in_strictly_negative_part() const { return is_zero() || max_exp() < 0; }

bool LaurentPoly::in_nonpositive_part() const { return is_zero() || max_exp() <= 0; }

bool LaurentPoly::has_nonnegative_coeffs() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const Term& t) { return t.second > 0; });
}

Integer LaurentPoly::eval_at_one() const {
  Integer s = 0;
  for (const auto& t : terms_) s += t.second;
  return s;
}

Integer LaurentPoly::content() const {
  Integer g = 0;
  for (const auto& t : terms_) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.second.get_mpz_t());
  return g;
}

LaurentPoly LaurentPoly::negative_part() const {
  LaurentPoly p;
  for (const auto& t : terms_)
    if (t.first < 0) p.terms_.push_back(t);
  return p;
}

std::string LaurentPoly::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    Integer mag = abs(c);
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    if (e == 0) {
      os << mag;
      continue;
    }
    if (mag != 1) os << mag << "*";
    os << "q";
    if (e != 1) os << "^" << e;
  }
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const LaurentPoly& p) { return os << p.to_string(); }

std::optional<LaurentPoly> divide_exact(const LaurentPoly& a, const LaurentPoly& b) {
  if (b.is_zero()) throw DomainError("divide_exact: division by zero");
  if (a.is_zero()) return LaurentPoly{};
  if (b.terms().size() == 1) {
    const auto& [eb, cb] = b.terms()[0];
    std::vector<LaurentPoly::Term> t;
    for (const auto& [e, c] : a.terms()) {
      if (!mpz_divisible_p(c.get_mpz_t(), cb.get_mpz_t())) return std::nullopt;
      Integer x;
      mpz_divexact(x.get_mpz_t(), c.get_mpz_t(), cb.get_mpz_t());
      t.emplace_back(e - eb, std::move(x));
    }
    return LaurentPoly::from_terms(std::move(t));
  }
  auto [sa, da] = to_dense(a);
  auto [sb, db] = to_dense(b);
  auto quot = dense_divide(da, db);
  if (!quot) return std::nullopt;
  return from_dense(*quot, sa - sb);
}

LaurentPoly quantum_integer(int n, int d) {
  if (n < 0) throw DomainError("quantum_integer: n must be nonnegative");
  if (d <= 0) throw DomainError("quantum_integer: d must be positive");
  std::vector<LaurentPoly::Term> t;
  for (int k = 0; k < n; ++k) t.emplace_back(d * (n - 1 - 2 * k), Integer(1));
  return LaurentPoly::from_terms(std::move(t));
}

LaurentPoly signed_quantum_integer(int n, int d) {
  return n >= 0 ? quantum_integer(n, d) : -quantum_integer(-n, d);
}

LaurentPoly quantum_factorial(int n, int d) {
  if (n < 0) throw DomainError("quantum_factorial: n must be nonnegative");
  LaurentPoly p(1);
  for (int k = 2; k <= n; ++k) p *= quantum_integer(k, d);
  return p;
}

LaurentPoly quantum_binomial(int m, int t, int d) {
  if (t < 0 || t > m) throw DomainError("quantum_binomial: need 0 <= t <= m");
  LaurentPoly num(1);
  LaurentPoly den(1);
  for (int k = 0; k < t; ++k) {
    num *= quantum_integer(m - k, d);
    den *= quantum_integer(k + 1, d);
  }
  auto r = divide_exact(num, den);
  if (!r) throw InvariantViolation("quantum_binomial: inexact division");
  return *r;
}

LaurentPoly bar_split(const LaurentPoly& gamma) {
  if (!(gamma.bar() == -gamma))
    throw InvariantViolation("bar_split: input is not bar-antisymmetric: " + gamma.to_string());
  return gamma.negative_part();
}

// ---------------------------------------------------------------- RatFunc

RatFunc::RatFunc(LaurentPoly num, LaurentPoly den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw DomainError("RatFunc: zero denominator");
  canonicalize();
}

void RatFunc::canonicalize() {
  if (num_.is_zero()) {
    den_ = LaurentPoly(1);
    return;
  }
  if (den_.is_one()) return;
  auto [sa, na] = to_dense(num_);
  auto [sb, db] = to_dense(den_);
  Dense g = dense_gcd(na, db);
  if (!(g.size() == 1 && g[0] == 1)) {
    na = *dense_divide(na, g);
    db = *dense_divide(db, g);
  }
  if (db.back() < 0) {
    for (auto& x : na) x = -x;
    for (auto& x : db) x = -x;
  }
  num_ = from_dense(na, sa - sb);
  den_ = from_dense(db, 0);
}

std::optional<LaurentPoly> RatFunc::to_laurent() const {
  if (is_laurent()) return num_;
  return std::nullopt;
}

RatFunc RatFunc::bar() const { return RatFunc(num_.bar(), den_.bar()); }

RatFunc RatFunc::inverse() const {
  if (is_zero()) throw DomainError("RatFunc: division by zero");
  return RatFunc(den_, num_);
}

RatFunc RatFunc::operator-() const {
  RatFunc r = *this;
  r.num_ = -r.num_;
  return r;
}

RatFunc& RatFunc::operator+=(const RatFunc& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = o;
  if (den_ == o.den_) {
    num_ += o.num_;
    if (!den_.is_one()) canonicalize();
    else if (num_.is_zero()) den_ = LaurentPoly(1);
    return *this;
  }
  num_ = num_ * o.den_ + o.num_ * den_;
  den_ = den_ * o.den_;
  canonicalize();
  return *this;
}

RatFunc& RatFunc::operator-=(const RatFunc& o) { return *this += -o; }

RatFunc& RatFunc::operator*=(const RatFunc& o) {
  if (is_zero()) return *this;
  if (o.is_zero()) return *this = RatFunc();
  num_ *= o.num_;
  if (!o.den_.is_one()) den_ *= o.den_;
  canonicalize();
  return *this;
}

RatFunc& RatFunc::operator/=(const RatFunc& o) { return *this *= o.inverse(); }

std::map<int, Rational> RatFunc::expand_at_infinity(int min_degree) const {
  std::map<int, Rational> out;
  if (is_zero()) return out;
  const int top = den_.max_exp();
  const Rational lead(den_.leading_coeff());
  std::map<int, Rational> rem;
  for (const auto& [e, c] : num_.terms()) rem[e] = Rational(c);
  for (int k = num_.max_exp() - top; k >= min_degree; --k) {
    auto it = rem.find(k + top);
    if (it == rem.end() || sgn(it->second) == 0) continue;
    Rational c = it->second / lead;
    out[k] = c;
    for (const auto& [e, dc] : den_.terms()) {
      Rational& slot = rem[k + e];
      slot -= c * Rational(dc);
    }
  }
  return out;
}

std::string RatFunc::to_string() const {
  if (is_laurent()) return num_.to_string();
  return "(" + num_.to_string() + ")/(" + den_.to_string() + ")";
}

std::ostream& operator<<(std::ostream& os, const RatFunc& r) { return os << r.to_string(); }

}  // namespace qgcb
