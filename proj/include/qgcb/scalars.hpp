#pragma once

// Exact scalars: Laurent polynomials over Z (the ring A = Z[q,q^-1]) and
// their fraction field Q(q). Both are immutable-by-convention value types.

#include <gmpxx.h>

#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace qgcb {

using Integer = mpz_class;
using Rational = mpq_class;

class LaurentPoly {
 public:
  using Term = std::pair<int, Integer>;

  LaurentPoly() = default;
  LaurentPoly(long c);  // NOLINT: constants convert implicitly
  explicit LaurentPoly(const Integer& c);

  /// Builds from arbitrary (exponent, coefficient) pairs; duplicates are summed.
  static LaurentPoly from_terms(std::vector<Term> terms);
  static LaurentPoly monomial(const Integer& c, int exponent);
  /// q^e.
  static LaurentPoly q(int e = 1);

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_one() const;
  // Defined only for nonzero polynomials.
  int min_exp() const { return terms_.front().first; }
  int max_exp() const { return terms_.back().first; }
  const Integer& leading_coeff() const { return terms_.back().second; }
  Integer coeff(int e) const;

  /// q -> q^-1.
  LaurentPoly bar() const;
  LaurentPoly shifted(int k) const;
  LaurentPoly operator-() const;

  LaurentPoly& operator+=(const LaurentPoly& o);
  LaurentPoly& operator-=(const LaurentPoly& o);
  LaurentPoly& operator*=(const LaurentPoly& o);
  LaurentPoly& operator*=(const Integer& c);

  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) { return a.terms_ == b.terms_; }

  bool is_bar_invariant() const { return bar() == *this; }
  /// +-q^k.
  bool is_unit() const;
  /// Membership in q^-1 Z[q^-1].
  bool in_strictly_negative_part() const;
  /// Membership in Z[q^-1].
  bool in_nonpositive_part() const;
  bool has_nonnegative_coeffs() const;
  Integer eval_at_one() const;
  /// Positive gcd of the coefficients (0 for the zero polynomial).
  Integer content() const;

  /// Sum of the terms with exponent < 0.
  LaurentPoly negative_part() const;

  std::string to_string() const;

 private:
  std::vector<Term> terms_;  // ascending exponent, no zero coefficient
};

std::ostream& operator<<(std::ostream& os, const LaurentPoly& p);

/// a / b when the quotient lies in A, otherwise nullopt. b must be nonzero.
std::optional<LaurentPoly> divide_exact(const LaurentPoly& a, const LaurentPoly& b);

/// [n]_d = (q^{dn} - q^{-dn}) / (q^d - q^{-d}); n >= 0.
LaurentPoly quantum_integer(int n, int d);
/// [n]_d for any integer n, with [-n]_d = -[n]_d.
LaurentPoly signed_quantum_integer(int n, int d);
LaurentPoly quantum_factorial(int n, int d);
/// Gaussian binomial [m choose t]_d, 0 <= t <= m.
LaurentPoly quantum_binomial(int m, int t, int d);

/// The unique c in q^-1 Z[q^-1] with c - bar(c) = gamma.
/// Throws InvariantViolation unless bar(gamma) == -gamma.
LaurentPoly bar_split(const LaurentPoly& gamma);

/// Element of Q(q) kept in canonical form: the denominator has minimal
/// exponent 0 and positive leading coefficient, and num/den share no
/// common factor in Z[q] (content included).
class RatFunc {
 public:
  RatFunc() : den_(1) {}
  RatFunc(long c) : num_(c), den_(1) {}  // NOLINT
  RatFunc(const LaurentPoly& p) : num_(p), den_(1) {}  // NOLINT
  RatFunc(LaurentPoly num, LaurentPoly den);

  const LaurentPoly& num() const { return num_; }
  const LaurentPoly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_laurent() const { return den_.is_one(); }
  std::optional<LaurentPoly> to_laurent() const;

  RatFunc bar() const;
  RatFunc inverse() const;
  RatFunc operator-() const;

  RatFunc& operator+=(const RatFunc& o);
  RatFunc& operator-=(const RatFunc& o);
  RatFunc& operator*=(const RatFunc& o);
  RatFunc& operator/=(const RatFunc& o);
  friend RatFunc operator+(RatFunc a, const RatFunc& b) { return a += b; }
  friend RatFunc operator-(RatFunc a, const RatFunc& b) { return a -= b; }
  friend RatFunc operator*(RatFunc a, const RatFunc& b) { return a *= b; }
  friend RatFunc operator/(RatFunc a, const RatFunc& b) { return a /= b; }
  friend bool operator==(const RatFunc& a, const RatFunc& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  /// Coefficients of the expansion as a power series in q^-1, for all
  /// degrees >= min_degree (zero coefficients omitted).
  std::map<int, Rational> expand_at_infinity(int min_degree) const;

  std::string to_string() const;

 private:
  void canonicalize();
  LaurentPoly num_;
  LaurentPoly den_;
};

std::ostream& operator<<(std::ostream& os, const RatFunc& r);

inline bool is_zero(const RatFunc& r) { return r.is_zero(); }
inline bool is_zero(const LaurentPoly& p) { return p.is_zero(); }
inline bool is_zero(const Rational& r) { return sgn(r) == 0; }

}  // namespace qgcb
