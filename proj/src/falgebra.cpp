#include "qgcb/falgebra.hpp"

#include <functional>
#include <sstream>

#include "qgcb/errors.hpp"

namespace qgcb {

std::string word_to_string(const Word& w) {
  if (w.empty()) return "1";
  std::ostringstream os;
  for (int i : w) os << "F" << i;
  return os.str();
}

NuWeight DividedMonomial::weight(std::size_t rank) const {
  NuWeight nu = NuWeight::zero(rank);
  for (auto [i, a] : factors) nu.mult.at(i) += a;
  return nu;
}

int DividedMonomial::filtration_degree() const {
  int s = 0;
  for (auto [i, a] : factors) s += a;
  return s;
}

Word DividedMonomial::expand() const {
  Word w;
  for (auto [i, a] : factors) w.insert(w.end(), a, i);
  return w;
}

std::pair<DividedMonomial, LaurentPoly> DividedMonomial::prepend(int i, int a, int d_i) const {
  DividedMonomial m = *this;
  if (!m.factors.empty() && m.factors.front().first == i) {
    int c = m.factors.front().second;
    m.factors.front().second = a + c;
    return {m, quantum_binomial(a + c, a, d_i)};
  }
  m.factors.insert(m.factors.begin(), {i, a});
  return {m, LaurentPoly(1)};
}

std::string DividedMonomial::to_string() const {
  if (factors.empty()) return "1";
  std::ostringstream os;
  for (auto [i, a] : factors) {
    os << "F" << i;
    if (a > 1) os << "^(" << a << ")";
  }
  return os.str();
}

bool FElement::is_zero() const {
  for (const auto& c : coords)
    if (!c.is_zero()) return false;
  return true;
}

namespace {

void check_same(const FElement& a, const FElement& b) {
  if (a.nu != b.nu || a.coords.size() != b.coords.size())
    throw DomainError("f: weights differ (inhomogeneous sum)");
}

}  // namespace

FElement operator+(const FElement& a, const FElement& b) {
  check_same(a, b);
  FElement r = a;
  for (std::size_t k = 0; k < r.coords.size(); ++k) r.coords[k] += b.coords[k];
  return r;
}

FElement operator-(const FElement& a, const FElement& b) {
  check_same(a, b);
  FElement r = a;
  for (std::size_t k = 0; k < r.coords.size(); ++k) r.coords[k] -= b.coords[k];
  return r;
}

FElement operator*(const RatFunc& c, const FElement& x) {
  FElement r = x;
  for (auto& v : r.coords) v *= c;
  return r;
}

FAlgebra::FAlgebra(RootDatum datum) : datum_(std::move(datum)) {}

std::vector<Word> FAlgebra::words_of_weight(const NuWeight& nu) {
  std::vector<Word> out;
  Word cur;
  std::vector<int> left = nu.mult;
  const int n = nu.height();
  std::function<void()> rec = [&]() {
    if (static_cast<int>(cur.size()) == n) {
      out.push_back(cur);
      return;
    }
    for (std::size_t i = 0; i < left.size(); ++i) {
      if (left[i] == 0) continue;
      --left[i];
      cur.push_back(static_cast<int>(i));
      rec();
      cur.pop_back();
      ++left[i];
    }
  };
  rec();
  return out;
}

NuWeight FAlgebra::word_weight(const Word& w) const {
  NuWeight nu = NuWeight::zero(rank());
  for (int i : w) {
    if (i < 0 || static_cast<std::size_t>(i) >= rank()) throw DomainError("word letter out of range");
    nu.mult[i] += 1;
  }
  return nu;
}

WordComb FAlgebra::r_right_word(int i, const Word& w) const {
  WordComb out;
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (w[k] != i) continue;
    int e = 0;
    for (std::size_t l = k + 1; l < w.size(); ++l) e += datum_.dot(i, w[l]);
    Word rest = w;
    rest.erase(rest.begin() + static_cast<long>(k));
    out[rest] += LaurentPoly::q(e);
  }
  std::erase_if(out, [](const auto& kv) { return kv.second.is_zero(); });
  return out;
}

WordComb FAlgebra::r_left_word(int i, const Word& w) const {
  WordComb out;
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (w[k] != i) continue;
    int e = 0;
    for (std::size_t l = 0; l < k; ++l) e += datum_.dot(i, w[l]);
    Word rest = w;
    rest.erase(rest.begin() + static_cast<long>(k));
    out[rest] += LaurentPoly::q(e);
  }
  std::erase_if(out, [](const auto& kv) { return kv.second.is_zero(); });
  return out;
}

LaurentPoly FAlgebra::gram_words(const Word& w, const Word& v) const {
  if (w.size() != v.size()) return LaurentPoly();
  if (w.empty()) return LaurentPoly(1);
  auto key = std::make_pair(w, v);
  {
    std::lock_guard lock(gram_mutex_);
    if (auto it = gram_memo_.find(key); it != gram_memo_.end()) return it->second;
  }
  LaurentPoly total;
  Word tail(w.begin() + 1, w.end());
  for (const auto& [rest, c] : r_left_word(w.front(), v)) total += c * gram_words(tail, rest);
  std::lock_guard lock(gram_mutex_);
  gram_memo_.emplace(key, total);
  return total;
}

RatFunc FAlgebra::form_scale(const NuWeight& nu) const {
  LaurentPoly den(1);
  for (std::size_t i = 0; i < rank(); ++i) {
    LaurentPoly factor = LaurentPoly(1) - LaurentPoly::q(-2 * datum_.d(i));
    for (int k = 0; k < nu.mult[i]; ++k) den *= factor;
  }
  return RatFunc(LaurentPoly(1), den);
}

std::shared_ptr<const WeightSpace> FAlgebra::build_space(const NuWeight& nu) const {
  auto s = std::make_shared<WeightSpace>();
  s->nu = nu;
  s->words = words_of_weight(nu);
  const std::size_t n = s->words.size();
  Matrix<RatFunc> full(n, n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a; b < n; ++b) {
      RatFunc g = gram_words(s->words[a], s->words[b]);
      full(a, b) = g;
      full(b, a) = g;
    }
  auto ech = row_reduce(full);
  for (auto p : ech.pivots) s->basis.push_back(s->words[p]);
  const std::size_t d = s->basis.size();
  s->gram = Matrix<RatFunc>(d, d);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) s->gram(a, b) = full(ech.pivots[a], ech.pivots[b]);
  s->gram_inverse = inverse(s->gram, "f weight space " + nu.to_string());
  return s;
}

std::shared_ptr<const WeightSpace> FAlgebra::space(const NuWeight& nu) const {
  if (nu.rank() != rank()) throw DomainError("nu rank mismatch");
  {
    std::lock_guard lock(space_mutex_);
    if (auto it = spaces_.find(nu); it != spaces_.end()) return it->second;
  }
  auto built = build_space(nu);
  std::lock_guard lock(space_mutex_);
  return spaces_.emplace(nu, built).first->second;
}

std::vector<RatFunc> FAlgebra::coords_of(const WeightSpace& s, const std::map<Word, RatFunc>& x) const {
  std::vector<RatFunc> pairings(s.dim());
  for (std::size_t k = 0; k < s.dim(); ++k)
    for (const auto& [w, c] : x)
      if (!c.is_zero()) {
        LaurentPoly g = gram_words(s.basis[k], w);
        if (!g.is_zero()) pairings[k] += c * RatFunc(g);
      }
  return s.gram_inverse * pairings;
}

bool FAlgebra::in_radical(const NuWeight& nu, const WordComb& x) const {
  for (const auto& v : words_of_weight(nu)) {
    LaurentPoly total;
    for (const auto& [w, c] : x) total += c * gram_words(w, v);
    if (!total.is_zero()) return false;
  }
  return true;
}

FElement FAlgebra::zero(const NuWeight& nu) const { return FElement{nu, std::vector<RatFunc>(dim(nu))}; }

FElement FAlgebra::one() const { return FElement{NuWeight::zero(rank()), {RatFunc(1)}}; }

FElement FAlgebra::project(const NuWeight& nu, const WordComb& x) const {
  std::map<Word, RatFunc> rx;
  for (const auto& [w, c] : x) {
    if (word_weight(w) != nu) throw DomainError("f: inhomogeneous word combination");
    rx.emplace(w, RatFunc(c));
  }
  auto s = space(nu);
  return FElement{nu, coords_of(*s, rx)};
}

FElement FAlgebra::word(const Word& w) const { return project(word_weight(w), WordComb{{w, LaurentPoly(1)}}); }

FElement FAlgebra::divided_monomial(const DividedMonomial& m) const {
  LaurentPoly den(1);
  for (auto [i, a] : m.factors) {
    if (a < 1) throw DomainError("divided monomial exponent must be >= 1");
    den *= quantum_factorial(a, datum_.d(i));
  }
  return RatFunc(LaurentPoly(1), den) * word(m.expand());
}

FElement FAlgebra::from_expansion(const NuWeight& nu, const AFormExpansion& e) const {
  FElement x = zero(nu);
  for (const auto& [m, c] : e) {
    if (m.weight(rank()) != nu) throw DomainError("f: inhomogeneous expansion");
    x = x + RatFunc(c) * divided_monomial(m);
  }
  return x;
}

FElement FAlgebra::multiply(const FElement& x, const FElement& y) const {
  auto sx = space(x.nu);
  auto sy = space(y.nu);
  NuWeight nu = x.nu + y.nu;
  std::map<Word, RatFunc> prod;
  for (std::size_t a = 0; a < sx->dim(); ++a) {
    if (x.coords[a].is_zero()) continue;
    for (std::size_t b = 0; b < sy->dim(); ++b) {
      if (y.coords[b].is_zero()) continue;
      Word w = sx->basis[a];
      w.insert(w.end(), sy->basis[b].begin(), sy->basis[b].end());
      prod[w] += x.coords[a] * y.coords[b];
    }
  }
  return FElement{nu, coords_of(*space(nu), prod)};
}

FElement FAlgebra::left_mult(int i, const FElement& x) const { return multiply(word({i}), x); }

FElement FAlgebra::right_mult(const FElement& x, int i) const { return multiply(x, word({i})); }

std::pair<FElement, FElement> FAlgebra::kashiwara_maps(int i, const FElement& x) const {
  if (x.nu.mult.at(i) == 0) return {FElement{x.nu, {}}, FElement{x.nu, {}}};
  NuWeight lower = x.nu - NuWeight::simple(rank(), i);
  auto s = space(x.nu);
  std::map<Word, RatFunc> right, left;
  for (std::size_t a = 0; a < s->dim(); ++a) {
    if (x.coords[a].is_zero()) continue;
    for (const auto& [w, c] : r_right_word(i, s->basis[a])) right[w] += x.coords[a] * RatFunc(c);
    for (const auto& [w, c] : r_left_word(i, s->basis[a])) left[w] += x.coords[a] * RatFunc(c);
  }
  auto sl = space(lower);
  return {FElement{lower, coords_of(*sl, right)}, FElement{lower, coords_of(*sl, left)}};
}

FElement FAlgebra::bar(const FElement& x) const {
  FElement r = x;
  for (auto& c : r.coords) c = c.bar();
  return r;
}

RatFunc FAlgebra::inner_product(const FElement& x, const FElement& y) const {
  if (x.nu != y.nu) return RatFunc(0);
  auto s = space(x.nu);
  RatFunc total;
  auto gy = s->gram * y.coords;
  for (std::size_t a = 0; a < s->dim(); ++a)
    if (!x.coords[a].is_zero()) total += x.coords[a] * gy[a];
  return form_scale(x.nu) * total;
}

FTensor FAlgebra::twisted_coproduct(const FElement& x) const {
  auto s = space(x.nu);
  FTensor out;
  std::map<Word, std::vector<RatFunc>> memo;
  auto coords = [&](const Word& w) -> const std::vector<RatFunc>& {
    auto it = memo.find(w);
    if (it == memo.end()) it = memo.emplace(w, this->word(w).coords).first;
    return it->second;
  };
  for (std::size_t a = 0; a < s->dim(); ++a) {
    if (x.coords[a].is_zero()) continue;
    const Word& w = s->basis[a];
    const std::size_t n = w.size();
    for (unsigned long mask = 0; mask < (1UL << n); ++mask) {
      // Bits set in mask go to the left factor.
      Word left, right;
      int e = 0;
      for (std::size_t l = 0; l < n; ++l) {
        if (mask & (1UL << l)) {
          left.push_back(w[l]);
          for (std::size_t m = 0; m < l; ++m)
            if (!(mask & (1UL << m))) e += datum_.dot(w[m], w[l]);
        } else {
          right.push_back(w[l]);
        }
      }
      NuWeight nu1 = word_weight(left);
      const auto& c1 = coords(left);
      const auto& c2 = coords(right);
      auto it = out.components.find(nu1);
      if (it == out.components.end())
        it = out.components.emplace(nu1, Matrix<RatFunc>(c1.size(), c2.size())).first;
      RatFunc scale = x.coords[a] * RatFunc(LaurentPoly::q(e));
      for (std::size_t p = 0; p < c1.size(); ++p) {
        if (c1[p].is_zero()) continue;
        for (std::size_t r = 0; r < c2.size(); ++r)
          if (!c2[r].is_zero()) it->second(p, r) += scale * c1[p] * c2[r];
      }
    }
  }
  return out;
}

RatFunc FAlgebra::pair_tensor(const FTensor& t, const FElement& y1, const FElement& y2) const {
  auto it = t.components.find(y1.nu);
  if (it == t.components.end()) return RatFunc(0);
  auto s1 = space(y1.nu);
  auto s2 = space(y2.nu);
  if (it->second.cols() != s2->dim()) return RatFunc(0);
  auto g1 = s1->gram * y1.coords;
  auto g2 = s2->gram * y2.coords;
  RatFunc total;
  for (std::size_t a = 0; a < g1.size(); ++a)
    for (std::size_t b = 0; b < g2.size(); ++b)
      if (!it->second(a, b).is_zero()) total += it->second(a, b) * g1[a] * g2[b];
  return form_scale(y1.nu) * form_scale(y2.nu) * total;
}

Matrix<RatFunc> FAlgebra::left_mult_matrix(int i, const NuWeight& nu) const {
  auto s = space(nu);
  NuWeight up = nu + NuWeight::simple(rank(), i);
  auto su = space(up);
  Matrix<RatFunc> m(su->dim(), s->dim());
  for (std::size_t b = 0; b < s->dim(); ++b) {
    Word w{i};
    w.insert(w.end(), s->basis[b].begin(), s->basis[b].end());
    m.set_column(b, coords_of(*su, {{w, RatFunc(1)}}));
  }
  return m;
}

Matrix<RatFunc> FAlgebra::right_mult_matrix(int i, const NuWeight& nu) const {
  auto s = space(nu);
  NuWeight up = nu + NuWeight::simple(rank(), i);
  auto su = space(up);
  Matrix<RatFunc> m(su->dim(), s->dim());
  for (std::size_t b = 0; b < s->dim(); ++b) {
    Word w = s->basis[b];
    w.push_back(i);
    m.set_column(b, coords_of(*su, {{w, RatFunc(1)}}));
  }
  return m;
}

Matrix<RatFunc> FAlgebra::r_matrix(int i, const NuWeight& nu, bool right, bool barred) const {
  if (nu.mult.at(i) == 0) throw DomainError("r_matrix: nu has no theta_" + std::to_string(i));
  auto s = space(nu);
  auto sl = space(nu - NuWeight::simple(rank(), i));
  Matrix<RatFunc> m(sl->dim(), s->dim());
  for (std::size_t b = 0; b < s->dim(); ++b) {
    std::map<Word, RatFunc> img;
    for (const auto& [w, c] : right ? r_right_word(i, s->basis[b]) : r_left_word(i, s->basis[b]))
      img[w] += RatFunc(barred ? c.bar() : c);
    m.set_column(b, coords_of(*sl, img));
  }
  return m;
}

}  // namespace qgcb
