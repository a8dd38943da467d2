#pragma once

// The algebra f, one weight space at a time.
//
// f_nu is realised as the span of the words of weight nu in the generators
// theta_i, modulo the radical of the bilinear form (,). The form is
// normalised by (theta_i, theta_i) = (1 - q_i^-2)^-1 and
// (x, y'y'') = (r(x), y' (x) y''), where r is the algebra map into the
// twisted tensor square with r(theta_i) = theta_i (x) 1 + 1 (x) theta_i and
// (x1 (x) x2)(y1 (x) y2) = q^{|x2|.|y1|} x1 y1 (x) x2 y2.
//
// Elements are stored as coordinates over Q(q) on a set of representative
// words of f_nu (the "basis words"); every word is bar-invariant, so the bar
// involution acts on coordinates alone.

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "qgcb/linalg.hpp"
#include "qgcb/rootdata.hpp"
#include "qgcb/scalars.hpp"

namespace qgcb {

/// theta_{w_1} theta_{w_2} ... theta_{w_n}.
using Word = std::vector<int>;
/// Element of the free algebra 'f with coefficients in A.
using WordComb = std::map<Word, LaurentPoly>;

/// theta_{i_1}^{(a_1)} ... theta_{i_n}^{(a_n)}.
struct DividedMonomial {
  std::vector<std::pair<int, int>> factors;

  NuWeight weight(std::size_t rank) const;
  /// a_1 + ... + a_n; the monomial lies in the N-th filtration step iff this is <= N.
  int filtration_degree() const;
  Word expand() const;
  /// theta_i^{(a)} * this, merging with a leading theta_i^{(c)}; returns the
  /// Gaussian-binomial factor produced by the merge.
  std::pair<DividedMonomial, LaurentPoly> prepend(int i, int a, int d_i) const;
  std::string to_string() const;

  friend auto operator<=>(const DividedMonomial&, const DividedMonomial&) = default;
  friend bool operator==(const DividedMonomial&, const DividedMonomial&) = default;
};

/// An element of _A f written on divided monomials.
using AFormExpansion = std::map<DividedMonomial, LaurentPoly>;

struct FElement {
  NuWeight nu;
  std::vector<RatFunc> coords;

  bool is_zero() const;
  friend bool operator==(const FElement&, const FElement&) = default;
};

FElement operator+(const FElement& a, const FElement& b);
FElement operator-(const FElement& a, const FElement& b);
FElement operator*(const RatFunc& c, const FElement& x);

struct WeightSpace {
  NuWeight nu;
  std::vector<Word> words;       // every word of weight nu, lexicographic
  std::vector<Word> basis;       // representatives spanning f_nu
  Matrix<RatFunc> gram;          // reduced form P on the basis words
  Matrix<RatFunc> gram_inverse;

  std::size_t dim() const { return basis.size(); }
};

/// Elements of f (x) f: for each first-factor weight nu1, a coefficient
/// matrix over basis(f_nu1) x basis(f_nu2).
struct FTensor {
  std::map<NuWeight, Matrix<RatFunc>> components;
};

class FAlgebra {
 public:
  explicit FAlgebra(RootDatum datum);

  const RootDatum& datum() const { return datum_; }
  std::size_t rank() const { return datum_.rank(); }

  static std::vector<Word> words_of_weight(const NuWeight& nu);
  NuWeight word_weight(const Word& w) const;

  std::shared_ptr<const WeightSpace> space(const NuWeight& nu) const;
  std::size_t dim(const NuWeight& nu) const { return space(nu)->dim(); }

  // Word-level machinery on 'f.
  /// Reduced form: (w, v) = form_scale(nu) * gram_words(w, v).
  LaurentPoly gram_words(const Word& w, const Word& v) const;
  /// prod_i (1 - q_i^-2)^{-nu_i}.
  RatFunc form_scale(const NuWeight& nu) const;
  /// r_i(w): the f (x) theta_i component of r(w).
  WordComb r_right_word(int i, const Word& w) const;
  /// _ir(w): the theta_i (x) f component of r(w).
  WordComb r_left_word(int i, const Word& w) const;
  /// True when the combination pairs to zero with every word.
  bool in_radical(const NuWeight& nu, const WordComb& x) const;

  // Elements.
  FElement zero(const NuWeight& nu) const;
  FElement one() const;
  FElement project(const NuWeight& nu, const WordComb& x) const;
  FElement word(const Word& w) const;
  FElement divided_monomial(const DividedMonomial& m) const;
  FElement from_expansion(const NuWeight& nu, const AFormExpansion& e) const;

  FElement multiply(const FElement& x, const FElement& y) const;
  FElement left_mult(int i, const FElement& x) const;
  FElement right_mult(const FElement& x, int i) const;
  /// (r_i(x), _ir(x)).
  std::pair<FElement, FElement> kashiwara_maps(int i, const FElement& x) const;
  FElement bar(const FElement& x) const;
  RatFunc inner_product(const FElement& x, const FElement& y) const;
  FTensor twisted_coproduct(const FElement& x) const;
  /// (r(x), y1 (x) y2) = sum (b, y1)(b', y2).
  RatFunc pair_tensor(const FTensor& t, const FElement& y1, const FElement& y2) const;

  // Matrices in basis-word coordinates, f_nu -> f_{nu +- i}.
  Matrix<RatFunc> left_mult_matrix(int i, const NuWeight& nu) const;
  Matrix<RatFunc> right_mult_matrix(int i, const NuWeight& nu) const;
  /// r_i (right = true) or _ir (right = false), optionally with q -> q^-1
  /// applied to the coefficients (the maps appearing in [E_i, x^-]).
  Matrix<RatFunc> r_matrix(int i, const NuWeight& nu, bool right, bool barred) const;

 private:
  std::vector<RatFunc> coords_of(const WeightSpace& s, const std::map<Word, RatFunc>& x) const;
  std::shared_ptr<const WeightSpace> build_space(const NuWeight& nu) const;

  RootDatum datum_;
  mutable std::mutex space_mutex_;
  mutable std::map<NuWeight, std::shared_ptr<const WeightSpace>> spaces_;
  mutable std::mutex gram_mutex_;
  mutable std::map<std::pair<Word, Word>, LaurentPoly> gram_memo_;
};

std::string word_to_string(const Word& w);

}  // namespace qgcb
