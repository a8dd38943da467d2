#pragma once

// Symmetrizable Cartan data realised on the simply-connected weight lattice
// X = Z^I with <i, lambda> = lambda_i.

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

namespace qgcb {

/// Element of X in fundamental-weight coordinates.
struct Weight {
  std::vector<int> coords;

  std::size_t rank() const { return coords.size(); }
  bool is_dominant() const;
  std::string to_string() const;

  Weight& operator+=(const Weight& o);
  Weight& operator-=(const Weight& o);
  friend Weight operator+(Weight a, const Weight& b) { return a += b; }
  friend Weight operator-(Weight a, const Weight& b) { return a -= b; }
  Weight operator-() const;
  friend auto operator<=>(const Weight&, const Weight&) = default;
  friend bool operator==(const Weight&, const Weight&) = default;
};

/// Element nu of N[I]: a nonnegative combination of simple roots.
struct NuWeight {
  std::vector<int> mult;

  static NuWeight zero(std::size_t n) { return NuWeight{std::vector<int>(n, 0)}; }
  static NuWeight simple(std::size_t n, std::size_t i);

  std::size_t rank() const { return mult.size(); }
  int height() const;
  bool is_zero() const { return height() == 0; }
  /// Componentwise <=.
  bool fits_in(const NuWeight& o) const;
  std::string to_string() const;

  NuWeight& operator+=(const NuWeight& o);
  friend NuWeight operator+(NuWeight a, const NuWeight& b) { return a += b; }
  /// Throws DomainError unless the result is componentwise nonnegative.
  friend NuWeight operator-(const NuWeight& a, const NuWeight& b);
  friend auto operator<=>(const NuWeight&, const NuWeight&) = default;
  friend bool operator==(const NuWeight&, const NuWeight&) = default;
};

/// All nu with the given height, in lexicographically decreasing order.
std::vector<NuWeight> nu_weights_of_height(std::size_t rank, int height);

struct CartanDatum {
  std::string name;
  std::vector<int> symmetrizers;
  std::vector<std::vector<int>> matrix;

  std::size_t rank() const { return matrix.size(); }
  /// Throws DomainError naming the first violated axiom.
  void validate() const;
};

class RootDatum {
 public:
  explicit RootDatum(CartanDatum cartan);

  /// "A1", "A2", "B2", "A1^(1)".
  static RootDatum preset(const std::string& name);
  static std::vector<std::string> preset_names();

  const CartanDatum& cartan() const { return cartan_; }
  const std::string& name() const { return cartan_.name; }
  std::size_t rank() const { return cartan_.rank(); }
  int d(std::size_t i) const { return cartan_.symmetrizers[i]; }
  int a(std::size_t i, std::size_t j) const { return cartan_.matrix[i][j]; }
  /// The symmetric form i.j = d_i a_ij.
  int dot(std::size_t i, std::size_t j) const { return d(i) * a(i, j); }
  int dot(const NuWeight& nu, std::size_t i) const;
  int dot(const NuWeight& a, const NuWeight& b) const;

  int pairing(std::size_t i, const Weight& lambda) const { return lambda.coords[i]; }
  /// The image i' of simple root i in X: <j, i'> = a_ji.
  Weight simple_root(std::size_t i) const;
  Weight to_weight(const NuWeight& nu) const;
  /// K~_i acts on weight mu by q^{d_i <i,mu>}; returns that exponent.
  int k_exponent(std::size_t i, const Weight& mu) const { return d(i) * pairing(i, mu); }

  Weight zero_weight() const { return Weight{std::vector<int>(rank(), 0)}; }
  Weight fundamental_weight(std::size_t i) const;

  bool is_symmetric() const;
  bool is_finite_type() const;

  /// Positive roots as elements of N[I]; finite type only.
  std::vector<NuWeight> positive_roots() const;
  /// Number of multisets of positive roots summing to nu (= dim f_nu in
  /// finite type); finite type only.
  long long positive_root_partitions(const NuWeight& nu) const;

  friend bool operator==(const RootDatum& a, const RootDatum& b) {
    return a.cartan_.matrix == b.cartan_.matrix && a.cartan_.symmetrizers == b.cartan_.symmetrizers;
  }

 private:
  CartanDatum cartan_;
};

}  // namespace qgcb
