#pragma once

// The canonical basis B of f, one weight space at a time.
//
// Three providers: the closed form {theta^(n)} in rank one, the two
// monomial families of type A2, and a general engine. The engine builds
// B_nu from the strata
//   S_i(nu) = { pi_{i,a}(b0) : b0 in B_{nu - a i}, epsilon_i(b0) = 0 },
// where pi_{i,a}(b0) is what remains of theta_i^(a) b0 after subtracting
// the bar-invariant multiples of elements with epsilon_i > a that break
// almost orthonormality.

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "qgcb/falgebra.hpp"

namespace qgcb {

enum class CbMethod { Rank1, A2ClosedForm, Engine };

std::string to_string(CbMethod m);
/// "rank1", "a2", "engine"; throws ParseError otherwise.
CbMethod parse_cb_method(const std::string& s);

struct CanonicalElement {
  FElement element;
  /// The element on divided monomials, with coefficients in A.
  AFormExpansion expansion;
  /// Monomial the element was generated from; used as its label.
  DividedMonomial leading;
  /// epsilon_i for each i (engine output only, empty otherwise).
  std::vector<int> eps;

  std::string label() const { return leading.to_string(); }
};

struct CbCertificate {
  NuWeight nu;
  std::size_t size = 0;
  std::size_t expected_dim = 0;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

class CanonicalBasisProvider {
 public:
  /// Without a method, picks the closed form when one applies.
  explicit CanonicalBasisProvider(std::shared_ptr<const FAlgebra> f, std::optional<CbMethod> method = {});

  static bool supports(CbMethod m, const RootDatum& d);
  static CbMethod default_method(const RootDatum& d);

  const FAlgebra& algebra() const { return *f_; }
  std::shared_ptr<const FAlgebra> algebra_ptr() const { return f_; }
  CbMethod method() const { return method_; }

  /// B_nu. The A2 closed form is compared against the engine at every nu
  /// and rejected (InvariantViolation) on any mismatch.
  std::shared_ptr<const std::vector<CanonicalElement>> basis(const NuWeight& nu) const;
  /// Columns are the word coordinates of B_nu.
  std::shared_ptr<const Matrix<RatFunc>> matrix(const NuWeight& nu) const;
  /// Coordinates of x on B_nu.
  std::vector<RatFunc> coordinates(const FElement& x) const;

  /// Bar invariance, A-integrality of the expansion, agreement of the
  /// expansion with the element, independence, dimension, and
  /// (b, b') in delta + q^-1 Z[[q^-1]] checked to the given depth.
  CbCertificate certify(const NuWeight& nu, int series_depth = 8) const;

  /// B_nu is read from / written to this directory as JSON when set.
  void set_cache_dir(std::optional<std::filesystem::path> dir);

 private:
  std::vector<CanonicalElement> compute(const NuWeight& nu) const;
  std::vector<CanonicalElement> rank1(const NuWeight& nu) const;
  std::vector<CanonicalElement> a2_closed_form(const NuWeight& nu) const;
  std::vector<CanonicalElement> engine(const NuWeight& nu) const;
  std::filesystem::path cache_file(const NuWeight& nu) const;

  std::shared_ptr<const FAlgebra> f_;
  CbMethod method_;
  std::unique_ptr<CanonicalBasisProvider> certifier_;
  std::optional<std::filesystem::path> cache_dir_;
  mutable std::mutex mutex_;
  mutable std::map<NuWeight, std::shared_ptr<const std::vector<CanonicalElement>>> bases_;
  mutable std::map<NuWeight, std::shared_ptr<const Matrix<RatFunc>>> matrices_;
};

/// theta_i^(a) b, with the expansion carried along.
CanonicalElement apply_divided_power(const FAlgebra& f, int i, int a, const CanonicalElement& b);

}  // namespace qgcb
