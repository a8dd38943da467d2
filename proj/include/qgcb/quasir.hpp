#pragma once

// The quasi-R-matrix Theta = sum_nu Theta_nu and the bar involution
// Psi = Theta o (bar (x) bar) on admissible tensor products.
//
// Theta_nu is stored as a matrix C over the basis words w_a of f_nu:
//   Theta_nu = sum_{a,b} C[a][b] (w_a)^- (x) (w_b)^+.
// It is solved one height at a time from
//   (rbar_i (x) 1) Theta_nu = -(q_i - q_i^-1) q^{-i.(nu-i)} (1 (x) theta_i .) Theta_{nu-i}
// for every i, and the companion equation with _irbar and right
// multiplication is checked on the solution.

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "qgcb/canonical.hpp"
#include "qgcb/falgebra.hpp"
#include "qgcb/wmod.hpp"

namespace qgcb {

class ThetaExpansion {
 public:
  explicit ThetaExpansion(std::shared_ptr<const FAlgebra> f);

  const FAlgebra& algebra() const { return *f_; }
  std::shared_ptr<const FAlgebra> algebra_ptr() const { return f_; }

  /// Theta_nu on basis words; computed on first use (and all lower levels).
  const Matrix<RatFunc>& level(const NuWeight& nu) const;
  /// Residual of the companion equation at nu; empty means it holds.
  std::vector<std::string> companion_residual(const NuWeight& nu) const;

 private:
  std::shared_ptr<const FAlgebra> f_;
  mutable std::mutex mutex_;
  mutable std::map<NuWeight, std::shared_ptr<const Matrix<RatFunc>>> levels_;
};

/// Theta_nu written on the canonical basis: entry (k, l) is the coefficient
/// of b_k^- (x) b_l^+. Integrality is recorded, never asserted.
struct ThetaCbExpansion {
  NuWeight nu;
  std::vector<std::string> labels;
  Matrix<RatFunc> coefficients;
  bool integral = true;
};
ThetaCbExpansion theta_cb_expansion(const ThetaExpansion& th, const CanonicalBasisProvider& cb, const NuWeight& nu);

/// Largest ht(nu) for which Theta_nu can act nontrivially on the standard
/// vector k of an admissible tensor product.
int theta_height_cutoff(const Module& t, std::size_t k);

/// Theta applied to a vector of an admissible tensor product. Throws
/// TruncationError if a needed term leaves the truncation.
Vec theta_apply(const ThetaExpansion& th, const Module& t, const Vec& v);

/// Certificate for condition (star): the shape is admissible and, for every
/// standard vector, Theta_nu with ht(nu) just above the cutoff acts by zero.
struct StarCertificate {
  bool admissible = false;
  std::string reason;
  std::size_t checked = 0;
  std::size_t unknown = 0;
  std::vector<std::string> violations;
  bool ok() const { return admissible && violations.empty(); }
};
StarCertificate certify_star(const ThetaExpansion& th, const Module& t);

/// Psi on standard vectors, memoised per module.
class PsiEngine {
 public:
  explicit PsiEngine(std::shared_ptr<const ThetaExpansion> th);

  const ThetaExpansion& theta() const { return *th_; }
  std::shared_ptr<const ThetaExpansion> theta_ptr() const { return th_; }

  /// Psi(e_k): e_k on leaves, Theta(Psi(x) (x) Psi(y)) on x (x) y.
  const Vec& psi_basis(const ModulePtr& m, std::size_t k) const;
  /// Antilinear extension: Psi(sum c_k e_k) = sum bar(c_k) Psi(e_k).
  Vec psi_apply(const ModulePtr& m, const Vec& v) const;

 private:
  std::shared_ptr<const ThetaExpansion> th_;
  mutable std::recursive_mutex mutex_;
  mutable std::map<const Module*, std::pair<ModulePtr, std::map<std::size_t, Vec>>> cache_;
};

/// Vectors of a module given by their standard coordinates, one per
/// standard index (for tensors: the diamond basis; for leaves: identity).
using DistinguishedBasis = std::vector<Vec>;
DistinguishedBasis identity_basis(const Module& m);

enum class GenerationSide { Auto, RightHighest, LeftLowest };

/// The spanning vectors b'^-(m_b (x) eta) (right factor L(lambda)) or
/// b'^+(eta^w (x) m_b) (left factor wL(lambda)) attached to the standard
/// indices of one grade block; their matrix must have determinant +-q^k.
struct GenerationBlock {
  std::vector<std::size_t> indices;   // standard indices of the block
  std::vector<Vec> vectors;           // one spanning vector per index
  Matrix<RatFunc> matrix;             // columns = vectors on `indices`
  LaurentPoly determinant;
};
GenerationBlock generation_block(const Module& t, const std::vector<int>& content, const DistinguishedBasis& other,
                                 GenerationSide side = GenerationSide::Auto);

/// Psi computed without Theta: write v on the spanning vectors and
/// conjugate the coefficients. `other` is the distinguished basis of the
/// non-extremal factor.
Vec psi_via_generation(const Module& t, const Vec& v, const DistinguishedBasis& other,
                       GenerationSide side = GenerationSide::Auto);

struct LatticeReport {
  std::size_t checked = 0;
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};
/// Theta(e_k) and Psi(e_k) have coefficients in A for every standard e_k.
LatticeReport check_lattice_preservation(const PsiEngine& psi, const ModulePtr& t);

/// Delta(u) Theta = Theta Deltabar(u) for u = E_i, F_i on every standard vector
/// where both sides stay inside the truncation.
struct IntertwiningReport {
  std::size_t checked = 0;
  std::size_t skipped = 0;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};
IntertwiningReport intertwining_residual(const ThetaExpansion& th, const Module& t);

}  // namespace qgcb
