#pragma once

// Weight modules with a distinguished basis: Verma modules on the carrier
// f, their simple quotients L(lambda), omega-twists and tensor products.
//
// Every module is truncated at a depth bound D. The depth of b^- eta in
// L(lambda) (or of its twist in wL(lambda)) is ht|b|, and depths add in
// tensor products. Vectors are graded by their signed root content
// (-|b| for highest-weight leaves, +|b| for lowest-weight leaves, summed in
// tensors), which refines the X-weight; the refinement matters when the
// Cartan matrix is singular.
//
// Generator actions are stored on the distinguished basis with
// coefficients in A. An action whose result leaves the truncation is
// stored as nullopt; applying it raises TruncationError.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qgcb/canonical.hpp"
#include "qgcb/falgebra.hpp"
#include "qgcb/rootdata.hpp"
#include "qgcb/scalars.hpp"

namespace qgcb {

enum class ModuleKind { Trivial, Verma, Highest, Lowest, Tensor };

std::string to_string(ModuleKind k);

using SparseVector = std::map<std::size_t, LaurentPoly>;
using Vec = std::map<std::size_t, RatFunc>;

void add_scaled(Vec& into, const Vec& v, const RatFunc& c);
void add_scaled(Vec& into, const SparseVector& v, const RatFunc& c);
void prune(Vec& v);
/// Componentwise q -> q^-1.
Vec bar_coefficients(const Vec& v);
bool is_laurent(const Vec& v);
SparseVector to_sparse(const Vec& v);
Vec to_vec(const SparseVector& v);

struct BasisVector {
  std::vector<int> content;
  Weight weight;
  int depth = 0;
  std::string label;
  // Leaves: the element b of B_nu with this vector = b^- eta (or its twist).
  NuWeight nu;
  std::size_t cb_index = 0;
  // Tensors: positions in the left and right factors.
  std::size_t left = 0;
  std::size_t right = 0;
};

class Module {
 public:
  ModuleKind kind() const { return kind_; }
  const RootDatum& datum() const { return provider_->algebra().datum(); }
  const CanonicalBasisProvider& provider() const { return *provider_; }
  std::shared_ptr<const CanonicalBasisProvider> provider_ptr() const { return provider_; }
  int depth_bound() const { return depth_bound_; }
  /// Highest weight (Verma, Highest) or minus the lowest weight (Lowest).
  const Weight& lambda() const { return lambda_; }
  const std::string& name() const { return name_; }

  /// Weights are bounded above (U^+_nu kills everything for large nu).
  bool bounded_above() const { return bounded_above_; }
  /// Weights are bounded below (U^-_nu kills everything for large nu).
  bool bounded_below() const { return bounded_below_; }

  std::size_t size() const { return basis_.size(); }
  const BasisVector& vec(std::size_t k) const { return basis_.at(k); }
  const std::vector<BasisVector>& basis() const { return basis_; }
  /// Indices of the basis vectors with the given content (empty if none).
  const std::vector<std::size_t>& grade(const std::vector<int>& content) const;
  std::vector<std::vector<int>> grades() const;
  std::optional<std::size_t> find_pair(std::size_t left, std::size_t right) const;

  std::shared_ptr<const Module> left() const { return left_; }
  std::shared_ptr<const Module> right() const { return right_; }

  const std::optional<SparseVector>& e_action(std::size_t i, std::size_t v) const { return e_.at(i).at(v); }
  const std::optional<SparseVector>& f_action(std::size_t i, std::size_t v) const { return f_.at(i).at(v); }

  std::optional<Vec> try_apply_e(std::size_t i, const Vec& v) const;
  std::optional<Vec> try_apply_f(std::size_t i, const Vec& v) const;
  /// Throw TruncationError when the result leaves the truncation.
  Vec apply_e(std::size_t i, const Vec& v) const;
  Vec apply_f(std::size_t i, const Vec& v) const;
  /// K~_i acts on a homogeneous vector by q^{d_i <i, weight>}.
  Vec apply_k(std::size_t i, const Vec& v) const;
  /// theta_{w_1} ... theta_{w_n} acting as F (or E); the last letter acts first.
  std::optional<Vec> try_apply_f_word(const Word& w, Vec v) const;
  std::optional<Vec> try_apply_e_word(const Word& w, Vec v) const;
  /// u^- v and u^+ v for u in f.
  Vec apply_minus(const FElement& u, const Vec& v) const;
  Vec apply_plus(const FElement& u, const Vec& v) const;

  /// Index of the highest (Verma, Highest) or lowest (Lowest) weight vector.
  std::size_t extremal_vector() const;

 private:
  friend std::shared_ptr<const Module> trivial_module(std::shared_ptr<const CanonicalBasisProvider>, int);
  friend std::shared_ptr<const Module> verma_module(std::shared_ptr<const CanonicalBasisProvider>, const Weight&, int);
  friend std::shared_ptr<const Module> simple_quotient(std::shared_ptr<const CanonicalBasisProvider>, const Weight&, int);
  friend std::shared_ptr<const Module> omega_twist(const std::shared_ptr<const Module>&);
  friend std::shared_ptr<const Module> tensor_product(const std::shared_ptr<const Module>&,
                                                      const std::shared_ptr<const Module>&, std::optional<int>);
  void index_grades();

  ModuleKind kind_ = ModuleKind::Trivial;
  std::shared_ptr<const CanonicalBasisProvider> provider_;
  int depth_bound_ = 0;
  Weight lambda_;
  std::string name_;
  bool bounded_above_ = true;
  bool bounded_below_ = true;
  std::vector<BasisVector> basis_;
  std::map<std::vector<int>, std::vector<std::size_t>> grades_;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> pairs_;
  std::shared_ptr<const Module> left_, right_;
  std::vector<std::vector<std::optional<SparseVector>>> e_, f_;
};

using ModulePtr = std::shared_ptr<const Module>;

/// The one-dimensional module with weight 0.
ModulePtr trivial_module(std::shared_ptr<const CanonicalBasisProvider> cb, int depth_bound);
/// M(lambda) on the canonical basis {b^- 1}, weights lambda - nu with ht(nu) <= depth_bound.
ModulePtr verma_module(std::shared_ptr<const CanonicalBasisProvider> cb, const Weight& lambda, int depth_bound);
/// L(lambda) = M(lambda) modulo the radical of the Shapovalov functionals,
/// with basis the nonzero images of b^- 1. lambda must be dominant.
ModulePtr simple_quotient(std::shared_ptr<const CanonicalBasisProvider> cb, const Weight& lambda, int depth_bound);
/// The module with actions composed with omega (E <-> F, K_mu <-> K_-mu).
/// Defined for leaves only.
ModulePtr omega_twist(const ModulePtr& m);
/// X (x) Y through Delta(E_i) = E_i (x) 1 + K~_i (x) E_i,
/// Delta(F_i) = F_i (x) K~_-i + 1 (x) F_i. Refuses shapes where the
/// quasi-R-matrix does not act (X not bounded below and Y not bounded above).
ModulePtr tensor_product(const ModulePtr& x, const ModulePtr& y, std::optional<int> depth_bound = {});

bool is_admissible(const Module& x, const Module& y);

/// Projection onto weight lambda followed by u^-: the element u^- 1_lambda.
struct Idempotent {
  Weight lambda;
  Vec project(const Module& m, const Vec& v) const;
  Vec apply_minus(const Module& m, const FElement& u, const Vec& v) const;
};

struct RelationsReport {
  std::size_t checked = 0;
  std::size_t skipped = 0;  // identities touching the truncation boundary
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

/// On every basis vector: weight shifts of E/F, [E_i, F_j] = delta_ij [<i,mu>]_i,
/// the quantum Serre relations in the E's and in the F's, and, for
/// modules with finitely many vectors per i-string, local nilpotency.
RelationsReport check_relations(const Module& m);

/// u (b (x) eta_lambda) in T = M (x) L(lambda) or M (x) M(lambda), for u in f and
/// b a vector of M given in M's standard coordinates.
Vec pi_b_apply(const Module& t, const Vec& b_in_left, const FElement& u);

/// Standard coordinates of m (x) eta for a vector m of the left factor.
Vec tensor_with_extremal(const Module& t, const Vec& left_vector);
/// Standard coordinates of eta^w (x) m for a vector m of the right factor.
Vec extremal_with_tensor(const Module& t, const Vec& right_vector);

}  // namespace qgcb
