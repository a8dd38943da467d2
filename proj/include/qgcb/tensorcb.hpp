#pragma once

// Canonical bases of tensor products: the unique Psi-fixed lift
// b <> b' of each standard tensor b (x) b' inside the lattice spanned over
// Z[q^-1] by the standard tensors.
//
// The construction is inductive. A based module carries its diamond basis;
// tensoring two based modules gives the candidate basis d_a (x) d'_b, on which
// Psi acts by a unitriangular matrix over A. The triangular recursion
// then solves for the corrections one index at a time.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qgcb/quasir.hpp"
#include "qgcb/wmod.hpp"

namespace qgcb {

/// Psi on one grade block of a tensor product, written on the candidate
/// basis s_k: Psi(s_j) = sum_i rho(i, j) s_i.
struct PsiBlock {
  std::vector<int> content;
  std::vector<std::size_t> indices;          // standard indices of the block
  Matrix<LaurentPoly> rho;
  std::vector<std::vector<bool>> below;      // below[i][j]: i < j (transitive)
  std::vector<std::size_t> linear_order;     // positions, smallest first
};

struct PsiMatrix {
  std::vector<PsiBlock> blocks;
  /// Position of a standard index: (block, slot).
  std::map<std::size_t, std::pair<std::size_t, std::size_t>> where;
};

/// A module together with its diamond basis, indexed like the standard basis.
struct DiamondBasis {
  ModulePtr module;
  std::vector<SparseVector> elements;   // elements[k] in standard coordinates
  PsiMatrix order;                      // order used by the last tensor step
  std::vector<SparseVector> corrections;  // on the candidate basis of the last step
  std::shared_ptr<const DiamondBasis> left, right;  // the based factors (tensors only)
  const std::string& label(std::size_t k) const { return module->vec(k).label; }
  std::size_t size() const { return elements.size(); }
};

/// The canonical basis of a single factor: the standard basis itself.
DiamondBasis leaf_basis(const ModulePtr& m);

/// M (x) M' with its candidate basis d_a (x) d'_b.
struct TensorCarrier {
  ModulePtr module;
  std::shared_ptr<const DiamondBasis> left, right;
  DistinguishedBasis candidates;  // candidates[k] for the standard index k = (a, b)
};
TensorCarrier tensor_based(const DiamondBasis& m, const DiamondBasis& mp, std::optional<int> depth_bound = {});

/// Psi on the candidate basis, block by block. Checks entries in A, unit
/// diagonal, and that the order generated by the off-diagonal support is acyclic.
PsiMatrix psi_matrix(const ThetaExpansion& th, const TensorCarrier& t);
/// Psi on the standard basis of a tensor product, through the recursive engine.
PsiMatrix standard_psi_matrix(const PsiEngine& psi, const ModulePtr& t);

/// Triangular recursion over a linear extension of the operational order.
DiamondBasis diamond_basis(const ThetaExpansion& th, const TensorCarrier& t);

/// (lambda_1, ..., lambda_l; r): the first r factors are lowest-weight.
struct MultiWeight {
  std::vector<Weight> lambdas;
  std::size_t r = 0;
  std::string to_string() const;
};

/// wL(l_1) (x) (wL(l_2) (x) ... (x) ((L(l_{r+1}) (x) L(l_{r+2})) (x) ...)).
DiamondBasis multi_diamond(const std::shared_ptr<const CanonicalBasisProvider>& cb, const ThetaExpansion& th,
                           const MultiWeight& w, int depth_bound);

/// The same factors bracketed fully to the left or fully to the right.
DiamondBasis bracketed_diamond(const ThetaExpansion& th, const std::vector<DiamondBasis>& factors, bool left_assoc,
                               std::optional<int> depth_bound = {});
/// The factors of multi_diamond as based leaves, in order.
std::vector<DiamondBasis> multi_leaves(const std::shared_ptr<const CanonicalBasisProvider>& cb, const MultiWeight& w,
                                       int depth_bound);

/// Leaf positions of a standard index of a nested tensor product, left to right.
std::vector<std::size_t> leaf_tuple(const Module& m, std::size_t k);

struct CheckResult {
  std::string name;
  bool passed = true;
  bool observational = false;   // recorded, never fails
  std::size_t checked = 0;
  std::vector<std::string> counterexamples;
  void fail(std::string why);
};

/// Psi(d) = d through the recursive engine.
CheckResult check_bar_invariance(const PsiEngine& psi, const DiamondBasis& d);
/// Coordinates in Z[q^-1] and congruent to the index mod q^-1.
CheckResult check_lattice(const DiamondBasis& d);
/// Corrections in q^-1 Z[q^-1], supported strictly below the index in the
/// order generated by Psi on the standard basis.
CheckResult check_triangular(const PsiEngine& psi, const DiamondBasis& d);
/// Change of basis per grade block has determinant 1 and reduces to the
/// identity mod q^-1.
CheckResult check_reduction(const DiamondBasis& d);

/// Independent solver: the unique x = e_k + sum_i p_i e_i with p_i in
/// q^-1 Z[q^-1] and Psi(x) = x, found as one rational linear system in the
/// coefficients of p_i, deepening the q^-1 degree until it is consistent.
SparseVector brute_force_diamond(const PsiEngine& psi, const ModulePtr& t, std::size_t k, int max_degree = 64);
CheckResult check_oracle(const PsiEngine& psi, const DiamondBasis& d);

/// Equality of two diamond bases of the same leaves, compared on leaf tuples.
CheckResult compare_bracketings(const DiamondBasis& a, const DiamondBasis& b);
/// Psi through the spanning vectors built from the based factor equals
/// Psi through Theta on every standard vector.
CheckResult check_generation(const PsiEngine& psi, const DiamondBasis& d);

/// Bracketing independence of the diamond basis of x (x) y (x) z.
CheckResult associativity_check(const ThetaExpansion& th, const DiamondBasis& x, const DiamondBasis& y,
                                const DiamondBasis& z, std::optional<int> depth_bound = {});

/// The map L(l_1 + ... + l_l) -> L(l_1) (x) ... (x) L(l_l) sending eta to
/// eta (x) ... (x) eta: every canonical basis element goes to a diamond
/// element, and elements killed in L(sum) go to zero.
struct ChiReport {
  CheckResult check;
  std::vector<std::pair<std::string, std::optional<std::size_t>>> images;  // label -> diamond index
};
ChiReport chi_embedding(const std::shared_ptr<const CanonicalBasisProvider>& cb, const ThetaExpansion& th,
                        const std::vector<Weight>& lambdas, int depth_bound);

/// Negative coefficients among the corrections. Enforced for symmetric type
/// with r = 0, observational otherwise.
CheckResult positivity_scan(const DiamondBasis& d, const RootDatum& datum, std::size_t r);

}  // namespace qgcb
