#include <gtest/gtest.h>

#include "qgcb/errors.hpp"
#include "qgcb/tensorcb.hpp"

using namespace qgcb;

namespace {

struct Env {
  std::shared_ptr<const CanonicalBasisProvider> cb;
  std::shared_ptr<ThetaExpansion> th;
  std::shared_ptr<PsiEngine> psi;

  explicit Env(const std::string& datum)
      : cb(std::make_shared<CanonicalBasisProvider>(std::make_shared<FAlgebra>(RootDatum::preset(datum)))),
        th(std::make_shared<ThetaExpansion>(cb->algebra_ptr())),
        psi(std::make_shared<PsiEngine>(th)) {}

  DiamondBasis multi(std::vector<std::vector<int>> ls, std::size_t r, int depth) const {
    MultiWeight w;
    for (auto& l : ls) w.lambdas.push_back(Weight{l});
    w.r = r;
    return multi_diamond(cb, *th, w, depth);
  }
};

void expect_all_checks(const Env& env, const DiamondBasis& d) {
  for (const auto& res : {check_bar_invariance(*env.psi, d), check_lattice(d), check_triangular(*env.psi, d),
                          check_reduction(d), check_oracle(*env.psi, d)}) {
    EXPECT_TRUE(res.passed) << res.name << ": " << res.counterexamples.front();
    EXPECT_GT(res.checked, 0u) << res.name;
  }
}

}  // namespace

TEST(TensorCb, TwoDoublets) {
  Env env("A1");
  auto d = env.multi({{1}, {1}}, 0, 4);
  ASSERT_EQ(d.size(), 4u);
  auto eta_f = *d.module->find_pair(0, 1);
  auto f_eta = *d.module->find_pair(1, 0);
  SparseVector expected{{eta_f, LaurentPoly(1)}, {f_eta, LaurentPoly::q(-1)}};
  EXPECT_EQ(d.elements[eta_f], expected);
  EXPECT_EQ(d.elements[f_eta], (SparseVector{{f_eta, LaurentPoly(1)}}));
  // the weight-zero Psi block is 2x2 unitriangular
  const auto [b, s] = d.order.where.at(eta_f);
  EXPECT_EQ(d.order.blocks[b].indices.size(), 2u);
  expect_all_checks(env, d);
  auto pos = positivity_scan(d, env.cb->algebra().datum(), 0);
  EXPECT_TRUE(pos.passed);
  EXPECT_FALSE(pos.observational);
}

TEST(TensorCb, ExtremalWeightSpacesAreStandard) {
  Env env("A2");
  auto d = env.multi({{1, 0}, {0, 1}}, 0, 4);
  for (const auto& blk : d.order.blocks)
    if (blk.indices.size() == 1) EXPECT_TRUE(blk.rho(0, 0).is_one());
  auto top = *d.module->find_pair(0, 0);
  EXPECT_EQ(d.elements[top], (SparseVector{{top, LaurentPoly(1)}}));
  expect_all_checks(env, d);
  EXPECT_TRUE(positivity_scan(d, env.cb->algebra().datum(), 0).passed);
}

TEST(TensorCb, MixedRankOne) {
  Env env("A1");
  {
    auto d = env.multi({{1}, {1}}, 1, 4);
    auto bottom = *d.module->find_pair(1, 1);  // wFeta (x) Feta
    auto top = *d.module->find_pair(0, 0);
    EXPECT_EQ(d.elements[bottom], (SparseVector{{bottom, LaurentPoly(1)}, {top, LaurentPoly::q(-1)}}));
    EXPECT_EQ(d.elements[top], (SparseVector{{top, LaurentPoly(1)}}));
  }
  for (auto [a, b] : std::vector<std::pair<int, int>>{{1, 1}, {2, 1}, {1, 3}}) {
    auto d = env.multi({{a}, {b}}, 1, 6);
    EXPECT_EQ(d.size(), static_cast<std::size_t>((a + 1) * (b + 1)));
    expect_all_checks(env, d);
    auto pos = positivity_scan(d, env.cb->algebra().datum(), 1);
    EXPECT_TRUE(pos.observational);
    EXPECT_TRUE(pos.passed);
  }
}

TEST(TensorCb, TripleProducts) {
  Env env("A1");
  for (std::size_t r : {0u, 1u, 2u, 3u}) {
    auto d = env.multi({{1}, {1}, {1}}, r, 3);
    EXPECT_EQ(d.size(), 8u);
    expect_all_checks(env, d);
    EXPECT_TRUE(check_generation(*env.psi, d).passed);
    auto leaves = multi_leaves(env.cb, MultiWeight{{Weight{{1}}, Weight{{1}}, Weight{{1}}}, r}, 3);
    for (bool left : {true, false}) EXPECT_TRUE(compare_bracketings(d, bracketed_diamond(*env.th, leaves, left, 3)).passed);
  }
}

TEST(TensorCb, DegenerateInputs) {
  Env env("A1");
  auto empty = env.multi({}, 0, 3);
  EXPECT_EQ(empty.size(), 1u);
  auto single = env.multi({{3}}, 0, 5);
  EXPECT_EQ(single.size(), 4u);
  for (std::size_t k = 0; k < single.size(); ++k) EXPECT_EQ(single.elements[k], (SparseVector{{k, LaurentPoly(1)}}));
  auto with_zero = env.multi({{0}, {2}, {0}}, 1, 4);
  EXPECT_EQ(with_zero.size(), 3u);
  expect_all_checks(env, with_zero);
  EXPECT_THROW(env.multi({{1}}, 2, 3), DomainError);
}

TEST(TensorCb, Associativity) {
  Env env("A1");
  auto l = [&](int n) { return leaf_basis(simple_quotient(env.cb, Weight{{n}}, 4)); };
  auto w = [&](int n) { return leaf_basis(omega_twist(simple_quotient(env.cb, Weight{{n}}, 4))); };
  auto plain = associativity_check(*env.th, l(1), l(1), l(1), 4);
  EXPECT_TRUE(plain.passed);
  EXPECT_EQ(plain.checked, 8u);
  auto mixed = associativity_check(*env.th, w(1), l(1), l(2), 4);
  EXPECT_TRUE(mixed.passed);
  EXPECT_THROW(associativity_check(*env.th, l(1), w(1), l(1), 4), DomainError);
}

TEST(TensorCb, ChiRankOne) {
  Env env("A1");
  for (auto ls : std::vector<std::vector<Weight>>{{Weight{{1}}, Weight{{1}}}, {Weight{{2}}, Weight{{1}}}}) {
    auto rep = chi_embedding(env.cb, *env.th, ls, 4);
    EXPECT_TRUE(rep.check.passed) << rep.check.counterexamples.front();
    int n = ls[0].coords[0] + ls[1].coords[0];
    EXPECT_EQ(rep.images.size(), static_cast<std::size_t>(n + 1));
    for (const auto& [label, idx] : rep.images) EXPECT_TRUE(idx.has_value()) << label;
  }
}

TEST(TensorCb, PositivityObservationalOutsideHypothesis) {
  Env env("B2");
  auto d = env.multi({{1, 0}, {0, 1}}, 0, 4);
  auto pos = positivity_scan(d, env.cb->algebra().datum(), 0);
  EXPECT_TRUE(pos.observational);
  EXPECT_TRUE(pos.passed);
  expect_all_checks(env, d);
}
