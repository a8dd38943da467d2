#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "qgcb/canonical.hpp"
#include "qgcb/errors.hpp"
#include "qgcb/falgebra.hpp"
#include "qgcb/serialize.hpp"

using namespace qgcb;

namespace {

LaurentPoly qi(int e) { return LaurentPoly::q(e); }

FElement random_element(const FAlgebra& f, const NuWeight& nu, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> c(-3, 3), e(-4, 4);
  auto x = f.zero(nu);
  for (auto& coord : x.coords) coord = RatFunc(LaurentPoly::monomial(Integer(c(rng)), e(rng)) + LaurentPoly::monomial(Integer(c(rng)), e(rng)));
  return x;
}

}  // namespace

TEST(FAlgebra, RankOneDimensions) {
  FAlgebra f(RootDatum::preset("A1"));
  for (int n = 0; n <= 6; ++n) EXPECT_EQ(f.dim(NuWeight{{n}}), 1u);
}

TEST(FAlgebra, DimensionsMatchRootPartitions) {
  for (std::string name : {"A2", "B2"}) {
    auto d = RootDatum::preset(name);
    FAlgebra f(d);
    for (int h = 0; h <= 6; ++h)
      for (auto nu : nu_weights_of_height(2, h)) EXPECT_EQ((long long)f.dim(nu), d.positive_root_partitions(nu)) << name << nu.to_string();
  }
  FAlgebra a2(RootDatum::preset("A2"));
  EXPECT_EQ(a2.dim(NuWeight{{1, 1}}), 2u);
  EXPECT_EQ(a2.dim(NuWeight{{2, 1}}), 2u);
}

TEST(FAlgebra, ProductsAndDividedPowers) {
  FAlgebra f(RootDatum::preset("A1"));
  auto sq = f.word({0, 0});
  auto div = f.divided_monomial(DividedMonomial{{{0, 2}}});
  EXPECT_EQ(sq, RatFunc(quantum_integer(2, 1)) * div);
  auto x = f.word({0, 0, 0});
  EXPECT_EQ(f.multiply(f.one(), x), x);
  EXPECT_EQ(f.multiply(x, f.one()), x);
  EXPECT_EQ(f.multiply(f.word({0}), f.word({0, 0})), x);
}

TEST(FAlgebra, SerreElementIsInTheRadical) {
  FAlgebra f(RootDatum::preset("A2"));
  WordComb serre{{{0, 0, 1}, LaurentPoly(1)}, {{0, 1, 0}, -quantum_integer(2, 1)}, {{1, 0, 0}, LaurentPoly(1)}};
  EXPECT_TRUE(f.in_radical(NuWeight{{2, 1}}, serre));
  EXPECT_TRUE(f.project(NuWeight{{2, 1}}, serre).is_zero());
  WordComb not_serre{{{0, 0, 1}, LaurentPoly(1)}, {{1, 0, 0}, LaurentPoly(1)}};
  EXPECT_FALSE(f.in_radical(NuWeight{{2, 1}}, not_serre));
}

TEST(FAlgebra, FormOnGenerators) {
  FAlgebra f(RootDatum::preset("A2"));
  auto t0 = f.word({0}), t1 = f.word({1});
  RatFunc tt = RatFunc(LaurentPoly(1)) / RatFunc(LaurentPoly(1) - qi(-2));
  EXPECT_EQ(f.inner_product(t0, t0), tt);
  EXPECT_TRUE(f.inner_product(t0, t1).is_zero());
  EXPECT_EQ(f.inner_product(f.one(), f.one()), RatFunc(1));

  FAlgebra a1(RootDatum::preset("A1"));
  auto d2 = a1.divided_monomial(DividedMonomial{{{0, 2}}});
  RatFunc expected = RatFunc(LaurentPoly(1)) / RatFunc((LaurentPoly(1) - qi(-2)) * (LaurentPoly(1) - qi(-4)));
  EXPECT_EQ(a1.inner_product(d2, d2), expected);
}

TEST(FAlgebra, KashiwaraMaps) {
  FAlgebra f(RootDatum::preset("A2"));
  auto [r0, l0] = f.kashiwara_maps(0, f.word({0}));
  EXPECT_EQ(r0, f.one());
  EXPECT_EQ(l0, f.one());
  auto [r1, l1] = f.kashiwara_maps(1, f.word({0}));
  EXPECT_TRUE(r1.is_zero());
  EXPECT_TRUE(l1.is_zero());

  FAlgebra a1(RootDatum::preset("A1"));
  for (int n = 1; n <= 4; ++n) {
    auto [r, l] = a1.kashiwara_maps(0, a1.divided_monomial(DividedMonomial{{{0, n}}}));
    auto lower = a1.divided_monomial(DividedMonomial{n > 1 ? std::vector<std::pair<int, int>>{{0, n - 1}} : std::vector<std::pair<int, int>>{}});
    EXPECT_EQ(r, RatFunc(qi(n - 1)) * lower) << n;
    EXPECT_EQ(l, RatFunc(qi(n - 1)) * lower) << n;
  }
}

TEST(FAlgebra, TwistedCoproductOfAGenerator) {
  FAlgebra f(RootDatum::preset("A2"));
  auto t0 = f.word({0}), t1 = f.word({1});
  auto r = f.twisted_coproduct(t0);
  RatFunc tt = f.inner_product(t0, t0);
  EXPECT_EQ(f.pair_tensor(r, t0, f.one()), tt);
  EXPECT_EQ(f.pair_tensor(r, f.one(), t0), tt);
  EXPECT_TRUE(f.pair_tensor(r, t1, f.one()).is_zero());
}

TEST(FAlgebra, FormIsSymmetricAndAdjoint) {
  FAlgebra f(RootDatum::preset("A2"));
  std::mt19937_64 rng(7);
  for (const auto& nu : {NuWeight{{1, 1}}, NuWeight{{2, 1}}, NuWeight{{1, 2}}, NuWeight{{2, 2}}}) {
    for (int rep = 0; rep < 3; ++rep) {
      auto x = random_element(f, nu, rng), y = random_element(f, nu, rng);
      EXPECT_EQ(f.inner_product(x, y), f.inner_product(y, x));
      for (int i = 0; i < 2; ++i) {
        if (nu.mult[i] == 0) continue;
        auto smaller = nu - NuWeight::simple(2, i);
        auto z = random_element(f, smaller, rng);
        auto tt = f.inner_product(f.word({i}), f.word({i}));
        auto [ri, ir] = f.kashiwara_maps(i, y);
        EXPECT_EQ(f.inner_product(f.left_mult(i, z), y), tt * f.inner_product(z, ir));
        EXPECT_EQ(f.inner_product(f.right_mult(z, i), y), tt * f.inner_product(z, ri));
      }
    }
  }
}

TEST(FAlgebra, BarInvolution) {
  FAlgebra a1(RootDatum::preset("A1"));
  auto d3 = a1.divided_monomial(DividedMonomial{{{0, 3}}});
  EXPECT_EQ(a1.bar(d3), d3);

  FAlgebra f(RootDatum::preset("A2"));
  auto w = f.word({0, 1});
  auto x = RatFunc(qi(1) + qi(-2)) * w;
  EXPECT_EQ(f.bar(x), RatFunc(qi(-1) + qi(2)) * w);
  std::mt19937_64 rng(11);
  for (int h = 1; h <= 4; ++h)
    for (const auto& nu : nu_weights_of_height(2, h)) {
      auto y = random_element(f, nu, rng);
      EXPECT_EQ(f.bar(f.bar(y)), y) << nu.to_string();
      EXPECT_EQ(f.bar(RatFunc(qi(3)) * y), RatFunc(qi(-3)) * f.bar(y));
    }
}

TEST(CanonicalBasis, RankOneIsDividedPowers) {
  auto f = std::make_shared<FAlgebra>(RootDatum::preset("A1"));
  CanonicalBasisProvider cb(f);
  EXPECT_EQ(cb.method(), CbMethod::Rank1);
  for (int n = 0; n <= 4; ++n) {
    auto b = cb.basis(NuWeight{{n}});
    ASSERT_EQ(b->size(), 1u);
    auto expected = f->divided_monomial(DividedMonomial{n ? std::vector<std::pair<int, int>>{{0, n}} : std::vector<std::pair<int, int>>{}});
    EXPECT_EQ((*b)[0].element, expected);
  }
}

TEST(CanonicalBasis, ClosedFormAgreesWithEngine) {
  auto f = std::make_shared<FAlgebra>(RootDatum::preset("A2"));
  CanonicalBasisProvider closed(f, CbMethod::A2ClosedForm), engine(f, CbMethod::Engine);
  for (int h = 0; h <= 5; ++h)
    for (const auto& nu : nu_weights_of_height(2, h)) {
      std::vector<std::vector<RatFunc>> a, b;
      for (const auto& e : *closed.basis(nu)) a.push_back(e.element.coords);
      for (const auto& e : *engine.basis(nu)) b.push_back(e.element.coords);
      auto less = [](const std::vector<RatFunc>& x, const std::vector<RatFunc>& y) {
        return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end(),
                                            [](const RatFunc& s, const RatFunc& t) { return s.to_string() < t.to_string(); });
      };
      std::sort(a.begin(), a.end(), less);
      std::sort(b.begin(), b.end(), less);
      EXPECT_EQ(a, b) << nu.to_string();
    }
  EXPECT_FALSE(CanonicalBasisProvider::supports(CbMethod::A2ClosedForm, RootDatum::preset("B2")));
}

TEST(CanonicalBasis, EngineCertifies) {
  for (std::string name : {"A2", "B2", "A1^(1)"}) {
    auto f = std::make_shared<FAlgebra>(RootDatum::preset(name));
    CanonicalBasisProvider p(f, CbMethod::Engine);
    for (int h = 0; h <= 4; ++h)
      for (auto nu : nu_weights_of_height(2, h)) {
        auto c = p.certify(nu);
        EXPECT_TRUE(c.ok()) << name << nu.to_string() << (c.failures.empty() ? "" : c.failures[0]);
        EXPECT_EQ(c.size, c.expected_dim);
      }
  }
}

TEST(CanonicalBasis, JsonRoundTrip) {
  auto f = std::make_shared<FAlgebra>(RootDatum::preset("B2"));
  CanonicalBasisProvider p(f);
  for (const auto& nu : {NuWeight{{1, 1}}, NuWeight{{2, 1}}, NuWeight{{1, 2}}}) {
    auto b = p.basis(nu);
    auto j = io::canonical_basis_to_json(nu, *b);
    auto back = io::canonical_basis_from_json(*f, j);
    ASSERT_EQ(back.size(), b->size());
    for (std::size_t k = 0; k < back.size(); ++k) {
      EXPECT_EQ(back[k].element, (*b)[k].element);
      EXPECT_EQ(back[k].label(), (*b)[k].label());
    }
    EXPECT_EQ(io::canonical_basis_to_json(nu, back).dump(), j.dump());
  }
}
