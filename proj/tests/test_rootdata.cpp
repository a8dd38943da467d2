#include <gtest/gtest.h>

#include "qgcb/errors.hpp"
#include "qgcb/rootdata.hpp"

using namespace qgcb;

TEST(RootData, RankOnePairingAndRootShift) {
  auto d = RootDatum::preset("A1");
  Weight l{{3}};
  EXPECT_EQ(d.pairing(0, l), 3);
  EXPECT_EQ((l - d.simple_root(0)).coords, std::vector<int>({1}));
}

TEST(RootData, A2RootSubtraction) {
  auto d = RootDatum::preset("A2");
  Weight l{{1, 0}};
  EXPECT_EQ((l - d.simple_root(0)).coords, std::vector<int>({-1, 1}));
}

TEST(RootData, AffineAccepted) {
  auto d = RootDatum::preset("A1^(1)");
  EXPECT_EQ(d.d(0), 1);
  EXPECT_EQ(d.d(1), 1);
  EXPECT_TRUE(d.is_symmetric());
  EXPECT_FALSE(d.is_finite_type());
  EXPECT_THROW(d.positive_root_partitions(NuWeight{{1, 1}}), DomainError);
  // The null root pairs to zero with every simple coroot.
  EXPECT_EQ(d.to_weight(NuWeight{{1, 1}}), d.zero_weight());
}

TEST(RootData, RejectsBadCartanData) {
  EXPECT_THROW(RootDatum(CartanDatum{"x", {1, 1}, {{2, -1}, {-2, 2}}}), DomainError);
  EXPECT_THROW(RootDatum(CartanDatum{"x", {1, 1}, {{2, 0}, {-1, 2}}}), DomainError);
  EXPECT_THROW(RootDatum(CartanDatum{"x", {1}, {{3}}}), DomainError);
  EXPECT_THROW(RootDatum(CartanDatum{"x", {1, 1}, {{2, 1}, {1, 2}}}), DomainError);
  EXPECT_THROW(RootDatum::preset("E8"), DomainError);
}

TEST(RootData, HeightAndDominance) {
  EXPECT_EQ((NuWeight{{1, 1}}).height(), 2);
  EXPECT_EQ((NuWeight{{2, 1}}).height(), 3);
  EXPECT_TRUE((Weight{{0, 0, 0}}).is_dominant());
  EXPECT_FALSE((Weight{{1, -1}}).is_dominant());
  EXPECT_THROW(NuWeight({{1, 0}}) - NuWeight({{0, 1}}), DomainError);
}

TEST(RootData, PositiveRootPartitions) {
  auto a2 = RootDatum::preset("A2");
  EXPECT_EQ(a2.positive_root_partitions(NuWeight{{1, 1}}), 2);
  EXPECT_EQ(a2.positive_root_partitions(NuWeight{{2, 1}}), 2);
  auto a1 = RootDatum::preset("A1");
  for (int k = 0; k < 6; ++k) EXPECT_EQ(a1.positive_root_partitions(NuWeight{{k}}), 1);
  EXPECT_EQ(RootDatum::preset("B2").positive_roots().size(), 4u);
  EXPECT_EQ(a2.positive_roots().size(), 3u);
}

TEST(RootDataProperty, PairingIsAdditiveInRoots) {
  for (const auto& name : RootDatum::preset_names()) {
    auto d = RootDatum::preset(name);
    for (int a = -3; a <= 3; ++a)
      for (int b = -3; b <= 3; ++b) {
        Weight l{{a, b}};
        l.coords.resize(d.rank());
        for (std::size_t i = 0; i < d.rank(); ++i)
          for (std::size_t j = 0; j < d.rank(); ++j)
            EXPECT_EQ(d.pairing(i, l + d.simple_root(j)), d.pairing(i, l) + d.a(i, j));
      }
  }
}
