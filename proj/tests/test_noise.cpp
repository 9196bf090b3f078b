#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "umt/noise.hpp"

using namespace umt;

namespace {

// a..d stand for corpus ids 10..13
constexpr int a = 10, b = 11, c = 12, d = 13;

}  // namespace

TEST(Noise, ZeroSpecIsIdentity) {
  NoiseSpec spec{0, 0, 0};
  std::mt19937_64 rng(1);
  const TokenSeq seq{{a, b, c, d, a}, Side::Src};
  for (int i = 0; i < 50; ++i) EXPECT_EQ(add_noise(seq, spec, rng), seq);
}

TEST(Noise, DropAllGivesEmpty) {
  NoiseSpec spec{1, 0, 0};
  std::mt19937_64 rng(1);
  EXPECT_TRUE(add_noise({{a, b, c, d}, Side::Tgt}, spec, rng).ids.empty());
}

TEST(Noise, PinnedDrawsHandSimulated) {
  // Stages in order drop -> blank -> shuffle with k = 2.
  NoiseSpec spec{0.1, 0.1, 2};
  NoiseDraws draws;
  draws.drop = {0.5, 0.5, 0.5, 0.5};     // keep all
  draws.blank = {0.9, 0.9, 0.05, 0.9};   // blank token at index 2
  draws.shift = {0.9, 0.1, 0.0, 0.3};    // keys 1.8, 1.2, 2.0, 3.6
  // sorted by key: b(1.2), a(1.8), <blank>(2.0), d(3.6)
  const std::vector<int> ids{a, b, c, d};
  EXPECT_EQ(apply_noise(ids, spec, draws), (std::vector<int>{b, a, kBlank, d}));
}

TEST(Noise, PinnedDrawsWithDrop) {
  NoiseSpec spec{0.3, 0.0, 1};
  NoiseDraws draws;
  draws.drop = {0.9, 0.1, 0.9, 0.9};  // drop b
  draws.blank = {0.5, 0.5, 0.5};
  draws.shift = {0.99, 0.0, 0.5};     // keys 0.99, 1.0, 2.5 over [a, c, d]
  const std::vector<int> ids{a, b, c, d};
  EXPECT_EQ(apply_noise(ids, spec, draws), (std::vector<int>{a, c, d}));
}

TEST(Noise, EqualKeysKeepOriginalOrder) {
  NoiseSpec spec{0, 0, 1};
  NoiseDraws draws{{0.5, 0.5}, {0.5, 0.5}, {1.0, 0.0}};  // keys 1.0, 1.0
  const std::vector<int> ids{a, b};
  EXPECT_EQ(apply_noise(ids, spec, draws), (std::vector<int>{a, b}));
}

TEST(Noise, DisplacementBoundedByWindow) {
  for (int k : {0, 1, 2, 3, 5}) {
    NoiseSpec spec{0, 0, k};
    std::mt19937_64 rng(1000 + k);
    std::vector<int> ids(20);
    for (int i = 0; i < 20; ++i) ids[i] = 100 + i;
    int max_seen = 0;
    for (int trial = 0; trial < 10000; ++trial) {
      const auto out = add_noise({ids, Side::Src}, spec, rng).ids;
      ASSERT_EQ(out.size(), ids.size());
      for (int j = 0; j < 20; ++j) {
        const int i = out[j] - 100;
        max_seen = std::max(max_seen, std::abs(i - j));
        ASSERT_LE(std::abs(i - j), k) << "trial " << trial;
      }
    }
    // keys i + U[0,k) never cross for k = 1
    if (k > 1) EXPECT_GT(max_seen, 0);
  }
}

TEST(Noise, SegPadIsOrdinaryToken) {
  NoiseSpec spec{0, 1, 0};
  std::mt19937_64 rng(4);
  const auto out = add_noise({{a, kSegPad, b}, Side::Tgt}, spec, rng);
  EXPECT_EQ(out.ids, (std::vector<int>{kBlank, kBlank, kBlank}));
  EXPECT_EQ(out.side, Side::Tgt);
}

TEST(Noise, InvalidSpecRejected) {
  EXPECT_THROW((NoiseSpec{1.5, 0, 0}.validate()), std::invalid_argument);
  EXPECT_THROW((NoiseSpec{0, -0.1, 0}.validate()), std::invalid_argument);
  EXPECT_THROW((NoiseSpec{0, 0, -1}.validate()), std::invalid_argument);
}

TEST(Noise, SeededRngIsDeterministic) {
  NoiseSpec spec;
  std::mt19937_64 r1(7), r2(7);
  const TokenSeq seq{{a, b, c, d, a, b, c, d}, Side::Src};
  for (int i = 0; i < 20; ++i) EXPECT_EQ(add_noise(seq, spec, r1), add_noise(seq, spec, r2));
}
