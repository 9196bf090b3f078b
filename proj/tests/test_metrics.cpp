#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "copy_model.hpp"
#include "umt/evaluation.hpp"
#include "umt/metrics.hpp"

using namespace umt;

namespace {

constexpr int a = 10, b = 11, c = 12, d = 13, e = 14, f = 15;

double brute_rr(std::vector<int> s) {
  const double n = static_cast<double>(s.size());
  std::sort(s.begin(), s.end());
  const double distinct = static_cast<double>(std::unique(s.begin(), s.end()) - s.begin());
  return 1.0 - distinct / n;
}

double floored_log(double p) { return std::log(std::max(p, 1e-9)); }

}  // namespace

TEST(RepetitionRatio, MatchesDistinctCountOracle) {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> len(1, 40), alpha(1, 12), tok(0, 1000);
  for (int trial = 0; trial < 10000; ++trial) {
    const int k = alpha(rng);
    std::vector<int> s(len(rng));
    for (auto& x : s) x = tok(rng) % k;
    ASSERT_DOUBLE_EQ(repetition_ratio(s), brute_rr(s)) << trial;
  }
}

TEST(RepetitionRatio, EdgeCases) {
  EXPECT_THROW(repetition_ratio(std::vector<int>{}), std::invalid_argument);
  EXPECT_EQ(repetition_ratio(std::vector<int>{a}), 0.0);
  EXPECT_DOUBLE_EQ(repetition_ratio(std::vector<int>{a, a, a, a}), 0.75);
}

TEST(RepetitionRatio, GrowsWhenRepeatingAndShrinksWithNewTokens) {
  std::vector<int> s{a, b, c};
  double last = repetition_ratio(s);
  for (int i = 0; i < 10; ++i) {
    s.push_back(a);
    const double now = repetition_ratio(s);
    EXPECT_GT(now, last);
    last = now;
  }
  s.push_back(f);
  EXPECT_LT(repetition_ratio(s), last);
}

TEST(Bleu, IdenticalIsHundred) {
  const std::vector<int> x{a, b, c, d, e, f};
  const auto r = sentence_bleu(x, x);
  EXPECT_NEAR(r.composite, 100.0, 1e-6);
  EXPECT_NEAR(r.bleu4, 100.0, 1e-6);
  EXPECT_EQ(r.brevity_penalty, 1.0);
}

TEST(Bleu, UnigramClipping) {
  const auto r = sentence_bleu({a, a, a, a}, {a, b});
  EXPECT_NEAR(r.bleu1, 25.0, 1e-6);
  EXPECT_NEAR(r.bleu2, 0.0, 1e-6);
  EXPECT_EQ(r.brevity_penalty, 1.0);
  const double expect = std::exp((std::log(0.25) + 3 * floored_log(0)) / 4) * 100;
  EXPECT_NEAR(r.composite, expect, 1e-6);
}

TEST(Bleu, HigherOrderClipping) {
  // unigrams 3/5, bigrams 2/4, trigrams 1/3
  const auto r = sentence_bleu({a, b, a, b, a}, {a, b, a, c}, 3);
  EXPECT_NEAR(r.bleu1, 60.0, 1e-6);
  EXPECT_NEAR(r.bleu2, 50.0, 1e-6);
  EXPECT_NEAR(r.bleu3, 100.0 / 3, 1e-6);
  EXPECT_NEAR(r.composite, std::cbrt(0.1) * 100, 1e-6);
}

TEST(Bleu, BrevityPenalty) {
  const auto r = sentence_bleu({a, b}, {a, b, c, d}, 2);
  EXPECT_NEAR(r.brevity_penalty, std::exp(-1.0), 1e-12);
  EXPECT_NEAR(r.composite, 100 * std::exp(-1.0), 1e-6);
  // longer candidates are not penalized
  EXPECT_EQ(sentence_bleu({a, b, c, d, e}, {a, b, c, d}, 2).brevity_penalty, 1.0);
}

TEST(Bleu, FourGramGeometricMean) {
  // precisions 4/5, 3/4, 2/3, 1/2; their product is 0.2
  const auto r = sentence_bleu({a, b, c, d, e}, {a, b, c, d, f});
  EXPECT_NEAR(r.composite, std::pow(0.2, 0.25) * 100, 1e-6);
  EXPECT_NEAR(r.precision(3), 200.0 / 3, 1e-6);
}

TEST(Bleu, CorpusLevelPoolsCounts) {
  const std::vector<std::vector<int>> cands{{a, b}, {c}};
  const std::vector<std::vector<int>> refs{{a, b}, {d}};
  const auto r = bleu(cands, refs, 1);
  EXPECT_NEAR(r.composite, 200.0 / 3, 1e-6);
  EXPECT_EQ(r.brevity_penalty, 1.0);
}

TEST(Bleu, EmptyCandidateAndErrors) {
  const auto r = sentence_bleu({}, {a, b});
  EXPECT_EQ(r.composite, 0.0);
  EXPECT_EQ(r.brevity_penalty, 0.0);
  const std::vector<std::vector<int>> one{{a}};
  const std::vector<std::vector<int>> two{{a}, {b}};
  EXPECT_THROW(bleu(one, two), std::invalid_argument);
  EXPECT_THROW(bleu(one, one, 5), std::invalid_argument);
  EXPECT_THROW(r.precision(0), std::out_of_range);
}

TEST(Coverage, CountsContiguousExpansions) {
  const ExpansionTable rule{{7, {20, 21}}, {8, {22}}, {9, {23, 24}}};
  const std::vector<int> src{7, 8, 9, 7};
  const auto r = coverage(src, std::vector<int>{20, 21, 22, 99}, rule);
  EXPECT_DOUBLE_EQ(r.total, 0.75);
  EXPECT_DOUBLE_EQ(r.first_half, 1.0);
  EXPECT_DOUBLE_EQ(r.second_half, 0.5);
  // split expansion does not count
  EXPECT_DOUBLE_EQ(coverage(std::vector<int>{9}, std::vector<int>{23, 0, 24}, rule).total, 0.0);
}

TEST(Coverage, UnknownTokensAndOddLengths) {
  const ExpansionTable rule{{7, {20}}};
  const auto r = coverage(std::vector<int>{7, 5, 7}, std::vector<int>{20}, rule);
  EXPECT_DOUBLE_EQ(r.total, 2.0 / 3);
  EXPECT_DOUBLE_EQ(r.first_half, 1.0);
  EXPECT_DOUBLE_EQ(r.second_half, 0.5);
  const auto empty = coverage(std::vector<int>{}, std::vector<int>{20}, rule);
  EXPECT_EQ(empty.total, 0.0);
}

TEST(Perplexity, UniformModelEqualsVocabSize) {
  ModelConfig cfg;
  cfg.vocab_size = 37;
  cfg.d_model = 16;
  cfg.layers = 1;
  cfg.heads = 2;
  cfg.ffn_dim = 32;
  cfg.max_len = 32;
  Seq2Seq<double> m(cfg, 1);
  // a zero table makes every logit zero
  for (auto& x : m.embedding().mutable_data()) x = 0;
  const Batch src{{7, 8, 9}, {10, 11}};
  const Batch tgt{{12, 13, 14, 15}, {16, kSegPad, 17}};
  const double ppl = perplexity(m, Side::Src, src, Side::Tgt, tgt);
  EXPECT_NEAR(ppl / 37.0, 1.0, 1e-3);
  EXPECT_THROW(perplexity(m, Side::Src, src, Side::Tgt, Batch{{1}}), std::invalid_argument);
  EXPECT_THROW(perplexity(m, Side::Src, Batch{}, Side::Tgt, Batch{}), std::invalid_argument);
}

TEST(Evaluate, CopyModelScoresPerExample) {
  const auto m = fixtures::make_copy_model<double>(13);
  const Batch sources{{6, 7, 8}, {9, 9, 10}};
  const std::vector<PoemLines> poems{{{6, 7}, {8}}, {{11}, {12, 11, 11}}};
  EvalOptions options;
  options.rule = ExpansionTable{{6, {6}}, {7, {7}}, {8, {8}}, {11, {11}}, {12, {99}}};
  const auto r = evaluate_model(m, sources, poems, options);
  ASSERT_EQ(r.expansions.size(), 2u);
  EXPECT_EQ(r.expansions[0], (std::vector<int>{6, 7, 8}));
  EXPECT_EQ(r.expansions[1], (std::vector<int>{11, 12, 11, 11}));
  EXPECT_DOUBLE_EQ(r.rr_expansion, 0.25);
  EXPECT_DOUBLE_EQ(r.rr_reference, 1.0 / 6);
  // second poem: 12 is never covered, 11 appears three times
  EXPECT_DOUBLE_EQ(r.coverage.total, (1.0 + 0.75) / 2);
  ASSERT_EQ(r.rows.size(), 2u);
  EXPECT_EQ(r.rows[0].candidate, (std::vector<int>{6, 7, 8}));
}
