#include <gtest/gtest.h>

#include <filesystem>
#include <set>

#include "umt/metrics.hpp"
#include "umt/synth.hpp"

using namespace umt;

namespace {

SynthOptions small_options(std::uint64_t seed = 1) {
  SynthOptions o;
  o.n_train = 500;
  o.n_test = 50;
  o.seed = seed;
  return o;
}

const SynthCorpora& shared() {
  static const SynthCorpora c = gen_corpora(small_options());
  return c;
}

std::vector<int> as_ids(const std::vector<std::string>& tokens) {
  std::map<std::string, int> ids;
  std::vector<int> out;
  for (const auto& t : tokens) out.push_back(ids.emplace(t, static_cast<int>(ids.size())).first->second);
  return out;
}

}  // namespace

TEST(Synth, SentenceShape) {
  const auto& c = shared();
  ASSERT_EQ(c.terse.size(), 500u);
  ASSERT_EQ(c.verbose.size(), 500u);
  ASSERT_EQ(c.test_terse.size(), 50u);
  for (const auto& s : c.terse) {
    ASSERT_EQ(s.size(), kSynthLines);
    for (const auto& line : s) ASSERT_EQ(line.size(), kSynthLineLength);
  }
}

TEST(Synth, LengthRatioNearTwoPointThree) {
  const auto& c = shared();
  double verbose = 0;
  for (const auto& v : c.verbose) verbose += static_cast<double>(v.size());
  const double ratio = verbose / (28.0 * static_cast<double>(c.verbose.size()));
  EXPECT_GE(ratio, 2.1);
  EXPECT_LE(ratio, 2.5);
}

TEST(Synth, TerseRepetitionNearTarget) {
  const auto& c = shared();
  double total = 0;
  for (const auto& s : c.terse) total += repetition_ratio(as_ids(flatten_sentence(s)));
  EXPECT_NEAR(total / static_cast<double>(c.terse.size()), 0.1, 0.05);
}

TEST(Synth, DeterministicPerSeed) {
  const auto again = gen_corpora(small_options());
  EXPECT_EQ(again.terse, shared().terse);
  EXPECT_EQ(again.verbose, shared().verbose);
  EXPECT_EQ(again.test_verbose, shared().test_verbose);
  EXPECT_NE(gen_corpora(small_options(2)).terse, shared().terse);
}

TEST(Synth, SentencesDistinctAndSetsDisjoint) {
  const auto& c = shared();
  std::set<std::vector<std::string>> terse, verbose_source, test;
  for (const auto& s : c.terse) terse.insert(flatten_sentence(s));
  for (const auto& s : c.test_terse) test.insert(flatten_sentence(s));
  EXPECT_EQ(terse.size(), c.terse.size());
  EXPECT_EQ(test.size(), c.test_terse.size());
  const std::set<std::vector<std::string>> verbose(c.verbose.begin(), c.verbose.end());
  EXPECT_EQ(verbose.size(), c.verbose.size());
  for (const auto& t : test) EXPECT_FALSE(terse.count(t));
  // verbose training sentences are not renderings of terse training ones
  std::set<std::vector<std::string>> rendered;
  for (const auto& t : terse) rendered.insert(oracle_translate(t, c.rule));
  for (const auto& v : c.verbose) EXPECT_FALSE(rendered.count(v));
  for (const auto& v : c.test_verbose) EXPECT_FALSE(verbose.count(v));
}

TEST(Synth, TestPairsFollowRule) {
  const auto& c = shared();
  for (std::size_t i = 0; i < c.test_terse.size(); ++i)
    EXPECT_EQ(c.test_verbose[i], oracle_translate(flatten_sentence(c.test_terse[i]), c.rule));
}

TEST(SynthRule, ExpansionsPrefixFreeAndContainToken) {
  const auto& rule = shared().rule;
  ASSERT_EQ(rule.expansions.size(), 50u);
  std::size_t twos = 0;
  for (const auto& [tok, exp] : rule.expansions) {
    ASSERT_GE(exp.size(), 2u);
    ASSERT_LE(exp.size(), 3u);
    twos += exp.size() == 2;
    EXPECT_NE(std::find(exp.begin(), exp.end(), tok), exp.end());
    for (const auto& [other, e2] : rule.expansions) {
      if (other == tok) continue;
      const auto n = std::min(exp.size(), e2.size());
      EXPECT_FALSE(std::equal(exp.begin(), exp.begin() + n, e2.begin())) << tok << " vs " << other;
    }
  }
  EXPECT_EQ(twos, 45u);
}

TEST(Oracle, EmptySingleAndConcatenation) {
  auto rule = shared().rule;
  EXPECT_TRUE(oracle_translate({}, rule).empty());
  const auto& [tok, exp] = *rule.expansions.begin();
  const std::vector<std::string> one{tok};
  EXPECT_EQ(oracle_translate(one, rule), exp);

  rule.connector_p = 0;
  const auto sentence = flatten_sentence(shared().terse[0]);
  const std::vector<std::string> x(sentence.begin(), sentence.begin() + 9);
  const std::vector<std::string> y(sentence.begin() + 9, sentence.end());
  auto joined = oracle_translate(x, rule);
  const auto tail = oracle_translate(y, rule);
  joined.insert(joined.end(), tail.begin(), tail.end());
  EXPECT_EQ(oracle_translate(sentence, rule), joined);
}

TEST(Oracle, UnknownTokenRejected) {
  const std::vector<std::string> bad{"not-a-token"};
  EXPECT_THROW(oracle_translate(bad, shared().rule), std::invalid_argument);
}

TEST(SynthOptions, Bounds) {
  auto o = small_options();
  o.n_train = 100;
  EXPECT_THROW(gen_corpora(o), std::invalid_argument);
  o = small_options();
  o.vocab_size = 5;
  EXPECT_THROW(o.validate(), std::invalid_argument);
  o = small_options();
  o.repetition = 1.0;
  EXPECT_THROW(o.validate(), std::invalid_argument);
  o = small_options();
  o.connector_p = 1.5;
  EXPECT_THROW(o.validate(), std::invalid_argument);
}

TEST(SynthRule, SaveLoadRoundTrip) {
  const auto& rule = shared().rule;
  const auto path = std::filesystem::temp_directory_path() / "umt_test_rule.tsv";
  rule.save(path);
  const auto back = SynthRule::load(path);
  EXPECT_EQ(back.seed, rule.seed);
  EXPECT_EQ(back.connector_p, rule.connector_p);
  EXPECT_EQ(back.phrases, rule.phrases);
  EXPECT_EQ(back.fillers, rule.fillers);
  EXPECT_EQ(back.expansions, rule.expansions);
  const auto s = flatten_sentence(shared().test_terse[3]);
  EXPECT_EQ(oracle_translate(s, back), oracle_translate(s, rule));
  std::filesystem::remove(path);
}
