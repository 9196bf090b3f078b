#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "copy_model.hpp"
#include "umt/model.hpp"

using namespace umt;
using umt::fixtures::make_copy_model;

namespace {

ModelConfig tiny(std::size_t vocab = 20) {
  ModelConfig c;
  c.vocab_size = vocab;
  c.d_model = 16;
  c.layers = 2;
  c.heads = 2;
  c.ffn_dim = 32;
  c.max_len = 24;
  return c;
}

std::vector<int> random_ids(std::mt19937_64& rng, std::size_t n, int vocab) {
  std::uniform_int_distribution<int> d(kFirstCorpusId, vocab - 1);
  std::vector<int> out(n);
  for (auto& x : out) x = d(rng);
  return out;
}

template <class Real>
std::vector<Real> values(const Tensor<Real>& t) {
  return {t.data().begin(), t.data().end()};
}

// Expected parameter count from the documented shapes.
std::size_t formula(const ModelConfig& c) {
  const std::size_t d = c.d_model, f = c.ffn_dim, n = c.layers;
  const std::size_t ln = 2 * d, attn = 4 * (d * d + d), ffn = d * f + f + f * d + d;
  const std::size_t enc = n * (2 * ln + attn + ffn) + ln;
  const std::size_t dec = n * (3 * ln + 2 * attn + ffn) + ln;
  return c.vocab_size * d + 2 * enc + 2 * dec;
}

}  // namespace

TEST(ModelConfig, Validation) {
  auto c = tiny();
  EXPECT_NO_THROW(c.validate());
  c.heads = 3;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = tiny();
  c.vocab_size = 3;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(ModelParams, CountMatchesShapeFormula) {
  Seq2Seq<float> m(tiny(), 1);
  EXPECT_EQ(m.count_params(), formula(tiny()));
}

TEST(ModelParams, DefaultConfigCount) {
  ModelConfig c;
  c.vocab_size = 86;
  Seq2Seq<float> m(c, 1);
  EXPECT_EQ(m.count_params(), 128u * 86u + 2778112u);
  EXPECT_EQ(formula(c), 128u * 86u + 2778112u);
}

TEST(ModelParams, EmbeddingIsSharedAndTied) {
  Seq2Seq<double> m(tiny(), 2);
  const auto params = m.parameters();
  EXPECT_EQ(params[0].name, "embedding");
  EXPECT_EQ(params[0].tensor.size(), tiny().vocab_size * tiny().d_model);
  // only one (V, d) tensor exists: the output projection is the embedding
  std::size_t tables = 0;
  for (const auto& p : params)
    if (p.tensor.shape() == Shape{tiny().vocab_size, tiny().d_model}) ++tables;
  EXPECT_EQ(tables, 1u);

  const std::vector<int> src{7, 8, 9, kEos};
  const std::vector<int> tgt{kBos, 10, 11};
  auto before_s = values(m.encode(Side::Src, src).states);
  auto before_t = values(m.encode(Side::Tgt, src).states);
  auto before_logits = values(m.decode_teacher_forced(Side::Tgt, m.encode(Side::Src, src), tgt));
  for (auto& x : m.embedding().mutable_data()) x *= 1.5;
  EXPECT_NE(values(m.encode(Side::Src, src).states), before_s);
  EXPECT_NE(values(m.encode(Side::Tgt, src).states), before_t);
  EXPECT_NE(values(m.decode_teacher_forced(Side::Tgt, m.encode(Side::Src, src), tgt)),
            before_logits);
}

TEST(Encode, ShapeAndDeterminism) {
  Seq2Seq<float> m(tiny(), 3);
  const std::vector<int> ids{7, 8, 9, 10, kEos};
  const auto h = m.encode(Side::Src, ids);
  EXPECT_EQ(h.states.shape(), (Shape{5, 16}));
  EXPECT_EQ(h.valid.size(), 5u);
  EXPECT_EQ(values(h.states), values(m.encode(Side::Src, ids).states));
  Seq2Seq<float> same_seed(tiny(), 3);
  EXPECT_EQ(values(h.states), values(same_seed.encode(Side::Src, ids).states));
}

TEST(Encode, OverLengthAndBadIdsRejected) {
  Seq2Seq<float> m(tiny(), 3);
  EXPECT_THROW(m.encode(Side::Src, std::vector<int>(25, 7)), std::invalid_argument);
  EXPECT_THROW(m.encode(Side::Src, std::vector<int>{7, 99}), std::invalid_argument);
  EXPECT_THROW(m.encode(Side::Src, std::vector<int>{}), std::invalid_argument);
}

TEST(Encode, PadTailDoesNotChangeUnmaskedOutputs) {
  Seq2Seq<double> m(tiny(), 4);
  const std::vector<int> ids{7, 8, 9, kEos};
  const auto base = m.encode(Side::Tgt, ids);
  for (std::size_t tail : {1u, 3u, 6u}) {
    auto padded = ids;
    padded.insert(padded.end(), tail, kPad);
    const auto h = m.encode(Side::Tgt, padded);
    EXPECT_EQ(h.valid[4], 0);
    for (std::size_t i = 0; i < ids.size() * 16; ++i)
      EXPECT_NEAR(h.states.at(i), base.states.at(i), 1e-5);
  }
}

TEST(Decode, RequiresBos) {
  Seq2Seq<float> m(tiny(), 5);
  const auto h = m.encode(Side::Src, std::vector<int>{7, kEos});
  EXPECT_THROW(m.decode_teacher_forced(Side::Tgt, h, std::vector<int>{7, 8}),
               std::invalid_argument);
}

TEST(Decode, CausalMask) {
  Seq2Seq<double> m(tiny(), 6);
  const auto h = m.encode(Side::Src, std::vector<int>{7, 8, 9, kEos});
  std::vector<int> tgt{kBos, 10, 11, 12, 13};
  const auto a = m.decode_teacher_forced(Side::Tgt, h, tgt);
  for (std::size_t t = 1; t < tgt.size(); ++t) {
    auto changed = tgt;
    changed[t] = changed[t] == 14 ? 15 : 14;
    const auto b = m.decode_teacher_forced(Side::Tgt, h, changed);
    const std::size_t v = tiny().vocab_size;
    for (std::size_t row = 0; row < t; ++row)
      for (std::size_t c = 0; c < v; ++c)
        EXPECT_EQ(a.at(row * v + c), b.at(row * v + c)) << "perturbed " << t << " row " << row;
    bool differs = false;
    for (std::size_t c = 0; c < v; ++c) differs |= a.at(t * v + c) != b.at(t * v + c);
    EXPECT_TRUE(differs);
  }
}

TEST(Decode, InitialCrossEntropyNearLogV) {
  ModelConfig c;
  c.vocab_size = 86;
  c.d_model = 64;
  c.layers = 2;
  c.heads = 4;
  c.ffn_dim = 256;
  c.max_len = 80;
  std::mt19937_64 rng(8);
  double total = 0;
  const int trials = 5;
  for (int s = 0; s < trials; ++s) {
    Seq2Seq<float> m(c, 100 + s);
    const auto src = random_ids(rng, 30, 86);
    const auto tgt = random_ids(rng, 28, 86);
    total += sequence_nll(m, Side::Src, src, Side::Tgt, tgt, Reduction::Mean).item();
  }
  Tape<float>::active().clear();
  EXPECT_NEAR(total / trials, std::log(86.0), 0.5);
}

TEST(Generate, MaxLenOneGivesSingleToken) {
  Seq2Seq<float> m(tiny(), 9);
  const auto out = m.generate_greedy(Side::Src, Side::Tgt, std::vector<int>{7, 8, kEos}, 1);
  EXPECT_EQ(out.size(), 1u);
}

TEST(Generate, DeterministicAndRecordsNothing) {
  Seq2Seq<float> m(tiny(), 10);
  const std::vector<int> src{7, 8, 9, 10, kEos};
  const auto a = m.generate_greedy(Side::Tgt, Side::Src, src, 15);
  EXPECT_EQ(Tape<float>::active().size(), 0u);
  EXPECT_EQ(a, m.generate_greedy(Side::Tgt, Side::Src, src, 15));
}

TEST(Generate, NeverEmitsPadBosOrBlank) {
  // bias the output towards the excluded ids: their embedding rows align
  // with everything the decoder produces
  std::mt19937_64 rng(11);
  for (int seed = 0; seed < 5; ++seed) {
    Seq2Seq<float> m(tiny(), 20 + seed);
    auto e = m.embedding().mutable_data();
    for (int id : {kPad, kBos, kBlank})
      for (std::size_t c = 0; c < 16; ++c) e[id * 16 + c] *= 25.0f;
    const auto out = m.generate_greedy(Side::Src, Side::Tgt, random_ids(rng, 6, 20), 20);
    for (int id : out) {
      EXPECT_NE(id, kPad);
      EXPECT_NE(id, kBos);
      EXPECT_NE(id, kBlank);
    }
  }
}

TEST(Generate, MatchesTeacherForcedArgmax) {
  std::mt19937_64 rng(12);
  for (int seed = 0; seed < 4; ++seed) {
    Seq2Seq<float> m(tiny(), 30 + seed);
    const auto src = encoder_input(random_ids(rng, 7, 20));
    const auto out = m.generate_greedy(Side::Src, Side::Tgt, src, 12);
    std::vector<int> forced{kBos};
    forced.insert(forced.end(), out.begin(), out.end());
    const auto logits = m.decode_teacher_forced(Side::Tgt, m.encode(Side::Src, src), forced);
    Tape<float>::active().clear();
    const std::size_t v = tiny().vocab_size;
    for (std::size_t t = 0; t < out.size(); ++t) {
      int best = -1;
      float best_v = -1e30f;
      for (std::size_t c = 0; c < v; ++c) {
        if (c == kPad || c == kBos || c == kBlank) continue;
        if (logits.at(t * v + c) > best_v) {
          best_v = logits.at(t * v + c);
          best = static_cast<int>(c);
        }
      }
      EXPECT_EQ(out[t], best) << "position " << t;
    }
  }
}

TEST(Generate, PrefixStability) {
  std::mt19937_64 rng(13);
  for (int seed = 0; seed < 4; ++seed) {
    Seq2Seq<float> m(tiny(), 40 + seed);
    const auto src = encoder_input(random_ids(rng, 6, 20));
    const auto out = m.generate_greedy(Side::Src, Side::Tgt, src, 14);
    for (std::size_t k = 0; k <= out.size(); ++k) {
      const std::vector<int> prefix(out.begin(), out.begin() + k);
      EXPECT_EQ(m.generate_greedy_from(Side::Src, Side::Tgt, src, prefix, 14), out) << k;
    }
  }
}

TEST(Generate, BatchMatchesOneAtATime) {
  std::mt19937_64 rng(15);
  Seq2Seq<double> m(tiny(), 50);
  std::vector<std::vector<int>> sources;
  for (std::size_t n = 1; n <= 9; ++n) sources.push_back(encoder_input(random_ids(rng, n, 20)));
  for (Side a : {Side::Src, Side::Tgt}) {
    const auto batch = m.generate_greedy_batch(a, Side::Tgt, sources, 16);
    ASSERT_EQ(batch.size(), sources.size());
    for (std::size_t i = 0; i < sources.size(); ++i)
      EXPECT_EQ(batch[i], m.generate_greedy(a, Side::Tgt, sources[i], 16)) << i;
  }
  EXPECT_TRUE(m.generate_greedy_batch(Side::Src, Side::Src, {}, 16).empty());
}

TEST(CopyModel, GeneratesItsInput) {
  auto m = make_copy_model<double>(9);
  // three-token example from the design notes, then longer ones
  const std::vector<int> three{6, 7, 8};
  EXPECT_EQ(strip_eos(m.generate_greedy(Side::Src, Side::Src, encoder_input(three), 10)), three);
  std::mt19937_64 rng(14);
  std::uniform_int_distribution<int> tok(kFirstCorpusId, 8);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<int> ids(1 + trial % 25);
    for (auto& x : ids) x = tok(rng);
    for (Side a : {Side::Src, Side::Tgt})
      for (Side b : {Side::Src, Side::Tgt}) {
        const auto out = m.generate_greedy(a, b, encoder_input(ids), 30);
        ASSERT_FALSE(out.empty());
        EXPECT_EQ(out.back(), kEos);
        EXPECT_EQ(strip_eos(out), ids);
      }
  }
}

TEST(CopyModel, NllNearZero) {
  auto m = make_copy_model<double>(12);
  const std::vector<int> ids{6, 9, 11, 7, 7, 10, 8, 6};
  const double nll = sequence_nll(m, Side::Tgt, ids, Side::Tgt, ids, Reduction::Mean).item();
  Tape<double>::active().clear();
  EXPECT_LT(nll, 1e-4);
}

TEST(SharedEmbedding, OnlyTiedOutputPathReachesUnusedRows) {
  // A Src-only character never enters the Tgt-side pass, so its row's
  // gradient is exactly the softmax term of the tied output projection.
  Seq2Seq<double> m(tiny(), 15);
  const std::vector<int> tgt_content{7, 8, 9, 7};
  const int src_only = 12;
  const std::size_t v = tiny().vocab_size, d = tiny().d_model;

  backward(sequence_nll(m, Side::Tgt, tgt_content, Side::Tgt, tgt_content, Reduction::Sum));
  const std::vector<double> g_ce(m.embedding().grad().begin() + src_only * d,
                                 m.embedding().grad().begin() + (src_only + 1) * d);
  m.embedding().clear_grad();
  for (auto& p : m.parameters()) p.tensor.clear_grad();

  const auto seq = decoder_sequence(tgt_content);
  const auto logits = m.decode_teacher_forced(Side::Tgt, m.encode(Side::Tgt, encoder_input(tgt_content)), seq);
  std::vector<double> weight(logits.size(), 0.0);
  for (std::size_t t = 0; t + 1 < seq.size(); ++t) {
    double mx = -1e300, z = 0;
    for (std::size_t c = 0; c < v; ++c) mx = std::max(mx, logits.at(t * v + c));
    for (std::size_t c = 0; c < v; ++c) z += std::exp(logits.at(t * v + c) - mx);
    weight[t * v + src_only] = std::exp(logits.at(t * v + src_only) - mx) / z;
  }
  backward(sum(mul(logits, Tensor<double>::from(logits.shape(), weight))));
  for (std::size_t c = 0; c < d; ++c)
    EXPECT_NEAR(m.embedding().grad()[src_only * d + c], g_ce[c], 1e-10);
  for (auto& p : m.parameters()) p.tensor.clear_grad();
}

TEST(SharedEmbedding, CharacterOnBothSidesGetsBothGradients) {
  Seq2Seq<double> m(tiny(), 16);
  const std::vector<int> src{7, 8, 9, 10, 11};
  const std::vector<int> tgt{7, 13, 14};
  const int shared = 7;
  const std::size_t d = tiny().d_model;
  auto row_grad = [&](const Tensor<double>& loss) {
    backward(loss);
    std::vector<double> g(m.embedding().grad().begin() + shared * d,
                          m.embedding().grad().begin() + (shared + 1) * d);
    for (auto& p : m.parameters()) p.tensor.clear_grad();
    return g;
  };
  const auto gs = row_grad(sequence_nll(m, Side::Src, src, Side::Src, src, Reduction::Sum));
  const auto gt = row_grad(sequence_nll(m, Side::Tgt, tgt, Side::Tgt, tgt, Reduction::Sum));
  const auto both = row_grad(add(sequence_nll(m, Side::Src, src, Side::Src, src, Reduction::Sum),
                                 sequence_nll(m, Side::Tgt, tgt, Side::Tgt, tgt, Reduction::Sum)));
  double ns = 0, nt = 0;
  for (std::size_t c = 0; c < d; ++c) {
    ns += gs[c] * gs[c];
    nt += gt[c] * gt[c];
    EXPECT_NEAR(both[c], gs[c] + gt[c], 1e-10);
  }
  EXPECT_GT(ns, 1e-8);
  EXPECT_GT(nt, 1e-8);
}

TEST(Framing, Helpers) {
  const std::vector<int> c{7, 8};
  EXPECT_EQ(encoder_input(c), (std::vector<int>{7, 8, kEos}));
  EXPECT_EQ(decoder_sequence(c), (std::vector<int>{kBos, 7, 8, kEos}));
  EXPECT_EQ(strip_eos(std::vector<int>{7, kEos, 9}), (std::vector<int>{7}));
  EXPECT_EQ(strip_eos(std::vector<int>{7, 9}), (std::vector<int>{7, 9}));
  EXPECT_EQ(counted_targets(std::vector<int>{7, kSegPad, 8}), 4u);
  EXPECT_EQ(counted_targets(std::vector<int>{7, kSegPad, 8}, true), 3u);
}
