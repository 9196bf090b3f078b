#pragma once

// Unsupervised training of the four-component model from two unaligned
// monolingual corpora:
//
//   lm  - denoising reconstruction of each side through its own
//         encoder/decoder pair.
//   bt  - online back-translation: translate with the current model (no
//         gradient), then reconstruct the original from the translation.
//   rl  - repetition penalty on poem expansions: the log-likelihood of each
//         greedy expansion is weighted by (repetition ratio - tau).
//
// The optimized objective is alpha1*lm + alpha2*bt (+ alpha3*rl).

#include <functional>
#include <random>
#include <stdexcept>
#include <vector>

#include "umt/model.hpp"
#include "umt/padding.hpp"
#include "umt/train_config.hpp"

namespace umt {

struct TrainingCorpora {
  std::vector<std::vector<int>> src;  // verbose examples
  std::vector<PoemLines> tgt;         // poems, one id list per line
};

using Batch = std::vector<std::vector<int>>;

// Poem-side sequence used for every training purpose: padded with the
// schema when padding is enabled, plain concatenation of lines otherwise.
std::vector<int> poem_sequence(const PoemLines& poem, const TrainConfig& config);

struct GenerationLimits {
  std::size_t src = 0;  // max ids when producing the Src side
  std::size_t tgt = 0;  // max ids when producing the Tgt side
};

// Greedy translations of both batches, EOS removed: tgt_from_src[i] is the
// Tgt-side rendering of src_batch[i], src_from_tgt[i] the Src-side
// expansion of tgt_batch[i].
struct BackTranslations {
  Batch tgt_from_src;
  Batch src_from_tgt;
};

template <class Real>
BackTranslations back_translate(const Seq2Seq<Real>& model, const Batch& src_batch,
                                const Batch& tgt_batch, const GenerationLimits& limits);

// Mean over the two sides of the per-token reconstruction cross-entropy
// from noised inputs. Throws std::invalid_argument for empty batches.
template <class Real>
Tensor<Real> lm_loss(const Seq2Seq<Real>& model, const Batch& src_batch, const Batch& tgt_batch,
                     const NoiseSpec& noise, std::mt19937_64& rng);

// Mean over the two sides of the per-token cross-entropy of reconstructing
// each original from its back-translation. The translations are inputs
// only; no gradient reaches the passes that produced them.
template <class Real>
Tensor<Real> bt_loss_given(const Seq2Seq<Real>& model, const Batch& src_batch,
                           const Batch& tgt_batch, const BackTranslations& translations);

template <class Real>
Tensor<Real> bt_loss(const Seq2Seq<Real>& model, const Batch& src_batch, const Batch& tgt_batch,
                     const GenerationLimits& limits);

// Repetition ratio used for an expansion; an empty expansion counts as 1.
double expansion_repetition(const std::vector<int>& expansion);

// Greedy Src-side expansions of Tgt-side sequences, EOS removed.
template <class Real>
Batch expand_poems(const Seq2Seq<Real>& model, const Batch& poems, std::size_t max_len);

// Batch mean of (RR(e_i) - tau) * log P(s_i | p_i). p_i is the Tgt-side
// back-translation of the sentence s_i, e_i the greedy expansion of p_i,
// and log P the per-token mean log-likelihood of s_i + EOS under the Tgt
// encoder and Src decoder. Reconstructions of s_i whose round trip stays
// under tau repetition are reinforced; the others are pushed down.
template <class Real>
Tensor<Real> rl_loss_given(const Seq2Seq<Real>& model, const Batch& src_batch,
                           const Batch& poems, const Batch& expansions, double tau);

template <class Real>
Tensor<Real> rl_loss(const Seq2Seq<Real>& model, const Batch& src_batch, double tau,
                     const GenerationLimits& limits);

// alpha1*lm + alpha2*bt, plus alpha3*rl when enable_rl. `rl` may be
// undefined when RL is disabled.
template <class Real>
Tensor<Real> composite_loss(const Tensor<Real>& lm, const Tensor<Real>& bt,
                            const Tensor<Real>& rl, const TrainConfig& config);

double composite_value(double lm, double bt, double rl, const TrainConfig& config);

struct StepReport {
  std::size_t step = 0;
  double lm = 0;
  double bt = 0;
  double rl = 0;
  double composite = 0;
  double rr = 0;  // mean repetition ratio of the step's Src-side expansions
};

class NonFiniteLoss : public std::runtime_error {
 public:
  NonFiniteLoss(const std::string& what, std::vector<StepReport> reports)
      : std::runtime_error(what), reports_(std::move(reports)) {}
  const std::vector<StepReport>& reports() const { return reports_; }

 private:
  std::vector<StepReport> reports_;
};

struct TrainHooks {
  // Called after every optimizer step.
  std::function<void(const StepReport&)> on_step;
  // Called every checkpoint_every steps (when nonzero) and never for step 0.
  std::function<void(std::size_t step)> on_checkpoint;
};

GenerationLimits generation_limits(const TrainingCorpora& corpora, const TrainConfig& config);

// Runs config.steps optimizer steps on fresh batches sampled with the
// config seed. Throws NonFiniteLoss (carrying all reports so far) when a
// loss becomes NaN or infinite.
template <class Real>
std::vector<StepReport> train(const TrainingCorpora& corpora, const TrainConfig& config,
                              Seq2Seq<Real>& model, const TrainHooks& hooks = {});

}  // namespace umt
