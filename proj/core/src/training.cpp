#include "umt/training.hpp"

#include <algorithm>
#include <cmath>

#include "umt/metrics.hpp"

namespace umt {

std::vector<int> poem_sequence(const PoemLines& poem, const TrainConfig& config) {
  if (config.enable_padding) return pad_poem(poem, config.schema).ids;
  return flatten(poem);
}

namespace {

template <class Real>
Tensor<Real> accumulate(const Tensor<Real>& total, const Tensor<Real>& term) {
  return total.defined() ? add(total, term) : term;
}

// Per-token mean of -log P(target | input) over a batch.
template <class Real>
Tensor<Real> per_token_nll(const Seq2Seq<Real>& model, Side enc, const Batch& inputs, Side dec,
                           const Batch& targets) {
  Tensor<Real> total;
  std::size_t count = 0;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    total = accumulate(total, sequence_nll(model, enc, inputs[i], dec, targets[i], Reduction::Sum));
    count += counted_targets(targets[i]);
  }
  return scale(total, Real(1) / static_cast<Real>(count));
}

void require_batches(const Batch& a, const Batch& b, const char* what) {
  if (a.empty() || b.empty()) throw std::invalid_argument(std::string(what) + ": empty batch");
}

}  // namespace

template <class Real>
BackTranslations back_translate(const Seq2Seq<Real>& model, const Batch& src_batch,
                                const Batch& tgt_batch, const GenerationLimits& limits) {
  NoGradGuard no_grad;
  BackTranslations out;
  for (auto& g : model.generate_greedy_batch(Side::Src, Side::Tgt, encoder_inputs(src_batch),
                                             limits.tgt))
    out.tgt_from_src.push_back(strip_eos(g));
  for (auto& g : model.generate_greedy_batch(Side::Tgt, Side::Src, encoder_inputs(tgt_batch),
                                             limits.src))
    out.src_from_tgt.push_back(strip_eos(g));
  return out;
}

template <class Real>
Tensor<Real> lm_loss(const Seq2Seq<Real>& model, const Batch& src_batch, const Batch& tgt_batch,
                     const NoiseSpec& noise, std::mt19937_64& rng) {
  require_batches(src_batch, tgt_batch, "lm_loss");
  Batch noised_src, noised_tgt;
  for (const auto& s : src_batch) noised_src.push_back(add_noise({s, Side::Src}, noise, rng).ids);
  for (const auto& t : tgt_batch) noised_tgt.push_back(add_noise({t, Side::Tgt}, noise, rng).ids);
  const auto src_term = per_token_nll(model, Side::Src, noised_src, Side::Src, src_batch);
  const auto tgt_term = per_token_nll(model, Side::Tgt, noised_tgt, Side::Tgt, tgt_batch);
  return scale(add(src_term, tgt_term), Real(0.5));
}

template <class Real>
Tensor<Real> bt_loss_given(const Seq2Seq<Real>& model, const Batch& src_batch,
                           const Batch& tgt_batch, const BackTranslations& translations) {
  require_batches(src_batch, tgt_batch, "bt_loss");
  if (translations.tgt_from_src.size() != src_batch.size() ||
      translations.src_from_tgt.size() != tgt_batch.size())
    throw std::invalid_argument("bt_loss: translation count does not match batch");
  // S reconstructed from T_S through E_t -> D_s, T from S_T through E_s -> D_t.
  const auto src_term =
      per_token_nll(model, Side::Tgt, translations.tgt_from_src, Side::Src, src_batch);
  const auto tgt_term =
      per_token_nll(model, Side::Src, translations.src_from_tgt, Side::Tgt, tgt_batch);
  return scale(add(src_term, tgt_term), Real(0.5));
}

template <class Real>
Tensor<Real> bt_loss(const Seq2Seq<Real>& model, const Batch& src_batch, const Batch& tgt_batch,
                     const GenerationLimits& limits) {
  const auto translations = back_translate(model, src_batch, tgt_batch, limits);
  return bt_loss_given(model, src_batch, tgt_batch, translations);
}

double expansion_repetition(const std::vector<int>& expansion) {
  return expansion.empty() ? 1.0 : repetition_ratio(expansion);
}

template <class Real>
Batch expand_poems(const Seq2Seq<Real>& model, const Batch& poems, std::size_t max_len) {
  NoGradGuard no_grad;
  Batch out;
  for (auto& g : model.generate_greedy_batch(Side::Tgt, Side::Src, encoder_inputs(poems), max_len))
    out.push_back(strip_eos(g));
  return out;
}

template <class Real>
Tensor<Real> rl_loss_given(const Seq2Seq<Real>& model, const Batch& src_batch,
                           const Batch& poems, const Batch& expansions, double tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) throw std::invalid_argument("rl_loss: tau must lie in [0,1]");
  if (src_batch.empty()) throw std::invalid_argument("rl_loss: empty batch");
  if (poems.size() != src_batch.size() || expansions.size() != src_batch.size())
    throw std::invalid_argument("rl_loss: poem or expansion count does not match batch");
  Tensor<Real> total;
  for (std::size_t i = 0; i < src_batch.size(); ++i) {
    const double coeff = expansion_repetition(expansions[i]) - tau;
    // log P = -(mean NLL), so the term is -coeff * mean NLL.
    const auto nll =
        sequence_nll(model, Side::Tgt, poems[i], Side::Src, src_batch[i], Reduction::Mean);
    total = accumulate(total, scale(nll, static_cast<Real>(-coeff)));
  }
  return scale(total, Real(1) / static_cast<Real>(src_batch.size()));
}

template <class Real>
Tensor<Real> rl_loss(const Seq2Seq<Real>& model, const Batch& src_batch, double tau,
                     const GenerationLimits& limits) {
  Batch poems;
  {
    NoGradGuard no_grad;
    for (auto& g : model.generate_greedy_batch(Side::Src, Side::Tgt, encoder_inputs(src_batch),
                                               limits.tgt))
      poems.push_back(strip_eos(g));
  }
  const auto expansions = expand_poems(model, poems, limits.src);
  return rl_loss_given(model, src_batch, poems, expansions, tau);
}

template <class Real>
Tensor<Real> composite_loss(const Tensor<Real>& lm, const Tensor<Real>& bt, const Tensor<Real>& rl,
                            const TrainConfig& config) {
  Tensor<Real> total = add(scale(lm, static_cast<Real>(config.alpha1)),
                           scale(bt, static_cast<Real>(config.alpha2)));
  if (config.enable_rl) {
    if (!rl.defined()) throw std::invalid_argument("composite_loss: RL enabled but no rl term");
    total = add(total, scale(rl, static_cast<Real>(config.alpha3)));
  }
  return total;
}

double composite_value(double lm, double bt, double rl, const TrainConfig& config) {
  double v = config.alpha1 * lm + config.alpha2 * bt;
  if (config.enable_rl) v += config.alpha3 * rl;
  return v;
}

GenerationLimits generation_limits(const TrainingCorpora& corpora, const TrainConfig& config) {
  const std::size_t cap = config.max_len - 2;
  auto derive = [cap](std::size_t longest) {
    return std::min(cap, (3 * longest + 1) / 2);
  };
  std::size_t longest_src = 0, longest_tgt = 0;
  for (const auto& s : corpora.src) longest_src = std::max(longest_src, s.size());
  for (const auto& t : corpora.tgt)
    longest_tgt = std::max(longest_tgt, poem_sequence(t, config).size());
  GenerationLimits limits;
  limits.src = config.gen_max_src ? std::min(cap, config.gen_max_src) : derive(longest_src);
  limits.tgt = config.gen_max_tgt ? std::min(cap, config.gen_max_tgt) : derive(longest_tgt);
  return limits;
}

template <class Real>
std::vector<StepReport> train(const TrainingCorpora& corpora, const TrainConfig& config,
                              Seq2Seq<Real>& model, const TrainHooks& hooks) {
  config.validate();
  if (corpora.src.empty() || corpora.tgt.empty())
    throw std::invalid_argument("train: both corpora must be nonempty");
  const std::size_t max_content = model.config().max_len - 2;
  Batch src_all = corpora.src;
  Batch tgt_all;
  for (const auto& poem : corpora.tgt) tgt_all.push_back(poem_sequence(poem, config));
  for (const auto& s : src_all)
    if (s.size() > max_content || s.empty())
      throw std::invalid_argument("train: source example length " + std::to_string(s.size()) +
                                  " outside [1, " + std::to_string(max_content) + "]");
  for (const auto& t : tgt_all)
    if (t.size() > max_content || t.empty())
      throw std::invalid_argument("train: poem example length " + std::to_string(t.size()) +
                                  " outside [1, " + std::to_string(max_content) + "]");

  GenerationLimits limits = generation_limits(corpora, config);
  limits.src = std::min(limits.src, max_content);
  limits.tgt = std::min(limits.tgt, max_content);
  std::mt19937_64 rng(config.seed);
  Adam<Real> optimizer(model.parameters(), config.adam);
  std::vector<StepReport> reports;
  reports.reserve(config.steps);

  for (std::size_t step = 1; step <= config.steps; ++step) {
    std::uniform_int_distribution<std::size_t> pick_src(0, src_all.size() - 1);
    std::uniform_int_distribution<std::size_t> pick_tgt(0, tgt_all.size() - 1);
    Batch src_batch, tgt_batch;
    for (std::size_t b = 0; b < config.batch; ++b) src_batch.push_back(src_all[pick_src(rng)]);
    for (std::size_t b = 0; b < config.batch; ++b) tgt_batch.push_back(tgt_all[pick_tgt(rng)]);

    const auto lm = lm_loss(model, src_batch, tgt_batch, config.noise, rng);
    const auto translations = back_translate(model, src_batch, tgt_batch, limits);
    const auto bt = bt_loss_given(model, src_batch, tgt_batch, translations);
    Tensor<Real> rl;
    if (config.enable_rl) {
      const auto expansions = expand_poems(model, translations.tgt_from_src, limits.src);
      rl = rl_loss_given(model, src_batch, translations.tgt_from_src, expansions, config.tau);
    }
    const auto total = composite_loss(lm, bt, rl, config);

    StepReport report;
    report.step = step;
    report.lm = lm.item();
    report.bt = bt.item();
    report.rl = rl.defined() ? static_cast<double>(rl.item()) : 0.0;
    report.composite = composite_value(report.lm, report.bt, report.rl, config);
    double rr = 0;
    for (const auto& e : translations.src_from_tgt) rr += expansion_repetition(e);
    report.rr = rr / static_cast<double>(translations.src_from_tgt.size());
    reports.push_back(report);

    if (!std::isfinite(report.lm) || !std::isfinite(report.bt) || !std::isfinite(report.rl) ||
        !std::isfinite(static_cast<double>(total.item()))) {
      Tape<Real>::active().clear();
      throw NonFiniteLoss("non-finite loss at step " + std::to_string(step), reports);
    }
    backward(total);
    if (config.warmup && step <= config.warmup)
      optimizer.set_lr(config.adam.lr * static_cast<double>(step) / static_cast<double>(config.warmup));
    optimizer.step();

    if (hooks.on_step) hooks.on_step(report);
    if (hooks.on_checkpoint && config.checkpoint_every && step % config.checkpoint_every == 0)
      hooks.on_checkpoint(step);
  }
  return reports;
}

#define UMT_TRAINING_INSTANTIATE(R)                                                            \
  template BackTranslations back_translate(const Seq2Seq<R>&, const Batch&, const Batch&,      \
                                           const GenerationLimits&);                           \
  template Tensor<R> lm_loss(const Seq2Seq<R>&, const Batch&, const Batch&, const NoiseSpec&,  \
                             std::mt19937_64&);                                                \
  template Tensor<R> bt_loss_given(const Seq2Seq<R>&, const Batch&, const Batch&,              \
                                   const BackTranslations&);                                   \
  template Tensor<R> bt_loss(const Seq2Seq<R>&, const Batch&, const Batch&,                    \
                             const GenerationLimits&);                                         \
  template Batch expand_poems(const Seq2Seq<R>&, const Batch&, std::size_t);                   \
  template Tensor<R> rl_loss_given(const Seq2Seq<R>&, const Batch&, const Batch&, const Batch&, \
                                   double);                                                    \
  template Tensor<R> rl_loss(const Seq2Seq<R>&, const Batch&, double, const GenerationLimits&); \
  template Tensor<R> composite_loss(const Tensor<R>&, const Tensor<R>&, const Tensor<R>&,      \
                                    const TrainConfig&);                                       \
  template std::vector<StepReport> train(const TrainingCorpora&, const TrainConfig&,           \
                                         Seq2Seq<R>&, const TrainHooks&);

UMT_TRAINING_INSTANTIATE(float)
UMT_TRAINING_INSTANTIATE(double)

}  // namespace umt
