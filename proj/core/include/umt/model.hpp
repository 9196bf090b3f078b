#pragma once

// Four-component translation model: encoders and decoders for the verbose
// (Src) and terse (Tgt) sides, all reading one shared embedding table. The
// output projection is tied to that table.
//
// Stacks are pre-LayerNorm transformers. Sequences enter the model framed:
// encoder inputs end with EOS, decoder sequences are BOS ... EOS (see
// encoder_input / decoder_sequence).

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "umt/checkpoint.hpp"
#include "umt/tensor.hpp"
#include "umt/text.hpp"

namespace umt {

struct ModelConfig {
  std::size_t vocab_size = 0;
  std::size_t d_model = 128;
  std::size_t layers = 3;
  std::size_t heads = 4;
  std::size_t ffn_dim = 512;
  std::size_t max_len = 128;

  void validate() const;
  bool operator==(const ModelConfig&) const = default;
};

template <class Real>
struct Linear {
  Tensor<Real> weight;  // (in, out)
  Tensor<Real> bias;    // (out)
};

template <class Real>
struct LayerNormParams {
  Tensor<Real> gamma;
  Tensor<Real> beta;
};

template <class Real>
struct AttentionParams {
  Linear<Real> q, k, v, o;
};

template <class Real>
struct EncoderLayer {
  LayerNormParams<Real> ln_attn;
  AttentionParams<Real> self_attn;
  LayerNormParams<Real> ln_ffn;
  Linear<Real> ff1, ff2;
};

template <class Real>
struct DecoderLayer {
  LayerNormParams<Real> ln_self;
  AttentionParams<Real> self_attn;
  LayerNormParams<Real> ln_cross;
  AttentionParams<Real> cross_attn;
  LayerNormParams<Real> ln_ffn;
  Linear<Real> ff1, ff2;
};

template <class Real>
struct EncoderStack {
  std::vector<EncoderLayer<Real>> layers;
  LayerNormParams<Real> ln_final;
};

template <class Real>
struct DecoderStack {
  std::vector<DecoderLayer<Real>> layers;
  LayerNormParams<Real> ln_final;
};

template <class Real>
struct HiddenState {
  Tensor<Real> states;              // (length, d_model)
  std::vector<std::uint8_t> valid;  // 0 at PAD positions
};

template <class Real>
class Seq2Seq {
 public:
  // Weights uniform in +-1/sqrt(fan_in), embedding uniform in +-1/sqrt(d).
  Seq2Seq(ModelConfig config, std::uint64_t seed);

  const ModelConfig& config() const { return config_; }

  HiddenState<Real> encode(Side side, std::span<const int> ids) const;

  // Logits (target.size(), vocab). Row t depends only on target[0..t] and
  // the hidden state. target[0] must be BOS.
  Tensor<Real> decode_teacher_forced(Side side, const HiddenState<Real>& hidden,
                                     std::span<const int> target) const;

  // Greedy decoding with cached keys/values, always gradient-free. Returns
  // the generated ids including the terminating EOS when one was produced.
  // PAD, BOS and BLANK are never emitted.
  std::vector<int> generate_greedy(Side src, Side tgt, std::span<const int> src_ids,
                                   std::size_t max_len) const;

  // Same as generate_greedy but first forces `prefix` (content ids after
  // BOS) and returns prefix + continuation.
  std::vector<int> generate_greedy_from(Side src, Side tgt, std::span<const int> src_ids,
                                        std::span<const int> prefix,
                                        std::size_t max_len) const;

  // Greedy decoding of several encoder inputs at once. Element i is what
  // generate_greedy returns for sources[i], up to last-bit rounding in the
  // batched products.
  std::vector<std::vector<int>> generate_greedy_batch(Side src, Side tgt,
                                                      const std::vector<std::vector<int>>& sources,
                                                      std::size_t max_len) const;

  // Handles sharing storage with the model, in a fixed order.
  std::vector<NamedParameter<Real>> parameters() const;
  std::size_t count_params() const;

  Tensor<Real>& embedding() { return embedding_; }
  const Tensor<Real>& embedding() const { return embedding_; }
  EncoderStack<Real>& encoder(Side side) { return encoders_[static_cast<int>(side)]; }
  DecoderStack<Real>& decoder(Side side) { return decoders_[static_cast<int>(side)]; }
  const Tensor<Real>& positional_encoding() const { return positions_; }

  CheckpointHeader checkpoint_header(std::uint64_t vocab_hash) const;
  void save(const std::filesystem::path& path, std::uint64_t vocab_hash) const;
  // Throws CheckpointError when expected_vocab_hash is given and differs.
  static Seq2Seq load(const std::filesystem::path& path,
                      std::optional<std::uint64_t> expected_vocab_hash = std::nullopt);

 private:
  std::vector<std::vector<int>> decode_batch(Side src, Side tgt,
                                             const std::vector<std::vector<int>>& sources,
                                             const std::vector<std::vector<int>>& prefixes,
                                             std::size_t max_len) const;

  ModelConfig config_;
  Tensor<Real> embedding_;
  Tensor<Real> positions_;
  EncoderStack<Real> encoders_[2];
  DecoderStack<Real> decoders_[2];
};

ModelConfig model_config_from(const CheckpointHeader& header);

// content + EOS
std::vector<int> encoder_input(std::span<const int> content);
std::vector<std::vector<int>> encoder_inputs(const std::vector<std::vector<int>>& contents);
// BOS + content + EOS
std::vector<int> decoder_sequence(std::span<const int> content);
// Drops everything from the first EOS on.
std::vector<int> strip_eos(std::span<const int> generated);

// Negative log-likelihood of `target_content` + EOS given `source_content`
// encoded by the `src` encoder and decoded by the `tgt` decoder. With
// skip_segpad, positions whose target is "<p>" are not counted.
template <class Real>
Tensor<Real> sequence_nll(const Seq2Seq<Real>& model, Side src, std::span<const int> source_content,
                          Side tgt, std::span<const int> target_content, Reduction reduction,
                          bool skip_segpad = false);

// Number of target positions sequence_nll counts.
std::size_t counted_targets(std::span<const int> target_content, bool skip_segpad = false);

}  // namespace umt
