#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "umt/model.hpp"
#include "umt/noise.hpp"
#include "umt/optimizer.hpp"
#include "umt/padding.hpp"

namespace umt {

// Everything a training run needs besides the corpora. Serialized as flat
// UTF-8 "key=value" lines; '#' starts a comment.
//
// Keys: alpha1 alpha2 alpha3 tau p_drop p_blank swap_window schema
// pad_factor batch steps lr warmup beta1 beta2 eps seed enable_padding enable_rl
// d_model layers heads ffn_dim max_len gen_max_src gen_max_tgt
// checkpoint_every
struct TrainConfig {
  double alpha1 = 1.0;
  double alpha2 = 1.0;
  double alpha3 = 1.0;
  double tau = 0.35;
  NoiseSpec noise;
  SegmentationSchema schema;
  std::size_t batch = 8;
  std::size_t steps = 2000;
  AdamOptions adam;
  std::size_t warmup = 0;  // steps of linear learning-rate ramp from 0
  std::uint64_t seed = 1;
  bool enable_padding = false;
  bool enable_rl = false;

  // Model dimensions; vocab_size comes from the vocabulary.
  std::size_t d_model = 128;
  std::size_t layers = 3;
  std::size_t heads = 4;
  std::size_t ffn_dim = 512;
  std::size_t max_len = 128;

  // Generation length caps for back-translation; 0 derives them from the
  // longest training example on the produced side.
  std::size_t gen_max_src = 0;
  std::size_t gen_max_tgt = 0;

  std::size_t checkpoint_every = 0;  // 0 = only the final checkpoint

  void validate() const;
  ModelConfig model_config(std::size_t vocab_size) const;

  static TrainConfig parse(std::string_view text);
  static TrainConfig load(const std::filesystem::path& path);
  std::string to_text() const;
};

}  // namespace umt
