#pragma once

// Hand-set weights for a model whose decoders copy the encoder input:
// decoding position t attends to encoder position t and emits that token.
//
// Layout of the d = 64 model dimensions:
//   low dims 0..15    high-frequency positional sines/cosines, used for
//                     position matching in cross-attention
//   even dims 34..60  one token slot per id (embedding spike)
//   dims 62, 63       reference dims whose positional value is ~constant;
//                     subtracting them cancels the LayerNorm mean
// Self-attention and feed-forward contributions are zeroed.

#include <cmath>
#include <string>

#include "umt/model.hpp"

namespace umt::fixtures {

inline constexpr std::size_t kCopyDim = 64;
inline constexpr std::size_t kCopyMaxVocab = 14;
inline constexpr std::size_t kCopyFreqs = 8;

inline std::size_t copy_slot(std::size_t id) { return kCopyDim - 4 - 2 * id; }

template <class Real>
Seq2Seq<Real> make_copy_model(std::size_t vocab_size, std::size_t max_len = 32) {
  if (vocab_size > kCopyMaxVocab) throw std::invalid_argument("copy model: vocab too large");
  ModelConfig cfg;
  cfg.vocab_size = vocab_size;
  cfg.d_model = kCopyDim;
  cfg.layers = 1;
  cfg.heads = 1;
  cfg.ffn_dim = 4;
  cfg.max_len = max_len;
  Seq2Seq<Real> model(cfg, 7);

  const std::size_t d = kCopyDim;
  const double spike = 4.0;  // embedding entry; sqrt(d) * spike after scaling
  const std::size_t ref_sin = d - 2, ref_cos = d - 1;
  // LayerNorm scale of an embedded token; close to constant over positions.
  const double mean = (spike * std::sqrt(double(d)) + double(d) / 4) / double(d);
  const double sigma = std::sqrt((spike * spike * double(d) + double(d) / 2) / double(d) - mean * mean);
  const double sharp = 5000.0;
  const double gain = 10.0;

  auto set = [](Tensor<Real>& t, std::size_t r, std::size_t c, double v) {
    t.mutable_data()[r * t.dim(1) + c] = static_cast<Real>(v);
  };
  for (auto& p : model.parameters()) {
    Tensor<Real> t = p.tensor;
    const bool gamma = p.name.size() >= 6 && p.name.compare(p.name.size() - 6, 6, ".gamma") == 0;
    for (auto& x : t.mutable_data()) x = gamma ? Real(1) : Real(0);
    if (p.name == "embedding")
      for (std::size_t id = 0; id < vocab_size; ++id) set(t, id, copy_slot(id), spike);
  }
  for (Side side : {Side::Src, Side::Tgt}) {
    auto& layer = model.decoder(side).layers[0];
    auto& q = layer.cross_attn.q;
    auto& k = layer.cross_attn.k;
    for (std::size_t i = 0; i < kCopyFreqs; ++i) {
      const std::size_t fs = 2 * i, fc = 2 * i + 1;  // feature columns
      set(q.weight, 2 * i, fs, sharp);
      set(q.weight, ref_sin, fs, -sharp);
      set(q.weight, 2 * i + 1, fc, sharp);
      set(q.weight, ref_cos, fc, -sharp);
      q.bias.mutable_data()[fc] = static_cast<Real>(sharp / sigma);
      set(k.weight, 2 * i, fs, 1.0);
      set(k.weight, ref_sin, fs, -1.0);
      set(k.weight, 2 * i + 1, fc, 1.0);
      set(k.weight, ref_cos, fc, -1.0);
      k.bias.mutable_data()[fc] = static_cast<Real>(1.0 / sigma);
    }
    for (std::size_t id = 0; id < vocab_size; ++id) {
      set(layer.cross_attn.v.weight, copy_slot(id), copy_slot(id), 1.0);
      set(layer.cross_attn.o.weight, copy_slot(id), copy_slot(id), gain);
    }
  }
  return model;
}

}  // namespace umt::fixtures
