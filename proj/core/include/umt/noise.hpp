#pragma once

#include <random>
#include <span>
#include <vector>

#include "umt/text.hpp"

namespace umt {

// Corruption applied to inputs of the denoising language-model loss.
struct NoiseSpec {
  double p_drop = 0.1;
  double p_blank = 0.1;
  int swap_window = 3;

  void validate() const;
};

// Uniform [0,1) draws consumed by apply_noise, one list per stage:
// `drop` has one entry per input token, `blank` and `shift` one per token
// that survived dropping.
struct NoiseDraws {
  std::vector<double> drop;
  std::vector<double> blank;
  std::vector<double> shift;
};

// Drop (draw < p_drop), then blank survivors (draw < p_blank), then shuffle
// locally: token i gets key i + draw * swap_window and tokens are stable
// sorted by key, so no token moves more than swap_window places.
std::vector<int> apply_noise(std::span<const int> ids, const NoiseSpec& spec,
                             const NoiseDraws& draws);

NoiseDraws draw_noise(std::size_t length, const NoiseSpec& spec, std::mt19937_64& rng);

TokenSeq add_noise(const TokenSeq& seq, const NoiseSpec& spec, std::mt19937_64& rng);

}  // namespace umt
