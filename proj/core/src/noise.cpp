#include "umt/noise.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace umt {

void NoiseSpec::validate() const {
  if (!(p_drop >= 0.0 && p_drop <= 1.0) || !(p_blank >= 0.0 && p_blank <= 1.0))
    throw std::invalid_argument("noise probabilities must lie in [0,1]");
  if (swap_window < 0) throw std::invalid_argument("swap_window must be nonnegative");
}

std::vector<int> apply_noise(std::span<const int> ids, const NoiseSpec& spec,
                             const NoiseDraws& draws) {
  spec.validate();
  if (draws.drop.size() < ids.size())
    throw std::invalid_argument("apply_noise: too few drop draws");
  std::vector<int> kept;
  for (std::size_t i = 0; i < ids.size(); ++i)
    if (!(draws.drop[i] < spec.p_drop)) kept.push_back(ids[i]);

  if (draws.blank.size() < kept.size() || draws.shift.size() < kept.size())
    throw std::invalid_argument("apply_noise: too few blank/shift draws");
  for (std::size_t i = 0; i < kept.size(); ++i)
    if (draws.blank[i] < spec.p_blank) kept[i] = kBlank;

  std::vector<double> keys(kept.size());
  for (std::size_t i = 0; i < kept.size(); ++i)
    keys[i] = static_cast<double>(i) + draws.shift[i] * spec.swap_window;
  std::vector<std::size_t> order(kept.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&keys](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
  std::vector<int> out;
  out.reserve(kept.size());
  for (auto i : order) out.push_back(kept[i]);
  return out;
}

NoiseDraws draw_noise(std::size_t length, const NoiseSpec& spec, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  NoiseDraws d;
  d.drop.resize(length);
  for (auto& x : d.drop) x = u(rng);
  const auto survivors = static_cast<std::size_t>(
      std::count_if(d.drop.begin(), d.drop.end(), [&](double x) { return !(x < spec.p_drop); }));
  d.blank.resize(survivors);
  for (auto& x : d.blank) x = u(rng);
  d.shift.resize(survivors);
  for (auto& x : d.shift) x = u(rng);
  return d;
}

TokenSeq add_noise(const TokenSeq& seq, const NoiseSpec& spec, std::mt19937_64& rng) {
  const auto draws = draw_noise(seq.ids.size(), spec, rng);
  return TokenSeq{apply_noise(seq.ids, spec, draws), seq.side};
}

}  // namespace umt
