#include "umt/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <unordered_set>

namespace umt {

double repetition_ratio(std::span<const int> tokens) {
  if (tokens.empty()) throw std::invalid_argument("repetition_ratio: empty sequence");
  const std::unordered_set<int> distinct(tokens.begin(), tokens.end());
  return 1.0 - static_cast<double>(distinct.size()) / static_cast<double>(tokens.size());
}

double BleuReport::precision(int n) const {
  switch (n) {
    case 1: return bleu1;
    case 2: return bleu2;
    case 3: return bleu3;
    case 4: return bleu4;
    default: throw std::out_of_range("BLEU order must be 1..4");
  }
}

namespace {

using Ngram = std::vector<int>;

std::map<Ngram, std::size_t> ngram_counts(const std::vector<int>& seq, int n) {
  std::map<Ngram, std::size_t> counts;
  const auto len = static_cast<int>(seq.size());
  for (int i = 0; i + n <= len; ++i) ++counts[Ngram(seq.begin() + i, seq.begin() + i + n)];
  return counts;
}

}  // namespace

BleuReport bleu(std::span<const std::vector<int>> candidates,
                std::span<const std::vector<int>> references, int max_n) {
  if (candidates.size() != references.size())
    throw std::invalid_argument("bleu: " + std::to_string(candidates.size()) +
                                " candidates vs " + std::to_string(references.size()) +
                                " references");
  if (max_n < 1 || max_n > 4) throw std::invalid_argument("bleu: max_n must be 1..4");
  std::vector<double> matched(max_n, 0.0), total(max_n, 0.0);
  double cand_len = 0, ref_len = 0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto& c = candidates[i];
    const auto& r = references[i];
    cand_len += static_cast<double>(c.size());
    ref_len += static_cast<double>(r.size());
    for (int n = 1; n <= max_n; ++n) {
      const auto cc = ngram_counts(c, n);
      const auto rc = ngram_counts(r, n);
      for (const auto& [gram, count] : cc) {
        total[n - 1] += static_cast<double>(count);
        auto it = rc.find(gram);
        if (it != rc.end()) matched[n - 1] += static_cast<double>(std::min(count, it->second));
      }
    }
  }
  BleuReport report;
  double log_sum = 0;
  double precisions[4] = {0, 0, 0, 0};
  for (int n = 0; n < max_n; ++n) {
    const double p = total[n] > 0 ? matched[n] / total[n] : 0.0;
    precisions[n] = p;
    log_sum += std::log(std::max(p, 1e-9));
  }
  report.bleu1 = precisions[0] * 100.0;
  report.bleu2 = precisions[1] * 100.0;
  report.bleu3 = precisions[2] * 100.0;
  report.bleu4 = precisions[3] * 100.0;
  if (cand_len <= 0) {
    report.brevity_penalty = 0.0;
  } else if (cand_len < ref_len) {
    report.brevity_penalty = std::exp(1.0 - ref_len / cand_len);
  }
  report.composite = report.brevity_penalty * std::exp(log_sum / max_n) * 100.0;
  return report;
}

BleuReport sentence_bleu(const std::vector<int>& candidate, const std::vector<int>& reference,
                         int max_n) {
  return bleu(std::span(&candidate, 1), std::span(&reference, 1), max_n);
}

CoverageReport coverage(std::span<const int> source, std::span<const int> generated,
                        const ExpansionTable& rule) {
  CoverageReport report;
  if (source.empty()) return report;
  auto covered = [&](int token) {
    auto it = rule.find(token);
    if (it == rule.end() || it->second.empty()) return false;
    return std::search(generated.begin(), generated.end(), it->second.begin(),
                       it->second.end()) != generated.end();
  };
  const std::size_t n = source.size();
  const std::size_t half = n / 2;
  std::size_t hit_total = 0, hit_first = 0, hit_second = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!covered(source[i])) continue;
    ++hit_total;
    (i < half ? hit_first : hit_second)++;
  }
  report.total = static_cast<double>(hit_total) / static_cast<double>(n);
  report.first_half = half ? static_cast<double>(hit_first) / static_cast<double>(half) : 0.0;
  report.second_half = static_cast<double>(hit_second) / static_cast<double>(n - half);
  return report;
}

}  // namespace umt
