#pragma once

#include <span>
#include <unordered_map>
#include <vector>

namespace umt {

// 1 - distinct / total. Throws std::invalid_argument on an empty sequence.
double repetition_ratio(std::span<const int> tokens);

struct BleuReport {
  // Modified n-gram precisions x100, unsmoothed.
  double bleu1 = 0, bleu2 = 0, bleu3 = 0, bleu4 = 0;
  // Brevity penalty x geometric mean of the precisions x100. Zero match
  // counts are floored at 1e-9 inside the log.
  double composite = 0;
  double brevity_penalty = 1;

  double precision(int n) const;
};

// Corpus-level BLEU with clipped n-gram counts (max_n <= 4).
BleuReport bleu(std::span<const std::vector<int>> candidates,
                std::span<const std::vector<int>> references, int max_n = 4);

// Single-pair helper.
BleuReport sentence_bleu(const std::vector<int>& candidate, const std::vector<int>& reference,
                         int max_n = 4);

// token id -> the id sequence it must expand to
using ExpansionTable = std::unordered_map<int, std::vector<int>>;

struct CoverageReport {
  double total = 0;
  double first_half = 0;
  double second_half = 0;
};

// Fraction of source tokens whose expansion occurs as a contiguous run in
// `generated`. The first half is source positions [0, n/2).
CoverageReport coverage(std::span<const int> source, std::span<const int> generated,
                        const ExpansionTable& rule);

}  // namespace umt
