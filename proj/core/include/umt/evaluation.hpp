#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "umt/metrics.hpp"
#include "umt/model.hpp"
#include "umt/padding.hpp"
#include "umt/training.hpp"

namespace umt {

// exp of the mean per-token negative log-likelihood (natural log) of each
// target + EOS given its source, teacher-forced. "<p>" target positions are
// excluded. Throws std::invalid_argument on an empty or misaligned corpus.
template <class Real>
double perplexity(const Seq2Seq<Real>& model, Side src, const Batch& sources, Side tgt,
                  const Batch& targets);

struct EvalOptions {
  // Poem-side framing the model was trained with.
  bool padding = false;
  SegmentationSchema schema;
  // Generation caps; 0 derives 1.5x the longest reference.
  std::size_t max_poem = 0;
  std::size_t max_expansion = 0;
  // Terse-token expansions for coverage; coverage is skipped when absent.
  std::optional<ExpansionTable> rule;
};

struct ExampleRow {
  std::size_t id = 0;
  std::vector<int> candidate;  // generated poem, padding removed
  std::vector<int> reference;  // gold poem
  double bleu4 = 0;            // sentence-level 4-gram precision x100
  double rr = 0;               // repetition ratio of the candidate (1 if empty)
};

struct EvalReport {
  double ppl_src2tgt = 0;
  double ppl_tgt2src = 0;
  BleuReport bleu;
  double rr_expansion = 0;  // mean over TGT->SRC expansions
  double rr_reference = 0;  // mean over the verbose references
  CoverageReport coverage;  // mean over examples of the expansions
  std::vector<ExampleRow> rows;
  std::vector<std::vector<int>> expansions;

  // (metric, value) pairs in a fixed order; coverage only when computed.
  std::vector<std::pair<std::string, double>> metrics() const;
  bool has_coverage = false;
};

// Scores aligned pairs: sources[i] is the verbose text of poems[i].
template <class Real>
EvalReport evaluate_model(const Seq2Seq<Real>& model, const Batch& sources,
                          const std::vector<PoemLines>& poems, const EvalOptions& options);

// BLEU / RR rows for precomputed candidates, no model involved.
std::vector<ExampleRow> score_candidates(const std::vector<std::vector<int>>& candidates,
                                         const std::vector<std::vector<int>>& references);

// "metric,value" CSV.
void write_metrics_csv(const std::filesystem::path& path,
                       const std::vector<std::pair<std::string, double>>& metrics);

}  // namespace umt
