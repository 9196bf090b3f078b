#include "umt/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace umt {

template <class Real>
double perplexity(const Seq2Seq<Real>& model, Side src, const Batch& sources, Side tgt,
                  const Batch& targets) {
  if (sources.empty()) throw std::invalid_argument("perplexity: empty corpus");
  if (sources.size() != targets.size())
    throw std::invalid_argument("perplexity: " + std::to_string(sources.size()) +
                                " sources vs " + std::to_string(targets.size()) + " targets");
  NoGradGuard no_grad;
  double nll = 0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < sources.size(); ++i) {
    nll += static_cast<double>(
        sequence_nll(model, src, sources[i], tgt, targets[i], Reduction::Sum, true).item());
    count += counted_targets(targets[i], true);
  }
  return std::exp(nll / static_cast<double>(count));
}

std::vector<std::pair<std::string, double>> EvalReport::metrics() const {
  std::vector<std::pair<std::string, double>> out{
      {"ppl_src2tgt", ppl_src2tgt},   {"ppl_tgt2src", ppl_tgt2src},
      {"bleu", bleu.composite},       {"bleu1", bleu.bleu1},
      {"bleu2", bleu.bleu2},          {"bleu3", bleu.bleu3},
      {"bleu4", bleu.bleu4},          {"brevity_penalty", bleu.brevity_penalty},
      {"rr_expansion", rr_expansion}, {"rr_reference", rr_reference},
  };
  if (has_coverage) {
    out.emplace_back("coverage", coverage.total);
    out.emplace_back("coverage_first_half", coverage.first_half);
    out.emplace_back("coverage_second_half", coverage.second_half);
  }
  return out;
}

std::vector<ExampleRow> score_candidates(const std::vector<std::vector<int>>& candidates,
                                         const std::vector<std::vector<int>>& references) {
  if (candidates.size() != references.size())
    throw std::invalid_argument("score: " + std::to_string(candidates.size()) +
                                " candidates vs " + std::to_string(references.size()) +
                                " references");
  std::vector<ExampleRow> rows;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    ExampleRow row;
    row.id = i;
    row.candidate = candidates[i];
    row.reference = references[i];
    row.bleu4 = sentence_bleu(candidates[i], references[i]).bleu4;
    row.rr = expansion_repetition(candidates[i]);
    rows.push_back(std::move(row));
  }
  return rows;
}

template <class Real>
EvalReport evaluate_model(const Seq2Seq<Real>& model, const Batch& sources,
                          const std::vector<PoemLines>& poems, const EvalOptions& options) {
  if (sources.empty()) throw std::invalid_argument("evaluate: empty test set");
  if (sources.size() != poems.size())
    throw std::invalid_argument("evaluate: " + std::to_string(sources.size()) +
                                " sources vs " + std::to_string(poems.size()) + " poems");
  const std::size_t cap = model.config().max_len - 2;
  Batch poem_inputs, gold;
  std::size_t longest_poem = 0, longest_src = 0;
  for (const auto& p : poems) {
    poem_inputs.push_back(options.padding ? pad_poem(p, options.schema).ids : flatten(p));
    gold.push_back(flatten(p));
    longest_poem = std::max(longest_poem, poem_inputs.back().size());
  }
  for (const auto& s : sources) longest_src = std::max(longest_src, s.size());
  const std::size_t max_poem =
      std::min(cap, options.max_poem ? options.max_poem : (3 * longest_poem + 1) / 2);
  const std::size_t max_expansion =
      std::min(cap, options.max_expansion ? options.max_expansion : (3 * longest_src + 1) / 2);

  EvalReport report;
  report.ppl_src2tgt = perplexity(model, Side::Src, sources, Side::Tgt, poem_inputs);
  report.ppl_tgt2src = perplexity(model, Side::Tgt, poem_inputs, Side::Src, sources);

  const std::size_t line_length = options.schema.line_length();
  std::vector<std::vector<int>> candidates;
  for (const auto& g : model.generate_greedy_batch(Side::Src, Side::Tgt, encoder_inputs(sources),
                                                   max_poem))
    candidates.push_back(flatten(strip_padding(strip_eos(g), line_length)));
  report.bleu = bleu(candidates, gold);
  report.rows = score_candidates(candidates, gold);

  double rr_exp = 0, rr_ref = 0;
  for (auto& g : model.generate_greedy_batch(Side::Tgt, Side::Src, encoder_inputs(poem_inputs),
                                             max_expansion))
    report.expansions.push_back(strip_eos(g));
  for (std::size_t i = 0; i < poems.size(); ++i) {
    rr_exp += expansion_repetition(report.expansions[i]);
    rr_ref += expansion_repetition(sources[i]);
  }
  const auto n = static_cast<double>(poems.size());
  report.rr_expansion = rr_exp / n;
  report.rr_reference = rr_ref / n;

  if (options.rule) {
    report.has_coverage = true;
    for (std::size_t i = 0; i < poems.size(); ++i) {
      const auto c = coverage(gold[i], report.expansions[i], *options.rule);
      report.coverage.total += c.total / n;
      report.coverage.first_half += c.first_half / n;
      report.coverage.second_half += c.second_half / n;
    }
  }
  return report;
}

void write_metrics_csv(const std::filesystem::path& path,
                       const std::vector<std::pair<std::string, double>>& metrics) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.precision(10);
  out << "metric,value\n";
  for (const auto& [name, value] : metrics) out << name << ',' << value << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

template double perplexity(const Seq2Seq<float>&, Side, const Batch&, Side, const Batch&);
template double perplexity(const Seq2Seq<double>&, Side, const Batch&, Side, const Batch&);
template EvalReport evaluate_model(const Seq2Seq<float>&, const Batch&,
                                   const std::vector<PoemLines>&, const EvalOptions&);
template EvalReport evaluate_model(const Seq2Seq<double>&, const Batch&,
                                   const std::vector<PoemLines>&, const EvalOptions&);

}  // namespace umt
