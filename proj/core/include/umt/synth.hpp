#pragma once

// Synthetic terse/verbose language pair with a known expansion rule.
//
// Terse tokens are CJK characters starting at U+4E00 and filler tokens start
// at U+5E00. Every terse token t expands to a fixed 2-3 token run that
// contains t itself plus filler tokens, so expansions are pairwise
// prefix-free. A verbose sentence is the concatenation of the expansions of
// its terse sentence, with an optional connector filler at the phrase
// boundaries of the line schema. Whether a boundary gets a connector (and
// which) is a hash of the seed and the two neighbouring terse tokens, so the
// same terse sentence always expands the same way.

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "umt/metrics.hpp"
#include "umt/vocab.hpp"

namespace umt {

struct SynthOptions {
  std::size_t vocab_size = 50;  // terse tokens
  std::size_t n_train = 2000;   // sentences per side
  std::size_t n_test = 200;     // aligned pairs
  std::uint64_t seed = 1;
  double repetition = 0.1;   // target terse repetition ratio
  double connector_p = 0.5;  // probability of a connector at a phrase boundary

  void validate() const;
};

inline constexpr std::size_t kSynthLines = 4;
inline constexpr std::size_t kSynthLineLength = 7;

struct SynthRule {
  std::uint64_t seed = 0;
  double connector_p = 0;
  std::vector<int> phrases{2, 2, 3};  // boundaries within a line
  std::vector<std::string> fillers;
  std::map<std::string, std::vector<std::string>> expansions;

  // Ids-level view for the coverage metric; tokens absent from the
  // vocabulary map to UNK.
  ExpansionTable table(const Vocabulary& vocab) const;

  // Header comments, then "token<TAB>space-separated expansion" lines.
  void save(const std::filesystem::path& path) const;
  static SynthRule load(const std::filesystem::path& path);
};

using TerseSentence = std::vector<std::vector<std::string>>;  // lines of tokens

struct SynthCorpora {
  std::vector<TerseSentence> terse;               // poem-side training corpus
  std::vector<std::vector<std::string>> verbose;  // prose-side training corpus
  std::vector<TerseSentence> test_terse;          // aligned with test_verbose
  std::vector<std::vector<std::string>> test_verbose;
  SynthRule rule;
};

// Training corpora come from disjoint sentence sets; every sentence in the
// result is distinct. Throws std::invalid_argument on bad options.
SynthCorpora gen_corpora(const SynthOptions& options);

// Deterministic expansion of a flat terse token list (positions are taken
// modulo the 7-token line). Throws std::invalid_argument on a token outside
// the rule.
std::vector<std::string> oracle_translate(std::span<const std::string> terse,
                                          const SynthRule& rule);

std::vector<std::string> flatten_sentence(const TerseSentence& sentence);

}  // namespace umt
