#include "umt/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "umt/padding.hpp"
#include "umt/text.hpp"

namespace umt {

namespace {

std::string utf8(char32_t cp) {
  std::string out;
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
  return out;
}

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t hash_tokens(std::uint64_t seed, const std::string& a, const std::string& b) {
  std::uint64_t h = splitmix(seed);
  for (unsigned char c : a) h = splitmix(h ^ c);
  h = splitmix(h ^ 0xFF);
  for (unsigned char c : b) h = splitmix(h ^ c);
  return h;
}

// Boundary after line position `pos` (0-based) within a line of the schema.
bool phrase_boundary(std::size_t pos, const std::vector<int>& phrases) {
  std::size_t end = 0;
  for (int p : phrases) {
    end += static_cast<std::size_t>(p);
    if (pos + 1 == end) return true;
  }
  return false;
}

std::size_t fillers_for(std::size_t vocab_size) {
  return std::max<std::size_t>(8, static_cast<std::size_t>(std::lround(0.6 * vocab_size)));
}

}  // namespace

void SynthOptions::validate() const {
  if (vocab_size < 20) throw std::invalid_argument("synth: vocab size must be at least 20");
  if (vocab_size > 4096) throw std::invalid_argument("synth: vocab size must be at most 4096");
  if (n_train < 500) throw std::invalid_argument("synth: train-n must be at least 500");
  if (!(repetition >= 0.0 && repetition < 1.0))
    throw std::invalid_argument("synth: repetition must lie in [0,1)");
  if (!(connector_p >= 0.0 && connector_p <= 1.0))
    throw std::invalid_argument("synth: connector probability must lie in [0,1]");
}

ExpansionTable SynthRule::table(const Vocabulary& vocab) const {
  ExpansionTable out;
  for (const auto& [token, expansion] : expansions)
    out[vocab.id(token)] = vocab.encode(expansion);
  return out;
}

void SynthRule::save(const std::filesystem::path& path) const {
  std::vector<std::string> lines;
  std::ostringstream head;
  head.precision(17);
  head << "# seed=" << seed << " connector_p=" << connector_p << " schema=";
  for (std::size_t i = 0; i < phrases.size(); ++i) head << (i ? "-" : "") << phrases[i];
  lines.push_back(head.str());
  std::string filler_line = "# fillers=";
  for (std::size_t i = 0; i < fillers.size(); ++i) filler_line += (i ? " " : "") + fillers[i];
  lines.push_back(filler_line);
  for (const auto& [token, expansion] : expansions) {
    std::string line = token + '\t';
    for (std::size_t i = 0; i < expansion.size(); ++i) line += (i ? " " : "") + expansion[i];
    lines.push_back(line);
  }
  write_lines(path, lines);
}

SynthRule SynthRule::load(const std::filesystem::path& path) {
  SynthRule rule;
  rule.phrases.clear();
  for (const auto& line : read_lines(path)) {
    if (line.empty()) continue;
    if (line.rfind("# fillers=", 0) == 0) {
      std::istringstream is(line.substr(10));
      for (std::string f; is >> f;) rule.fillers.push_back(f);
      continue;
    }
    if (line[0] == '#') {
      std::istringstream is(line.substr(1));
      for (std::string field; is >> field;) {
        const auto eq = field.find('=');
        if (eq == std::string::npos) continue;
        const auto key = field.substr(0, eq);
        const auto value = field.substr(eq + 1);
        if (key == "seed") rule.seed = std::stoull(value);
        else if (key == "connector_p") rule.connector_p = std::stod(value);
        else if (key == "schema") rule.phrases = SegmentationSchema::parse(value).segments;
      }
      continue;
    }
    const auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw std::runtime_error("rule file " + path.string() + ": missing tab in '" + line + "'");
    std::vector<std::string> expansion;
    std::istringstream is(line.substr(tab + 1));
    for (std::string t; is >> t;) expansion.push_back(t);
    if (expansion.empty())
      throw std::runtime_error("rule file " + path.string() + ": empty expansion");
    rule.expansions[line.substr(0, tab)] = std::move(expansion);
  }
  if (rule.phrases.empty()) rule.phrases = {2, 2, 3};
  return rule;
}

std::vector<std::string> oracle_translate(std::span<const std::string> terse,
                                          const SynthRule& rule) {
  std::vector<std::string> out;
  const std::size_t line_length = static_cast<std::size_t>(
      std::accumulate(rule.phrases.begin(), rule.phrases.end(), 0));
  for (std::size_t i = 0; i < terse.size(); ++i) {
    auto it = rule.expansions.find(terse[i]);
    if (it == rule.expansions.end())
      throw std::invalid_argument("oracle_translate: token '" + terse[i] + "' not in rule");
    out.insert(out.end(), it->second.begin(), it->second.end());
    if (i + 1 == terse.size() || rule.fillers.empty() || rule.connector_p <= 0) continue;
    if (!phrase_boundary(i % line_length, rule.phrases)) continue;
    const std::uint64_t h = hash_tokens(rule.seed, terse[i], terse[i + 1]);
    const double u = static_cast<double>(h >> 11) * 0x1.0p-53;
    if (u < rule.connector_p) out.push_back(rule.fillers[splitmix(h) % rule.fillers.size()]);
  }
  return out;
}

std::vector<std::string> flatten_sentence(const TerseSentence& sentence) {
  std::vector<std::string> out;
  for (const auto& line : sentence) out.insert(out.end(), line.begin(), line.end());
  return out;
}

SynthCorpora gen_corpora(const SynthOptions& options) {
  options.validate();
  std::mt19937_64 rng(options.seed);
  const std::size_t n = options.vocab_size;

  SynthCorpora out;
  SynthRule& rule = out.rule;
  rule.seed = options.seed;
  rule.connector_p = options.connector_p;
  std::vector<std::string> terse_tokens;
  for (std::size_t i = 0; i < n; ++i) terse_tokens.push_back(utf8(0x4E00 + static_cast<char32_t>(i)));
  for (std::size_t j = 0; j < fillers_for(n); ++j)
    rule.fillers.push_back(utf8(0x5E00 + static_cast<char32_t>(j)));

  // round(0.9 n) expansions of length 2, the rest of length 3.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  const auto n_short = static_cast<std::size_t>(std::lround(0.9 * static_cast<double>(n)));
  std::vector<std::size_t> length(n, 3);
  for (std::size_t k = 0; k < n_short; ++k) length[order[k]] = 2;
  std::bernoulli_distribution head(0.7);
  std::uniform_int_distribution<std::size_t> pick_filler(0, rule.fillers.size() - 1);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::string> expansion;
    for (std::size_t k = 1; k < length[i]; ++k) expansion.push_back(rule.fillers[pick_filler(rng)]);
    const std::size_t own = head(rng) ? 0 : 1;
    expansion.insert(expansion.begin() + static_cast<std::ptrdiff_t>(own), terse_tokens[i]);
    rule.expansions[terse_tokens[i]] = std::move(expansion);
  }

  const std::size_t total = kSynthLines * kSynthLineLength;
  const auto distinct = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::lround(static_cast<double>(total) * (1.0 - options.repetition))),
      1, std::min(total, n));
  auto draw_sentence = [&] {
    std::vector<std::size_t> pool(n);
    std::iota(pool.begin(), pool.end(), 0);
    for (std::size_t k = 0; k < distinct; ++k) {
      std::uniform_int_distribution<std::size_t> d(k, n - 1);
      std::swap(pool[k], pool[d(rng)]);
    }
    std::vector<std::size_t> ids(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(distinct));
    std::uniform_int_distribution<std::size_t> again(0, distinct - 1);
    while (ids.size() < total) ids.push_back(ids[again(rng)]);
    std::shuffle(ids.begin(), ids.end(), rng);
    return ids;
  };

  std::set<std::vector<std::size_t>> seen;
  auto unique_sentence = [&] {
    for (int attempt = 0; attempt < 1000; ++attempt) {
      auto ids = draw_sentence();
      if (seen.insert(ids).second) {
        TerseSentence sentence(kSynthLines);
        for (std::size_t p = 0; p < total; ++p)
          sentence[p / kSynthLineLength].push_back(terse_tokens[ids[p]]);
        return sentence;
      }
    }
    throw std::runtime_error("synth: cannot draw enough distinct sentences");
  };

  for (std::size_t i = 0; i < options.n_train; ++i) out.terse.push_back(unique_sentence());
  for (std::size_t i = 0; i < options.n_train; ++i)
    out.verbose.push_back(oracle_translate(flatten_sentence(unique_sentence()), rule));
  for (std::size_t i = 0; i < options.n_test; ++i) {
    out.test_terse.push_back(unique_sentence());
    out.test_verbose.push_back(oracle_translate(flatten_sentence(out.test_terse.back()), rule));
  }
  return out;
}

}  // namespace umt
