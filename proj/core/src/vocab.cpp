#include "umt/vocab.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace umt {

const std::vector<std::string>& Vocabulary::special_tokens() {
  static const std::vector<std::string> specials{"<pad>", "<s>",     "</s>",
                                                 "<unk>", "<blank>", "<p>"};
  return specials;
}

Vocabulary Vocabulary::from_tokens(std::vector<std::string> corpus_tokens) {
  Vocabulary v;
  v.tokens_ = special_tokens();
  for (auto& t : corpus_tokens) v.tokens_.push_back(std::move(t));
  for (std::size_t i = 0; i < v.tokens_.size(); ++i) {
    if (!v.index_.emplace(v.tokens_[i], static_cast<int>(i)).second)
      throw std::invalid_argument("duplicate vocabulary token '" + v.tokens_[i] + "'");
  }
  return v;
}

Vocabulary Vocabulary::build(std::span<const std::vector<std::string>> token_lines,
                             std::size_t min_count) {
  if (token_lines.empty()) throw std::invalid_argument("build_vocab: empty corpus");
  std::map<std::string, std::size_t> counts;
  for (const auto& line : token_lines)
    for (const auto& t : line) ++counts[t];
  std::vector<std::pair<std::string, std::size_t>> kept;
  for (auto& [tok, n] : counts)
    if (n >= min_count) kept.emplace_back(tok, n);
  std::stable_sort(kept.begin(), kept.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<std::string> tokens;
  tokens.reserve(kept.size());
  for (auto& [tok, n] : kept) tokens.push_back(tok);
  return from_tokens(std::move(tokens));
}

Vocabulary Vocabulary::build_from_text(std::span<const std::string> lines,
                                       std::size_t min_count) {
  std::vector<std::vector<std::string>> token_lines;
  token_lines.reserve(lines.size());
  for (const auto& l : lines) token_lines.push_back(split_chars(l));
  return build(token_lines, min_count);
}

Vocabulary Vocabulary::load(const std::filesystem::path& path) {
  return from_tokens(read_lines(path));
}

void Vocabulary::save(const std::filesystem::path& path) const {
  write_lines(path, {tokens_.begin() + kFirstCorpusId, tokens_.end()});
}

int Vocabulary::id(std::string_view token) const {
  auto it = index_.find(std::string(token));
  return it == index_.end() ? kUnk : it->second;
}

bool Vocabulary::contains(std::string_view token) const {
  return index_.contains(std::string(token));
}

const std::string& Vocabulary::token(int id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= tokens_.size())
    throw std::out_of_range("vocabulary id " + std::to_string(id) + " out of range");
  return tokens_[static_cast<std::size_t>(id)];
}

std::vector<int> Vocabulary::encode(const std::vector<std::string>& tokens) const {
  std::vector<int> ids;
  ids.reserve(tokens.size());
  for (const auto& t : tokens) ids.push_back(id(t));
  return ids;
}

std::vector<int> Vocabulary::encode_text(std::string_view text) const {
  return encode(split_chars(text));
}

std::vector<std::string> Vocabulary::decode(std::span<const int> ids) const {
  std::vector<std::string> out;
  out.reserve(ids.size());
  for (int i : ids) out.push_back(token(i));
  return out;
}

std::string Vocabulary::decode_text(std::span<const int> ids) const {
  return join_chars(decode(ids));
}

std::uint64_t Vocabulary::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](unsigned char c) {
    h ^= c;
    h *= 0x100000001b3ULL;
  };
  for (const auto& t : tokens_) {
    for (char c : t) mix(static_cast<unsigned char>(c));
    mix(0);
  }
  return h;
}

}  // namespace umt
