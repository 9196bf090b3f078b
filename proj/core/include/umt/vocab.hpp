#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "umt/text.hpp"

namespace umt {

// Bijective token <-> id map. Ids 0..5 are the reserved special tokens;
// corpus tokens follow in frequency-descending, then lexicographic, order.
class Vocabulary {
 public:
  // One vocabulary over the union of all given corpora, so a token shared by
  // both languages gets a single id (and therefore a single embedding row).
  static Vocabulary build(std::span<const std::vector<std::string>> token_lines,
                          std::size_t min_count = 1);
  // Convenience for plain text lines split into characters.
  static Vocabulary build_from_text(std::span<const std::string> lines,
                                    std::size_t min_count = 1);
  // Tokens listed in id order, specials excluded.
  static Vocabulary from_tokens(std::vector<std::string> corpus_tokens);

  static Vocabulary load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

  std::size_t size() const { return tokens_.size(); }
  int id(std::string_view token) const;  // kUnk when absent
  bool contains(std::string_view token) const;
  const std::string& token(int id) const;

  std::vector<int> encode(const std::vector<std::string>& tokens) const;
  std::vector<int> encode_text(std::string_view text) const;
  // Special ids render as their names ("<p>", "</s>", ...).
  std::vector<std::string> decode(std::span<const int> ids) const;
  std::string decode_text(std::span<const int> ids) const;

  // FNV-1a over the token list in id order; stored in checkpoints.
  std::uint64_t hash() const;

  static const std::vector<std::string>& special_tokens();

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> index_;
};

}  // namespace umt
