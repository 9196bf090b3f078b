#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace umt {

// Reserved vocabulary ids; corpus tokens start at kFirstCorpusId.
inline constexpr int kPad = 0;
inline constexpr int kBos = 1;
inline constexpr int kEos = 2;
inline constexpr int kUnk = 3;
inline constexpr int kBlank = 4;
inline constexpr int kSegPad = 5;  // "<p>"
inline constexpr int kFirstCorpusId = 6;

enum class Side : std::uint8_t { Src = 0, Tgt = 1 };

const char* side_name(Side side);

// Token ids of one example. Src is the verbose (vernacular) side, Tgt the
// terse (poem) side. Contains content only: framing tokens (BOS/EOS) are
// added where sequences enter the model.
struct TokenSeq {
  std::vector<int> ids;
  Side side = Side::Src;

  bool operator==(const TokenSeq&) const = default;
};

// Throws std::invalid_argument when a PAD id occurs before a non-PAD id or
// the sequence is longer than max_len.
void validate(const TokenSeq& seq, std::size_t max_len);

class TextError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One token per Unicode scalar value. Throws TextError on malformed UTF-8.
std::vector<std::string> split_chars(std::string_view text);
std::string join_chars(const std::vector<std::string>& tokens);

// A poem example is its lines joined by '|'.
inline constexpr char kPoemLineSeparator = '|';
std::vector<std::vector<std::string>> parse_poem(std::string_view text);
std::string format_poem(const std::vector<std::vector<std::string>>& lines);

// UTF-8 text files, one example per line; a trailing '\r' is dropped.
std::vector<std::string> read_lines(const std::filesystem::path& path);
void write_lines(const std::filesystem::path& path, const std::vector<std::string>& lines);

}  // namespace umt
