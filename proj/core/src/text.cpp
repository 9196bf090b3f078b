#include "umt/text.hpp"

#include <fstream>

namespace umt {

const char* side_name(Side side) { return side == Side::Src ? "src" : "tgt"; }

void validate(const TokenSeq& seq, std::size_t max_len) {
  if (seq.ids.size() > max_len)
    throw std::invalid_argument("sequence of length " + std::to_string(seq.ids.size()) +
                                " exceeds maximum " + std::to_string(max_len));
  bool seen_pad = false;
  for (int id : seq.ids) {
    if (id == kPad) {
      seen_pad = true;
    } else if (seen_pad) {
      throw std::invalid_argument("PAD id inside sequence content");
    }
  }
}

std::vector<std::string> split_chars(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const auto lead = static_cast<unsigned char>(text[i]);
    std::size_t len = 0;
    if (lead < 0x80) len = 1;
    else if ((lead >> 5) == 0x6) len = 2;
    else if ((lead >> 4) == 0xE) len = 3;
    else if ((lead >> 3) == 0x1E) len = 4;
    else throw TextError("malformed UTF-8 lead byte at offset " + std::to_string(i));
    if (i + len > text.size()) throw TextError("truncated UTF-8 sequence at end of text");
    for (std::size_t k = 1; k < len; ++k)
      if ((static_cast<unsigned char>(text[i + k]) >> 6) != 0x2)
        throw TextError("malformed UTF-8 continuation at offset " + std::to_string(i + k));
    out.emplace_back(text.substr(i, len));
    i += len;
  }
  return out;
}

std::string join_chars(const std::vector<std::string>& tokens) {
  std::string out;
  for (const auto& t : tokens) out += t;
  return out;
}

std::vector<std::vector<std::string>> parse_poem(std::string_view text) {
  std::vector<std::vector<std::string>> lines;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(kPoemLineSeparator, start);
    const auto piece = text.substr(start, pos == std::string_view::npos ? pos : pos - start);
    lines.push_back(split_chars(piece));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return lines;
}

std::string format_poem(const std::vector<std::vector<std::string>>& lines) {
  std::string out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i) out += kPoemLineSeparator;
    out += join_chars(lines[i]);
  }
  return out;
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw TextError("cannot open for reading: " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

void write_lines(const std::filesystem::path& path, const std::vector<std::string>& lines) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw TextError("cannot open for writing: " + path.string());
  for (const auto& l : lines) out << l << '\n';
  if (!out) throw TextError("write failed: " + path.string());
}

}  // namespace umt
