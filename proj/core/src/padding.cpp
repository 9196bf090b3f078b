#include "umt/padding.hpp"

#include <charconv>
#include <numeric>
#include <stdexcept>

namespace umt {

std::size_t SegmentationSchema::line_length() const {
  return static_cast<std::size_t>(std::accumulate(segments.begin(), segments.end(), 0));
}

void SegmentationSchema::validate() const {
  if (segments.empty()) throw std::invalid_argument("segmentation schema has no segments");
  for (int s : segments)
    if (s <= 0) throw std::invalid_argument("segment lengths must be positive");
  if (pad_factor <= 0) throw std::invalid_argument("pad_factor must be positive");
}

SegmentationSchema SegmentationSchema::parse(std::string_view text) {
  SegmentationSchema schema;
  schema.segments.clear();
  std::size_t start = 0;
  while (start <= text.size()) {
    auto pos = text.find('-', start);
    if (pos == std::string_view::npos) pos = text.size();
    const auto piece = text.substr(start, pos - start);
    int value = 0;
    auto [ptr, ec] = std::from_chars(piece.data(), piece.data() + piece.size(), value);
    if (ec != std::errc() || ptr != piece.data() + piece.size())
      throw std::invalid_argument("bad segmentation schema '" + std::string(text) + "'");
    schema.segments.push_back(value);
    start = pos + 1;
  }
  schema.validate();
  return schema;
}

std::string SegmentationSchema::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (i) out += '-';
    out += std::to_string(segments[i]);
  }
  return out;
}

std::vector<std::vector<int>> segment_line(std::span<const int> line,
                                           const SegmentationSchema& schema) {
  schema.validate();
  if (line.size() != schema.line_length())
    throw std::invalid_argument("segment_line: schema " + schema.to_string() + " expects " +
                                std::to_string(schema.line_length()) + " tokens, line has " +
                                std::to_string(line.size()));
  std::vector<std::vector<int>> out;
  std::size_t pos = 0;
  for (int len : schema.segments) {
    out.emplace_back(line.begin() + pos, line.begin() + pos + len);
    pos += static_cast<std::size_t>(len);
  }
  return out;
}

TokenSeq pad_poem(const PoemLines& poem, const SegmentationSchema& schema) {
  TokenSeq out{{}, Side::Tgt};
  for (const auto& line : poem) {
    for (const auto& seg : segment_line(line, schema)) {
      out.ids.insert(out.ids.end(), seg.begin(), seg.end());
      out.ids.insert(out.ids.end(), seg.size() * static_cast<std::size_t>(schema.pad_factor - 1),
                     kSegPad);
    }
  }
  return out;
}

PoemLines strip_padding(std::span<const int> ids, std::size_t line_length) {
  if (line_length == 0) throw std::invalid_argument("strip_padding: zero line length");
  PoemLines lines;
  std::vector<int> current;
  for (int id : ids) {
    if (id == kSegPad) continue;
    current.push_back(id);
    if (current.size() == line_length) {
      lines.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) lines.push_back(std::move(current));
  return lines;
}

std::vector<int> flatten(const PoemLines& poem) {
  std::vector<int> out;
  for (const auto& l : poem) out.insert(out.end(), l.begin(), l.end());
  return out;
}

}  // namespace umt
