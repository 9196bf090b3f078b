#pragma once

// Phrase-segmentation padding for poem lines. Each line is cut into phrases
// following a segmentation schema (2-2-3 for seven-character lines) and every
// phrase of length m is followed by m * (pad_factor - 1) "<p>" tokens, so a
// padded line is pad_factor times as long as the original.

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "umt/text.hpp"

namespace umt {

struct SegmentationSchema {
  std::vector<int> segments{2, 2, 3};
  int pad_factor = 2;

  std::size_t line_length() const;
  void validate() const;
  // "2-2-3" style; pad_factor keeps its default.
  static SegmentationSchema parse(std::string_view text);
  std::string to_string() const;  // "2-2-3"
};

using PoemLines = std::vector<std::vector<int>>;

std::vector<std::vector<int>> segment_line(std::span<const int> line,
                                           const SegmentationSchema& schema);

TokenSeq pad_poem(const PoemLines& poem, const SegmentationSchema& schema);

// Removes every "<p>" and regroups the remaining ids into lines of
// `line_length`; a trailing partial line is kept as-is.
PoemLines strip_padding(std::span<const int> ids, std::size_t line_length);

std::vector<int> flatten(const PoemLines& poem);

}  // namespace umt
