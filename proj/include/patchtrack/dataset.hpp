#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "patchtrack/imaging.hpp"

namespace patchtrack {

/// OTB-style sequence: frames in img/ plus one ground-truth box per frame,
/// held 0-based in memory.
struct SequenceSpec {
  std::string name;
  std::vector<std::filesystem::path> frame_paths;
  std::vector<BBox> ground_truth;
  int width = 0;
  int height = 0;

  std::size_t size() const { return frame_paths.size(); }
};

/// Reads dir/img/<number>.{jpg,jpeg,png} in numeric order and
/// dir/groundtruth_rect.txt. Dimensions come from the first frame.
SequenceSpec load_sequence(const std::filesystem::path& dir);

/// Loads frame i and checks it against the sequence dimensions.
Image load_frame(const SequenceSpec& seq, std::size_t i);

/// One box per non-blank line, "x y w h" separated by commas, tabs or
/// spaces, 1-based in the text; returned 0-based.
std::vector<BBox> parse_boxes(std::string_view text);
/// Inverse of parse_boxes; values are written in shortest round-trip form.
std::string format_boxes(std::span<const BBox> boxes);

std::vector<BBox> read_boxes(const std::filesystem::path& path);
void write_boxes(const std::filesystem::path& path, std::span<const BBox> boxes);

}  // namespace patchtrack
