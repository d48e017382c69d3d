#include "patchtrack/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <optional>

#include "patchtrack/error.hpp"

namespace patchtrack {
namespace fs = std::filesystem;

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::optional<unsigned long long> frame_number(const fs::path& p) {
  const std::string ext = lower(p.extension().string());
  if (ext != ".jpg" && ext != ".jpeg" && ext != ".png") return std::nullopt;
  const std::string stem = p.stem().string();
  unsigned long long n = 0;
  const auto [ptr, ec] = std::from_chars(stem.data(), stem.data() + stem.size(), n);
  if (stem.empty() || ec != std::errc() || ptr != stem.data() + stem.size()) return std::nullopt;
  return n;
}

void append_number(std::string& out, double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, ptr);
}

}  // namespace

std::vector<BBox> parse_boxes(std::string_view text) {
  std::vector<BBox> boxes;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    const std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

    double v[4];
    int count = 0;
    std::size_t i = 0;
    const auto is_sep = [](char c) { return c == ',' || c == ' ' || c == '\t' || c == '\r'; };
    while (true) {
      while (i < line.size() && is_sep(line[i])) ++i;
      if (i == line.size()) break;
      std::size_t j = i;
      while (j < line.size() && !is_sep(line[j])) ++j;
      if (count == 4) throw ParseError(line_no, "expected 4 fields");
      const auto [ptr, ec] = std::from_chars(line.data() + i, line.data() + j, v[count]);
      if (ec != std::errc() || ptr != line.data() + j) {
        throw ParseError(line_no, "non-numeric field '" + std::string(line.substr(i, j - i)) + "'");
      }
      ++count;
      i = j;
    }
    if (count == 0) continue;
    if (count != 4) throw ParseError(line_no, "expected 4 fields");
    boxes.push_back({v[0] - 1.0, v[1] - 1.0, v[2], v[3]});
  }
  return boxes;
}

std::string format_boxes(std::span<const BBox> boxes) {
  std::string out;
  for (const BBox& b : boxes) {
    append_number(out, b.x + 1.0);
    out += ',';
    append_number(out, b.y + 1.0);
    out += ',';
    append_number(out, b.w);
    out += ',';
    append_number(out, b.h);
    out += '\n';
  }
  return out;
}

std::vector<BBox> read_boxes(const fs::path& path) {
  const std::vector<std::uint8_t> bytes = read_file(path);
  return parse_boxes(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

void write_boxes(const fs::path& path, std::span<const BBox> boxes) {
  const std::string text = format_boxes(boxes);
  write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

SequenceSpec load_sequence(const fs::path& dir) {
  const fs::path img_dir = dir / "img";
  std::error_code ec;
  if (!fs::is_directory(img_dir, ec)) throw Error(ErrorCode::IoError, "missing image folder " + img_dir.string());

  std::vector<std::pair<unsigned long long, fs::path>> frames;
  for (const fs::directory_entry& e : fs::directory_iterator(img_dir)) {
    if (!e.is_regular_file()) continue;
    if (const auto n = frame_number(e.path())) frames.emplace_back(*n, e.path());
  }
  if (frames.empty()) throw Error(ErrorCode::EmptyInput, "no frames in " + img_dir.string());
  std::sort(frames.begin(), frames.end());

  const fs::path gt_path = dir / "groundtruth_rect.txt";
  if (!fs::is_regular_file(gt_path, ec)) throw Error(ErrorCode::MissingGroundTruth, "missing " + gt_path.string());

  SequenceSpec seq;
  seq.name = fs::absolute(dir).lexically_normal().filename().string();
  if (seq.name.empty()) seq.name = fs::absolute(dir).lexically_normal().parent_path().filename().string();
  for (auto& [n, p] : frames) seq.frame_paths.push_back(std::move(p));
  seq.ground_truth = read_boxes(gt_path);
  if (seq.ground_truth.size() != seq.frame_paths.size()) {
    throw Error(ErrorCode::FrameCountMismatch, std::to_string(seq.frame_paths.size()) + " frames but " +
                                                   std::to_string(seq.ground_truth.size()) + " ground-truth boxes");
  }
  const Image first = load_image(seq.frame_paths.front());
  seq.width = first.width();
  seq.height = first.height();
  return seq;
}

Image load_frame(const SequenceSpec& seq, std::size_t i) {
  if (i >= seq.size()) throw Error(ErrorCode::InvalidArgument, "frame index out of range");
  Image img = load_image(seq.frame_paths[i]);
  if (img.width() != seq.width || img.height() != seq.height) {
    throw Error(ErrorCode::InvalidArgument, "frame " + seq.frame_paths[i].string() + " has different dimensions");
  }
  return img;
}

}  // namespace patchtrack
