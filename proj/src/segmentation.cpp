#include "patchtrack/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "patchtrack/error.hpp"
#include "patchtrack/kernels.hpp"

namespace patchtrack {

Rect patch_pixel_rect(const NormRect& rect, int box_w, int box_h) {
  const int x0 = static_cast<int>(std::lround(rect.x0 * box_w));
  const int y0 = static_cast<int>(std::lround(rect.y0 * box_h));
  const int x1 = static_cast<int>(std::lround(rect.x1 * box_w));
  const int y1 = static_cast<int>(std::lround(rect.y1 * box_h));
  return {x0, y0, std::max(1, x1 - x0), std::max(1, y1 - y0)};
}

void validate(const SegmentationParams& params) {
  if (!(params.t_c_value > 0.0)) throw Error(ErrorCode::InvalidArgument, "t_c_value must be > 0");
  if (params.min_band_px < 1) throw Error(ErrorCode::InvalidArgument, "min_band_px must be >= 1");
  if (params.max_patches < 1) throw Error(ErrorCode::InvalidArgument, "max_patches must be >= 1");
}

Profile project(const Image& img, Axis axis) {
  const int w = img.width();
  const int h = img.height();
  std::vector<std::int32_t> luma(static_cast<std::size_t>(w));
  Profile out;
  out.axis = axis;
  if (axis == Axis::Columns) {
    std::vector<std::int64_t> acc(static_cast<std::size_t>(w), 0);
    for (int y = 0; y < h; ++y) {
      kernels::luma1000_row(img.row_bytes(y), luma);
      kernels::accumulate(acc, luma);
    }
    out.values.resize(acc.size());
    const double scale = 1000.0 * h;
    for (std::size_t j = 0; j < acc.size(); ++j) out.values[j] = static_cast<double>(acc[j]) / scale;
  } else {
    out.values.resize(static_cast<std::size_t>(h));
    const double scale = 1000.0 * w;
    for (int y = 0; y < h; ++y) {
      kernels::luma1000_row(img.row_bytes(y), luma);
      out.values[y] = static_cast<double>(kernels::sum(luma)) / scale;
    }
  }
  return out;
}

std::vector<Segment> cluster_profile(const Profile& profile, double t_c) {
  if (!(t_c > 0.0)) throw Error(ErrorCode::InvalidArgument, "t_c must be > 0");
  std::vector<Segment> out;
  const auto& v = profile.values;
  if (v.empty()) return out;
  Segment current{0, 0};
  for (std::size_t j = 0; j + 1 < v.size(); ++j) {
    if (std::abs(v[j] - v[j + 1]) <= t_c) {
      current.end = static_cast<int>(j + 1);
    } else {
      out.push_back(current);
      current = {static_cast<int>(j + 1), static_cast<int>(j + 1)};
    }
  }
  out.push_back(current);
  return out;
}

double clustering_threshold(const Profile& profile, const SegmentationParams& params) {
  if (params.t_c_mode == ThresholdMode::Absolute) return params.t_c_value;
  const auto& v = profile.values;
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  var /= static_cast<double>(v.size());
  const double t = params.t_c_value * std::sqrt(var);
  return t > 0.0 ? t : std::numeric_limits<double>::min();
}

namespace {

double segment_mean(const Profile& profile, const Segment& s) {
  double total = 0.0;
  for (int i = s.start; i <= s.end; ++i) total += profile.values[i];
  return total / s.length();
}

}  // namespace

std::vector<Segment> merge_narrow_segments(const Profile& profile, std::vector<Segment> segments, int min_len) {
  while (segments.size() > 1) {
    std::size_t narrow = segments.size();
    for (std::size_t i = 0; i < segments.size(); ++i) {
      if (segments[i].length() >= min_len) continue;
      if (narrow == segments.size() || segments[i].length() < segments[narrow].length()) narrow = i;
    }
    if (narrow == segments.size()) break;

    const double m = segment_mean(profile, segments[narrow]);
    std::size_t target;
    if (narrow == 0) {
      target = 1;
    } else if (narrow + 1 == segments.size()) {
      target = narrow - 1;
    } else {
      const double left = std::abs(segment_mean(profile, segments[narrow - 1]) - m);
      const double right = std::abs(segment_mean(profile, segments[narrow + 1]) - m);
      target = right < left ? narrow + 1 : narrow - 1;
    }
    const std::size_t lo = std::min(narrow, target);
    segments[lo] = {segments[lo].start, segments[lo + 1].end};
    segments.erase(segments.begin() + static_cast<std::ptrdiff_t>(lo) + 1);
  }
  return segments;
}

namespace {

struct Part {
  Segment primary;    // range along the primary axis (the band)
  Segment secondary;  // range along the other axis
  double mean = 0.0;  // mean luminance of the part's pixels
  double area = 0.0;
  std::size_t band = 0;
};

Image band_image(const Image& region, Axis primary, const Segment& band) {
  if (primary == Axis::Rows) return crop(region, {0, band.start, region.width(), band.length()});
  return crop(region, {band.start, 0, band.length(), region.height()});
}

}  // namespace

PatchLayout segment_object(const Image& img, const Rect& box, const SegmentationParams& params) {
  validate(params);
  const Image region = crop(img, box);
  const int w = region.width();
  const int h = region.height();

  // A profile along the rows splits the box into horizontal bands.
  const Axis primary = h >= w ? Axis::Rows : Axis::Columns;
  const Axis secondary = primary == Axis::Rows ? Axis::Columns : Axis::Rows;
  const int secondary_len = primary == Axis::Rows ? w : h;

  const Profile band_profile = project(region, primary);
  auto bands = cluster_profile(band_profile, clustering_threshold(band_profile, params));
  bands = merge_narrow_segments(band_profile, std::move(bands), params.min_band_px);

  std::vector<Part> parts;
  for (std::size_t b = 0; b < bands.size(); ++b) {
    const Segment& band = bands[b];
    if (params.subdivide) {
      const Profile sub = project(band_image(region, primary, band), secondary);
      auto pieces = cluster_profile(sub, clustering_threshold(sub, params));
      pieces = merge_narrow_segments(sub, std::move(pieces), params.min_band_px);
      for (const Segment& piece : pieces) {
        parts.push_back({band, piece, segment_mean(sub, piece),
                         static_cast<double>(band.length()) * piece.length(), b});
      }
    } else {
      parts.push_back({band, Segment{0, secondary_len - 1}, segment_mean(band_profile, band),
                       static_cast<double>(band.length()) * secondary_len, b});
    }
  }

  // Cap the patch count: merge the most similar adjacent pair. Sub-parts of
  // one band merge along the secondary axis; whole bands merge with whole
  // neighboring bands so every part stays rectangular.
  while (parts.size() > static_cast<std::size_t>(params.max_patches)) {
    std::size_t best = parts.size();
    double best_diff = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
      const Part& a = parts[i];
      const Part& c = parts[i + 1];
      bool adjacent = false;
      if (a.band == c.band) {
        adjacent = true;
      } else {
        const bool a_whole = a.secondary.start == 0 && a.secondary.end == secondary_len - 1;
        const bool c_whole = c.secondary.start == 0 && c.secondary.end == secondary_len - 1;
        adjacent = a_whole && c_whole && a.primary.end + 1 == c.primary.start;
      }
      if (!adjacent) continue;
      const double diff = std::abs(a.mean - c.mean);
      if (diff < best_diff) {
        best_diff = diff;
        best = i;
      }
    }
    if (best == parts.size()) break;
    Part& a = parts[best];
    const Part& c = parts[best + 1];
    const double area = a.area + c.area;
    a.mean = (a.mean * a.area + c.mean * c.area) / area;
    a.area = area;
    if (a.band == c.band) {
      a.secondary.end = c.secondary.end;
    } else {
      a.primary.end = c.primary.end;
      const std::size_t merged_band = c.band;
      for (std::size_t k = best + 1; k < parts.size(); ++k) {
        if (parts[k].band >= merged_band) --parts[k].band;
      }
    }
    parts.erase(parts.begin() + static_cast<std::ptrdiff_t>(best) + 1);
  }

  PatchLayout layout;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const Part& p = parts[i];
    NormRect r;
    const int primary_len = primary == Axis::Rows ? h : w;
    const double p0 = static_cast<double>(p.primary.start) / primary_len;
    const double p1 = static_cast<double>(p.primary.end + 1) / primary_len;
    const double s0 = static_cast<double>(p.secondary.start) / secondary_len;
    const double s1 = static_cast<double>(p.secondary.end + 1) / secondary_len;
    if (primary == Axis::Rows) {
      r = {s0, p0, s1, p1};
    } else {
      r = {p0, s0, p1, s1};
    }
    layout.patches.push_back({static_cast<int>(i), r});
  }
  return layout;
}

}  // namespace patchtrack
