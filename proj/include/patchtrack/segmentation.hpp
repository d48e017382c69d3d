#pragma once

#include <vector>

#include "patchtrack/imaging.hpp"

namespace patchtrack {

enum class Axis { Columns, Rows };

/// Per-column (or per-row) mean luminance of a region.
struct Profile {
  std::vector<double> values;
  Axis axis = Axis::Columns;
};

/// Inclusive index range of a profile cluster.
struct Segment {
  int start = 0;
  int end = 0;
  int length() const { return end - start + 1; }
  friend bool operator==(const Segment&, const Segment&) = default;
};

/// Rectangle in coordinates normalized to the object box, [x0, x1) x [y0, y1).
struct NormRect {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 1.0;
  double y1 = 1.0;
  double area() const { return (x1 - x0) * (y1 - y0); }
  friend bool operator==(const NormRect&, const NormRect&) = default;
};

struct PatchRect {
  int id = 0;
  NormRect rect;
  friend bool operator==(const PatchRect&, const PatchRect&) = default;
};

struct PatchLayout {
  std::vector<PatchRect> patches;
  std::size_t size() const { return patches.size(); }
  friend bool operator==(const PatchLayout&, const PatchLayout&) = default;
};

/// Pixel rectangle of a normalized patch inside a box of the given size,
/// relative to the box origin.
Rect patch_pixel_rect(const NormRect& rect, int box_w, int box_h);

enum class ThresholdMode { Absolute, Relative };

struct SegmentationParams {
  ThresholdMode t_c_mode = ThresholdMode::Relative;
  /// Absolute luminance step, or multiple of the profile's standard deviation.
  double t_c_value = 0.5;
  int min_band_px = 8;
  int max_patches = 12;
  bool subdivide = true;
};

void validate(const SegmentationParams& params);

Profile project(const Image& img, Axis axis);

/// Splits the profile wherever consecutive values differ by more than t_c.
std::vector<Segment> cluster_profile(const Profile& profile, double t_c);

/// Clustering threshold for a profile under the given params. In relative
/// mode a zero-variance profile gets a tiny positive threshold (one cluster).
double clustering_threshold(const Profile& profile, const SegmentationParams& params);

/// Merges segments shorter than min_len into the neighbor whose mean profile
/// value is closer (the earlier neighbor on a tie), narrowest first.
std::vector<Segment> merge_narrow_segments(const Profile& profile, std::vector<Segment> segments, int min_len);

PatchLayout segment_object(const Image& img, const Rect& box, const SegmentationParams& params);

}  // namespace patchtrack
