#pragma once

#include <cstdint>
#include <vector>

#include "patchtrack/features.hpp"
#include "patchtrack/imaging.hpp"

namespace patchtrack {

/// Per-pixel feature data of one frame, computed once and shared by every
/// window evaluated on that frame.
class FramePlanes {
 public:
  FramePlanes(const Image& frame, const FeatureConfig& cfg);

  int width() const { return width_; }
  int height() const { return height_; }
  Rect bounds() const { return {0, 0, width_, height_}; }
  const FeatureConfig& config() const { return cfg_; }

  std::uint16_t hoc_bin(int x, int y) const { return hoc_bins_[index(x, y)]; }
  /// Gradient vote of an interior pixel (zero on the frame border).
  const HogVote& hog_vote(int x, int y) const { return hog_votes_[index(x, y)]; }

 private:
  std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * width_ + x; }

  int width_;
  int height_;
  FeatureConfig cfg_;
  std::vector<std::uint16_t> hoc_bins_;
  std::vector<HogVote> hog_votes_;
};

/// Distance to `reference` of the (w x h) window at every integer origin in
/// `domain`. Windows are clamped to the frame like crop(); an empty clamped
/// window (or one below 3x3 for HoG) scores 1. Values are bit-identical to
/// region_distance() on the same window.
class DistanceField {
 public:
  DistanceField(const FramePlanes& planes, const FeatureHistogram& reference, int w, int h, const Rect& domain);

  const Rect& domain() const { return domain_; }
  bool contains(int x, int y) const {
    return x >= domain_.x && y >= domain_.y && x < domain_.right() && y < domain_.bottom();
  }
  double at(int x, int y) const {
    return values_[static_cast<std::size_t>(y - domain_.y) * domain_.w + (x - domain_.x)];
  }

 private:
  void fill_hoc(const FramePlanes& planes, const FeatureHistogram& reference);
  void fill_hog(const FramePlanes& planes, const FeatureHistogram& reference);

  Rect domain_;
  int win_w_;
  int win_h_;
  std::vector<double> values_;
};

/// Distance of raw (unnormalized) bin mass to a reference histogram, using
/// the same arithmetic as feature_distance(normalized_histogram(mass), ref).
/// `scratch` must have the reference's size.
double mass_distance(std::span<const double> mass, const FeatureHistogram& reference, std::span<double> scratch);

}  // namespace patchtrack
