#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "patchtrack/imaging.hpp"

namespace patchtrack {

enum class FeatureKind { HoC, HoG };

const char* to_string(FeatureKind kind);

struct FeatureConfig {
  int h_bins = 8;
  int s_bins = 8;
  int v_bins = 4;
  int hog_bins = 9;

  int hoc_size() const { return h_bins * s_bins * v_bins; }
  int size(FeatureKind kind) const { return kind == FeatureKind::HoC ? hoc_size() : hog_bins; }
};

void validate(const FeatureConfig& cfg);

/// L1-normalized, nonnegative histogram of one feature kind.
struct FeatureHistogram {
  FeatureKind kind = FeatureKind::HoC;
  std::vector<double> bins;
  friend bool operator==(const FeatureHistogram&, const FeatureHistogram&) = default;
};

using FeatureSet = std::map<FeatureKind, FeatureHistogram>;

/// Normalizes raw bin mass; all-zero mass yields the uniform histogram.
FeatureHistogram normalized_histogram(FeatureKind kind, std::span<const double> mass);

/// HSV color bin of one pixel (hue-major, then saturation, then value).
int hoc_bin(const Rgb& p, const FeatureConfig& cfg);

/// One pixel's gradient vote split between the two nearest orientation bins.
/// Bin k is centred on orientation k*pi/bins; orientations are unsigned.
struct HogVote {
  std::uint16_t bin0 = 0;
  std::uint16_t bin1 = 0;
  double weight0 = 0.0;
  double weight1 = 0.0;
};
HogVote hog_vote(int gx, int gy, int bins);

FeatureHistogram hoc(const Image& region, const FeatureConfig& cfg);
/// Central-difference gradients over the interior pixels; throws
/// Error(RegionTooSmall) below 3x3.
FeatureHistogram hog(const Image& region, const FeatureConfig& cfg);
FeatureHistogram extract(const Image& region, FeatureKind kind, const FeatureConfig& cfg);
FeatureSet extract_all(const Image& region, const FeatureConfig& cfg);

/// Hellinger form of the Bhattacharyya coefficient, sqrt(1 - sum sqrt(a_i b_i)).
/// 0 for identical histograms, 1 for disjoint supports.
double feature_distance(const FeatureHistogram& a, const FeatureHistogram& b);

/// Kind whose worst-case (minimum) distance to the rivals is largest. Ties go
/// to HoC.
FeatureKind select_dominant(const FeatureSet& part, std::span<const FeatureSet> rivals);

}  // namespace patchtrack
