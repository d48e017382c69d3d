#include "patchtrack/features.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "patchtrack/error.hpp"
#include "patchtrack/kernels.hpp"

namespace patchtrack {

const char* to_string(FeatureKind kind) { return kind == FeatureKind::HoC ? "HoC" : "HoG"; }

void validate(const FeatureConfig& cfg) {
  if (cfg.h_bins < 2 || cfg.s_bins < 2 || cfg.v_bins < 2 || cfg.hog_bins < 2) {
    throw Error(ErrorCode::InvalidArgument, "feature bin counts must be >= 2");
  }
}

FeatureHistogram normalized_histogram(FeatureKind kind, std::span<const double> mass) {
  FeatureHistogram out{kind, std::vector<double>(mass.begin(), mass.end())};
  double total = 0.0;
  for (double m : mass) total += m;
  if (total > 0.0) {
    for (double& b : out.bins) b /= total;
  } else {
    std::fill(out.bins.begin(), out.bins.end(), 1.0 / static_cast<double>(out.bins.size()));
  }
  return out;
}

int hoc_bin(const Rgb& p, const FeatureConfig& cfg) {
  // Exact integer binning: hue in sextants is (k c + delta) / c.
  const int mx = std::max({p.r, p.g, p.b});
  const int mn = std::min({p.r, p.g, p.b});
  const int chroma = mx - mn;
  long long hb = 0;
  if (chroma > 0) {
    long long sextant;  // hue * chroma / 60, in [0, 6 chroma)
    if (mx == p.r) {
      sextant = p.g - p.b;
      if (sextant < 0) sextant += 6LL * chroma;
    } else if (mx == p.g) {
      sextant = 2LL * chroma + (p.b - p.r);
    } else {
      sextant = 4LL * chroma + (p.r - p.g);
    }
    hb = sextant * cfg.h_bins / (6LL * chroma);
  }
  const long long sb = mx > 0 ? std::min<long long>(cfg.s_bins - 1, 1LL * chroma * cfg.s_bins / mx) : 0;
  const long long vb = std::min<long long>(cfg.v_bins - 1, 1LL * mx * cfg.v_bins / 255);
  return static_cast<int>((hb * cfg.s_bins + sb) * cfg.v_bins + vb);
}

HogVote hog_vote(int gx, int gy, int bins) {
  HogVote vote;
  if (gx == 0 && gy == 0) return vote;
  const double magnitude = std::sqrt(static_cast<double>(gx) * gx + static_cast<double>(gy) * gy);
  double theta = std::atan2(static_cast<double>(gy), static_cast<double>(gx));
  if (theta < 0.0) theta += std::numbers::pi;
  if (theta >= std::numbers::pi) theta -= std::numbers::pi;
  const double pos = theta / (std::numbers::pi / bins);
  int b0 = static_cast<int>(pos);
  const double frac = pos - b0;
  b0 %= bins;
  vote.bin0 = static_cast<std::uint16_t>(b0);
  vote.bin1 = static_cast<std::uint16_t>((b0 + 1) % bins);
  vote.weight0 = magnitude * (1.0 - frac);
  vote.weight1 = magnitude * frac;
  return vote;
}

FeatureHistogram hoc(const Image& region, const FeatureConfig& cfg) {
  if (region.empty()) throw Error(ErrorCode::EmptyRegion, "hoc of an empty region");
  std::vector<double> mass(static_cast<std::size_t>(cfg.hoc_size()), 0.0);
  for (const Rgb& p : region.pixels()) mass[hoc_bin(p, cfg)] += 1.0;
  return normalized_histogram(FeatureKind::HoC, mass);
}

FeatureHistogram hog(const Image& region, const FeatureConfig& cfg) {
  if (region.empty()) throw Error(ErrorCode::EmptyRegion, "hog of an empty region");
  const int w = region.width();
  const int h = region.height();
  if (w < 3 || h < 3) throw Error(ErrorCode::RegionTooSmall, "hog needs at least 3x3 pixels");
  std::vector<std::int32_t> luma(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y) {
    kernels::active().luma1000_row(region.row_bytes(y).data(), luma.data() + static_cast<std::size_t>(y) * w,
                                   static_cast<std::size_t>(w));
  }
  std::vector<double> mass(static_cast<std::size_t>(cfg.hog_bins), 0.0);
  for (int y = 1; y + 1 < h; ++y) {
    const std::int32_t* row = luma.data() + static_cast<std::size_t>(y) * w;
    for (int x = 1; x + 1 < w; ++x) {
      const int gx = row[x + 1] - row[x - 1];
      const int gy = row[x + w] - row[x - w];
      const HogVote v = hog_vote(gx, gy, cfg.hog_bins);
      mass[v.bin0] += v.weight0;
      mass[v.bin1] += v.weight1;
    }
  }
  return normalized_histogram(FeatureKind::HoG, mass);
}

FeatureHistogram extract(const Image& region, FeatureKind kind, const FeatureConfig& cfg) {
  return kind == FeatureKind::HoC ? hoc(region, cfg) : hog(region, cfg);
}

FeatureSet extract_all(const Image& region, const FeatureConfig& cfg) {
  FeatureSet out;
  out.emplace(FeatureKind::HoC, hoc(region, cfg));
  out.emplace(FeatureKind::HoG, hog(region, cfg));
  return out;
}

double feature_distance(const FeatureHistogram& a, const FeatureHistogram& b) {
  if (a.kind != b.kind) throw Error(ErrorCode::KindMismatch, "histograms of different kinds");
  if (a.bins.size() != b.bins.size()) throw Error(ErrorCode::LengthMismatch, "histogram bin counts differ");
  return std::sqrt(std::clamp(0.5 * kernels::hellinger_sq(a.bins, b.bins), 0.0, 1.0));
}

FeatureKind select_dominant(const FeatureSet& part, std::span<const FeatureSet> rivals) {
  if (rivals.empty()) throw Error(ErrorCode::InvalidArgument, "select_dominant needs at least one rival");
  if (part.empty()) throw Error(ErrorCode::MissingKind, "part has no features");
  FeatureKind best = FeatureKind::HoC;
  double best_margin = -1.0;
  for (FeatureKind kind : {FeatureKind::HoC, FeatureKind::HoG}) {
    const auto own = part.find(kind);
    if (own == part.end()) continue;
    double margin = std::numeric_limits<double>::infinity();
    for (const FeatureSet& rival : rivals) {
      const auto it = rival.find(kind);
      if (it == rival.end()) throw Error(ErrorCode::MissingKind, std::string("rival lacks ") + to_string(kind));
      margin = std::min(margin, feature_distance(own->second, it->second));
    }
    if (margin > best_margin) {
      best_margin = margin;
      best = kind;
    }
  }
  return best;
}

}  // namespace patchtrack
