#include "patchtrack/feature_field.hpp"

#include <algorithm>
#include <cmath>

#include "patchtrack/error.hpp"
#include "patchtrack/kernels.hpp"

namespace patchtrack {

FramePlanes::FramePlanes(const Image& frame, const FeatureConfig& cfg)
    : width_(frame.width()), height_(frame.height()), cfg_(cfg) {
  validate(cfg);
  const std::size_t n = static_cast<std::size_t>(width_) * height_;
  hoc_bins_.resize(n);
  for (std::size_t i = 0; i < n; ++i) hoc_bins_[i] = static_cast<std::uint16_t>(patchtrack::hoc_bin(frame.pixels()[i], cfg));

  std::vector<std::int32_t> luma(n);
  for (int y = 0; y < height_; ++y) {
    kernels::active().luma1000_row(frame.row_bytes(y).data(), luma.data() + index(0, y),
                                   static_cast<std::size_t>(width_));
  }
  hog_votes_.assign(n, HogVote{});
  for (int y = 1; y + 1 < height_; ++y) {
    const std::int32_t* row = luma.data() + index(0, y);
    for (int x = 1; x + 1 < width_; ++x) {
      hog_votes_[index(x, y)] = patchtrack::hog_vote(row[x + 1] - row[x - 1], row[x + width_] - row[x - width_],
                                                     cfg.hog_bins);
    }
  }
}

double mass_distance(std::span<const double> mass, const FeatureHistogram& reference, std::span<double> scratch) {
  double total = 0.0;
  for (double m : mass) total += m;
  if (total > 0.0) {
    for (std::size_t i = 0; i < mass.size(); ++i) scratch[i] = mass[i] / total;
  } else {
    std::fill(scratch.begin(), scratch.end(), 1.0 / static_cast<double>(scratch.size()));
  }
  const double h = kernels::active().hellinger_sq(scratch.data(), reference.bins.data(), scratch.size());
  return std::sqrt(std::clamp(0.5 * h, 0.0, 1.0));
}

DistanceField::DistanceField(const FramePlanes& planes, const FeatureHistogram& reference, int w, int h,
                             const Rect& domain)
    : domain_(domain), win_w_(w), win_h_(h) {
  if (domain.empty() || w < 1 || h < 1) throw Error(ErrorCode::InvalidArgument, "empty distance field");
  if (reference.bins.size() != static_cast<std::size_t>(planes.config().size(reference.kind))) {
    throw Error(ErrorCode::LengthMismatch, "reference histogram size does not match the feature config");
  }
  values_.assign(static_cast<std::size_t>(domain.area()), 1.0);
  if (reference.kind == FeatureKind::HoC) {
    fill_hoc(planes, reference);
  } else {
    fill_hog(planes, reference);
  }
}

void DistanceField::fill_hoc(const FramePlanes& planes, const FeatureHistogram& reference) {
  const std::size_t bins = reference.bins.size();
  std::vector<long long> counts(bins);
  std::vector<double> mass(bins);
  std::vector<double> scratch(bins);
  const Rect frame = planes.bounds();

  for (int oy = domain_.y; oy < domain_.bottom(); ++oy) {
    bool have_window = false;  // counts hold the unclamped window at ox - 1
    for (int ox = domain_.x; ox < domain_.right(); ++ox) {
      const Rect window{ox, oy, win_w_, win_h_};
      const Rect r = intersect(window, frame);
      double& out = values_[static_cast<std::size_t>(oy - domain_.y) * domain_.w + (ox - domain_.x)];
      if (r.empty()) {
        have_window = false;
        out = 1.0;
        continue;
      }
      const bool inside = r == window;
      if (inside && have_window) {
        // slide right by one column
        for (int y = oy; y < oy + win_h_; ++y) {
          --counts[planes.hoc_bin(ox - 1, y)];
          ++counts[planes.hoc_bin(ox + win_w_ - 1, y)];
        }
      } else {
        std::fill(counts.begin(), counts.end(), 0);
        for (int y = r.y; y < r.bottom(); ++y) {
          for (int x = r.x; x < r.right(); ++x) ++counts[planes.hoc_bin(x, y)];
        }
      }
      have_window = inside;
      for (std::size_t i = 0; i < bins; ++i) mass[i] = static_cast<double>(counts[i]);
      out = mass_distance(mass, reference, scratch);
    }
  }
}

void DistanceField::fill_hog(const FramePlanes& planes, const FeatureHistogram& reference) {
  const std::size_t bins = reference.bins.size();
  std::vector<double> mass(bins);
  std::vector<double> scratch(bins);
  const Rect frame = planes.bounds();

  for (int oy = domain_.y; oy < domain_.bottom(); ++oy) {
    for (int ox = domain_.x; ox < domain_.right(); ++ox) {
      const Rect r = intersect({ox, oy, win_w_, win_h_}, frame);
      double& out = values_[static_cast<std::size_t>(oy - domain_.y) * domain_.w + (ox - domain_.x)];
      if (r.w < 3 || r.h < 3) {
        out = 1.0;
        continue;
      }
      std::fill(mass.begin(), mass.end(), 0.0);
      for (int y = r.y + 1; y + 1 < r.bottom(); ++y) {
        for (int x = r.x + 1; x + 1 < r.right(); ++x) {
          const HogVote& v = planes.hog_vote(x, y);
          mass[v.bin0] += v.weight0;
          mass[v.bin1] += v.weight1;
        }
      }
      out = mass_distance(mass, reference, scratch);
    }
  }
}

}  // namespace patchtrack
