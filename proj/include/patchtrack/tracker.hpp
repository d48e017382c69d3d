#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "patchtrack/appearance.hpp"
#include "patchtrack/feature_field.hpp"
#include "patchtrack/features.hpp"
#include "patchtrack/imaging.hpp"
#include "patchtrack/particle_filter.hpp"
#include "patchtrack/segmentation.hpp"
#include "patchtrack/structure.hpp"

namespace patchtrack {

enum class PatchLocalization { Refine, Resegment };

struct TrackerConfig {
  SegmentationParams segmentation;
  FeatureConfig features;
  AppearanceParams appearance;
  MotionModel motion;
  double stiffness = 0.01;      // K of the pairwise spatial term, per px^2
  double lambda = 1.0;          // exponent of the spatial score
  double theta = 0.5;           // gate: required fraction of passing patches
  int particles = 200;
  std::uint64_t seed = 0;
  PatchLocalization patch_localization = PatchLocalization::Refine;
  int refine_radius = 6;
  double reference_rate = 0.05;  // EMA rate of the spatial reference distances
  int ring_patches = 8;          // background rivals for dominant-feature selection
  double ring_scale = 1.5;       // ring radius as a multiple of the box half-diagonal
};

void validate(const TrackerConfig& cfg);

/// Score assigned to gated candidates; keeps reweighting well defined.
inline constexpr double kGatedScore = 1e-12;

struct TrackerState {
  TemplateModel model;
  ParticleSet particles;
  int box_w = 0;
  int box_h = 0;
  int frame_index = 0;
  BBox last_estimate;
  /// Patch rectangles in pixels relative to the box origin, by patch id.
  std::vector<Rect> patch_rects;
  friend bool operator==(const TrackerState&, const TrackerState&) = default;
};

TrackerState init(const Image& frame, const BBox& box, const TrackerConfig& cfg);

/// Patch centres found inside a candidate plus each patch's distance to its
/// template at that centre. In resegment mode, template patches without a
/// matching segment sit at their nominal centre with distance 1.
struct Localization {
  PositionMap positions;
  DistanceMap distances;
  std::vector<bool> matched;
};

/// Candidate box of the tracked size centred on (x, y).
Rect candidate_rect(double x, double y, const TrackerState& state);

/// Reference implementation working directly on the frame.
Localization localize_patches(const Image& frame, const Rect& candidate, const TrackerState& state,
                              const TrackerConfig& cfg);

/// Gate plus combined appearance and spatial score of a localized candidate.
double localized_score(const Localization& loc, const TrackerState& state, const TrackerConfig& cfg);

double particle_score(const Image& frame, const Rect& candidate, const TrackerState& state, const TrackerConfig& cfg);

/// Fast path for scoring many candidates on one frame: each patch's distance
/// to its template is computed once per window origin. Results equal
/// localize_patches / particle_score for the same candidate.
class FrameScorer {
 public:
  FrameScorer(const Image& frame, const TrackerState& state, const TrackerConfig& cfg,
              std::span<const Rect> candidates);

  Localization localize(const Rect& candidate) const;
  double score(const Rect& candidate) const;

 private:
  const Image& frame_;
  const TrackerState& state_;
  const TrackerConfig& cfg_;
  std::optional<FramePlanes> planes_;
  std::vector<DistanceField> fields_;
};

/// Frame-level diagnostics of one step.
struct StepInfo {
  bool resampled = false;
  bool degenerate = false;
  double ess = 0.0;
  DistanceMap distances;  // at the estimate, before the template update
};

std::pair<TrackerState, BBox> step(TrackerState state, const Image& frame, const TrackerConfig& cfg,
                                   StepInfo* info = nullptr);

// ---------------------------------------------------------------------------
// Baseline: particle filter on a single whole-box histogram.

struct BaselineState {
  FeatureHistogram reference;
  ParticleSet particles;
  int box_w = 0;
  int box_h = 0;
  int frame_index = 0;
  BBox last_estimate;
  friend bool operator==(const BaselineState&, const BaselineState&) = default;
};

BaselineState baseline_init(const Image& frame, const BBox& box, FeatureKind kind, const TrackerConfig& cfg);

double baseline_score(const Image& frame, const Rect& candidate, const BaselineState& state, const TrackerConfig& cfg);

std::pair<BaselineState, BBox> baseline_step(BaselineState state, const Image& frame, const TrackerConfig& cfg);

// ---------------------------------------------------------------------------

enum class TrackerKind { Proposed, BaselineHoC, BaselineHoG };

const char* to_string(TrackerKind kind);
std::optional<TrackerKind> parse_tracker_kind(const std::string& name);

/// Runs a tracker over a frame sequence. The first output is `initial`.
std::vector<BBox> track_sequence(TrackerKind kind, std::size_t frame_count,
                                 const std::function<Image(std::size_t)>& frame_at, const BBox& initial,
                                 const TrackerConfig& cfg);

}  // namespace patchtrack
