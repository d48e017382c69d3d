#pragma once

#include <vector>

#include "patchtrack/features.hpp"
#include "patchtrack/imaging.hpp"
#include "patchtrack/segmentation.hpp"
#include "patchtrack/structure.hpp"

namespace patchtrack {

enum class OcclusionState { Visible, Partial, Occluded };

const char* to_string(OcclusionState state);

struct PatchTemplate {
  int id = 0;
  FeatureKind dominant = FeatureKind::HoC;
  FeatureHistogram hist;
  double weight = 0.0;
  OcclusionState state = OcclusionState::Visible;
  friend bool operator==(const PatchTemplate&, const PatchTemplate&) = default;
};

struct TemplateModel {
  PatchLayout layout;
  std::vector<PatchTemplate> patches;  // indexed by patch id
  SpatialGraph graph;
  double sigma = 0.2;
  friend bool operator==(const TemplateModel&, const TemplateModel&) = default;
};

struct AppearanceParams {
  double sigma = 0.2;
  double alpha = 0.05;     // weight adaptation rate
  double tau_low = 0.15;   // below: patch unchanged (Visible)
  double tau_high = 0.4;   // above: patch occluded
  double beta = 0.1;       // template blend rate for Partial patches
};

void validate(const AppearanceParams& params);

/// Distances indexed by patch id.
using DistanceMap = std::vector<double>;

/// Region of a patch of size (w, h) centred on `center`.
Rect patch_region(const Point& center, int w, int h);

/// Distance of the frame region `rect` (clamped to the frame) to `reference`.
/// Regions that are empty after clamping, or too small for HoG, score 1.
double region_distance(const Image& frame, const Rect& rect, const FeatureHistogram& reference,
                       const FeatureConfig& cfg);

/// Per-patch distance between the frame at the localized patch positions and
/// the template. Patch sizes come from the layout scaled to the candidate's
/// size. Region errors propagate.
DistanceMap patch_distances(const Image& frame, const Rect& candidate, const TemplateModel& model,
                            const PositionMap& positions, const FeatureConfig& cfg);

/// exp(-(sum_b w_b rho_b) / (2 sigma^2)); the normalization constant is 1.
double candidate_likelihood(const DistanceMap& distances, const TemplateModel& model);

/// w_b <- (1 - alpha) w_b + alpha * softmax_b(-rho_b / (2 sigma^2)).
TemplateModel update_weights(const TemplateModel& model, const DistanceMap& distances, const AppearanceParams& params);

OcclusionState classify_occlusion(double rho, const AppearanceParams& params);

/// Visible: replace, Occluded: keep, Partial: blend with rate beta.
TemplateModel update_template(const TemplateModel& model, const std::vector<FeatureHistogram>& observed,
                              const DistanceMap& distances, const AppearanceParams& params);

}  // namespace patchtrack
