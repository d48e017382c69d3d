#include "patchtrack/appearance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "patchtrack/error.hpp"

namespace patchtrack {

const char* to_string(OcclusionState state) {
  switch (state) {
    case OcclusionState::Visible: return "Visible";
    case OcclusionState::Partial: return "Partial";
    case OcclusionState::Occluded: return "Occluded";
  }
  return "?";
}

void validate(const AppearanceParams& params) {
  if (!(params.sigma > 0.0)) throw Error(ErrorCode::InvalidArgument, "sigma must be > 0");
  if (params.alpha < 0.0 || params.alpha > 1.0) throw Error(ErrorCode::InvalidArgument, "alpha must lie in [0, 1]");
  if (params.beta < 0.0 || params.beta > 1.0) throw Error(ErrorCode::InvalidArgument, "beta must lie in [0, 1]");
  if (!(params.tau_low < params.tau_high)) throw Error(ErrorCode::InvalidArgument, "tau_low must be < tau_high");
}

Rect patch_region(const Point& center, int w, int h) {
  return {static_cast<int>(std::floor(center.x - w / 2.0 + 0.5)), static_cast<int>(std::floor(center.y - h / 2.0 + 0.5)),
          w, h};
}

double region_distance(const Image& frame, const Rect& rect, const FeatureHistogram& reference,
                       const FeatureConfig& cfg) {
  const Rect r = intersect(rect, frame.bounds());
  if (r.empty()) return 1.0;
  if (reference.kind == FeatureKind::HoG && (r.w < 3 || r.h < 3)) return 1.0;
  return feature_distance(extract(crop(frame, r), reference.kind, cfg), reference);
}

namespace {

void require_patches(std::size_t have, const TemplateModel& model, const char* what) {
  if (have < model.patches.size()) throw Error(ErrorCode::MissingPatch, std::string(what) + " does not cover every patch");
}

}  // namespace

DistanceMap patch_distances(const Image& frame, const Rect& candidate, const TemplateModel& model,
                            const PositionMap& positions, const FeatureConfig& cfg) {
  if (positions.size() < model.patches.size()) {
    throw Error(ErrorCode::MissingPosition, "positions do not cover every patch");
  }
  DistanceMap out(model.patches.size());
  for (const PatchTemplate& p : model.patches) {
    const Rect size = patch_pixel_rect(model.layout.patches[p.id].rect, candidate.w, candidate.h);
    const Image region = crop(frame, patch_region(positions[p.id], size.w, size.h));
    out[p.id] = feature_distance(extract(region, p.hist.kind, cfg), p.hist);
  }
  return out;
}

double candidate_likelihood(const DistanceMap& distances, const TemplateModel& model) {
  require_patches(distances.size(), model, "distances");
  double weighted = 0.0;
  for (const PatchTemplate& p : model.patches) weighted += p.weight * distances[p.id];
  return std::exp(-weighted / (2.0 * model.sigma * model.sigma));
}

TemplateModel update_weights(const TemplateModel& model, const DistanceMap& distances, const AppearanceParams& params) {
  require_patches(distances.size(), model, "distances");
  TemplateModel out = model;
  if (out.patches.empty()) return out;
  const double scale = 1.0 / (2.0 * model.sigma * model.sigma);
  // Softmax of -rho/(2 sigma^2), shifted by the smallest distance for range.
  double min_rho = std::numeric_limits<double>::infinity();
  for (const PatchTemplate& p : model.patches) min_rho = std::min(min_rho, distances[p.id]);
  std::vector<double> delta(model.patches.size());
  double total = 0.0;
  for (std::size_t i = 0; i < model.patches.size(); ++i) {
    delta[i] = std::exp(-(distances[model.patches[i].id] - min_rho) * scale);
    total += delta[i];
  }
  double weight_sum = 0.0;
  for (std::size_t i = 0; i < out.patches.size(); ++i) {
    auto& w = out.patches[i].weight;
    w = (1.0 - params.alpha) * w + params.alpha * (delta[i] / total);
    weight_sum += w;
  }
  for (auto& p : out.patches) p.weight /= weight_sum;
  return out;
}

OcclusionState classify_occlusion(double rho, const AppearanceParams& params) {
  if (rho < params.tau_low) return OcclusionState::Visible;
  if (rho > params.tau_high) return OcclusionState::Occluded;
  return OcclusionState::Partial;
}

TemplateModel update_template(const TemplateModel& model, const std::vector<FeatureHistogram>& observed,
                              const DistanceMap& distances, const AppearanceParams& params) {
  require_patches(distances.size(), model, "distances");
  require_patches(observed.size(), model, "observed histograms");
  TemplateModel out = model;
  for (PatchTemplate& p : out.patches) {
    p.state = classify_occlusion(distances[p.id], params);
    const FeatureHistogram& obs = observed[p.id];
    switch (p.state) {
      case OcclusionState::Visible:
        p.hist = obs;
        break;
      case OcclusionState::Occluded:
        break;
      case OcclusionState::Partial: {
        if (obs.kind != p.hist.kind) throw Error(ErrorCode::KindMismatch, "observed histogram kind differs");
        if (obs.bins.size() != p.hist.bins.size()) throw Error(ErrorCode::LengthMismatch, "observed histogram size differs");
        std::vector<double> mass(p.hist.bins.size());
        for (std::size_t i = 0; i < mass.size(); ++i) {
          mass[i] = (1.0 - params.beta) * p.hist.bins[i] + params.beta * obs.bins[i];
        }
        p.hist = normalized_histogram(p.hist.kind, mass);
        break;
      }
    }
  }
  return out;
}

}  // namespace patchtrack
