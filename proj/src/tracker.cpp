#include "patchtrack/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <tuple>

#include "patchtrack/error.hpp"
#include "patchtrack/parallel.hpp"

namespace patchtrack {

void validate(const TrackerConfig& cfg) {
  validate(cfg.segmentation);
  validate(cfg.features);
  validate(cfg.appearance);
  if (cfg.motion.std_x < 0.0 || cfg.motion.std_y < 0.0) throw Error(ErrorCode::InvalidArgument, "motion std must be >= 0");
  if (cfg.stiffness < 0.0) throw Error(ErrorCode::InvalidArgument, "stiffness must be >= 0");
  if (cfg.lambda < 0.0) throw Error(ErrorCode::InvalidArgument, "lambda must be >= 0");
  if (cfg.theta < 0.0 || cfg.theta > 1.0) throw Error(ErrorCode::InvalidArgument, "theta must lie in [0, 1]");
  if (cfg.particles < 1) throw Error(ErrorCode::InvalidArgument, "particles must be >= 1");
  if (cfg.refine_radius < 0) throw Error(ErrorCode::InvalidArgument, "refine_radius must be >= 0");
  if (cfg.reference_rate < 0.0 || cfg.reference_rate > 1.0) {
    throw Error(ErrorCode::InvalidArgument, "reference_rate must lie in [0, 1]");
  }
  if (cfg.ring_patches < 0) throw Error(ErrorCode::InvalidArgument, "ring_patches must be >= 0");
  if (!(cfg.ring_scale > 0.0)) throw Error(ErrorCode::InvalidArgument, "ring_scale must be > 0");
}

namespace {

Rect offset(const Rect& r, int dx, int dy) { return {r.x + dx, r.y + dy, r.w, r.h}; }

Point rect_center(const Rect& r) { return {r.x + r.w / 2.0, r.y + r.h / 2.0}; }

/// Features of a frame region clamped to the frame; HoG only when the
/// clamped region is at least 3x3. Empty regions yield an empty set.
FeatureSet region_features(const Image& frame, const Rect& rect, const FeatureConfig& cfg) {
  FeatureSet out;
  const Rect r = intersect(rect, frame.bounds());
  if (r.empty()) return out;
  const Image region = crop(frame, r);
  out.emplace(FeatureKind::HoC, hoc(region, cfg));
  if (r.w >= 3 && r.h >= 3) out.emplace(FeatureKind::HoG, hog(region, cfg));
  return out;
}

std::vector<Rect> ring_rects(const Point& center, int box_w, int box_h, int patch_w, int patch_h,
                             const TrackerConfig& cfg) {
  std::vector<Rect> out;
  const double radius = cfg.ring_scale * 0.5 * std::hypot(box_w, box_h);
  for (int k = 0; k < cfg.ring_patches; ++k) {
    const double angle = 2.0 * std::numbers::pi * k / cfg.ring_patches;
    out.push_back(patch_region({center.x + radius * std::cos(angle), center.y + radius * std::sin(angle)}, patch_w,
                               patch_h));
  }
  return out;
}

/// Dominant kind of the patch at `patch` against the other patches and the
/// background ring around the object. Kinds that some rival cannot provide
/// are not considered.
FeatureKind choose_dominant(const Image& frame, const Rect& patch, std::span<const Rect> others, const Point& box_center,
                            int box_w, int box_h, const TrackerConfig& cfg) {
  FeatureSet own = region_features(frame, patch, cfg.features);
  if (own.empty()) return FeatureKind::HoC;
  std::vector<FeatureSet> rivals;
  for (const Rect& r : others) {
    FeatureSet s = region_features(frame, r, cfg.features);
    if (!s.empty()) rivals.push_back(std::move(s));
  }
  for (const Rect& r : ring_rects(box_center, box_w, box_h, patch.w, patch.h, cfg)) {
    FeatureSet s = region_features(frame, r, cfg.features);
    if (!s.empty()) rivals.push_back(std::move(s));
  }
  if (rivals.empty()) return FeatureKind::HoC;
  for (const FeatureSet& s : rivals) {
    if (!s.contains(FeatureKind::HoG)) own.erase(FeatureKind::HoG);
  }
  return select_dominant(own, rivals);
}

/// Score from gate, appearance likelihood and spatial consistency.
double combine(const DistanceMap& distances, const PositionMap& positions, const TrackerState& state,
               const TrackerConfig& cfg) {
  const TemplateModel& model = state.model;
  const std::size_t n = model.patches.size();
  std::vector<bool> considered(n);
  std::size_t considered_count = 0;
  for (std::size_t b = 0; b < n; ++b) {
    considered[b] = model.patches[b].state != OcclusionState::Occluded;
    if (considered[b]) ++considered_count;
  }
  // With every patch occluded the gate holds vacuously and the spatial term
  // falls back to the whole graph.
  if (considered_count == 0) std::fill(considered.begin(), considered.end(), true);

  const double edge_bar = std::exp(-1.0);
  std::vector<bool> spatial_ok(n, true);
  double exponent = 0.0;
  std::size_t edge_count = 0;
  for (const SpatialEdge& e : model.graph.edges) {
    if (!considered[e.i] || !considered[e.j]) continue;
    const double dev = distance(positions[e.i], positions[e.j]) - e.xi;
    exponent += dev * dev;
    ++edge_count;
    if (spatial_likelihood(dev + e.xi, e.xi, model.graph.stiffness) < edge_bar) {
      spatial_ok[e.i] = false;
      spatial_ok[e.j] = false;
    }
  }

  if (considered_count > 0) {
    std::size_t passing = 0;
    for (std::size_t b = 0; b < n; ++b) {
      if (considered[b] && spatial_ok[b] && distances[b] <= cfg.appearance.tau_high) ++passing;
    }
    if (static_cast<double>(passing) < cfg.theta * static_cast<double>(considered_count)) return kGatedScore;
  }

  const double likelihood = candidate_likelihood(distances, model);
  const double structure =
      edge_count == 0 ? 1.0 : std::exp(-model.graph.stiffness * exponent / static_cast<double>(edge_count));
  const double spatial = cfg.lambda == 0.0 ? 1.0 : std::pow(structure, cfg.lambda);
  return std::max(kGatedScore, likelihood * spatial);
}

struct Match {
  double overlap;
  int template_id;
  int segment_id;
};

Localization localize_resegment(const Image& frame, const Rect& candidate, const TrackerState& state,
                                const TrackerConfig& cfg) {
  const std::size_t n = state.model.patches.size();
  Localization loc;
  loc.positions.resize(n);
  loc.distances.assign(n, 1.0);
  loc.matched.assign(n, false);
  for (std::size_t b = 0; b < n; ++b) loc.positions[b] = rect_center(offset(state.patch_rects[b], candidate.x, candidate.y));

  const Rect region = intersect(candidate, frame.bounds());
  if (region.empty()) return loc;
  const PatchLayout layout = segment_object(frame, region, cfg.segmentation);

  std::vector<Match> pairs;
  for (std::size_t t = 0; t < n; ++t) {
    const NormRect& a = state.model.layout.patches[t].rect;
    for (const PatchRect& p : layout.patches) {
      const double w = std::min(a.x1, p.rect.x1) - std::max(a.x0, p.rect.x0);
      const double h = std::min(a.y1, p.rect.y1) - std::max(a.y0, p.rect.y0);
      if (w > 0.0 && h > 0.0) pairs.push_back({w * h, static_cast<int>(t), p.id});
    }
  }
  std::sort(pairs.begin(), pairs.end(), [](const Match& l, const Match& r) {
    return std::tie(r.overlap, l.template_id, l.segment_id) < std::tie(l.overlap, r.template_id, r.segment_id);
  });
  std::vector<bool> segment_used(layout.size(), false);
  for (const Match& m : pairs) {
    if (loc.matched[m.template_id] || segment_used[m.segment_id]) continue;
    loc.matched[m.template_id] = true;
    segment_used[m.segment_id] = true;
    const NormRect& s = layout.patches[m.segment_id].rect;
    loc.positions[m.template_id] = {region.x + (s.x0 + s.x1) / 2.0 * region.w, region.y + (s.y0 + s.y1) / 2.0 * region.h};
  }
  for (std::size_t b = 0; b < n; ++b) {
    if (!loc.matched[b]) continue;
    const Rect& pr = state.patch_rects[b];
    loc.distances[b] = region_distance(frame, patch_region(loc.positions[b], pr.w, pr.h), state.model.patches[b].hist,
                                       cfg.features);
  }
  return loc;
}

/// Exhaustive integer search around a nominal window origin; ties go to the
/// smaller displacement, then to the first in raster order.
template <typename DistanceAt>
std::pair<Point, double> refine(const Rect& nominal, int radius, DistanceAt&& distance_at) {
  double best = std::numeric_limits<double>::infinity();
  int best_r2 = 0;
  int best_dx = 0;
  int best_dy = 0;
  for (int dy = -radius; dy <= radius; ++dy) {
    for (int dx = -radius; dx <= radius; ++dx) {
      const double d = distance_at(nominal.x + dx, nominal.y + dy);
      const int r2 = dx * dx + dy * dy;
      if (d < best || (d == best && r2 < best_r2)) {
        best = d;
        best_r2 = r2;
        best_dx = dx;
        best_dy = dy;
      }
    }
  }
  return {rect_center(offset(nominal, best_dx, best_dy)), best};
}

}  // namespace

Rect candidate_rect(double x, double y, const TrackerState& state) {
  return patch_region({x, y}, state.box_w, state.box_h);
}

TrackerState init(const Image& frame, const BBox& box, const TrackerConfig& cfg) {
  validate(cfg);
  const Rect r = intersect(to_rect(box), frame.bounds());
  if (r.empty()) throw Error(ErrorCode::EmptyRegion, "initial box does not intersect the frame");

  TrackerState s;
  s.box_w = r.w;
  s.box_h = r.h;
  s.model.layout = segment_object(frame, r, cfg.segmentation);
  s.model.sigma = cfg.appearance.sigma;
  const std::size_t n = s.model.layout.size();

  std::vector<Rect> absolute;
  PositionMap relative;
  for (const PatchRect& p : s.model.layout.patches) {
    const Rect pr = patch_pixel_rect(p.rect, r.w, r.h);
    s.patch_rects.push_back(pr);
    absolute.push_back(offset(pr, r.x, r.y));
    relative.push_back({pr.x + pr.w / 2.0 - r.w / 2.0, pr.y + pr.h / 2.0 - r.h / 2.0});
  }

  const Point center = rect_center(r);
  for (std::size_t b = 0; b < n; ++b) {
    std::vector<Rect> others;
    for (std::size_t c = 0; c < n; ++c) {
      if (c != b) others.push_back(absolute[c]);
    }
    const FeatureKind kind = choose_dominant(frame, absolute[b], others, center, r.w, r.h, cfg);
    PatchTemplate t;
    t.id = static_cast<int>(b);
    t.dominant = kind;
    t.hist = extract(crop(frame, absolute[b]), kind, cfg.features);
    t.weight = 1.0 / static_cast<double>(n);
    t.state = OcclusionState::Visible;
    s.model.patches.push_back(std::move(t));
  }
  s.model.graph = build_graph(relative, cfg.stiffness);
  s.particles = spawn_particles(static_cast<std::size_t>(cfg.particles), center.x, center.y, cfg.seed);
  s.last_estimate = {static_cast<double>(r.x), static_cast<double>(r.y), static_cast<double>(r.w),
                     static_cast<double>(r.h)};
  return s;
}

Localization localize_patches(const Image& frame, const Rect& candidate, const TrackerState& state,
                              const TrackerConfig& cfg) {
  if (cfg.patch_localization == PatchLocalization::Resegment) return localize_resegment(frame, candidate, state, cfg);
  const std::size_t n = state.model.patches.size();
  Localization loc;
  loc.positions.resize(n);
  loc.distances.resize(n);
  loc.matched.assign(n, true);
  for (std::size_t b = 0; b < n; ++b) {
    const Rect nominal = offset(state.patch_rects[b], candidate.x, candidate.y);
    const FeatureHistogram& reference = state.model.patches[b].hist;
    std::tie(loc.positions[b], loc.distances[b]) = refine(nominal, cfg.refine_radius, [&](int x, int y) {
      return region_distance(frame, {x, y, nominal.w, nominal.h}, reference, cfg.features);
    });
  }
  return loc;
}

double localized_score(const Localization& loc, const TrackerState& state, const TrackerConfig& cfg) {
  return combine(loc.distances, loc.positions, state, cfg);
}

double particle_score(const Image& frame, const Rect& candidate, const TrackerState& state, const TrackerConfig& cfg) {
  return localized_score(localize_patches(frame, candidate, state, cfg), state, cfg);
}

FrameScorer::FrameScorer(const Image& frame, const TrackerState& state, const TrackerConfig& cfg,
                         std::span<const Rect> candidates)
    : frame_(frame), state_(state), cfg_(cfg) {
  if (cfg.patch_localization != PatchLocalization::Refine || candidates.empty()) return;
  int x0 = std::numeric_limits<int>::max();
  int y0 = std::numeric_limits<int>::max();
  int x1 = std::numeric_limits<int>::min();
  int y1 = std::numeric_limits<int>::min();
  for (const Rect& c : candidates) {
    x0 = std::min(x0, c.x);
    y0 = std::min(y0, c.y);
    x1 = std::max(x1, c.x);
    y1 = std::max(y1, c.y);
  }
  planes_.emplace(frame, cfg.features);
  const int radius = cfg.refine_radius;
  const std::size_t n = state.model.patches.size();
  std::vector<std::optional<DistanceField>> fields(n);
  parallel_for(n, [&](std::size_t b) {
    const Rect& pr = state.patch_rects[b];
    const Rect domain{x0 + pr.x - radius, y0 + pr.y - radius, x1 - x0 + 2 * radius + 1, y1 - y0 + 2 * radius + 1};
    fields[b].emplace(*planes_, state.model.patches[b].hist, pr.w, pr.h, domain);
  });
  for (auto& f : fields) fields_.push_back(std::move(*f));
}

Localization FrameScorer::localize(const Rect& candidate) const {
  if (fields_.empty() && !state_.model.patches.empty()) return localize_patches(frame_, candidate, state_, cfg_);
  const std::size_t n = state_.model.patches.size();
  Localization loc;
  loc.positions.resize(n);
  loc.distances.resize(n);
  loc.matched.assign(n, true);
  for (std::size_t b = 0; b < n; ++b) {
    const Rect nominal = offset(state_.patch_rects[b], candidate.x, candidate.y);
    const DistanceField& field = fields_[b];
    if (!field.contains(nominal.x - cfg_.refine_radius, nominal.y - cfg_.refine_radius) ||
        !field.contains(nominal.x + cfg_.refine_radius, nominal.y + cfg_.refine_radius)) {
      throw Error(ErrorCode::InvalidArgument, "candidate outside the scorer's precomputed domain");
    }
    std::tie(loc.positions[b], loc.distances[b]) =
        refine(nominal, cfg_.refine_radius, [&](int x, int y) { return field.at(x, y); });
  }
  return loc;
}

double FrameScorer::score(const Rect& candidate) const {
  return localized_score(localize(candidate), state_, cfg_);
}

namespace {

void clamp_to_frame(ParticleSet& ps, const Image& frame) {
  const double max_x = frame.width() - 1.0;
  const double max_y = frame.height() - 1.0;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    ps.x[i] = std::clamp(ps.x[i], 0.0, max_x);
    ps.y[i] = std::clamp(ps.y[i], 0.0, max_y);
  }
}

}  // namespace

std::pair<TrackerState, BBox> step(TrackerState state, const Image& frame, const TrackerConfig& cfg, StepInfo* info) {
  const std::size_t count = state.particles.size();
  state.particles = predict(std::move(state.particles), cfg.motion);
  clamp_to_frame(state.particles, frame);

  std::vector<Rect> candidates(count);
  for (std::size_t i = 0; i < count; ++i) {
    candidates[i] = candidate_rect(state.particles.x[i], state.particles.y[i], state);
  }
  std::vector<double> scores(count);
  {
    const FrameScorer scorer(frame, state, cfg, candidates);
    parallel_for(count, [&](std::size_t i) { scores[i] = scorer.score(candidates[i]); });
  }
  state.particles = reweight(std::move(state.particles), scores);
  const Point center = estimate(state.particles);
  const BBox result = box_at_center(center.x, center.y, state.box_w, state.box_h);
  const double ess = effective_sample_size(state.particles);
  const bool resample = ess < static_cast<double>(count) / 2.0;
  if (info) {
    info->degenerate = state.particles.degenerate;
    info->ess = ess;
    info->resampled = resample;
  }
  if (resample) state.particles = systematic_resample(std::move(state.particles));

  // Model update at the estimate.
  const Rect est = candidate_rect(center.x, center.y, state);
  const Localization loc = localize_patches(frame, est, state, cfg);
  const std::size_t n = state.model.patches.size();
  std::vector<FeatureHistogram> observed(n);
  std::vector<Rect> located(n);
  for (std::size_t b = 0; b < n; ++b) {
    const Rect& pr = state.patch_rects[b];
    located[b] = patch_region(loc.positions[b], pr.w, pr.h);
    const FeatureHistogram& reference = state.model.patches[b].hist;
    const Rect clamped = intersect(located[b], frame.bounds());
    const bool usable = loc.matched[b] && !clamped.empty() &&
                        (reference.kind == FeatureKind::HoC || (clamped.w >= 3 && clamped.h >= 3));
    observed[b] = usable ? extract(crop(frame, clamped), reference.kind, cfg.features) : reference;
  }
  if (info) info->distances = loc.distances;

  state.model = update_weights(state.model, loc.distances, cfg.appearance);
  state.model = update_template(state.model, observed, loc.distances, cfg.appearance);

  std::vector<bool> visible(n);
  PositionMap relative(n);
  const Point est_center = rect_center(est);
  for (std::size_t b = 0; b < n; ++b) {
    visible[b] = state.model.patches[b].state == OcclusionState::Visible;
    relative[b] = {loc.positions[b].x - est_center.x, loc.positions[b].y - est_center.y};
  }
  state.model.graph = update_references(state.model.graph, relative, cfg.reference_rate, visible);

  // Replaced templates get their dominant kind re-selected.
  for (std::size_t b = 0; b < n; ++b) {
    if (!visible[b]) continue;
    std::vector<Rect> others;
    for (std::size_t c = 0; c < n; ++c) {
      if (c != b) others.push_back(located[c]);
    }
    const FeatureKind kind = choose_dominant(frame, located[b], others, est_center, state.box_w, state.box_h, cfg);
    PatchTemplate& t = state.model.patches[b];
    if (kind == t.hist.kind) continue;
    const Rect clamped = intersect(located[b], frame.bounds());
    t.hist = extract(crop(frame, clamped), kind, cfg.features);
    t.dominant = kind;
  }

  ++state.frame_index;
  state.last_estimate = result;
  return {std::move(state), result};
}

// ---------------------------------------------------------------------------

BaselineState baseline_init(const Image& frame, const BBox& box, FeatureKind kind, const TrackerConfig& cfg) {
  validate(cfg);
  const Rect r = intersect(to_rect(box), frame.bounds());
  if (r.empty()) throw Error(ErrorCode::EmptyRegion, "initial box does not intersect the frame");
  BaselineState s;
  s.box_w = r.w;
  s.box_h = r.h;
  s.reference = extract(crop(frame, r), kind, cfg.features);
  const Point center = rect_center(r);
  s.particles = spawn_particles(static_cast<std::size_t>(cfg.particles), center.x, center.y, cfg.seed);
  s.last_estimate = {static_cast<double>(r.x), static_cast<double>(r.y), static_cast<double>(r.w),
                     static_cast<double>(r.h)};
  return s;
}

namespace {

double baseline_likelihood(double rho, const TrackerConfig& cfg) {
  const double sigma = cfg.appearance.sigma;
  return std::exp(-rho / (2.0 * sigma * sigma));
}

}  // namespace

double baseline_score(const Image& frame, const Rect& candidate, const BaselineState& state, const TrackerConfig& cfg) {
  return baseline_likelihood(region_distance(frame, candidate, state.reference, cfg.features), cfg);
}

std::pair<BaselineState, BBox> baseline_step(BaselineState state, const Image& frame, const TrackerConfig& cfg) {
  const std::size_t count = state.particles.size();
  state.particles = predict(std::move(state.particles), cfg.motion);
  clamp_to_frame(state.particles, frame);

  std::vector<Rect> candidates(count);
  int x0 = std::numeric_limits<int>::max();
  int y0 = std::numeric_limits<int>::max();
  int x1 = std::numeric_limits<int>::min();
  int y1 = std::numeric_limits<int>::min();
  for (std::size_t i = 0; i < count; ++i) {
    candidates[i] = patch_region({state.particles.x[i], state.particles.y[i]}, state.box_w, state.box_h);
    x0 = std::min(x0, candidates[i].x);
    y0 = std::min(y0, candidates[i].y);
    x1 = std::max(x1, candidates[i].x);
    y1 = std::max(y1, candidates[i].y);
  }
  const FramePlanes planes(frame, cfg.features);
  const DistanceField field(planes, state.reference, state.box_w, state.box_h, {x0, y0, x1 - x0 + 1, y1 - y0 + 1});
  std::vector<double> scores(count);
  for (std::size_t i = 0; i < count; ++i) {
    scores[i] = baseline_likelihood(field.at(candidates[i].x, candidates[i].y), cfg);
  }
  state.particles = reweight(std::move(state.particles), scores);
  const Point center = estimate(state.particles);
  const BBox result = box_at_center(center.x, center.y, state.box_w, state.box_h);
  if (effective_sample_size(state.particles) < static_cast<double>(count) / 2.0) {
    state.particles = systematic_resample(std::move(state.particles));
  }

  const Rect est = intersect(patch_region(center, state.box_w, state.box_h), frame.bounds());
  const bool usable = !est.empty() && (state.reference.kind == FeatureKind::HoC || (est.w >= 3 && est.h >= 3));
  if (usable) {
    const FeatureHistogram observed = extract(crop(frame, est), state.reference.kind, cfg.features);
    if (feature_distance(observed, state.reference) < cfg.appearance.tau_low) {
      std::vector<double> mass(observed.bins.size());
      for (std::size_t i = 0; i < mass.size(); ++i) {
        mass[i] = (1.0 - cfg.appearance.beta) * state.reference.bins[i] + cfg.appearance.beta * observed.bins[i];
      }
      state.reference = normalized_histogram(state.reference.kind, mass);
    }
  }
  ++state.frame_index;
  state.last_estimate = result;
  return {std::move(state), result};
}

// ---------------------------------------------------------------------------

const char* to_string(TrackerKind kind) {
  switch (kind) {
    case TrackerKind::Proposed: return "proposed";
    case TrackerKind::BaselineHoC: return "baseline-hoc";
    case TrackerKind::BaselineHoG: return "baseline-hog";
  }
  return "?";
}

std::optional<TrackerKind> parse_tracker_kind(const std::string& name) {
  if (name == "proposed") return TrackerKind::Proposed;
  if (name == "baseline-hoc") return TrackerKind::BaselineHoC;
  if (name == "baseline-hog") return TrackerKind::BaselineHoG;
  return std::nullopt;
}

std::vector<BBox> track_sequence(TrackerKind kind, std::size_t frame_count,
                                 const std::function<Image(std::size_t)>& frame_at, const BBox& initial,
                                 const TrackerConfig& cfg) {
  std::vector<BBox> out;
  if (frame_count == 0) return out;
  out.reserve(frame_count);
  const Image first = frame_at(0);
  out.push_back(initial);
  if (kind == TrackerKind::Proposed) {
    TrackerState state = init(first, initial, cfg);
    for (std::size_t t = 1; t < frame_count; ++t) {
      BBox box;
      std::tie(state, box) = step(std::move(state), frame_at(t), cfg);
      out.push_back(box);
    }
  } else {
    const FeatureKind feature = kind == TrackerKind::BaselineHoC ? FeatureKind::HoC : FeatureKind::HoG;
    BaselineState state = baseline_init(first, initial, feature, cfg);
    for (std::size_t t = 1; t < frame_count; ++t) {
      BBox box;
      std::tie(state, box) = baseline_step(std::move(state), frame_at(t), cfg);
      out.push_back(box);
    }
  }
  return out;
}

}  // namespace patchtrack
