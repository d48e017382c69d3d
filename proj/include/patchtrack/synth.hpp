#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "patchtrack/dataset.hpp"
#include "patchtrack/imaging.hpp"

namespace patchtrack {

enum class ScenarioKind { Static, Occlusion, Distractor, PoseDrift };

const char* to_string(ScenarioKind kind);
std::optional<ScenarioKind> parse_scenario_kind(const std::string& name);

/// Flat-coloured rectangle relative to the object's top-left corner.
struct SynthPart {
  Rect rect;
  Rgb color;
};

struct SynthScenario {
  ScenarioKind kind = ScenarioKind::Static;
  int frames = 50;
  int width = 320;
  int height = 240;
  std::uint64_t seed = 0;

  /// Parts tile the target box exactly.
  std::vector<SynthPart> target;

  bool occluder = false;
  double occluder_fraction = 0.4;  // bar width / target width
  Rgb occluder_color{20, 200, 220};
  int occluder_entry = 60;
  int occluder_exit = 90;

  /// The distractor reuses the target's colours and part sizes in a
  /// permuted arrangement tiling the same box size.
  std::vector<SynthPart> distractor;
  double distractor_far = 110.0;  // horizontal offset from the target at the start and end, px

  double hue_drift_deg = 40.0;  // pose-drift: total hue shift over the sequence

  int target_w() const;
  int target_h() const;
};

/// Default scene of the given kind. Frame count 0 selects the kind's default
/// length (50 static, 200 otherwise).
SynthScenario make_scenario(ScenarioKind kind, int frames, std::uint64_t seed);

void validate(const SynthScenario& s);

/// Target box on frame t, 0-based integer coordinates.
BBox synth_target_box(const SynthScenario& s, int t);
/// Distractor box on frame t (distractor scenes only).
BBox synth_distractor_box(const SynthScenario& s, int t);
/// Occluder bar on frame t; empty when absent.
Rect synth_occluder(const SynthScenario& s, int t);

Image render_frame(const SynthScenario& s, int t);

/// Writes out/img/NNNN.png and out/groundtruth_rect.txt and returns the
/// loaded sequence description. Distractor scenes are checked for whole-box
/// colour-histogram agreement with the target (distance <= 0.05) on every
/// frame where neither box overlaps the other or the occluder.
SequenceSpec generate_synthetic(const SynthScenario& s, const std::filesystem::path& out);

}  // namespace patchtrack
