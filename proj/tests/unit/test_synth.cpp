#include <doctest.h>

#include "patchtrack/dataset.hpp"
#include "patchtrack/error.hpp"
#include "patchtrack/features.hpp"
#include "patchtrack/synth.hpp"
#include "test_support.hpp"

using namespace patchtrack;

TEST_CASE("scenario names") {
  for (ScenarioKind k : {ScenarioKind::Static, ScenarioKind::Occlusion, ScenarioKind::Distractor, ScenarioKind::PoseDrift}) {
    CHECK(parse_scenario_kind(to_string(k)) == k);
  }
  CHECK(std::string(to_string(ScenarioKind::PoseDrift)) == "pose-drift");
  CHECK_FALSE(parse_scenario_kind("storm").has_value());
  CHECK(make_scenario(ScenarioKind::Static, 0, 1).frames == 50);
  CHECK(make_scenario(ScenarioKind::Occlusion, 0, 1).frames == 200);
  CHECK(make_scenario(ScenarioKind::Occlusion, 17, 1).frames == 17);
}

TEST_CASE("static scene: fixed target, in-bounds boxes") {
  const SynthScenario s = make_scenario(ScenarioKind::Static, 50, 3);
  const BBox first = synth_target_box(s, 0);
  for (int t = 0; t < s.frames; ++t) CHECK(synth_target_box(s, t) == first);
  CHECK(first.w == s.target_w());
  CHECK(first.h == s.target_h());
}

TEST_CASE("ground truth stays inside the frame for every scenario") {
  for (ScenarioKind k : {ScenarioKind::Static, ScenarioKind::Occlusion, ScenarioKind::Distractor, ScenarioKind::PoseDrift}) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const SynthScenario s = make_scenario(k, 0, seed);
      for (int t = 0; t < s.frames; ++t) {
        const BBox b = synth_target_box(s, t);
        REQUIRE(b.x >= 0);
        REQUIRE(b.y >= 0);
        REQUIRE(b.x + b.w <= s.width);
        REQUIRE(b.y + b.h <= s.height);
        if (k == ScenarioKind::Distractor) {
          const BBox d = synth_distractor_box(s, t);
          REQUIRE(d.x >= 0);
          REQUIRE(d.x + d.w <= s.width);
        }
      }
    }
  }
}

TEST_CASE("occluder covers at least 40% of the target during its window only") {
  const SynthScenario s = make_scenario(ScenarioKind::Occlusion, 0, 5);
  for (int t = 0; t < s.frames; ++t) {
    const Rect target = to_rect(synth_target_box(s, t));
    const Image frame = render_frame(s, t);
    long long covered = 0;
    for (int y = target.y; y < target.bottom(); ++y)
      for (int x = target.x; x < target.right(); ++x) covered += frame.at(x, y) == s.occluder_color;
    const double frac = static_cast<double>(covered) / static_cast<double>(target.area());
    if (t >= 60 && t <= 90) {
      REQUIRE(frac >= 0.4);
    } else {
      REQUIRE(synth_occluder(s, t).empty());
      REQUIRE(frac == 0.0);
    }
  }
}

TEST_CASE("distractor matches the target colour histogram with a different layout") {
  const SynthScenario s = make_scenario(ScenarioKind::Distractor, 0, 7);
  const Image frame = render_frame(s, 0);
  const Rect t = to_rect(synth_target_box(s, 0));
  const Rect d = to_rect(synth_distractor_box(s, 0));
  REQUIRE(intersect(t, d).empty());
  const FeatureConfig cfg;
  CHECK(feature_distance(hoc(crop(frame, t), cfg), hoc(crop(frame, d), cfg)) <= 0.05);
  CHECK_FALSE(crop(frame, t) == crop(frame, d));
}

TEST_CASE("pose drift changes the target colours over time") {
  const SynthScenario s = make_scenario(ScenarioKind::PoseDrift, 0, 2);
  const Image a = render_frame(s, 0);
  const Image b = render_frame(s, s.frames - 1);
  const FeatureConfig cfg;
  const double d = feature_distance(hoc(crop(a, to_rect(synth_target_box(s, 0))), cfg),
                                    hoc(crop(b, to_rect(synth_target_box(s, s.frames - 1))), cfg));
  CHECK(d > 0.1);
}

TEST_CASE("rendering is deterministic and seed dependent") {
  const SynthScenario s = make_scenario(ScenarioKind::Occlusion, 0, 9);
  CHECK(render_frame(s, 70) == render_frame(s, 70));
  CHECK_FALSE(render_frame(s, 70) == render_frame(make_scenario(ScenarioKind::Occlusion, 0, 10), 70));
}

TEST_CASE("generate_synthetic round trips through load_sequence") {
  testing::TempDir a("syn_a"), b("syn_b");
  const SynthScenario s = make_scenario(ScenarioKind::Static, 12, 4);
  const SequenceSpec seq = generate_synthetic(s, a.path());
  REQUIRE(seq.size() == 12);
  CHECK(seq.width == 320);
  CHECK(seq.height == 240);
  const SequenceSpec again = load_sequence(a.path());
  CHECK(again.ground_truth == seq.ground_truth);
  for (int t = 0; t < 12; ++t) {
    CHECK(seq.ground_truth[t] == synth_target_box(s, t));
    CHECK(load_frame(seq, t) == render_frame(s, t));
  }
  generate_synthetic(s, b.path());
  for (std::size_t t = 0; t < seq.size(); ++t) {
    CHECK(read_file(seq.frame_paths[t]) == read_file(b.path() / "img" / seq.frame_paths[t].filename()));
  }
  CHECK(seq.frame_paths[0].filename() == "0001.png");
}

TEST_CASE("scenario validation") {
  SynthScenario s = make_scenario(ScenarioKind::Static, 5, 1);
  s.target.erase(s.target.begin());
  CHECK_THROWS_AS(validate(s), Error);
  s = make_scenario(ScenarioKind::Static, 5, 1);
  s.target[0].rect.w -= 1;  // leaves a hole
  CHECK_THROWS_AS(validate(s), Error);
  s = make_scenario(ScenarioKind::Occlusion, 5, 1);
  s.occluder_fraction = 1.5;
  CHECK_THROWS_AS(validate(s), Error);
  s = make_scenario(ScenarioKind::Static, 5, 1);
  s.width = 20;
  CHECK_THROWS_AS(validate(s), Error);
  CHECK_NOTHROW(validate(make_scenario(ScenarioKind::Distractor, 0, 1)));
}
