#include "patchtrack/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "patchtrack/error.hpp"
#include "patchtrack/features.hpp"
#include "patchtrack/particle_filter.hpp"

namespace patchtrack {
namespace fs = std::filesystem;

const char* to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::Static: return "static";
    case ScenarioKind::Occlusion: return "occlusion";
    case ScenarioKind::Distractor: return "distractor";
    case ScenarioKind::PoseDrift: return "pose-drift";
  }
  return "?";
}

std::optional<ScenarioKind> parse_scenario_kind(const std::string& name) {
  for (ScenarioKind k : {ScenarioKind::Static, ScenarioKind::Occlusion, ScenarioKind::Distractor,
                         ScenarioKind::PoseDrift}) {
    if (name == to_string(k)) return k;
  }
  return std::nullopt;
}

namespace {

constexpr Rgb kHead{200, 170, 140};
constexpr Rgb kLeft{180, 30, 30};
constexpr Rgb kMiddle{230, 200, 40};
constexpr Rgb kRight{30, 60, 170};
constexpr Rgb kLegs{50, 40, 35};

std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t hash(std::uint64_t seed, std::int64_t a, std::int64_t b, std::uint64_t salt) {
  return mix(mix(mix(seed ^ salt) ^ static_cast<std::uint64_t>(a)) ^ static_cast<std::uint64_t>(b));
}

std::uint8_t clamp_byte(double v) { return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L)); }

Rgb shift_hue(Rgb c, double degrees) {
  const double r = c.r / 255.0, g = c.g / 255.0, b = c.b / 255.0;
  const double mx = std::max({r, g, b});
  const double mn = std::min({r, g, b});
  const double delta = mx - mn;
  if (delta == 0.0) return c;
  double h;
  if (mx == r) {
    h = 60.0 * std::fmod((g - b) / delta, 6.0);
  } else if (mx == g) {
    h = 60.0 * ((b - r) / delta + 2.0);
  } else {
    h = 60.0 * ((r - g) / delta + 4.0);
  }
  h = std::fmod(h + degrees + 720.0, 360.0);
  const double s = delta / mx;
  const double v = mx;
  const double chroma = v * s;
  const double x = chroma * (1.0 - std::fabs(std::fmod(h / 60.0, 2.0) - 1.0));
  const double m = v - chroma;
  double rr = 0, gg = 0, bb = 0;
  switch (static_cast<int>(h / 60.0) % 6) {
    case 0: rr = chroma, gg = x; break;
    case 1: rr = x, gg = chroma; break;
    case 2: gg = chroma, bb = x; break;
    case 3: gg = x, bb = chroma; break;
    case 4: rr = x, bb = chroma; break;
    default: rr = chroma, bb = x; break;
  }
  return {clamp_byte((rr + m) * 255.0), clamp_byte((gg + m) * 255.0), clamp_byte((bb + m) * 255.0)};
}

Rect box_extent(const std::vector<SynthPart>& parts) {
  int w = 0, h = 0;
  for (const SynthPart& p : parts) {
    w = std::max(w, p.rect.right());
    h = std::max(h, p.rect.bottom());
  }
  return {0, 0, w, h};
}

/// Path parameters drawn once from the seed.
struct Path {
  double phase_x;
  double phase_y;
  double offset_x;
  double offset_y;
};

Path path_for(const SynthScenario& s) {
  Rng rng(s.seed ^ 0x5eed5eed5eed5eedULL);
  Path p;
  p.phase_x = 2.0 * std::numbers::pi * rng.uniform();
  p.phase_y = 2.0 * std::numbers::pi * rng.uniform();
  p.offset_x = rng.uniform();
  p.offset_y = rng.uniform();
  return p;
}

double frame_fraction(const SynthScenario& s, int t) {
  return s.frames > 1 ? static_cast<double>(t) / (s.frames - 1) : 0.0;
}

double smooth_step(double a, double b, double x) {
  const double u = std::clamp((x - a) / (b - a), 0.0, 1.0);
  return u * u * (3.0 - 2.0 * u);
}

}  // namespace

int SynthScenario::target_w() const { return box_extent(target).w; }
int SynthScenario::target_h() const { return box_extent(target).h; }

SynthScenario make_scenario(ScenarioKind kind, int frames, std::uint64_t seed) {
  SynthScenario s;
  s.kind = kind;
  s.frames = frames > 0 ? frames : (kind == ScenarioKind::Static ? 50 : 200);
  s.seed = seed;
  s.target = {
      {{0, 0, 40, 16}, kHead},
      {{0, 16, 14, 28}, kLeft},
      {{14, 16, 12, 28}, kMiddle},
      {{26, 16, 14, 28}, kRight},
      {{0, 44, 40, 20}, kLegs},
  };
  s.occluder = kind == ScenarioKind::Occlusion || kind == ScenarioKind::Distractor;
  if (kind == ScenarioKind::Distractor) {
    // occlude the target while the distractor emerges beside it
    s.occluder_entry = static_cast<int>(std::lround(0.5 * s.frames));
    s.occluder_exit = static_cast<int>(std::lround(0.65 * s.frames));
    // bands in reverse order, body columns mirrored
    s.distractor = {
        {{0, 0, 40, 20}, kLegs},
        {{0, 20, 14, 28}, kRight},
        {{14, 20, 12, 28}, kMiddle},
        {{26, 20, 14, 28}, kLeft},
        {{0, 48, 40, 16}, kHead},
    };
  }
  return s;
}

void validate(const SynthScenario& s) {
  if (s.frames < 1) throw Error(ErrorCode::InvalidArgument, "frames must be >= 1");
  if (s.width < 1 || s.height < 1) throw Error(ErrorCode::InvalidArgument, "frame size must be positive");
  if (s.target.empty()) throw Error(ErrorCode::InvalidArgument, "target has no parts");
  const Rect box = box_extent(s.target);
  if (box.x != 0 || box.y != 0) throw Error(ErrorCode::InvalidArgument, "target parts must start at the box origin");
  long long area = 0;
  for (const SynthPart& p : s.target) {
    if (p.rect.empty() || p.rect.x < 0 || p.rect.y < 0) throw Error(ErrorCode::InvalidArgument, "bad target part");
    area += p.rect.area();
  }
  if (area != box.area()) throw Error(ErrorCode::InvalidArgument, "target parts must tile the target box");
  if (box.w > s.width || box.h > s.height) throw Error(ErrorCode::InvalidArgument, "target larger than the frame");
  if (!(s.occluder_fraction > 0.0 && s.occluder_fraction < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "occluder fraction must lie in (0, 1)");
  }
  if (s.occluder_entry > s.occluder_exit) throw Error(ErrorCode::InvalidArgument, "occluder entry after exit");
  if (s.kind == ScenarioKind::Distractor) {
    if (box_extent(s.distractor) != box) throw Error(ErrorCode::InvalidArgument, "distractor must match the target box");
    long long d_area = 0;
    for (const SynthPart& p : s.distractor) d_area += p.rect.area();
    if (d_area != box.area()) throw Error(ErrorCode::InvalidArgument, "distractor parts must tile its box");
  }
}

BBox synth_target_box(const SynthScenario& s, int t) {
  const Path p = path_for(s);
  const int w = s.target_w();
  const int h = s.target_h();
  double cx = 0.0;
  double cy = 0.0;
  const double tau = 2.0 * std::numbers::pi;
  switch (s.kind) {
    case ScenarioKind::Static:
      cx = s.width / 2.0 + (p.offset_x - 0.5) * 0.4 * (s.width - w);
      cy = s.height / 2.0 + (p.offset_y - 0.5) * 0.4 * (s.height - h);
      break;
    case ScenarioKind::Occlusion:
    case ScenarioKind::PoseDrift:
      cx = s.width / 2.0 + 0.2 * (s.width - w) * std::sin(tau * t / 160.0 + p.phase_x);
      cy = s.height / 2.0 + 0.2 * (s.height - h) * std::sin(tau * t / 110.0 + p.phase_y);
      break;
    case ScenarioKind::Distractor:
      cx = s.width / 2.0 + 0.05 * s.width * std::sin(tau * t / 150.0 + p.phase_x);
      cy = s.height / 2.0 + 0.15 * (s.height - h) * std::sin(tau * t / 120.0 + p.phase_y);
      break;
  }
  const double x = std::clamp(std::round(cx - w / 2.0), 0.0, static_cast<double>(s.width - w));
  const double y = std::clamp(std::round(cy - h / 2.0), 0.0, static_cast<double>(s.height - h));
  return {x, y, static_cast<double>(w), static_cast<double>(h)};
}

BBox synth_distractor_box(const SynthScenario& s, int t) {
  const BBox target = synth_target_box(s, t);
  // passes behind the target from right to left
  const double dx = s.distractor_far * (1.0 - 2.0 * smooth_step(0.2, 0.8, frame_fraction(s, t)));
  const double dy = 6.0 * std::sin(2.0 * std::numbers::pi * t / 40.0);
  const double x = std::clamp(std::round(target.x + dx), 0.0, s.width - target.w);
  const double y = std::clamp(std::round(target.y + dy), 0.0, s.height - target.h);
  return {x, y, target.w, target.h};
}

Rect synth_occluder(const SynthScenario& s, int t) {
  if (!s.occluder || t < s.occluder_entry || t > s.occluder_exit) return {};
  const Rect target = to_rect(synth_target_box(s, t));
  const int bar_w = static_cast<int>(std::lround(s.occluder_fraction * target.w));
  const double u = s.occluder_exit > s.occluder_entry
                       ? static_cast<double>(t - s.occluder_entry) / (s.occluder_exit - s.occluder_entry)
                       : 0.0;
  const int x = target.x + static_cast<int>(std::lround(u * (target.w - bar_w)));
  return {x, 0, bar_w, s.height};
}

Image render_frame(const SynthScenario& s, int t) {
  validate(s);
  constexpr int cell = 16;
  const int gw = s.width / cell + 2;
  const int gh = s.height / cell + 2;
  std::vector<double> lattice(static_cast<std::size_t>(gw) * gh);
  for (int gy = 0; gy < gh; ++gy) {
    for (int gx = 0; gx < gw; ++gx) lattice[gy * gw + gx] = static_cast<double>(hash(s.seed, gx, gy, 1) & 255);
  }
  std::vector<Rgb> px(static_cast<std::size_t>(s.width) * s.height);
  for (int y = 0; y < s.height; ++y) {
    const int gy = y / cell;
    const double fy = static_cast<double>(y % cell) / cell;
    for (int x = 0; x < s.width; ++x) {
      const int gx = x / cell;
      const double fx = static_cast<double>(x % cell) / cell;
      const double top = lattice[gy * gw + gx] * (1 - fx) + lattice[gy * gw + gx + 1] * fx;
      const double bottom = lattice[(gy + 1) * gw + gx] * (1 - fx) + lattice[(gy + 1) * gw + gx + 1] * fx;
      const double v = top * (1 - fy) + bottom * fy;
      const double grain = static_cast<double>(hash(s.seed, x, y, 2) % 17) - 8.0;
      px[static_cast<std::size_t>(y) * s.width + x] = {clamp_byte(70 + 0.35 * v + grain),
                                                       clamp_byte(100 + 0.4 * v + grain),
                                                       clamp_byte(60 + 0.25 * v + grain)};
    }
  }
  Image img(s.width, s.height, std::move(px));

  const double hue = s.kind == ScenarioKind::PoseDrift ? s.hue_drift_deg * frame_fraction(s, t) : 0.0;
  const auto draw = [&](const std::vector<SynthPart>& parts, const BBox& box, bool drift) {
    const Rect origin = to_rect(box);
    for (std::size_t i = 0; i < parts.size(); ++i) {
      const SynthPart& p = parts[i];
      // alternate drift direction per part so parts change differently
      const Rgb c = drift ? shift_hue(p.color, i % 2 == 0 ? hue : -hue) : p.color;
      img.fill({origin.x + p.rect.x, origin.y + p.rect.y, p.rect.w, p.rect.h}, c);
    }
  };
  if (s.kind == ScenarioKind::Distractor) draw(s.distractor, synth_distractor_box(s, t), false);
  draw(s.target, synth_target_box(s, t), hue != 0.0);
  if (const Rect bar = synth_occluder(s, t); !bar.empty()) img.fill(bar, s.occluder_color);
  return img;
}

SequenceSpec generate_synthetic(const SynthScenario& s, const fs::path& out) {
  validate(s);
  std::error_code ec;
  fs::create_directories(out / "img", ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + (out / "img").string() + ": " + ec.message());

  if (s.kind == ScenarioKind::Distractor) {
    const FeatureConfig cfg;
    for (int t = 0; t < s.frames; ++t) {
      const Rect target = to_rect(synth_target_box(s, t));
      const Rect distractor = to_rect(synth_distractor_box(s, t));
      const Rect bar = synth_occluder(s, t);
      if (!intersect(target, distractor).empty() || !intersect(target, bar).empty() ||
          !intersect(distractor, bar).empty()) {
        continue;
      }
      const Image frame = render_frame(s, t);
      const double d = feature_distance(hoc(crop(frame, target), cfg), hoc(crop(frame, distractor), cfg));
      if (d > 0.05) {
        throw Error(ErrorCode::InvalidArgument,
                    "distractor colour histogram differs from the target on frame " + std::to_string(t));
      }
    }
  }

  std::vector<BBox> truth;
  for (int t = 0; t < s.frames; ++t) {
    char name[32];
    std::snprintf(name, sizeof name, "%04d.png", t + 1);
    save_png(render_frame(s, t), out / "img" / name);
    truth.push_back(synth_target_box(s, t));
  }
  write_boxes(out / "groundtruth_rect.txt", truth);
  return load_sequence(out);
}

}  // namespace patchtrack
