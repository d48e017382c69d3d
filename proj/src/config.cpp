#include "patchtrack/config.hpp"

#include <charconv>
#include <cstdio>
#include <functional>
#include <sstream>

#include "patchtrack/error.hpp"

namespace patchtrack {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, int line) {
  throw ParseError(static_cast<std::size_t>(line), "invalid value '" + std::string(value) + "' for key '" + std::string(key) + "'");
}

double to_double(std::string_view key, std::string_view v, int line) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) bad_value(key, v, line);
  return out;
}

template <typename Int>
Int to_int(std::string_view key, std::string_view v, int line) {
  Int out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) bad_value(key, v, line);
  return out;
}

bool to_bool(std::string_view key, std::string_view v, int line) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  bad_value(key, v, line);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Entry {
  ConfigKey key;
  std::function<void(RunConfig&, std::string_view, int)> set;
  std::function<std::string(const RunConfig&)> get;
};

#define PT_REAL(NAME, FIELD, HELP)                                                                          \
  Entry {                                                                                                    \
    {NAME, HELP}, [](RunConfig& c, std::string_view v, int l) { c.FIELD = to_double(NAME, v, l); },          \
        [](const RunConfig& c) { return fmt(c.FIELD); }                                                      \
  }
#define PT_INT(NAME, FIELD, HELP)                                                                           \
  Entry {                                                                                                    \
    {NAME, HELP}, [](RunConfig& c, std::string_view v, int l) { c.FIELD = to_int<decltype(c.FIELD)>(NAME, v, l); }, \
        [](const RunConfig& c) { return std::to_string(c.FIELD); }                                           \
  }

const std::vector<Entry>& entries() {
  static const std::vector<Entry> table = {
      {{"tracker", "proposed | baseline-hoc | baseline-hog (default proposed)"},
       [](RunConfig& c, std::string_view v, int l) {
         const auto kind = parse_tracker_kind(std::string(v));
         if (!kind) bad_value("tracker", v, l);
         c.kind = *kind;
       },
       [](const RunConfig& c) { return std::string(to_string(c.kind)); }},
      PT_INT("seed", tracker.seed, "particle filter seed (default 0)"),
      PT_INT("particles", tracker.particles, "particle count (default 200)"),
      PT_REAL("motion_std_x", tracker.motion.std_x, "random-walk std dev in x, px (default 8)"),
      PT_REAL("motion_std_y", tracker.motion.std_y, "random-walk std dev in y, px (default 8)"),
      PT_REAL("stiffness", tracker.stiffness, "pairwise spatial stiffness, 1/px^2 (default 0.01)"),
      PT_REAL("lambda", tracker.lambda, "exponent of the spatial score (default 1)"),
      PT_REAL("theta", tracker.theta, "gate: required fraction of passing patches (default 0.5)"),
      {{"patch_localization", "refine | resegment (default refine)"},
       [](RunConfig& c, std::string_view v, int l) {
         if (v == "refine") {
           c.tracker.patch_localization = PatchLocalization::Refine;
         } else if (v == "resegment") {
           c.tracker.patch_localization = PatchLocalization::Resegment;
         } else {
           bad_value("patch_localization", v, l);
         }
       },
       [](const RunConfig& c) {
         return std::string(c.tracker.patch_localization == PatchLocalization::Refine ? "refine" : "resegment");
       }},
      PT_INT("refine_radius", tracker.refine_radius, "patch search radius, px (default 6)"),
      PT_REAL("reference_rate", tracker.reference_rate, "update rate of reference distances (default 0.05)"),
      PT_INT("ring_patches", tracker.ring_patches, "background rivals for feature selection (default 8)"),
      PT_REAL("ring_scale", tracker.ring_scale, "background ring radius / box half-diagonal (default 1.5)"),
      {{"threshold_mode", "relative | absolute (default relative)"},
       [](RunConfig& c, std::string_view v, int l) {
         if (v == "relative") {
           c.tracker.segmentation.t_c_mode = ThresholdMode::Relative;
         } else if (v == "absolute") {
           c.tracker.segmentation.t_c_mode = ThresholdMode::Absolute;
         } else {
           bad_value("threshold_mode", v, l);
         }
       },
       [](const RunConfig& c) {
         return std::string(c.tracker.segmentation.t_c_mode == ThresholdMode::Relative ? "relative" : "absolute");
       }},
      PT_REAL("threshold", tracker.segmentation.t_c_value,
              "clustering threshold: luminance step, or multiple of the profile std dev (default 0.5)"),
      PT_INT("min_band_px", tracker.segmentation.min_band_px, "minimum segment length, px (default 8)"),
      PT_INT("max_patches", tracker.segmentation.max_patches, "patch count cap (default 12)"),
      {{"subdivide", "split each band along the other axis: true | false (default true)"},
       [](RunConfig& c, std::string_view v, int l) { c.tracker.segmentation.subdivide = to_bool("subdivide", v, l); },
       [](const RunConfig& c) { return std::string(c.tracker.segmentation.subdivide ? "true" : "false"); }},
      PT_INT("hue_bins", tracker.features.h_bins, "HoC hue bins (default 8)"),
      PT_INT("saturation_bins", tracker.features.s_bins, "HoC saturation bins (default 8)"),
      PT_INT("value_bins", tracker.features.v_bins, "HoC value bins (default 4)"),
      PT_INT("orientation_bins", tracker.features.hog_bins, "HoG orientation bins (default 9)"),
      PT_REAL("sigma", tracker.appearance.sigma, "likelihood bandwidth (default 0.2)"),
      PT_REAL("alpha", tracker.appearance.alpha, "patch weight adaptation rate (default 0.05)"),
      PT_REAL("tau_low", tracker.appearance.tau_low, "distance below which a patch is visible (default 0.15)"),
      PT_REAL("tau_high", tracker.appearance.tau_high, "distance above which a patch is occluded (default 0.4)"),
      PT_REAL("beta", tracker.appearance.beta, "template blend rate for partial patches (default 0.1)"),
  };
  return table;
}

#undef PT_REAL
#undef PT_INT

}  // namespace

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = [] {
    std::vector<ConfigKey> out;
    for (const Entry& e : entries()) out.push_back(e.key);
    return out;
  }();
  return keys;
}

RunConfig parse_run_config(std::string_view text) {
  RunConfig cfg;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "expected key = value");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    const Entry* entry = nullptr;
    for (const Entry& e : entries()) {
      if (e.key.name == key) entry = &e;
    }
    if (!entry) throw ParseError(line_no, "unknown key '" + std::string(key) + "'");
    entry->set(cfg, value, line_no);
  }
  validate(cfg.tracker);
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  const std::vector<std::uint8_t> bytes = read_file(path);
  return parse_run_config(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

std::string format_run_config(const RunConfig& cfg) {
  std::ostringstream out;
  for (const Entry& e : entries()) out << "# " << e.key.help << '\n' << e.key.name << " = " << e.get(cfg) << '\n';
  return out.str();
}

}  // namespace patchtrack
