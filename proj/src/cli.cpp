#include "patchtrack/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "patchtrack/config.hpp"
#include "patchtrack/dataset.hpp"
#include "patchtrack/error.hpp"
#include "patchtrack/eval.hpp"
#include "patchtrack/synth.hpp"
#include "patchtrack/tracker.hpp"

namespace patchtrack {
namespace fs = std::filesystem;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

/// Invalid user input detected after flag parsing (config file, names).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const std::vector<std::string> kTrackerNames = {"proposed", "baseline-hoc", "baseline-hog"};

RunConfig resolve_config(const std::string& config_path, const std::string& tracker, std::optional<std::uint64_t> seed) {
  RunConfig cfg;
  if (!config_path.empty()) {
    try {
      cfg = load_run_config(config_path);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::IoError) throw;
      throw UsageError(std::string("config ") + config_path + ": " + e.what());
    }
  }
  if (!tracker.empty()) {
    const auto kind = parse_tracker_kind(tracker);
    if (!kind) throw UsageError("unknown tracker '" + tracker + "'");
    cfg.kind = *kind;
  }
  if (seed) cfg.tracker.seed = *seed;
  return cfg;
}

std::vector<BBox> run_tracker(TrackerKind kind, const SequenceSpec& seq, const TrackerConfig& cfg) {
  return track_sequence(
      kind, seq.size(), [&](std::size_t i) { return load_frame(seq, i); }, seq.ground_truth.front(), cfg);
}

struct TrackArgs {
  std::string sequence, out, config, tracker;
  std::optional<std::uint64_t> seed;
};

struct SynthArgs {
  std::string scenario, out;
  int frames = 0;
  std::uint64_t seed = 0;
};

struct EvalArgs {
  std::vector<std::string> results;
  std::string sequence, report;
  double threshold = kSuccessThreshold;
};

struct CompareArgs {
  std::string sequence, report, config;
  std::vector<std::string> trackers;
  std::optional<std::uint64_t> seed;
};

int cmd_track(const TrackArgs& a, std::ostream& out) {
  const RunConfig cfg = resolve_config(a.config, a.tracker, a.seed);
  const SequenceSpec seq = load_sequence(a.sequence);
  const std::vector<BBox> boxes = run_tracker(cfg.kind, seq, cfg.tracker);
  write_boxes(a.out, boxes);
  out << "tracked " << boxes.size() << " frames of " << seq.name << " with " << to_string(cfg.kind) << '\n';
  return 0;
}

int cmd_synth(const SynthArgs& a, std::ostream& out) {
  const auto kind = parse_scenario_kind(a.scenario);
  if (!kind) throw UsageError("unknown scenario '" + a.scenario + "'");
  const SequenceSpec seq = generate_synthetic(make_scenario(*kind, a.frames, a.seed), a.out);
  out << "wrote " << seq.size() << " frames to " << a.out << '\n';
  return 0;
}

int write_report(const std::vector<TrackRun>& runs, const SequenceSpec& seq, double threshold, const std::string& dir,
                 std::ostream& out) {
  const std::vector<MetricsReport> reports = report(runs, seq, threshold, dir);
  out << summary_csv(reports);
  return 0;
}

int cmd_eval(const EvalArgs& a, std::ostream& out) {
  const SequenceSpec seq = load_sequence(a.sequence);
  std::vector<TrackRun> runs;
  for (const std::string& path : a.results) {
    runs.push_back({fs::path(path).stem().string(), read_boxes(path), seq.name});
  }
  return write_report(runs, seq, a.threshold, a.report, out);
}

int cmd_compare(const CompareArgs& a, std::ostream& out) {
  RunConfig cfg = resolve_config(a.config, "", a.seed);
  std::vector<TrackerKind> kinds;
  for (const std::string& name : a.trackers) {
    const auto kind = parse_tracker_kind(name);
    if (!kind) throw UsageError("unknown tracker '" + name + "'");
    kinds.push_back(*kind);
  }
  const SequenceSpec seq = load_sequence(a.sequence);
  std::error_code ec;
  fs::create_directories(a.report, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + a.report + ": " + ec.message());
  std::vector<TrackRun> runs;
  for (TrackerKind kind : kinds) {
    TrackRun run{to_string(kind), run_tracker(kind, seq, cfg.tracker), seq.name};
    write_boxes(fs::path(a.report) / (run.tracker_name + ".txt"), run.estimates);
    runs.push_back(std::move(run));
  }
  return write_report(runs, seq, kSuccessThreshold, a.report, out);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Part-based occlusion-aware particle filter tracker", "patchtrack"};
  app.failure_message(CLI::FailureMessage::help);
  app.require_subcommand(1);

  TrackArgs track;
  CLI::App* track_cmd = app.add_subcommand("track", "Track the object of a sequence, writing one x,y,w,h line per frame");
  track_cmd->add_option("--sequence", track.sequence, "Sequence folder (img/ + groundtruth_rect.txt)")->required();
  track_cmd->add_option("--out", track.out, "Results file")->required();
  track_cmd->add_option("--config", track.config, "key = value configuration file")->check(CLI::ExistingFile);
  track_cmd->add_option("--tracker", track.tracker, "proposed | baseline-hoc | baseline-hog")
      ->check(CLI::IsMember(kTrackerNames));
  track_cmd->add_option("--seed", track.seed, "Particle filter seed (overrides the config)");

  SynthArgs synth;
  CLI::App* synth_cmd = app.add_subcommand("synth", "Render a synthetic sequence with exact ground truth");
  synth_cmd->add_option("--scenario", synth.scenario, "static | occlusion | distractor | pose-drift")
      ->required()
      ->check(CLI::IsMember({"static", "occlusion", "distractor", "pose-drift"}));
  synth_cmd->add_option("--frames", synth.frames, "Frame count (default: 50 static, 200 otherwise)")
      ->check(CLI::PositiveNumber);
  synth_cmd->add_option("--seed", synth.seed, "Scene seed")->capture_default_str();
  synth_cmd->add_option("--out", synth.out, "Output folder")->required();

  EvalArgs eval;
  CLI::App* eval_cmd = app.add_subcommand("eval", "Evaluate results files against a sequence's ground truth");
  eval_cmd->add_option("--results", eval.results, "Results file(s), comma separated")->required()->delimiter(',');
  eval_cmd->add_option("--sequence", eval.sequence, "Sequence folder")->required();
  eval_cmd->add_option("--threshold", eval.threshold, "Success threshold in pixels")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  eval_cmd->add_option("--report", eval.report, "Report folder for the CSV files")->required();

  CompareArgs compare;
  CLI::App* compare_cmd = app.add_subcommand("compare", "Run several trackers on a sequence and report them");
  compare_cmd->add_option("--sequence", compare.sequence, "Sequence folder")->required();
  compare_cmd->add_option("--trackers", compare.trackers, "Comma separated tracker names")
      ->required()
      ->delimiter(',')
      ->check(CLI::IsMember(kTrackerNames));
  compare_cmd->add_option("--seed", compare.seed, "Particle filter seed (overrides the config)");
  compare_cmd->add_option("--config", compare.config, "key = value configuration file")->check(CLI::ExistingFile);
  compare_cmd->add_option("--report", compare.report, "Report folder for results and CSV files")->required();

  for (CLI::App* sub : {track_cmd, synth_cmd, eval_cmd, compare_cmd}) sub->failure_message(CLI::FailureMessage::help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*track_cmd) return cmd_track(track, out);
    if (*synth_cmd) return cmd_synth(synth, out);
    if (*eval_cmd) return cmd_eval(eval, out);
    if (*compare_cmd) return cmd_compare(compare, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

int run_cli(int argc, const char* const* argv) { return run_cli(argc, argv, std::cout, std::cerr); }

}  // namespace patchtrack
