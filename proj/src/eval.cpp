#include "patchtrack/eval.hpp"

#include <charconv>
#include <cmath>

#include "patchtrack/error.hpp"

namespace patchtrack {

namespace {

void append_number(std::string& out, double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, ptr);
}

void require_nonempty(std::span<const double> errors) {
  if (errors.empty()) throw Error(ErrorCode::EmptyInput, "no errors to evaluate");
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

}  // namespace

double cle(const Point& estimate, const Point& truth) { return std::hypot(estimate.x - truth.x, estimate.y - truth.y); }

double cle(const BBox& estimate, const BBox& truth) {
  return cle(Point{estimate.center_x(), estimate.center_y()}, Point{truth.center_x(), truth.center_y()});
}

std::vector<double> center_errors(std::span<const BBox> estimates, std::span<const BBox> truth) {
  if (estimates.size() != truth.size()) {
    throw Error(ErrorCode::LengthMismatch, std::to_string(estimates.size()) + " estimates for " +
                                               std::to_string(truth.size()) + " ground-truth frames");
  }
  std::vector<double> out(estimates.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = cle(estimates[i], truth[i]);
  return out;
}

std::size_t successful_frames(std::span<const double> errors, double threshold) {
  require_nonempty(errors);
  std::size_t n = 0;
  for (double e : errors) {
    if (e < threshold) ++n;
  }
  return n;
}

double success_ratio(std::span<const double> errors, double threshold) {
  return static_cast<double>(successful_frames(errors, threshold)) / static_cast<double>(errors.size());
}

double average_error(std::span<const double> errors) {
  require_nonempty(errors);
  double sum = 0.0;
  for (double e : errors) sum += e;
  return sum / static_cast<double>(errors.size());
}

MetricsReport evaluate(const TrackRun& run, std::span<const BBox> truth, double threshold) {
  MetricsReport r;
  r.tracker_name = run.tracker_name;
  if (run.estimates.size() != truth.size()) {
    throw Error(ErrorCode::LengthMismatch, "run '" + run.tracker_name + "' has " + std::to_string(run.estimates.size()) +
                                               " boxes for " + std::to_string(truth.size()) + " frames");
  }
  r.errors = center_errors(run.estimates, truth);
  if (r.errors.empty()) throw Error(ErrorCode::EmptyInput, "run '" + run.tracker_name + "' has no frames");
  r.successful_frames = successful_frames(r.errors, threshold);
  r.successful_ratio = static_cast<double>(r.successful_frames) / static_cast<double>(r.errors.size());
  r.average_error = average_error(r.errors);
  return r;
}

std::string per_frame_csv(std::span<const MetricsReport> reports) {
  std::string out = "frame,tracker,error\n";
  for (const MetricsReport& r : reports) {
    for (std::size_t i = 0; i < r.errors.size(); ++i) {
      out += std::to_string(i + 1);
      out += ',';
      out += r.tracker_name;
      out += ',';
      append_number(out, r.errors[i]);
      out += '\n';
    }
  }
  return out;
}

std::string summary_csv(std::span<const MetricsReport> reports) {
  std::string out = "tracker,successful_frames,successful_ratio,average_error\n";
  for (const MetricsReport& r : reports) {
    out += r.tracker_name;
    out += ',';
    out += std::to_string(r.successful_frames);
    out += ',';
    append_number(out, r.successful_ratio);
    out += ',';
    append_number(out, r.average_error);
    out += '\n';
  }
  return out;
}

std::string precision_csv(std::span<const MetricsReport> reports) {
  std::string out = "threshold,tracker,success_ratio\n";
  for (int t = 0; t <= kPrecisionMaxThreshold; ++t) {
    for (const MetricsReport& r : reports) {
      out += std::to_string(t);
      out += ',';
      out += r.tracker_name;
      out += ',';
      append_number(out, success_ratio(r.errors, t));
      out += '\n';
    }
  }
  return out;
}

std::vector<MetricsReport> report(std::span<const TrackRun> runs, const SequenceSpec& truth, double threshold,
                                  const std::filesystem::path& dir) {
  if (runs.empty()) throw Error(ErrorCode::EmptyInput, "no runs to report");
  std::vector<MetricsReport> reports;
  for (const TrackRun& run : runs) reports.push_back(evaluate(run, truth.ground_truth, threshold));
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir.string() + ": " + ec.message());
  write_text(dir / kPerFrameFile, per_frame_csv(reports));
  write_text(dir / kSummaryFile, summary_csv(reports));
  write_text(dir / kPrecisionFile, precision_csv(reports));
  return reports;
}

}  // namespace patchtrack
