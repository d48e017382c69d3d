#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "patchtrack/dataset.hpp"
#include "patchtrack/imaging.hpp"
#include "patchtrack/structure.hpp"

namespace patchtrack {

inline constexpr double kSuccessThreshold = 16.0;
inline constexpr int kPrecisionMaxThreshold = 50;

/// Centre location error: Euclidean distance between centres.
double cle(const Point& estimate, const Point& truth);
double cle(const BBox& estimate, const BBox& truth);

std::vector<double> center_errors(std::span<const BBox> estimates, std::span<const BBox> truth);

/// Fraction of errors strictly below the threshold.
double success_ratio(std::span<const double> errors, double threshold = kSuccessThreshold);
std::size_t successful_frames(std::span<const double> errors, double threshold = kSuccessThreshold);
double average_error(std::span<const double> errors);

struct TrackRun {
  std::string tracker_name;
  std::vector<BBox> estimates;
  std::string sequence_name;
};

struct MetricsReport {
  std::string tracker_name;
  std::vector<double> errors;
  std::size_t successful_frames = 0;
  double successful_ratio = 0.0;
  double average_error = 0.0;
};

MetricsReport evaluate(const TrackRun& run, std::span<const BBox> truth, double threshold = kSuccessThreshold);

/// CSV bodies, each with a header row.
std::string per_frame_csv(std::span<const MetricsReport> reports);
std::string summary_csv(std::span<const MetricsReport> reports);
std::string precision_csv(std::span<const MetricsReport> reports);

inline constexpr const char* kPerFrameFile = "per_frame.csv";
inline constexpr const char* kSummaryFile = "summary.csv";
inline constexpr const char* kPrecisionFile = "precision.csv";

/// Evaluates every run against the sequence ground truth and writes the
/// three CSVs into `dir`. Summary rows keep the order of `runs`.
std::vector<MetricsReport> report(std::span<const TrackRun> runs, const SequenceSpec& truth, double threshold,
                                  const std::filesystem::path& dir);

}  // namespace patchtrack
