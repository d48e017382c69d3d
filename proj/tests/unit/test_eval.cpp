#include <doctest.h>

#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "patchtrack/error.hpp"
#include "patchtrack/eval.hpp"
#include "test_support.hpp"

using namespace patchtrack;

namespace {

// `hits` values below 16 and the rest at or above it, interleaved.
std::vector<double> fixture(std::size_t n, std::size_t hits) {
  std::vector<double> e(n);
  for (std::size_t i = 0; i < n; ++i) e[i] = i < hits ? static_cast<double>(i % 16) : 16.0 + static_cast<double>(i % 7);
  std::mt19937_64 rng(5);
  std::shuffle(e.begin(), e.end(), rng);
  return e;
}

SequenceSpec truth_of(std::vector<BBox> gt) {
  SequenceSpec s;
  s.name = "fixture";
  s.ground_truth = std::move(gt);
  return s;
}

}  // namespace

TEST_CASE("centre location error") {
  CHECK(cle(Point{1, 1}, Point{1, 1}) == 0.0);
  CHECK(cle(Point{0, 0}, Point{3, 4}) == 5.0);
  CHECK(cle(Point{0, 0}, Point{1, 1}) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(cle(BBox{0, 0, 10, 10}, BBox{3, 4, 10, 10}) == 5.0);
  CHECK(cle(BBox{0, 0, 10, 10}, BBox{-2, -2, 14, 14}) == 0.0);  // same centre, other size
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-100, 100);
  for (int i = 0; i < 1000; ++i) {
    const Point a{u(rng), u(rng)}, b{u(rng), u(rng)};
    REQUIRE(cle(a, b) == cle(b, a));
  }
}

TEST_CASE("success ratio fixtures") {
  const auto t1 = fixture(250, 240);
  CHECK(successful_frames(t1) == 240);
  CHECK(success_ratio(t1) == doctest::Approx(0.96).epsilon(1e-12));
  const auto t2 = fixture(300, 289);
  CHECK(successful_frames(t2) == 289);
  CHECK(std::abs(100.0 * success_ratio(t2) - 96.33) <= 0.01);
  CHECK(success_ratio(t2) == doctest::Approx(0.96333).epsilon(1e-5));
  CHECK(success_ratio(std::vector<double>(10, 16.0)) == 0.0);
  CHECK(success_ratio(std::vector<double>(10, 15.999)) == 1.0);
  CHECK(success_ratio(t1, 0.0) == 0.0);
  CHECK_THROWS_AS(success_ratio(std::vector<double>{}), Error);
}

TEST_CASE("success ratio is monotone in the threshold") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0, 60);
  for (int i = 0; i < 1000; ++i) {
    std::vector<double> e(1 + rng() % 50);
    for (auto& x : e) x = u(rng);
    const double a = u(rng), b = u(rng);
    REQUIRE(success_ratio(e, std::min(a, b)) <= success_ratio(e, std::max(a, b)));
  }
}

TEST_CASE("average error") {
  CHECK(average_error(std::vector<double>{3, 5}) == 4.0);
  CHECK(average_error(std::vector<double>{7.25}) == 7.25);
  std::vector<double> series(250);
  std::iota(series.begin(), series.end(), 0.0);
  CHECK(average_error(series) == 124.5);
  CHECK_THROWS_AS(average_error(std::vector<double>{}), Error);
}

TEST_CASE("center_errors and evaluate") {
  const std::vector<BBox> gt{{0, 0, 10, 10}, {10, 10, 10, 10}};
  const std::vector<BBox> est{{3, 4, 10, 10}, {10, 10, 10, 10}};
  CHECK(center_errors(est, gt) == std::vector<double>{5.0, 0.0});
  const MetricsReport r = evaluate({"mine", est, "seq"}, gt);
  CHECK(r.tracker_name == "mine");
  CHECK(r.successful_frames == 2);
  CHECK(r.successful_ratio == 1.0);
  CHECK(r.average_error == 2.5);
  CHECK_THROWS_AS(evaluate({"short", {est[0]}, "seq"}, gt), Error);
  CHECK_THROWS_AS(center_errors(std::vector<BBox>{}, gt), Error);
}

TEST_CASE("report writes consistent CSVs") {
  testing::TempDir tmp("report");
  std::vector<BBox> gt;
  std::vector<BBox> good, bad;
  for (int i = 0; i < 30; ++i) {
    gt.push_back({static_cast<double>(i), 5, 20, 30});
    good.push_back({static_cast<double>(i) + 0.5, 5.25, 20, 30});
    bad.push_back({static_cast<double>(i) + (i % 3) * 9.0, 5, 20, 30});
  }
  const std::vector<TrackRun> runs{{"zeta", bad, "fixture"}, {"alpha", good, "fixture"}};
  const auto reports = report(runs, truth_of(gt), kSuccessThreshold, tmp.path() / "out");
  REQUIRE(reports.size() == 2);

  const auto summary = testing::read_csv(tmp.path() / "out" / kSummaryFile);
  REQUIRE(summary.size() == 3);
  CHECK(summary[0] == std::vector<std::string>{"tracker", "successful_frames", "successful_ratio", "average_error"});
  CHECK(summary[1][0] == "zeta");  // run order is kept
  CHECK(summary[2][0] == "alpha");

  // Recompute the summary from the per-frame CSV.
  const auto per_frame = testing::read_csv(tmp.path() / "out" / kPerFrameFile);
  REQUIRE(per_frame.size() == 61);
  CHECK(per_frame[0] == std::vector<std::string>{"frame", "tracker", "error"});
  CHECK(per_frame[1][0] == "1");
  std::map<std::string, std::vector<double>> errors;
  for (std::size_t i = 1; i < per_frame.size(); ++i) errors[per_frame[i][1]].push_back(std::stod(per_frame[i][2]));
  for (std::size_t r = 1; r < summary.size(); ++r) {
    const auto& e = errors.at(summary[r][0]);
    REQUIRE(e.size() == 30);
    CHECK(std::stoul(summary[r][1]) == successful_frames(e));
    CHECK(std::stod(summary[r][2]) == success_ratio(e));
    CHECK(std::stod(summary[r][3]) == average_error(e));
  }

  const auto precision = testing::read_csv(tmp.path() / "out" / kPrecisionFile);
  CHECK(precision[0] == std::vector<std::string>{"threshold", "tracker", "success_ratio"});
  CHECK(precision.size() == 1 + 2 * (kPrecisionMaxThreshold + 1));
  CHECK(precision[1] == std::vector<std::string>{"0", "zeta", "0"});
  CHECK(precision.back()[0] == "50");

  CHECK_THROWS_AS(report(std::vector<TrackRun>{}, truth_of(gt), 16.0, tmp.path()), Error);
}

TEST_CASE("zero-error run and a 240 of 250 summary row") {
  testing::TempDir tmp("report1");
  std::vector<BBox> gt(250, BBox{10, 10, 20, 20});
  std::vector<BBox> est;
  const auto e = fixture(250, 240);
  for (double x : e) est.push_back({10 + x, 10, 20, 20});
  const auto reps = report(std::vector<TrackRun>{{"ours", est, "fx"}, {"still", gt, "fx"}}, truth_of(gt), 16.0, tmp.path());
  CHECK(reps[0].successful_frames == 240);
  CHECK(reps[0].successful_ratio == doctest::Approx(0.96));
  CHECK(reps[1].successful_ratio == 1.0);
  CHECK(reps[1].average_error == 0.0);
  const std::string text = testing::read_text(tmp.path() / kSummaryFile);
  CHECK(text.find("ours,240,0.96,") != std::string::npos);
}
