#include <doctest.h>

#include <random>

#include "patchtrack/dataset.hpp"
#include "patchtrack/error.hpp"
#include "test_support.hpp"

using namespace patchtrack;
namespace fs = std::filesystem;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::InvalidArgument;
}

void write_text(const fs::path& p, const std::string& text) {
  write_file(p, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

void make_frames(const fs::path& dir, const std::vector<std::string>& names, int w = 6, int h = 4) {
  fs::create_directories(dir / "img");
  int k = 0;
  for (const auto& n : names) save_png(Image(w, h, testing::gray(10 * k++)), dir / "img" / n);
}

}  // namespace

TEST_CASE("parse_boxes accepts comma, tab and space separators") {
  const auto boxes = parse_boxes("1,2,3,4\n5\t6\t7\t8\r\n  9 10  11 12 \n\n13, 14, 15.5, 16\n");
  REQUIRE(boxes.size() == 4);
  CHECK(boxes[0] == BBox{0, 1, 3, 4});
  CHECK(boxes[1] == BBox{4, 5, 7, 8});
  CHECK(boxes[2] == BBox{8, 9, 11, 12});
  CHECK(boxes[3] == BBox{12, 13, 15.5, 16});
  CHECK(parse_boxes("").empty());
  CHECK(parse_boxes("1,2,3,4").size() == 1);
}

TEST_CASE("parse_boxes reports the offending line") {
  try {
    parse_boxes("1,2,3,4\na,b,c,d\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.code() == ErrorCode::ParseError);
  }
  CHECK_THROWS_AS(parse_boxes("1,2,3\n"), ParseError);
  CHECK_THROWS_AS(parse_boxes("1,2,3,4,5\n"), ParseError);
  CHECK_THROWS_AS(parse_boxes("1,2,3,4x\n"), ParseError);
}

TEST_CASE("format_boxes round trips") {
  std::mt19937_64 rng(103);
  std::uniform_int_distribution<int> coord(-50, 1000);
  std::uniform_real_distribution<double> real(-50.0, 1000.0);
  std::vector<BBox> ints, reals;
  for (int i = 0; i < 1000; ++i) {
    ints.push_back({static_cast<double>(coord(rng)), static_cast<double>(coord(rng)), static_cast<double>(coord(rng)),
                    static_cast<double>(coord(rng))});
    reals.push_back({real(rng), real(rng), real(rng), real(rng)});
  }
  CHECK(parse_boxes(format_boxes(ints)) == ints);
  const auto back = parse_boxes(format_boxes(reals));
  REQUIRE(back.size() == reals.size());
  for (std::size_t i = 0; i < reals.size(); ++i) {
    REQUIRE(back[i].x == doctest::Approx(reals[i].x).epsilon(1e-13));
    REQUIRE(back[i].y == doctest::Approx(reals[i].y).epsilon(1e-13));
    REQUIRE(back[i].w == reals[i].w);
    REQUIRE(back[i].h == reals[i].h);
  }
  CHECK(format_boxes(std::vector<BBox>{{0, 1, 2.5, 3}}) == "1,2,2.5,3\n");
}

TEST_CASE("load_sequence orders frames numerically") {
  testing::TempDir tmp("seq");
  const fs::path dir = tmp.path() / "Walker";
  make_frames(dir, {"10.png", "2.png", "0001.png"});
  save_png(Image(6, 4), dir / "img" / "notes.png");  // non-numeric stem: ignored
  write_text(dir / "img" / "3.txt", "x");
  write_text(dir / "groundtruth_rect.txt", "1,1,2,2\n2,2,2,2\n3,3,2,2\n");
  const SequenceSpec seq = load_sequence(dir);
  CHECK(seq.name == "Walker");
  REQUIRE(seq.size() == 3);
  CHECK(seq.frame_paths[0].filename() == "0001.png");
  CHECK(seq.frame_paths[1].filename() == "2.png");
  CHECK(seq.frame_paths[2].filename() == "10.png");
  CHECK(seq.width == 6);
  CHECK(seq.height == 4);
  CHECK(seq.ground_truth[2] == BBox{2, 2, 2, 2});
  CHECK(load_frame(seq, 1).at(0, 0) == testing::gray(10));
  CHECK_THROWS_AS(load_frame(seq, 3), Error);
}

TEST_CASE("load_sequence error cases") {
  testing::TempDir tmp("seqerr");
  const fs::path dir = tmp.path();
  CHECK(code_of([&] { load_sequence(dir / "none"); }) == ErrorCode::IoError);

  fs::create_directories(dir / "empty" / "img");
  CHECK(code_of([&] { load_sequence(dir / "empty"); }) == ErrorCode::EmptyInput);

  make_frames(dir / "nogt", {"1.png"});
  CHECK(code_of([&] { load_sequence(dir / "nogt"); }) == ErrorCode::MissingGroundTruth);

  make_frames(dir / "short", {"1.png", "2.png"});
  write_text(dir / "short" / "groundtruth_rect.txt", "1,1,2,2\n");
  CHECK(code_of([&] { load_sequence(dir / "short"); }) == ErrorCode::FrameCountMismatch);

  make_frames(dir / "bad", {"1.png"});
  write_text(dir / "bad" / "groundtruth_rect.txt", "a,b,c,d\n");
  CHECK(code_of([&] { load_sequence(dir / "bad"); }) == ErrorCode::ParseError);

  make_frames(dir / "mixed", {"1.png"});
  save_png(Image(7, 4), dir / "mixed" / "img" / "2.png");
  write_text(dir / "mixed" / "groundtruth_rect.txt", "1,1,2,2\n1,1,2,2\n");
  const SequenceSpec mixed = load_sequence(dir / "mixed");
  CHECK_THROWS_AS(load_frame(mixed, 1), Error);
}

TEST_CASE("load_sequence reads jpeg frames") {
  testing::TempDir tmp("jpg");
  fs::create_directories(tmp.path() / "img");
  fs::copy_file(testing::data_dir() / "flat_16x8.jpg", tmp.path() / "img" / "1.jpg");
  fs::copy_file(testing::data_dir() / "flat_16x8_progressive.jpg", tmp.path() / "img" / "2.jpeg");
  write_text(tmp.path() / "groundtruth_rect.txt", "1\t1\t4\t4\n2\t2\t4\t4\n");
  const SequenceSpec seq = load_sequence(tmp.path());
  CHECK(seq.size() == 2);
  CHECK(seq.width == 16);
  CHECK(load_frame(seq, 1).height() == 8);
}

TEST_CASE("write_boxes / read_boxes") {
  testing::TempDir tmp("boxes");
  const std::vector<BBox> boxes{{0, 0, 10, 20}, {3.25, 4.5, 10, 20}};
  write_boxes(tmp.path() / "r.txt", boxes);
  CHECK(read_boxes(tmp.path() / "r.txt") == boxes);
  CHECK_THROWS_AS(read_boxes(tmp.path() / "missing.txt"), Error);
}
