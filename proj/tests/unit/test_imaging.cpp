#include <doctest.h>

#include <random>

#include "patchtrack/error.hpp"
#include "patchtrack/imaging.hpp"
#include "test_support.hpp"

using namespace patchtrack;

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

}  // namespace

TEST_CASE("png decodes in row-major order") {
  const Image img = load_image(testing::data_dir() / "rgb_2x2.png");
  REQUIRE(img.width() == 2);
  REQUIRE(img.height() == 2);
  CHECK(img.at(0, 0) == Rgb{255, 0, 0});
  CHECK(img.at(1, 0) == Rgb{0, 255, 0});
  CHECK(img.at(0, 1) == Rgb{0, 0, 255});
  CHECK(img.at(1, 1) == Rgb{10, 20, 30});
}

TEST_CASE("grayscale and palette pngs expand to rgb") {
  const Image g = load_image(testing::data_dir() / "gray_3x1.png");
  REQUIRE(g.width() == 3);
  CHECK(g.at(0, 0) == testing::gray(0));
  CHECK(g.at(1, 0) == testing::gray(128));
  CHECK(g.at(2, 0) == testing::gray(255));

  const Image p = load_image(testing::data_dir() / "palette_2x1.png");
  CHECK(p.at(0, 0) == Rgb{1, 2, 3});
  CHECK(p.at(1, 0) == Rgb{250, 251, 252});

  const Image ga = load_image(testing::data_dir() / "gray_alpha_2x1.png");
  CHECK(ga.width() == 2);
  CHECK(ga.at(0, 0) == testing::gray(7));
}

TEST_CASE("1x1 black png round trip") {
  const Image one(1, 1, Rgb{0, 0, 0});
  CHECK(decode_image(encode_png(one)) == one);
}

TEST_CASE("png encode/decode is lossless") {
  std::mt19937_64 rng(7);
  const Image img = testing::random_image(rng, 13, 9);
  CHECK(decode_image(encode_png(img)) == img);
}

TEST_CASE("jpeg baseline and progressive decode") {
  for (const char* name : {"flat_16x8.jpg", "flat_16x8_progressive.jpg"}) {
    const Image img = load_image(testing::data_dir() / name);
    REQUIRE(img.width() == 16);
    REQUIRE(img.height() == 8);
    for (const Rgb& p : img.pixels()) {
      CHECK(std::abs(p.r - 200) <= 3);
      CHECK(std::abs(p.g - 40) <= 3);
      CHECK(std::abs(p.b - 90) <= 3);
    }
  }
}

TEST_CASE("malformed streams are DecodeError") {
  const auto png = read_file(testing::data_dir() / "rgb_2x2.png");
  const auto jpg = read_file(testing::data_dir() / "flat_16x8.jpg");
  const std::vector<std::uint8_t> png_cut(png.begin(), png.begin() + png.size() / 2);
  const std::vector<std::uint8_t> jpg_cut(jpg.begin(), jpg.begin() + jpg.size() / 3);
  CHECK(code_of([&] { decode_image(png_cut); }) == ErrorCode::DecodeError);
  CHECK(code_of([&] { decode_image(jpg_cut); }) == ErrorCode::DecodeError);
  CHECK(code_of([&] { decode_image(std::vector<std::uint8_t>{1, 2, 3, 4}); }) == ErrorCode::DecodeError);
  CHECK(code_of([&] { decode_image(std::vector<std::uint8_t>{}); }) == ErrorCode::DecodeError);
}

TEST_CASE("missing file is IoError") {
  CHECK(code_of([] { load_image("/nonexistent/frame.png"); }) == ErrorCode::IoError);
}

TEST_CASE("crop clamps to the image") {
  Image img(10, 10);
  for (int y = 0; y < 10; ++y)
    for (int x = 0; x < 10; ++x) img.at(x, y) = {static_cast<std::uint8_t>(x), static_cast<std::uint8_t>(y), 0};

  CHECK(crop(img, img.bounds()) == img);
  const Image corner = crop(img, {9, 9, 5, 5});
  REQUIRE(corner.width() == 1);
  REQUIRE(corner.height() == 1);
  CHECK(corner.at(0, 0) == Rgb{9, 9, 0});
  CHECK(code_of([&] { crop(img, {20, 20, 3, 3}); }) == ErrorCode::EmptyRegion);
  CHECK(code_of([&] { crop(img, {-5, 0, 5, 3}); }) == ErrorCode::EmptyRegion);
  CHECK(code_of([&] { crop(img, {2, 2, 0, 3}); }) == ErrorCode::EmptyRegion);
}

TEST_CASE("crop property: random boxes stay in bounds and are idempotent") {
  std::mt19937_64 rng(11);
  const Image img = testing::random_image(rng, 17, 12);
  std::uniform_int_distribution<int> coord(-20, 30);
  std::uniform_int_distribution<int> size(0, 25);
  int checked = 0;
  for (int i = 0; i < 1000; ++i) {
    const Rect box{coord(rng), coord(rng), size(rng), size(rng)};
    const Rect inside = intersect(box, img.bounds());
    if (inside.empty()) {
      CHECK_THROWS_AS(crop(img, box), Error);
      continue;
    }
    const Image c = crop(img, box);
    REQUIRE(c.width() == inside.w);
    REQUIRE(c.height() == inside.h);
    for (int y = 0; y < c.height(); ++y)
      for (int x = 0; x < c.width(); ++x) REQUIRE(c.at(x, y) == img.at(inside.x + x, inside.y + y));
    REQUIRE(crop(c, c.bounds()) == c);
    ++checked;
  }
  CHECK(checked > 100);
}

TEST_CASE("luminance values") {
  CHECK(luminance(0, 0, 0) == 0.0);
  CHECK(luminance(255, 255, 255) == 255.0);
  CHECK(luminance(255, 0, 0) == doctest::Approx(76.245).epsilon(1e-12));
  for (int v = 0; v < 256; ++v) {
    const auto b = static_cast<std::uint8_t>(v);
    REQUIRE(luminance(b, b, b) == static_cast<double>(v));
  }
}

TEST_CASE("luminance is monotone in each channel") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> byte(0, 254);
  for (int i = 0; i < 1000; ++i) {
    const auto r = static_cast<std::uint8_t>(byte(rng));
    const auto g = static_cast<std::uint8_t>(byte(rng));
    const auto b = static_cast<std::uint8_t>(byte(rng));
    const double base = luminance(r, g, b);
    REQUIRE(luminance(r + 1, g, b) > base);
    REQUIRE(luminance(r, g + 1, b) > base);
    REQUIRE(luminance(r, g, b + 1) > base);
    REQUIRE(luminance(r, g, b) == doctest::Approx(0.299 * r + 0.587 * g + 0.114 * b).epsilon(1e-12));
  }
}

TEST_CASE("box helpers") {
  const BBox b = box_at_center(10.0, 20.0, 4.0, 6.0);
  CHECK(b == BBox{8.0, 17.0, 4.0, 6.0});
  CHECK(b.center_x() == 10.0);
  CHECK(to_rect(BBox{1.4, 2.6, 3.5, 4.0}) == Rect{1, 3, 4, 4});
  CHECK(intersect({0, 0, 5, 5}, {3, 3, 5, 5}) == Rect{3, 3, 2, 2});
  CHECK(intersect({0, 0, 2, 2}, {3, 3, 5, 5}).empty());
}

TEST_CASE("image construction validates sizes") {
  CHECK_THROWS_AS(Image(0, 3), Error);
  CHECK_THROWS_AS(Image(2, 2, std::vector<Rgb>(3)), Error);
  Image img(4, 3, Rgb{1, 1, 1});
  img.fill({1, 1, 10, 10}, Rgb{9, 9, 9});
  CHECK(img.at(0, 0) == Rgb{1, 1, 1});
  CHECK(img.at(3, 2) == Rgb{9, 9, 9});
  const auto bytes = img.row_bytes(1);
  REQUIRE(bytes.size() == 12);
  CHECK(bytes[3] == 9);
}
