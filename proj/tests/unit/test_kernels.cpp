#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "patchtrack/imaging.hpp"
#include "patchtrack/kernels.hpp"

using namespace patchtrack;
namespace k = patchtrack::kernels;

TEST_CASE("scalar backend is always available") {
  const auto backends = k::available_backends();
  REQUIRE(!backends.empty());
  CHECK(backends.front() == k::Backend::Scalar);
  CHECK(k::table_for(k::Backend::Scalar) == &k::scalar_table());
  for (k::Backend b : backends) {
    REQUIRE(k::table_for(b) != nullptr);
    CHECK(k::table_for(b)->backend == b);
  }
  MESSAGE("active backend: " << k::name(k::active().backend));
}

TEST_CASE("integer kernels are bit-exact across backends") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> byte(0, 255);
  std::uniform_int_distribution<int> val(-1000000, 1000000);
  for (std::size_t n : {0u, 1u, 7u, 8u, 15u, 16u, 31u, 33u, 257u}) {
    std::vector<std::uint8_t> rgb(3 * n);
    for (auto& b : rgb) b = static_cast<std::uint8_t>(byte(rng));
    std::vector<std::int32_t> src(n);
    for (auto& v : src) v = val(rng);

    std::vector<std::int32_t> expect_luma(n);
    std::int64_t expect_sum = 0;
    for (std::size_t i = 0; i < n; ++i) {
      expect_luma[i] = luma1000(Rgb{rgb[3 * i], rgb[3 * i + 1], rgb[3 * i + 2]});
      expect_sum += src[i];
    }

    for (k::Backend b : k::available_backends()) {
      const k::KernelTable& t = *k::table_for(b);
      CAPTURE(k::name(b));
      CAPTURE(n);
      std::vector<std::int32_t> luma(n, -1);
      t.luma1000_row(rgb.data(), luma.data(), n);
      CHECK(luma == expect_luma);

      std::vector<std::int64_t> acc(n, 3);
      t.accumulate(acc.data(), src.data(), n);
      for (std::size_t i = 0; i < n; ++i) REQUIRE(acc[i] == 3 + src[i]);
      CHECK(t.sum(src.data(), n) == expect_sum);
    }
  }
}

TEST_CASE("floating kernels agree with a long-double oracle") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 9u, 64u, 256u, 1000u}) {
    std::vector<double> a(n), b(n);
    for (auto& v : a) v = unit(rng);
    for (auto& v : b) v = unit(rng);
    long double hel = 0.0L, dot = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
      const long double d = std::sqrt(static_cast<long double>(a[i])) - std::sqrt(static_cast<long double>(b[i]));
      hel += d * d;
      dot += static_cast<long double>(a[i]) * b[i];
    }
    for (k::Backend be : k::available_backends()) {
      const k::KernelTable& t = *k::table_for(be);
      CAPTURE(k::name(be));
      CHECK(t.hellinger_sq(a.data(), b.data(), n) == doctest::Approx(static_cast<double>(hel)).epsilon(1e-12));
      CHECK(t.hellinger_sq(a.data(), a.data(), n) == 0.0);
      CHECK(t.dot(a.data(), b.data(), n) == doctest::Approx(static_cast<double>(dot)).epsilon(1e-12));
    }
  }
}

TEST_CASE("span wrappers use the active table") {
  const std::vector<double> a{0.25, 0.75};
  const std::vector<double> b{0.25, 0.75};
  CHECK(k::hellinger_sq(a, b) == 0.0);
  CHECK(k::dot(a, b) == doctest::Approx(0.625));
  const std::vector<std::int32_t> v{1, 2, 3};
  CHECK(k::sum(v) == 6);
}
