// Compiled with -mavx2; only reached after the dispatcher has confirmed AVX2
// support at runtime.

#include <immintrin.h>

#include <cmath>

#include "patchtrack/kernels.hpp"

namespace patchtrack::kernels {
namespace {

// Byte positions of r, g, b for four packed pixels, widened to 32-bit lanes.
inline __m256i channel_mask(int channel) {
  const char c = static_cast<char>(channel);
  const __m128i m = _mm_setr_epi8(c, -1, -1, -1, static_cast<char>(c + 3), -1, -1, -1,
                                  static_cast<char>(c + 6), -1, -1, -1, static_cast<char>(c + 9), -1,
                                  -1, -1);
  return _mm256_broadcastsi128_si256(m);
}

void luma1000_row_avx2(const std::uint8_t* rgb, std::int32_t* out, std::size_t n) {
  const __m256i mask_r = channel_mask(0);
  const __m256i mask_g = channel_mask(1);
  const __m256i mask_b = channel_mask(2);
  const __m256i wr = _mm256_set1_epi32(299);
  const __m256i wg = _mm256_set1_epi32(587);
  const __m256i wb = _mm256_set1_epi32(114);
  std::size_t i = 0;
  // Each iteration reads bytes [3i, 3i + 28): keep the over-read in bounds.
  for (; i + 10 <= n; i += 8) {
    const std::uint8_t* p = rgb + 3 * i;
    const __m128i lo = _mm_loadu_si128(reinterpret_cast<const __m128i*>(p));
    const __m128i hi = _mm_loadu_si128(reinterpret_cast<const __m128i*>(p + 12));
    const __m256i px = _mm256_set_m128i(hi, lo);
    const __m256i r = _mm256_shuffle_epi8(px, mask_r);
    const __m256i g = _mm256_shuffle_epi8(px, mask_g);
    const __m256i b = _mm256_shuffle_epi8(px, mask_b);
    const __m256i y = _mm256_add_epi32(_mm256_add_epi32(_mm256_mullo_epi32(r, wr), _mm256_mullo_epi32(g, wg)),
                                       _mm256_mullo_epi32(b, wb));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + i), y);
  }
  for (; i < n; ++i) {
    out[i] = 299 * rgb[3 * i] + 587 * rgb[3 * i + 1] + 114 * rgb[3 * i + 2];
  }
}

void accumulate_avx2(std::int64_t* acc, const std::int32_t* src, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256i wide = _mm256_cvtepi32_epi64(_mm_loadu_si128(reinterpret_cast<const __m128i*>(src + i)));
    const __m256i a = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(acc + i));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(acc + i), _mm256_add_epi64(a, wide));
  }
  for (; i < n; ++i) acc[i] += src[i];
}

std::int64_t sum_avx2(const std::int32_t* src, std::size_t n) {
  __m256i total = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    total = _mm256_add_epi64(total,
                             _mm256_cvtepi32_epi64(_mm_loadu_si128(reinterpret_cast<const __m128i*>(src + i))));
  }
  alignas(32) std::int64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), total);
  std::int64_t s = lanes[0] + lanes[1] + lanes[2] + lanes[3];
  for (; i < n; ++i) s += src[i];
  return s;
}

inline double horizontal_sum(__m256d v) {
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, v);
  return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

double hellinger_sq_avx2(const double* a, const double* b, std::size_t n) {
  __m256d total = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_sqrt_pd(_mm256_loadu_pd(a + i)), _mm256_sqrt_pd(_mm256_loadu_pd(b + i)));
    total = _mm256_add_pd(total, _mm256_mul_pd(d, d));
  }
  double s = horizontal_sum(total);
  for (; i < n; ++i) {
    const double d = std::sqrt(a[i]) - std::sqrt(b[i]);
    s += d * d;
  }
  return s;
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d total = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    total = _mm256_add_pd(total, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  double s = horizontal_sum(total);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable table{Backend::Avx2, luma1000_row_avx2, accumulate_avx2,
                                 sum_avx2,      hellinger_sq_avx2, dot_avx2};
  return table;
}

}  // namespace patchtrack::kernels
