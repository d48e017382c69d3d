#include <arm_neon.h>

#include <cmath>

#include "patchtrack/kernels.hpp"

namespace patchtrack::kernels {
namespace {

void luma1000_row_neon(const std::uint8_t* rgb, std::int32_t* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const uint8x8x3_t px = vld3_u8(rgb + 3 * i);
    const uint16x8_t r = vmovl_u8(px.val[0]);
    const uint16x8_t g = vmovl_u8(px.val[1]);
    const uint16x8_t b = vmovl_u8(px.val[2]);
    uint32x4_t lo = vmull_n_u16(vget_low_u16(r), 299);
    lo = vmlal_n_u16(lo, vget_low_u16(g), 587);
    lo = vmlal_n_u16(lo, vget_low_u16(b), 114);
    uint32x4_t hi = vmull_n_u16(vget_high_u16(r), 299);
    hi = vmlal_n_u16(hi, vget_high_u16(g), 587);
    hi = vmlal_n_u16(hi, vget_high_u16(b), 114);
    vst1q_s32(out + i, vreinterpretq_s32_u32(lo));
    vst1q_s32(out + i + 4, vreinterpretq_s32_u32(hi));
  }
  for (; i < n; ++i) {
    out[i] = 299 * rgb[3 * i] + 587 * rgb[3 * i + 1] + 114 * rgb[3 * i + 2];
  }
}

void accumulate_neon(std::int64_t* acc, const std::int32_t* src, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const int32x4_t s = vld1q_s32(src + i);
    vst1q_s64(acc + i, vaddw_s32(vld1q_s64(acc + i), vget_low_s32(s)));
    vst1q_s64(acc + i + 2, vaddw_s32(vld1q_s64(acc + i + 2), vget_high_s32(s)));
  }
  for (; i < n; ++i) acc[i] += src[i];
}

std::int64_t sum_neon(const std::int32_t* src, std::size_t n) {
  int64x2_t total = vdupq_n_s64(0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) total = vpadalq_s32(total, vld1q_s32(src + i));
  std::int64_t s = vgetq_lane_s64(total, 0) + vgetq_lane_s64(total, 1);
  for (; i < n; ++i) s += src[i];
  return s;
}

double hellinger_sq_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t t0 = vdupq_n_f64(0.0);
  float64x2_t t1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const float64x2_t d0 = vsubq_f64(vsqrtq_f64(vld1q_f64(a + i)), vsqrtq_f64(vld1q_f64(b + i)));
    const float64x2_t d1 = vsubq_f64(vsqrtq_f64(vld1q_f64(a + i + 2)), vsqrtq_f64(vld1q_f64(b + i + 2)));
    t0 = vaddq_f64(t0, vmulq_f64(d0, d0));
    t1 = vaddq_f64(t1, vmulq_f64(d1, d1));
  }
  double s = (vgetq_lane_f64(t0, 0) + vgetq_lane_f64(t0, 1)) + (vgetq_lane_f64(t1, 0) + vgetq_lane_f64(t1, 1));
  for (; i < n; ++i) {
    const double d = std::sqrt(a[i]) - std::sqrt(b[i]);
    s += d * d;
  }
  return s;
}

double dot_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t t0 = vdupq_n_f64(0.0);
  float64x2_t t1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    t0 = vaddq_f64(t0, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    t1 = vaddq_f64(t1, vmulq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2)));
  }
  double s = (vgetq_lane_f64(t0, 0) + vgetq_lane_f64(t0, 1)) + (vgetq_lane_f64(t1, 0) + vgetq_lane_f64(t1, 1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

const KernelTable& neon_table() {
  static const KernelTable table{Backend::Neon, luma1000_row_neon, accumulate_neon,
                                 sum_neon,      hellinger_sq_neon, dot_neon};
  return table;
}

}  // namespace patchtrack::kernels
