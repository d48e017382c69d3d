#include <cmath>

#include "patchtrack/kernels.hpp"

namespace patchtrack::kernels {
namespace {

void luma1000_row_scalar(const std::uint8_t* rgb, std::int32_t* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = 299 * rgb[3 * i] + 587 * rgb[3 * i + 1] + 114 * rgb[3 * i + 2];
  }
}

void accumulate_scalar(std::int64_t* acc, const std::int32_t* src, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) acc[i] += src[i];
}

std::int64_t sum_scalar(const std::int32_t* src, std::size_t n) {
  std::int64_t total = 0;
  for (std::size_t i = 0; i < n; ++i) total += src[i];
  return total;
}

double hellinger_sq_scalar(const double* a, const double* b, std::size_t n) {
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = std::sqrt(a[i]) - std::sqrt(b[i]);
    total += d * d;
  }
  return total;
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += a[i] * b[i];
  return total;
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{Backend::Scalar,  luma1000_row_scalar, accumulate_scalar,
                                 sum_scalar,       hellinger_sq_scalar, dot_scalar};
  return table;
}

}  // namespace patchtrack::kernels
