#pragma once

// Data-parallel inner loops. Every kernel has a scalar reference implementation; vector
// variants (AVX2 on x86-64, NEON on AArch64) are picked once at startup from
// the CPU's capabilities. PATCHTRACK_SIMD=scalar|avx2|neon|auto overrides the
// choice.
//
// The integer kernels are bit-exact across backends. The floating-point
// reductions (hellinger_sq, dot) sum in a different order on vector
// backends and agree with the scalar reference to rounding only.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace patchtrack::kernels {

enum class Backend { Scalar, Avx2, Neon };

struct KernelTable {
  Backend backend;
  /// out[i] = 299 r + 587 g + 114 b for n interleaved RGB pixels.
  void (*luma1000_row)(const std::uint8_t* rgb, std::int32_t* out, std::size_t n);
  /// acc[i] += src[i]
  void (*accumulate)(std::int64_t* acc, const std::int32_t* src, std::size_t n);
  std::int64_t (*sum)(const std::int32_t* src, std::size_t n);
  /// sum_i (sqrt(a[i]) - sqrt(b[i]))^2; equals 2 - 2 sum_i sqrt(a[i] b[i])
  /// for normalized inputs and is exactly 0 when a == b.
  double (*hellinger_sq)(const double* a, const double* b, std::size_t n);
  double (*dot)(const double* a, const double* b, std::size_t n);
};

const char* name(Backend backend);

/// The table in use by the library.
const KernelTable& active();

/// Table for a specific backend, or nullptr when the build or CPU lacks it.
const KernelTable* table_for(Backend backend);

std::vector<Backend> available_backends();

const KernelTable& scalar_table();
#if defined(PATCHTRACK_HAVE_AVX2)
const KernelTable& avx2_table();
#endif
#if defined(PATCHTRACK_HAVE_NEON)
const KernelTable& neon_table();
#endif

inline void luma1000_row(std::span<const std::uint8_t> rgb, std::span<std::int32_t> out) {
  active().luma1000_row(rgb.data(), out.data(), out.size());
}
inline void accumulate(std::span<std::int64_t> acc, std::span<const std::int32_t> src) {
  active().accumulate(acc.data(), src.data(), acc.size());
}
inline std::int64_t sum(std::span<const std::int32_t> src) {
  return active().sum(src.data(), src.size());
}
inline double hellinger_sq(std::span<const double> a, std::span<const double> b) {
  return active().hellinger_sq(a.data(), b.data(), a.size());
}
inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size());
}

}  // namespace patchtrack::kernels
