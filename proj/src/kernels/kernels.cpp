#include <cstdlib>
#include <cstring>
#include <string_view>

#include "patchtrack/kernels.hpp"

namespace patchtrack::kernels {
namespace {

bool cpu_has(Backend backend) {
  switch (backend) {
    case Backend::Scalar:
      return true;
    case Backend::Avx2:
#if defined(PATCHTRACK_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Backend::Neon:
#if defined(PATCHTRACK_HAVE_NEON)
      return true;  // mandatory on AArch64
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& select() {
  const char* env = std::getenv("PATCHTRACK_SIMD");
  const std::string_view want = env ? env : "auto";
  if (want == "scalar") return scalar_table();
  if (want == "avx2") {
    if (const auto* t = table_for(Backend::Avx2)) return *t;
    return scalar_table();
  }
  if (want == "neon") {
    if (const auto* t = table_for(Backend::Neon)) return *t;
    return scalar_table();
  }
  if (const auto* t = table_for(Backend::Avx2)) return *t;
  if (const auto* t = table_for(Backend::Neon)) return *t;
  return scalar_table();
}

}  // namespace

const char* name(Backend backend) {
  switch (backend) {
    case Backend::Scalar: return "scalar";
    case Backend::Avx2: return "avx2";
    case Backend::Neon: return "neon";
  }
  return "unknown";
}

const KernelTable* table_for(Backend backend) {
  if (!cpu_has(backend)) return nullptr;
  switch (backend) {
    case Backend::Scalar:
      return &scalar_table();
    case Backend::Avx2:
#if defined(PATCHTRACK_HAVE_AVX2)
      return &avx2_table();
#else
      return nullptr;
#endif
    case Backend::Neon:
#if defined(PATCHTRACK_HAVE_NEON)
      return &neon_table();
#else
      return nullptr;
#endif
  }
  return nullptr;
}

std::vector<Backend> available_backends() {
  std::vector<Backend> out;
  for (Backend b : {Backend::Scalar, Backend::Avx2, Backend::Neon}) {
    if (table_for(b) != nullptr) out.push_back(b);
  }
  return out;
}

const KernelTable& active() {
  static const KernelTable& table = select();
  return table;
}

}  // namespace patchtrack::kernels
