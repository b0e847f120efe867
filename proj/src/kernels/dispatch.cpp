#include <atomic>
#include <cstdlib>
#include <string_view>

#include "padicq/kernels.hpp"

namespace padicq::kernels {

#if defined(PADICQ_HAVE_AVX2)
const KernelTable& avx2_kernels();
#endif

namespace {

std::atomic<const KernelTable*> g_forced{nullptr};

const KernelTable& detect() {
  if (const char* env = std::getenv("PADICQ_SIMD"); env && std::string_view(env) == "scalar") {
    return scalar_table();
  }
  if (const auto* t = avx2_table()) return *t;
  return scalar_table();
}

}  // namespace

const KernelTable* avx2_table() {
#if defined(PADICQ_HAVE_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? &avx2_kernels() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() {
  if (const auto* forced = g_forced.load(std::memory_order_acquire)) return *forced;
  static const KernelTable& detected = detect();
  return detected;
}

void force(const KernelTable* table) { g_forced.store(table, std::memory_order_release); }

}  // namespace padicq::kernels
