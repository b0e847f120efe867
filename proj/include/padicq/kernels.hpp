#pragma once

// Complex inner-loop kernels with a scalar reference implementation and an
// AVX2/FMA variant chosen at runtime. All variants must agree with the scalar
// reference to rounding (see tests/test_kernels.cpp).

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace padicq::kernels {

using cd = std::complex<double>;

struct KernelTable {
  std::string_view name;
  cd (*dot)(const cd* a, const cd* b, std::size_t n);   // sum a_i b_i
  cd (*dotc)(const cd* a, const cd* b, std::size_t n);  // sum a_i conj(b_i)
  double (*norm2)(const cd* a, std::size_t n);          // sum |a_i|^2
  void (*axpy)(cd alpha, const cd* x, cd* y, std::size_t n);
  // y = A x, A row-major rows x cols.
  void (*matvec)(const cd* a, std::size_t rows, std::size_t cols, const cd* x, cd* y);
};

const KernelTable& scalar_table();
/// nullptr when the AVX2 variant was not compiled in or the CPU lacks AVX2/FMA.
const KernelTable* avx2_table();

/// Table used by the library. Picks AVX2 when available unless the
/// PADICQ_SIMD environment variable is set to "scalar".
const KernelTable& active();
/// Overrides the active table (tests, benchmarks). Pass nullptr to restore auto.
void force(const KernelTable* table);

inline cd dot(std::span<const cd> a, std::span<const cd> b) { return active().dot(a.data(), b.data(), a.size()); }
inline cd dotc(std::span<const cd> a, std::span<const cd> b) { return active().dotc(a.data(), b.data(), a.size()); }
inline double norm2(std::span<const cd> a) { return active().norm2(a.data(), a.size()); }
inline void axpy(cd alpha, std::span<const cd> x, std::span<cd> y) { active().axpy(alpha, x.data(), y.data(), x.size()); }
inline void matvec(const cd* a, std::size_t rows, std::size_t cols, std::span<const cd> x, std::span<cd> y) {
  active().matvec(a, rows, cols, x.data(), y.data());
}

}  // namespace padicq::kernels
