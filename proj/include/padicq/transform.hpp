#pragma once

// p-adic Fourier transform on a grid:
//   F(phi)(xi) = \int phi(x) e(xi x) dx  =  p^{-dM} sum_cells phi(x) e(xi x)
// mapping a grid (p, N, M, d) onto its dual (p, M, N, d). With the literal
// measure-weighted kernel the map is unitary because the dual cell measure
// is p^{-dN}.
//
// On one axis the character reduces to exp(2 pi i XX' / p^L) where X, X' are
// the coset integers of x and xi (L = N + M), and cell indices are the base-p
// digit reversals of those integers. The fast path is therefore a radix-p
// decimation-in-time FFT that consumes cells in storage order directly.

#include "padicq/grid.hpp"

namespace padicq {

enum class FourierMethod { dense, fast };

struct DualGridMap {
  GridSpec source;
  GridSpec target;
};

DualGridMap dual_grid_map(const GridSpec& grid);

StateVector fourier(const StateVector& phi, FourierMethod method = FourierMethod::fast);
/// Kernel e(-xi x), measure p^{-dM'} of the frequency grid; inverts `fourier`.
StateVector inverse_fourier(const StateVector& phi_hat, FourierMethod method = FourierMethod::fast);
StateVector fast_fourier(const StateVector& phi);
StateVector dense_fourier(const StateVector& phi);

/// In-place 1-D transforms on raw cell-ordered data (no measure factor):
/// out[k] = sum_i in[i] exp(sign 2 pi i rev(k) rev(i) / p^L).
void fft_axis(std::span<cplx> data, std::uint32_t p, int depth, int sign);
void dft_axis_dense(std::span<const cplx> in, std::span<cplx> out, std::uint32_t p, int depth, int sign);

}  // namespace padicq
