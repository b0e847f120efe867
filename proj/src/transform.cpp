#include "padicq/transform.hpp"

#include <cmath>
#include <numbers>

#include "padicq/error.hpp"
#include "padicq/kernels.hpp"

namespace padicq {

namespace {

std::size_t digit_reverse(std::size_t i, std::uint32_t p, int depth) {
  std::size_t r = 0;
  for (int t = 0; t < depth; ++t) {
    r = r * p + i % p;
    i /= p;
  }
  return r;
}

std::size_t ipow(std::uint32_t p, int e) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) r *= p;
  return r;
}

// roots[j] = exp(sign 2 pi i j / n)
std::vector<cplx> unit_roots(std::size_t n, int sign) {
  std::vector<cplx> roots(n);
  for (std::size_t j = 0; j < n; ++j) {
    // Quarter turns are exact; the rest go through polar.
    if (4 * j % n == 0) {
      static constexpr cplx quarter[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
      const std::size_t q = 4 * j / n;
      roots[j] = sign > 0 ? quarter[q] : std::conj(quarter[q]);
    } else {
      roots[j] = std::polar(1.0, sign * 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n));
    }
  }
  return roots;
}

struct AxisPlan {
  AxisPlan(std::uint32_t prime, int d, int sgn)
      : p(prime), depth(d), n(ipow(prime, d)), roots(unit_roots(n, sgn)), rev(n) {
    for (std::size_t i = 0; i < n; ++i) rev[i] = digit_reverse(i, p, depth);
  }
  std::uint32_t p;
  int depth;
  std::size_t n;
  std::vector<cplx> roots;
  std::vector<std::size_t> rev;
};

void dense_line(const AxisPlan& plan, std::span<const cplx> in, std::span<cplx> out) {
  const std::size_t n = plan.n;
  std::vector<cplx> row(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t xi = plan.rev[k];
    for (std::size_t i = 0; i < n; ++i) row[i] = plan.roots[(xi * plan.rev[i]) % n];
    out[k] = kernels::dot(row, in);
  }
}

void fft_line(const AxisPlan& plan, std::span<cplx> data, std::span<cplx> scratch) {
  const std::size_t n = plan.n;
  const std::uint32_t p = plan.p;
  const auto& roots = plan.roots;
  const std::size_t np = n / p;
  cplx u[64];
  std::vector<cplx> big_u(p > 64 ? p : 0);
  cplx* ur = p > 64 ? big_u.data() : u;
  // Storage order is already digit-reversed, as decimation in time wants.
  for (std::size_t m = p; m <= n; m *= p) {
    const std::size_t sub = m / p;
    const std::size_t step = n / m;
    for (std::size_t b = 0; b < n; b += m) {
      for (std::size_t k = 0; k < sub; ++k) {
        for (std::size_t r = 0; r < p; ++r) ur[r] = data[b + r * sub + k] * roots[(r * k * step) % n];
        for (std::size_t q = 0; q < p; ++q) {
          cplx s = ur[0];
          for (std::size_t r = 1; r < p; ++r) s += ur[r] * roots[((r * q) % p) * np];
          data[b + q * sub + k] = s;
        }
      }
    }
  }
  // Natural frequency order -> cell order of the dual grid.
  std::copy(data.begin(), data.end(), scratch.begin());
  for (std::size_t x = 0; x < n; ++x) data[plan.rev[x]] = scratch[x];
}

template <typename AxisFn>
void for_each_axis_line(const GridSpec& g, std::vector<cplx>& data, AxisFn&& fn) {
  const std::size_t n = g.cells_per_axis();
  std::vector<cplx> line(n);
  std::vector<cplx> scratch(n);
  for (int axis = 0; axis < g.dim(); ++axis) {
    const std::size_t stride = ipow(static_cast<std::uint32_t>(n), g.dim() - 1 - axis);
    const std::size_t outer = data.size() / (stride * n);
    for (std::size_t o = 0; o < outer; ++o) {
      for (std::size_t in = 0; in < stride; ++in) {
        const std::size_t base = o * stride * n + in;
        for (std::size_t k = 0; k < n; ++k) line[k] = data[base + k * stride];
        fn(std::span<cplx>(line), std::span<cplx>(scratch));
        for (std::size_t k = 0; k < n; ++k) data[base + k * stride] = line[k];
      }
    }
  }
}

StateVector transform(const StateVector& phi, FourierMethod method, int sign) {
  const auto& g = phi.grid;
  const std::uint32_t p = g.p();
  const int L = g.depth();
  std::vector<cplx> data = phi.coeffs;
  const AxisPlan plan(p, L, sign);
  if (method == FourierMethod::fast) {
    for_each_axis_line(g, data, [&](std::span<cplx> line, std::span<cplx> scratch) { fft_line(plan, line, scratch); });
  } else {
    for_each_axis_line(g, data, [&](std::span<cplx> line, std::span<cplx> scratch) {
      dense_line(plan, line, scratch);
      std::copy(scratch.begin(), scratch.end(), line.begin());
    });
  }
  const double measure = g.cell_measure();
  for (auto& z : data) z *= measure;
  const std::string prefix = sign > 0 ? "F(" : "Finv(";
  return StateVector(g.dual(), std::move(data), prefix + phi.label + ")", phi.h);
}

}  // namespace

DualGridMap dual_grid_map(const GridSpec& grid) { return {grid, grid.dual()}; }

void dft_axis_dense(std::span<const cplx> in, std::span<cplx> out, std::uint32_t p, int depth, int sign) {
  const AxisPlan plan(p, depth, sign);
  if (in.size() != plan.n || out.size() != plan.n) throw Error(ErrorKind::invalid_input, "axis length is not p^depth");
  dense_line(plan, in, out);
}

void fft_axis(std::span<cplx> data, std::uint32_t p, int depth, int sign) {
  const AxisPlan plan(p, depth, sign);
  if (data.size() != plan.n) throw Error(ErrorKind::invalid_input, "axis length is not p^depth");
  std::vector<cplx> scratch(plan.n);
  fft_line(plan, data, scratch);
}

StateVector fourier(const StateVector& phi, FourierMethod method) { return transform(phi, method, +1); }
StateVector inverse_fourier(const StateVector& phi_hat, FourierMethod method) { return transform(phi_hat, method, -1); }
StateVector fast_fourier(const StateVector& phi) { return transform(phi, FourierMethod::fast, +1); }
StateVector dense_fourier(const StateVector& phi) { return transform(phi, FourierMethod::dense, +1); }

}  // namespace padicq
