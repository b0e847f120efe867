#include "doctest.h"

#include <random>
#include <tuple>

#include "padicq/error.hpp"
#include "padicq/transform.hpp"

using namespace padicq;

namespace {

StateVector random_state(const GridSpec& g, std::mt19937_64& gen) {
  std::normal_distribution<double> n;
  std::vector<cplx> c(g.total_cells());
  for (auto& z : c) z = {n(gen), n(gen)};
  return StateVector(g, c);
}

// The transform straight from its definition, one character per (x, xi) pair.
std::vector<cplx> oracle(const StateVector& phi) {
  const GridSpec& g = phi.grid;
  const GridSpec dual = g.dual();
  const auto xs = cells(g);
  const auto xis = cells(dual);
  std::vector<cplx> out(dual.total_cells());
  for (std::size_t j = 0; j < xis.size(); ++j) {
    cplx s = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      cplx e = 1;
      for (int a = 0; a < g.dim(); ++a)
        e *= character(xis[j].representative[static_cast<std::size_t>(a)] * xs[i].representative[static_cast<std::size_t>(a)]);
      s += phi.coeffs[i] * e;
    }
    out[j] = s * g.cell_measure();
  }
  return out;
}

double max_diff(std::span<const cplx> a, std::span<const cplx> b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("dual grid bookkeeping") {
  const auto g = make_grid(BaseConfig(3, 6), 1, 2, 2);
  const auto map = dual_grid_map(g);
  CHECK(map.target.support() == 2);
  CHECK(map.target.resolution() == 1);
  CHECK(map.target.dim() == 2);
  CHECK(map.target.total_cells() == g.total_cells());
  CHECK(map.target.dual() == g);
  const auto phi = uniform_state(g);
  CHECK(fourier(phi).grid == map.target);
}

TEST_CASE("fast and dense transforms match the definition") {
  std::mt19937_64 gen(2);
  for (auto [p, N, M, d] : {std::tuple{2u, 1, 1, 1}, std::tuple{2u, 2, 2, 1}, std::tuple{3u, 1, 1, 1},
                            std::tuple{3u, 0, 2, 1}, std::tuple{5u, 1, 1, 1}, std::tuple{2u, 1, 1, 2},
                            std::tuple{3u, 1, 0, 2}}) {
    const auto g = make_grid(BaseConfig(p, 6), N, M, d);
    for (int trial = 0; trial < 10; ++trial) {
      const auto phi = random_state(g, gen);
      const auto want = oracle(phi);
      CHECK(max_diff(fast_fourier(phi).coeffs, want) < 1e-10);
      CHECK(max_diff(dense_fourier(phi).coeffs, want) < 1e-10);
    }
  }
  // Every basis vector of the (2, 2, 2) grid.
  const auto g = make_grid(BaseConfig(2, 6), 2, 2);
  for (std::size_t k = 0; k < g.total_cells(); ++k) {
    StateVector e(g);
    e.coeffs[k] = 1;
    CHECK(max_diff(fourier(e, FourierMethod::fast).coeffs, fourier(e, FourierMethod::dense).coeffs) < 1e-12);
  }
}

TEST_CASE("raw axis transforms agree") {
  std::mt19937_64 gen(4);
  std::normal_distribution<double> n;
  for (auto [p, depth] : {std::pair{2u, 6}, std::pair{3u, 4}, std::pair{5u, 3}, std::pair{7u, 2}}) {
    std::size_t len = 1;
    for (int i = 0; i < depth; ++i) len *= p;
    std::vector<cplx> in(len);
    for (auto& z : in) z = {n(gen), n(gen)};
    for (int sign : {1, -1}) {
      std::vector<cplx> dense(len), fast = in;
      dft_axis_dense(in, dense, p, depth, sign);
      fft_axis(fast, p, depth, sign);
      CHECK(max_diff(dense, fast) < 1e-10);
    }
  }
}

TEST_CASE("inversion, linearity and Plancherel") {
  std::mt19937_64 gen(6);
  for (auto [p, N, M, d] : {std::tuple{2u, 2, 3, 1}, std::tuple{3u, 1, 2, 1}, std::tuple{2u, 1, 2, 2}}) {
    const auto g = make_grid(BaseConfig(p, 8), N, M, d);
    for (int trial = 0; trial < 100; ++trial) {
      const auto a = random_state(g, gen);
      const auto b = random_state(g, gen);
      const auto fa = fourier(a);
      CHECK(std::abs(norm2(fa) - norm2(a)) < 1e-10 * norm2(a));
      CHECK(max_diff(inverse_fourier(fa).coeffs, a.coeffs) < 1e-10);
      if (trial < 10) {
        std::vector<cplx> lin(g.total_cells());
        const cplx alpha(0.3, -1.2);
        for (std::size_t i = 0; i < lin.size(); ++i) lin[i] = a.coeffs[i] + alpha * b.coeffs[i];
        const auto fb = fourier(b);
        const auto fl = fourier(StateVector(g, lin));
        for (std::size_t i = 0; i < lin.size(); ++i) CHECK(std::abs(fl.coeffs[i] - fa.coeffs[i] - alpha * fb.coeffs[i]) < 1e-10);
      }
    }
  }
}

TEST_CASE("transform of ball indicators") {
  for (std::uint32_t p : {2u, 3u}) {
    for (int NM : {1, 2}) {
      const auto g = make_grid(BaseConfig(p, 6), NM, NM);
      const auto zero = PadicNumber::zero(g.config());
      const auto om = indicator_state(g, Ball{zero, 0});
      const auto fo = fourier(om);
      CHECK(max_diff(fo.coeffs, indicator_state(g.dual(), Ball{zero, 0}).coeffs) < 1e-12);
      for (int r = -NM; r <= NM; ++r) {
        const auto f = fourier(indicator_state(g, Ball{zero, r}));
        const auto want = indicator_state(g.dual(), Ball{zero, -r});
        const double rr = pow_p(p, r);
        for (std::size_t i = 0; i < want.coeffs.size(); ++i) CHECK(std::abs(f.coeffs[i] - rr * want.coeffs[i]) < 1e-12);
      }
    }
  }
}

TEST_CASE("plane waves localize in frequency") {
  const BaseConfig cfg(3, 6);
  const auto g = make_grid(cfg, 1, 2);
  const auto dual = g.dual();
  for (std::size_t k = 0; k < g.cells_per_axis(); k += 4) {
    // Any frequency with |xi0| <= p^M is a representative of the dual grid.
    const auto xi0 = dual.representative(k);
    const auto f = fourier(plane_wave(xi0, g));
    const std::size_t target = dual.axis_cell_of(-xi0);
    for (std::size_t i = 0; i < f.coeffs.size(); ++i) {
      const cplx want = i == target ? cplx(g.domain_measure(), 0) : cplx(0, 0);
      CHECK(std::abs(f.coeffs[i] - want) < 1e-10);
    }
  }
  // A flat spectrum comes back as a spike on the zero cell.
  const auto flat = uniform_state(dual);
  const auto spike = inverse_fourier(flat);
  for (std::size_t i = 1; i < spike.coeffs.size(); ++i) CHECK(std::abs(spike.coeffs[i]) < 1e-12);
  CHECK(std::abs(spike.coeffs[0]) > 1.0);
}

TEST_CASE("applying the transform twice reflects") {
  std::mt19937_64 gen(10);
  const auto g = make_grid(BaseConfig(5, 6), 1, 1);
  const auto phi = random_state(g, gen);
  const auto twice = fourier(fourier(phi));
  CHECK(twice.grid == g);
  for (std::size_t i = 0; i < g.total_cells(); ++i) {
    const std::size_t j = g.axis_cell_of(-g.representative(i));
    CHECK(std::abs(twice.coeffs[i] - phi.coeffs[j]) < 1e-12);
  }
}
