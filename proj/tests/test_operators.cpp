#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <tuple>

#include "padicq/error.hpp"
#include "padicq/operators.hpp"
#include "padicq/transform.hpp"

using namespace padicq;

namespace {

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

// F^{-1} diag(s) F applied to every basis vector, through the public transforms.
Matrix multiplier_by_columns(const GridSpec& g, const std::vector<double>& s) {
  const auto n = static_cast<Eigen::Index>(g.total_cells());
  Matrix A(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    StateVector e(g);
    e.coeffs[static_cast<std::size_t>(k)] = 1;
    auto f = fourier(e, FourierMethod::dense);
    for (std::size_t i = 0; i < s.size(); ++i) f.coeffs[i] *= s[i];
    const auto back = inverse_fourier(f, FourierMethod::dense);
    for (Eigen::Index i = 0; i < n; ++i) A(i, k) = back.coeffs[static_cast<std::size_t>(i)];
  }
  return A;
}

std::map<long, std::size_t> multiplicities(const SpectralDecomposition& s) {
  std::map<long, std::size_t> m;
  for (const auto& g : s.groups) m[std::lround(g.eigenvalue * 1e6)] += g.multiplicity;
  return m;
}

std::size_t max_multiplicity(const SpectralDecomposition& s) {
  std::size_t m = 0;
  for (const auto& g : s.groups) m = std::max(m, g.multiplicity);
  return m;
}

}  // namespace

TEST_CASE("Vladimirov symbol and matrix") {
  for (auto [p, N, M] : {std::tuple{2u, 1, 2}, std::tuple{3u, 1, 1}, std::tuple{5u, 0, 2}}) {
    const auto g = make_grid(BaseConfig(p, 6), N, M);
    for (double alpha : {1.0, 2.0, 0.5}) {
      const auto s = vladimirov_symbol(g, alpha);
      const auto dual = g.dual();
      for (std::size_t i = 0; i < s.size(); ++i) CHECK(s[i] == doctest::Approx(std::pow(dual.axis_norm(i), alpha)));
      const auto D = vladimirov_multiplier(g, alpha);
      CHECK(D.hermitian);
      CHECK(max_abs(D.entries - multiplier_by_columns(g, s)) < 1e-12);

      // Spectrum: the symbol values, with the closed-form multiplicities.
      const auto spec = spectrum(D);
      const auto law = vladimirov_spectrum_law(g, alpha);
      const auto rep = degeneracy_report(spec);
      REQUIRE(rep.size() == law.size());
      for (std::size_t k = 0; k < law.size(); ++k) {
        CHECK(rep[k].eigenvalue == doctest::Approx(law[k].eigenvalue));
        CHECK(rep[k].multiplicity == law[k].multiplicity);
      }
      std::size_t total = 0;
      for (const auto& r : law) total += r.multiplicity;
      CHECK(total == g.total_cells());
    }
  }
}

TEST_CASE("Fourier conjugation diagonalizes D") {
  const auto g = make_grid(BaseConfig(3, 6), 1, 1);
  const auto D = vladimirov(g, 1.0);
  std::mt19937_64 gen(3);
  std::normal_distribution<double> n;
  std::vector<cplx> c(g.total_cells());
  for (auto& z : c) z = {n(gen), n(gen)};
  const StateVector phi(g, c);
  const auto lhs = fourier(D.apply(phi));
  const auto rhs = fourier(phi);
  for (std::size_t i = 0; i < c.size(); ++i) CHECK(std::abs(lhs.coeffs[i] - D.symbol[i] * rhs.coeffs[i]) < 1e-12);
  // Constants are annihilated under the infimum convention.
  const auto u = D.apply(uniform_state(g));
  for (const auto& z : u.coeffs) CHECK(std::abs(z) < 1e-12);
}

TEST_CASE("integral form matches the multiplier") {
  for (auto [p, N, M] : {std::tuple{2u, 1, 2}, std::tuple{3u, 1, 1}, std::tuple{2u, 2, 2}}) {
    const auto g = make_grid(BaseConfig(p, 6), N, M);
    const auto I = vladimirov_integral(g, true);
    const auto G = vladimirov_multiplier(g, 1.0, ZeroMode::galerkin);
    CHECK(max_abs(I.entries - G.entries) < 1e-10);
    // Without the tail the two differ by a constant shift of the diagonal.
    const auto U = vladimirov_integral(g, false);
    const double tail = p * p / (p + 1.0) * vladimirov_tail(p, N);
    CHECK(max_abs(I.entries - U.entries - tail * Matrix::Identity(I.entries.rows(), I.entries.cols())) < 1e-12);
    // Off-diagonal kernel, entry by entry.
    for (std::size_t i = 0; i < g.total_cells(); ++i)
      for (std::size_t j = 0; j < g.total_cells(); ++j) {
        if (i == j) continue;
        const double dist = distance(g.representative(i), g.representative(j));
        const double want = -(p * p / (p + 1.0)) * g.cell_measure() / (dist * dist);
        CHECK(std::abs(U.entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) - want) < 1e-12);
      }
    // (D Omega_1)(0) = p/(p+1)
    const auto om = indicator_state(g, Ball{PadicNumber::zero(g.config()), 0});
    CHECK(I.apply(om).coeffs[0].real() == doctest::Approx(p / (p + 1.0)).epsilon(1e-10));
  }
  CHECK(vladimirov_tail(3, 2) == doctest::Approx(1.0 / 27.0));
}

TEST_CASE("position magnitude") {
  for (auto [p, N, M] : {std::tuple{2u, 1, 3}, std::tuple{3u, 0, 2}, std::tuple{5u, 1, 1}}) {
    const auto g = make_grid(BaseConfig(p, 6), N, M);
    const auto Q = position_magnitude(g);
    CHECK(Q.hermitian);
    CHECK(max_abs(Q.entries - Matrix(Q.entries.diagonal().asDiagonal())) == 0.0);
    // Eigen-spheres: |q| = p^k on (p-1) p^{k+M-1} cells.
    const auto spec = spectrum(Q);
    const auto m = multiplicities(spec);
    for (int k = -M + 1; k <= N; ++k)
      CHECK(m.at(std::lround(pow_p(p, k) * 1e6)) == static_cast<std::size_t>((p - 1) * pow_p(p, k + M - 1)));
    CHECK(m.at(0) == 1);
    // <M_q> on the normalized indicator of Z_p, summed over spheres.
    const auto om = normalized_indicator_state(g, Ball{PadicNumber::zero(g.config()), 0});
    const double mean = inner(Q.apply(om), om).real();
    CHECK(mean == doctest::Approx(p / (p + 1.0) * (1 - pow_p(p, -2 * M))).epsilon(1e-12));
    const auto com = commutator(Q, Q);
    CHECK(max_abs(com.entries) == 0.0);
  }
}

TEST_CASE("motivation magnitude and uncertainty") {
  const auto g = make_grid(BaseConfig(2, 6), 2, 2);
  for (int m : {0, 1, 2}) {
    const PlanckConstant h{m};
    const auto Mx = motivation_magnitude(g, h);
    const auto D = vladimirov_multiplier(g, 1.0);
    CHECK(max_abs(Mx.entries - h.value(2) * D.entries) < 1e-12);
  }
  const auto Q = position_magnitude(g);
  const auto C = commutator(Q, motivation_magnitude(g, PlanckConstant{0}));
  // [A, B] is anti-Hermitian for Hermitian A, B and nonzero here.
  CHECK(max_abs(C.entries + C.entries.adjoint()) < 1e-12);
  CHECK(operator_norm(C) > 0.1);
  const Eigen::JacobiSVD<Matrix> svd(C.entries);
  CHECK(operator_norm(C) == doctest::Approx(svd.singularValues()(0)));
}

TEST_CASE("neuron activation") {
  const auto g = make_grid(BaseConfig(3, 6), 1, 2);
  const auto A = neuron_activation(g);
  for (std::size_t i = 1; i < g.total_cells(); ++i)
    CHECK(A.entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real() ==
          doctest::Approx(-std::log(g.axis_norm(i)) / std::log(3.0)));
  CHECK(A.entries(0, 0).real() == 3.0);
  CHECK(neuron_activation(g, 7.5).entries(0, 0).real() == 7.5);
}

TEST_CASE("Hamiltonian spectra") {
  const auto g = make_grid(BaseConfig(2, 6), 1, 2);
  const std::vector<double> zero(g.total_cells(), 0.0);
  for (int m : {0, 1}) {
    const PlanckConstant h{m};
    const auto H = hamiltonian(g, h, zero);
    const auto spec = spectrum(H);
    const auto law = vladimirov_spectrum_law(g, 2.0);
    const auto rep = degeneracy_report(spec);
    REQUIRE(rep.size() == law.size());
    for (std::size_t k = 0; k < law.size(); ++k) {
      CHECK(rep[k].eigenvalue == doctest::Approx(h.value(2) * h.value(2) * law[k].eigenvalue));
      CHECK(rep[k].multiplicity == law[k].multiplicity);
    }
  }
  // A confining potential splits the free levels; the ground state is simple.
  const auto V = potential_abs2(g);
  const auto free = spectrum(hamiltonian(g, PlanckConstant{0}, zero));
  const auto conf = spectrum(hamiltonian(g, PlanckConstant{0}, V));
  CHECK(conf.groups.size() > free.groups.size());
  CHECK(conf.groups.front().multiplicity == 1);
  CHECK(max_multiplicity(conf) < max_multiplicity(free));

  // Two axes: the Kronecker sum has every pairwise sum of one-axis levels.
  const auto g1 = make_grid(BaseConfig(3, 6), 1, 0);
  const auto g2 = make_grid(BaseConfig(3, 6), 1, 0, 2);
  const auto e1 = spectrum(hamiltonian(g1, PlanckConstant{0}, std::vector<double>(g1.total_cells(), 0.0))).eigenvalues;
  std::vector<double> sums;
  for (double a : e1)
    for (double b : e1) sums.push_back(a + b);
  std::sort(sums.begin(), sums.end());
  const auto e2 = spectrum(hamiltonian(g2, PlanckConstant{0}, std::vector<double>(g2.total_cells(), 0.0))).eigenvalues;
  REQUIRE(e2.size() == sums.size());
  for (std::size_t i = 0; i < sums.size(); ++i) CHECK(e2[i] == doctest::Approx(sums[i]));

  std::vector<cplx> cv(g.total_cells(), cplx(1, 0));
  CHECK_NOTHROW(hamiltonian(g, PlanckConstant{0}, std::span<const cplx>(cv)));
  cv[3] = cplx(1, 0.5);
  CHECK_THROWS_AS(hamiltonian(g, PlanckConstant{0}, std::span<const cplx>(cv)), Error);
  CHECK_THROWS_AS(hamiltonian(g, PlanckConstant{0}, std::vector<double>(3, 0.0)), Error);
}

TEST_CASE("degeneracy grows with p") {
  // Comparable depth, the largest level holds (p-1)/p of all cells.
  const auto g2 = make_grid(BaseConfig(2, 6), 1, 1);
  const auto g5 = make_grid(BaseConfig(5, 6), 1, 1);
  const auto s2 = spectrum(vladimirov_multiplier(g2, 1.0));
  const auto s5 = spectrum(vladimirov_multiplier(g5, 1.0));
  CHECK(max_multiplicity(s2) == 2);
  CHECK(max_multiplicity(s5) == 20);
}

TEST_CASE("spectral decomposition") {
  const auto g = make_grid(BaseConfig(3, 6), 1, 1);
  const auto H = hamiltonian(g, PlanckConstant{0}, potential_abs2(g));
  const auto spec = spectrum(H);
  CHECK(spec.max_residual < 1e-10);
  CHECK(spec.orthonormality_defect < 1e-10);
  for (std::size_t i = 0; i < spec.eigenvectors.size(); ++i) {
    const auto& v = spec.eigenvectors[i];
    CHECK(norm2(v) == doctest::Approx(1.0));
    const auto Hv = H.apply(v);
    for (std::size_t k = 0; k < g.total_cells(); ++k) CHECK(std::abs(Hv.coeffs[k] - spec.eigenvalues[i] * v.coeffs[k]) < 1e-9);
    if (i > 0) CHECK(std::abs(inner(v, spec.eigenvectors[i - 1])) < 1e-10);
  }
  for (std::size_t i = 1; i < spec.eigenvalues.size(); ++i) CHECK(spec.eigenvalues[i] >= spec.eigenvalues[i - 1]);

  const std::vector<double> ev{0.0, 1.0, 1.0 + 1e-9, 1.0 + 2e-9, 4.0, 4.5};
  const auto groups = group_levels(ev, 1e-7);
  REQUIRE(groups.size() == 4);
  CHECK(groups[1].first == 1);
  CHECK(groups[1].multiplicity == 3);
  CHECK(groups[1].eigenvalue == doctest::Approx(1.0 + 1e-9));

  Matrix bad = H.entries;
  bad(0, 1) += cplx(0.5, 0.0);
  const auto op = make_operator(g, bad, "bad");
  CHECK_FALSE(op.hermitian);
  try {
    spectrum(op);
    FAIL("expected not_hermitian");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::not_hermitian);
  }
}

TEST_CASE("potential presets") {
  CHECK(parse_potential("none") == PotentialPreset::none);
  CHECK(parse_potential("abs2") == PotentialPreset::abs2);
  CHECK_THROWS_AS(parse_potential("harmonic"), Error);
  const auto g = make_grid(BaseConfig(2, 6), 1, 1);
  const auto V = potential_abs2(g);
  for (std::size_t i = 0; i < V.size(); ++i) CHECK(V[i] == doctest::Approx(g.axis_norm(i) * g.axis_norm(i)));
}
