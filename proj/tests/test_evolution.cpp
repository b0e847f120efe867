#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "padicq/error.hpp"
#include "padicq/evolution.hpp"
#include "padicq/transform.hpp"

using namespace padicq;

namespace {

StateVector random_state(const GridSpec& g, std::mt19937_64& gen) {
  std::normal_distribution<double> n;
  std::vector<cplx> c(g.total_cells());
  for (auto& z : c) z = {n(gen), n(gen)};
  return normalized(StateVector(g, c));
}

StateVector superpose(const StateVector& a, const StateVector& b) {
  std::vector<cplx> c(a.coeffs.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = (a.coeffs[i] + b.coeffs[i]) / std::sqrt(2.0);
  return StateVector(a.grid, c);
}

}  // namespace

TEST_CASE("eigenstates are stationary") {
  const auto g = make_grid(BaseConfig(3, 6), 1, 1);
  const auto H = hamiltonian(g, PlanckConstant{0}, potential_abs2(g));
  const auto spec = spectrum(H);
  const auto times = uniform_times(0.0, 10.0, 21);
  for (std::size_t k : {std::size_t{0}, std::size_t{4}}) {
    const auto& psi = spec.eigenvectors[k];
    const auto ev = evolve(psi, H, spec, PlanckConstant{0}, times);
    for (std::size_t t = 0; t < times.size(); ++t) {
      CHECK(std::abs(std::abs(inner(ev.states[t], psi)) - 1.0) < 1e-10);
      CHECK(ev.norms[t] == doctest::Approx(1.0).epsilon(1e-10));
      CHECK(ev.energies[t] == doctest::Approx(spec.eigenvalues[k]));
    }
    CHECK(average(H, psi) == doctest::Approx(spec.eigenvalues[k]));
  }
}

TEST_CASE("phase conventions") {
  const auto g = make_grid(BaseConfig(2, 6), 1, 1);
  const auto H = hamiltonian(g, PlanckConstant{0}, potential_abs2(g));
  const auto spec = spectrum(H);
  const auto& psi = spec.eigenvectors[1];
  const double lambda = spec.eigenvalues[1];
  const double t = 0.7;
  const std::vector<double> times{t};
  for (auto [sign, s] : {std::pair{PhaseSign::positive, 1.0}, std::pair{PhaseSign::conventional, -1.0}}) {
    for (int m : {0, 1}) {
      const PlanckConstant h{m};
      const auto ev = evolve(psi, H, spec, h, times, sign);
      const cplx want = std::exp(cplx(0, s * lambda * t / h.value(2)));
      CHECK(std::abs(inner(ev.states[0], psi) - want) < 1e-10);
    }
  }
}

TEST_CASE("superpositions revive and conserve energy") {
  const auto g = make_grid(BaseConfig(2, 6), 1, 1);
  const auto H = hamiltonian(g, PlanckConstant{0}, potential_abs2(g));
  const auto spec = spectrum(H);
  const auto phi0 = superpose(spec.eigenvectors[0], spec.eigenvectors[1]);
  const double period = 2 * std::numbers::pi / (spec.eigenvalues[1] - spec.eigenvalues[0]);
  const std::vector<double> times{0.0, period / 2, period, 3 * period};
  const auto ev = evolve(phi0, H, PlanckConstant{0}, times);
  CHECK(std::abs(std::abs(inner(ev.states[2], phi0)) - 1.0) < 1e-8);
  CHECK(std::abs(std::abs(inner(ev.states[3], phi0)) - 1.0) < 1e-8);
  CHECK(std::abs(inner(ev.states[1], phi0)) < 1e-8);

  std::mt19937_64 gen(7);
  const auto r = random_state(g, gen);
  const auto ev2 = evolve(r, H, PlanckConstant{0}, uniform_times(0, 5, 11));
  const auto H2 = make_operator(g, H.entries * H.entries, "H^2");
  for (std::size_t t = 0; t < ev2.states.size(); ++t) {
    CHECK(ev2.norms[t] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(ev2.energies[t] - ev2.energies[0]) < 1e-9);
    CHECK(std::abs(average(H2, ev2.states[t]) - average(H2, r)) < 1e-9);
  }

  StateVector unnorm = r;
  for (auto& z : unnorm.coeffs) z *= 2.0;
  CHECK_THROWS_AS(evolve(unnorm, H, PlanckConstant{0}, times), Error);
  Matrix bad = H.entries;
  bad(0, 1) += 1.0;
  CHECK_THROWS_AS(evolve(r, make_operator(g, bad, "bad"), PlanckConstant{0}, times), Error);
}

TEST_CASE("free plane waves keep a flat modulus") {
  const auto g = make_grid(BaseConfig(3, 6), 1, 1);
  const auto H = hamiltonian(g, PlanckConstant{0}, std::vector<double>(g.total_cells(), 0.0));
  const auto xi = g.dual().representative(5);
  const auto phi0 = normalized(plane_wave(xi, g));
  const auto ev = evolve(phi0, H, PlanckConstant{0}, uniform_times(0, 3, 7));
  const double flat = std::abs(phi0.coeffs[0]);
  for (const auto& s : ev.states)
    for (const auto& z : s.coeffs) CHECK(std::abs(std::abs(z) - flat) < 1e-10);
}

TEST_CASE("motivation average over a frequency ball") {
  // Grid value: the zero-frequency cell removes p^{l+1-2N}/(p+1).
  for (std::uint32_t p : {2u, 3u}) {
    const int N = 4;
    const auto g = make_grid(BaseConfig(p, 8), N, 0);
    const auto mxi = motivation_magnitude_multiplier(g, PlanckConstant{0});
    for (int l = 0; l <= 2; ++l) {
      const auto hat = normalized_indicator_state(g.dual(), Ball{PadicNumber::zero(g.config()), -l});
      const auto phi = inverse_fourier(hat);
      const double want = (1.0 / pow_p(p, l - 1) - pow_p(p, l + 1 - 2 * N)) / (p + 1.0);
      CHECK(average(mxi, phi) == doctest::Approx(want).epsilon(1e-12));
      CHECK(average(motivation_magnitude(g, PlanckConstant{0}), phi) == doctest::Approx(want).epsilon(1e-12));
    }
  }
  // Linear in the operator.
  std::mt19937_64 gen(1);
  const auto g = make_grid(BaseConfig(2, 6), 1, 2);
  const auto phi = random_state(g, gen);
  const auto A = position_magnitude(g);
  const auto B = neuron_activation(g);
  const auto C = make_operator(g, 2.0 * A.entries - 0.5 * B.entries, "mix");
  CHECK(average(C, phi) == doctest::Approx(2.0 * average(A, phi) - 0.5 * average(B, phi)));
}

TEST_CASE("entropy") {
  const auto g0 = make_grid(BaseConfig(3, 6), 0, 2);
  CHECK(entropy(g0, std::vector<double>(g0.total_cells(), 1.0)) == doctest::Approx(0.0));

  // All mass on one cell: P = p^M there, E = -log_p p^M = -M.
  std::vector<double> spike(g0.total_cells(), 0.0);
  spike[4] = 9.0;
  CHECK(entropy(g0, spike) == doctest::Approx(-2.0));

  for (std::uint32_t p : {2u, 3u}) {
    const auto g = make_grid(BaseConfig(p, 6), 0, 3);
    const auto q = position_norms(g);
    double mass = 0;
    for (double v : q) mass += v * g.cell_measure();
    const double c = 1.0 / mass;
    std::vector<double> P(q.size());
    std::vector<cplx> amp(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) {
      P[i] = c * q[i];
      amp[i] = std::sqrt(P[i]);
    }
    const StateVector phi(g, amp);
    const double avgA = average(neuron_activation(g), phi);
    CHECK(entropy(g, P) == doctest::Approx(avgA - std::log(c) / std::log(double(p))).epsilon(1e-10));
  }
  CHECK_THROWS_AS(entropy(g0, std::vector<double>(g0.total_cells(), 0.5)), Error);
  std::vector<double> neg(g0.total_cells(), 1.0);
  neg[0] = -1.0;
  neg[1] = 3.0;
  CHECK_THROWS_AS(entropy(g0, neg), Error);
}

TEST_CASE("Bohm potential") {
  const auto g = make_grid(BaseConfig(2, 6), 1, 2);
  const auto u = bohm_potential(uniform_state(g), PlanckConstant{0});
  for (std::size_t i = 0; i < u.W.size(); ++i) {
    CHECK(u.valid[i]);
    CHECK(std::abs(u.W[i]) < 1e-12);
  }

  std::mt19937_64 gen(2);
  const auto phi = random_state(g, gen);
  StateVector scaled = phi;
  for (auto& z : scaled.coeffs) z *= 5.0;
  const auto a = bohm_potential(phi, PlanckConstant{1});
  const auto b = bohm_potential(scaled, PlanckConstant{1});
  for (std::size_t i = 0; i < a.W.size(); ++i) CHECK(a.W[i] == doctest::Approx(b.W[i]));

  // Dense oracle: apply the D^2 matrix to R directly.
  const auto om = indicator_state(g, Ball{PadicNumber::zero(g.config()), 0});
  const auto D2 = vladimirov_multiplier(g, 2.0);
  const auto W = bohm_potential(om, PlanckConstant{1});
  const double h = pow_p(2, -1);
  for (std::size_t i = 0; i < g.total_cells(); ++i) {
    const double R = std::abs(om.coeffs[i]);
    if (R == 0) {
      CHECK_FALSE(W.valid[i]);
      CHECK(W.W[i] == 0.0);
      continue;
    }
    cplx d2r = 0;
    for (std::size_t j = 0; j < g.total_cells(); ++j)
      d2r += D2.entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * std::abs(om.coeffs[j]);
    CHECK(W.valid[i]);
    CHECK(W.W[i] == doctest::Approx(-h * h * d2r.real() / R));
  }
}

TEST_CASE("consciousness measure") {
  const auto g = make_grid(BaseConfig(2, 6), 1, 1);
  const auto times = uniform_times(0, 4, 41);
  const auto free_h = hamiltonian(g, PlanckConstant{0}, std::vector<double>(g.total_cells(), 0.0));
  for (double m : consciousness_measure(evolve(uniform_state(g), free_h, PlanckConstant{0}, times)))
    CHECK(std::abs(m) < 1e-12);

  const auto H = hamiltonian(g, PlanckConstant{0}, potential_abs2(g));
  const auto spec = spectrum(H);
  const auto eig = consciousness_measure(evolve(spec.eigenvectors[1], H, spec, PlanckConstant{0}, times));
  for (double m : eig) CHECK(m == doctest::Approx(eig[0]).epsilon(1e-8));

  // Superposition: spatial term plus a finite-difference time term, by hand.
  const auto phi0 = superpose(spec.eigenvectors[0], spec.eigenvectors[1]);
  const auto ev = evolve(phi0, H, spec, PlanckConstant{0}, times);
  const auto got = consciousness_measure(ev);
  const auto D = vladimirov_multiplier(g, 1.0);
  const double dt = times[1] - times[0];
  auto density = [&](std::size_t k) {
    std::vector<double> P(g.total_cells());
    for (std::size_t i = 0; i < P.size(); ++i) P[i] = std::norm(ev.states[k].coeffs[i]);
    return P;
  };
  for (std::size_t k = 0; k < times.size(); ++k) {
    const auto P = density(k);
    std::vector<double> dP;
    if (k == 0 || k + 1 == times.size()) {
      const auto a = density(k == 0 ? 0 : k - 1), b = density(k == 0 ? 1 : k);
      for (std::size_t i = 0; i < P.size(); ++i) dP.push_back((b[i] - a[i]) / dt);
    } else {
      const auto a = density(k - 1), b = density(k + 1);
      for (std::size_t i = 0; i < P.size(); ++i) dP.push_back((b[i] - a[i]) / (2 * dt));
    }
    double s = 0;
    for (std::size_t i = 0; i < P.size(); ++i) {
      cplx dp = 0;
      for (std::size_t j = 0; j < P.size(); ++j) dp += D.entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * P[j];
      s += (std::norm(dp) + dP[i] * dP[i]) * g.cell_measure();
    }
    CHECK(got[k] == doctest::Approx(s).epsilon(1e-10));
    CHECK(got[k] > 0);
  }

  EvolutionResult one = ev;
  one.times.resize(1);
  one.states.erase(one.states.begin() + 1, one.states.end());
  CHECK_THROWS_AS(consciousness_measure(one), Error);
}
