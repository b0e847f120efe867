#include "padicq/evolution.hpp"

#include <cmath>

#include "padicq/error.hpp"
#include "padicq/kernels.hpp"

namespace padicq {

EvolutionResult evolve(const StateVector& phi0, const OperatorMatrix& H, PlanckConstant h,
                       std::span<const double> times, PhaseSign sign) {
  return evolve(phi0, H, spectrum(H), h, times, sign);
}

EvolutionResult evolve(const StateVector& phi0, const OperatorMatrix& H, const SpectralDecomposition& spec,
                       PlanckConstant h, std::span<const double> times, PhaseSign sign) {
  require_same_grid(phi0.grid, H.grid);
  require_same_grid(phi0.grid, spec.grid);
  if (!phi0.is_normalized(1e-10)) throw Error(ErrorKind::invalid_input, "initial state is not normalized");
  if (!H.hermitian) throw Error(ErrorKind::not_hermitian, "Hamiltonian '" + H.label + "' is not Hermitian");

  const std::size_t n = phi0.coeffs.size();
  std::vector<cplx> c(n);
  for (std::size_t k = 0; k < n; ++k) c[k] = inner(phi0, spec.eigenvectors[k]);
  const double hv = h.value(phi0.grid.p());
  const double s = static_cast<double>(static_cast<int>(sign));

  EvolutionResult out;
  out.times.assign(times.begin(), times.end());
  for (const double t : times) {
    std::vector<cplx> coeffs(n);
    for (std::size_t k = 0; k < n; ++k) {
      const cplx w = std::polar(1.0, s * spec.eigenvalues[k] * t / hv) * c[k];
      kernels::axpy(w, spec.eigenvectors[k].coeffs, coeffs);
    }
    StateVector phi(phi0.grid, std::move(coeffs), phi0.label + "(t)", phi0.h);
    out.norms.push_back(std::sqrt(norm2(phi)));
    out.energies.push_back(average(H, phi));
    out.states.push_back(std::move(phi));
  }
  return out;
}

std::vector<double> uniform_times(double t0, double t1, std::size_t count) {
  if (count == 0) return {};
  if (count == 1) return {t0};
  std::vector<double> t(count);
  const double dt = (t1 - t0) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) t[i] = t0 + dt * static_cast<double>(i);
  return t;
}

double average(const OperatorMatrix& a, const StateVector& phi) { return inner(a.apply(phi), phi).real(); }

double average(const FourierMultiplier& a, const StateVector& phi) { return inner(a.apply(phi), phi).real(); }

double entropy(const GridSpec& grid, std::span<const double> P) {
  if (P.size() != grid.total_cells()) throw Error(ErrorKind::invalid_input, "density does not match the grid size");
  for (const double v : P) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw Error(ErrorKind::invalid_input, "density must be finite and >= 0");
  }
  const double total = integrate(grid, P);
  if (std::abs(total - 1.0) > 1e-10) {
    throw Error(ErrorKind::invalid_input, "density integrates to " + std::to_string(total) + ", not 1");
  }
  const double logp = std::log(static_cast<double>(grid.p()));
  std::vector<double> f(P.size());
  for (std::size_t i = 0; i < P.size(); ++i) f[i] = P[i] > 0.0 ? -P[i] * std::log(P[i]) / logp : 0.0;
  return integrate(grid, f);
}

namespace {

FourierMultiplier laplacian(const GridSpec& grid) {
  std::vector<double> s(grid.total_cells(), 0.0);
  for (int a = 0; a < grid.dim(); ++a) {
    const auto sa = vladimirov_symbol(grid, 2.0, ZeroMode::infimum, a);
    for (std::size_t i = 0; i < s.size(); ++i) s[i] += sa[i];
  }
  return {grid, std::move(s), "Delta"};
}

}  // namespace

BohmPotential bohm_potential(const StateVector& phi, PlanckConstant h, double eps) {
  const auto& g = phi.grid;
  std::vector<cplx> r(phi.coeffs.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = std::abs(phi.coeffs[i]);
  const auto lap = laplacian(g).apply(StateVector(g, r));
  const double h2 = std::pow(h.value(g.p()), 2);
  BohmPotential out{std::vector<double>(r.size(), 0.0), std::vector<bool>(r.size(), false)};
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (r[i].real() <= eps) continue;
    out.W[i] = -h2 * lap.coeffs[i].real() / r[i].real();
    out.valid[i] = true;
  }
  return out;
}

std::vector<double> consciousness_measure(const EvolutionResult& evolution) {
  const auto& states = evolution.states;
  const auto& t = evolution.times;
  if (states.size() < 2 || t.size() != states.size()) {
    throw Error(ErrorKind::invalid_input, "consciousness measure needs at least two time samples");
  }
  const double dt = t[1] - t[0];
  for (std::size_t k = 1; k < t.size(); ++k) {
    if (std::abs((t[k] - t[k - 1]) - dt) > 1e-9 * std::max(1.0, std::abs(dt))) {
      throw Error(ErrorKind::invalid_input, "consciousness measure needs a uniform time grid");
    }
  }
  if (!(dt != 0.0)) throw Error(ErrorKind::invalid_input, "time step is zero");
  const auto& g = states.front().grid;
  const auto D = vladimirov(g, 1.0);
  const std::size_t n = g.total_cells();

  std::vector<std::vector<double>> P;
  P.reserve(states.size());
  for (const auto& s : states) P.push_back(s.probabilities());

  std::vector<double> out(states.size());
  std::vector<double> density(n);
  for (std::size_t k = 0; k < states.size(); ++k) {
    std::vector<cplx> pk(P[k].begin(), P[k].end());
    const auto dp = D.apply(StateVector(g, std::move(pk))).coeffs;
    const std::size_t lo = k == 0 ? 0 : k - 1;
    const std::size_t hi = k + 1 == states.size() ? k : k + 1;
    const double span = dt * static_cast<double>(hi - lo);
    for (std::size_t i = 0; i < n; ++i) {
      const double dpdt = (P[hi][i] - P[lo][i]) / span;
      density[i] = std::norm(dp[i]) + dpdt * dpdt;
    }
    out[k] = integrate(g, density);
  }
  return out;
}

}  // namespace padicq
