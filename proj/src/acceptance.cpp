#include "padicq/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

#include "padicq/dynamics.hpp"
#include "padicq/evolution.hpp"
#include "padicq/measurement.hpp"
#include "padicq/operators.hpp"
#include "padicq/transform.hpp"

namespace padicq::acceptance {

namespace {

struct Check {
  double deviation = 0.0;
  bool ok = true;
  std::ostringstream detail;

  void worst(double d) { deviation = std::max(deviation, d); }
  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << "[fail: " << what << "] ";
    }
  }
};

GridSpec grid(std::uint32_t p, int N, int M, int d = 1, std::size_t limit = kDefaultCellLimit) {
  return GridSpec::make(BaseConfig(p, std::max(1, N + M)), N, M, d, limit);
}

PadicNumber zero_of(const GridSpec& g) { return PadicNumber::zero(g.config()); }

StateVector random_state(const GridSpec& g, Rng& rng) {
  std::vector<cplx> c(g.total_cells());
  for (auto& z : c) z = {2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0};
  return normalized(StateVector(g, std::move(c), "random"));
}

double haar_distance(const StateVector& a, const StateVector& b) {
  std::vector<cplx> d(a.coeffs.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = a.coeffs[i] - b.coeffs[i];
  return std::sqrt(norm2(StateVector(a.grid, std::move(d))));
}

double max_cell_diff(const StateVector& a, const StateVector& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) m = std::max(m, std::abs(a.coeffs[i] - b.coeffs[i]));
  return m;
}

// ---------------------------------------------------------------------------

Check uniform_ball_law() {
  Check c;
  std::size_t balls = 0;
  for (std::uint32_t p : {2u, 3u, 5u}) {
    for (int M = 1; M <= 3; ++M) {
      const auto g = grid(p, 0, M);
      const auto phi = uniform_state(g);
      for (int r = -M; r <= 0; ++r) {
        for (std::size_t i = 0; i < g.cells_per_axis(); ++i) {
          const Ball b{g.representative(i), r};
          c.worst(std::abs(ball_probability(phi, b) - b.radius()));
          ++balls;
        }
      }
    }
  }
  c.detail << balls << " balls";
  return c;
}

Check motivation_average() {
  Check c;
  // Refined grids: the zero-frequency cell (symbol 0) hides
  // p^{l+1-2N}/(p+1) of the average, below 1e-11 at these depths.
  const std::pair<std::uint32_t, int> depth[] = {{2u, 19}, {3u, 13}, {5u, 9}};
  for (const auto& [p, N] : depth) {
    const auto g = grid(p, N, 0, 1, std::size_t{1} << 22);
    const auto mxi = motivation_magnitude_multiplier(g, PlanckConstant{0});
    for (int l = 0; l <= 2; ++l) {
      const auto hat = normalized_indicator_state(g.dual(), Ball{zero_of(g), -l});
      const auto phi = inverse_fourier(hat);
      const double got = average(mxi, phi);
      const double want = 1.0 / (std::pow(p, l - 1) * (p + 1.0));
      c.worst(std::abs(got - want));
      if (p == 2 && l == 1) c.detail << "p=2 l=1: " << std::setprecision(15) << got << " ";
    }
  }
  return c;
}

Check free_wave_eigenrelation() {
  Check c;
  for (std::uint32_t p : {2u, 3u}) {
    const auto g = grid(p, 2, 2);
    const auto mxi = motivation_magnitude(g, PlanckConstant{0});
    const auto dual = g.dual();
    for (std::size_t i = 0; i < dual.cells_per_axis(); ++i) {
      const auto xi = dual.representative(i);
      const auto wave = plane_wave(xi, g);
      auto expect = wave;
      for (auto& z : expect.coeffs) z *= norm(xi);
      c.worst(haar_distance(mxi.apply(wave), expect));
    }
  }
  return c;
}

Check spectrum_law() {
  Check c;
  const std::tuple<std::uint32_t, int, int> grids[] = {{2, 1, 2}, {2, 2, 2}, {3, 1, 1}, {3, 1, 2}, {5, 1, 1}};
  for (const double alpha : {1.0, 2.0}) {
    for (const auto& [p, N, M] : grids) {
      const auto g = grid(p, N, M);
      const auto spec = spectrum(vladimirov_multiplier(g, alpha));
      const auto law = vladimirov_spectrum_law(g, alpha);
      std::vector<double> expected;
      std::size_t total = 0;
      for (const auto& row : law) {
        expected.insert(expected.end(), row.multiplicity, row.eigenvalue);
        total += row.multiplicity;
      }
      c.require(total == g.total_cells(), "multiplicities sum to p^(N+M)");
      c.require(expected.size() == spec.eigenvalues.size(), "eigenvalue count");
      for (std::size_t i = 0; i < std::min(expected.size(), spec.eigenvalues.size()); ++i) {
        c.worst(std::abs(spec.eigenvalues[i] - expected[i]));
      }
      const auto report = degeneracy_report(spec);
      bool same = report.size() == law.size();
      for (std::size_t i = 0; same && i < law.size(); ++i) same = report[i].multiplicity == law[i].multiplicity;
      c.require(same, "degeneracy table p=" + std::to_string(p) + " N=" + std::to_string(N) + " M=" + std::to_string(M));
    }
  }
  c.detail << "10 grid/order pairs";
  return c;
}

Check operator_forms() {
  Check c;
  const std::tuple<std::uint32_t, int, int> grids[] = {{2, 1, 1}, {2, 2, 2}, {3, 1, 1}, {3, 1, 2}, {5, 1, 1}};
  double spot = 0.0, untailed = 1e300, infimum = 0.0;
  for (const auto& [p, N, M] : grids) {
    const auto g = grid(p, N, M);
    const auto mult = vladimirov_multiplier(g, 1.0, ZeroMode::galerkin);
    const auto integral = vladimirov_integral(g, true);
    c.worst((mult.entries - integral.entries).cwiseAbs().maxCoeff());
    untailed = std::min(untailed, (mult.entries - vladimirov_integral(g, false).entries).cwiseAbs().maxCoeff());
    infimum = std::max(infimum, (vladimirov_multiplier(g, 1.0).entries - integral.entries).cwiseAbs().maxCoeff());

    const auto omega = indicator_state(g, Ball{zero_of(g), 0});
    const double want = p / (p + 1.0);
    spot = std::max({spot, std::abs(mult.apply(omega).coeffs[0].real() - want),
                     std::abs(integral.apply(omega).coeffs[0].real() - want)});
  }
  c.require(spot <= 1e-10, "(D Omega_1)(0) = p/(p+1)");
  c.require(untailed > 1e-8, "dropping the tail must break agreement");
  c.detail << "spot " << std::setprecision(3) << spot << ", untailed gap " << untailed
           << ", zero-symbol multiplier gap " << infimum;
  return c;
}

Check fourier_suite() {
  Check c;
  Rng rng(derive_seed(2024, "acceptance.fourier"));
  double planch = 0.0, self = 0.0, fast = 0.0;
  const GridSpec random_grids[] = {grid(2, 2, 2), grid(3, 1, 2), grid(5, 1, 1), grid(2, 1, 1, 2)};
  for (int t = 0; t < 100; ++t) {
    const auto phi = random_state(random_grids[t % 4], rng);
    planch = std::max(planch, std::abs(std::sqrt(norm2(fourier(phi))) - std::sqrt(norm2(phi))));
  }
  for (std::uint32_t p : {2u, 3u}) {
    for (int n = 1; n <= 2; ++n) {
      const auto g = grid(p, n, n);
      const auto f = fourier(indicator_state(g, Ball{zero_of(g), 0}));
      self = std::max(self, max_cell_diff(f, indicator_state(g.dual(), Ball{zero_of(g), 0})));
    }
  }
  std::vector<GridSpec> basis_grids;
  for (int L = 1; L <= 8; ++L) basis_grids.push_back(grid(2, L / 2, L - L / 2));
  for (int L = 1; L <= 5; ++L) basis_grids.push_back(grid(3, L / 2, L - L / 2));
  for (int L = 1; L <= 3; ++L) basis_grids.push_back(grid(5, L / 2, L - L / 2));
  basis_grids.push_back(grid(2, 1, 1, 2));
  basis_grids.push_back(grid(2, 2, 2, 2));
  basis_grids.push_back(grid(3, 1, 0, 2));
  for (const auto& g : basis_grids) {
    for (std::size_t i = 0; i < g.total_cells(); ++i) {
      StateVector e(g);
      e.coeffs[i] = 1.0;
      fast = std::max(fast, max_cell_diff(fast_fourier(e), dense_fourier(e)));
    }
  }
  c.worst(std::max(planch, fast));
  c.require(self <= 1e-12, "Omega_1 self-dual");
  c.detail << std::setprecision(3) << "plancherel " << planch << ", self-dual " << self << ", fast-dense " << fast;
  return c;
}

Check uncertainty() {
  Check c;
  const auto g = grid(2, 2, 2);
  const auto comm = commutator(position_magnitude(g), motivation_magnitude(g, PlanckConstant{0}));
  const double n = operator_norm(comm);
  const Matrix icomm = comm.entries * cplx(0.0, 1.0);
  const double herm = (icomm - icomm.adjoint()).cwiseAbs().maxCoeff();
  c.require(n > 0.0, "commutator nonzero");
  c.require(herm <= 1e-12, "i[M_q,M_xi] Hermitian");
  c.worst(std::abs(n - kCommutatorNorm));
  c.detail << std::setprecision(17) << "||[M_q,M_xi]|| = " << n << std::setprecision(3) << ", hermitian defect " << herm;
  return c;
}

Check entropy_identity() {
  Check c;
  for (std::uint32_t p : {2u, 3u}) {
    for (const auto& [N, M] : {std::pair{0, 3}, std::pair{1, 2}}) {
      const auto g = grid(p, N, M);
      const auto mask = ball_mask(g, Ball{zero_of(g), 0});
      std::vector<double> P(g.total_cells());
      for (std::size_t i = 0; i < P.size(); ++i) P[i] = mask[i] ? g.axis_norm(i) : 0.0;
      const double cnorm = 1.0 / integrate(g, P);
      std::vector<cplx> amp(P.size());
      for (std::size_t i = 0; i < P.size(); ++i) {
        P[i] *= cnorm;
        amp[i] = std::sqrt(P[i]);
      }
      const double e = entropy(g, P);
      const double a = average(neuron_activation(g), StateVector(g, amp));
      c.worst(std::abs(e - (a - std::log(cnorm) / std::log(static_cast<double>(p)))));
      if (N == 0 && M == 3) c.detail << "p=" << p << " c=" << std::setprecision(10) << cnorm << " ";
    }
  }
  return c;
}

Check evolution() {
  Check c;
  const auto g = grid(2, 2, 2);
  const PlanckConstant h{1};
  const auto H = hamiltonian(g, h, potential_abs2(g));
  const auto spec = spectrum(H);
  Rng rng(derive_seed(2024, "acceptance.evolution"));
  const auto times = uniform_times(0.0, 25.0, 1000);

  const auto run = evolve(random_state(g, rng), H, spec, h, times);
  double dn = 0.0, de = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    dn = std::max(dn, std::abs(run.norms[k] - 1.0));
    de = std::max(de, std::abs(run.energies[k] - run.energies[0]));
  }
  c.require(dn <= 1e-10, "norm conservation");
  c.require(de <= 1e-9, "energy conservation");

  double fid = 0.0;
  for (const std::size_t k : {std::size_t{0}, std::size_t{5}, g.total_cells() - 1}) {
    const auto& psi = spec.eigenvectors[k];
    const auto e = evolve(psi, H, spec, h, times);
    for (const auto& s : e.states) fid = std::max(fid, std::abs(std::abs(inner(psi, s)) - 1.0));
  }
  c.require(fid <= 1e-10, "eigenstate fidelity");

  const auto& g0 = spec.groups[0];
  const auto& g1 = spec.groups[1];
  const auto& a = spec.eigenvectors[g0.first];
  const auto& b = spec.eigenvectors[g1.first];
  std::vector<cplx> sup(a.coeffs.size());
  for (std::size_t i = 0; i < sup.size(); ++i) sup[i] = (a.coeffs[i] + b.coeffs[i]) / std::numbers::sqrt2;
  const StateVector phi0(g, std::move(sup), "superposition");
  const double gap = spec.eigenvalues[g1.first] - spec.eigenvalues[g0.first];
  const double T = 2.0 * std::numbers::pi * h.value(2) / gap;
  const double t_probe[] = {0.0, T / 2, T};
  const auto rev = evolve(phi0, H, spec, h, t_probe);
  const double revival = std::abs(std::abs(inner(phi0, rev.states[2])) - 1.0);
  c.require(revival <= 1e-8, "revival at 2 pi h / gap");
  c.require(std::abs(inner(phi0, rev.states[1])) < 1e-6, "half-period orthogonality");
  c.worst(std::max({dn, de, fid, revival}));
  c.detail << std::setprecision(3) << "norm " << dn << ", energy " << de << ", fidelity " << fid << ", revival "
           << revival;
  return c;
}

Check ground_state() {
  Check c;
  for (const auto& [p, N, M] : {std::tuple{2u, 2, 2}, std::tuple{3u, 1, 1}}) {
    const auto g = grid(p, N, M);
    const auto spec = spectrum(hamiltonian(g, PlanckConstant{0}, potential_abs2(g)));
    const double l0 = spec.eigenvalues[0];
    const double l1 = spec.eigenvalues[1];
    const double rel = (l1 - l0) / std::max(1.0, std::abs(l0));
    c.require(spec.groups[0].multiplicity == 1, "simple ground level");
    c.require(rel > 1e-6, "relative gap");
    c.detail << "p=" << p << " gap " << std::setprecision(6) << rel << " ";
  }
  return c;
}

Check measurement() {
  Check c;
  // Eigenstates are measured with certainty.
  {
    const auto g = grid(3, 1, 1);
    const auto spec = spectrum(vladimirov_multiplier(g, 1.0));
    Rng rng(derive_seed(2024, "acceptance.eigen"));
    for (std::size_t k = 0; k < g.total_cells(); ++k) {
      const auto out = projective_measure(spec.eigenvectors[k], spec, rng);
      c.worst(std::abs(out.probability - 1.0));
      c.worst(std::abs(out.eigenvalue - spec.eigenvalues[k]));
      const auto again = projective_measure(out.collapsed, spec, rng);
      c.require(again.group == out.group, "repeat measurement reproduces the outcome");
    }
  }
  // Born histograms, 3 sigma per level.
  {
    const auto g = grid(2, 2, 2);
    const auto spec = spectrum(vladimirov_multiplier(g, 1.0));
    Rng rng(derive_seed(2024, "acceptance.born"));
    const auto phi = random_state(g, rng);
    std::vector<StateVector> states{phi};
    {
      const auto& a = spec.eigenvectors[spec.groups[1].first];
      const auto& b = spec.eigenvectors[spec.groups[2].first];
      std::vector<cplx> s(a.coeffs.size());
      for (std::size_t i = 0; i < s.size(); ++i) s[i] = (a.coeffs[i] + b.coeffs[i]) / std::numbers::sqrt2;
      states.emplace_back(g, std::move(s), "equal");
    }
    constexpr int trials = 10000;
    for (const auto& st : states) {
      const auto w = born_distribution(st, spec);
      std::vector<int> hist(w.size(), 0);
      for (int t = 0; t < trials; ++t) ++hist[projective_measure(st, spec, rng).group];
      for (std::size_t k = 0; k < w.size(); ++k) {
        const double sigma = std::sqrt(trials * w[k] * (1.0 - w[k]));
        const double dev = std::abs(hist[k] - trials * w[k]);
        c.require(dev <= 3.0 * sigma + 1e-9, st.label + " level " + std::to_string(k) + " within 3 sigma");
      }
    }
  }
  // RDS stream.
  {
    const auto g = grid(2, 1, 1);
    std::vector<Observable> family{Observable::make(position_magnitude(g)),
                                   Observable::make(motivation_magnitude(g, PlanckConstant{0})),
                                   Observable::make(neuron_activation(g))};
    RdsConfig cfg;
    cfg.seed = 7;
    cfg.memory_depth = 3;
    const auto phi = uniform_state(g);
    auto dump = [&](const RdsConfig& k) {
      std::ostringstream os;
      write_records_jsonl(os, rds_stream(phi, family, k, 200));
      return os.str();
    };
    const auto first = dump(cfg);
    c.require(first == dump(cfg), "byte-identical stream for a fixed seed");
    const auto recs = rds_stream(phi, family, cfg, 200);
    for (std::size_t i = 0; i + 1 < recs.size(); i += 2) {
      const bool both = (recs[i].observable == "M_q" && recs[i + 1].observable == "M_xi") ||
                        (recs[i].observable == "M_xi" && recs[i + 1].observable == "M_q");
      c.require(!both, "M_q and M_xi co-selected");
      if (recs[i].observable == "M_q" && recs[i + 1].observable == "A") {
        const double want = recs[i].outcome == 0.0 ? g.resolution() + 1.0 : -std::log2(recs[i].outcome);
        c.require(std::abs(recs[i + 1].outcome - want) < 1e-9, "A outcome consistent with M_q outcome");
      }
    }
  }
  return c;
}

Check dynamics() {
  Check c;
  struct Case {
    std::uint32_t p;
    int K;
    std::int64_t x0;
    FixedPointClass expect;
  };
  for (const Case& k : {Case{2, 64, 3, FixedPointClass::attracting}, Case{3, 40, 4, FixedPointClass::neutral}}) {
    const BaseConfig cfg(k.p, k.K);
    const DynSpec spec{cfg, 2, PadicNumber::from_integer(k.x0, cfg), 60, std::nullopt};
    const auto r = iterate(spec);
    c.require(r.classification == k.expect, "classification p=" + std::to_string(k.p));
    c.require(r.observed == k.expect, "orbit behaviour p=" + std::to_string(k.p));
    std::size_t informative = 0;
    while (informative < r.distance_valuations.size() && r.distance_valuations[informative]) ++informative;
    c.require(informative >= 51, "at least 50 exact steps");

    // Exact oracle: x0^(2^k) mod p^K by repeated squaring in 128-bit integers.
    unsigned __int128 mod = 1;
    for (int i = 0; i < k.K; ++i) mod *= k.p;
    unsigned __int128 x = static_cast<unsigned __int128>(k.x0) % mod;
    for (std::size_t step = 0; step < r.points.size(); ++step) {
      unsigned __int128 got = 0, place = 1;
      for (int i = 0; i < k.K; ++i) {
        got += place * r.points[step].digit_at(i);
        place *= k.p;
      }
      c.require(got % mod == x, "orbit matches x0^(2^k) mod p^K");
      if (got % mod != x) break;
      // mod <= 2^64, so x*x fits in 128 bits.
      x = (x * x) % mod;
    }
    const DynSpec wider{BaseConfig(k.p, k.K + 1), 2, PadicNumber::from_integer(k.x0, BaseConfig(k.p, k.K + 1)), 60,
                        std::nullopt};
    c.require(iterate(wider).classification == r.classification, "classification stable under K -> K+1");
    c.detail << "p=" << k.p << " " << to_string(r.observed) << " over " << informative - 1 << " steps ";
  }
  return c;
}

double consciousness_oracle(const EvolutionResult& run, std::size_t k) {
  // Dense D applied to P, Riemann sums, explicit finite differences.
  const auto& g = run.states[k].grid;
  const auto D = vladimirov_multiplier(g, 1.0);
  const auto P = run.states[k].probabilities();
  const std::size_t lo = k == 0 ? 0 : k - 1;
  const std::size_t hi = k + 1 == run.states.size() ? k : k + 1;
  const auto Plo = run.states[lo].probabilities();
  const auto Phi = run.states[hi].probabilities();
  double s = 0.0;
  for (std::size_t i = 0; i < P.size(); ++i) {
    cplx dp = 0.0;
    for (std::size_t j = 0; j < P.size(); ++j) dp += D.entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * P[j];
    const double dt = (Phi[i] - Plo[i]) / (run.times[hi] - run.times[lo]);
    s += std::norm(dp) + dt * dt;
  }
  return s * g.cell_measure();
}

Check consciousness() {
  Check c;
  const auto times = uniform_times(0.0, 4.0, 81);
  {
    const auto g = grid(2, 1, 1);
    const auto H = hamiltonian(g, PlanckConstant{0}, std::vector<double>(g.total_cells(), 0.0));
    const auto m = consciousness_measure(evolve(uniform_state(g), H, PlanckConstant{0}, times));
    double worst = 0.0;
    for (const double v : m) worst = std::max(worst, std::abs(v));
    c.require(worst <= 1e-10, "uniform stationary state gives 0");
    c.worst(worst);
  }
  {
    const auto g = grid(2, 1, 1);
    const auto H = hamiltonian(g, PlanckConstant{0}, potential_abs2(g));
    const auto spec = spectrum(H);
    const auto& a = spec.eigenvectors[spec.groups[0].first];
    const auto& b = spec.eigenvectors[spec.groups[1].first];
    std::vector<cplx> s(a.coeffs.size());
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = (a.coeffs[i] + b.coeffs[i]) / std::numbers::sqrt2;
    const auto run = evolve(StateVector(g, std::move(s)), H, spec, PlanckConstant{0}, times);
    const auto m = consciousness_measure(run);
    double oracle_gap = 0.0, total = 0.0;
    for (std::size_t k = 0; k < m.size(); ++k) {
      oracle_gap = std::max(oracle_gap, std::abs(m[k] - consciousness_oracle(run, k)));
      total += m[k];
      c.require(m[k] >= 0.0, "nonnegative");
    }
    const double mean = total / static_cast<double>(m.size());
    c.require(mean > 0.0, "superposition gives a positive value");
    c.require(oracle_gap <= 1e-9, "agrees with dense oracle");
    c.worst(std::abs(mean - kConsciousnessValue));
    c.detail << std::setprecision(17) << "mean M = " << mean << std::setprecision(3) << ", oracle gap " << oracle_gap;
  }
  return c;
}

Check schmidt() {
  Check c;
  const auto g = grid(2, 0, 2);
  Rng rng(derive_seed(2024, "acceptance.schmidt"));
  for (int t = 0; t < 10; ++t) {
    const auto r = schmidt_analysis(tensor_product(random_state(g, rng), random_state(g, rng)));
    c.require(r.rank == 1, "product state rank 1");
  }
  const auto cfg = g.config();
  const auto e1 = normalized_indicator_state(g, Ball{PadicNumber::zero(cfg), -1});
  const auto e2 = normalized_indicator_state(g, Ball{PadicNumber::from_integer(1, cfg), -1});
  const auto a = tensor_product(e1, e1);
  const auto b = tensor_product(e2, e2);
  std::vector<cplx> mix(a.coeffs.size());
  for (std::size_t i = 0; i < mix.size(); ++i) mix[i] = (a.coeffs[i] + b.coeffs[i]) / std::numbers::sqrt2;
  const auto r = schmidt_analysis(StateVector(a.grid, std::move(mix)));
  c.require(r.rank == 2, "mixed-basis vector rank 2");
  c.worst(std::abs(r.singular_values[0] - 1.0 / std::numbers::sqrt2));
  c.worst(std::abs(r.singular_values[1] - 1.0 / std::numbers::sqrt2));
  return c;
}

struct Entry {
  int id;
  const char* name;
  double tolerance;
  bool quick;
  std::function<Check()> run;
};

}  // namespace

std::vector<CriterionResult> run_suite(bool quick) {
  const std::vector<Entry> entries{
      {1, "uniform state: P(q in B_r(a)) = r", 1e-12, true, uniform_ball_law},
      {2, "<M_xi> = 1/(p^(l-1)(p+1))", 1e-10, true, motivation_average},
      {3, "M_xi plane waves: eigenvalue |xi|_p", 1e-10, false, free_wave_eigenrelation},
      {4, "spectrum law of D^alpha", 1e-9, true, spectrum_law},
      {5, "multiplier vs integral form of D", 1e-8, false, operator_forms},
      {6, "Fourier: Plancherel, self-duality, fast = dense", 1e-10, false, fourier_suite},
      {7, "[M_q, M_xi] nonzero, pinned norm", 1e-9, false, uncertainty},
      {8, "entropy identity E_P = <A> - log_p c", 1e-10, false, entropy_identity},
      {9, "evolution: unitarity, stationarity, revival", 1e-8, false, evolution},
      {10, "ground level of h^2 D^2 + |q|^2 is simple", 0.0, false, ground_state},
      {11, "measurement: certainty, Born, RDS", 1e-12, false, measurement},
      {12, "x^2 dynamics: attracting at 2, Siegel at 3", 0.0, false, dynamics},
      {13, "consciousness measure", 1e-9, false, consciousness},
      {14, "Schmidt ranks and singular values", 1e-10, false, schmidt},
  };
  std::vector<CriterionResult> out;
  for (const auto& e : entries) {
    if (quick && !e.quick) continue;
    CriterionResult r{e.id, e.name, false, 0.0, e.tolerance, {}, 0.0};
    const auto t0 = std::chrono::steady_clock::now();
    try {
      auto check = e.run();
      r.deviation = check.deviation;
      r.passed = check.ok && check.deviation <= e.tolerance;
      r.detail = check.detail.str();
    } catch (const std::exception& ex) {
      r.detail = std::string("exception: ") + ex.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.push_back(std::move(r));
  }
  return out;
}

void print_table(std::ostream& os, const std::vector<CriterionResult>& results) {
  const auto flags = os.flags();
  const auto prec = os.precision();
  for (const auto& r : results) {
    os << (r.passed ? "PASS" : "FAIL") << "  " << std::setw(2) << r.id << "  " << std::left << std::setw(48) << r.name
       << std::right << "  dev=" << std::scientific << std::setprecision(2) << r.deviation << "  tol=" << r.tolerance
       << std::defaultfloat << std::setprecision(3) << "  " << r.seconds << "s";
    if (!r.detail.empty()) os << "  " << r.detail;
    os << '\n';
  }
  os.flags(flags);
  os.precision(prec);
}

}  // namespace padicq::acceptance
