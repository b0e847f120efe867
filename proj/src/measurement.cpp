#include "padicq/measurement.hpp"

#include <cmath>
#include <numeric>
#include <ostream>

#include "json.hpp"
#include "padicq/error.hpp"
#include "padicq/kernels.hpp"

namespace padicq {

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw Error(ErrorKind::invalid_input, "empty range");
  // Rejection keeps the draw unbiased.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return x % n;
}

std::uint64_t derive_seed(std::uint64_t master, std::string_view tag) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char c : tag) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  std::uint64_t z = (master ^ h) + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Observable Observable::make(OperatorMatrix op, double tau) {
  auto spec = spectrum(op, tau);
  std::string label = op.label;
  return {std::move(label), std::move(op), std::move(spec)};
}

namespace {

std::vector<cplx> amplitudes(const StateVector& phi, const SpectralDecomposition& spec) {
  require_same_grid(phi.grid, spec.grid);
  std::vector<cplx> c(spec.eigenvectors.size());
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = inner(phi, spec.eigenvectors[k]);
  return c;
}

}  // namespace

std::vector<double> born_distribution(const StateVector& phi, const SpectralDecomposition& spec) {
  const auto c = amplitudes(phi, spec);
  std::vector<double> w;
  w.reserve(spec.groups.size());
  for (const auto& g : spec.groups) {
    double s = 0.0;
    for (std::size_t k = g.first; k < g.first + g.multiplicity; ++k) s += std::norm(c[k]);
    w.push_back(s);
  }
  return w;
}

MeasurementOutcome projective_measure(const StateVector& phi, const SpectralDecomposition& spec, Rng& rng) {
  if (!phi.is_normalized(1e-9)) throw Error(ErrorKind::invalid_input, "measured state is not normalized");
  const auto c = amplitudes(phi, spec);
  const auto w = born_distribution(phi, spec);
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  const double u = rng.uniform() * total;
  std::size_t pick = w.size() - 1;
  double acc = 0.0;
  for (std::size_t g = 0; g < w.size(); ++g) {
    acc += w[g];
    if (u < acc && w[g] > 0.0) {
      pick = g;
      break;
    }
  }
  while (w[pick] <= 0.0 && pick > 0) --pick;

  const auto& grp = spec.groups[pick];
  std::vector<cplx> out(phi.coeffs.size());
  for (std::size_t k = grp.first; k < grp.first + grp.multiplicity; ++k) {
    kernels::axpy(c[k], spec.eigenvectors[k].coeffs, out);
  }
  const double scale = 1.0 / std::sqrt(w[pick]);
  for (auto& z : out) z *= scale;
  return {grp.eigenvalue, w[pick] / total, pick, StateVector(phi.grid, std::move(out), phi.label + "|collapsed", phi.h)};
}

std::vector<std::vector<std::size_t>> commuting_subsets(std::span<const Observable> family, std::size_t subset_size,
                                                        double tol) {
  const std::size_t n = family.size();
  if (subset_size == 0 || subset_size > n) {
    throw Error(ErrorKind::invalid_input, "subset size must be between 1 and the family size");
  }
  std::vector<std::vector<bool>> commute(n, std::vector<bool>(n, true));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      require_same_grid(family[i].op.grid, family[j].op.grid);
      const Matrix c = family[i].op.entries * family[j].op.entries - family[j].op.entries * family[i].op.entries;
      commute[i][j] = commute[j][i] = c.norm() <= tol;
    }
  }
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> pick;
  auto extend = [&](auto&& self, std::size_t from) -> void {
    if (pick.size() == subset_size) {
      out.push_back(pick);
      return;
    }
    for (std::size_t i = from; i < n; ++i) {
      bool ok = true;
      for (const auto j : pick) ok = ok && commute[i][j];
      if (!ok) continue;
      pick.push_back(i);
      self(self, i + 1);
      pick.pop_back();
    }
  };
  extend(extend, 0);
  return out;
}

std::vector<MeasurementRecord> rds_stream(const StateVector& phi0, std::span<const Observable> family,
                                          const RdsConfig& cfg, std::size_t steps) {
  const auto subsets = commuting_subsets(family, cfg.subset_size);
  if (subsets.empty()) {
    throw Error(ErrorKind::invalid_input,
                "no commuting subset of size " + std::to_string(cfg.subset_size) + " in the observable family");
  }
  const std::size_t s = subsets.size();
  std::vector<std::vector<double>> T(s, std::vector<double>(s, 1.0 / static_cast<double>(s)));
  if (!cfg.transition.empty()) {
    if (cfg.transition.size() != s) {
      throw Error(ErrorKind::invalid_input, "transition matrix must be " + std::to_string(s) + "x" + std::to_string(s));
    }
    for (std::size_t i = 0; i < s; ++i) {
      if (cfg.transition[i].size() != s) throw Error(ErrorKind::invalid_input, "transition matrix row has wrong length");
      double row = 0.0;
      for (const double w : cfg.transition[i]) {
        if (!(w >= 0.0)) throw Error(ErrorKind::invalid_input, "transition weights must be nonnegative");
        row += w;
      }
      if (row <= 0.0) throw Error(ErrorKind::invalid_input, "transition matrix row " + std::to_string(i) + " is zero");
      for (std::size_t j = 0; j < s; ++j) T[i][j] = cfg.transition[i][j] / row;
    }
  }
  if (cfg.memory_depth == 0) throw Error(ErrorKind::invalid_input, "memory depth must be >= 1");

  Rng select(derive_seed(cfg.seed, "rds.select"));
  Rng outcome(derive_seed(cfg.seed, "rds.outcome"));
  std::vector<std::size_t> history;
  std::vector<MeasurementRecord> records;
  StateVector phi = phi0;
  std::vector<double> w(s);
  for (std::size_t step = 0; step < steps; ++step) {
    std::fill(w.begin(), w.end(), history.empty() ? 1.0 : 0.0);
    double decay = 1.0;
    for (std::size_t j = 0; j < std::min(cfg.memory_depth, history.size()); ++j) {
      const auto& row = T[history[history.size() - 1 - j]];
      for (std::size_t k = 0; k < s; ++k) w[k] += decay * row[k];
      decay *= cfg.decay;
    }
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    const double u = select.uniform() * total;
    std::size_t chosen = s - 1;
    double acc = 0.0;
    for (std::size_t k = 0; k < s; ++k) {
      acc += w[k];
      if (u < acc) {
        chosen = k;
        break;
      }
    }
    history.push_back(chosen);

    for (std::size_t pos = 0; pos < subsets[chosen].size(); ++pos) {
      const auto& obs = family[subsets[chosen][pos]];
      auto m = projective_measure(phi, obs.spectral, outcome);
      phi = m.collapsed;
      records.push_back({step, obs.label, m.eigenvalue, m.probability,
                         std::to_string(step) + "." + std::to_string(pos), std::move(m.collapsed)});
    }
  }
  return records;
}

void write_records_jsonl(std::ostream& os, std::span<const MeasurementRecord> records) {
  for (const auto& r : records) {
    nlohmann::ordered_json j;
    j["step"] = r.step;
    j["observable"] = r.observable;
    j["outcome"] = r.outcome;
    j["probability"] = r.probability;
    j["state_ref"] = r.state_ref;
    os << j.dump() << '\n';
  }
}

SchmidtResult schmidt_analysis(const StateVector& phi, double tau) {
  const auto& g = phi.grid;
  if (g.dim() != 2) throw Error(ErrorKind::invalid_input, "Schmidt analysis needs a two-axis grid");
  const auto n = static_cast<Eigen::Index>(g.cells_per_axis());
  Eigen::MatrixXcd c(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) c(i, j) = phi.coeffs[static_cast<std::size_t>(i * n + j)];
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(c);
  const double scale = std::sqrt(g.cell_measure());
  SchmidtResult out;
  for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k) {
    const double s = svd.singularValues()(k) * scale;
    out.singular_values.push_back(s);
    if (s > tau) ++out.rank;
  }
  return out;
}

StateVector tensor_product(const StateVector& a, const StateVector& b) {
  require_same_grid(a.grid, b.grid);
  if (a.grid.dim() != 1) throw Error(ErrorKind::invalid_input, "tensor factors must live on one-axis grids");
  const auto& g1 = a.grid;
  const auto g2 = GridSpec::make(g1.config(), g1.support(), g1.resolution(), 2, std::max(g1.cell_limit(), g1.total_cells() * g1.total_cells()));
  const std::size_t n = g1.total_cells();
  std::vector<cplx> c(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) c[i * n + j] = a.coeffs[i] * b.coeffs[j];
  }
  return StateVector(g2, std::move(c), a.label + "x" + b.label, a.h);
}

}  // namespace padicq
