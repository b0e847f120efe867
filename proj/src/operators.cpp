#include "padicq/operators.hpp"

#include <algorithm>
#include <cmath>

#include "padicq/error.hpp"
#include "padicq/kernels.hpp"
#include "padicq/transform.hpp"

namespace padicq {

namespace {

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

// Average of |xi|^alpha over the d-dimensional ball of radius p^{-N}:
// sum_{j>=N} p^{-j alpha} (p^{-jd} - p^{-(j+1)d}) / p^{-Nd}.
double zero_cell_average(std::uint32_t p, int N, double alpha, int d) {
  const double pd = std::pow(static_cast<double>(p), -d);
  return (1.0 - pd) * std::pow(static_cast<double>(p), -N * alpha) /
         (1.0 - std::pow(static_cast<double>(p), -(alpha + d)));
}

// Per-axis lookup for the group difference of two cells.
struct AxisGroup {
  explicit AxisGroup(const GridSpec& g) : n(g.cells_per_axis()), coset(n), index(n) {
    for (std::size_t i = 0; i < n; ++i) {
      coset[i] = g.coset_integer(i);
      index[coset[i]] = i;
    }
  }
  std::size_t diff(std::size_t x, std::size_t y) const { return index[(coset[x] + n - coset[y]) % n]; }

  std::size_t n;
  std::vector<std::size_t> coset;
  std::vector<std::size_t> index;
};

}  // namespace

StateVector OperatorMatrix::apply(const StateVector& phi) const {
  require_same_grid(grid, phi.grid);
  std::vector<cplx> out(phi.coeffs.size());
  kernels::matvec(entries.data(), size(), size(), phi.coeffs, out);
  return StateVector(grid, std::move(out), label + "(" + phi.label + ")", phi.h);
}

double OperatorMatrix::hermitian_defect() const { return max_abs(entries - entries.adjoint()); }

OperatorMatrix make_operator(const GridSpec& grid, Matrix entries, std::string label) {
  if (entries.rows() != entries.cols() || static_cast<std::size_t>(entries.rows()) != grid.total_cells()) {
    throw Error(ErrorKind::invalid_input, "operator matrix does not match the grid size");
  }
  OperatorMatrix op{grid, std::move(entries), false, std::move(label)};
  op.hermitian = op.hermitian_defect() <= 1e-12 * std::max(1.0, max_abs(op.entries));
  return op;
}

StateVector FourierMultiplier::apply(const StateVector& phi) const {
  require_same_grid(grid, phi.grid);
  auto hat = fourier(phi);
  for (std::size_t i = 0; i < symbol.size(); ++i) hat.coeffs[i] *= symbol[i];
  auto out = inverse_fourier(hat);
  out.label = label + "(" + phi.label + ")";
  out.h = phi.h;
  return out;
}

OperatorMatrix FourierMultiplier::to_matrix() const {
  // Multipliers commute with translations, so column 0 determines the rest:
  // A(x, y) = A(x - y, 0).
  StateVector delta(grid);
  delta.coeffs[0] = 1.0;
  const auto col = apply(delta).coeffs;

  const AxisGroup group(grid);
  const std::size_t n = grid.total_cells();
  const auto d = static_cast<std::size_t>(grid.dim());
  std::vector<std::vector<std::size_t>> idx(n);
  for (std::size_t f = 0; f < n; ++f) idx[f] = grid.axis_indices(f);

  Matrix m(n, n);
  std::vector<std::size_t> diff(d);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      for (std::size_t a = 0; a < d; ++a) diff[a] = group.diff(idx[x][a], idx[y][a]);
      m(x, y) = col[grid.flat_index(diff)];
    }
  }
  // A real symbol gives a Hermitian operator; remove rounding asymmetry.
  Matrix h = (m + m.adjoint()) * 0.5;
  return make_operator(grid, std::move(h), label);
}

std::vector<double> vladimirov_symbol(const GridSpec& grid, double alpha, ZeroMode zero, int axis) {
  if (!(alpha > 0.0)) throw Error(ErrorKind::invalid_input, "Vladimirov order alpha must be > 0");
  if (axis >= grid.dim()) throw Error(ErrorKind::invalid_input, "axis out of range");
  const GridSpec dual = grid.dual();
  const int zero_dim = axis < 0 ? grid.dim() : 1;
  const double zero_value =
      zero == ZeroMode::infimum ? 0.0 : zero_cell_average(grid.p(), dual.resolution(), alpha, zero_dim);
  std::vector<double> s(dual.total_cells());
  for (std::size_t f = 0; f < s.size(); ++f) {
    const auto idx = dual.axis_indices(f);
    double r = 0.0;
    if (axis < 0) {
      for (const auto i : idx) r = std::max(r, dual.axis_norm(i));
    } else {
      r = dual.axis_norm(idx[static_cast<std::size_t>(axis)]);
    }
    s[f] = r == 0.0 ? zero_value : std::pow(r, alpha);
  }
  return s;
}

FourierMultiplier vladimirov(const GridSpec& grid, double alpha, ZeroMode zero) {
  return {grid, vladimirov_symbol(grid, alpha, zero), alpha == 1.0 ? "D" : "D^" + std::to_string(alpha)};
}

OperatorMatrix vladimirov_multiplier(const GridSpec& grid, double alpha, ZeroMode zero) {
  return vladimirov(grid, alpha, zero).to_matrix();
}

double vladimirov_tail(std::uint32_t p, int N) { return pow_p(p, -(N + 1)); }

OperatorMatrix vladimirov_integral(const GridSpec& grid, bool tail_corrected) {
  if (grid.dim() != 1) throw Error(ErrorKind::invalid_input, "integral form of D is implemented for d = 1");
  const double p = grid.p();
  const double cp = p * p / (p + 1.0);
  const double cell = grid.cell_measure();
  const AxisGroup group(grid);
  const std::size_t n = grid.total_cells();
  Matrix m = Matrix::Zero(n, n);
  for (std::size_t x = 0; x < n; ++x) {
    double row = 0.0;
    for (std::size_t y = 0; y < n; ++y) {
      if (x == y) continue;
      const double r = grid.axis_norm(group.diff(x, y));
      const double w = cp * cell / (r * r);
      m(x, y) = -w;
      row += w;
    }
    m(x, x) = row + (tail_corrected ? cp * vladimirov_tail(grid.p(), grid.support()) : 0.0);
  }
  return make_operator(grid, std::move(m), tail_corrected ? "D_int" : "D_int_untailed");
}

std::vector<double> position_norms(const GridSpec& grid) {
  std::vector<double> out(grid.total_cells());
  for (std::size_t f = 0; f < out.size(); ++f) {
    double r = 0.0;
    for (const auto i : grid.axis_indices(f)) r = std::max(r, grid.axis_norm(i));
    out[f] = r;
  }
  return out;
}

namespace {

OperatorMatrix diagonal(const GridSpec& grid, std::span<const double> values, std::string label) {
  Matrix m = Matrix::Zero(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return make_operator(grid, std::move(m), std::move(label));
}

}  // namespace

OperatorMatrix position_magnitude(const GridSpec& grid) { return diagonal(grid, position_norms(grid), "M_q"); }

FourierMultiplier motivation_magnitude_multiplier(const GridSpec& grid, PlanckConstant h, ZeroMode zero) {
  auto s = vladimirov_symbol(grid, 1.0, zero);
  const double hv = h.value(grid.p());
  for (auto& v : s) v *= hv;
  return {grid, std::move(s), "M_xi"};
}

OperatorMatrix motivation_magnitude(const GridSpec& grid, PlanckConstant h, ZeroMode zero) {
  return motivation_magnitude_multiplier(grid, h, zero).to_matrix();
}

OperatorMatrix neuron_activation(const GridSpec& grid, std::optional<double> cutoff) {
  const double c = cutoff.value_or(grid.resolution() + 1.0);
  auto v = position_norms(grid);
  const double logp = std::log(static_cast<double>(grid.p()));
  for (auto& x : v) x = x == 0.0 ? c : -std::round(std::log(x) / logp);
  return diagonal(grid, v, "A");
}

OperatorMatrix commutator(const OperatorMatrix& a, const OperatorMatrix& b) {
  require_same_grid(a.grid, b.grid);
  Matrix c = a.entries * b.entries - b.entries * a.entries;
  return make_operator(a.grid, std::move(c), "[" + a.label + "," + b.label + "]");
}

double operator_norm(const OperatorMatrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(a.entries);
  return svd.singularValues()(0);
}

PotentialPreset parse_potential(const std::string& name) {
  if (name == "none") return PotentialPreset::none;
  if (name == "abs2") return PotentialPreset::abs2;
  if (name == "custom") return PotentialPreset::custom;
  throw Error(ErrorKind::invalid_input, "unknown potential preset '" + name + "' (none|abs2|custom)");
}

std::vector<double> potential_abs2(const GridSpec& grid) {
  auto v = position_norms(grid);
  for (auto& x : v) x *= x;
  return v;
}

OperatorMatrix hamiltonian(const GridSpec& grid, PlanckConstant h, std::span<const double> V) {
  if (V.size() != grid.total_cells()) throw Error(ErrorKind::invalid_input, "potential does not match the grid size");
  for (const double v : V) {
    if (!std::isfinite(v)) throw Error(ErrorKind::invalid_input, "potential must be finite");
  }
  const auto axis_grid = GridSpec::make(grid.config(), grid.support(), grid.resolution(), 1, grid.cell_limit());
  const Matrix d2 = vladimirov_multiplier(axis_grid, 2.0).entries;
  const double h2 = std::pow(h.value(grid.p()), 2);
  const std::size_t n = grid.total_cells();
  const std::size_t na = grid.cells_per_axis();
  const auto d = static_cast<std::size_t>(grid.dim());

  Matrix m = Matrix::Zero(n, n);
  std::vector<std::size_t> y_idx(d);
  for (std::size_t x = 0; x < n; ++x) {
    const auto x_idx = grid.axis_indices(x);
    for (std::size_t a = 0; a < d; ++a) {
      y_idx = x_idx;
      for (std::size_t j = 0; j < na; ++j) {
        y_idx[a] = j;
        m(x, grid.flat_index(y_idx)) += h2 * d2(x_idx[a], j);
      }
    }
    m(x, x) += V[x];
  }
  return make_operator(grid, std::move(m), "H");
}

OperatorMatrix hamiltonian(const GridSpec& grid, PlanckConstant h, std::span<const cplx> V) {
  std::vector<double> re(V.size());
  for (std::size_t i = 0; i < V.size(); ++i) {
    if (V[i].imag() != 0.0) {
      throw Error(ErrorKind::invalid_input, "potential must be real; cell " + std::to_string(i) + " has imaginary part");
    }
    re[i] = V[i].real();
  }
  return hamiltonian(grid, h, std::span<const double>(re));
}

std::vector<DegeneracyGroup> group_levels(std::span<const double> ascending, double tau) {
  std::vector<DegeneracyGroup> groups;
  double sum = 0.0;
  for (std::size_t i = 0; i < ascending.size(); ++i) {
    const double v = ascending[i];
    if (!groups.empty()) {
      const double prev = ascending[i - 1];
      if (std::abs(v - prev) <= tau * std::max({1.0, std::abs(v), std::abs(prev)})) {
        auto& g = groups.back();
        ++g.multiplicity;
        sum += v;
        g.eigenvalue = sum / static_cast<double>(g.multiplicity);
        continue;
      }
    }
    groups.push_back({v, i, 1});
    sum = v;
  }
  return groups;
}

SpectralDecomposition spectrum(const OperatorMatrix& op, double tau) {
  const double scale = std::max(1.0, max_abs(op.entries));
  if (op.hermitian_defect() > 1e-12 * scale) {
    throw Error(ErrorKind::not_hermitian, "operator '" + op.label + "' is not Hermitian (defect " +
                                              std::to_string(op.hermitian_defect()) + ")");
  }
  const std::size_t n = op.size();
  Eigen::VectorXd values;
  Eigen::MatrixXcd vectors;
  if (op.entries.imag().cwiseAbs().maxCoeff() <= 1e-14 * scale) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(op.entries.real());
    values = es.eigenvalues();
    vectors = es.eigenvectors().cast<cplx>();
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(op.entries);
    values = es.eigenvalues();
    vectors = es.eigenvectors();
  }

  SpectralDecomposition out{op.grid, {}, {}, {}, tau, 0.0, 0.0};
  out.eigenvalues.assign(values.data(), values.data() + n);
  const Eigen::MatrixXcd a = op.entries;
  for (std::size_t k = 0; k < n; ++k) {
    auto v = vectors.col(static_cast<Eigen::Index>(k));
    // Fix the free phase: largest component real and positive.
    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    v *= std::conj(v(imax)) / std::abs(v(imax));
    out.max_residual = std::max(out.max_residual, (a * v - values(static_cast<Eigen::Index>(k)) * v).norm());
  }
  out.orthonormality_defect = max_abs(vectors.adjoint() * vectors - Eigen::MatrixXcd::Identity(n, n));

  const double haar = std::sqrt(1.0 / op.grid.cell_measure());
  out.eigenvectors.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<cplx> c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = vectors(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) * haar;
    out.eigenvectors.emplace_back(op.grid, std::move(c), op.label + ".v" + std::to_string(k));
  }
  out.groups = group_levels(out.eigenvalues, tau);
  return out;
}

std::vector<DegeneracyRow> degeneracy_report(const SpectralDecomposition& spec) {
  std::vector<DegeneracyRow> rows;
  rows.reserve(spec.groups.size());
  for (const auto& g : spec.groups) rows.push_back({g.eigenvalue, g.multiplicity});
  return rows;
}

std::vector<DegeneracyRow> vladimirov_spectrum_law(const GridSpec& grid, double alpha) {
  if (grid.dim() != 1) throw Error(ErrorKind::invalid_input, "closed-form spectrum is stated for d = 1");
  const std::size_t p = grid.p();
  const int N = grid.support();
  std::vector<DegeneracyRow> rows{{0.0, 1}};
  for (int k = -N + 1; k <= grid.resolution(); ++k) {
    std::size_t mult = p - 1;
    for (int i = 0; i < k + N - 1; ++i) mult *= p;
    rows.push_back({std::pow(static_cast<double>(p), alpha * k), mult});
  }
  return rows;
}

}  // namespace padicq
