#include "padicq/grid.hpp"

#include <algorithm>
#include <cmath>

#include "padicq/error.hpp"
#include "padicq/kernels.hpp"

namespace padicq {

namespace {

std::size_t ipow(std::size_t base, int e) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

// Number of cells per axis, or 0 when p^L alone overflows the limit.
std::size_t checked_pow(std::size_t base, int e, std::size_t limit) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) {
    if (r > limit / base) return 0;
    r *= base;
  }
  return r;
}

}  // namespace

PadicNumber PlanckConstant::as_padic(const BaseConfig& cfg) const {
  const std::uint32_t one = 1;
  return PadicNumber::from_digits(cfg, -exponent, std::span<const std::uint32_t>(&one, 1));
}

GridSpec::GridSpec(const BaseConfig& cfg, int N, int M, int d, std::size_t limit)
    : cfg_(cfg.p(), std::max(cfg.digits(), N + M)), N_(N), M_(M), d_(d), limit_(limit) {
  per_axis_ = ipow(cfg.p(), N + M);
  total_ = ipow(per_axis_, d);
}

GridSpec GridSpec::make(const BaseConfig& cfg, int N, int M, int d, std::size_t cell_limit) {
  if (d < 1) throw Error(ErrorKind::invalid_input, "grid dimension d must be >= 1");
  if (N + M < 1) throw Error(ErrorKind::invalid_input, "grid needs N + M >= 1");
  const std::size_t per_axis = checked_pow(cfg.p(), N + M, cell_limit);
  const std::size_t total = per_axis == 0 ? 0 : checked_pow(per_axis, d, cell_limit);
  if (total == 0) {
    throw Error(ErrorKind::size_limit, "grid p=" + std::to_string(cfg.p()) + " N=" + std::to_string(N) +
                                           " M=" + std::to_string(M) + " d=" + std::to_string(d) +
                                           " exceeds the cell limit " + std::to_string(cell_limit));
  }
  return GridSpec(cfg, N, M, d, cell_limit);
}

GridSpec make_grid(const BaseConfig& cfg, int N, int M, int d, std::size_t cell_limit) {
  return GridSpec::make(cfg, N, M, d, cell_limit);
}

double GridSpec::cell_measure() const { return pow_p(p(), -d_ * M_); }
double GridSpec::domain_measure() const { return pow_p(p(), d_ * N_); }

GridSpec GridSpec::dual() const { return GridSpec(cfg_, M_, N_, d_, limit_); }

std::vector<std::size_t> GridSpec::axis_indices(std::size_t flat) const {
  std::vector<std::size_t> out(static_cast<std::size_t>(d_));
  for (int a = d_ - 1; a >= 0; --a) {
    out[static_cast<std::size_t>(a)] = flat % per_axis_;
    flat /= per_axis_;
  }
  return out;
}

std::size_t GridSpec::flat_index(std::span<const std::size_t> axis) const {
  std::size_t flat = 0;
  for (const auto i : axis) flat = flat * per_axis_ + i;
  return flat;
}

std::vector<std::uint32_t> GridSpec::axis_digits(std::size_t axis_index) const {
  const int L = depth();
  std::vector<std::uint32_t> digits(static_cast<std::size_t>(L));
  for (int t = L - 1; t >= 0; --t) {
    digits[static_cast<std::size_t>(t)] = static_cast<std::uint32_t>(axis_index % p());
    axis_index /= p();
  }
  return digits;
}

PadicNumber GridSpec::representative(std::size_t axis_index) const {
  return PadicNumber::from_digits(cfg_, -N_, axis_digits(axis_index));
}

std::size_t GridSpec::axis_cell_of(const PadicNumber& x) const {
  if (x.is_zero()) return 0;
  if (x.valuation() < -N_) {
    throw Error(ErrorKind::not_representable, "point " + x.to_string() + " lies outside the grid domain");
  }
  std::size_t index = 0;
  for (int pos = -N_; pos < M_; ++pos) index = index * p() + x.digit_at(pos);
  return index;
}

double GridSpec::axis_norm(std::size_t axis_index) const {
  if (axis_index == 0) return 0.0;
  return pow_p(p(), -axis_valuation(axis_index));
}

int GridSpec::axis_valuation(std::size_t axis_index) const {
  if (axis_index == 0) throw Error(ErrorKind::invalid_input, "the zero cell has no valuation");
  int place = -1;
  while (axis_index > 0) {
    axis_index /= p();
    ++place;
  }
  // Digit place h of the index holds position M-1-h.
  return M_ - 1 - place;
}

std::size_t GridSpec::coset_integer(std::size_t axis_index) const {
  std::size_t x = 0;
  for (int t = 0; t < depth(); ++t) {
    x = x * p() + axis_index % p();
    axis_index /= p();
  }
  return x;
}

std::size_t GridSpec::axis_index_of_integer(std::size_t coset) const { return coset_integer(coset); }

std::vector<Cell> cells(const GridSpec& grid) {
  std::vector<PadicNumber> reps;
  reps.reserve(grid.cells_per_axis());
  for (std::size_t i = 0; i < grid.cells_per_axis(); ++i) reps.push_back(grid.representative(i));
  std::vector<Cell> out;
  out.reserve(grid.total_cells());
  for (std::size_t flat = 0; flat < grid.total_cells(); ++flat) {
    Cell c{flat, {}};
    for (const auto i : grid.axis_indices(flat)) c.representative.push_back(reps[i]);
    out.push_back(std::move(c));
  }
  return out;
}

void require_same_grid(const GridSpec& a, const GridSpec& b) {
  if (!(a == b)) throw Error(ErrorKind::config_mismatch, "operands live on different grids");
}

StateVector::StateVector(const GridSpec& g, std::vector<cplx> c, std::string lbl, PlanckConstant planck)
    : grid(g), coeffs(std::move(c)), label(std::move(lbl)), h(planck) {
  if (coeffs.size() != grid.total_cells()) {
    throw Error(ErrorKind::invalid_input, "state has " + std::to_string(coeffs.size()) + " coefficients, grid has " +
                                              std::to_string(grid.total_cells()) + " cells");
  }
  for (const auto& z : coeffs) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw Error(ErrorKind::invalid_input, "state coefficients must be finite");
    }
  }
}

bool StateVector::is_normalized(double tol) const { return std::abs(norm2(*this) - 1.0) <= tol; }

std::vector<double> StateVector::probabilities() const {
  std::vector<double> out(coeffs.size());
  std::transform(coeffs.begin(), coeffs.end(), out.begin(), [](const cplx& z) { return std::norm(z); });
  return out;
}

std::vector<double> StateVector::phases() const {
  std::vector<double> out(coeffs.size());
  std::transform(coeffs.begin(), coeffs.end(), out.begin(), [](const cplx& z) { return std::arg(z); });
  return out;
}

cplx integrate(const StateVector& f) {
  cplx s{};
  for (const auto& z : f.coeffs) s += z;
  return s * f.grid.cell_measure();
}

double integrate(const GridSpec& grid, std::span<const double> values) {
  if (values.size() != grid.total_cells()) {
    throw Error(ErrorKind::config_mismatch, "cell values do not match the grid size");
  }
  double s = 0.0;
  for (const double v : values) s += v;
  return s * grid.cell_measure();
}

cplx inner(const StateVector& phi, const StateVector& psi) {
  require_same_grid(phi.grid, psi.grid);
  return kernels::dotc(phi.coeffs, psi.coeffs) * phi.grid.cell_measure();
}

double norm2(const StateVector& phi) { return kernels::norm2(phi.coeffs) * phi.grid.cell_measure(); }

StateVector normalized(const StateVector& phi) {
  const double n = std::sqrt(norm2(phi));
  if (n == 0.0) throw Error(ErrorKind::invalid_input, "cannot normalize the zero state");
  StateVector out = phi;
  for (auto& z : out.coeffs) z /= n;
  return out;
}

std::vector<bool> ball_mask(const GridSpec& grid, const Ball& ball) {
  const int N = grid.support();
  const int M = grid.resolution();
  const int r = ball.radius_exponent;
  if (ball.center.config().p() != grid.p()) {
    throw Error(ErrorKind::config_mismatch, "ball and grid use different primes");
  }
  if (r < -M) {
    throw Error(ErrorKind::not_representable, "ball radius p^" + std::to_string(r) + " is below the grid resolution p^" +
                                                  std::to_string(-M));
  }
  if (r > N) {
    throw Error(ErrorKind::not_representable, "ball radius p^" + std::to_string(r) + " exceeds the grid domain p^" +
                                                  std::to_string(N));
  }
  const std::size_t center = grid.axis_cell_of(ball.center);
  // Members share the digits at positions -N .. -r-1, the top N-r index digits.
  const std::size_t block = [&] {
    std::size_t b = 1;
    for (int i = 0; i < grid.depth() - (N - r); ++i) b *= grid.p();
    return b;
  }();
  std::vector<bool> mask(grid.cells_per_axis(), false);
  const std::size_t start = center / block * block;
  std::fill(mask.begin() + static_cast<std::ptrdiff_t>(start), mask.begin() + static_cast<std::ptrdiff_t>(start + block), true);
  return mask;
}

StateVector indicator_state(const GridSpec& grid, std::span<const Ball> balls) {
  if (balls.size() != static_cast<std::size_t>(grid.dim())) {
    throw Error(ErrorKind::invalid_input, "need one ball per grid axis");
  }
  std::vector<std::vector<bool>> masks;
  for (const auto& b : balls) masks.push_back(ball_mask(grid, b));
  std::vector<cplx> c(grid.total_cells());
  for (std::size_t flat = 0; flat < c.size(); ++flat) {
    const auto idx = grid.axis_indices(flat);
    bool in = true;
    for (std::size_t a = 0; a < idx.size(); ++a) in = in && masks[a][idx[a]];
    c[flat] = in ? 1.0 : 0.0;
  }
  std::string label = "Omega";
  if (balls.size() == 1) label += "_p^" + std::to_string(balls[0].radius_exponent);
  return StateVector(grid, std::move(c), label);
}

StateVector indicator_state(const GridSpec& grid, const Ball& ball) {
  return indicator_state(grid, std::span<const Ball>(&ball, 1));
}

StateVector normalized_indicator_state(const GridSpec& grid, const Ball& ball) {
  return normalized(indicator_state(grid, ball));
}

StateVector uniform_state(const GridSpec& grid) {
  const double amp = 1.0 / std::sqrt(grid.domain_measure());
  return StateVector(grid, std::vector<cplx>(grid.total_cells(), amp), "uniform");
}

double ball_probability(const StateVector& phi, const Ball& ball) {
  if (phi.grid.dim() != 1) throw Error(ErrorKind::invalid_input, "ball_probability needs a one-axis grid");
  const auto mask = ball_mask(phi.grid, ball);
  double s = 0.0;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) s += std::norm(phi.coeffs[i]);
  }
  return s * phi.grid.cell_measure();
}

StateVector plane_wave(std::span<const PadicNumber> xi, const GridSpec& grid, PlanckConstant h) {
  if (xi.size() != static_cast<std::size_t>(grid.dim())) {
    throw Error(ErrorKind::invalid_input, "need one frequency per grid axis");
  }
  const auto& cfg = grid.config();
  const auto hp = h.as_padic(cfg);
  std::vector<std::vector<cplx>> factors;
  for (const auto& f : xi) {
    if (f.config().p() != grid.p()) throw Error(ErrorKind::config_mismatch, "frequency uses a different prime");
    // Rebase onto the grid's digit precision.
    const auto xi_g = PadicNumber::from_digits(cfg, f.valuation(), f.digits(), f.precision());
    const auto hxi = f.is_zero() ? PadicNumber::zero(cfg) : hp * xi_g;
    if (!hxi.is_zero() && hxi.valuation() < -grid.resolution()) {
      throw Error(ErrorKind::not_representable,
                  "plane wave with |h xi|_p = p^" + std::to_string(-hxi.valuation()) +
                      " is not constant on cells of radius p^" + std::to_string(-grid.resolution()));
    }
    std::vector<cplx> axis(grid.cells_per_axis());
    for (std::size_t i = 0; i < axis.size(); ++i) axis[i] = character(hxi * grid.representative(i));
    factors.push_back(std::move(axis));
  }
  std::vector<cplx> c(grid.total_cells());
  for (std::size_t flat = 0; flat < c.size(); ++flat) {
    const auto idx = grid.axis_indices(flat);
    cplx v{1.0, 0.0};
    for (std::size_t a = 0; a < idx.size(); ++a) v *= factors[a][idx[a]];
    c[flat] = v;
  }
  return StateVector(grid, std::move(c), "plane_wave", h);
}

StateVector plane_wave(const PadicNumber& xi, const GridSpec& grid, PlanckConstant h) {
  return plane_wave(std::span<const PadicNumber>(&xi, 1), grid, h);
}

StateVector from_empirical(const GridSpec& grid, std::span<const double> counts,
                           std::optional<std::span<const double>> phase) {
  if (counts.size() != grid.total_cells()) {
    throw Error(ErrorKind::invalid_input, "counts do not match the grid size");
  }
  if (phase && phase->size() != counts.size()) {
    throw Error(ErrorKind::invalid_input, "phase field does not match the grid size");
  }
  double total = 0.0;
  for (const double c : counts) {
    if (!(c >= 0.0) || !std::isfinite(c)) throw Error(ErrorKind::invalid_input, "counts must be finite and nonnegative");
    total += c;
  }
  if (total == 0.0) throw Error(ErrorKind::invalid_input, "all counts are zero");
  const double scale = 1.0 / (total * grid.cell_measure());
  std::vector<cplx> c(counts.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double theta = phase ? (*phase)[i] : 0.0;
    c[i] = std::polar(std::sqrt(counts[i] * scale), theta);
  }
  return StateVector(grid, std::move(c), "empirical");
}

PadicNumber encode_spike_train(const SpikeTrain& train, const BaseConfig& cfg) {
  if (train.counts.size() > static_cast<std::size_t>(cfg.digits())) {
    throw Error(ErrorKind::invalid_input, "spike train has more neurons than digit precision K");
  }
  std::vector<std::uint32_t> digits;
  digits.reserve(train.counts.size());
  for (std::size_t j = 0; j < train.counts.size(); ++j) {
    const int c = train.counts[j];
    if (c < 0 || static_cast<std::uint32_t>(c) >= cfg.p()) {
      throw Error(ErrorKind::invalid_input, "neuron " + std::to_string(j) + " count " + std::to_string(c) +
                                                " outside [0, p-1] for p=" + std::to_string(cfg.p()));
    }
    digits.push_back(static_cast<std::uint32_t>(c));
  }
  return PadicNumber::from_positional(cfg, 0, digits);
}

}  // namespace padicq
