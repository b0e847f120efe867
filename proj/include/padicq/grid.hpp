#pragma once

// Discretized L2(Q_p^d): functions supported in the ball B_{p^N}(0)^d and
// constant on cosets of radius p^{-M}. Each axis has p^{N+M} cells; a cell is
// identified by the digits of its canonical representative at positions
// -N .. M-1.
//
// Cell ordering along an axis: the coarsest digit (position -N) has the
// largest weight, so index = sum_j a_j p^{M-1-j}. Every grid ball is then a
// contiguous block of indices. Axes are combined row-major (axis 0 slowest).

#include <complex>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "padicq/padic.hpp"

namespace padicq {

using cplx = std::complex<double>;

inline constexpr std::size_t kDefaultCellLimit = 4096;

/// h = p^{-m}; as a real number it scales operators, as a p-adic number it
/// multiplies frequencies inside characters (|h|_p = p^m).
struct PlanckConstant {
  int exponent = 0;  // m

  double value(std::uint32_t p) const { return pow_p(p, -exponent); }
  PadicNumber as_padic(const BaseConfig& cfg) const;
};

class GridSpec {
 public:
  /// Throws Error(size_limit) when p^{d(N+M)} exceeds `cell_limit`, and
  /// Error(invalid_input) when N + M < 1 or d < 1. The digit precision is
  /// widened to at least N + M so every representative is exact.
  static GridSpec make(const BaseConfig& cfg, int N, int M, int d = 1,
                       std::size_t cell_limit = kDefaultCellLimit);

  const BaseConfig& config() const { return cfg_; }
  std::uint32_t p() const { return cfg_.p(); }
  int support() const { return N_; }     // N
  int resolution() const { return M_; }  // M
  int dim() const { return d_; }
  int depth() const { return N_ + M_; }
  std::size_t cell_limit() const { return limit_; }

  std::size_t cells_per_axis() const { return per_axis_; }
  std::size_t total_cells() const { return total_; }
  /// Haar measure of one cell: p^{-dM}.
  double cell_measure() const;
  /// Haar measure of the domain: p^{dN}.
  double domain_measure() const;

  /// Frequency grid: support and resolution exchange places.
  GridSpec dual() const;

  /// Split a flat cell index into per-axis indices and back.
  std::vector<std::size_t> axis_indices(std::size_t flat) const;
  std::size_t flat_index(std::span<const std::size_t> axis) const;

  /// Digits at positions -N .. M-1 of the representative of an axis cell.
  std::vector<std::uint32_t> axis_digits(std::size_t axis_index) const;
  PadicNumber representative(std::size_t axis_index) const;
  /// Axis cell containing x (digits outside [-N, M-1] are dropped). Throws
  /// Error(not_representable) if |x| > p^N.
  std::size_t axis_cell_of(const PadicNumber& x) const;
  /// |rep|_p of an axis cell (0 for the zero cell).
  double axis_norm(std::size_t axis_index) const;
  /// -log_p |rep|_p for nonzero cells, i.e. the position of the first nonzero digit.
  int axis_valuation(std::size_t axis_index) const;

  /// Integer coordinate X = x p^N mod p^{N+M} of an axis cell, and back.
  /// Group operations on cosets are integer operations mod p^{N+M}.
  std::size_t coset_integer(std::size_t axis_index) const;
  std::size_t axis_index_of_integer(std::size_t coset) const;

  friend bool operator==(const GridSpec& a, const GridSpec& b) {
    return a.cfg_.p() == b.cfg_.p() && a.N_ == b.N_ && a.M_ == b.M_ && a.d_ == b.d_;
  }

 private:
  GridSpec(const BaseConfig& cfg, int N, int M, int d, std::size_t limit);

  BaseConfig cfg_;
  int N_;
  int M_;
  int d_;
  std::size_t limit_;
  std::size_t per_axis_;
  std::size_t total_;
};

struct Cell {
  std::size_t index;
  std::vector<PadicNumber> representative;  // one per axis
};

GridSpec make_grid(const BaseConfig& cfg, int N, int M, int d = 1,
                   std::size_t cell_limit = kDefaultCellLimit);
std::vector<Cell> cells(const GridSpec& grid);

void require_same_grid(const GridSpec& a, const GridSpec& b);

struct StateVector {
  StateVector(const GridSpec& g, std::vector<cplx> c, std::string lbl = {}, PlanckConstant planck = {});
  explicit StateVector(const GridSpec& g) : StateVector(g, std::vector<cplx>(g.total_cells())) {}

  GridSpec grid;
  std::vector<cplx> coeffs;
  std::string label;
  PlanckConstant h;

  bool is_normalized(double tol = 1e-12) const;
  /// |phi(q)|^2 per cell.
  std::vector<double> probabilities() const;
  /// arg phi(q) per cell.
  std::vector<double> phases() const;
};

cplx integrate(const StateVector& f);
double integrate(const GridSpec& grid, std::span<const double> values);
/// (phi, psi) = \int phi conj(psi) dx
cplx inner(const StateVector& phi, const StateVector& psi);
/// ||phi||^2
double norm2(const StateVector& phi);
StateVector normalized(const StateVector& phi);

/// Indicator of a ball (d = 1) or of a product of balls (one per axis).
/// Throws Error(not_representable) unless the ball is a union of grid cells
/// lying inside the domain.
StateVector indicator_state(const GridSpec& grid, const Ball& ball);
StateVector indicator_state(const GridSpec& grid, std::span<const Ball> balls);
StateVector normalized_indicator_state(const GridSpec& grid, const Ball& ball);
StateVector uniform_state(const GridSpec& grid);

/// P(q in ball) = \int_ball |phi|^2.
double ball_probability(const StateVector& phi, const Ball& ball);
/// Per-axis cell mask of a ball.
std::vector<bool> ball_mask(const GridSpec& grid, const Ball& ball);

/// e(h xi x) on the grid; one frequency per axis. Requires |h xi|_p <= p^M.
StateVector plane_wave(std::span<const PadicNumber> xi, const GridSpec& grid, PlanckConstant h = {});
StateVector plane_wave(const PadicNumber& xi, const GridSpec& grid, PlanckConstant h = {});

/// phi = sqrt(P) e^{i theta} with P the counts normalized to a Haar density.
StateVector from_empirical(const GridSpec& grid, std::span<const double> counts,
                           std::optional<std::span<const double>> phase = std::nullopt);

struct SpikeTrain {
  std::vector<int> counts;  // oscillations of neuron j during one window
  double window_ms = 0.0;   // metadata only
};

/// Digit j of the mental state is the count of neuron j.
PadicNumber encode_spike_train(const SpikeTrain& train, const BaseConfig& cfg);

// --- file formats -----------------------------------------------------------

/// First line: JSON header {"p","N","M","d","label","h","h_exp"}; then the
/// CSV header `cell_digits,re,im` and one row per cell. cell_digits lists the
/// representative digits at positions -N..M-1, space separated, axes joined by '|'.
void write_state(std::ostream& os, const StateVector& phi);
StateVector read_state(std::istream& is, std::size_t cell_limit = kDefaultCellLimit);

struct SpikeRecord {
  int neuron = 0;
  int window = 0;
  int count = 0;
};

/// CSV with header `neuron_index,window_index,count`. Throws
/// Error(invalid_input) naming the 1-based line of a malformed row.
std::vector<SpikeRecord> read_spike_csv(std::istream& is);
/// Groups records by window (ascending) into spike trains of `neurons` counts.
std::vector<SpikeTrain> spike_trains(std::span<const SpikeRecord> records, double window_ms);

}  // namespace padicq
