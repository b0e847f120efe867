#pragma once

// Observables on a grid: the Vladimirov operator (Fourier multiplier and
// integral forms), position magnitude M_q, motivation magnitude M_xi = hD,
// neuron activation A, commutators and Hamiltonians h^2 sum_j D_j^2 + V.

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "padicq/grid.hpp"

namespace padicq {

using Matrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct OperatorMatrix {
  GridSpec grid;
  Matrix entries;
  bool hermitian = false;
  std::string label;

  std::size_t size() const { return static_cast<std::size_t>(entries.rows()); }
  StateVector apply(const StateVector& phi) const;
  /// max |A - A^dagger|
  double hermitian_defect() const;
};

/// Builds an OperatorMatrix and sets `hermitian` from the entries
/// (defect <= 1e-12 relative to the largest entry).
OperatorMatrix make_operator(const GridSpec& grid, Matrix entries, std::string label);

/// Value given to |xi|^alpha on the zero-frequency cell.
///   infimum:  0, so constants lie in the kernel.
///   galerkin: the average of |xi|^alpha over that cell, which is what the
///             continuum operator compressed onto the grid produces.
enum class ZeroMode { infimum, galerkin };

/// Operator diagonal in the frequency representation: A = F^{-1} s F, with
/// one symbol value per cell of the dual grid.
struct FourierMultiplier {
  GridSpec grid;  // position grid
  std::vector<double> symbol;
  std::string label;

  StateVector apply(const StateVector& phi) const;
  OperatorMatrix to_matrix() const;
};

/// |xi_axis|^alpha on the dual grid (axis = -1: max-norm over all axes).
std::vector<double> vladimirov_symbol(const GridSpec& grid, double alpha, ZeroMode zero = ZeroMode::infimum,
                                      int axis = -1);
FourierMultiplier vladimirov(const GridSpec& grid, double alpha, ZeroMode zero = ZeroMode::infimum);
OperatorMatrix vladimirov_multiplier(const GridSpec& grid, double alpha, ZeroMode zero = ZeroMode::infimum);

/// alpha = 1, d = 1: (D phi)(x) = C_p \int (phi(x) - phi(y)) / |x-y|^2 dy with
/// C_p = p^2/(p+1), restricted to functions on the grid. With `tail_corrected`
/// the part of the integral outside the domain adds C_p p^{-(N+1)} to the diagonal.
OperatorMatrix vladimirov_integral(const GridSpec& grid, bool tail_corrected = true);
/// \int_{|z| > p^N} |z|^{-2} dz = p^{-(N+1)}
double vladimirov_tail(std::uint32_t p, int N);

/// |q|_p (max over axes); zero cell 0.
std::vector<double> position_norms(const GridSpec& grid);
OperatorMatrix position_magnitude(const GridSpec& grid);
FourierMultiplier motivation_magnitude_multiplier(const GridSpec& grid, PlanckConstant h,
                                                  ZeroMode zero = ZeroMode::infimum);
OperatorMatrix motivation_magnitude(const GridSpec& grid, PlanckConstant h, ZeroMode zero = ZeroMode::infimum);
/// -log_p |q|_p; `cutoff` on the zero cell (default M + 1).
OperatorMatrix neuron_activation(const GridSpec& grid, std::optional<double> cutoff = std::nullopt);

OperatorMatrix commutator(const OperatorMatrix& a, const OperatorMatrix& b);
/// Largest singular value.
double operator_norm(const OperatorMatrix& a);

enum class PotentialPreset { none, abs2, custom };
PotentialPreset parse_potential(const std::string& name);
/// |q|_p^2
std::vector<double> potential_abs2(const GridSpec& grid);

/// h^2 sum_j I x .. x D_j^2 x .. x I + diag(V).
OperatorMatrix hamiltonian(const GridSpec& grid, PlanckConstant h, std::span<const double> V);
/// Throws Error(invalid_input) unless every imaginary part is zero.
OperatorMatrix hamiltonian(const GridSpec& grid, PlanckConstant h, std::span<const cplx> V);

struct DegeneracyGroup {
  double eigenvalue = 0.0;  // mean of the members
  std::size_t first = 0;    // index into the ascending eigenvalue list
  std::size_t multiplicity = 0;
};

struct SpectralDecomposition {
  GridSpec grid;
  std::vector<double> eigenvalues;        // ascending
  std::vector<StateVector> eigenvectors;  // Haar-orthonormal
  std::vector<DegeneracyGroup> groups;
  double tolerance = 1e-7;
  double max_residual = 0.0;          // max ||A v - lambda v|| over unit coefficient vectors
  double orthonormality_defect = 0.0;  // max |V^dagger V - I|
};

inline constexpr double kDefaultDegeneracyTol = 1e-7;

/// Throws Error(not_hermitian) for non-Hermitian input.
SpectralDecomposition spectrum(const OperatorMatrix& op, double tau = kDefaultDegeneracyTol);
std::vector<DegeneracyGroup> group_levels(std::span<const double> ascending, double tau);

struct DegeneracyRow {
  double eigenvalue;
  std::size_t multiplicity;
};
std::vector<DegeneracyRow> degeneracy_report(const SpectralDecomposition& spec);

/// Closed-form spectrum of D^alpha on the grid (d = 1): 0 once, p^{alpha k}
/// with multiplicity p^{k+N-1}(p-1) for k = -N+1 .. M, ascending.
std::vector<DegeneracyRow> vladimirov_spectrum_law(const GridSpec& grid, double alpha);

}  // namespace padicq
