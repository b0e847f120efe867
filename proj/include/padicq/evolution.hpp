#pragma once

#include <span>
#include <vector>

#include "padicq/operators.hpp"

namespace padicq {

/// phi(t) = sum_k exp(sign * i lambda_k t / h) c_k psi_k. `positive` is the +
/// sign; `conventional` is exp(-i lambda t / h).
enum class PhaseSign { positive = 1, conventional = -1 };

struct EvolutionResult {
  std::vector<double> times;
  std::vector<StateVector> states;
  std::vector<double> norms;     // ||phi(t)||
  std::vector<double> energies;  // <H>_phi(t)
};

/// Requires ||phi0|| = 1 within 1e-10 and a Hermitian H on the same grid.
EvolutionResult evolve(const StateVector& phi0, const OperatorMatrix& H, PlanckConstant h,
                       std::span<const double> times, PhaseSign sign = PhaseSign::positive);
EvolutionResult evolve(const StateVector& phi0, const OperatorMatrix& H, const SpectralDecomposition& spec,
                       PlanckConstant h, std::span<const double> times, PhaseSign sign = PhaseSign::positive);

/// count samples t0, t0 + dt, ..., t1.
std::vector<double> uniform_times(double t0, double t1, std::size_t count);

/// <A>_phi = \int (A phi) conj(phi) dx (real part).
double average(const OperatorMatrix& a, const StateVector& phi);
double average(const FourierMultiplier& a, const StateVector& phi);

/// -\int P log_p P dq, with 0 log 0 = 0. Throws unless P >= 0 and \int P = 1 within 1e-10.
double entropy(const GridSpec& grid, std::span<const double> P);

struct BohmPotential {
  std::vector<double> W;
  std::vector<bool> valid;  // false where R <= eps (W set to 0 there)
};

/// W = -(h^2 / R) sum_j D_j^2 R with R = |phi|.
BohmPotential bohm_potential(const StateVector& phi, PlanckConstant h, double eps = 1e-12);

/// M(t) = \int (|D P|^2 + |dP/dt|^2) dx per time sample, P = |phi(t)|^2.
/// dP/dt by central differences, one-sided at both ends. Needs >= 2 samples
/// on a uniform time grid.
std::vector<double> consciousness_measure(const EvolutionResult& evolution);

}  // namespace padicq
