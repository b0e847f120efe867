#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "padicq/operators.hpp"

namespace padicq {

/// mt19937_64 with a portable uniform double, so streams match across
/// standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  std::uint64_t next() { return engine_(); }
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
};

/// Per-component seed: splitmix64(master ^ fnv1a64(tag)).
std::uint64_t derive_seed(std::uint64_t master, std::string_view tag);

struct Observable {
  std::string label;
  OperatorMatrix op;
  SpectralDecomposition spectral;

  static Observable make(OperatorMatrix op, double tau = kDefaultDegeneracyTol);
};

/// ||Pi_g phi||^2 for each degeneracy group g of the spectrum.
std::vector<double> born_distribution(const StateVector& phi, const SpectralDecomposition& spec);

struct MeasurementOutcome {
  double eigenvalue = 0.0;
  double probability = 0.0;
  std::size_t group = 0;
  StateVector collapsed;
};

/// Draws a level with Born weights and returns Pi phi / ||Pi phi||.
MeasurementOutcome projective_measure(const StateVector& phi, const SpectralDecomposition& spec, Rng& rng);

struct MeasurementRecord {
  std::size_t step = 0;
  std::string observable;
  double outcome = 0.0;
  double probability = 0.0;
  std::string state_ref;  // "<step>.<position in subset>"
  StateVector state;      // post-measurement state
};

struct RdsConfig {
  std::size_t subset_size = 2;
  /// Row-stochastic weights between commuting subsets (empty = uniform).
  /// Rows are normalized on use; negative or all-zero rows are rejected.
  std::vector<std::vector<double>> transition;
  /// How many past selections shape the next one; weight decay^(j-1) for the j-th most recent.
  std::size_t memory_depth = 1;
  double decay = 0.5;
  std::uint64_t seed = 0;
};

/// Subsets of `subset_size` family members whose pairwise commutators have
/// Frobenius norm <= tol (an upper bound for the operator norm), in
/// lexicographic order.
std::vector<std::vector<std::size_t>> commuting_subsets(std::span<const Observable> family, std::size_t subset_size,
                                                        double tol = 1e-9);

/// Each step selects a commuting subset through the memory-weighted Markov
/// process and measures its members in order, feeding each collapsed state
/// into the next measurement. Throws Error(invalid_input) when no commuting
/// subset of the requested size exists.
std::vector<MeasurementRecord> rds_stream(const StateVector& phi0, std::span<const Observable> family,
                                          const RdsConfig& cfg, std::size_t steps);

/// One JSON object per line: step, observable, outcome, probability, state_ref.
void write_records_jsonl(std::ostream& os, std::span<const MeasurementRecord> records);

struct SchmidtResult {
  std::vector<double> singular_values;  // descending, Haar-scaled: sum sigma^2 = ||phi||^2
  std::size_t rank = 0;
};

/// Reshapes a d = 2 state into an (axis 0) x (axis 1) matrix and returns its
/// singular values; rank counts sigma > tau.
SchmidtResult schmidt_analysis(const StateVector& phi, double tau = 1e-10);

/// (a x b)(x0, x1) = a(x0) b(x1) on the d = 2 grid built from a's axis.
StateVector tensor_product(const StateVector& a, const StateVector& b);

}  // namespace padicq
