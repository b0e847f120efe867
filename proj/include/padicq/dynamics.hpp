#pragma once

// Monomial maps x -> x^n on Z_p, iterated exactly at K digits.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "padicq/padic.hpp"

namespace padicq {

enum class FixedPointClass { attracting, repelling, neutral, inconclusive };

std::string to_string(FixedPointClass c);

struct DynSpec {
  BaseConfig cfg;
  int exponent = 2;  // n >= 2
  PadicNumber x0;
  std::size_t steps = 0;
  /// Fixed point distances are measured against (default 1).
  std::optional<PadicNumber> fixed_point;
};

struct OrbitReport {
  std::vector<PadicNumber> points;  // x_0 .. x_k
  /// v(x_k - x*) per point; nullopt when x_k = x* at precision.
  std::vector<std::optional<int>> distance_valuations;
  /// Derivative test at x*.
  FixedPointClass classification = FixedPointClass::inconclusive;
  /// What the distances did: shrinking, growing, constant or mixed.
  FixedPointClass observed = FixedPointClass::inconclusive;
  /// The orbit reached x* modulo p^K after starting elsewhere and was cut there.
  bool precision_exhausted = false;
  std::vector<std::size_t> perturbed_steps;

  double distance(std::size_t k) const;
};

/// |n x*^(n-1)|_p against 1. Throws Error(invalid_input) unless x*^n = x* at precision.
FixedPointClass classify_fixed_point(const PadicNumber& x_star, int n);

PadicNumber power(const PadicNumber& x, std::uint64_t n);

OrbitReport iterate(const DynSpec& spec);

struct NoiseSpec {
  int depth = 2;      // delta: only digits at positions >= delta change
  double rate = 0.5;  // chance of a flip after each step
  std::uint64_t seed = 0;
};

struct StabilityVerdict {
  bool stable = false;
  std::string detail;
};

struct PerturbedOrbit {
  OrbitReport report;
  StabilityVerdict verdict;
};

/// Attracting: the orbit ends within p^{-delta} of x*. Neutral: the distance
/// is unchanged by every unperturbed step. Repelling: never stable.
PerturbedOrbit perturbed_iterate(const DynSpec& spec, const NoiseSpec& noise);

/// p^L in decimal.
std::string mental_space_size(std::uint32_t p, std::uint32_t L);

}  // namespace padicq
