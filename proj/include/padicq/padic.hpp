#pragma once

// Fixed-precision p-adic numbers.
//
// A nonzero value is stored as p^v * (d0 + d1 p + ... + d_{K-1} p^{K-1}) with
// d0 != 0, i.e. K significant digits and an explicit valuation, much like a
// floating-point mantissa/exponent pair. Zero is a distinguished value.
//
// Cancellation in add/sub shifts the leading digit to the right; the digits
// that enter from below the operands' known precision are unknown, so every
// number also carries `precision()`: how many of its leading digits are
// actually determined (<= K).

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace padicq {

class BaseConfig {
 public:
  /// Throws Error(invalid_input) unless p is prime (< 2^31) and digits >= 1.
  BaseConfig(std::uint32_t p, int digits);

  std::uint32_t p() const { return p_; }
  int digits() const { return digits_; }

  friend bool operator==(const BaseConfig&, const BaseConfig&) = default;

 private:
  std::uint32_t p_;
  int digits_;
};

bool is_prime(std::uint64_t n);

/// Exact rational num/den; `frac` results always have den = p^k.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;
  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

class PadicNumber {
 public:
  static PadicNumber zero(const BaseConfig& cfg);
  static PadicNumber from_integer(std::int64_t n, const BaseConfig& cfg);
  /// a/b; throws if b == 0 or p divides b after removing common factors.
  static PadicNumber from_rational(std::int64_t a, std::int64_t b, const BaseConfig& cfg);
  /// p^valuation * sum digits[i] p^i. Leading zero digits are absorbed into
  /// the valuation; all-zero digits give the canonical zero. `precision`
  /// defaults to K.
  static PadicNumber from_digits(const BaseConfig& cfg, int valuation,
                                 std::span<const std::uint32_t> digits, int precision = -1);
  /// Digit string read least-significant first: a_0 + a_1 p + ...
  static PadicNumber from_positional(const BaseConfig& cfg, int lowest_position,
                                     std::span<const std::uint32_t> digits);

  /// Parses `p^v * (d0 d1 ...)_p`. K is the number of digits written.
  static PadicNumber parse(const std::string& text);

  const BaseConfig& config() const { return cfg_; }
  bool is_zero() const { return zero_; }
  int valuation() const { return valuation_; }
  std::span<const std::uint32_t> digits() const { return digits_; }
  int precision() const { return precision_; }
  /// Coefficient of p^position in the expansion (0 outside the stored window).
  std::uint32_t digit_at(int position) const;
  /// Absolute precision: the value is known modulo p^(v + precision).
  int absolute_precision() const { return valuation_ + precision_; }

  std::string to_string() const;

  PadicNumber operator-() const;
  friend PadicNumber operator+(const PadicNumber& x, const PadicNumber& y);
  friend PadicNumber operator-(const PadicNumber& x, const PadicNumber& y);
  friend PadicNumber operator*(const PadicNumber& x, const PadicNumber& y);
  friend PadicNumber operator/(const PadicNumber& x, const PadicNumber& y);

  /// Representation equality (same config, valuation, digits, precision).
  friend bool operator==(const PadicNumber&, const PadicNumber&) = default;

 private:
  explicit PadicNumber(const BaseConfig& cfg)
      : cfg_(cfg), digits_(static_cast<std::size_t>(cfg.digits()), 0) {}

  BaseConfig cfg_;
  bool zero_ = true;
  int valuation_ = 0;
  int precision_ = 0;
  std::vector<std::uint32_t> digits_;
};

enum class ArithKind { add, sub, mul, div };
PadicNumber arith(const PadicNumber& x, const PadicNumber& y, ArithKind kind);

/// x and y agree modulo the coarser of their absolute precisions.
bool equal_at_precision(const PadicNumber& x, const PadicNumber& y);

/// |x|_p = p^{-v}; |0|_p = 0.
double norm(const PadicNumber& x);
double distance(const PadicNumber& x, const PadicNumber& y);
/// {x} = sum_{i=v}^{-1} x_i p^i, exact, den = p^{-v} (or 0/1 when v >= 0).
Rational frac(const PadicNumber& x);
/// e(x) = exp(2 pi i {x}).
std::complex<double> character(const PadicNumber& x);

/// p^e as double (exact whenever representable).
double pow_p(std::uint32_t p, int e);

struct Ball {
  PadicNumber center;
  int radius_exponent = 0;  // radius p^radius_exponent

  double radius() const { return pow_p(center.config().p(), radius_exponent); }
  bool contains(const PadicNumber& x) const;
};

enum class BallRelation { disjoint, first_in_second, second_in_first, equal };

/// Two p-adic balls are either nested or disjoint; there is no partial overlap.
BallRelation ball_relation(const Ball& b1, const Ball& b2);

}  // namespace padicq
