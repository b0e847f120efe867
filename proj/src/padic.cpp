#include "padicq/padic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <regex>
#include <sstream>

#include "padicq/error.hpp"

namespace padicq {

namespace {

constexpr std::uint32_t kMaxPrime = 1u << 31;

void require_same_config(const PadicNumber& x, const PadicNumber& y) {
  if (!(x.config() == y.config())) {
    throw Error(ErrorKind::config_mismatch, "p-adic operands have different base configs");
  }
}

std::uint64_t inverse_mod(std::uint64_t a, std::uint64_t m) {
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = static_cast<std::int64_t>(m), new_r = static_cast<std::int64_t>(a % m);
  while (new_r != 0) {
    const std::int64_t q = r / new_r;
    t = std::exchange(new_t, t - q * new_t);
    r = std::exchange(new_r, r - q * new_r);
  }
  if (t < 0) t += static_cast<std::int64_t>(m);
  return static_cast<std::uint64_t>(t);
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

BaseConfig::BaseConfig(std::uint32_t p, int digits) : p_(p), digits_(digits) {
  if (p >= kMaxPrime || !is_prime(p)) {
    throw Error(ErrorKind::invalid_input, "base p=" + std::to_string(p) + " is not a prime below 2^31");
  }
  if (digits < 1) {
    throw Error(ErrorKind::invalid_input, "digit precision must be >= 1");
  }
}

double pow_p(std::uint32_t p, int e) {
  double r = 1.0;
  for (int i = 0; i < std::abs(e); ++i) r *= static_cast<double>(p);
  return e >= 0 ? r : 1.0 / r;
}

PadicNumber PadicNumber::zero(const BaseConfig& cfg) { return PadicNumber(cfg); }

PadicNumber PadicNumber::from_digits(const BaseConfig& cfg, int valuation,
                                     std::span<const std::uint32_t> digits, int precision) {
  const int K = cfg.digits();
  for (const auto d : digits) {
    if (d >= cfg.p()) throw Error(ErrorKind::invalid_input, "digit out of range [0, p-1]");
  }
  std::size_t lead = 0;
  while (lead < digits.size() && digits[lead] == 0) ++lead;
  PadicNumber out(cfg);
  if (lead == digits.size()) return out;
  // `precision` counts known digits from `valuation`; leading zeros use some of them up.
  const int known = precision < 0 ? K : std::min(K, precision - static_cast<int>(lead));
  if (known <= 0) return out;
  out.zero_ = false;
  out.valuation_ = valuation + static_cast<int>(lead);
  out.precision_ = known;
  const int available = static_cast<int>(digits.size() - lead);
  for (int i = 0; i < known && i < available; ++i) {
    out.digits_[static_cast<std::size_t>(i)] = digits[lead + static_cast<std::size_t>(i)];
  }
  return out;
}

PadicNumber PadicNumber::from_positional(const BaseConfig& cfg, int lowest_position,
                                         std::span<const std::uint32_t> digits) {
  return from_digits(cfg, lowest_position, digits);
}

PadicNumber PadicNumber::from_integer(std::int64_t n, const BaseConfig& cfg) {
  if (n == 0) return zero(cfg);
  const bool negative = n < 0;
  // |INT64_MIN| fits in uint64.
  std::uint64_t m = negative ? static_cast<std::uint64_t>(-(n + 1)) + 1 : static_cast<std::uint64_t>(n);
  const std::uint64_t p = cfg.p();
  int v = 0;
  while (m % p == 0) {
    m /= p;
    ++v;
  }
  std::vector<std::uint32_t> d(static_cast<std::size_t>(cfg.digits()), 0);
  for (auto& digit : d) {
    digit = static_cast<std::uint32_t>(m % p);
    m /= p;
  }
  const auto x = from_digits(cfg, v, d);
  return negative ? -x : x;
}

PadicNumber PadicNumber::from_rational(std::int64_t a, std::int64_t b, const BaseConfig& cfg) {
  if (b == 0) throw Error(ErrorKind::division_by_zero, "rational with zero denominator");
  const std::int64_t g = std::gcd(a, b);
  if (g != 0) {
    a /= g;
    b /= g;
  }
  if (b % static_cast<std::int64_t>(cfg.p()) == 0) {
    throw Error(ErrorKind::invalid_input, "denominator divisible by p=" + std::to_string(cfg.p()));
  }
  return from_integer(a, cfg) / from_integer(b, cfg);
}

std::uint32_t PadicNumber::digit_at(int position) const {
  if (zero_) return 0;
  const int i = position - valuation_;
  if (i < 0 || i >= cfg_.digits()) return 0;
  return digits_[static_cast<std::size_t>(i)];
}

std::string PadicNumber::to_string() const {
  std::ostringstream os;
  os << cfg_.p() << '^' << (zero_ ? 0 : valuation_) << " * (";
  for (std::size_t i = 0; i < digits_.size(); ++i) {
    if (i) os << ' ';
    os << digits_[i];
  }
  os << ")_" << cfg_.p();
  return os.str();
}

PadicNumber PadicNumber::parse(const std::string& text) {
  static const std::regex re(R"(^\s*(\d+)\s*\^\s*(-?\d+)\s*\*\s*\(([\d\s]*)\)_(\d+)\s*$)");
  std::smatch m;
  if (!std::regex_match(text, m, re)) {
    throw Error(ErrorKind::invalid_input, "malformed p-adic literal: '" + text + "'");
  }
  const auto p = static_cast<std::uint32_t>(std::stoul(m[1].str()));
  if (p != static_cast<std::uint32_t>(std::stoul(m[4].str()))) {
    throw Error(ErrorKind::invalid_input, "p-adic literal base and subscript differ: '" + text + "'");
  }
  const int v = std::stoi(m[2].str());
  std::vector<std::uint32_t> digits;
  std::istringstream ds(m[3].str());
  for (unsigned long d; ds >> d;) digits.push_back(static_cast<std::uint32_t>(d));
  if (digits.empty()) throw Error(ErrorKind::invalid_input, "p-adic literal has no digits");
  const BaseConfig cfg(p, static_cast<int>(digits.size()));
  if (digits.front() == 0) {
    if (std::any_of(digits.begin(), digits.end(), [](auto d) { return d != 0; })) {
      throw Error(ErrorKind::invalid_input, "p-adic literal has a zero leading digit: '" + text + "'");
    }
    return zero(cfg);
  }
  return from_digits(cfg, v, digits);
}

PadicNumber PadicNumber::operator-() const {
  if (zero_) return *this;
  PadicNumber out = *this;
  const std::uint32_t p = cfg_.p();
  // p^prec - u: first nonzero digit complements to p, the rest to p-1.
  out.digits_[0] = p - digits_[0];
  for (int i = 1; i < precision_; ++i) {
    out.digits_[static_cast<std::size_t>(i)] = p - 1 - digits_[static_cast<std::size_t>(i)];
  }
  return out;
}

PadicNumber operator+(const PadicNumber& x, const PadicNumber& y) {
  require_same_config(x, y);
  if (x.zero_) return y;
  if (y.zero_) return x;
  const int ax = x.absolute_precision();
  const int ay = y.absolute_precision();
  if (y.valuation_ >= ax) return x;
  if (x.valuation_ >= ay) return y;

  const int top = std::min(ax, ay);
  const int v0 = std::min(x.valuation_, y.valuation_);
  const int len = top - v0;
  const std::uint64_t p = x.cfg_.p();
  std::vector<std::uint32_t> window(static_cast<std::size_t>(len));
  std::uint64_t carry = 0;
  for (int i = 0; i < len; ++i) {
    const std::uint64_t s = std::uint64_t{x.digit_at(v0 + i)} + y.digit_at(v0 + i) + carry;
    window[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(s % p);
    carry = s / p;
  }
  const auto first = std::find_if(window.begin(), window.end(), [](auto d) { return d != 0; });
  if (first == window.end()) return PadicNumber::zero(x.cfg_);
  const int shift = static_cast<int>(first - window.begin());
  return PadicNumber::from_digits(x.cfg_, v0 + shift,
                                  std::span<const std::uint32_t>(window).subspan(static_cast<std::size_t>(shift)),
                                  len - shift);
}

PadicNumber operator-(const PadicNumber& x, const PadicNumber& y) { return x + (-y); }

PadicNumber operator*(const PadicNumber& x, const PadicNumber& y) {
  require_same_config(x, y);
  if (x.zero_ || y.zero_) return PadicNumber::zero(x.cfg_);
  const int prec = std::min(x.precision_, y.precision_);
  const std::uint64_t p = x.cfg_.p();
  std::vector<std::uint64_t> acc(static_cast<std::size_t>(prec), 0);
  for (int i = 0; i < prec; ++i) {
    const std::uint64_t xi = x.digits_[static_cast<std::size_t>(i)];
    if (xi == 0) continue;
    std::uint64_t carry = 0;
    for (int k = i; k < prec; ++k) {
      const std::uint64_t t = acc[static_cast<std::size_t>(k)] + xi * y.digits_[static_cast<std::size_t>(k - i)] + carry;
      acc[static_cast<std::size_t>(k)] = t % p;
      carry = t / p;
    }
  }
  std::vector<std::uint32_t> d(acc.begin(), acc.end());
  return PadicNumber::from_digits(x.cfg_, x.valuation_ + y.valuation_, d, prec);
}

PadicNumber operator/(const PadicNumber& x, const PadicNumber& y) {
  require_same_config(x, y);
  if (y.zero_) throw Error(ErrorKind::division_by_zero, "p-adic division by zero");
  if (x.zero_) return x;
  const int prec = std::min(x.precision_, y.precision_);
  const std::int64_t p = x.cfg_.p();
  const std::uint64_t inv0 = inverse_mod(y.digits_[0], static_cast<std::uint64_t>(p));
  std::vector<std::int64_t> r(x.digits_.begin(), x.digits_.begin() + prec);
  std::vector<std::uint32_t> q(static_cast<std::size_t>(prec), 0);
  for (int i = 0; i < prec; ++i) {
    const auto qi = static_cast<std::int64_t>(
        (static_cast<std::uint64_t>(r[static_cast<std::size_t>(i)]) * inv0) % static_cast<std::uint64_t>(p));
    q[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(qi);
    if (qi == 0) continue;
    std::int64_t borrow = 0;
    for (int k = i; k < prec; ++k) {
      std::int64_t t = r[static_cast<std::size_t>(k)] - qi * static_cast<std::int64_t>(y.digits_[static_cast<std::size_t>(k - i)]) - borrow;
      std::int64_t digit = t % p;
      if (digit < 0) digit += p;
      borrow = (digit - t) / p;
      r[static_cast<std::size_t>(k)] = digit;
    }
  }
  return PadicNumber::from_digits(x.cfg_, x.valuation_ - y.valuation_, q, prec);
}

PadicNumber arith(const PadicNumber& x, const PadicNumber& y, ArithKind kind) {
  switch (kind) {
    case ArithKind::add: return x + y;
    case ArithKind::sub: return x - y;
    case ArithKind::mul: return x * y;
    case ArithKind::div: return x / y;
  }
  throw Error(ErrorKind::invalid_input, "unknown arithmetic kind");
}

bool equal_at_precision(const PadicNumber& x, const PadicNumber& y) { return (x - y).is_zero(); }

double norm(const PadicNumber& x) {
  return x.is_zero() ? 0.0 : pow_p(x.config().p(), -x.valuation());
}

double distance(const PadicNumber& x, const PadicNumber& y) { return norm(x - y); }

Rational frac(const PadicNumber& x) {
  if (x.is_zero() || x.valuation() >= 0) return {};
  const std::int64_t p = x.config().p();
  constexpr std::int64_t kLimit = std::int64_t{1} << 62;
  Rational r{0, 1};
  for (int i = -1; i >= x.valuation(); --i) {
    if (r.den > kLimit / p) {
      throw Error(ErrorKind::invalid_input, "fractional part denominator exceeds 2^62");
    }
    // Horner from position -1 down: num = sum_i x_i p^{i-v}.
    r.num = r.num * p + static_cast<std::int64_t>(x.digit_at(i));
    r.den *= p;
  }
  return r;
}

std::complex<double> character(const PadicNumber& x) {
  const Rational f = frac(x);
  if (f.num == 0) return {1.0, 0.0};
  // Reduce to (-1/2, 1/2] so half turns land on exact angles.
  std::int64_t num = f.num;
  if (2 * num > f.den) num -= f.den;
  const double turns = static_cast<double>(num) / static_cast<double>(f.den);
  if (2 * num == f.den) return {-1.0, 0.0};
  if (4 * num == f.den) return {0.0, 1.0};
  if (4 * num == -f.den) return {0.0, -1.0};
  return std::polar(1.0, 2.0 * std::numbers::pi * turns);
}

bool Ball::contains(const PadicNumber& x) const {
  const auto diff = x - center;
  return diff.is_zero() || diff.valuation() >= -radius_exponent;
}

BallRelation ball_relation(const Ball& b1, const Ball& b2) {
  if (!(b1.center.config() == b2.center.config())) {
    throw Error(ErrorKind::config_mismatch, "balls live in different base configs");
  }
  if (b1.radius_exponent <= b2.radius_exponent) {
    if (!b2.contains(b1.center)) return BallRelation::disjoint;
    return b1.radius_exponent == b2.radius_exponent ? BallRelation::equal : BallRelation::first_in_second;
  }
  return b1.contains(b2.center) ? BallRelation::second_in_first : BallRelation::disjoint;
}

}  // namespace padicq
