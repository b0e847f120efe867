#include "padicq/dynamics.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include "padicq/error.hpp"
#include "padicq/measurement.hpp"

namespace padicq {

std::string to_string(FixedPointClass c) {
  switch (c) {
    case FixedPointClass::attracting: return "attracting";
    case FixedPointClass::repelling: return "repelling";
    case FixedPointClass::neutral: return "neutral";
    case FixedPointClass::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

double OrbitReport::distance(std::size_t k) const {
  const auto& v = distance_valuations.at(k);
  return v ? pow_p(points.front().config().p(), -*v) : 0.0;
}

PadicNumber power(const PadicNumber& x, std::uint64_t n) {
  auto result = PadicNumber::from_integer(1, x.config());
  auto base = x;
  while (n > 0) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n) base = base * base;
  }
  return result;
}

namespace {

PadicNumber rebase(const PadicNumber& x, const BaseConfig& cfg) {
  if (x.config().p() != cfg.p()) throw Error(ErrorKind::config_mismatch, "point uses a different prime");
  if (x.is_zero()) return PadicNumber::zero(cfg);
  return PadicNumber::from_digits(cfg, x.valuation(), x.digits(), x.precision());
}

std::optional<int> valuation_of_difference(const PadicNumber& x, const PadicNumber& y) {
  const auto d = x - y;
  if (d.is_zero()) return std::nullopt;
  return d.valuation();
}

FixedPointClass observed_trend(const std::vector<std::optional<int>>& v) {
  if (v.size() < 2) return FixedPointClass::inconclusive;
  bool shrinking = true, growing = true, constant = true;
  for (std::size_t k = 1; k < v.size(); ++k) {
    // nullopt = distance 0, the smallest possible
    const bool a0 = !v[k - 1], a1 = !v[k];
    const bool less = (!a0 && a1) || (!a0 && !a1 && *v[k] > *v[k - 1]);
    const bool equal = (a0 && a1) || (!a0 && !a1 && *v[k] == *v[k - 1]);
    shrinking = shrinking && less;
    growing = growing && !less && !equal;
    constant = constant && equal;
  }
  if (constant) return FixedPointClass::neutral;
  if (shrinking) return FixedPointClass::attracting;
  if (growing) return FixedPointClass::repelling;
  return FixedPointClass::inconclusive;
}

void check_spec(const DynSpec& spec) {
  if (spec.exponent < 2) throw Error(ErrorKind::invalid_input, "exponent n must be >= 2");
  if (!spec.x0.is_zero() && spec.x0.valuation() < 0) {
    throw Error(ErrorKind::invalid_input, "x0 must lie in Z_p (valuation >= 0)");
  }
}

}  // namespace

FixedPointClass classify_fixed_point(const PadicNumber& x_star, int n) {
  if (n < 2) throw Error(ErrorKind::invalid_input, "exponent n must be >= 2");
  if (!equal_at_precision(power(x_star, static_cast<std::uint64_t>(n)), x_star)) {
    throw Error(ErrorKind::invalid_input, x_star.to_string() + " is not a fixed point of x^" + std::to_string(n));
  }
  const auto& cfg = x_star.config();
  const auto derivative = PadicNumber::from_integer(n, cfg) * power(x_star, static_cast<std::uint64_t>(n - 1));
  const double r = norm(derivative);
  if (r < 1.0) return FixedPointClass::attracting;
  if (r > 1.0) return FixedPointClass::repelling;
  return FixedPointClass::neutral;
}

namespace {

OrbitReport run_orbit(const DynSpec& spec, const NoiseSpec* noise) {
  check_spec(spec);
  const auto& cfg = spec.cfg;
  const auto x_star = spec.fixed_point ? rebase(*spec.fixed_point, cfg) : PadicNumber::from_integer(1, cfg);
  OrbitReport r;
  r.classification = classify_fixed_point(x_star, spec.exponent);

  std::optional<Rng> rng;
  if (noise) {
    if (noise->depth < 1) throw Error(ErrorKind::invalid_input, "noise depth must be >= 1");
    if (noise->depth >= cfg.digits()) throw Error(ErrorKind::invalid_input, "noise depth must be below K");
    if (!(noise->rate >= 0.0 && noise->rate <= 1.0)) throw Error(ErrorKind::invalid_input, "noise rate must be in [0, 1]");
    rng.emplace(derive_seed(noise->seed, "dynamics.noise"));
  }

  auto x = rebase(spec.x0, cfg);
  r.points.push_back(x);
  r.distance_valuations.push_back(valuation_of_difference(x, x_star));
  for (std::size_t k = 0; k < spec.steps; ++k) {
    x = power(x, static_cast<std::uint64_t>(spec.exponent));
    if (rng && noise->rate > 0.0 && rng->uniform() < noise->rate) {
      const int span = cfg.digits() - noise->depth;
      const int pos = noise->depth + static_cast<int>(rng->below(static_cast<std::uint64_t>(span)));
      std::vector<std::uint32_t> d(static_cast<std::size_t>(cfg.digits()));
      for (int i = 0; i < cfg.digits(); ++i) d[static_cast<std::size_t>(i)] = x.digit_at(i);
      const auto old = d[static_cast<std::size_t>(pos)];
      d[static_cast<std::size_t>(pos)] = static_cast<std::uint32_t>((old + 1 + rng->below(cfg.p() - 1)) % cfg.p());
      x = PadicNumber::from_positional(cfg, 0, d);
      r.perturbed_steps.push_back(k + 1);
    }
    const auto v = valuation_of_difference(x, x_star);
    if (!v && r.distance_valuations.back()) {
      // x_k agrees with x* in every retained digit; later steps carry no information.
      r.precision_exhausted = true;
      r.points.push_back(x);
      r.distance_valuations.push_back(v);
      break;
    }
    r.points.push_back(x);
    r.distance_valuations.push_back(v);
  }
  r.observed = observed_trend(r.distance_valuations);
  return r;
}

}  // namespace

OrbitReport iterate(const DynSpec& spec) { return run_orbit(spec, nullptr); }

PerturbedOrbit perturbed_iterate(const DynSpec& spec, const NoiseSpec& noise) {
  PerturbedOrbit out{run_orbit(spec, &noise), {}};
  const auto& r = out.report;
  const auto& v = r.distance_valuations;
  switch (r.classification) {
    case FixedPointClass::attracting: {
      const bool close = !v.back() || *v.back() >= noise.depth;
      out.verdict = {close, close ? "orbit ends within p^-" + std::to_string(noise.depth) + " of the fixed point"
                                  : "orbit ends outside p^-" + std::to_string(noise.depth)};
      break;
    }
    case FixedPointClass::neutral: {
      std::size_t next = 0;
      bool preserved = true;
      for (std::size_t k = 1; k < v.size(); ++k) {
        while (next < r.perturbed_steps.size() && r.perturbed_steps[next] < k) ++next;
        const bool perturbed = next < r.perturbed_steps.size() && r.perturbed_steps[next] == k;
        if (!perturbed && v[k] != v[k - 1]) preserved = false;
      }
      out.verdict = {preserved, preserved ? "distance preserved between perturbations" : "distance drifted"};
      break;
    }
    default:
      out.verdict = {false, "fixed point is " + to_string(r.classification)};
  }
  return out;
}

std::string mental_space_size(std::uint32_t p, std::uint32_t L) {
  if (p < 2) throw Error(ErrorKind::invalid_input, "p must be >= 2");
  if (L < 1) throw Error(ErrorKind::invalid_input, "L must be >= 1");
  const boost::multiprecision::cpp_int n = boost::multiprecision::pow(boost::multiprecision::cpp_int(p), L);
  return n.str();
}

}  // namespace padicq
