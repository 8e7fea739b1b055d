#include "simplex_gibbs/chain.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/special_functions/beta.hpp>

#include "simplex_gibbs/errors.hpp"

namespace simplex_gibbs {

using Unit = SimplexPoint::Unit;

// ---------------------------------------------------------------------------
// SimplexPoint

SimplexPoint SimplexPoint::from_values(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) throw ArgumentError("SimplexPoint: dimension must be >= 2");
  double sum = 0.0;
  for (double v : values) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw ArgumentError("SimplexPoint: entries must be finite and >= 0");
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw ArgumentError("SimplexPoint: entries must sum to 1 (within 1e-9)");
  }
  // Quantize the normalized vector, then hand the rounding residual to the
  // largest entry so the total is exactly kTotal.
  std::vector<Unit> units(n);
  std::size_t largest = 0;
  unsigned __int128 total = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const long double scaled =
        static_cast<long double>(values[k]) / sum * static_cast<long double>(kTotal);
    units[k] = static_cast<Unit>(std::llround(std::min<long double>(scaled, kTotal)));
    total += units[k];
    if (units[k] > units[largest]) largest = k;
  }
  const auto target = static_cast<unsigned __int128>(kTotal);
  if (total > target) {
    units[largest] -= static_cast<Unit>(total - target);
  } else {
    units[largest] += static_cast<Unit>(target - total);
  }
  return SimplexPoint(std::move(units));
}

SimplexPoint SimplexPoint::from_units(std::vector<Unit> units) {
  if (units.size() < 2) throw ArgumentError("SimplexPoint: dimension must be >= 2");
  unsigned __int128 total = 0;
  for (Unit u : units) total += u;
  if (total != kTotal) {
    throw ArgumentError("SimplexPoint: units must sum to 2^62 exactly");
  }
  return SimplexPoint(std::move(units));
}

SimplexPoint SimplexPoint::vertex(std::size_t n, std::size_t k) {
  if (n < 2) throw ArgumentError("SimplexPoint: dimension must be >= 2");
  if (k >= n) throw ArgumentError("SimplexPoint: vertex index out of range");
  std::vector<Unit> units(n, 0);
  units[k] = kTotal;
  return SimplexPoint(std::move(units));
}

SimplexPoint SimplexPoint::center(std::size_t n) {
  if (n < 2) throw ArgumentError("SimplexPoint: dimension must be >= 2");
  std::vector<Unit> units(n, kTotal / n);
  const Unit rest = kTotal - (kTotal / n) * n;
  for (Unit k = 0; k < rest; ++k) units[k] += 1;
  return SimplexPoint(std::move(units));
}

std::vector<double> SimplexPoint::values() const {
  std::vector<double> out(units_.size());
  for (std::size_t k = 0; k < units_.size(); ++k) out[k] = (*this)[k];
  return out;
}

double SimplexPoint::min_value() const {
  return static_cast<double>(*std::min_element(units_.begin(), units_.end())) * kUnit;
}

void SimplexPoint::redistribute(std::size_t i, std::size_t j, Unit to_i) {
  if (i == j || i >= dim() || j >= dim()) {
    throw ArgumentError("redistribute: need distinct in-range coordinates");
  }
  const Unit s = units_[i] + units_[j];
  if (to_i > s) throw ArgumentError("redistribute: share exceeds pair sum");
  units_[i] = to_i;
  units_[j] = s - to_i;
}

Unit scale_units(Unit s, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw ArgumentError("scale_units: lambda must lie in [0, 1]");
  }
  if (lambda == 1.0) return s;
  if (lambda == 0.0 || s == 0) return 0;
  // lambda = mantissa * 2^exponent with a 53-bit integer mantissa.
  int exponent = 0;
  const double fraction = std::frexp(lambda, &exponent);
  const auto mantissa = static_cast<std::uint64_t>(std::ldexp(fraction, 53));
  const int shift = 53 - exponent;  // >= 53 since lambda < 1
  if (shift >= 127) return 0;
  const unsigned __int128 product = static_cast<unsigned __int128>(mantissa) * s;
  const unsigned __int128 half = static_cast<unsigned __int128>(1) << (shift - 1);
  return static_cast<Unit>((product + half) >> shift);
}

// ---------------------------------------------------------------------------
// StepDraw

void StepDraw::validate(std::size_t n) const {
  if (i == j) throw ArgumentError("StepDraw: i and j must differ");
  if (i >= j) throw ArgumentError("StepDraw: requires i < j");
  if (j >= n) throw ArgumentError("StepDraw: coordinate out of range");
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw ArgumentError("StepDraw: lambda must lie in [0, 1]");
  }
}

// ---------------------------------------------------------------------------
// LambdaLaw

LambdaLaw LambdaLaw::symmetric_beta(double a) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw ArgumentError("LambdaLaw: beta shape must be positive and finite");
  }
  LambdaLaw law(Kind::kSymmetricBeta, a);
  for (double x : {0.1, 0.25, 0.5}) {
    if (std::abs(law.cdf(x) - (1.0 - law.cdf(1.0 - x))) > 1e-12) {
      throw ArgumentError("LambdaLaw: cdf is not symmetric");
    }
  }
  return law;
}

LambdaLaw LambdaLaw::parse(std::string_view text) {
  if (text == "uniform") return uniform();
  constexpr std::string_view kBeta = "beta:";
  if (text.substr(0, kBeta.size()) == kBeta) {
    const std::string rest(text.substr(kBeta.size()));
    std::size_t used = 0;
    double a = 0.0;
    try {
      a = std::stod(rest, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != rest.size()) {
      throw ArgumentError("LambdaLaw: cannot parse beta shape in '" +
                          std::string(text) + "'");
    }
    return symmetric_beta(a);
  }
  throw ArgumentError("LambdaLaw: expected 'uniform' or 'beta:<a>', got '" +
                      std::string(text) + "'");
}

std::string LambdaLaw::to_string() const {
  if (is_uniform()) return "uniform";
  std::ostringstream out;
  out << "beta:" << shape_;
  return out.str();
}

double LambdaLaw::sample(RandomStream& rng) const {
  if (is_uniform()) return rng.uniform01();
  const double g1 = rng.gamma(shape_);
  const double g2 = rng.gamma(shape_);
  const double total = g1 + g2;
  return total > 0.0 ? g1 / total : 0.5;
}

double LambdaLaw::pdf(double x) const {
  if (x < 0.0 || x > 1.0) return 0.0;
  if (is_uniform()) return 1.0;
  if (x == 0.0 || x == 1.0) {
    if (shape_ < 1.0) return std::numeric_limits<double>::infinity();
    return shape_ == 1.0 ? 1.0 : 0.0;
  }
  return boost::math::ibeta_derivative(shape_, shape_, x);
}

double LambdaLaw::cdf(double x) const {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  if (is_uniform()) return x;
  return boost::math::ibeta(shape_, shape_, x);
}

double LambdaLaw::second_moment() const {
  if (is_uniform()) return 1.0 / 3.0;
  return 0.25 + 1.0 / (4.0 * (2.0 * shape_ + 1.0));
}

double LambdaLaw::cdf_curvature_sup() const {
  if (is_uniform() || shape_ == 1.0) return 0.0;
  if (shape_ < 2.0) return std::numeric_limits<double>::infinity();
  // |f'(x)| = (a-1)/B(a,a) * (x(1-x))^(a-2) * |1-2x|, symmetric about 1/2.
  const double a = shape_;
  const double norm = (a - 1.0) / boost::math::beta(a, a);
  auto slope = [&](double x) {
    return norm * std::pow(x * (1.0 - x), a - 2.0) * (1.0 - 2.0 * x);
  };
  double best_x = 0.0;
  double best = 0.0;
  constexpr int kGrid = 4096;
  for (int k = 0; k <= kGrid; ++k) {
    const double x = 0.5 * k / kGrid;
    if (slope(x) > best) {
      best = slope(x);
      best_x = x;
    }
  }
  double lo = std::max(0.0, best_x - 0.5 / kGrid);
  double hi = std::min(0.5, best_x + 0.5 / kGrid);
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 100; ++it) {
    const double m1 = hi - ratio * (hi - lo);
    const double m2 = lo + ratio * (hi - lo);
    if (slope(m1) < slope(m2)) {
      lo = m1;
    } else {
      hi = m2;
    }
  }
  return std::max(best, slope(0.5 * (lo + hi)));
}

double LambdaLaw::mixing_constant() const {
  return cdf_curvature_sup() / (1.0 - 2.0 * second_moment());
}

// ---------------------------------------------------------------------------
// Single-step dynamics

StepDraw sample_step_draw(std::size_t n, const LambdaLaw& law,
                          RandomStream& rng) {
  if (n < 2) throw ArgumentError("sample_step_draw: dimension must be >= 2");
  std::size_t i = rng.uniform_index(n);
  std::size_t j = rng.uniform_index(n - 1);
  if (j >= i) ++j;
  if (i > j) std::swap(i, j);
  return StepDraw{i, j, law.sample(rng)};
}

void step_in_place(SimplexPoint& x, const StepDraw& d) {
  d.validate(x.dim());
  const Unit s = x.unit(d.i) + x.unit(d.j);
  x.redistribute(d.i, d.j, scale_units(s, d.lambda));
}

SimplexPoint step(const SimplexPoint& x, const StepDraw& d) {
  SimplexPoint out = x;
  step_in_place(out, d);
  return out;
}

SimplexPoint sample_uniform_simplex(std::size_t n, RandomStream& rng) {
  if (n < 2) throw ArgumentError("sample_uniform_simplex: dimension must be >= 2");
  std::vector<double> e(n);
  double total = 0.0;
  for (auto& v : e) {
    v = rng.exponential();
    total += v;
  }
  for (auto& v : e) v /= total;
  return SimplexPoint::from_values(e);
}

SimplexPoint sample_stationary(std::size_t n, const LambdaLaw& law, RandomStream& rng) {
  if (law.is_uniform()) return sample_uniform_simplex(n, rng);
  if (n < 2) throw ArgumentError("sample_stationary: dimension must be >= 2");
  std::vector<double> g(n);
  double total = 0.0;
  for (auto& v : g) {
    v = rng.gamma(law.shape());
    total += v;
  }
  for (auto& v : g) v /= total;
  return SimplexPoint::from_values(g);
}

Unit weight_units(std::span<const std::size_t> subset, const SimplexPoint& x) {
  std::vector<bool> seen(x.dim(), false);
  Unit total = 0;
  for (std::size_t k : subset) {
    if (k >= x.dim()) throw ArgumentError("weight: index out of range");
    if (seen[k]) throw ArgumentError("weight: repeated index");
    seen[k] = true;
    total += x.unit(k);
  }
  return total;
}

double weight(std::span<const std::size_t> subset, const SimplexPoint& x) {
  return static_cast<double>(weight_units(subset, x)) * SimplexPoint::kUnit;
}

double sq_distance(const SimplexPoint& x, const SimplexPoint& y) {
  if (x.dim() != y.dim()) throw ArgumentError("sq_distance: dimension mismatch");
  double total = 0.0;
  for (std::size_t k = 0; k < x.dim(); ++k) {
    const auto diff = static_cast<std::int64_t>(x.unit(k)) -
                      static_cast<std::int64_t>(y.unit(k));
    const double d = static_cast<double>(diff) * SimplexPoint::kUnit;
    total += d * d;
  }
  return total;
}

// ---------------------------------------------------------------------------
// Discrete analogue

std::uint64_t Composition::total() const {
  std::uint64_t m = 0;
  for (auto c : counts) m += c;
  return m;
}

void Composition::validate() const {
  if (counts.size() < 2) throw ArgumentError("Composition: need n >= 2 boxes");
  if (total() < 1) throw ArgumentError("Composition: need M >= 1 balls");
}

std::vector<double> Composition::normalized() const {
  const auto m = static_cast<double>(total());
  std::vector<double> out(counts.size());
  for (std::size_t k = 0; k < counts.size(); ++k) {
    out[k] = static_cast<double>(counts[k]) / m;
  }
  return out;
}

void discrete_step_in_place(Composition& c, std::size_t i, std::size_t j,
                            double u) {
  if (i == j) throw ArgumentError("discrete_step: i and j must differ");
  if (i >= c.dim() || j >= c.dim()) {
    throw ArgumentError("discrete_step: box index out of range");
  }
  const std::uint64_t pair = c.counts[i] + c.counts[j];
  const std::uint64_t to_i = binomial_half_inverse(pair, u);
  c.counts[i] = to_i;
  c.counts[j] = pair - to_i;
}

Composition discrete_step(const Composition& c, std::size_t i, std::size_t j,
                          RandomStream& rng) {
  Composition out = c;
  discrete_step_in_place(out, i, j, rng.uniform01());
  return out;
}

namespace {

// Loader's saddle-point pieces (C. Loader, "Fast and accurate computation of
// binomial probabilities", 2000).
double stirling_error(double n) {
  constexpr double kS0 = 1.0 / 12.0;
  constexpr double kS1 = 1.0 / 360.0;
  constexpr double kS2 = 1.0 / 1260.0;
  constexpr double kS3 = 1.0 / 1680.0;
  constexpr double kS4 = 1.0 / 1188.0;
  if (n <= 15.0) {
    return std::lgamma(n + 1.0) - (n + 0.5) * std::log(n) + n -
           0.5 * std::log(2.0 * std::numbers::pi);
  }
  const double nn = n * n;
  if (n > 500) return (kS0 - kS1 / nn) / n;
  if (n > 80) return (kS0 - (kS1 - kS2 / nn) / nn) / n;
  if (n > 35) return (kS0 - (kS1 - (kS2 - kS3 / nn) / nn) / nn) / n;
  return (kS0 - (kS1 - (kS2 - (kS3 - kS4 / nn) / nn) / nn) / nn) / n;
}

double deviance_term(double x, double np) {
  if (std::abs(x - np) < 0.1 * (x + np)) {
    double v = (x - np) / (x + np);
    double s = (x - np) * v;
    double ej = 2.0 * x * v;
    v *= v;
    for (int j = 1; j < 1000; ++j) {
      ej *= v;
      const double next = s + ej / (2 * j + 1);
      if (next == s) return next;
      s = next;
    }
    return s;
  }
  return x * std::log(x / np) + np - x;
}

}  // namespace

double binomial_half_pmf(std::uint64_t trials, std::uint64_t k) {
  if (k > trials) return 0.0;
  if (trials <= 60) {
    // Exact binomial coefficient, then an exact power-of-two scaling.
    std::uint64_t c = 1;
    const std::uint64_t r = std::min(k, trials - k);
    for (std::uint64_t t = 1; t <= r; ++t) c = c * (trials - r + t) / t;
    return std::ldexp(static_cast<double>(c), -static_cast<int>(trials));
  }
  if (k == 0 || k == trials) {
    return trials > 1100 ? 0.0 : std::ldexp(1.0, -static_cast<int>(trials));
  }
  const auto n = static_cast<double>(trials);
  const auto x = static_cast<double>(k);
  const double lc = stirling_error(n) - stirling_error(x) - stirling_error(n - x) -
                    deviance_term(x, 0.5 * n) - deviance_term(n - x, 0.5 * n);
  const double lf = std::log(2.0 * std::numbers::pi) + std::log(x) +
                    std::log1p(-x / n);
  return std::exp(lc - 0.5 * lf);
}

std::uint64_t binomial_half_inverse(std::uint64_t trials, double u) {
  if (!(u >= 0.0 && u < 1.0)) {
    throw ArgumentError("binomial_half_inverse: u must lie in [0, 1)");
  }
  if (trials == 0) return 0;
  // Start at the median, whose cdf is known exactly by symmetry, and walk.
  std::uint64_t k = trials / 2;
  double p = binomial_half_pmf(trials, k);
  double cdf = (trials % 2 == 1) ? 0.5 : 0.5 + 0.5 * p;
  if (u < cdf) {
    while (k > 0) {
      const double below = cdf - p;
      if (u >= below) break;
      p *= static_cast<double>(k) / static_cast<double>(trials - k + 1);
      --k;
      cdf = below;
      if (p == 0.0) break;
    }
    return k;
  }
  while (k < trials && u >= cdf) {
    p *= static_cast<double>(trials - k) / static_cast<double>(k + 1);
    ++k;
    cdf += p;
    if (p == 0.0) break;
  }
  return k;
}

}  // namespace simplex_gibbs
