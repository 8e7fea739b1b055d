#include "simplex_gibbs/stats.hpp"

#include <algorithm>
#include <cmath>

#include "simplex_gibbs/errors.hpp"

namespace simplex_gibbs::stats {

double kolmogorov_survival(double t) {
  if (t <= 0.0) return 1.0;
  if (t < 0.2) return 1.0;  // series converges too slowly; Q is 1 to double precision
  double total = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * t * t);
    total += (k % 2 == 1 ? term : -term);
    if (term < 1e-18) break;
  }
  return std::clamp(2.0 * total, 0.0, 1.0);
}

namespace {

double corrected_p(double d, double effective_n) {
  const double root = std::sqrt(effective_n);
  return kolmogorov_survival((root + 0.12 + 0.11 / root) * d);
}

}  // namespace

KsResult ks_one_sample(std::span<const double> sample,
                       const std::function<double(double)>& cdf) {
  if (sample.empty()) throw ArgumentError("ks_one_sample: empty sample");
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    const double f = cdf(sorted[k]);
    d = std::max({d, (k + 1) / n - f, f - k / n});
  }
  return KsResult{d, corrected_p(d, n), sorted.size()};
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw ArgumentError("ks_two_sample: empty sample");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(i / nx - j / ny));
  }
  return KsResult{d, corrected_p(d, nx * ny / (nx + ny)), x.size() + y.size()};
}

Interval wilson(std::size_t successes, std::size_t trials, double z) {
  if (trials == 0) throw ArgumentError("wilson: trials must be >= 1");
  if (successes > trials) throw ArgumentError("wilson: successes exceed trials");
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
  const double half =
      z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / (1.0 + z2 / n);
  return Interval{std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

double mean(std::span<const double> v) {
  if (v.empty()) throw ArgumentError("mean: empty sample");
  double total = 0.0;
  for (double x : v) total += x;
  return total / static_cast<double>(v.size());
}

double stddev(std::span<const double> v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

double standard_error(std::span<const double> v) {
  if (v.empty()) throw ArgumentError("standard_error: empty sample");
  return stddev(v) / std::sqrt(static_cast<double>(v.size()));
}

double quantile(std::span<const double> v, double q) {
  if (v.empty()) throw ArgumentError("quantile: empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw ArgumentError("quantile: q must be in [0, 1]");
  std::vector<double> sorted(v.begin(), v.end());
  std::sort(sorted.begin(), sorted.end());
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double median(std::span<const double> v) { return quantile(v, 0.5); }

}  // namespace simplex_gibbs::stats
