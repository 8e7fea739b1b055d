#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace simplex_gibbs::stats {

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
  std::size_t n = 0;
};

// Kolmogorov limiting survival function Q(t) = 2 sum (-1)^(k-1) exp(-2 k^2 t^2).
double kolmogorov_survival(double t);

// One-sample KS against a continuous cdf. p-value from the limiting law with
// Stephens' small-sample correction (sqrt(n) + 0.12 + 0.11 / sqrt(n)) D.
KsResult ks_one_sample(std::span<const double> sample,
                       const std::function<double(double)>& cdf);
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

// Wilson score interval for a binomial proportion; z = 1.959964 is 95%.
Interval wilson(std::size_t successes, std::size_t trials, double z = 1.959963984540054);

double mean(std::span<const double> v);
// Sample standard deviation (n - 1 denominator).
double stddev(std::span<const double> v);
double standard_error(std::span<const double> v);
// Linear-interpolation quantile (type 7) of an unsorted sample.
double quantile(std::span<const double> v, double q);
double median(std::span<const double> v);

}  // namespace simplex_gibbs::stats
