#pragma once

// Gibbs sampler on the n-simplex: state types and single-step dynamics.
//
// Coordinates are 0-based inside the library. JSON, the CLI and the python
// module use 1-based coordinates and convert at the boundary.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "simplex_gibbs/random.hpp"

namespace simplex_gibbs {

// A point of the simplex {x : x_k >= 0, sum_k x_k = 1}, n >= 2.
//
// Entries are held as fixed-point integers ("units") with the total pinned
// to exactly 2^62. A pair update writes (round(lambda * s), s - that), so the
// total and the weight of every index set untouched by an update are
// conserved exactly, and two chains that agree agree bit-for-bit.
class SimplexPoint {
 public:
  using Unit = std::uint64_t;
  static constexpr int kScaleBits = 62;
  static constexpr Unit kTotal = Unit{1} << kScaleBits;
  static constexpr double kUnit = 0x1.0p-62;

  // Validates (n >= 2, entries >= 0, |sum - 1| <= 1e-9) and quantizes.
  static SimplexPoint from_values(std::span<const double> values);
  // Units must sum to kTotal exactly.
  static SimplexPoint from_units(std::vector<Unit> units);
  static SimplexPoint vertex(std::size_t n, std::size_t k);
  static SimplexPoint center(std::size_t n);

  std::size_t dim() const { return units_.size(); }
  double operator[](std::size_t k) const {
    return static_cast<double>(units_[k]) * kUnit;
  }
  Unit unit(std::size_t k) const { return units_[k]; }
  std::span<const Unit> units() const { return units_; }
  std::vector<double> values() const;
  double min_value() const;

  // Sets entry i to `to_i` units and entry j to the rest of the pair sum.
  // Requires i != j and to_i <= unit(i) + unit(j).
  void redistribute(std::size_t i, std::size_t j, Unit to_i);

  friend bool operator==(const SimplexPoint&, const SimplexPoint&) = default;

 private:
  explicit SimplexPoint(std::vector<Unit> units) : units_(std::move(units)) {}
  std::vector<Unit> units_;
};

// round(lambda * s) computed exactly; lambda in [0, 1].
SimplexPoint::Unit scale_units(SimplexPoint::Unit s, double lambda);

// One time step's randomness: the coordinate pair i < j and the update
// variable lambda.
struct StepDraw {
  std::size_t i = 0;
  std::size_t j = 1;
  double lambda = 0.5;

  void validate(std::size_t n) const;
  friend bool operator==(const StepDraw&, const StepDraw&) = default;
};

// Law of the update variable. Uniform(0,1), or a symmetric Beta(a, a) as the
// concrete member of the symmetric-cdf family F(x) = 1 - F(1 - x).
class LambdaLaw {
 public:
  enum class Kind { kUniform, kSymmetricBeta };

  static LambdaLaw uniform() { return LambdaLaw(Kind::kUniform, 1.0); }
  static LambdaLaw symmetric_beta(double a);
  // "uniform" or "beta:<a>".
  static LambdaLaw parse(std::string_view text);

  Kind kind() const { return kind_; }
  bool is_uniform() const { return kind_ == Kind::kUniform; }
  double shape() const { return shape_; }
  std::string to_string() const;

  double sample(RandomStream& rng) const;
  double pdf(double x) const;
  double cdf(double x) const;

  // E[lambda^2].
  double second_moment() const;
  // sup |F''| on (0,1); +inf when the density has unbounded slope.
  double cdf_curvature_sup() const;
  // ||F''||_inf / (1 - 2 E[lambda^2]), the rate constant for the mixing
  // time of the generalized walk. Reported only.
  double mixing_constant() const;

  friend bool operator==(const LambdaLaw&, const LambdaLaw&) = default;

 private:
  LambdaLaw(Kind kind, double shape) : kind_(kind), shape_(shape) {}
  Kind kind_;
  double shape_;
};

// Uniform over the n(n-1)/2 unordered pairs, lambda from `law`.
StepDraw sample_step_draw(std::size_t n, const LambdaLaw& law,
                          RandomStream& rng);

SimplexPoint step(const SimplexPoint& x, const StepDraw& d);
void step_in_place(SimplexPoint& x, const StepDraw& d);

// Uniform on the simplex: normalized independent standard exponentials.
SimplexPoint sample_uniform_simplex(std::size_t n, RandomStream& rng);
// Stationary law of the chain driven by `law`: the uniform simplex, or
// Dirichlet(a, ..., a) under a symmetric Beta(a, a) update.
SimplexPoint sample_stationary(std::size_t n, const LambdaLaw& law, RandomStream& rng);

// w(S, x) = sum of x over S. Indices must be in range; repeated indices are
// rejected.
double weight(std::span<const std::size_t> subset, const SimplexPoint& x);
SimplexPoint::Unit weight_units(std::span<const std::size_t> subset,
                                const SimplexPoint& x);

// Squared Euclidean distance.
double sq_distance(const SimplexPoint& x, const SimplexPoint& y);

// Balls-in-boxes analogue: M indistinguishable balls in n boxes.
struct Composition {
  std::vector<std::uint64_t> counts;

  std::uint64_t total() const;
  std::size_t dim() const { return counts.size(); }
  void validate() const;
  std::vector<double> normalized() const;
  friend bool operator==(const Composition&, const Composition&) = default;
};

// Redistributes the balls of boxes i and j, each ball switching boxes with
// probability 1/2: the new count at i is Binomial(c_i + c_j, 1/2).
Composition discrete_step(const Composition& c, std::size_t i, std::size_t j,
                          RandomStream& rng);
// Same update driven by an explicit uniform, for coupled runs.
void discrete_step_in_place(Composition& c, std::size_t i, std::size_t j,
                            double u);

// Exact inversion sampler for Binomial(trials, 1/2): the smallest k with
// P[X <= k] > u.
std::uint64_t binomial_half_inverse(std::uint64_t trials, double u);
// P[X = k] for X ~ Binomial(trials, 1/2), accurate to a few ulps in the bulk.
double binomial_half_pmf(std::uint64_t trials, std::uint64_t k);

}  // namespace simplex_gibbs
