#include "simplex_gibbs/couplings.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "simplex_gibbs/errors.hpp"

namespace simplex_gibbs {

using Unit = SimplexPoint::Unit;

namespace {

bool contains(std::span<const std::size_t> subset, std::size_t k) {
  return std::find(subset.begin(), subset.end(), k) != subset.end();
}

void check_subset_args(std::size_t n, std::size_t i, std::size_t j,
                       std::span<const std::size_t> subset) {
  if (i >= n || j >= n) throw ArgumentError("subset coupling: index out of range");
  if (i == j) throw ArgumentError("subset coupling: i and j must differ");
  if (!contains(subset, i)) throw ArgumentError("subset coupling: i must be in S");
  if (contains(subset, j)) throw ArgumentError("subset coupling: j must not be in S");
  for (std::size_t k : subset) {
    if (k >= n) throw ArgumentError("subset coupling: subset index out of range");
  }
}

// sum over S \ {a} of (y - x), in units.
__int128 rest_difference(const SimplexPoint& x, const SimplexPoint& y,
                         std::span<const std::size_t> subset, std::size_t a) {
  __int128 diff = 0;
  for (std::size_t k : subset) {
    if (k == a) continue;
    diff += static_cast<__int128>(y.unit(k)) - static_cast<__int128>(x.unit(k));
  }
  return diff;
}

double sample_remainder_generic(const LambdaLaw& law, double m, double delta,
                                RandomStream& rng) {
  // Rejection from the law itself: accept w with probability
  // 1 - min(1, h(w) / f(w)), h being the density of m * lambda_y + delta.
  constexpr int kMaxTries = 10'000'000;
  for (int t = 0; t < kMaxTries; ++t) {
    const double w = law.sample(rng);
    const double fw = law.pdf(w);
    const double hw = law.pdf((w - delta) / m) / m;
    const double accept = fw > 0.0 ? std::max(0.0, 1.0 - hw / fw) : 0.0;
    if (rng.uniform01() < accept) return w;
  }
  throw PreconditionError("subset coupling: remainder sampler did not terminate");
}

}  // namespace

SubsetContext make_subset_context(const SimplexPoint& x, const SimplexPoint& y,
                                  std::size_t i, std::size_t j,
                                  std::span<const std::size_t> subset) {
  if (x.dim() != y.dim()) throw ArgumentError("subset coupling: dimension mismatch");
  check_subset_args(x.dim(), i, j, subset);
  const Unit sx = x.unit(i) + x.unit(j);
  const Unit sy = y.unit(i) + y.unit(j);
  if (sx == 0 || sy == 0) throw ArgumentError("subset coupling: zero pair sum");
  SubsetContext ctx;
  ctx.subset.assign(subset.begin(), subset.end());
  ctx.i = i;
  ctx.j = j;
  ctx.m = static_cast<double>(sy) / static_cast<double>(sx);
  ctx.delta = static_cast<double>(rest_difference(x, y, subset, i)) /
              static_cast<double>(sx);
  return ctx;
}

CoupleStepResult proportional_step(const SimplexPoint& x, const SimplexPoint& y,
                                   const StepDraw& d) {
  if (x.dim() != y.dim()) throw ArgumentError("proportional_step: dimension mismatch");
  return CoupleStepResult{step(x, d), step(y, d), d.lambda, d.lambda, true};
}

// ---------------------------------------------------------------------------
// Mixture construction

Density Density::uniform() { return uniform_on(0.0, 1.0); }

Density Density::uniform_on(double lo, double hi) {
  if (!(0.0 <= lo && lo < hi && hi <= 1.0)) {
    throw ArgumentError("Density::uniform_on: need 0 <= lo < hi <= 1");
  }
  return Density{
      [lo, hi](double t) { return (t >= lo && t <= hi) ? 1.0 / (hi - lo) : 0.0; },
      [lo, hi](RandomStream& rng) { return lo + (hi - lo) * rng.uniform01(); }};
}

Density Density::from_law(const LambdaLaw& law) {
  return Density{[law](double t) { return law.pdf(t); },
                 [law](RandomStream& rng) { return law.sample(rng); }};
}

std::pair<double, double> mixture_couple(const Density& f, const Density& g,
                                         double alpha, RandomStream& rng) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ArgumentError("mixture_couple: alpha must lie in (0, 1)");
  }
  constexpr double kTolerance = 1e-12;
  auto remainder = [&](double t) { return (f.pdf(t) - alpha * g.pdf(t)) / (1.0 - alpha); };

  const double y = g.sample(rng);
  if (remainder(y) < -kTolerance) {
    throw PreconditionError("mixture_couple: alpha * g exceeds f");
  }
  if (rng.uniform01() < alpha) return {y, y};

  // r <= f / (1 - alpha): propose from f, accept with r (1 - alpha) / f.
  constexpr int kMaxTries = 10'000'000;
  for (int t = 0; t < kMaxTries; ++t) {
    const double x = f.sample(rng);
    const double r = remainder(x);
    if (r < -kTolerance) throw PreconditionError("mixture_couple: alpha * g exceeds f");
    const double fx = f.pdf(x);
    const double accept = fx > 0.0 ? std::max(0.0, r * (1.0 - alpha) / fx) : 0.0;
    if (rng.uniform01() < accept) return {x, y};
  }
  throw PreconditionError("mixture_couple: remainder sampler did not terminate");
}

// ---------------------------------------------------------------------------
// Subset coupling

double RemainderLaw::mass() const {
  double total = 0.0;
  for (const auto& p : pieces) total += (p.hi - p.lo) * p.density;
  return total;
}

double RemainderLaw::sample(double u_piece, double u_within) const {
  const double total = mass();
  if (!(total > 0.0)) return u_within;
  double target = u_piece * total;
  for (const auto& p : pieces) {
    const double w = (p.hi - p.lo) * p.density;
    if (target < w || &p == &pieces.back()) {
      return p.lo + u_within * (p.hi - p.lo);
    }
    target -= w;
  }
  return u_within;
}

RemainderLaw uniform_remainder(double m, double delta) {
  if (!(m > 0.0)) throw ArgumentError("uniform_remainder: m must be > 0");
  RemainderLaw law;
  const double image_lo = delta;
  const double image_hi = delta + m;
  const double overlap_lo = std::clamp(image_lo, 0.0, 1.0);
  const double overlap_hi = std::clamp(image_hi, 0.0, 1.0);
  auto add = [&](double lo, double hi, double density) {
    if (hi > lo && density > 0.0) law.pieces.push_back({lo, hi, density});
  };
  // Below the image, then the overlap, then above the image.
  add(0.0, overlap_lo, 1.0);
  if (m > 1.0) add(overlap_lo, overlap_hi, 1.0 - 1.0 / m);
  add(overlap_hi, 1.0, 1.0);
  return law;
}

double success_probability(double m, double delta) {
  if (!(m > 0.0)) throw ArgumentError("success_probability: m must be > 0");
  const double overlap = std::min(1.0, delta + m) - std::max(0.0, delta);
  return std::clamp(overlap / std::max(1.0, m), 0.0, 1.0);
}

double close_pair_success_bound(double n, double b, double e) {
  if (!(e > b)) throw ArgumentError("close_pair_success_bound: requires e > b");
  return 1.0 - 2.0 * std::pow(n, b + 1.0 - e);
}

double weight_coupling_bound(double n, double e) {
  return 1.0 - std::pow(n, 5.5 - e);
}

SubsetOutcome subset_couple_into(SimplexPoint& x, const SimplexPoint& y,
                                 std::size_t a, std::size_t b,
                                 std::span<const std::size_t> subset,
                                 double lambda_y, double accept_u,
                                 const LambdaLaw& law,
                                 RandomStream& remainder_rng) {
  SubsetOutcome out;
  const Unit sx = x.unit(a) + x.unit(b);
  const Unit sy = y.unit(a) + y.unit(b);
  if (sx == 0 || sy == 0) {
    // Nothing to balance against; x draws its own update.
    out.degenerate = true;
    out.lambda_x = law.sample(remainder_rng);
    x.redistribute(a, b, scale_units(sx, out.lambda_x));
    return out;
  }
  const __int128 rest = rest_difference(x, y, subset, a);
  out.m = static_cast<double>(sy) / static_cast<double>(sx);
  out.delta = static_cast<double>(rest) / static_cast<double>(sx);
  out.lambda_x = out.m * lambda_y + out.delta;

  // Enforced share for a: w(S, y_next) - sum_{S \ a} x.
  const Unit y_a_next = scale_units(sy, lambda_y);
  const __int128 forced = static_cast<__int128>(y_a_next) + rest;
  const bool in_range = forced >= 0 && forced <= static_cast<__int128>(sx);

  bool accepted = false;
  if (in_range) {
    // Accept the proposal with min(1, f(lambda_x) / h(lambda_x)), h being
    // the density of m * lambda_y + delta; for the uniform law this is
    // min(1, m).
    double ratio = out.m;
    if (!law.is_uniform()) {
      const double fy = law.pdf(lambda_y);
      const double lx = std::clamp(out.lambda_x, 0.0, 1.0);
      ratio = fy > 0.0 ? out.m * law.pdf(lx) / fy
                       : std::numeric_limits<double>::infinity();
    }
    accepted = ratio >= 1.0 || accept_u < ratio;
  }

  if (accepted) {
    out.success = true;
    x.redistribute(a, b, static_cast<Unit>(forced));
    return out;
  }

  if (law.is_uniform()) {
    out.remainder = uniform_remainder(out.m, out.delta);
    const double u1 = remainder_rng.uniform01();
    const double u2 = remainder_rng.uniform01();
    out.lambda_x = out.remainder.sample(u1, u2);
  } else {
    out.lambda_x = sample_remainder_generic(law, out.m, out.delta, remainder_rng);
  }
  x.redistribute(a, b, scale_units(sx, std::clamp(out.lambda_x, 0.0, 1.0)));
  return out;
}

CoupleStepResult subset_coupling_step(const SimplexPoint& x,
                                      const SimplexPoint& y, std::size_t i,
                                      std::size_t j,
                                      std::span<const std::size_t> subset,
                                      RandomStream& rng, const LambdaLaw& law) {
  make_subset_context(x, y, i, j, subset);  // argument checks only
  const double lambda_y = law.sample(rng);
  const double accept_u = rng.uniform01();
  CoupleStepResult result{x, y, 0.0, lambda_y, false};
  const SubsetOutcome outcome =
      subset_couple_into(result.x_next, y, i, j, subset, lambda_y, accept_u, law, rng);
  result.y_next.redistribute(i, j, scale_units(y.unit(i) + y.unit(j), lambda_y));
  result.lambda_x = outcome.lambda_x;
  result.success = outcome.success;
  return result;
}

}  // namespace simplex_gibbs
