#pragma once

// One-step couplings of two copies of the simplex Gibbs sampler.

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "simplex_gibbs/chain.hpp"
#include "simplex_gibbs/random.hpp"

namespace simplex_gibbs {

// Parameters of a subset coupling. Balancing w(S, .) across the two chains
// after updating (i, j) forces lambda_x = m * lambda_y + delta with
//   m     = (y_i + y_j) / (x_i + x_j)
//   delta = sum_{l in S \ {i}} (y_l - x_l) / (x_i + x_j).
struct SubsetContext {
  std::vector<std::size_t> subset;
  std::size_t i = 0;
  std::size_t j = 1;
  double m = 1.0;
  double delta = 0.0;
};

// Requires i in S, j not in S, and positive pair sums in both chains.
SubsetContext make_subset_context(const SimplexPoint& x, const SimplexPoint& y,
                                  std::size_t i, std::size_t j,
                                  std::span<const std::size_t> subset);

struct CoupleStepResult {
  SimplexPoint x_next;
  SimplexPoint y_next;
  double lambda_x = 0.0;
  double lambda_y = 0.0;
  bool success = true;
};

CoupleStepResult proportional_step(const SimplexPoint& x, const SimplexPoint& y,
                                   const StepDraw& d);

// A density on [0, 1] together with a sampler for it.
struct Density {
  std::function<double(double)> pdf;
  std::function<double(RandomStream&)> sample;

  static Density uniform();
  // Uniform on [lo, hi] within [0, 1].
  static Density uniform_on(double lo, double hi);
  static Density from_law(const LambdaLaw& law);
};

// Mixture construction for two densities with alpha * g <= f: Y ~ g, and
// X = Y with probability alpha, otherwise X is drawn from the remainder
// r = (f - alpha g) / (1 - alpha). Returns (X, Y). A remainder density below
// -1e-12 at any evaluated point raises PreconditionError.
std::pair<double, double> mixture_couple(const Density& f, const Density& g,
                                         double alpha, RandomStream& rng);

// Law of lambda_x after a failed maximal coupling of the uniform law: a
// mixture of at most two uniform pieces.
struct RemainderPiece {
  double lo = 0.0;
  double hi = 0.0;
  double density = 0.0;
};

struct RemainderLaw {
  std::vector<RemainderPiece> pieces;

  double mass() const;
  // u_piece selects the piece, u_within places the point inside it.
  double sample(double u_piece, double u_within) const;
};

// Remainder of the maximal coupling of lambda_x ~ U(0,1) with
// m * lambda_y + delta, lambda_y ~ U(0,1).
RemainderLaw uniform_remainder(double m, double delta);

// Probability that the maximal coupling for (m, delta) equates the subset
// weights: |[0,1] ∩ [delta, delta + m]| / max(1, m). Requires m > 0.
double success_probability(double m, double delta);

// 1 - 2 n^(b + 1 - e): lower bound on the subset-coupling success
// probability when sup |x - y| <= n^-e and all entries >= n^-b. May be
// negative (vacuous). Requires e > b.
double close_pair_success_bound(double n, double b, double e);
// The 1 - n^(5.5 - e) form used when the bound is applied to all couplings
// of a run; reported next to close_pair_success_bound.
double weight_coupling_bound(double n, double e);

// Outcome of coupling chain x to a reference chain y at one update.
struct SubsetOutcome {
  bool success = false;
  bool degenerate = false;  // zero pair sum in either chain
  double m = 0.0;
  double delta = 0.0;
  double lambda_x = 0.0;
  RemainderLaw remainder;  // filled on failure under the uniform law
};

// Core of the subset coupling. `x` is updated in place at (a, b) with
// a in `subset`, b outside it; `y` is the reference chain before its own
// update, which is lambda_y to coordinate a. The acceptance uniform
// `accept_u` and `remainder_rng` are the coupling's extra randomness.
//
// On success x's new a-entry is set to w(S, y_next) - sum_{S \ a} x so the
// subset weights agree exactly.
SubsetOutcome subset_couple_into(SimplexPoint& x, const SimplexPoint& y,
                                 std::size_t a, std::size_t b,
                                 std::span<const std::size_t> subset,
                                 double lambda_y, double accept_u,
                                 const LambdaLaw& law,
                                 RandomStream& remainder_rng);

// Two-chain subset coupling step (uniform law unless given). i in S,
// j not in S; zero pair sums are rejected.
CoupleStepResult subset_coupling_step(const SimplexPoint& x,
                                      const SimplexPoint& y, std::size_t i,
                                      std::size_t j,
                                      std::span<const std::size_t> subset,
                                      RandomStream& rng,
                                      const LambdaLaw& law = LambdaLaw::uniform());

}  // namespace simplex_gibbs
