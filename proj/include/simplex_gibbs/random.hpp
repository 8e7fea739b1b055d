#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace simplex_gibbs {

// Philox4x32-10 block function (Salmon et al., "Parallel random numbers: as
// easy as 1, 2, 3", SC 2011).
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter philox4x32(PhiloxCounter counter, PhiloxKey key);

// SplitMix64 finalizer; used to derive well-separated seeds.
std::uint64_t mix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

// Counter-based random stream. The output sequence is a pure function of
// (seed, stream_id, purpose): two streams constructed with the same triple
// produce bit-identical values, which is what coupling from the past needs
// to replay the randomness of any time step.
//
// Satisfies UniformRandomBitGenerator.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  RandomStream(std::uint64_t seed, std::uint64_t stream_id,
               std::uint32_t purpose = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()();

  // Uniform on [0, 1) with 53 random bits.
  double uniform01();
  // Uniform integer in [0, bound), bound > 0. Lemire's method.
  std::uint64_t uniform_index(std::uint64_t bound);
  // Standard exponential.
  double exponential();
  double standard_normal();
  // Gamma(shape, 1), Marsaglia-Tsang.
  double gamma(double shape);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }
  std::uint32_t purpose() const { return purpose_; }

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint32_t purpose_;
  std::uint32_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int available_ = 0;
};

}  // namespace simplex_gibbs
