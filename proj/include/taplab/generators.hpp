#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <taplab/task.hpp>

namespace taplab {

// Unbiased integer in [lo, hi] from a 64-bit Mersenne twister.
std::int64_t uniform_int(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi);

enum class RatioDistribution { Uniform, Extremes, PowersOfTwo };
enum class ArrivalPattern { Batch, PoissonLike, Bursty };

struct GenParams {
  int p = 4;
  std::size_t n = 5;
  Rational work_min{1};  // serial work range
  Rational work_max{8};
  RatioDistribution ratio = RatioDistribution::Uniform;
  ArrivalPattern arrivals = ArrivalPattern::Batch;
  std::uint64_t seed = 1;
  long denominator = 1;               // works and arrivals are multiples of 1/denominator
  std::optional<Rational> pi_max;     // optional cap on parallel work
};

Tap gen_random(const GenParams& params);

// Arrival separation standing in for "immediately after".
Rational infinitesimal();
// Rational stand-in for sqrt(3).
Rational sqrt3_hat();

Tap gen_geometric(int p);
// Blocks at times 0, 10, 20, ...; coins[i] true selects the block with latecomers.
Tap gen_randlb(int p, const std::vector<bool>& coins);
Tap gen_randlb(int p, std::size_t n_blocks, std::uint64_t seed);
std::pair<Tap, Tap> gen_oblivious_pair(int p);

// Two unit-serial tasks at time 0. Threshold variant: pi_1 = p(x + 1/p),
// pi_2 = 1. Otherwise both tasks are unparallelizable (pi = p).
Tap gen_obliv_two_task(int p, const Rational& x, bool unparallelizable = false);

Tap gen_mrt_cheap_expensive(int p, std::uint64_t seed);
Tap gen_dtap_levels(int p, std::uint64_t seed);

// Drives the non-cancelling scheduler into its emergency modes: a task of
// ratio 2^ratio_exp crowded by one task of every other power-of-two ratio (all
// serial work 8, time 0), then a task of the same ratio and serial work
// 8 / 2^shrink_exp arriving at 24 + offset/8, when the crowd leaves the pool
// of the inner run at the default inner scale.
Tap gen_emergency(int p, long ratio_exp, long shrink_exp, long offset);

// Names accepted by the command line generator.
std::vector<std::string> generator_names();

}  // namespace taplab
