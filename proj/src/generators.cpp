#include <taplab/generators.hpp>

#include <algorithm>
#include <limits>

#include <taplab/errors.hpp>

namespace taplab {

std::int64_t uniform_int(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw InvalidArgument("empty integer range");
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(rng());
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span;
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return lo + static_cast<std::int64_t>(v % span);
}

Rational infinitesimal() { return pow2(-20); }
Rational sqrt3_hat() { return Rational(26, 15); }

namespace {

Rational uniform_multiple(std::mt19937_64& rng, const Rational& lo, const Rational& hi, long den) {
  const Rational d(den);
  const std::int64_t a = to_int64((lo * d).ceil());
  const std::int64_t b = to_int64((hi * d).floor());
  if (b < a) throw InvalidArgument("work range contains no multiple of the granularity");
  return Rational(uniform_int(rng, a, b)) / d;
}

Rational gap(std::mt19937_64& rng, ArrivalPattern pattern, const GenParams& g) {
  const Rational unit = Rational(1) / Rational(g.denominator);
  switch (pattern) {
    case ArrivalPattern::Batch:
      return Rational(0);
    case ArrivalPattern::PoissonLike: {
      // geometric number of units with mean about the minimal work
      const std::int64_t mean_units = std::max<std::int64_t>(1, to_int64((g.work_min * Rational(g.denominator)).ceil()));
      std::int64_t units = 0;
      while (uniform_int(rng, 0, mean_units) != 0) ++units;
      return unit * Rational(units);
    }
    case ArrivalPattern::Bursty:
      if (uniform_int(rng, 0, 3) != 0) return Rational(0);
      return uniform_multiple(rng, g.work_min, g.work_max, g.denominator);
  }
  return Rational(0);
}

}  // namespace

Tap gen_random(const GenParams& g) {
  if (g.p < 2) throw InvalidArgument("at least two processors are required");
  if (!g.work_min.is_positive() || g.work_max < g.work_min) throw InvalidArgument("empty work range");
  if (g.denominator < 1) throw InvalidArgument("granularity denominator must be positive");
  std::mt19937_64 rng(g.seed);
  Tap tap{g.p, {}};
  Rational now;
  const Rational p(g.p);
  for (std::size_t k = 0; k < g.n; ++k) {
    if (k > 0) now += gap(rng, g.arrivals, g);
    Task t;
    t.id = static_cast<TaskId>(k);
    t.arrival = now;
    if (g.ratio == RatioDistribution::PowersOfTwo) {
      const long lo = log2_exact(ceil_pow2(g.work_min));
      const long hi = std::max(lo, log2_exact(floor_pow2(g.work_max)));
      t.sigma = pow2(uniform_int(rng, lo, hi));
      const long jmax = log2_exact(floor_pow2(p));
      t.pi = t.sigma * pow2(uniform_int(rng, 0, jmax));
    } else {
      t.sigma = uniform_multiple(rng, g.work_min, g.work_max, g.denominator);
      Rational hi = t.sigma * p;
      if (g.pi_max) hi = min(hi, max(*g.pi_max, t.sigma));
      if (g.ratio == RatioDistribution::Extremes) {
        t.pi = uniform_int(rng, 0, 1) ? hi : t.sigma;
      } else {
        t.pi = uniform_multiple(rng, t.sigma, hi, g.denominator);
      }
    }
    tap.tasks.push_back(std::move(t));
  }
  tap = normalize_tap(tap);
  validate_tap(tap);
  return tap;
}

Tap gen_geometric(int p) {
  if (p < 4) throw InvalidArgument("the geometric instance needs p >= 4");
  const long k = log2_exact(floor_pow2(Rational(p)));
  const Rational eps = infinitesimal();
  Tap tap{p, {}};
  TaskId id = 0;
  for (long i = 1; i <= k; ++i) {
    tap.tasks.push_back(Task{id++, pow2(i), pow2(i - 1) * Rational(p), eps * Rational(i), {}});
  }
  for (long r = 0; r < p - k; ++r) {
    tap.tasks.push_back(Task{id++, pow2(k), pow2(k) * Rational(p), eps * Rational(k + 1), {}});
  }
  validate_tap(tap);
  return tap;
}

Tap gen_randlb(int p, const std::vector<bool>& coins) {
  if (p < 4) throw InvalidArgument("the randomized lower-bound instance needs p >= 4");
  const Rational s3 = sqrt3_hat();
  Tap tap{p, {}};
  TaskId id = 0;
  for (std::size_t b = 0; b < coins.size(); ++b) {
    const Rational t0(static_cast<long>(10 * b));
    tap.tasks.push_back(Task{id++, s3 + Rational(1), Rational(2 * p), t0, {}});
    if (coins[b]) {
      for (int r = 0; r < p - 1; ++r) tap.tasks.push_back(Task{id++, s3, s3 * Rational(p), t0 + Rational(1), {}});
    }
  }
  validate_tap(tap);
  return tap;
}

Tap gen_randlb(int p, std::size_t n_blocks, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<bool> coins(n_blocks);
  for (std::size_t b = 0; b < n_blocks; ++b) coins[b] = uniform_int(rng, 0, 1) == 1;
  return gen_randlb(p, coins);
}

std::pair<Tap, Tap> gen_oblivious_pair(int p) {
  if (p < 4) throw InvalidArgument("the oblivious pair needs p >= 4");
  const std::int64_t m = isqrt_ceil(p);
  Tap a{p, {}}, b{p, {}};
  for (std::int64_t k = 0; k < m; ++k) {
    a.tasks.push_back(Task{k, Rational(1), Rational(1), Rational(0), {}});
    b.tasks.push_back(Task{k, Rational(1), Rational(p), Rational(0), {}});
  }
  return {a, b};
}

Tap gen_obliv_two_task(int p, const Rational& x, bool unparallelizable) {
  if (p < 2) throw InvalidArgument("at least two processors are required");
  Tap tap{p, {}};
  if (unparallelizable) {
    tap.tasks.push_back(Task{0, Rational(1), Rational(p), Rational(0), {}});
    tap.tasks.push_back(Task{1, Rational(1), Rational(p), Rational(0), {}});
  } else {
    if (x.is_negative() || x > Rational(1) - Rational(1, p)) throw InvalidArgument("threshold must lie in [0, 1 - 1/p]");
    tap.tasks.push_back(Task{0, Rational(1), Rational(p) * (x + Rational(1, p)), Rational(0), {}});
    tap.tasks.push_back(Task{1, Rational(1), Rational(1), Rational(0), {}});
  }
  validate_tap(tap);
  return tap;
}

Tap gen_mrt_cheap_expensive(int p, std::uint64_t seed) {
  const std::int64_t root = isqrt_floor(p);
  const std::int64_t fourth = isqrt_floor(root);
  if (root * root != p || fourth * fourth != root) throw InvalidArgument("p must be a fourth power");
  std::vector<bool> expensive(static_cast<std::size_t>(root + fourth), false);
  std::fill(expensive.begin(), expensive.begin() + fourth, true);
  std::mt19937_64 rng(seed);
  for (std::size_t k = expensive.size(); k > 1; --k) {
    const auto j = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<std::int64_t>(k - 1)));
    const bool tmp = expensive[k - 1];
    expensive[k - 1] = expensive[j];
    expensive[j] = tmp;
  }
  Tap tap{p, {}};
  for (std::size_t k = 0; k < expensive.size(); ++k) {
    tap.tasks.push_back(Task{static_cast<TaskId>(k), Rational(1), expensive[k] ? Rational(p) : Rational(1), Rational(0), {}});
  }
  return tap;
}

Tap gen_dtap_levels(int p, std::uint64_t seed) {
  if (p < 4 || !is_perfect_square(p)) throw InvalidArgument("level instances need a perfect-square p >= 4");
  const std::int64_t s = isqrt_floor(p);
  std::mt19937_64 rng(seed);
  Tap tap{p, {}};
  std::optional<TaskId> spawner;
  TaskId id = 0;
  for (std::int64_t lv = 0; lv < s; ++lv) {
    const TaskId first = id;
    for (std::int64_t k = 0; k < s; ++k) {
      Task t{id++, Rational(1), Rational(s), Rational(0), {}};
      if (spawner) t.deps.push_back(*spawner);
      tap.tasks.push_back(std::move(t));
    }
    spawner = first + uniform_int(rng, 0, s - 1);
  }
  validate_tap(tap);
  return tap;
}

Tap gen_emergency(int p, long ratio_exp, long shrink_exp, long offset) {
  if (p < 4 || !is_pow2(Rational(p))) throw InvalidArgument("emergency instances need a power-of-two p >= 4");
  const long top = log2_exact(Rational(p));
  if (ratio_exp < 0 || ratio_exp > top) throw InvalidArgument("ratio exponent out of range");
  if (shrink_exp < 0 || offset < 0) throw InvalidArgument("shrink and offset must be non-negative");
  const Rational big(8);
  Tap tap{p, {}};
  tap.tasks.push_back(Task{0, big, big * pow2(ratio_exp), Rational(0), {}});
  TaskId id = 1;
  for (long r = 0; r <= top; ++r) {
    if (r != ratio_exp) tap.tasks.push_back(Task{id++, big, big * pow2(r), Rational(0), {}});
  }
  const Rational small = big / pow2(shrink_exp);
  tap.tasks.push_back(Task{id, small, small * pow2(ratio_exp), Rational(3) * big + Rational(offset, 8), {}});
  validate_tap(tap);
  return tap;
}

std::vector<std::string> generator_names() {
  return {"random", "golden", "geometric", "randlb", "oblivious-a", "oblivious-b", "two-task", "cheap-expensive", "levels", "emergency"};
}

}  // namespace taplab
