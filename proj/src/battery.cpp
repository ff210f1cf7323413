#include <taplab/battery.hpp>

#include <algorithm>
#include <chrono>
#include <future>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include <taplab/adversaries.hpp>
#include <taplab/dtap.hpp>
#include <taplab/errors.hpp>
#include <taplab/generators.hpp>
#include <taplab/metrics.hpp>
#include <taplab/oracle.hpp>
#include <taplab/registry.hpp>
#include <taplab/sched_awake.hpp>
#include <taplab/sched_mrt.hpp>
#include <taplab/tap_json.hpp>

namespace taplab {

namespace {

// Pinned thresholds and corpus sizes.
constexpr std::size_t kOracleInstances = 120;
constexpr std::size_t kAwakeInstances = 1200;
constexpr std::size_t kMrtInstances = 1000;
constexpr std::size_t kRandomDtaps = 240;
constexpr int kGoldenP = 100;
constexpr int kGeometricP = 16;
constexpr int kNonpreemptiveP = 16;
const Rational kBalBound(3);
const Rational kUnkBound(6);
const Rational kUnsaturatedShare(1, 2);
const Rational kGoldenSlack(1, 100);
const Rational kWitnessTrtBound(4);
const Rational kEquiGrowth(2);
const Rational kRigidGrowth(5);
const Rational kEquiSpread(2);
const Rational kLevelsUpper(2);
constexpr std::size_t kCraftedMinimum = 20;

// Runtime limits in seconds.
constexpr double kLimitA1 = 180, kLimitA2 = 300, kLimitA3 = 300, kLimitA4 = 60, kLimitA5 = 60, kLimitA6 = 300,
                 kLimitA7 = 300, kLimitA8 = 600, kLimitA9 = 180, kLimitA10 = 120, kLimitA11 = 300,
                 kLimitTotal = 2400;

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(base), static_cast<std::uint32_t>(base >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(index)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

// Validates and fingerprints every trace a criterion produces.
class TraceLedger {
 public:
  void record(const Trace& trace, const std::vector<std::string>& violations) {
    ++traces_;
    violations_ += violations.size();
    if (!violations.empty() && first_.empty()) first_ = violations.front();
    feed(std::to_string(trace_digest(trace)));
  }
  void record(const Trace& trace) { record(trace, validate_trace(trace)); }
  void record(const RunResult& r) { record(r.trace, r.violations); }

  void feed(const std::string& s) {
    for (unsigned char c : s) {
      digest_ ^= c;
      digest_ *= 0x100000001b3ULL;
    }
  }

  std::size_t traces() const { return traces_; }
  std::size_t violations() const { return violations_; }
  const std::string& first_violation() const { return first_; }
  std::uint64_t digest() const { return digest_; }

 private:
  std::size_t traces_ = 0;
  std::size_t violations_ = 0;
  std::string first_;
  std::uint64_t digest_ = 0xcbf29ce484222325ULL;
};

struct Outcome {
  CriterionResult result;
  std::size_t violations = 0;
  std::string first_violation;
  std::uint64_t digest = 0;
};

// Collects failures and keeps the first witness.
class Checker {
 public:
  void fail(const std::string& what, const Tap* witness = nullptr) {
    ++failures_;
    if (first_.empty()) {
      first_ = what;
      if (witness) witness_ = tap_to_json(*witness);
    }
  }
  void require(bool ok, const std::string& what, const Tap* witness = nullptr) {
    if (!ok) fail(what, witness);
  }
  bool ok() const { return failures_ == 0; }
  std::size_t failures() const { return failures_; }
  const std::string& first() const { return first_; }
  const std::string& witness() const { return witness_; }

 private:
  std::size_t failures_ = 0;
  std::string first_;
  std::string witness_;
};

CriterionResult make_result(const char* id, const char* group, std::string title) {
  CriterionResult r;
  r.id = id;
  r.group = group;
  r.title = std::move(title);
  return r;
}

struct Max {
  std::optional<Rational> value;
  void add(const Rational& v) {
    if (!value || *value < v) value = v;
  }
  std::string str() const { return value ? value->str() : "-"; }
};

std::string approx(const Rational& r) {
  std::ostringstream os;
  os.precision(6);
  os << r.to_double();
  return os.str();
}

EngineConfig engine(int p, const Rational& budget_factor, bool allow_cancel = false) {
  EngineConfig ec;
  ec.processor_budget = budget_factor * Rational(p);
  ec.allow_cancel = allow_cancel;
  return ec;
}

// Runs, validates and records one simulation.
Trace checked_run(const Tap& tap, Scheduler& sched, const EngineConfig& ec, TraceLedger& ledger, Checker& check) {
  Trace tr = simulate(tap, sched, ec);
  const auto v = validate_trace(tr, tap, ec);
  ledger.record(tr, v);
  if (!v.empty()) check.fail(sched.name() + ": trace violation: " + v.front(), &tap);
  return tr;
}

// Processor count at which each task type runs in parallel, slice by slice.
std::size_t max_parallel_same_type(const Trace& tr) {
  std::map<TaskId, std::vector<std::pair<Rational, Decision>>> starts;
  for (const StartEvent& s : tr.starts) starts[s.id].emplace_back(s.time, s.decision);
  std::map<TaskId, const Task*> tasks;
  for (const Task& t : tr.tasks) tasks[t.id] = &t;
  std::size_t worst = 0;
  for (const Slice& sl : tr.slices) {
    std::map<std::pair<Rational, Rational>, std::size_t> per_type;
    for (const auto& [id, rate] : sl.alloc) {
      std::optional<Decision> d;
      for (const auto& [time, dec] : starts[id]) {
        if (time <= sl.start) d = dec;
      }
      if (d != Decision::Parallel) continue;
      const Task& t = *tasks.at(id);
      worst = std::max(worst, ++per_type[{t.pi / t.sigma, t.sigma}]);
    }
  }
  return worst;
}

// Time before `until` with fewer busy processors than p.
Rational unsaturated_time(const Trace& tr, const Rational& until) {
  Rational total;
  const Rational p(tr.p);
  for (const Slice& sl : tr.slices) {
    if (!(sl.start < until)) break;
    if (sl.alloc.total() < p) total += min(sl.end, until) - sl.start;
  }
  return total;
}

Tap awake_corpus_instance(std::uint64_t seed, std::size_t i) {
  static const int ps[] = {4, 8, 16};
  GenParams g;
  g.p = ps[i % 3];
  g.n = 1 + (i / 3) % 10;
  g.arrivals = static_cast<ArrivalPattern>((i / 30) % 3);
  g.ratio = static_cast<RatioDistribution>((i / 90) % 3);
  g.denominator = (i / 270) % 2 == 0 ? 1 : 2;
  g.seed = derive_seed(seed, 2, i);
  return gen_random(g);
}

Tap mrt_corpus_instance(std::uint64_t seed, std::size_t i) {
  static const int ps[] = {4, 8, 16};
  GenParams g;
  g.p = ps[i % 3];
  g.n = 1 + (i / 3) % 12;
  g.arrivals = static_cast<ArrivalPattern>((i / 36) % 3);
  g.ratio = RatioDistribution::PowersOfTwo;
  g.work_min = Rational(1, 2);
  g.work_max = Rational(8);
  g.denominator = 2;
  g.seed = derive_seed(seed, 6, i);
  return round_pow2(gen_random(g));
}

Rational common_grid(const Tap& tap) {
  const std::size_t n = tap.tasks.size();
  mpz_class l = 1;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    std::vector<Decision> d(n);
    for (std::size_t k = 0; k < n; ++k) d[k] = (mask >> k) & 1 ? Decision::Parallel : Decision::Serial;
    const Rational g = mwf_alignment_grid(tap, d);
    mpz_class den = g.denominator();
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), den.get_mpz_t());
  }
  return Rational(1) / from_mpz(l);
}

// ---------------------------------------------------------------------------

CriterionResult a1_oracle(const BatteryOptions& o, TraceLedger& ledger) {
  CriterionResult r = make_result("A1", "oracle", "exhaustive awake optimum equals the grid search optimum");
  Checker check;
  std::size_t compared = 0;
  for (std::size_t i = 0; i < kOracleInstances; ++i) {
    std::mt19937_64 rng(derive_seed(o.seed, 1, i));
    Tap tap{static_cast<int>(uniform_int(rng, 2, 4)), {}};
    const auto n = uniform_int(rng, 1, 3);
    for (TaskId id = 0; id < n; ++id) {
      const auto sigma = uniform_int(rng, 1, 8);
      const auto pi = uniform_int(rng, sigma, std::min<std::int64_t>(8, sigma * tap.p));
      tap.tasks.push_back(Task{id, Rational(sigma), Rational(pi), Rational(uniform_int(rng, 0, 4)), {}});
    }
    std::stable_sort(tap.tasks.begin(), tap.tasks.end(),
                     [](const Task& a, const Task& b) { return a.arrival < b.arrival; });
    for (std::size_t k = 0; k < tap.tasks.size(); ++k) tap.tasks[k].id = static_cast<TaskId>(k);
    tap = normalize_tap(tap);
    validate_tap(tap);
    const OptAwake exact = opt_awake_exhaustive(tap);
    const Rational grid = common_grid(tap);
    try {
      const Rational searched = grid_opt(tap, Objective::Awake, grid, GridLimits{4, 200000, 4000000});
      ++compared;
      check.require(searched == exact.value,
                    "oracle " + exact.value.str() + " != grid " + searched.str() + " (grid " + grid.str() + ")", &tap);
    } catch (const InstanceTooLarge&) {
    }
    std::map<TaskId, Decision> dec;
    for (std::size_t k = 0; k < tap.tasks.size(); ++k) dec[tap.tasks[k].id] = exact.decisions[k];
    FixedDecisionScheduler replay(dec);
    const Trace tr = checked_run(tap, replay, engine(tap.p, Rational(1)), ledger, check);
    check.require(metrics_from_trace(tr).awake == exact.value, "replayed decisions miss the oracle value", &tap);
  }
  r.instances = compared;
  check.require(compared >= 100, "fewer than 100 instances compared");
  r.passed = check.ok();
  r.detail = std::to_string(compared) + " instances compared exactly, " + std::to_string(check.failures()) +
             " mismatches" + (check.ok() ? "" : "; first: " + check.first());
  r.witness = check.witness();
  return r;
}

struct AwakeRow {
  Tap tap;
  Rational opt;
};

std::vector<AwakeRow> awake_corpus(std::uint64_t seed) {
  std::vector<AwakeRow> rows;
  rows.reserve(kAwakeInstances);
  for (std::size_t i = 0; i < kAwakeInstances; ++i) {
    Tap tap = awake_corpus_instance(seed, i);
    rows.push_back({tap, opt_awake_exhaustive(tap).value});
  }
  return rows;
}

CriterionResult a2_bal(const BatteryOptions& o, TraceLedger& ledger) {
  CriterionResult r = make_result("A2", "awake", std::string(o.mutant_bal ? "mutated " : "") + "BAL awake ratio at most 3 and always balanced");
  Checker check;
  Max worst;
  std::size_t checks = 0;
  for (const AwakeRow& row : awake_corpus(o.seed)) {
    BalScheduler bal(o.mutant_bal);
    const Trace tr = checked_run(row.tap, bal, engine(row.tap.p, Rational(1)), ledger, check);
    const Rational ratio = metrics_from_trace(tr).awake / row.opt;
    worst.add(ratio);
    checks += bal.balance_checks();
    check.require(ratio <= kBalBound, "awake ratio " + ratio.str() + " exceeds 3", &row.tap);
    check.require(bal.jagged_times().empty(), "jagged at time " +
                  (bal.jagged_times().empty() ? std::string() : bal.jagged_times().front().str()), &row.tap);
  }
  r.instances = kAwakeInstances;
  r.passed = check.ok();
  r.detail = "max ratio " + worst.str() + " (" + approx(*worst.value) + "), " + std::to_string(checks) +
             " balance checks, " + std::to_string(check.failures()) + " failures" +
             (check.ok() ? "" : "; first: " + check.first());
  r.witness = check.witness();
  return r;
}

CriterionResult a3_unk(const BatteryOptions& o, TraceLedger& ledger) {
  CriterionResult r = make_result("A3", "awake", "UNK awake ratio at most 6; unsaturated time at most half when never idle");
  Checker check;
  Max worst, worst_share;
  std::size_t busy_corpus = 0;
  for (const AwakeRow& row : awake_corpus(o.seed)) {
    UnkScheduler unk;
    const Trace tr = checked_run(row.tap, unk, engine(row.tap.p, Rational(1)), ledger, check);
    const Metrics m = metrics_from_trace(tr);
    const Rational ratio = m.awake / row.opt;
    worst.add(ratio);
    check.require(ratio <= kUnkBound, "awake ratio " + ratio.str() + " exceeds 6", &row.tap);
    Rational last;
    for (const auto& [id, t] : m.completion_times) last = max(last, t);
    const bool never_idle = row.tap.tasks.front().arrival.is_zero() && m.awake == last;
    if (!never_idle) continue;
    ++busy_corpus;
    const Rational share = unsaturated_time(tr, last) / m.awake;
    worst_share.add(share);
    check.require(share <= kUnsaturatedShare, "unsaturated share " + share.str() + " exceeds 1/2", &row.tap);
  }
  check.require(busy_corpus > 0, "no never-idle instances in the corpus");
  r.instances = kAwakeInstances;
  r.passed = check.ok();
  r.detail = "max ratio " + worst.str() + " (" + approx(*worst.value) + "); " + std::to_string(busy_corpus) +
             " never-idle runs, max unsaturated share " + worst_share.str() +
             (check.ok() ? "" : "; first: " + check.first());
  r.witness = check.witness();
  return r;
}

CriterionResult a4_golden(const BatteryOptions&, TraceLedger& ledger) {
  CriterionResult r = make_result("A4", "awake", "golden adversary forces ratio near golden at p = 100");
  Checker check;
  const Rational floor = golden_hat() - Rational(1, kGoldenP) - kGoldenSlack;
  std::string detail;
  for (const char* name : {"bal", "unk", "mwf-all-serial", "mwf-all-parallel"}) {
    RunConfig rc;
    rc.scheduler = name;
    const DuelResult d = run_duel("golden", kGoldenP, rc);
    ledger.record(d.run);
    if (!d.run.violations.empty()) check.fail(std::string(name) + ": " + d.run.violations.front());
    check.require(d.ratio >= floor, std::string(name) + " ratio " + approx(d.ratio) + " below " + approx(floor),
                  &d.run.instance);
    detail += std::string(detail.empty() ? "" : ", ") + name + " " + approx(d.ratio) + (d.injected ? "*" : "");
  }
  r.instances = 4;
  r.passed = check.ok();
  r.detail = "ratios " + detail + " (* = injected), floor " + approx(floor) + (check.ok() ? "" : "; first: " + check.first());
  r.witness = check.witness();
  return r;
}

CriterionResult a5_geometric(const BatteryOptions&, TraceLedger& ledger) {
  CriterionResult r = make_result("A5", "awake", "geometric instance prefix optima and all-parallel cost");
  Checker check;
  const int p = kGeometricP;
  const Tap tap = gen_geometric(p);
  const long k = log2_exact(floor_pow2(Rational(p)));
  const Rational eps = infinitesimal();
  std::string prefixes;
  for (long j = 1; j <= k; ++j) {
    Tap prefix{p, std::vector<Task>(tap.tasks.begin(), tap.tasks.begin() + j)};
    const Rational opt = opt_awake_exhaustive(prefix).value;
    const Rational bound = (Rational(1) + Rational(2, p)) * pow2(j - 1) + Rational(j) * eps;
    check.require(opt <= bound, "prefix " + std::to_string(j) + " optimum " + opt.str() + " above " + bound.str(), &prefix);
    prefixes += (prefixes.empty() ? "" : ", ") + opt.str();
  }
  const Rational n_eps = Rational(static_cast<long>(tap.tasks.size())) * eps;
  const Rational floor = pow2(k) * (Rational(2) - Rational(k, p)) - Rational(1) - n_eps;
  MwfUniformScheduler all_parallel(Decision::Parallel);
  const Trace tr = checked_run(tap, all_parallel, engine(p, Rational(1)), ledger, check);
  const Rational simulated = metrics_from_trace(tr).awake;
  const Rational direct =
      opt_awake_given_decisions(tap, std::vector<Decision>(tap.tasks.size(), Decision::Parallel));
  check.require(simulated >= floor, "simulated all-parallel awake " + simulated.str() + " below " + floor.str(), &tap);
  check.require(direct >= floor, "evaluated all-parallel awake " + direct.str() + " below " + floor.str(), &tap);
  r.instances = static_cast<std::size_t>(k) + 1;
  r.passed = check.ok();
  r.detail = "prefix optima " + prefixes + "; all-parallel awake " + approx(simulated) + " (engine) / " +
             approx(direct) + " (evaluator) vs floor " + approx(floor) + (check.ok() ? "" : "; first: " + check.first());
  r.witness = check.witness();
  return r;
}

CriterionResult a6_canc(const BatteryOptions& o, TraceLedger& ledger) {
  CriterionResult r = make_result("A6", "mrt", "CANC completes everything and cancels exactly at pool age sigma");
  Checker check;
  std::size_t cancels = 0;
  for (std::size_t i = 0; i < kMrtInstances; ++i) {
    const Tap tap = mrt_corpus_instance(o.seed, i);
    CancScheduler canc;
    try {
      const Trace tr = checked_run(tap, canc, engine(tap.p, Rational(2), true), ledger, check);
      check.require(tr.complete(), "incomplete run", &tap);
      check.require(tr.cancellations.size() == canc.cancellations().size(), "cancellation log disagrees with trace", &tap);
      for (const auto& c : canc.cancellations()) {
        ++cancels;
        const Task& t = *std::find_if(tap.tasks.begin(), tap.tasks.end(), [&](const Task& x) { return x.id == c.id; });
        check.require(c.pool_age == t.sigma, "task " + std::to_string(c.id) + " cancelled at pool age " + c.pool_age.str(), &tap);
      }
    } catch (const TaplabError& e) {
      check.fail(std::string("run aborted: ") + e.what(), &tap);
    }
  }
  r.instances = kMrtInstances;
  r.passed = check.ok();
  r.detail = std::to_string(cancels) + " cancellations checked, " + std::to_string(check.failures()) + " failures" +
             (check.ok() ? "" : "; first: " + check.first());
  r.witness = check.witness();
  return r;
}

CriterionResult a7_bsched(const BatteryOptions& o, TraceLedger& ledger) {
  CriterionResult r = make_result("A7", "mrt", "B runs one task per type in parallel and parallel completions beat sigma");
  Checker check;
  std::size_t completions = 0, late = 0;
  Max worst_lag;
  for (std::size_t i = 0; i < kMrtInstances; ++i) {
    const Tap tap = mrt_corpus_instance(o.seed, i);
    BScheduler b;
    try {
      const Trace tr = checked_run(tap, b, engine(tap.p, Rational(2), true), ledger, check);
      const std::size_t same_type = std::max(max_parallel_same_type(tr), b.max_parallel_per_type());
      check.require(same_type <= 1, std::to_string(same_type) + " tasks of one type in parallel", &tap);
      for (const auto& e : b.log()) {
        if (e.kind != BScheduler::LogEntry::Kind::ParallelComplete) continue;
        ++completions;
        const Task& t = *std::find_if(tap.tasks.begin(), tap.tasks.end(), [&](const Task& x) { return x.id == e.id; });
        const Rational lag = (e.time - t.arrival) / t.sigma;
        worst_lag.add(lag);
        if (lag > Rational(1)) {
          ++late;
          check.fail("task " + std::to_string(e.id) + " completed in parallel after " + approx(lag) + " sigma", &tap);
        }
      }
    } catch (const TaplabError& e) {
      check.fail(std::string("run aborted: ") + e.what(), &tap);
    }
  }
  r.instances = kMrtInstances;
  r.passed = check.ok();
  r.detail = std::to_string(completions) + " parallel completions, " + std::to_string(late) +
             " later than sigma, max (completion - arrival)/sigma " + worst_lag.str() +
             (check.ok() ? "" : "; first: " + check.first());
  r.witness = check.witness();
  return r;
}

struct CStats {
  std::size_t ballistic = 0, hard = 0, semi = 0;
};

CStats check_csched(const Tap& tap, TraceLedger& ledger, Checker& check, Max& worst_episode) {
  CStats s;
  CScheduler c;
  const Trace tr = checked_run(tap, c, engine(tap.p, Rational(4)), ledger, check);
  check.require(tr.cancellations.empty(), "cancellation in a non-cancelling run", &tap);
  check.require(c.max_reserve() <= Rational(2 * tap.p), "reserve " + c.max_reserve().str() + " exceeds 2p", &tap);
  std::map<TaskId, Task> tasks;
  for (const Task& t : tap.tasks) tasks.emplace(t.id, t);
  const auto& eps = c.episodes();
  for (std::size_t a = 0; a < eps.size(); ++a) {
    const auto& e = eps[a];
    const Task& t = tasks.at(e.id);
    if (!e.exit) {
      check.fail("episode of task " + std::to_string(e.id) + " never ends", &tap);
      continue;
    }
    if (e.mode == CScheduler::Mode::Ballistic) {
      ++s.ballistic;
      const Rational len = (*e.exit - e.enter) / t.sigma;
      worst_episode.add(len);
      check.require(len <= Rational(2), "ballistic episode of " + approx(len) + " sigma", &tap);
      for (std::size_t b = a + 1; b < eps.size(); ++b) {
        const auto& f = eps[b];
        if (f.mode != CScheduler::Mode::Ballistic || !f.exit) continue;
        const Task& u = tasks.at(f.id);
        const bool overlap = e.enter < *f.exit && f.enter < *e.exit;
        if (overlap && t.pi / t.sigma == u.pi / u.sigma) {
          check.require(t.sigma != u.sigma, "concurrent ballistic tasks share class and serial work", &tap);
        }
      }
    }
    if (e.mode == CScheduler::Mode::SemiBallistic) ++s.semi;
    if (e.hard) {
      if (e.mode == CScheduler::Mode::Ballistic) ++s.hard;
      const Rational stolen = c.stolen_from(e.id);
      check.require(stolen >= Rational(2) * t.pi,
                    "task " + std::to_string(e.id) + " lost only " + stolen.str() + " < 2 pi", &tap);
    }
  }
  return s;
}

CriterionResult a8_csched(const BatteryOptions& o, TraceLedger& ledger) {
  CriterionResult r = make_result("A8", "mrt", "C never cancels; ballistic bounds, distinct sizes, stolen work, reserves");
  Checker check;
  Max worst_episode;
  CStats random_total;
  std::size_t crafted = 0, crafted_ballistic = 0, crafted_semi = 0, crafted_hard = 0;
  auto run = [&](const Tap& tap) -> std::optional<CStats> {
    try {
      return check_csched(tap, ledger, check, worst_episode);
    } catch (const TaplabError& e) {
      check.fail(std::string("run aborted: ") + e.what(), &tap);
      return std::nullopt;
    }
  };
  for (std::size_t i = 0; i < kMrtInstances; ++i) {
    if (auto s = run(mrt_corpus_instance(o.seed, i))) {
      random_total.ballistic += s->ballistic;
      random_total.hard += s->hard;
      random_total.semi += s->semi;
    }
  }
  for (int p : {16, 32}) {
    for (long ratio = 1; ratio <= log2_exact(Rational(p)); ++ratio) {
      for (long shrink = 2; shrink <= 8; ++shrink) {
        for (long offset = 0; offset <= 12; offset += 2) {
          ++crafted;
          if (auto s = run(gen_emergency(p, ratio, shrink, offset))) {
            crafted_ballistic += s->ballistic > 0;
            crafted_semi += s->semi > 0;
            crafted_hard += s->hard > 0;
          }
        }
      }
    }
  }
  check.require(crafted_ballistic >= kCraftedMinimum, "only " + std::to_string(crafted_ballistic) + " crafted instances reach ballistic mode");
  check.require(crafted_semi >= kCraftedMinimum, "only " + std::to_string(crafted_semi) + " crafted instances reach semi-ballistic mode");
  r.instances = kMrtInstances + crafted;
  r.passed = check.ok();
  r.detail = "random corpus: " + std::to_string(random_total.ballistic) + " ballistic episodes; crafted " +
             std::to_string(crafted) + ": " + std::to_string(crafted_ballistic) + " with ballistic, " +
             std::to_string(crafted_hard) + " with hard ballistic, " + std::to_string(crafted_semi) +
             " with semi-ballistic; max ballistic length " + worst_episode.str() + " sigma" +
             (check.ok() ? "" : "; first: " + check.first());
  r.witness = check.witness();
  return r;
}

CriterionResult a9_oblivious_mrt(const BatteryOptions& o, TraceLedger& ledger) {
  CriterionResult r = make_result("A9", "mrt", "cheap/expensive witness within 4; EQUI ratio doubles per step in p");
  Checker check;
  std::vector<Rational> equi_ratios;
  std::string detail;
  for (int p : {16, 256, 4096}) {
    const Tap tap = gen_mrt_cheap_expensive(p, derive_seed(o.seed, 9, static_cast<std::uint64_t>(p)));
    const Rational lower = opt_trt_lower(tap);
    std::map<TaskId, Decision> dec;
    for (const Task& t : tap.tasks) dec[t.id] = t.pi == t.sigma ? Decision::Parallel : Decision::Serial;
    FixedDecisionScheduler witness(dec);
    const Trace wt = checked_run(tap, witness, engine(p, Rational(1)), ledger, check);
    const Rational wratio = metrics_from_trace(wt).trt / lower;
    check.require(wratio <= kWitnessTrtBound, "witness ratio " + approx(wratio) + " at p=" + std::to_string(p), &tap);
    EquiScheduler equi;
    const Trace et = checked_run(tap, equi, engine(p, Rational(1)), ledger, check);
    const Rational eratio = metrics_from_trace(et).trt / lower;
    equi_ratios.push_back(eratio);
    detail += (detail.empty() ? "" : "; ") + std::string("p=") + std::to_string(p) + " witness " + approx(wratio) +
              " equi " + approx(eratio);
  }
  for (std::size_t k = 1; k < equi_ratios.size(); ++k) {
    const Rational growth = equi_ratios[k] / equi_ratios[k - 1];
    detail += "; growth " + approx(growth);
    check.require(growth >= kEquiGrowth, "EQUI ratio grows only " + approx(growth) + "x");
  }
  r.instances = 3;
  r.passed = check.ok();
  r.detail = detail + (check.ok() ? "" : "; first: " + check.first());
  r.witness = check.witness();
  return r;
}

CriterionResult a10_nonpreemptive(const BatteryOptions&, TraceLedger& ledger) {
  CriterionResult r = make_result("A10", "mrt", "non-preemptive adversary separates rigid from EQUI");
  Checker check;
  std::map<std::string, std::vector<Rational>> ratios;
  std::string detail;
  for (const char* name : {"rigid", "equi"}) {
    for (long R : {10L, 100L}) {
      RunConfig rc;
      rc.scheduler = name;
      const DuelResult d = run_duel("nonpreemptive", kNonpreemptiveP, rc, R);
      ledger.record(d.run);
      if (!d.run.violations.empty()) check.fail(std::string(name) + ": " + d.run.violations.front());
      check.require(d.injected, std::string(name) + " never triggered the adversary at R=" + std::to_string(R));
      ratios[name].push_back(d.ratio);
      detail += (detail.empty() ? "" : ", ") + std::string(name) + "@R=" + std::to_string(R) + " " + approx(d.ratio);
    }
  }
  const Rational rigid_growth = ratios["rigid"][1] / ratios["rigid"][0];
  const Rational equi_spread = max(ratios["equi"][0], ratios["equi"][1]) / min(ratios["equi"][0], ratios["equi"][1]);
  check.require(rigid_growth >= kRigidGrowth, "rigid ratio grows only " + approx(rigid_growth) + "x");
  check.require(equi_spread <= kEquiSpread, "EQUI ratio spread " + approx(equi_spread) + "x");
  r.instances = 4;
  r.passed = check.ok();
  r.detail = detail + "; rigid growth " + approx(rigid_growth) + ", equi spread " + approx(equi_spread) +
             (check.ok() ? "" : "; first: " + check.first());
  return r;
}

Tap random_dtap(std::uint64_t seed, std::size_t i) {
  static const int ps[] = {4, 9, 16, 64};
  GenParams g;
  g.p = ps[i % 4];
  g.n = 2 + (i / 4) % 11;
  g.arrivals = static_cast<ArrivalPattern>((i / 44) % 3);
  g.ratio = static_cast<RatioDistribution>((i / 132) % 2 == 0 ? 0 : 1);
  g.seed = derive_seed(seed, 11, i);
  Tap tap = gen_random(g);
  std::mt19937_64 rng(derive_seed(seed, 12, i));
  for (std::size_t k = 1; k < tap.tasks.size(); ++k) {
    const auto count = uniform_int(rng, 0, 2);
    std::set<TaskId> deps;
    for (std::int64_t d = 0; d < count; ++d) {
      deps.insert(tap.tasks[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<std::int64_t>(k) - 1))].id);
    }
    tap.tasks[k].deps.assign(deps.begin(), deps.end());
  }
  validate_tap(tap);
  return tap;
}

CriterionResult a11_dtap(const BatteryOptions& o, TraceLedger& ledger) {
  CriterionResult r = make_result("A11", "dtap", "level instances: witness at most 2, TURTLE within [sqrt(p)/8, 3 sqrt(p)]");
  Checker check;
  std::string detail;
  for (int p : {16, 64, 256}) {
    const Tap tap = gen_dtap_levels(p, derive_seed(o.seed, 10, static_cast<std::uint64_t>(p)));
    const WitnessSchedule w = dtap_opt_upper_levels(tap);
    const auto wv = validate_trace(w.trace);
    ledger.record(w.trace, wv);
    if (!wv.empty()) check.fail("witness trace violation: " + wv.front(), &tap);
    check.require(w.awake <= kLevelsUpper, "witness awake " + w.awake.str() + " at p=" + std::to_string(p), &tap);
    TurtleScheduler turtle;
    const Trace tr = checked_run(tap, turtle, engine(p, Rational(1)), ledger, check);
    const Rational ratio = metrics_from_trace(tr).awake / w.awake;
    const Rational root(isqrt_floor(p));
    check.require(ratio >= root / Rational(8) && ratio <= Rational(3) * root,
                  "TURTLE ratio " + ratio.str() + " outside the window at p=" + std::to_string(p), &tap);
    detail += (detail.empty() ? "" : "; ") + std::string("p=") + std::to_string(p) + " witness " + w.awake.str() +
              " turtle/witness " + ratio.str();
  }
  for (std::size_t i = 0; i < kRandomDtaps; ++i) {
    const Tap tap = random_dtap(o.seed, i);
    check.require(turtle_parallel_work_holds(tap), "fairly-parallel work inequality fails", &tap);
    TurtleScheduler turtle;
    checked_run(tap, turtle, engine(tap.p, Rational(1)), ledger, check);
  }
  r.instances = 3 + kRandomDtaps;
  r.passed = check.ok();
  r.detail = detail + "; work inequality on " + std::to_string(kRandomDtaps) + " random dependency instances" +
             (check.ok() ? "" : "; first: " + check.first());
  r.witness = check.witness();
  return r;
}

using CriterionFn = CriterionResult (*)(const BatteryOptions&, TraceLedger&);

struct Criterion {
  const char* id;
  const char* group;
  CriterionFn fn;
  double limit;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> list = {
      {"A1", "oracle", a1_oracle, kLimitA1},      {"A2", "awake", a2_bal, kLimitA2},
      {"A3", "awake", a3_unk, kLimitA3},          {"A4", "awake", a4_golden, kLimitA4},
      {"A5", "awake", a5_geometric, kLimitA5},    {"A6", "mrt", a6_canc, kLimitA6},
      {"A7", "mrt", a7_bsched, kLimitA7},         {"A8", "mrt", a8_csched, kLimitA8},
      {"A9", "mrt", a9_oblivious_mrt, kLimitA9},  {"A10", "mrt", a10_nonpreemptive, kLimitA10},
      {"A11", "dtap", a11_dtap, kLimitA11},
  };
  return list;
}

Outcome run_criterion(const Criterion& c, const BatteryOptions& o) {
  const auto t0 = std::chrono::steady_clock::now();
  TraceLedger ledger;
  Outcome out;
  try {
    out.result = c.fn(o, ledger);
  } catch (const std::exception& e) {
    out.result = make_result(c.id, c.group, "aborted");
    out.result.detail = std::string("aborted: ") + e.what();
  }
  out.result.id = c.id;
  out.result.group = c.group;
  out.result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  out.result.traces = ledger.traces();
  if (out.result.seconds > c.limit) {
    out.result.passed = false;
    out.result.detail += "; runtime over the " + std::to_string(static_cast<int>(c.limit)) + " s limit";
  }
  out.violations = ledger.violations();
  out.first_violation = ledger.first_violation();
  ledger.feed(out.result.id + out.result.title + out.result.detail + out.result.witness);
  out.digest = ledger.digest();
  return out;
}

// Runs the selected criteria on a worker pool; outcomes come back in list order.
std::vector<Outcome> run_all(const std::vector<const Criterion*>& selected, const BatteryOptions& o,
                             const std::function<void(const CriterionResult&)>& on_result) {
  unsigned workers = o.threads ? o.threads : std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::future<Outcome>> futures(selected.size());
  std::vector<Outcome> out;
  std::size_t launched = 0;
  auto launch = [&] {
    const Criterion* c = selected[launched];
    futures[launched++] = std::async(std::launch::async, [c, &o] { return run_criterion(*c, o); });
  };
  while (launched < selected.size() && launched < workers) launch();
  for (std::size_t k = 0; k < selected.size(); ++k) {
    out.push_back(futures[k].get());
    if (on_result) on_result(out.back().result);
    if (launched < selected.size()) launch();
  }
  return out;
}

}  // namespace

std::vector<std::string> battery_groups() { return {"oracle", "awake", "mrt", "dtap", "determinism"}; }

bool BatteryReport::passed() const {
  return std::all_of(results.begin(), results.end(), [](const CriterionResult& r) { return r.passed; });
}

BatteryReport run_battery(const BatteryOptions& options, const std::function<void(const CriterionResult&)>& on_result) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::string& only = options.only;
  const bool determinism = only.empty() || only == "determinism" || only == "A12";
  if (!only.empty()) {
    const auto groups = battery_groups();
    bool known = std::find(groups.begin(), groups.end(), only) != groups.end() || only == "A12";
    for (const Criterion& c : criteria()) known = known || only == c.id;
    if (!known) throw InvalidArgument("unknown battery group or criterion '" + only + "'");
  }
  std::vector<const Criterion*> selected;
  for (const Criterion& c : criteria()) {
    if (determinism || only == c.group || only == c.id) selected.push_back(&c);
  }

  // Results of A1-A11 are only reported when selected directly; the
  // determinism check runs them anyway.
  const bool report_each = only.empty() || only != "determinism";
  BatteryReport report;
  const auto first = run_all(selected, options, [&](const CriterionResult& r) {
    if (report_each && only != "A12" && on_result) on_result(r);
  });
  if (report_each && only != "A12") {
    for (const Outcome& o : first) report.results.push_back(o.result);
  }

  if (determinism) {
    const auto d0 = std::chrono::steady_clock::now();
    const auto second = run_all(selected, options, {});
    CriterionResult r = make_result("A12", "determinism", "every trace validates and a second battery run is identical");
    std::size_t traces = 0, violations = 0, mismatched = 0;
    std::string first_violation, first_mismatch;
    for (std::size_t k = 0; k < first.size(); ++k) {
      traces += first[k].result.traces;
      violations += first[k].violations;
      if (first_violation.empty() && !first[k].first_violation.empty()) {
        first_violation = first[k].result.id + ": " + first[k].first_violation;
      }
      const bool same = first[k].digest == second[k].digest && first[k].result.detail == second[k].result.detail &&
                        first[k].result.traces == second[k].result.traces;
      if (!same) {
        ++mismatched;
        if (first_mismatch.empty()) first_mismatch = first[k].result.id;
      }
    }
    const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.traces = traces;
    r.instances = first.size();
    r.passed = violations == 0 && mismatched == 0 && total <= kLimitTotal;
    r.detail = std::to_string(traces) + " traces, " + std::to_string(violations) + " violations" +
               (first_violation.empty() ? "" : " (first: " + first_violation + ")") + ", " +
               std::to_string(mismatched) + " criteria differ on rerun" +
               (first_mismatch.empty() ? "" : " (first: " + first_mismatch + ")") + ", battery " +
               std::to_string(static_cast<int>(total)) + " s";
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - d0).count();
    report.results.push_back(r);
    if (on_result) on_result(r);
  }
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

std::string format_result(const CriterionResult& r) {
  std::ostringstream os;
  os.precision(1);
  os << std::fixed << r.id << (r.id.size() < 3 ? "  " : " ") << (r.passed ? "PASS" : "FAIL") << "  " << r.title
     << " | " << r.detail << " [" << r.seconds << " s]";
  if (!r.passed && !r.witness.empty()) os << "\n    witness: " << r.witness;
  return os.str();
}

}  // namespace taplab
