#include <taplab/oracle.hpp>

#include <algorithm>
#include <numeric>

#include <taplab/engine.hpp>
#include <taplab/errors.hpp>
#include <taplab/metrics.hpp>
#include <taplab/sched_awake.hpp>

namespace taplab {

namespace {

// Lean most-work-first state for awake-time evaluation. Serial jobs are kept
// sorted by remaining work, largest first; parallel jobs are pooled because
// they only ever absorb leftover processors.
struct LeanState {
  Rational now;
  Rational awake;
  std::vector<Rational> serial;
  Rational parallel;

  bool alive() const { return !serial.empty() || parallel.is_positive(); }

  void add(const Task& t, Decision d) {
    if (d == Decision::Serial) {
      serial.insert(std::upper_bound(serial.begin(), serial.end(), t.sigma, std::greater<>()), t.sigma);
    } else {
      parallel += t.pi;
    }
  }

  // Lower bound on the awake time still to come from the present work.
  Rational pending_bound(int p) const {
    Rational total = parallel;
    for (const Rational& r : serial) total += r;
    const Rational longest = serial.empty() ? Rational(0) : serial.front();
    return max(longest, total / Rational(p));
  }

  // Runs the greedy schedule until `until` (or to completion when unset).
  void advance(const std::optional<Rational>& until, int p) {
    const Rational budget(p);
    std::vector<Rational> rates;
    for (;;) {
      if (until && now >= *until) return;
      if (!alive()) {
        if (until) now = *until;
        return;
      }
      rates.assign(serial.size(), Rational(0));
      Rational avail = budget;
      std::optional<Rational> dt;
      auto consider = [&dt](const Rational& v) {
        if (!dt || v < *dt) dt = v;
      };
      std::size_t first_idle = serial.size();
      for (std::size_t k = 0; k < serial.size();) {
        std::size_t e = k;
        while (e < serial.size() && serial[e] == serial[k]) ++e;
        const Rational g(static_cast<long>(e - k));
        Rational rate(1);
        if (avail < g) rate = avail / g;
        avail -= rate * g;
        for (std::size_t m = k; m < e; ++m) rates[m] = rate;
        if (rate.is_positive()) {
          consider(serial[k] / rate);
        } else if (first_idle == serial.size()) {
          first_idle = k;
        }
        if (e < serial.size() && rate > Rational(0)) {
          // crossing with the next group, which runs slower
          std::size_t f = e;
          while (f < serial.size() && serial[f] == serial[e]) ++f;
          const Rational next_rate = avail.is_positive() ? min(Rational(1), avail / Rational(static_cast<long>(f - e)))
                                                         : Rational(0);
          if (rate > next_rate) consider((serial[k] - serial[e]) / (rate - next_rate));
        }
        k = e;
      }
      const bool par_runs = parallel.is_positive() && avail.is_positive();
      if (par_runs) consider(parallel / avail);
      if (until) consider(*until - now);
      const Rational step = *dt;
      for (std::size_t k = 0; k < serial.size(); ++k) serial[k] -= rates[k] * step;
      if (par_runs) parallel -= avail * step;
      serial.erase(std::remove_if(serial.begin(), serial.end(), [](const Rational& r) { return r.is_zero(); }),
                   serial.end());
      std::stable_sort(serial.begin(), serial.end(), std::greater<>());
      awake += step;
      now += step;
    }
  }
};

Rational engine_awake(const Tap& tap, const std::vector<Decision>& decisions) {
  std::map<TaskId, Decision> m;
  for (std::size_t k = 0; k < tap.tasks.size(); ++k) m[tap.tasks[k].id] = decisions[k];
  FixedDecisionScheduler sched(std::move(m));
  return metrics_from_trace(simulate(tap, sched, EngineConfig{})).awake;
}

struct Search {
  const Tap& tap;
  std::vector<Decision> current;
  std::optional<Rational> best;
  std::vector<Decision> best_vec;

  void dfs(std::size_t k, LeanState state) {
    if (k == tap.tasks.size()) {
      state.advance(std::nullopt, tap.p);
      if (!best || state.awake < *best) {
        best = state.awake;
        best_vec = current;
      }
      return;
    }
    const Task& t = tap.tasks[k];
    state.advance(t.arrival, tap.p);
    for (Decision d : {Decision::Serial, Decision::Parallel}) {
      LeanState next = state;
      next.add(t, d);
      if (best && next.awake + next.pending_bound(tap.p) >= *best) continue;
      current[k] = d;
      dfs(k + 1, std::move(next));
    }
  }
};

}  // namespace

Rational opt_awake_given_decisions(const Tap& tap, const std::vector<Decision>& decisions) {
  if (decisions.size() != tap.tasks.size()) throw InvalidArgument("one decision per task is required");
  if (tap.has_deps()) throw ContractError("dependency instances are not supported by the greedy evaluation");
  LeanState state;
  for (std::size_t k = 0; k < tap.tasks.size(); ++k) {
    state.advance(tap.tasks[k].arrival, tap.p);
    state.add(tap.tasks[k], decisions[k]);
  }
  state.advance(std::nullopt, tap.p);
  return state.awake;
}

Rational opt_awake_given_decisions(const Tap& tap, const std::map<TaskId, Decision>& decisions) {
  std::vector<Decision> v;
  for (const Task& t : tap.tasks) {
    auto it = decisions.find(t.id);
    if (it == decisions.end()) throw InvalidArgument("no decision for task " + std::to_string(t.id));
    v.push_back(it->second);
  }
  return opt_awake_given_decisions(tap, v);
}

OptAwake opt_awake_exhaustive(const Tap& tap, std::size_t max_tasks) {
  const std::size_t n = tap.tasks.size();
  if (n > max_tasks) {
    throw InstanceTooLarge(std::to_string(n) + " tasks exceed the enumeration bound " + std::to_string(max_tasks));
  }
  OptAwake out;
  if (n == 0) return out;
  if (tap.has_deps()) {
    out.exact = false;
    std::vector<Decision> v(n, Decision::Serial);
    std::optional<Rational> best;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      for (std::size_t k = 0; k < n; ++k) {
        v[k] = (mask >> (n - 1 - k)) & 1 ? Decision::Parallel : Decision::Serial;
      }
      const Rational a = engine_awake(tap, v);
      if (!best || a < *best) {
        best = a;
        out.decisions = v;
      }
    }
    out.value = *best;
    return out;
  }
  Search s{tap, std::vector<Decision>(n, Decision::Serial), std::nullopt, {}};
  s.dfs(0, LeanState{});
  out.value = *s.best;
  out.decisions = s.best_vec;
  return out;
}

Rational srpt_trt(std::vector<std::pair<Rational, Rational>> jobs, const Rational& rate) {
  std::sort(jobs.begin(), jobs.end());
  std::vector<std::pair<Rational, Rational>> active;  // (remaining, release)
  Rational now, total;
  std::size_t next = 0;
  while (next < jobs.size() || !active.empty()) {
    if (active.empty()) now = max(now, jobs[next].first);
    while (next < jobs.size() && jobs[next].first <= now) {
      active.emplace_back(jobs[next].second, jobs[next].first);
      ++next;
    }
    auto it = std::min_element(active.begin(), active.end());
    Rational finish = now + it->first / rate;
    if (next < jobs.size() && jobs[next].first < finish) {
      it->first -= (jobs[next].first - now) * rate;
      now = jobs[next].first;
      continue;
    }
    now = finish;
    total += now - it->second;
    active.erase(it);
  }
  return total;
}

Rational opt_trt_lower(const Tap& tap, const std::optional<Rational>& capacity, const Rational& speed) {
  const Rational cap = capacity ? *capacity : Rational(tap.p) * speed;
  Rational lb_a;
  std::vector<std::pair<Rational, Rational>> jobs;
  for (const Task& t : tap.tasks) {
    lb_a += min(t.sigma / speed, t.pi / cap);
    jobs.emplace_back(t.arrival, t.sigma);
  }
  return max(lb_a, srpt_trt(std::move(jobs), cap));
}

Rational mwf_alignment_grid(const Tap& tap, const std::vector<Decision>& decisions) {
  std::map<TaskId, Decision> m;
  for (std::size_t k = 0; k < tap.tasks.size(); ++k) m[tap.tasks[k].id] = decisions.at(k);
  FixedDecisionScheduler sched(std::move(m));
  const Trace tr = simulate(tap, sched, EngineConfig{});
  mpz_class l = 1;
  auto absorb = [&l](const Rational& r) { mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), r.denominator().get_mpz_t()); };
  for (const Task& t : tap.tasks) {
    absorb(t.arrival);
    absorb(t.sigma);
    absorb(t.pi);
  }
  for (const Slice& s : tr.slices) {
    absorb(s.start);
    absorb(s.end);
    for (const auto& [id, rate] : s.alloc) absorb(rate * (s.end - s.start));
  }
  return Rational(1) / from_mpz(l);
}

}  // namespace taplab
