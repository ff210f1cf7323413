#include <taplab/oracle.hpp>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <set>

#include <taplab/errors.hpp>

namespace taplab {

namespace {

using Units = std::vector<std::int64_t>;

struct GridState {
  std::int64_t cost = 0;
  Units rem;

  friend auto operator<=>(const GridState&, const GridState&) = default;
};

std::int64_t to_units(const Rational& v, const Rational& grid, const char* what) {
  const Rational q = v / grid;
  if (!q.is_integer()) throw InvalidArgument(std::string(what) + " " + v.str() + " is not a multiple of the grid");
  return to_int64(q.numerator());
}

bool dominates(const GridState& a, const GridState& b) {
  if (a.cost > b.cost) return false;
  for (std::size_t k = 0; k < a.rem.size(); ++k) {
    if (a.rem[k] > b.rem[k]) return false;
  }
  return true;
}

std::vector<GridState> pareto(std::set<GridState>& raw) {
  std::vector<GridState> v(raw.begin(), raw.end());
  std::sort(v.begin(), v.end(), [](const GridState& a, const GridState& b) {
    std::int64_t sa = 0, sb = 0;
    for (auto x : a.rem) sa += x;
    for (auto x : b.rem) sb += x;
    if (a.cost != b.cost) return a.cost < b.cost;
    if (sa != sb) return sa < sb;
    return a.rem < b.rem;
  });
  std::vector<GridState> kept;
  for (GridState& s : v) {
    bool dominated = false;
    for (const GridState& k : kept) {
      if (dominates(k, s)) {
        dominated = true;
        break;
      }
    }
    if (!dominated) kept.push_back(std::move(s));
  }
  return kept;
}

}  // namespace

Rational grid_opt(const Tap& tap, Objective objective, const Rational& grid, const GridLimits& limits) {
  if (!grid.is_positive()) throw InvalidArgument("grid must be positive");
  if (tap.has_deps()) throw ContractError("grid search does not support dependencies");
  const std::size_t n = tap.tasks.size();
  if (n > limits.max_tasks) throw InstanceTooLarge("grid search is limited to " + std::to_string(limits.max_tasks) + " tasks");
  if (n == 0) return Rational(0);

  std::vector<std::int64_t> arrival(n), sigma(n), pi(n);
  std::int64_t horizon = 0;
  for (std::size_t k = 0; k < n; ++k) {
    arrival[k] = to_units(tap.tasks[k].arrival, grid, "arrival");
    sigma[k] = to_units(tap.tasks[k].sigma, grid, "serial work");
    pi[k] = to_units(tap.tasks[k].pi, grid, "parallel work");
    horizon = std::max(horizon, arrival[k]);
  }
  std::int64_t work_units = 0;
  for (std::size_t k = 0; k < n; ++k) work_units += std::max(sigma[k], pi[k]);
  if (static_cast<std::size_t>(work_units) > limits.max_steps) {
    throw InstanceTooLarge("grid search needs " + std::to_string(work_units) + " work units");
  }
  horizon += work_units + 1;
  const std::int64_t p = tap.p;

  std::optional<std::int64_t> best;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    std::vector<bool> par(n);
    GridState init;
    init.rem.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      par[k] = (mask >> (n - 1 - k)) & 1;
      init.rem[k] = par[k] ? pi[k] : sigma[k];
    }
    std::vector<GridState> frontier{init};
    for (std::int64_t t = 0; !frontier.empty(); ++t) {
      if (t > horizon) throw ContractError("grid search failed to terminate");
      std::set<GridState> next;
      for (const GridState& s : frontier) {
        std::vector<std::size_t> alive;
        bool pending = false;
        for (std::size_t k = 0; k < n; ++k) {
          if (s.rem[k] == 0) continue;
          if (arrival[k] <= t) {
            alive.push_back(k);
          } else {
            pending = true;
          }
        }
        if (alive.empty()) {
          if (!pending) {
            if (!best || s.cost < *best) best = s.cost;
          } else {
            next.insert(s);
          }
          continue;
        }
        GridState base = s;
        base.cost += objective == Objective::Awake ? 1 : static_cast<std::int64_t>(alive.size());
        if (best && base.cost >= *best) continue;
        // Enumerate maximal integer splits; a job never takes more than it needs.
        std::vector<std::int64_t> cap(alive.size());
        std::int64_t cap_total = 0;
        for (std::size_t a = 0; a < alive.size(); ++a) {
          const std::size_t k = alive[a];
          cap[a] = std::min(par[k] ? p : std::int64_t{1}, s.rem[k]);
          cap_total += cap[a];
        }
        const std::int64_t use = std::min(p, cap_total);
        std::vector<std::int64_t> give(alive.size());
        std::function<void(std::size_t, std::int64_t)> rec = [&](std::size_t a, std::int64_t left) {
          if (a == alive.size()) {
            if (left != 0) return;
            GridState out = base;
            for (std::size_t b = 0; b < alive.size(); ++b) out.rem[alive[b]] -= give[b];
            next.insert(std::move(out));
            return;
          }
          std::int64_t rest_cap = 0;
          for (std::size_t b = a + 1; b < alive.size(); ++b) rest_cap += cap[b];
          const std::int64_t lo = std::max<std::int64_t>(0, left - rest_cap);
          const std::int64_t hi = std::min(cap[a], left);
          for (std::int64_t x = lo; x <= hi; ++x) {
            give[a] = x;
            rec(a + 1, left - x);
          }
        };
        rec(0, use);
      }
      if (next.size() > limits.max_states) throw InstanceTooLarge("grid search frontier exceeds the state bound");
      frontier = pareto(next);
    }
  }
  return Rational(static_cast<long>(*best)) * grid;
}

}  // namespace taplab
