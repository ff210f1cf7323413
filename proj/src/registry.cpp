#include <taplab/registry.hpp>

#include <algorithm>

#include <taplab/adversaries.hpp>
#include <taplab/dtap.hpp>
#include <taplab/errors.hpp>
#include <taplab/oracle.hpp>
#include <taplab/sched_awake.hpp>
#include <taplab/sched_mrt.hpp>

namespace taplab {

const std::vector<SchedulerInfo>& scheduler_catalog() {
  static const std::vector<SchedulerInfo> catalog = {
      {"bal", Rational(1), false, false},
      {"bal-mutant", Rational(1), false, false},
      {"unk", Rational(1), false, false},
      {"mwf-all-serial", Rational(1), false, false},
      {"mwf-all-parallel", Rational(1), false, false},
      {"golden", Rational(1), false, false},
      {"equi", Rational(1), false, false},
      {"sss", Rational(2), false, false},
      {"canc", Rational(2), true, false},
      {"bsched", Rational(2), true, true},
      {"csched", Rational(4), false, true},
      {"turtle", Rational(1), false, false},
      {"rigid", Rational(1), false, false},
  };
  return catalog;
}

std::vector<std::string> scheduler_names() {
  std::vector<std::string> out;
  for (const auto& s : scheduler_catalog()) out.push_back(s.name);
  return out;
}

const SchedulerInfo& scheduler_info(const std::string& name) {
  for (const auto& s : scheduler_catalog()) {
    if (s.name == name) return s;
  }
  throw InvalidArgument("unknown scheduler '" + name + "'");
}

std::unique_ptr<Scheduler> make_scheduler(const RunConfig& config) {
  const std::string& n = config.scheduler;
  scheduler_info(n);
  if (n == "bal") return std::make_unique<BalScheduler>();
  if (n == "bal-mutant") return std::make_unique<BalScheduler>(true);
  if (n == "unk") return std::make_unique<UnkScheduler>();
  if (n == "mwf-all-serial") return std::make_unique<MwfUniformScheduler>(Decision::Serial);
  if (n == "mwf-all-parallel") return std::make_unique<MwfUniformScheduler>(Decision::Parallel);
  if (n == "golden") return std::make_unique<GoldenAlgScheduler>();
  if (n == "equi") return std::make_unique<EquiScheduler>();
  if (n == "sss") return std::make_unique<SssScheduler>();
  if (n == "canc") return std::make_unique<CancScheduler>();
  if (n == "bsched") return std::make_unique<BScheduler>();
  if (n == "csched") {
    CScheduler::Options opts;
    opts.inner_scale = config.inner_scale;
    opts.literal_reserve = config.literal_reserve;
    return std::make_unique<CScheduler>(opts);
  }
  if (n == "turtle") return std::make_unique<TurtleScheduler>();
  return std::make_unique<RigidScheduler>();
}

RunResult run_scheduler(const Tap& tap, const RunConfig& config, Adversary* adversary) {
  const SchedulerInfo& info = scheduler_info(config.scheduler);
  if (info.requires_cancel && !config.allow_cancel) {
    throw FeasibilityError("scheduler '" + info.name + "' requires --allow-cancel");
  }
  if (config.speed < Rational(1)) throw FeasibilityError("speed must be at least 1");
  const Rational factor = config.budget_factor ? *config.budget_factor : info.default_budget_factor;
  if (factor < Rational(1)) throw FeasibilityError("budget factor must be at least 1");

  RunResult r;
  r.instance = info.rounds_pow2 && !is_pow2_rounded(tap) ? round_pow2(tap) : tap;
  r.budget_factor = factor;
  r.augmentation = config.speed * factor * (info.rounds_pow2 ? Rational(2) : Rational(1));

  EngineConfig ec;
  ec.speed = config.speed;
  ec.allow_cancel = config.allow_cancel;
  ec.processor_budget = factor * Rational(r.instance.p);
  auto sched = make_scheduler(config);
  r.trace = simulate(r.instance, *sched, ec, adversary);
  r.violations = validate_trace(r.trace, r.instance, ec);
  r.metrics = metrics_from_trace(r.trace);
  return r;
}

std::vector<std::string> adversary_names() { return {"golden", "nonpreemptive"}; }

namespace {

// Upper bound on the optimal awake time: the exact optimum when the oracle can
// afford the instance, else the best of the uniform and first-task-split schedules.
std::pair<Rational, bool> awake_opt_bound(const Tap& tap) {
  if (tap.tasks.size() <= 12) return {opt_awake_exhaustive(tap).value, true};
  const std::size_t n = tap.tasks.size();
  std::optional<Rational> best;
  for (int shape = 0; shape < 4; ++shape) {
    std::vector<Decision> d(n, (shape & 1) ? Decision::Parallel : Decision::Serial);
    if (shape & 2) d[0] = (shape & 1) ? Decision::Serial : Decision::Parallel;
    const Rational v = opt_awake_given_decisions(tap, d);
    if (!best || v < *best) best = v;
  }
  return {*best, false};
}

}  // namespace

DuelResult run_duel(const std::string& adversary, int p, const RunConfig& config, long r) {
  DuelResult out;
  if (adversary == "golden") {
    GoldenAdversary adv(p);
    out.objective = "awake";
    out.run = run_scheduler(adv.initial(), config, &adv);
    out.injected = adv.injected();
    out.cost = out.run.metrics.awake;
    std::tie(out.opt, out.opt_exact) = awake_opt_bound(out.run.trace.tap());
  } else if (adversary == "nonpreemptive") {
    NonpreemptiveAdversary adv(r, nonpreemptive_probe(p));
    out.objective = "trt";
    out.run = run_scheduler(adv.initial(), config, &adv);
    out.injected = adv.triggered() && r > 0;
    out.cost = out.run.metrics.trt;
    out.opt = opt_trt_lower(out.run.trace.tap());
  } else {
    throw InvalidArgument("unknown adversary '" + adversary + "'");
  }
  out.ratio = out.cost / out.opt;
  return out;
}

}  // namespace taplab
