#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include <taplab/adversaries.hpp>
#include <taplab/battery.hpp>
#include <taplab/errors.hpp>
#include <taplab/generators.hpp>
#include <taplab/oracle.hpp>
#include <taplab/sched_awake.hpp>
#include <taplab/tap_json.hpp>

namespace taplab::cli {

using ojson = nlohmann::ordered_json;

namespace {

constexpr std::uint64_t kDefaultSeed = 1;

struct GenOptions {
  int p = 16;
  std::uint64_t seed = kDefaultSeed;
  std::size_t n = 8;
  std::string x = "1/2";
  bool unparallelizable = false;
  std::size_t blocks = 3;
  std::string ratio = "uniform";
  std::string arrivals = "batch";
  long ratio_exp = 1;
  long shrink = 4;
  long offset = 0;
};

RatioDistribution parse_ratio(const std::string& s) {
  if (s == "uniform") return RatioDistribution::Uniform;
  if (s == "extremes") return RatioDistribution::Extremes;
  if (s == "pow2") return RatioDistribution::PowersOfTwo;
  throw InvalidArgument("unknown ratio distribution '" + s + "'");
}

ArrivalPattern parse_arrivals(const std::string& s) {
  if (s == "batch") return ArrivalPattern::Batch;
  if (s == "poisson") return ArrivalPattern::PoissonLike;
  if (s == "bursty") return ArrivalPattern::Bursty;
  throw InvalidArgument("unknown arrival pattern '" + s + "'");
}

Tap generate(const std::string& name, const GenOptions& g) {
  if (name == "random") {
    GenParams params;
    params.p = g.p;
    params.n = g.n;
    params.seed = g.seed;
    params.ratio = parse_ratio(g.ratio);
    params.arrivals = parse_arrivals(g.arrivals);
    return gen_random(params);
  }
  if (name == "golden") return GoldenAdversary(g.p).initial();
  if (name == "geometric") return gen_geometric(g.p);
  if (name == "randlb") return gen_randlb(g.p, g.blocks, g.seed);
  if (name == "oblivious-a") return gen_oblivious_pair(g.p).first;
  if (name == "oblivious-b") return gen_oblivious_pair(g.p).second;
  if (name == "two-task") return gen_obliv_two_task(g.p, Rational::parse(g.x), g.unparallelizable);
  if (name == "cheap-expensive") return gen_mrt_cheap_expensive(g.p, g.seed);
  if (name == "levels") return gen_dtap_levels(g.p, g.seed);
  if (name == "emergency") return gen_emergency(g.p, g.ratio_exp, g.shrink, g.offset);
  throw InvalidArgument("unknown generator '" + name + "'");
}

void add_gen_options(CLI::App* cmd, GenOptions& g) {
  cmd->add_option("--n", g.n, "Task count (random)");
  cmd->add_option("--x", g.x, "Threshold parameter as a rational (two-task)");
  cmd->add_flag("--unparallelizable", g.unparallelizable, "Both tasks unparallelizable (two-task)");
  cmd->add_option("--blocks", g.blocks, "Number of blocks (randlb)");
  cmd->add_option("--ratio", g.ratio, "uniform | extremes | pow2 (random)");
  cmd->add_option("--arrivals", g.arrivals, "batch | poisson | bursty (random)");
  cmd->add_option("--ratio-exp", g.ratio_exp, "Class exponent of the large task (emergency)");
  cmd->add_option("--shrink", g.shrink, "Size exponent of the late task (emergency)");
  cmd->add_option("--offset", g.offset, "Arrival offset of the late task in eighths (emergency)");
}

struct ConfigFlags {
  std::string speed = "1";
  std::string budget_factor;
  bool allow_cancel = false;
  std::string inner_scale = "3";
  bool literal_reserve = false;
};

void add_config_flags(CLI::App* cmd, ConfigFlags& f) {
  cmd->add_option("--speed", f.speed, "Speed augmentation factor (rational >= 1)");
  cmd->add_option("--budget-factor", f.budget_factor, "Processors per p (default depends on the scheduler)");
  cmd->add_flag("--allow-cancel", f.allow_cancel, "Permit cancelling running tasks");
  cmd->add_option("--inner-scale", f.inner_scale, "Work scale of the inner run (csched)");
  cmd->add_flag("--literal-reserve", f.literal_reserve, "Reserve p/2^j processors per class (csched)");
}

RunConfig to_config(const std::string& scheduler, const ConfigFlags& f) {
  RunConfig rc;
  rc.scheduler = scheduler;
  rc.speed = Rational::parse(f.speed);
  if (!f.budget_factor.empty()) rc.budget_factor = Rational::parse(f.budget_factor);
  rc.allow_cancel = f.allow_cancel;
  rc.inner_scale = Rational::parse(f.inner_scale);
  rc.literal_reserve = f.literal_reserve;
  return rc;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw InvalidArgument("cannot write '" + path + "'");
  f << text << '\n';
}

std::string cell(const std::optional<Rational>& r) { return r ? r->str() : std::string(); }

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

// Longest ballistic episode relative to twice the task's serial work, read
// from the scheduler annotations.
std::optional<Rational> max_ballistic_ratio(const Trace& trace) {
  if (trace.aux.empty()) return std::nullopt;
  const ojson aux = ojson::parse(trace.aux);
  if (!aux.contains("episodes")) return std::nullopt;
  std::map<TaskId, Rational> sigma;
  for (const Task& t : trace.tasks) sigma[t.id] = t.sigma;
  std::optional<Rational> best;
  for (const auto& e : aux["episodes"]) {
    if (e["mode"] != "ballistic" || e["exit"].is_null()) continue;
    const Rational len = Rational::parse(e["exit"].get<std::string>()) - Rational::parse(e["enter"].get<std::string>());
    const Rational v = len / (Rational(2) * sigma.at(e["id"].get<TaskId>()));
    if (!best || *best < v) best = v;
  }
  if (!best) best = Rational(0);
  return best;
}

std::vector<SweepRow> sweep_instance(const NamedTap& item, const std::vector<std::string>& schedulers,
                                     const RunConfig& base, OracleMode oracle) {
  std::vector<SweepRow> rows;
  const std::string label = item.label + "@" + hex64(instance_hash(item.tap));
  std::optional<Rational> opt;
  std::string warning;
  const Rational trt_lb = opt_trt_lower(item.tap);
  if (oracle == OracleMode::Exact) {
    try {
      opt = opt_awake_exhaustive(item.tap).value;
    } catch (const InstanceTooLarge& e) {
      warning = std::string("oracle skipped: ") + e.what();
    }
  }
  if (!warning.empty()) {
    SweepRow w;
    w.instance = label;
    w.scheduler = "warning";
    w.p = item.tap.p;
    w.n = item.tap.size();
    w.warning = warning;
    rows.push_back(w);
  }
  for (const std::string& name : schedulers) {
    SweepRow row;
    row.instance = label;
    row.scheduler = name;
    row.p = item.tap.p;
    row.n = item.tap.size();
    RunConfig rc = base;
    rc.scheduler = name;
    rc.allow_cancel = scheduler_info(name).requires_cancel;
    try {
      const RunResult r = run_scheduler(item.tap, rc);
      row.awake = r.metrics.awake;
      row.trt = r.metrics.trt;
      row.opt_awake = opt;
      row.trt_lb = trt_lb;
      if (opt && opt->is_positive()) row.ratio_awake = r.metrics.awake / *opt;
      if (trt_lb.is_positive()) row.ratio_trt_lb = r.metrics.trt / trt_lb;
      if (name == "csched") row.max_ballistic_over_2sigma = max_ballistic_ratio(r.trace);
      row.violations = r.violations;
    } catch (const TaplabError& e) {
      row.violations.push_back(std::string("run failed: ") + e.what());
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<NamedTap> load_corpus_dir(const std::string& dir) {
  std::vector<std::string> paths;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") paths.push_back(entry.path().string());
  }
  std::sort(paths.begin(), paths.end());
  std::vector<NamedTap> out;
  for (const auto& path : paths) out.push_back({std::filesystem::path(path).stem().string(), load_tap(path)});
  return out;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

std::uint64_t default_seed(std::uint64_t fallback) {
  if (const char* s = std::getenv("TAPLAB_SEED")) {
    try {
      return std::stoull(s);
    } catch (const std::exception&) {
      throw InvalidArgument("TAPLAB_SEED must be an unsigned integer");
    }
  }
  return fallback;
}

std::string run_record(const RunResult& r, const RunConfig& config) {
  ojson j;
  j["scheduler"] = config.scheduler;
  j["instance_hash"] = hex64(instance_hash(r.instance));
  j["p"] = r.instance.p;
  j["speed"] = config.speed.str();
  j["budget_factor"] = r.budget_factor.str();
  j["augmentation"] = r.augmentation.str();
  j["awake"] = r.metrics.awake.str();
  j["trt"] = r.metrics.trt.str();
  j["mrt"] = r.metrics.mrt.str();
  j["n"] = r.metrics.n;
  j["cancellations"] = r.trace.cancellations.size();
  j["violations"] = r.violations;
  return j.dump();
}

std::vector<SweepRow> sweep(const std::vector<NamedTap>& corpus, const std::vector<std::string>& schedulers,
                            const RunConfig& base, OracleMode oracle, unsigned threads) {
  for (const auto& s : schedulers) scheduler_info(s);
  const unsigned workers = std::max(1u, threads ? threads : std::thread::hardware_concurrency());
  std::vector<std::vector<SweepRow>> parts(corpus.size());
  std::vector<std::future<void>> running;
  std::size_t next = 0;
  for (std::size_t k = 0; k < corpus.size(); ++k) {
    while (next < corpus.size() && running.size() < workers) {
      const std::size_t idx = next++;
      running.push_back(std::async(std::launch::async, [&, idx] {
        parts[idx] = sweep_instance(corpus[idx], schedulers, base, oracle);
      }));
    }
    running.front().get();
    running.erase(running.begin());
  }
  std::vector<SweepRow> rows;
  for (auto& part : parts) {
    for (auto& row : part) rows.push_back(std::move(row));
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "instance,scheduler,p,n,awake,trt,opt_awake,trt_lb,ratio_awake,ratio_trt_lb,max_ballistic_over_2sigma,violations\n";
  for (const SweepRow& r : rows) {
    std::string violations;
    if (!r.warning.empty()) {
      violations = r.warning;
    } else {
      for (const auto& v : r.violations) violations += (violations.empty() ? "" : "; ") + v;
    }
    os << csv_escape(r.instance) << ',' << r.scheduler << ',' << r.p << ',' << r.n << ',' << cell(r.awake) << ','
       << cell(r.trt) << ',' << cell(r.opt_awake) << ',' << cell(r.trt_lb) << ',' << cell(r.ratio_awake) << ','
       << cell(r.ratio_trt_lb) << ',' << cell(r.max_ballistic_over_2sigma) << ',' << csv_escape(violations) << '\n';
  }
  return os.str();
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Serial/parallel task scheduling simulator"};
  app.require_subcommand(1);

  // run
  std::string run_file, run_sched, run_trace;
  ConfigFlags run_flags;
  auto* run_cmd = app.add_subcommand("run", "Simulate one scheduler on an instance file");
  run_cmd->add_option("instance", run_file, "Instance JSON file")->required();
  run_cmd->add_option("scheduler", run_sched, "Scheduler name")->required();
  run_cmd->add_option("--trace", run_trace, "Write the full trace as JSON to this file");
  add_config_flags(run_cmd, run_flags);

  // sweep
  std::string sw_generator = "random", sw_dir, sw_ps = "4,8,16", sw_schedulers = "bal,unk", sw_oracle = "exact",
              sw_out;
  std::size_t sw_count = 100;
  std::uint64_t sw_seed = 0;
  bool sw_seed_set = false;
  unsigned sw_threads = 0;
  GenOptions sw_gen;
  ConfigFlags sw_flags;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run schedulers over a corpus and write CSV");
  sweep_cmd->add_option("--generator", sw_generator, "Generator producing the corpus");
  sweep_cmd->add_option("--dir", sw_dir, "Directory of instance files (overrides --generator)");
  sweep_cmd->add_option("--p", sw_ps, "Comma-separated processor counts");
  sweep_cmd->add_option("--count", sw_count, "Instances per processor count");
  sweep_cmd->add_option("--seed", sw_seed, "Base seed (default TAPLAB_SEED or 1)")->each([&](const std::string&) { sw_seed_set = true; });
  sweep_cmd->add_option("--schedulers", sw_schedulers, "Comma-separated scheduler names");
  sweep_cmd->add_option("--oracle", sw_oracle, "exact | skip");
  sweep_cmd->add_option("--threads", sw_threads, "Worker threads (default: hardware)");
  sweep_cmd->add_option("-o,--output", sw_out, "CSV output file (default stdout)");
  add_gen_options(sweep_cmd, sw_gen);
  add_config_flags(sweep_cmd, sw_flags);

  // gen
  std::string gen_name, gen_out;
  GenOptions gen_opts;
  bool gen_seed_set = false;
  auto* gen_cmd = app.add_subcommand("gen", "Generate an instance");
  gen_cmd->add_option("name", gen_name, "Generator name")->required();
  gen_cmd->add_option("--p", gen_opts.p, "Processor count");
  gen_cmd->add_option("--seed", gen_opts.seed, "Seed (default TAPLAB_SEED or 1)")->each([&](const std::string&) { gen_seed_set = true; });
  gen_cmd->add_option("-o,--output", gen_out, "Output file (default stdout)");
  add_gen_options(gen_cmd, gen_opts);

  // duel
  std::string duel_sched, duel_adv, duel_trace;
  int duel_p = 100;
  long duel_r = 10;
  ConfigFlags duel_flags;
  auto* duel_cmd = app.add_subcommand("duel", "Run a scheduler against an adaptive adversary");
  duel_cmd->add_option("scheduler", duel_sched, "Scheduler name")->required();
  duel_cmd->add_option("adversary", duel_adv, "golden | nonpreemptive")->required();
  duel_cmd->add_option("--p", duel_p, "Processor count");
  duel_cmd->add_option("--R", duel_r, "Injection multiplier (nonpreemptive)");
  duel_cmd->add_option("--trace", duel_trace, "Write the full trace as JSON to this file");
  add_config_flags(duel_cmd, duel_flags);

  // oracle
  std::string or_file, or_objective = "awake", or_grid;
  std::size_t or_max = kDefaultOracleBound;
  auto* oracle_cmd = app.add_subcommand("oracle", "Offline optimum or bounds for an instance");
  oracle_cmd->add_option("instance", or_file, "Instance JSON file")->required();
  oracle_cmd->add_option("--objective", or_objective, "awake | trt");
  oracle_cmd->add_option("--grid", or_grid, "Also run the grid search with this step (rational)");
  oracle_cmd->add_option("--max-tasks", or_max, "Largest instance for the exhaustive search");

  // verify
  std::string vf_only;
  std::uint64_t vf_seed = 0;
  bool vf_seed_set = false, vf_mutant = false;
  unsigned vf_threads = 0;
  auto* verify_cmd = app.add_subcommand("verify", "Run the acceptance battery");
  verify_cmd->add_option("--only", vf_only, "Group (oracle, awake, mrt, dtap, determinism) or criterion id");
  verify_cmd->add_option("--seed", vf_seed, "Battery seed (default TAPLAB_SEED or built in)")->each([&](const std::string&) { vf_seed_set = true; });
  verify_cmd->add_flag("--mutant-bal", vf_mutant, "Check the balance criterion against the inverted balance test");
  verify_cmd->add_option("--threads", vf_threads, "Worker threads (default: hardware)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*run_cmd) {
      const Tap tap = load_tap(run_file);
      const RunConfig rc = to_config(run_sched, run_flags);
      const RunResult r = run_scheduler(tap, rc);
      if (!run_trace.empty()) write_file(run_trace, trace_to_json(r.trace));
      out << run_record(r, rc) << '\n';
      return r.violations.empty() ? 0 : 1;
    }
    if (*sweep_cmd) {
      const std::uint64_t seed = sw_seed_set ? sw_seed : default_seed(kDefaultSeed);
      std::vector<NamedTap> corpus;
      if (!sw_dir.empty()) {
        corpus = load_corpus_dir(sw_dir);
      } else {
        for (const auto& ps : split_list(sw_ps)) {
          GenOptions g = sw_gen;
          g.p = std::stoi(ps);
          for (std::size_t i = 0; i < sw_count; ++i) {
            g.seed = seed + i;
            corpus.push_back({sw_generator + "-p" + ps + "-s" + std::to_string(g.seed), generate(sw_generator, g)});
          }
        }
      }
      OracleMode mode;
      if (sw_oracle == "exact") {
        mode = OracleMode::Exact;
      } else if (sw_oracle == "skip") {
        mode = OracleMode::Skip;
      } else {
        throw InvalidArgument("unknown oracle mode '" + sw_oracle + "'");
      }
      const RunConfig base = to_config("bal", sw_flags);
      const std::string csv = sweep_csv(sweep(corpus, split_list(sw_schedulers), base, mode, sw_threads));
      if (sw_out.empty()) {
        out << csv;
      } else {
        std::ofstream f(sw_out);
        if (!f) throw InvalidArgument("cannot write '" + sw_out + "'");
        f << csv;
      }
      return 0;
    }
    if (*gen_cmd) {
      if (!gen_seed_set) gen_opts.seed = default_seed(kDefaultSeed);
      const Tap tap = generate(gen_name, gen_opts);
      if (gen_out.empty()) {
        out << tap_to_json(tap) << '\n';
      } else {
        save_tap(tap, gen_out);
      }
      return 0;
    }
    if (*duel_cmd) {
      const RunConfig rc = to_config(duel_sched, duel_flags);
      const DuelResult d = run_duel(duel_adv, duel_p, rc, duel_r);
      if (!duel_trace.empty()) write_file(duel_trace, trace_to_json(d.run.trace));
      ojson j;
      j["scheduler"] = duel_sched;
      j["adversary"] = duel_adv;
      j["objective"] = d.objective;
      j["p"] = duel_p;
      j["n"] = d.run.metrics.n;
      j["injected"] = d.injected;
      j["cost"] = d.cost.str();
      j["opt"] = d.opt.str();
      j["opt_exact"] = d.opt_exact;
      j["ratio"] = d.ratio.str();
      j["ratio_approx"] = d.ratio.to_double();
      j["violations"] = d.run.violations;
      out << j.dump() << '\n';
      return d.run.violations.empty() ? 0 : 1;
    }
    if (*oracle_cmd) {
      const Tap tap = load_tap(or_file);
      ojson j;
      j["instance_hash"] = hex64(instance_hash(tap));
      if (or_objective == "awake") {
        const OptAwake o = opt_awake_exhaustive(tap, or_max);
        j["opt_awake"] = o.value.str();
        j["exact"] = o.exact;
        ojson dec = ojson::array();
        for (Decision d : o.decisions) dec.push_back(to_string(d));
        j["decisions"] = std::move(dec);
        if (!or_grid.empty()) j["grid_opt"] = grid_opt(tap, Objective::Awake, Rational::parse(or_grid)).str();
      } else if (or_objective == "trt") {
        j["trt_lower"] = opt_trt_lower(tap).str();
        if (!or_grid.empty()) j["grid_opt"] = grid_opt(tap, Objective::Trt, Rational::parse(or_grid)).str();
      } else {
        throw InvalidArgument("unknown objective '" + or_objective + "'");
      }
      out << j.dump() << '\n';
      return 0;
    }
    if (*verify_cmd) {
      BatteryOptions opts;
      opts.seed = vf_seed_set ? vf_seed : default_seed(kDefaultBatterySeed);
      opts.only = vf_only;
      opts.mutant_bal = vf_mutant;
      opts.threads = vf_threads;
      const BatteryReport report = run_battery(opts, [&out](const CriterionResult& r) { out << format_result(r) << std::endl; });
      return report.passed() ? 0 : 1;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace taplab::cli
