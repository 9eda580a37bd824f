// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: single simulations, sway-timing sweeps, delay-trace
// analysis and generation, and the closed-form calculators.

#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gasperlab/config_io.hpp"
#include "gasperlab/experiments.hpp"

namespace {

using namespace gasperlab;

// Precedence: --seed flag, then GASPER_LAB_SEED, then the config file.
void apply_seed(ExperimentConfig& config, const std::optional<std::uint64_t>& flag) {
  if (flag) {
    config.seed = *flag;
    return;
  }
  if (const char* env = std::getenv("GASPER_LAB_SEED")) {
    try {
      std::size_t used = 0;
      config.seed = std::stoull(env, &used);
      if (env[used] != '\0') throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw std::invalid_argument("GASPER_LAB_SEED is not a valid 64-bit seed");
    }
  }
}

const char* event_name(EventKind kind) {
  switch (kind) {
    case EventKind::slot_start: return "slot_start";
    case EventKind::attest_due: return "attest_due";
    case EventKind::deliver: return "deliver";
    case EventKind::adversary_timer: return "adversary_timer";
  }
  return "unknown";
}

void print_event(const SimEvent& e) {
  switch (e.kind) {
    case EventKind::slot_start:
    case EventKind::attest_due:
      std::fprintf(stderr, "t=%lld %s slot=%llu\n", static_cast<long long>(e.due),
                   event_name(e.kind), static_cast<unsigned long long>(e.slot));
      break;
    case EventKind::deliver:
      std::fprintf(stderr, "t=%lld deliver msg=%llu recipient=%u\n",
                   static_cast<long long>(e.due),
                   static_cast<unsigned long long>(e.message), e.recipient);
      break;
    case EventKind::adversary_timer:
      std::fprintf(stderr, "t=%lld adversary_timer tag=%llu\n",
                   static_cast<long long>(e.due),
                   static_cast<unsigned long long>(e.tag));
      break;
  }
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty())
    std::fputs(text.c_str(), stdout);
  else
    write_file(out_path, text);
}

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<Slot> horizon;
  std::optional<std::uint32_t> trials;
  std::string out_path;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "JSON experiment config file");
  cmd->add_option("--seed", flags.seed, "base seed (overrides config and GASPER_LAB_SEED)");
  cmd->add_option("--horizon", flags.horizon, "simulated slots (overrides config)");
  cmd->add_option("--trials", flags.trials, "trials per run or grid point (overrides config)");
  cmd->add_option("--out", flags.out_path, "output file (default: stdout)");
}

ExperimentConfig effective_config(const CommonFlags& flags) {
  ExperimentConfig config;
  if (!flags.config_path.empty()) config = load_config(flags.config_path);
  apply_seed(config, flags.seed);
  if (flags.horizon) config.horizon = *flags.horizon;
  if (flags.trials) config.trials = *flags.trials;
  return config;
}

int cmd_simulate(const CommonFlags& flags, bool verbose, bool dump_only) {
  ExperimentConfig config = effective_config(flags);
  if (dump_only) {
    emit(dump_config(config), flags.out_path);
    return 0;
  }
  config.validate();
  std::vector<std::pair<std::uint64_t, RunRecord>> runs;
  for (std::uint32_t trial = 0; trial < config.trials; ++trial) {
    std::uint64_t seed = derive_seed(config.seed, 0, trial);
    if (verbose) std::fprintf(stderr, "# trial %u seed %llu\n", trial,
                              static_cast<unsigned long long>(seed));
    RunRecord rec = verbose ? run_once(config, seed, print_event) : run_once(config, seed);
    runs.emplace_back(seed, rec);
  }
  emit(results_csv(config, runs), flags.out_path);
  return 0;
}

int cmd_sweep(const CommonFlags& flags, const std::optional<TimeMs>& t_min,
              const std::optional<TimeMs>& t_max, const std::optional<TimeMs>& t_step,
              unsigned jobs) {
  ExperimentConfig config = effective_config(flags);
  if (t_min || t_max || t_step) {
    SweepRange range = config.sweep.value_or(SweepRange{});
    if (t_min) range.t_min = *t_min;
    if (t_max) range.t_max = *t_max;
    if (t_step) range.step = *t_step;
    config.sweep = range;
  }
  if (!config.sweep)
    throw std::invalid_argument(
        "sweep: no grid; set --t-delay-min/--t-delay-max or the config's sweep block");
  SweepResult result = sweep_tdelay(config, jobs);
  emit(sweep_csv(result), flags.out_path);
  std::fprintf(stderr, "argmax t_delay_ms %lld\n",
               static_cast<long long>(result.argmax_t_delay));
  return 0;
}

int cmd_analyze_trace(const std::string& trace_path, std::uint32_t sender,
                      const std::string& out_path) {
  TraceSet trace = load_trace(trace_path);
  CdfStats stats = cdf_stats(trace, sender);
  char buf[128];
  std::string text;
  std::snprintf(buf, sizeof buf, "messages %zu\n", stats.message_count);
  text += buf;
  std::snprintf(buf, sizeof buf, "median_ms %lld\n", static_cast<long long>(stats.median));
  text += buf;
  emit(text, out_path);
  return 0;
}

int cmd_gen_trace(double median, double sigma, std::uint32_t nodes, std::uint32_t messages,
                  std::uint32_t sender, std::uint64_t seed, const std::string& out_path) {
  SeededRandom rng(seed);
  TraceSet trace = generate_trace(median, sigma, nodes, messages, sender, rng);
  save_trace(trace, out_path);
  std::fprintf(stderr, "wrote %zu records to %s\n", trace.records.size(), out_path.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic proof-of-stake consensus attack simulator"};
  app.require_subcommand(1);

  // simulate
  CommonFlags sim_flags;
  bool verbose = false;
  bool dump_only = false;
  CLI::App* simulate = app.add_subcommand("simulate", "run one experiment, emit results CSV");
  add_common(simulate, sim_flags);
  simulate->add_flag("--verbose", verbose, "log every engine event to stderr");
  simulate->add_flag("--dump-config", dump_only, "print the effective config and exit");

  // sweep
  CommonFlags sweep_flags;
  std::optional<TimeMs> t_min, t_max, t_step;
  unsigned jobs = 1;
  CLI::App* sweep = app.add_subcommand("sweep", "grid-search sway lead time, emit sweep CSV");
  add_common(sweep, sweep_flags);
  sweep->add_option("--t-delay-min", t_min, "grid start, ms");
  sweep->add_option("--t-delay-max", t_max, "grid end (inclusive), ms");
  sweep->add_option("--t-delay-step", t_step, "grid step, ms (default 5)");
  sweep->add_option("--jobs", jobs, "worker threads (0 = hardware concurrency)");

  // analyze-trace
  std::string trace_path;
  std::uint32_t sender = 0;
  std::string analyze_out;
  CLI::App* analyze = app.add_subcommand("analyze-trace", "per-sender delay stats of a trace");
  analyze->add_option("--trace", trace_path, "trace CSV: msg_id,sender,receiver,delay_ms")
      ->required();
  analyze->add_option("--sender", sender, "sender node id");
  analyze->add_option("--out", analyze_out, "output file (default: stdout)");

  // calc
  std::string formula;
  std::uint32_t calc_k = 1;
  std::uint64_t w_honest = 0;
  std::uint64_t n_adv = 0, n_total = 1;
  std::uint32_t spe = 32;
  std::uint64_t horizon_slots = 7200;
  double beta = 0.15;
  std::string mode = "targeted";
  CLI::App* calc = app.add_subcommand("calc", "closed-form attack arithmetic");
  calc->add_option("formula", formula,
                   "budget-refined | budget-targeted | selection-probs | opportune-wait | "
                   "listening-time")
      ->required();
  calc->add_option("--k", calc_k, "reorg length");
  calc->add_option("--w-honest", w_honest, "honest validators per committee");
  calc->add_option("--n-adv", n_adv, "adversarial validators");
  calc->add_option("--n-total", n_total, "total validators");
  calc->add_option("--slots-per-epoch", spe, "slots per epoch");
  calc->add_option("--horizon-slots", horizon_slots, "slots in the selection window");
  calc->add_option("--beta", beta, "adversarial stake fraction");
  calc->add_option("--mode", mode, "targeted | probabilistic (listening-time)");

  // gen-trace
  double gen_median = 100.0, gen_sigma = 0.1;
  std::uint32_t gen_nodes = 256, gen_messages = 50, gen_sender = 0;
  std::uint64_t gen_seed = 1;
  std::string gen_out;
  CLI::App* gen = app.add_subcommand("gen-trace", "synthesize a lognormal gossip trace");
  gen->add_option("--median", gen_median, "median delay, ms");
  gen->add_option("--sigma", gen_sigma, "lognormal sigma");
  gen->add_option("--nodes", gen_nodes, "receiving nodes per message");
  gen->add_option("--messages", gen_messages, "broadcast count");
  gen->add_option("--sender", gen_sender, "sender node id");
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--out", gen_out, "trace CSV path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) return cmd_simulate(sim_flags, verbose, dump_only);
    if (sweep->parsed()) return cmd_sweep(sweep_flags, t_min, t_max, t_step, jobs);
    if (analyze->parsed()) return cmd_analyze_trace(trace_path, sender, analyze_out);
    if (gen->parsed()) return cmd_gen_trace(gen_median, gen_sigma, gen_nodes, gen_messages,
                                            gen_sender, gen_seed, gen_out);
    if (calc->parsed()) {
      if (formula == "budget-refined") {
        std::printf("%llu\n",
                    static_cast<unsigned long long>(calc_budget_refined(calc_k, w_honest)));
      } else if (formula == "budget-targeted") {
        std::printf("%llu\n", static_cast<unsigned long long>(calc_budget_targeted(calc_k)));
      } else if (formula == "selection-probs") {
        SelectionProbs p = calc_selection_probs(n_adv, n_total, spe, horizon_slots);
        std::printf("p_proposer %.6f\np_committee %.6f\np_joint %.6f\n", p.p_proposer,
                    p.p_committee, p.p_joint);
      } else if (formula == "opportune-wait") {
        std::printf("%.4f\n", calc_opportune_wait(beta));
      } else if (formula == "listening-time") {
        if (mode != "targeted" && mode != "probabilistic")
          throw std::invalid_argument("calc: --mode must be targeted or probabilistic");
        std::printf("%u\n", calc_listening_time(calc_k, mode == "targeted"));
      } else {
        throw std::invalid_argument("calc: unknown formula '" + formula + "'");
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
