// SPDX-License-Identifier: Apache-2.0
#include "gasperlab/experiments.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace gasperlab {

void ExperimentConfig::validate() const {
  params.validate();
  strategy.validate();
  if (horizon == 0) throw std::invalid_argument("experiment: horizon must be positive");
  if (trials == 0) throw std::invalid_argument("experiment: trials must be >= 1");
  if (n_adversarial > params.n_validators)
    throw std::invalid_argument("experiment: n_adversarial exceeds n_validators");
  if (sweep) {
    if (sweep->step <= 0) throw std::invalid_argument("experiment: sweep step must be positive");
    if (sweep->t_min > sweep->t_max)
      throw std::invalid_argument("experiment: sweep t_min exceeds t_max");
  }
  if (delay.variant == DelayModel::Variant::empirical && !delay.trace)
    throw std::invalid_argument("experiment: empirical delay model lacks a trace");
}

RunRecord run_once(const ExperimentConfig& config, std::uint64_t seed) {
  return run_once(config, seed, nullptr);
}

RunRecord run_once(const ExperimentConfig& config, std::uint64_t seed,
                   const std::function<void(const SimEvent&)>& trace) {
  config.validate();
  SimulationConfig sim;
  sim.params = config.params;
  sim.delay = config.delay;
  sim.honest = config.honest;
  sim.horizon = config.horizon;
  sim.seed = seed;
  sim.n_adversarial = config.n_adversarial;
  Simulation run(sim, make_strategy(config.strategy));
  if (trace) run.set_event_trace(trace);
  return run.run();
}

const SweepPoint* SweepResult::point_at(TimeMs t_delay_ms) const {
  for (const SweepPoint& p : points)
    if (p.t_delay_ms == t_delay_ms) return &p;
  return nullptr;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t point, std::uint64_t trial) {
  return SeededRandom::derive(seed, point, trial);
}

SweepResult sweep_tdelay(const ExperimentConfig& config, unsigned jobs) {
  config.validate();
  if (!config.sweep) throw std::invalid_argument("sweep: config has no sweep range");
  if (config.strategy.kind != StrategyKind::balancing &&
      config.strategy.kind != StrategyKind::combined)
    throw std::invalid_argument("sweep: strategy must be balancing or combined");

  std::vector<TimeMs> grid;
  for (TimeMs t = config.sweep->t_min; t <= config.sweep->t_max; t += config.sweep->step)
    grid.push_back(t);

  const std::size_t n_tasks = grid.size() * config.trials;
  std::vector<Slot> stalls(n_tasks, 0);
  std::vector<std::uint32_t> offenses(n_tasks, 0);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t task = next.fetch_add(1); task < n_tasks; task = next.fetch_add(1)) {
      const std::size_t point = task / config.trials;
      const std::size_t trial = task % config.trials;
      ExperimentConfig one = config;
      one.sweep.reset();
      one.strategy.t_delay_ms = grid[point];
      RunRecord rec = run_once(one, derive_seed(config.seed, point, trial));
      stalls[task] = rec.stall_duration;
      offenses[task] = rec.slashable_offenses;
    }
  };

  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  SweepResult result;
  result.total_runs = n_tasks;
  for (std::uint32_t off : offenses) result.total_offenses += off;
  double best = -1.0;
  for (std::size_t point = 0; point < grid.size(); ++point) {
    double total = 0.0;
    for (std::uint32_t trial = 0; trial < config.trials; ++trial)
      total += static_cast<double>(stalls[point * config.trials + trial]);
    SweepPoint p;
    p.t_delay_ms = grid[point];
    p.mean_stall_slots = total / static_cast<double>(config.trials);
    p.trials = config.trials;
    result.points.push_back(p);
    if (p.mean_stall_slots > best) {
      best = p.mean_stall_slots;
      result.argmax_t_delay = p.t_delay_ms;
    }
  }
  return result;
}

std::uint64_t calc_budget_refined(std::uint32_t k, std::uint64_t w_honest) {
  if (k < 1) throw std::invalid_argument("budget: k must be >= 1");
  return w_honest * (k - 1) + 1;
}

std::uint64_t calc_budget_targeted(std::uint32_t k) {
  if (k < 1) throw std::invalid_argument("budget: k must be >= 1");
  return 2ull * k - 1;
}

SelectionProbs calc_selection_probs(std::uint64_t n_adv, std::uint64_t n_total,
                                    std::uint32_t slots_per_epoch,
                                    std::uint64_t horizon_slots) {
  if (n_adv > n_total) throw std::invalid_argument("selection: n_adv exceeds n_total");
  if (n_total == 0 || slots_per_epoch == 0)
    throw std::invalid_argument("selection: sizes must be positive");
  SelectionProbs p;
  if (n_adv == 0) return p;
  double miss_proposer = 1.0 - static_cast<double>(n_adv) / static_cast<double>(n_total);
  p.p_proposer = 1.0 - std::pow(miss_proposer, static_cast<double>(horizon_slots));
  double miss_committee = 1.0 - 1.0 / static_cast<double>(slots_per_epoch);
  p.p_committee = 1.0 - std::pow(miss_committee, static_cast<double>(n_adv));
  p.p_joint = p.p_proposer * p.p_committee;
  return p;
}

SelectionProbs measure_selection_probs(std::uint64_t n_adv, std::uint64_t n_total,
                                       std::uint32_t slots_per_epoch,
                                       std::uint64_t horizon_slots, std::uint32_t samples,
                                       std::uint64_t seed) {
  if (n_adv > n_total) throw std::invalid_argument("selection: n_adv exceeds n_total");
  if (n_total == 0 || slots_per_epoch == 0 || samples == 0)
    throw std::invalid_argument("selection: sizes must be positive");
  SeededRandom rng(seed);
  std::uint64_t prop_hits = 0;
  std::uint64_t comm_hits = 0;
  std::uint64_t joint_hits = 0;
  for (std::uint32_t s = 0; s < samples; ++s) {
    bool proposer = false;
    for (std::uint64_t slot = 0; slot < horizon_slots && !proposer; ++slot)
      proposer = rng.uniform(n_total) < n_adv;
    bool committee = false;
    for (std::uint64_t v = 0; v < n_adv && !committee; ++v)
      committee = rng.uniform(slots_per_epoch) == 0;
    prop_hits += proposer ? 1 : 0;
    comm_hits += committee ? 1 : 0;
    joint_hits += (proposer && committee) ? 1 : 0;
  }
  SelectionProbs p;
  p.p_proposer = static_cast<double>(prop_hits) / static_cast<double>(samples);
  p.p_committee = static_cast<double>(comm_hits) / static_cast<double>(samples);
  p.p_joint = static_cast<double>(joint_hits) / static_cast<double>(samples);
  return p;
}

double calc_opportune_wait(double beta) {
  if (beta <= 0.0 || beta >= 1.0)
    throw std::invalid_argument("opportune wait: beta must be in (0, 1)");
  return 1.0 / (beta * beta);
}

double measure_opportune_wait(double beta, std::uint32_t epochs, std::uint64_t seed) {
  if (beta <= 0.0 || beta >= 1.0)
    throw std::invalid_argument("opportune wait: beta must be in (0, 1)");
  SeededRandom rng(seed);
  std::uint64_t waited = 0;
  std::uint64_t events = 0;
  std::uint64_t since_last = 0;
  for (std::uint32_t e = 0; e < epochs; ++e) {
    bool slot0 = rng.uniform_real() < beta;
    bool slot1 = rng.uniform_real() < beta;
    ++since_last;
    if (slot0 && slot1) {
      waited += since_last;
      ++events;
      since_last = 0;
    }
  }
  if (events == 0) throw std::runtime_error("opportune wait: no opportune epoch observed");
  return static_cast<double>(waited) / static_cast<double>(events);
}

std::uint32_t calc_listening_time(std::uint32_t k, bool targeted) {
  if (k < 1) throw std::invalid_argument("listening time: k must be >= 1");
  return targeted ? 12 * k : 24;
}

}  // namespace gasperlab
