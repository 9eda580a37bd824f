// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gasperlab/net_model.hpp"
#include "gasperlab/simulation.hpp"
#include "gasperlab/strategies.hpp"

namespace gasperlab {

// Inclusive grid over the sway lead time, walked in 5 ms steps by default.
struct SweepRange {
  TimeMs t_min = 0;
  TimeMs t_max = 0;
  TimeMs step = 5;
};

// Everything one experiment needs: the protocol instance, the network, the
// adversary, and the trial bookkeeping. `trials` applies per grid point when
// a sweep range is present and to repeated single runs otherwise.
struct ExperimentConfig {
  ProtocolParams params;
  DelayModel delay;
  HonestConfig honest;
  StrategyConfig strategy;
  Slot horizon = 8;
  std::uint32_t trials = 10;
  std::uint64_t seed = 1;
  std::uint32_t n_adversarial = 0;
  std::string trace_path;  // source of `delay.trace` when variant == empirical
  std::optional<SweepRange> sweep;

  void validate() const;
};

// One deterministic simulation with the adversary configured by `config`,
// ignoring any sweep range. Throws std::invalid_argument on a bad config.
// `trace` (optional) observes every processed event.
RunRecord run_once(const ExperimentConfig& config, std::uint64_t seed);
RunRecord run_once(const ExperimentConfig& config, std::uint64_t seed,
                   const std::function<void(const SimEvent&)>& trace);

struct SweepPoint {
  TimeMs t_delay_ms = 0;
  double mean_stall_slots = 0.0;
  std::uint32_t trials = 0;
};

struct SweepResult {
  std::vector<SweepPoint> points;  // ascending t_delay
  TimeMs argmax_t_delay = 0;       // first grid point attaining the maximum
  std::uint64_t total_runs = 0;
  std::uint64_t total_offenses = 0;  // summed slashable offenses, all runs

  const SweepPoint* point_at(TimeMs t_delay_ms) const;
};

// Evaluates mean stall duration on the sweep grid. Trials are independent
// simulations seeded by derive_seed(seed, point index, trial index); workers
// pull (point, trial) tasks from a shared queue and write into preassigned
// slots, so the merged result does not depend on `jobs`.
SweepResult sweep_tdelay(const ExperimentConfig& config, unsigned jobs = 1);

// Stateless per-trial seed stream (splitmix64 over the packed indices).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t point, std::uint64_t trial);

// Adversarial validators needed for a k-block reorg when every honest vote of
// the withheld window must be outweighed: w_honest per hidden slot, plus the
// single vote that wins the release race.
std::uint64_t calc_budget_refined(std::uint32_t k, std::uint64_t w_honest);

// Budget when the adversary can also time message arrivals within a slot:
// one withheld vote plus two sway votes per additional hidden block.
std::uint64_t calc_budget_targeted(std::uint32_t k);

struct SelectionProbs {
  double p_proposer = 0.0;   // >= 1 adversarial proposer within the horizon
  double p_committee = 0.0;  // >= 1 adversarial member in a fixed slot's committee
  double p_joint = 0.0;      // both, treated as independent
};

// Closed forms for uniform proposer draws and per-epoch committee placement.
SelectionProbs calc_selection_probs(std::uint64_t n_adv, std::uint64_t n_total,
                                    std::uint32_t slots_per_epoch,
                                    std::uint64_t horizon_slots);

// Monte-Carlo estimate of the same three probabilities from simulated role
// draws; cross-checks the closed forms.
SelectionProbs measure_selection_probs(std::uint64_t n_adv, std::uint64_t n_total,
                                       std::uint32_t slots_per_epoch,
                                       std::uint64_t horizon_slots, std::uint32_t samples,
                                       std::uint64_t seed);

// Mean epochs until both leading proposers of an epoch are adversarial: 1/b^2.
double calc_opportune_wait(double beta);

// Empirical mean gap between opportune epochs over at least `epochs` draws.
double measure_opportune_wait(double beta, std::uint32_t epochs, std::uint64_t seed);

// Extra transaction-listening time a k-reorg buys its proposer, in seconds:
// 12k when arrivals can be targeted per validator, a flat 24 when the
// adversary can only shift release instants against the network's delay
// distribution.
std::uint32_t calc_listening_time(std::uint32_t k, bool targeted);

}  // namespace gasperlab
