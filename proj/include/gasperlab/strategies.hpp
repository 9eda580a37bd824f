// SPDX-License-Identifier: Apache-2.0
//
// Adversary controllers. Each strategy drives the validators configured as
// adversarial in a Simulation: it may withhold blocks and votes, release them
// with chosen per-recipient arrival times, and spend banked committee votes
// to steer the honest fork choice. Three controllers are provided:
//
//  - RefinedReorgStrategy: withholds one private block plus the attack
//    committees' votes, then releases the bundle just before the committee of
//    the following slot attests, orphaning k honest blocks.
//  - BalancingStrategy: two conflicting blocks at an epoch boundary are kept
//    in an exact weight tie; a single withheld vote surfaces shortly before
//    each committee attests so that message latency splits the honest vote,
//    and banked votes rebalance the residue at the end of every slot.
//  - CombinedStrategy: a long-range variant of the reorg that keeps the
//    private branch trailing the public one by exactly one vote across k
//    slots, either by targeted per-recipient delivery or probabilistically
//    through tuned broadcast timing plus a per-slot rebalancing budget.
//
// All controllers only ever cast one vote per validator per target epoch and
// never emit surround links, so no run produces slashable evidence.

#pragma once

#include <cstdint>
#include <memory>
#include <utility>

#include "gasperlab/simulation.hpp"

namespace gasperlab {

enum class StrategyKind { honest, refined_reorg, balancing, combined };

struct StrategyConfig {
  StrategyKind kind = StrategyKind::honest;
  // Reorg length (refined_reorg, combined): number of honest blocks orphaned
  // on success. The private block occupies attack_slot and the k honest
  // blocks of slots attack_slot+1 .. attack_slot+k are the targets.
  std::uint32_t k = 1;
  // Sway lead time (balancing, combined probabilistic): withheld messages are
  // broadcast this long before the committee's voting instant, so roughly the
  // delay-CDF mass below t_delay_ms of the committee sees them in time.
  TimeMs t_delay_ms = 0;
  // combined, probabilistic mode: maximum banked votes spent per slot to
  // restore the one-vote trail margin. 0 means unlimited.
  std::uint32_t rebalance_budget_per_slot = 0;
  // combined: when true, per-recipient arrival overrides split each middle
  // committee exactly; when false, plain broadcasts t_delay_ms early split it
  // probabilistically.
  bool targeted_mode = false;
  // First slot of the private branch (refined_reorg, combined).
  Slot attack_slot = 2;
  // Epoch whose boundary the balancing attack contests.
  Epoch attack_epoch = 1;
  // Pin the roles the attack depends on (attack-slot proposers; for
  // balancing, the proposers of the epoch's first two slots).
  bool pin_roles = true;
  // Additionally pin adversarial members into the attack committees. Leave
  // off to study runs where the adversary drew no committee seats.
  bool pin_committees = true;

  void validate() const;
};

// Builds the configured controller; nullptr for StrategyKind::honest.
std::shared_ptr<Strategy> make_strategy(const StrategyConfig& cfg);

// Latest-vote weights of the subtrees rooted at `left` and `right`, counting
// the votes that are fork-choice-valid at `current_slot`. Votes for blocks in
// neither subtree (e.g. for a common ancestor) count toward neither side.
std::pair<std::uint32_t, std::uint32_t> subtree_votes(const ChainView& view, Slot current_slot,
                                                      BlockId left, BlockId right);

}  // namespace gasperlab
