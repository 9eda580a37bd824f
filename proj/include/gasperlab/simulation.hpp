// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "gasperlab/chain_view.hpp"
#include "gasperlab/congestion.hpp"
#include "gasperlab/honest.hpp"
#include "gasperlab/net_model.hpp"
#include "gasperlab/participant_view.hpp"
#include "gasperlab/roles.hpp"
#include "gasperlab/sim_engine.hpp"

namespace gasperlab {

// One network message: a block or a vote broadcast at sent_at. Arrival times
// are sampled only for validators that could act while the message is still
// in flight (plus the adversary's observer); everyone else first consults the
// message after settle_at, by which point the delay bound guarantees global
// receipt, so no per-recipient sample is needed for them.
struct SimMessage {
  std::uint64_t id = 0;
  std::optional<Block> block;
  std::optional<Vote> vote;
  ValidatorId sender = 0;
  TimeMs sent_at = 0;
  TimeMs settle_at = 0;
  std::map<ValidatorId, TimeMs> arrival;

  TimeMs arrival_for(ValidatorId v) const {
    auto it = arrival.find(v);
    return it == arrival.end() ? settle_at : it->second;
  }
};

// Committee votes cast for the two competing branches in one slot, counting
// honest attesters only; branch identity is fixed by the active strategy.
struct VoteSplit {
  Slot slot = 0;
  std::uint32_t left = 0;
  std::uint32_t right = 0;
};

struct RunRecord {
  bool success = false;
  std::uint32_t reorg_length_achieved = 0;
  Slot stall_duration = 0;
  std::vector<VoteSplit> vote_splits;
  std::uint32_t adversarial_votes_spent = 0;
  std::uint32_t slashable_offenses = 0;
  Epoch finalization_delay = 0;
  std::vector<BlockId> orphaned_blocks;
  std::vector<std::uint32_t> aggregate_backlog;  // mempool size per slot
  std::uint32_t expired_target_votes = 0;
  std::uint32_t justifications_during_stall = 0;
  Slot horizon = 0;
};

class Simulation;

// Adversary controller. Controllers are deterministic state machines driven
// by the engine's event callbacks; they act only through the Simulation's
// broadcast/timer surface.
class Strategy {
 public:
  virtual ~Strategy() = default;
  // Pin roles and initialize state; runs after role assignment, before slot 0.
  virtual void on_setup(Simulation&) {}
  // True when the strategy itself handles validator v's attestation in slot s
  // (the simulation then skips the honest action for v).
  virtual bool controls(ValidatorId, Slot) const { return false; }
  virtual void on_slot_start(Simulation&, Slot) {}
  // End-of-slot tally observation for the slot that just finished.
  virtual void on_slot_tally(Simulation&, Slot) {}
  virtual void on_attest_due(Simulation&, Slot) {}
  virtual void on_observed(Simulation&, const SimMessage&) {}
  virtual void on_timer(Simulation&, std::uint64_t) {}
  // Runs after the horizon; fills success/stall/reorg fields of the record.
  virtual void on_finish(Simulation&) {}
};

struct SimulationConfig {
  ProtocolParams params;
  DelayModel delay;
  HonestConfig honest;
  Slot horizon = 8;
  std::uint64_t seed = 1;
  std::uint32_t n_adversarial = 0;  // adversarial validators are ids [0, n)
};

// Composes the chain views, role schedules, delay model, honest behavior, and
// an optional adversary strategy into one deterministic run.
//
// Invariants:
//  1. The base view only ever contains settled messages (settle_at <= now);
//     every event first advances the base in (settle_at, id) order.
//  2. A participant acting at time t sees the base plus the in-flight
//     messages broadcast before the current event whose arrival is <= t.
//  3. The omniscient view ingests every message at broadcast time and backs
//     metrics only, never participant decisions.
class Simulation {
 public:
  Simulation(SimulationConfig config, std::shared_ptr<Strategy> strategy = nullptr);

  RunRecord run();

  const ProtocolParams& params() const { return config_.params; }
  const SimulationConfig& config() const { return config_; }
  TimeMs now() const { return engine_.now(); }
  // Observer for every processed event (verbose logging); never dispatches.
  void set_event_trace(std::function<void(const SimEvent&)> fn) {
    engine_.set_trace(std::move(fn));
  }
  RoleSchedule& roles(Epoch e);
  const ChainView& omniscient() const { return omniscient_; }
  bool is_adversarial(ValidatorId v) const { return v < config_.n_adversarial; }
  BlockId next_block_id() { return next_block_id_++; }
  ValidatorId observer_id() const { return config_.params.n_validators; }
  TimeMs attest_time(Slot s) const {  // halfway-mode committee vote instant
    return config_.params.slot_start_ms(s) + config_.params.vote_offset_ms();
  }

  // What validator v can see right now: settled base plus in-flight messages
  // broadcast before this event that have reached v.
  LayeredView view_for(ValidatorId v) const;
  // The adversary's view: observer-arrived traffic plus its private overlay.
  LayeredView adversary_view(const std::vector<Block>& private_blocks,
                             const std::vector<Vote>& private_votes) const;

  std::uint64_t broadcast_block(const Block& b, ValidatorId sender,
                                const std::map<ValidatorId, TimeMs>& arrival_overrides = {});
  std::uint64_t broadcast_vote(const Vote& v, ValidatorId sender,
                               const std::map<ValidatorId, TimeMs>& arrival_overrides = {});
  void schedule_timer(TimeMs due, std::uint64_t tag);
  // Unreleased adversarial votes still join the end-of-run slashing audit.
  void register_private_vote(const Vote& v) { audit_votes_.push_back(v); }
  // Honest-equivalent proposal, used for adversarial proposers outside the
  // attack window so non-attack slots stay protocol-conformant.
  void propose_honest(Slot s, ValidatorId proposer);

  RunRecord& record() { return record_; }
  SeededRandom& strategy_rng() { return strategy_rng_; }
  const std::vector<Block>& blocks_broadcast() const { return blocks_broadcast_; }

  // Justified checkpoints with epoch >= 1 visible in the omniscient view at
  // the start of slot s (s == horizon reads the final state).
  std::size_t justified_count_at(Slot s) const;

 private:
  void dispatch(const SimEvent& e);
  void advance_base();
  void handle_slot_start(Slot s);
  void handle_attest_due(Slot s);
  std::uint64_t broadcast(std::optional<Block> block, std::optional<Vote> vote,
                          ValidatorId sender, const std::map<ValidatorId, TimeMs>& overrides);
  std::vector<ValidatorId> relevant_recipients(TimeMs from, TimeMs to) const;
  std::vector<std::uint64_t> visible_ids(ValidatorId v) const;
  LayeredView view_from_ids(const std::vector<std::uint64_t>& ids,
                            const std::vector<Block>& extra_blocks,
                            const std::vector<Vote>& extra_votes) const;
  std::uint32_t committee_index_of(const Vote& v) const;
  std::size_t count_justified(Epoch max_epoch) const;
  void finalize_metrics();

  SimulationConfig config_;
  std::shared_ptr<Strategy> strategy_;
  Engine engine_;
  SeededRandom delay_rng_;
  SeededRandom strategy_rng_;
  ChainView base_;
  ChainView omniscient_;
  std::vector<RoleSchedule> schedules_;
  CongestionModel congestion_;
  RunRecord record_;

  std::vector<SimMessage> messages_;  // master copy by id
  std::vector<SimMessage> pending_;   // in flight (not yet settled)
  std::size_t mark_ = 0;              // pending_ prefix visible to this event

  BlockId next_block_id_ = 1;
  std::vector<Block> blocks_broadcast_;
  std::vector<Vote> audit_votes_;
  std::vector<std::size_t> justified_count_at_slot_;
  std::vector<Epoch> finalized_at_slot_;
  std::vector<std::uint32_t> backlog_at_slot_;
  std::map<Slot, std::vector<std::pair<ValidatorId, TimeMs>>> eth2_dues_;
};

}  // namespace gasperlab
