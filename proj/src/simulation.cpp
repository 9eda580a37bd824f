// SPDX-License-Identifier: Apache-2.0
#include "gasperlab/simulation.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>

#include "gasperlab/fork_choice.hpp"

namespace gasperlab {

namespace {
// Independent random streams per concern, all derived from the run seed, so
// a strategy tweak never perturbs unrelated draws.
constexpr std::uint64_t kDelayStream = 0x64;
constexpr std::uint64_t kRolesStream = 0x52;
constexpr std::uint64_t kStrategyStream = 0x57;
}  // namespace

Simulation::Simulation(SimulationConfig config, std::shared_ptr<Strategy> strategy)
    : config_(std::move(config)),
      strategy_(std::move(strategy)),
      engine_(config_.params, config_.seed),
      delay_rng_(SeededRandom::derive(config_.seed, kDelayStream)),
      strategy_rng_(SeededRandom::derive(config_.seed, kStrategyStream)),
      base_(config_.params),
      omniscient_(config_.params) {
  const ProtocolParams& p = config_.params;
  p.validate();
  if (p.n_validators != p.committee_size * p.slots_per_epoch)
    throw std::invalid_argument(
        "simulation: n_validators must equal committee_size * slots_per_epoch");
  if (config_.horizon < 1) throw std::invalid_argument("simulation: horizon must be >= 1");
  if (config_.n_adversarial > p.n_validators)
    throw std::invalid_argument("simulation: adversarial count exceeds validator count");

  const Epoch last_epoch = p.epoch_of_slot(config_.horizon - 1);
  for (Epoch e = 0; e <= last_epoch; ++e) {
    SeededRandom role_rng(
        SeededRandom::derive(config_.seed, kRolesStream, static_cast<std::uint64_t>(e)));
    schedules_.push_back(assign_roles(p, e, role_rng));
  }
  justified_count_at_slot_.assign(static_cast<std::size_t>(config_.horizon), 0);
  finalized_at_slot_.assign(static_cast<std::size_t>(config_.horizon), 0);
  backlog_at_slot_.assign(static_cast<std::size_t>(config_.horizon), 0);
  record_.horizon = config_.horizon;
  engine_.set_dispatcher([this](const SimEvent& e) { dispatch(e); });
}

RoleSchedule& Simulation::roles(Epoch e) {
  if (e < 0 || static_cast<std::size_t>(e) >= schedules_.size())
    throw std::out_of_range("simulation: no role schedule for epoch " + std::to_string(e));
  return schedules_[static_cast<std::size_t>(e)];
}

RunRecord Simulation::run() {
  if (strategy_) strategy_->on_setup(*this);
  engine_.schedule_slot_start(0, 0);
  engine_.run_until(config_.horizon);
  finalize_metrics();
  if (strategy_) strategy_->on_finish(*this);
  record_.slashable_offenses = static_cast<std::uint32_t>(detect_slashing(audit_votes_).size());
  return record_;
}

void Simulation::dispatch(const SimEvent& e) {
  advance_base();
  mark_ = pending_.size();
  switch (e.kind) {
    case EventKind::slot_start:
      handle_slot_start(e.slot);
      break;
    case EventKind::attest_due:
      handle_attest_due(e.slot);
      break;
    case EventKind::deliver:
      if (strategy_) strategy_->on_observed(*this, messages_.at(e.message));
      break;
    case EventKind::adversary_timer:
      if (strategy_) strategy_->on_timer(*this, e.tag);
      break;
  }
}

void Simulation::advance_base() {
  const TimeMs t = engine_.now();
  std::vector<const SimMessage*> due;
  for (const SimMessage& m : pending_)
    if (m.settle_at <= t) due.push_back(&m);
  if (due.empty()) return;
  std::sort(due.begin(), due.end(), [](const SimMessage* a, const SimMessage* b) {
    return std::tie(a->settle_at, a->id) < std::tie(b->settle_at, b->id);
  });
  for (const SimMessage* m : due) {
    if (m->block) base_.add_block(*m->block);
    if (m->vote) base_.add_vote(*m->vote);
  }
  pending_.erase(std::remove_if(pending_.begin(), pending_.end(),
                                [&](const SimMessage& m) { return m.settle_at <= t; }),
                 pending_.end());
}

void Simulation::handle_slot_start(Slot s) {
  const ProtocolParams& p = config_.params;
  const Epoch max_epoch = p.epoch_of_slot(config_.horizon) + 1;
  justified_count_at_slot_[static_cast<std::size_t>(s)] = count_justified(max_epoch);
  finalized_at_slot_[static_cast<std::size_t>(s)] = omniscient_.finalized().epoch;

  congestion_.on_slot_boundary(s);
  const BlockId head = ghost_head(omniscient_, s);
  congestion_.requeue_orphaned([&](BlockId b) { return omniscient_.is_ancestor(b, head); });

  if (strategy_ && s > 0) strategy_->on_slot_tally(*this, s - 1);
  if (strategy_) strategy_->on_slot_start(*this, s);

  const RoleSchedule& sched = roles(p.epoch_of_slot(s));
  const ValidatorId proposer = sched.proposer_of(s);
  if (!(strategy_ && is_adversarial(proposer))) propose_honest(s, proposer);

  if (config_.honest.attestation_timing == AttestationTiming::gasper_halfway) {
    engine_.schedule_attest_due(attest_time(s), s);
  } else {
    // eth2 timing: each member votes at its own proposal arrival or one third
    // into the slot, whichever comes first.
    const SimMessage* proposal = nullptr;
    for (auto it = pending_.rbegin(); it != pending_.rend(); ++it)
      if (it->block && it->block->slot == s) {
        proposal = &*it;
        break;
      }
    auto& dues = eth2_dues_[s];
    std::set<TimeMs> distinct;
    for (ValidatorId v : sched.committee_of(s)) {
      TimeMs due = p.slot_start_ms(s) + p.slot_duration_ms / 3;
      if (proposal) due = std::min(due, proposal->arrival_for(v));
      due = std::max(due, now());
      dues.push_back({v, due});
      distinct.insert(due);
    }
    for (TimeMs t : distinct) engine_.schedule_attest_due(t, s);
  }

  if (s + 1 < config_.horizon) engine_.schedule_slot_start(p.slot_start_ms(s + 1), s + 1);
  backlog_at_slot_[static_cast<std::size_t>(s)] =
      static_cast<std::uint32_t>(congestion_.backlog());
}

void Simulation::handle_attest_due(Slot s) {
  if (strategy_) strategy_->on_attest_due(*this, s);
  const RoleSchedule& sched = roles(config_.params.epoch_of_slot(s));
  std::vector<ValidatorId> actors;
  if (config_.honest.attestation_timing == AttestationTiming::gasper_halfway) {
    actors = sched.committee_of(s);
  } else {
    for (const auto& [v, due] : eth2_dues_[s])
      if (due == now()) actors.push_back(v);
  }
  // Same-instant attesters share a pre-batch snapshot: nobody sees a
  // co-member's vote cast at the same moment, and equal views share one fork
  // choice evaluation.
  std::map<std::vector<std::uint64_t>, Vote> memo;
  std::vector<Vote> cast;
  for (ValidatorId v : actors) {
    if (strategy_ && strategy_->controls(v, s)) continue;
    std::vector<std::uint64_t> ids = visible_ids(v);
    auto it = memo.find(ids);
    if (it == memo.end()) {
      LayeredView view = view_from_ids(ids, {}, {});
      it = memo.emplace(std::move(ids), build_attestation(view, v, s)).first;
    }
    Vote vote = it->second;
    vote.validator = v;
    cast.push_back(vote);
  }
  for (const Vote& v : cast) broadcast_vote(v, v.validator);
}

LayeredView Simulation::view_for(ValidatorId v) const {
  return view_from_ids(visible_ids(v), {}, {});
}

LayeredView Simulation::adversary_view(const std::vector<Block>& private_blocks,
                                       const std::vector<Vote>& private_votes) const {
  return view_from_ids(visible_ids(observer_id()), private_blocks, private_votes);
}

std::vector<std::uint64_t> Simulation::visible_ids(ValidatorId v) const {
  std::vector<std::uint64_t> out;
  const TimeMs t = engine_.now();
  for (std::size_t i = 0; i < mark_; ++i)
    if (pending_[i].arrival_for(v) <= t) out.push_back(pending_[i].id);
  return out;
}

LayeredView Simulation::view_from_ids(const std::vector<std::uint64_t>& ids,
                                      const std::vector<Block>& extra_blocks,
                                      const std::vector<Vote>& extra_votes) const {
  std::vector<Block> blocks;
  std::vector<Vote> votes;
  for (std::uint64_t id : ids) {
    const SimMessage& m = messages_[id];
    if (m.block) blocks.push_back(*m.block);
    if (m.vote) votes.push_back(*m.vote);
  }
  blocks.insert(blocks.end(), extra_blocks.begin(), extra_blocks.end());
  votes.insert(votes.end(), extra_votes.begin(), extra_votes.end());
  return LayeredView(base_, std::move(blocks), std::move(votes));
}

void Simulation::propose_honest(Slot s, ValidatorId proposer) {
  LayeredView view = view_for(proposer);
  Block b = build_proposal(view, next_block_id(), s, proposer);
  broadcast_block(b, proposer);
}

std::uint64_t Simulation::broadcast_block(const Block& b, ValidatorId sender,
                                          const std::map<ValidatorId, TimeMs>& overrides) {
  return broadcast(b, std::nullopt, sender, overrides);
}

std::uint64_t Simulation::broadcast_vote(const Vote& v, ValidatorId sender,
                                         const std::map<ValidatorId, TimeMs>& overrides) {
  return broadcast(std::nullopt, v, sender, overrides);
}

void Simulation::schedule_timer(TimeMs due, std::uint64_t tag) {
  engine_.schedule_adversary_timer(due, tag);
}

std::uint64_t Simulation::broadcast(std::optional<Block> block, std::optional<Vote> vote,
                                    ValidatorId sender,
                                    const std::map<ValidatorId, TimeMs>& overrides) {
  SimMessage m;
  m.id = messages_.size();
  m.block = std::move(block);
  m.vote = std::move(vote);
  m.sender = sender;
  m.sent_at = engine_.now();

  const TimeMs bound = config_.delay.settle_bound();
  std::vector<ValidatorId> recipients = relevant_recipients(m.sent_at, m.sent_at + bound);
  if (strategy_) recipients.push_back(observer_id());
  std::map<ValidatorId, TimeMs> delays = sample_delays(config_.delay, recipients, delay_rng_);
  for (const auto& [r, d] : delays) m.arrival[r] = m.sent_at + d;
  if (sender < config_.params.n_validators) m.arrival[sender] = m.sent_at;
  for (const auto& [r, t] : overrides) m.arrival[r] = t;
  m.settle_at = m.sent_at + bound;
  for (const auto& [r, t] : m.arrival) m.settle_at = std::max(m.settle_at, t);

  if (m.block) {
    omniscient_.add_block(*m.block);
    bool fresh = true;
    for (const Block& known : blocks_broadcast_)
      if (known.id == m.block->id) {
        fresh = false;
        break;
      }
    if (fresh) {
      blocks_broadcast_.push_back(*m.block);
      congestion_.on_block_broadcast(m.block->id);
    }
  }
  if (m.vote) {
    omniscient_.add_vote(*m.vote);
    audit_votes_.push_back(*m.vote);
    congestion_.on_vote_broadcast(engine_.current_slot(), *m.vote, committee_index_of(*m.vote));
    if (strategy_ && is_adversarial(m.vote->validator)) ++record_.adversarial_votes_spent;
  }
  if (strategy_) engine_.schedule_deliver(m.arrival_for(observer_id()), m.id, observer_id());
  messages_.push_back(m);
  pending_.push_back(m);
  return m.id;
}

std::vector<ValidatorId> Simulation::relevant_recipients(TimeMs from, TimeMs to) const {
  const ProtocolParams& p = config_.params;
  std::vector<ValidatorId> out;
  if (to <= from) return out;
  std::set<ValidatorId> seen;
  const Slot lo = std::max<Slot>(0, p.slot_of_time(from));
  const Slot hi = std::min<Slot>(config_.horizon - 1, p.slot_of_time(to));
  const bool halfway = config_.honest.attestation_timing == AttestationTiming::gasper_halfway;
  for (Slot s = lo; s <= hi; ++s) {
    const Epoch e = p.epoch_of_slot(s);
    if (static_cast<std::size_t>(e) >= schedules_.size()) break;
    const RoleSchedule& sched = schedules_[static_cast<std::size_t>(e)];
    const TimeMs start = p.slot_start_ms(s);
    if (start > from && start <= to) {
      const ValidatorId prop = sched.proposer_of(s);
      if (seen.insert(prop).second) out.push_back(prop);
    }
    // Halfway committees act at one instant; eth2 committees anywhere in the
    // first third of the slot.
    bool committee_acts;
    if (halfway) {
      const TimeMs at = start + p.vote_offset_ms();
      committee_acts = at > from && at <= to;
    } else {
      committee_acts = start + p.slot_duration_ms / 3 > from && start <= to;
    }
    if (committee_acts)
      for (ValidatorId v : sched.committee_of(s))
        if (seen.insert(v).second) out.push_back(v);
  }
  return out;
}

std::uint32_t Simulation::committee_index_of(const Vote& v) const {
  const Epoch e = config_.params.epoch_of_slot(v.slot);
  if (e < 0 || static_cast<std::size_t>(e) >= schedules_.size()) return 0;
  const auto& committee = schedules_[static_cast<std::size_t>(e)].committee_of(v.slot);
  for (std::uint32_t i = 0; i < committee.size(); ++i)
    if (committee[i] == v.validator) return i;
  return 0;
}

std::size_t Simulation::count_justified(Epoch max_epoch) const {
  std::size_t n = 0;
  for (Epoch e = 1; e <= max_epoch; ++e)
    if (omniscient_.justified_at(e)) ++n;
  return n;
}

std::size_t Simulation::justified_count_at(Slot s) const {
  const Epoch max_epoch = config_.params.epoch_of_slot(config_.horizon) + 1;
  if (s >= config_.horizon) return count_justified(max_epoch);
  return justified_count_at_slot_[static_cast<std::size_t>(s)];
}

void Simulation::finalize_metrics() {
  const ProtocolParams& p = config_.params;
  const BlockId head = ghost_head(omniscient_, config_.horizon);
  for (const Block& b : blocks_broadcast_)
    if (!omniscient_.is_ancestor(b.id, head)) record_.orphaned_blocks.push_back(b.id);
  std::sort(record_.orphaned_blocks.begin(), record_.orphaned_blocks.end());

  // Finality lag: how far behind the one-epoch-trailing ideal the finalized
  // epoch sat when each epoch ended, maximized over completed epochs.
  Epoch delay = 0;
  for (Epoch e = 2;; ++e) {
    const Slot end = p.first_slot_of_epoch(e + 1);
    Epoch fin;
    if (end < config_.horizon)
      fin = finalized_at_slot_[static_cast<std::size_t>(end)];
    else if (end == config_.horizon)
      fin = omniscient_.finalized().epoch;
    else
      break;
    if (e - 1 > fin) delay = std::max(delay, e - 1 - fin);
  }
  record_.finalization_delay = delay;
  record_.aggregate_backlog.assign(backlog_at_slot_.begin(), backlog_at_slot_.end());
  record_.expired_target_votes = congestion_.expired_votes();
}

}  // namespace gasperlab
