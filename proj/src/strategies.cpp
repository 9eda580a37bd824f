// SPDX-License-Identifier: Apache-2.0

#include "gasperlab/strategies.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gasperlab/fork_choice.hpp"

namespace gasperlab {

std::pair<std::uint32_t, std::uint32_t> subtree_votes(const ChainView& view, Slot current_slot,
                                                      BlockId left, BlockId right) {
  std::uint32_t l = 0;
  std::uint32_t r = 0;
  view.for_each_valid_latest(current_slot, [&](const Vote& v) {
    if (view.is_ancestor(left, v.head)) {
      ++l;
    } else if (view.is_ancestor(right, v.head)) {
      ++r;
    }
  });
  return {l, r};
}

void StrategyConfig::validate() const {
  if (kind == StrategyKind::honest) return;
  if (kind != StrategyKind::balancing && k == 0)
    throw std::invalid_argument("strategy: k must be at least 1");
  if (t_delay_ms < 0) throw std::invalid_argument("strategy: t_delay_ms must be nonnegative");
  if (kind == StrategyKind::balancing && attack_epoch == 0)
    throw std::invalid_argument("strategy: balancing contests an epoch boundary, needs epoch >= 1");
  if (kind != StrategyKind::balancing && attack_slot == 0)
    throw std::invalid_argument("strategy: attack_slot must be at least 1");
}

namespace {

constexpr std::uint64_t kReleaseTag = 1;
constexpr std::uint64_t kSwayTagBase = 0x1000;

// Attestation for an adversarially chosen head. The FFG fields follow the
// honest rule evaluated on `view` (which may include withheld blocks):
// sources stay at the highest justified checkpoint and targets carry the
// epoch of the vote's slot, so no combination of releases can form a
// surround link.
template <typename V>
Vote adversarial_vote(const V& view, const ProtocolParams& p, ValidatorId v, Slot slot,
                      BlockId head) {
  Epoch epoch = p.epoch_of_slot(slot);
  return Vote{v, slot, head, view.justified_before(epoch),
              Checkpoint{epoch_boundary_block(view, head, epoch), epoch}};
}

// Withholds the attack-slot block together with the attack committees' votes
// and releases the bundle once the proposal of slot attack_slot + k is seen,
// so the committee of that slot adopts the private branch and orphans the k
// honest blocks published since.
class RefinedReorgStrategy final : public Strategy {
 public:
  explicit RefinedReorgStrategy(const StrategyConfig& cfg) : cfg_(cfg) {}

  void on_setup(Simulation& sim) override {
    n_adv_ = sim.config().n_adversarial;
    const ProtocolParams& p = sim.params();
    if (cfg_.attack_slot + cfg_.k >= sim.config().horizon)
      throw std::invalid_argument("refined reorg: horizon must exceed attack_slot + k");
    if (n_adv_ == 0) return;
    if (cfg_.pin_roles)
      sim.roles(p.epoch_of_slot(cfg_.attack_slot)).pin_proposer(cfg_.attack_slot, 0);
    if (!cfg_.pin_committees) return;
    sim.roles(p.epoch_of_slot(cfg_.attack_slot)).pin_committee_member(cfg_.attack_slot, 0);
    // ceil(W/2) members per middle committee leave floor(W/2) honest votes
    // there, so the released branch leads the public one by exactly one vote.
    ValidatorId next = 1;
    std::uint32_t per_slot = (p.committee_size + 1) / 2;
    for (std::uint32_t j = 1; j < cfg_.k; ++j) {
      Slot s = cfg_.attack_slot + j;
      for (std::uint32_t i = 0; i < per_slot && next < n_adv_; ++i)
        sim.roles(p.epoch_of_slot(s)).pin_committee_member(s, next++);
    }
  }

  bool controls(ValidatorId v, Slot s) const override {
    return v < n_adv_ && s >= cfg_.attack_slot && s < cfg_.attack_slot + cfg_.k;
  }

  void on_slot_start(Simulation& sim, Slot s) override {
    ValidatorId proposer = sim.roles(sim.params().epoch_of_slot(s)).proposer_of(s);
    if (!sim.is_adversarial(proposer)) return;
    if (s == cfg_.attack_slot) {
      LayeredView view = sim.adversary_view({}, {});
      private_block_ = Block{sim.next_block_id(), ghost_head(view, s), s, proposer, true};
    } else {
      sim.propose_honest(s, proposer);
    }
  }

  void on_attest_due(Simulation& sim, Slot s) override {
    if (!private_block_ || released_) return;
    if (s < cfg_.attack_slot || s >= cfg_.attack_slot + cfg_.k) return;
    const auto& committee = sim.roles(sim.params().epoch_of_slot(s)).committee_of(s);
    LayeredView view = sim.adversary_view({*private_block_}, withheld_);
    for (ValidatorId v : committee) {
      if (!sim.is_adversarial(v)) continue;
      Vote vote = adversarial_vote(view, sim.params(), v, s, private_block_->id);
      withheld_.push_back(vote);
      sim.register_private_vote(vote);
    }
  }

  void on_observed(Simulation& sim, const SimMessage& msg) override {
    if (released_ || !private_block_ || !msg.block || msg.block->adversarial) return;
    if (msg.block->slot < cfg_.attack_slot + cfg_.k) return;
    released_ = true;
    // With no banked committee votes the released block enters a weight tie
    // it cannot win once the next committee votes, so it stays withheld.
    if (withheld_.empty()) return;
    sim.broadcast_block(*private_block_, private_block_->proposer);
    for (const Vote& v : withheld_) sim.broadcast_vote(v, v.validator);
  }

  void on_finish(Simulation& sim) override {
    RunRecord& rec = sim.record();
    if (!private_block_ || !released_ || withheld_.empty()) return;
    const ChainView& omni = sim.omniscient();
    BlockId head = ghost_head(omni, rec.horizon);
    if (!omni.is_ancestor(private_block_->id, head)) return;
    std::uint32_t orphaned = 0;
    bool honest_on_head = false;
    for (const Block& b : sim.blocks_broadcast()) {
      if (b.adversarial || b.slot <= cfg_.attack_slot || b.slot > cfg_.attack_slot + cfg_.k)
        continue;
      if (omni.is_ancestor(b.id, head)) {
        honest_on_head = true;
      } else {
        ++orphaned;
      }
    }
    rec.reorg_length_achieved = orphaned;
    rec.success = !honest_on_head && orphaned == cfg_.k;
  }

 private:
  StrategyConfig cfg_;
  std::uint32_t n_adv_ = 0;
  std::optional<Block> private_block_;
  std::vector<Vote> withheld_;
  bool released_ = false;
};

// Keeps two conflicting epoch-boundary blocks in an exact latest-vote tie.
// One banked vote for the tiebreak-disfavored branch surfaces t_delay_ms
// before every committee's voting instant so propagation spread splits the
// honest vote; at the end of each slot the residual imbalance is cancelled
// with further banked votes. A validator votes at most once per target epoch
// (switching branches only across epochs), which keeps every cast vote
// unslashable.
class BalancingStrategy final : public Strategy {
 public:
  explicit BalancingStrategy(const StrategyConfig& cfg) : cfg_(cfg) {}

  void on_setup(Simulation& sim) override {
    n_adv_ = sim.config().n_adversarial;
    first_ = sim.params().first_slot_of_epoch(cfg_.attack_epoch);
    if (first_ + 2 >= sim.config().horizon)
      throw std::invalid_argument("balancing: horizon does not reach past the attack epoch");
    last_side_.assign(n_adv_, 0);
    last_slot_.assign(n_adv_, 0);
    if (cfg_.pin_roles && n_adv_ >= 2) {
      sim.roles(cfg_.attack_epoch).pin_proposer(first_, 0);
      sim.roles(cfg_.attack_epoch).pin_proposer(first_ + 1, 1);
    }
  }

  bool controls(ValidatorId v, Slot s) const override { return v < n_adv_ && s >= first_; }

  void on_slot_start(Simulation& sim, Slot s) override {
    ValidatorId proposer = sim.roles(sim.params().epoch_of_slot(s)).proposer_of(s);
    bool adv = sim.is_adversarial(proposer);
    if (s == first_ && adv) {
      LayeredView view = sim.adversary_view({}, {});
      left_ = Block{sim.next_block_id(), ghost_head(view, s), s, proposer, true};
    } else if (s == first_ + 1 && adv && left_) {
      // Same parent as the withheld left block: two conflicting branch roots.
      right_ = Block{sim.next_block_id(), left_->parent, s, proposer, true};
      release_at_ = sim.params().slot_start_ms(s) + (3 * sim.params().slot_duration_ms) / 4;
      sim.schedule_timer(release_at_, kReleaseTag);
    } else if (adv) {
      sim.propose_honest(s, proposer);
    }
    if (active() && s >= first_ + 2) {
      TimeMs due = sim.attest_time(s) - cfg_.t_delay_ms;
      if (due < sim.now()) due = sim.now();
      sim.schedule_timer(due, kSwayTagBase + s);
    }
  }

  void on_timer(Simulation& sim, std::uint64_t tag) override {
    if (tag == kReleaseTag) {
      if (left_ && right_) {
        sim.broadcast_block(*left_, left_->proposer);
        sim.broadcast_block(*right_, right_->proposer);
      }
      return;
    }
    if (!active() || sim.now() < release_at_) return;
    Slot s = static_cast<Slot>(tag - kSwayTagBase);
    spend(sim, Side::right, s - 1, 1, /*exact=*/false);
  }

  void on_slot_tally(Simulation& sim, Slot i) override {
    if (!active() || i < first_ + 2) return;
    record_split(sim, i);
    auto [a, b] = subtree_votes(sim.omniscient(), i + 1, left_->id, right_->id);
    std::int64_t d = static_cast<std::int64_t>(a) - static_cast<std::int64_t>(b);
    if (d == 0) return;
    Side lighter = d > 0 ? Side::right : Side::left;
    std::uint64_t need = static_cast<std::uint64_t>(d > 0 ? d : -d);
    if (!spend(sim, lighter, i, need, /*exact=*/true)) {
      failed_ = true;
      fail_slot_ = i;
    }
  }

  void on_finish(Simulation& sim) override {
    RunRecord& rec = sim.record();
    if (!left_ || !right_) return;
    Slot end = failed_ ? fail_slot_ : rec.horizon;
    rec.stall_duration = end - first_;
    rec.success = !failed_;
    rec.justifications_during_stall =
        static_cast<std::uint32_t>(sim.justified_count_at(end) - sim.justified_count_at(first_));
  }

 private:
  enum class Side { left, right };

  struct Candidate {
    ValidatorId v = 0;
    Epoch epoch = 0;
    Slot slot = 0;       // the slot (hence target epoch) of the vote to cast
    bool left_only = false;  // member of the left root's slot, head-locked to it
  };

  bool active() const { return left_ && right_ && !failed_; }

  // Banked votes castable for `side` with vote.slot <= deadline. A candidate
  // is one (validator, epoch) committee seat not yet used; it shifts the
  // balance by one if the validator has no live branch vote and by two if its
  // newest vote sits on the other branch (the older vote stops counting).
  // Each validator is offered through its earliest unused epoch only, so the
  // displacement accounting stays exact.
  void collect(Simulation& sim, Side side, Slot deadline, std::vector<Candidate>& singles,
               std::vector<Candidate>& flips) {
    int side_tag = side == Side::left ? 1 : 2;
    Epoch hi = sim.params().epoch_of_slot(deadline);
    std::set<ValidatorId> offered;
    for (Epoch e = cfg_.attack_epoch; e <= hi; ++e) {
      const RoleSchedule& roles = sim.roles(e);
      for (ValidatorId v = 0; v < n_adv_; ++v) {
        Slot m = roles.committee_slot_of(v);
        if (m > deadline || offered.count(v)) continue;
        // A vote cast from the left root's slot cannot name the younger
        // right root as head.
        if (side == Side::right && m < first_ + 1) continue;
        if (spent_.count({v, e})) continue;
        if (last_side_[v] == 0) {
          offered.insert(v);
          singles.push_back({v, e, m, m == first_});
        } else if (m > last_slot_[v] && last_side_[v] != side_tag) {
          offered.insert(v);
          flips.push_back({v, e, m, false});
        }
      }
    }
    // Seats locked to the left branch are useless for later right-side
    // spends, so consume them first.
    if (side == Side::left)
      std::stable_partition(singles.begin(), singles.end(),
                            [](const Candidate& c) { return c.left_only; });
  }

  bool spend(Simulation& sim, Side side, Slot deadline, std::uint64_t need, bool exact) {
    std::vector<Candidate> singles;
    std::vector<Candidate> flips;
    collect(sim, side, deadline, singles, flips);
    if (!exact) {
      if (!singles.empty()) {
        cast(sim, singles.front(), side);
      } else if (!flips.empty()) {
        cast(sim, flips.front(), side);
      }
      return true;
    }
    std::uint64_t n_flips = std::min<std::uint64_t>(flips.size(), need / 2);
    std::uint64_t n_singles = need - 2 * n_flips;
    if (n_singles > singles.size()) return false;
    for (std::uint64_t i = 0; i < n_flips; ++i) cast(sim, flips[i], side);
    for (std::uint64_t i = 0; i < n_singles; ++i) cast(sim, singles[i], side);
    return true;
  }

  void cast(Simulation& sim, const Candidate& c, Side side) {
    BlockId head = side == Side::left ? left_->id : right_->id;
    Vote vote = adversarial_vote(sim.omniscient(), sim.params(), c.v, c.slot, head);
    sim.broadcast_vote(vote, c.v);
    spent_.insert({c.v, c.epoch});
    last_side_[c.v] = side == Side::left ? 1 : 2;
    last_slot_[c.v] = c.slot;
  }

  // Raw split of the slot's honest committee across the two branches.
  void record_split(Simulation& sim, Slot i) {
    const ChainView& omni = sim.omniscient();
    const auto& committee = sim.roles(sim.params().epoch_of_slot(i)).committee_of(i);
    VoteSplit split{i, 0, 0};
    for (ValidatorId v : committee) {
      if (sim.is_adversarial(v)) continue;
      const auto& hist = omni.history(v);
      for (auto it = hist.rbegin(); it != hist.rend() && it->slot >= i; ++it) {
        if (it->slot != i) continue;
        if (omni.is_ancestor(left_->id, it->head)) {
          ++split.left;
        } else if (omni.is_ancestor(right_->id, it->head)) {
          ++split.right;
        }
        break;
      }
    }
    sim.record().vote_splits.push_back(split);
  }

  StrategyConfig cfg_;
  std::uint32_t n_adv_ = 0;
  Slot first_ = 0;
  std::optional<Block> left_;
  std::optional<Block> right_;
  TimeMs release_at_ = 0;
  bool failed_ = false;
  Slot fail_slot_ = 0;
  std::set<std::pair<ValidatorId, Epoch>> spent_;
  std::vector<int> last_side_;  // 0 none, 1 left, 2 right
  std::vector<Slot> last_slot_;
};

// Long-range variant of the reorg: the private branch shadows the public one
// for k slots, kept trailing by exactly one latest vote so every honest
// proposer keeps extending the doomed public chain. Each middle committee is
// split by surfacing a packet of previously withheld messages mid-slot
// (exactly, via per-recipient arrival control, or probabilistically via
// broadcast timing), and residual drift is cancelled with banked votes. The
// final two withheld votes flip the head after the last targeted proposal.
class CombinedStrategy final : public Strategy {
 public:
  explicit CombinedStrategy(const StrategyConfig& cfg) : cfg_(cfg) {}

  void on_setup(Simulation& sim) override {
    n_adv_ = sim.config().n_adversarial;
    n1_ = cfg_.attack_slot;
    const ProtocolParams& p = sim.params();
    if (n1_ + cfg_.k >= sim.config().horizon)
      throw std::invalid_argument("combined reorg: horizon must exceed attack_slot + k");
    if (n_adv_ == 0) return;
    if (cfg_.pin_roles) sim.roles(p.epoch_of_slot(n1_)).pin_proposer(n1_, 0);
    if (cfg_.pin_committees) {
      sim.roles(p.epoch_of_slot(n1_)).pin_committee_member(n1_, 0);
      ValidatorId next = 1;
      for (std::uint32_t j = 1; j < cfg_.k; ++j) {
        Slot s = n1_ + j;
        for (int i = 0; i < 2 && next < n_adv_; ++i)
          sim.roles(p.epoch_of_slot(s)).pin_committee_member(s, next++);
      }
    }
    if (cfg_.pin_roles && n_adv_ < p.n_validators) {
      // The shadowed public chain needs honest proposals throughout.
      for (Slot s = n1_ + 1; s <= n1_ + cfg_.k + 1 && s < sim.config().horizon; ++s)
        sim.roles(p.epoch_of_slot(s)).pin_proposer(s, n_adv_);
    }
  }

  bool controls(ValidatorId v, Slot s) const override {
    return v < n_adv_ && s >= n1_ && s < n1_ + cfg_.k;
  }

  void on_slot_start(Simulation& sim, Slot s) override {
    ValidatorId proposer = sim.roles(sim.params().epoch_of_slot(s)).proposer_of(s);
    if (sim.is_adversarial(proposer)) {
      if (s == n1_) {
        LayeredView view = sim.adversary_view({}, {});
        private_ = Block{sim.next_block_id(), ghost_head(view, s), s, proposer, true};
      } else {
        sim.propose_honest(s, proposer);
      }
    }
    if (!active() || s <= n1_ || s >= n1_ + cfg_.k) return;
    if (cfg_.targeted_mode) {
      send_targeted_packet(sim, s);
    } else {
      TimeMs due = sim.attest_time(s) - cfg_.t_delay_ms;
      if (due < sim.now()) due = sim.now();
      sim.schedule_timer(due, kSwayTagBase + s);
    }
  }

  void on_timer(Simulation& sim, std::uint64_t tag) override {
    if (!active()) return;
    Slot s = static_cast<Slot>(tag - kSwayTagBase);
    auto [block, votes] = take_packet(s);
    if (block) {
      sim.broadcast_block(*block, block->proposer);
      a_public_ = true;
    }
    for (const Vote& v : votes) sim.broadcast_vote(v, v.validator);
  }

  void on_attest_due(Simulation& sim, Slot s) override {
    if (!private_ || s < n1_ || s >= n1_ + cfg_.k) return;
    // The first adversarial seat of the attack slot and the first two of
    // each middle committee vote for the private branch; the votes stay
    // withheld until a packet or the final release surfaces them.
    std::size_t cap = s == n1_ ? 1 : 2;
    const auto& committee = sim.roles(sim.params().epoch_of_slot(s)).committee_of(s);
    LayeredView view = sim.adversary_view({*private_}, private_votes_);
    for (ValidatorId v : committee) {
      if (!sim.is_adversarial(v)) continue;
      if (designated_[s].size() >= cap) break;
      Vote vote = adversarial_vote(view, sim.params(), v, s, private_->id);
      designated_[s].push_back(vote);
      private_votes_.push_back(vote);
      used_.insert({v, sim.params().epoch_of_slot(s)});
      sim.register_private_vote(vote);
    }
  }

  void on_slot_tally(Simulation& sim, Slot i) override {
    if (!active() || i <= n1_ || i >= n1_ + cfg_.k || !honest_root_) return;
    auto [a, b] = subtree_votes(sim.omniscient(), i + 1, private_->id, *honest_root_);
    std::int64_t r = static_cast<std::int64_t>(b) - 1 - static_cast<std::int64_t>(a);
    if (r == 0) return;
    if (r < 0) {  // the private branch pulled ahead publicly: cover blown
      fail(i);
      return;
    }
    if (cfg_.rebalance_budget_per_slot != 0 &&
        r > static_cast<std::int64_t>(cfg_.rebalance_budget_per_slot)) {
      fail(i);
      return;
    }
    std::int64_t short_by = r - cast_pool(sim, static_cast<std::uint64_t>(r), i);
    if (short_by > 0) fail(i);
  }

  void on_observed(Simulation& sim, const SimMessage& msg) override {
    if (!private_ || !msg.block || msg.block->adversarial) return;
    if (!honest_root_ && msg.block->slot >= n1_ + 1) honest_root_ = msg.block->id;
    if (released_ || failed_ || msg.block->slot < n1_ + cfg_.k) return;
    released_ = true;
    if (!a_public_) {
      sim.broadcast_block(*private_, private_->proposer);
      a_public_ = true;
    }
    Slot last_withheld = cfg_.k >= 2 ? n1_ + cfg_.k - 1 : n1_;
    auto [block, votes] = take_packet_key(last_withheld);
    (void)block;
    for (const Vote& v : votes) sim.broadcast_vote(v, v.validator);
  }

  void on_finish(Simulation& sim) override {
    RunRecord& rec = sim.record();
    if (!private_) return;
    const ChainView& omni = sim.omniscient();
    BlockId head = ghost_head(omni, rec.horizon);
    bool on_chain = a_public_ && omni.is_ancestor(private_->id, head);
    std::uint32_t orphaned = 0;
    bool honest_on_head = false;
    for (const Block& b : sim.blocks_broadcast()) {
      if (b.adversarial || b.slot <= n1_ || b.slot > n1_ + cfg_.k) continue;
      if (omni.is_ancestor(b.id, head)) {
        honest_on_head = true;
      } else {
        ++orphaned;
      }
    }
    if (on_chain) {
      rec.reorg_length_achieved = orphaned;
      rec.success = !honest_on_head && orphaned == cfg_.k;
    }
    rec.stall_duration = failed_ ? fail_slot_ - n1_ : (rec.success ? cfg_.k + 1 : 0);
  }

 private:
  bool active() const { return private_ && !failed_ && !released_; }

  void fail(Slot at) {
    failed_ = true;
    fail_slot_ = at;
  }

  // Packet surfaced at middle slot s: the private block plus its proposer's
  // vote for the first middle slot, afterwards the two votes withheld by the
  // previous middle committee. Each packet is handed out once.
  std::pair<std::optional<Block>, std::vector<Vote>> take_packet(Slot s) {
    if (s == n1_ + 1) {
      auto [block, votes] = take_packet_key(n1_);
      (void)block;
      return {a_public_ ? std::nullopt : private_, votes};
    }
    return take_packet_key(s - 1);
  }

  std::pair<std::optional<Block>, std::vector<Vote>> take_packet_key(Slot key) {
    auto it = designated_.find(key);
    if (it == designated_.end()) return {std::nullopt, {}};
    std::vector<Vote> votes = std::move(it->second);
    designated_.erase(it);
    return {std::nullopt, votes};
  }

  // Spends up to `want` banked committee seats of slots [n1_, deadline] on
  // votes for the private branch; returns how many were cast.
  std::uint64_t cast_pool(Simulation& sim, std::uint64_t want, Slot deadline) {
    std::uint64_t done = 0;
    const ProtocolParams& p = sim.params();
    LayeredView view = sim.adversary_view({*private_}, {});
    for (Epoch e = p.epoch_of_slot(n1_); e <= p.epoch_of_slot(deadline) && done < want; ++e) {
      const RoleSchedule& roles = sim.roles(e);
      for (ValidatorId v = 0; v < n_adv_ && done < want; ++v) {
        Slot m = roles.committee_slot_of(v);
        if (m < n1_ || m > deadline || used_.count({v, e})) continue;
        Vote vote = adversarial_vote(view, p, v, m, private_->id);
        sim.broadcast_vote(vote, v);
        used_.insert({v, e});
        ++done;
      }
    }
    return done;
  }

  // Exact committee split via per-recipient arrival control: x honest seers
  // receive the packet at the voting instant, everyone else a quarter slot
  // later, leaving the private branch trailing by exactly one vote after the
  // slot's votes and the packet settle.
  void send_targeted_packet(Simulation& sim, Slot s) {
    auto [block, votes] = take_packet(s);
    if (!block && votes.empty()) return;
    const ChainView& omni = sim.omniscient();
    std::int64_t a = 0;
    std::int64_t b = 0;
    if (honest_root_) {
      auto [ca, cb] = subtree_votes(omni, s, private_->id, *honest_root_);
      a = ca;
      b = cb;
    }
    const auto& committee = sim.roles(sim.params().epoch_of_slot(s)).committee_of(s);
    std::int64_t h = 0;
    for (ValidatorId v : committee)
      if (!sim.is_adversarial(v)) ++h;
    std::int64_t numer = b - a + h - static_cast<std::int64_t>(votes.size()) - 1;
    if (numer < 0 || numer % 2 != 0 || numer / 2 > h) {
      fail(s);
      return;
    }
    std::int64_t x = numer / 2;
    TimeMs at_vote = sim.attest_time(s);
    TimeMs late = at_vote + sim.params().slot_duration_ms / 4;
    std::map<ValidatorId, TimeMs> arrival;
    std::int64_t seers = 0;
    for (ValidatorId v : committee) {
      bool seer = !sim.is_adversarial(v) && seers < x;
      if (seer) ++seers;
      arrival[v] = seer ? at_vote : late;
    }
    if (block) {
      sim.broadcast_block(*block, block->proposer, arrival);
      a_public_ = true;
    }
    for (const Vote& v : votes) sim.broadcast_vote(v, v.validator, arrival);
  }

  StrategyConfig cfg_;
  std::uint32_t n_adv_ = 0;
  Slot n1_ = 0;
  std::optional<Block> private_;
  std::optional<BlockId> honest_root_;
  std::map<Slot, std::vector<Vote>> designated_;
  std::vector<Vote> private_votes_;
  std::set<std::pair<ValidatorId, Epoch>> used_;
  bool a_public_ = false;
  bool released_ = false;
  bool failed_ = false;
  Slot fail_slot_ = 0;
};

}  // namespace

std::shared_ptr<Strategy> make_strategy(const StrategyConfig& cfg) {
  cfg.validate();
  switch (cfg.kind) {
    case StrategyKind::honest:
      return nullptr;
    case StrategyKind::refined_reorg:
      return std::make_shared<RefinedReorgStrategy>(cfg);
    case StrategyKind::balancing:
      return std::make_shared<BalancingStrategy>(cfg);
    case StrategyKind::combined:
      return std::make_shared<CombinedStrategy>(cfg);
  }
  throw std::invalid_argument("strategy: unknown kind");
}

}  // namespace gasperlab
