// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <set>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gasperlab/types.hpp"

namespace gasperlab {

// The fork-choice-relevant vote in `hist` (kept votes in ascending slot
// order) at `current_slot`, judged under `view`'s block knowledge: the newest
// vote that is at least one slot old and whose head block is known with
// head.slot <= vote.slot. Shared by the materialized and layered views so
// both apply the identical eligibility rule.
template <typename V>
const Vote* pick_valid_vote(const V& view, const std::vector<Vote>& hist, Slot current_slot) {
  for (auto it = hist.rbegin(); it != hist.rend(); ++it) {
    if (it->slot >= current_slot) continue;
    const Block* head = view.block(it->head);
    if (head && head->slot <= it->slot) return &*it;
  }
  return nullptr;
}

// One participant's accumulated knowledge of blocks and votes.
//
// Invariants:
//  1. Genesis is present from construction and its checkpoint (genesis, 0) is
//     justified and finalized by definition.
//  2. Per validator, at most one vote is kept per slot (first arrival wins);
//     latest(v) is the kept vote with the highest slot.
//  3. justified()/finalized() only ever advance (epochs are monotone).
//  4. A checkpoint justifies only if its supermajority link has a justified
//     source from a strictly earlier epoch and the source block is an
//     ancestor of the target block.
class ChainView {
 public:
  explicit ChainView(const ProtocolParams& params);

  void add_block(const Block& b);
  void add_vote(const Vote& v);

  bool has_block(BlockId id) const { return blocks_.count(id) != 0; }
  const Block* block(BlockId id) const;
  const std::vector<BlockId>& children(BlockId id) const;
  const std::vector<BlockId>& block_ids() const { return ids_; }

  // Most recent vote observed from v, regardless of slot validity.
  const Vote* latest(ValidatorId v) const;

  // Kept votes of v in ascending slot order.
  const std::vector<Vote>& history(ValidatorId v) const { return history_.at(v); }

  // The fork-choice-relevant vote of each validator at `current_slot`: the
  // newest kept vote that is at least one slot old and whose head block is
  // known with head.slot <= vote.slot. Invoked in ascending validator order.
  template <typename Fn>
  void for_each_valid_latest(Slot current_slot, Fn&& fn) const {
    for (const auto& hist : history_) {
      if (const Vote* v = pick_valid(hist, current_slot)) fn(*v);
    }
  }

  Checkpoint justified() const { return highest_justified_; }
  Checkpoint finalized() const { return highest_finalized_; }
  bool is_justified(const Checkpoint& c) const;
  // The checkpoint justified at `epoch`, or nullptr if none is.
  const Checkpoint* justified_at(Epoch epoch) const;
  // Highest justified checkpoint whose epoch precedes `epoch`; the FFG source
  // an honest participant uses when voting in `epoch`.
  Checkpoint justified_before(Epoch epoch) const;

  // Re-evaluates supermajority links until no further checkpoint justifies
  // or finalizes. Called internally on every add; exposed for direct use.
  std::pair<Checkpoint, Checkpoint> process_ffg();

  // True if `ancestor` lies on the parent chain of `descendant` (inclusive).
  bool is_ancestor(BlockId ancestor, BlockId descendant) const;

  std::size_t link_tally(const Checkpoint& source, const Checkpoint& target) const;
  bool tally_contains(const Checkpoint& source, const Checkpoint& target, ValidatorId v) const;
  // Supermajority links that have not justified yet (source unjustified or a
  // checkpoint block still unknown); extra layered messages may complete them.
  const std::vector<std::pair<Checkpoint, Checkpoint>>& pending_links() const {
    return hot_links_;
  }
  const ProtocolParams& params() const { return params_; }

 private:
  using Link = std::pair<Checkpoint, Checkpoint>;

  const Vote* pick_valid(const std::vector<Vote>& hist, Slot current_slot) const;
  bool try_justify(const Link& link);

  ProtocolParams params_;
  std::unordered_map<BlockId, Block> blocks_;
  std::vector<BlockId> ids_;
  std::unordered_map<BlockId, std::vector<BlockId>> children_;
  // Per validator, kept votes in ascending slot order.
  std::vector<std::vector<Vote>> history_;
  std::map<Link, std::set<ValidatorId>> tallies_;
  // Links that reached the supermajority but may not have justified yet
  // (source not justified at the time, or a checkpoint block still unknown).
  std::vector<Link> hot_links_;
  std::map<Epoch, Checkpoint> justified_;
  std::map<Epoch, Checkpoint> finalized_;
  Checkpoint highest_justified_;
  Checkpoint highest_finalized_;
};

}  // namespace gasperlab
