// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <set>
#include <utility>
#include <vector>

#include "gasperlab/chain_view.hpp"

namespace gasperlab {

// A participant's momentary knowledge: the shared settled ChainView plus the
// broadcast messages that have reached this participant but not yet settled
// globally. Blocks and votes are layered over the base without copying it;
// FFG justification is re-evaluated over the combined message set once, at
// construction.
//
// Semantics match feeding the base messages and then the layer messages into
// one materialized ChainView (first arrival wins per (validator, slot), so a
// layered vote never displaces a settled one).
class LayeredView {
 public:
  LayeredView(const ChainView& base, std::vector<Block> blocks, std::vector<Vote> votes);

  bool has_block(BlockId id) const {
    return d_blocks_.count(id) != 0 || base_->has_block(id);
  }
  const Block* block(BlockId id) const;
  std::vector<BlockId> children(BlockId id) const;
  std::vector<BlockId> block_ids() const;
  const ProtocolParams& params() const { return base_->params(); }

  template <typename Fn>
  void for_each_valid_latest(Slot current_slot, Fn&& fn) const {
    const ValidatorId n = params().n_validators;
    for (ValidatorId v = 0; v < n; ++v) {
      auto it = merged_.find(v);
      const std::vector<Vote>& hist = it == merged_.end() ? base_->history(v) : it->second;
      if (const Vote* vote = pick_valid_vote(*this, hist, current_slot)) fn(*vote);
    }
  }

  Checkpoint justified() const { return justified_; }
  Checkpoint justified_before(Epoch epoch) const;
  bool is_justified(const Checkpoint& c) const;
  bool is_ancestor(BlockId ancestor, BlockId descendant) const;

 private:
  void run_ffg_overlay(const std::vector<Vote>& accepted);
  bool epoch_claimed(Epoch e) const;

  const ChainView* base_;
  std::map<BlockId, Block> d_blocks_;
  std::map<BlockId, std::vector<BlockId>> d_children_;
  // Validators whose history differs from base: base history + layer votes.
  std::map<ValidatorId, std::vector<Vote>> merged_;
  std::vector<Checkpoint> extra_justified_;  // ascending epoch
  Checkpoint justified_;                     // highest epoch overall
};

}  // namespace gasperlab
