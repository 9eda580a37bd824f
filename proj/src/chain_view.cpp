// SPDX-License-Identifier: Apache-2.0
#include "gasperlab/chain_view.hpp"

#include <algorithm>

namespace gasperlab {

ChainView::ChainView(const ProtocolParams& params) : params_(params) {
  params_.validate();
  Block genesis;
  genesis.id = kGenesisId;
  genesis.parent.reset();
  genesis.slot = 0;
  blocks_.emplace(genesis.id, genesis);
  ids_.push_back(genesis.id);
  history_.resize(params_.n_validators);
  Checkpoint root{kGenesisId, 0};
  justified_[0] = root;
  finalized_[0] = root;
  highest_justified_ = root;
  highest_finalized_ = root;
}

const Block* ChainView::block(BlockId id) const {
  auto it = blocks_.find(id);
  return it == blocks_.end() ? nullptr : &it->second;
}

const std::vector<BlockId>& ChainView::children(BlockId id) const {
  static const std::vector<BlockId> kEmpty;
  auto it = children_.find(id);
  return it == children_.end() ? kEmpty : it->second;
}

void ChainView::add_block(const Block& b) {
  if (blocks_.count(b.id)) return;
  if (!b.parent) throw std::invalid_argument("add_block: only genesis lacks a parent");
  blocks_.emplace(b.id, b);
  ids_.push_back(b.id);
  auto& sibs = children_[*b.parent];
  sibs.insert(std::lower_bound(sibs.begin(), sibs.end(), b.id), b.id);
  process_ffg();
}

void ChainView::add_vote(const Vote& v) {
  if (v.validator >= history_.size())
    throw std::invalid_argument("add_vote: validator id out of range");
  auto& hist = history_[v.validator];
  auto pos = std::lower_bound(hist.begin(), hist.end(), v.slot,
                              [](const Vote& a, Slot s) { return a.slot < s; });
  if (pos != hist.end() && pos->slot == v.slot) return;  // first arrival wins
  hist.insert(pos, v);
  if (v.source.epoch < v.target.epoch) {
    auto& who = tallies_[{v.source, v.target}];
    if (who.insert(v.validator).second && who.size() == params_.supermajority())
      hot_links_.push_back({v.source, v.target});
  }
  process_ffg();
}

const Vote* ChainView::latest(ValidatorId v) const {
  const auto& hist = history_[v];
  return hist.empty() ? nullptr : &hist.back();
}

const Vote* ChainView::pick_valid(const std::vector<Vote>& hist, Slot current_slot) const {
  return pick_valid_vote(*this, hist, current_slot);
}

bool ChainView::is_justified(const Checkpoint& c) const {
  auto it = justified_.find(c.epoch);
  return it != justified_.end() && it->second == c;
}

const Checkpoint* ChainView::justified_at(Epoch epoch) const {
  auto it = justified_.find(epoch);
  return it == justified_.end() ? nullptr : &it->second;
}

Checkpoint ChainView::justified_before(Epoch epoch) const {
  for (auto it = justified_.rbegin(); it != justified_.rend(); ++it)
    if (it->first < epoch) return it->second;
  return Checkpoint{kGenesisId, 0};
}

bool ChainView::is_ancestor(BlockId ancestor, BlockId descendant) const {
  const Block* a = block(ancestor);
  const Block* d = block(descendant);
  if (!a || !d) return false;
  // Slots are nonincreasing towards the root but not strictly so (genesis and
  // the slot-0 proposal share a slot), hence >= rather than >.
  while (d->id != ancestor && d->slot >= a->slot && d->parent) d = block(*d->parent);
  return d && d->id == ancestor;
}

std::size_t ChainView::link_tally(const Checkpoint& source, const Checkpoint& target) const {
  auto it = tallies_.find({source, target});
  return it == tallies_.end() ? 0 : it->second.size();
}

bool ChainView::tally_contains(const Checkpoint& source, const Checkpoint& target,
                               ValidatorId v) const {
  auto it = tallies_.find({source, target});
  return it != tallies_.end() && it->second.count(v) != 0;
}

bool ChainView::try_justify(const Link& link) {
  const auto& [source, target] = link;
  if (!is_justified(source)) return false;
  if (!has_block(source.block) || !has_block(target.block)) return false;
  if (!is_ancestor(source.block, target.block)) return false;
  bool advanced = false;
  if (!justified_.count(target.epoch)) {
    justified_[target.epoch] = target;
    if (target.epoch > highest_justified_.epoch) highest_justified_ = target;
    advanced = true;
  }
  if (justified_.at(target.epoch) == target &&
      target.epoch == source.epoch + 1 && !finalized_.count(source.epoch)) {
    finalized_[source.epoch] = source;
    if (source.epoch > highest_finalized_.epoch) highest_finalized_ = source;
    advanced = true;
  }
  return advanced;
}

std::pair<Checkpoint, Checkpoint> ChainView::process_ffg() {
  bool again = true;
  while (again) {
    again = false;
    for (std::size_t i = 0; i < hot_links_.size(); ++i)
      if (try_justify(hot_links_[i])) again = true;
  }
  return {highest_justified_, highest_finalized_};
}

}  // namespace gasperlab
