// SPDX-License-Identifier: Apache-2.0
#include "gasperlab/participant_view.hpp"

#include <algorithm>
#include <stdexcept>

namespace gasperlab {

LayeredView::LayeredView(const ChainView& base, std::vector<Block> blocks,
                         std::vector<Vote> votes)
    : base_(&base) {
  for (const Block& b : blocks) {
    if (!b.parent) throw std::invalid_argument("LayeredView: only genesis lacks a parent");
    if (base_->has_block(b.id) || d_blocks_.count(b.id)) continue;
    d_blocks_.emplace(b.id, b);
    auto& sibs = d_children_[*b.parent];
    sibs.insert(std::lower_bound(sibs.begin(), sibs.end(), b.id), b.id);
  }

  std::vector<Vote> accepted;
  for (const Vote& v : votes) {
    if (v.validator >= params().n_validators)
      throw std::invalid_argument("LayeredView: validator id out of range");
    auto [it, fresh] = merged_.try_emplace(v.validator, base_->history(v.validator));
    auto& hist = it->second;
    auto pos = std::lower_bound(hist.begin(), hist.end(), v.slot,
                                [](const Vote& a, Slot s) { return a.slot < s; });
    if (pos != hist.end() && pos->slot == v.slot) continue;  // first arrival wins
    hist.insert(pos, v);
    accepted.push_back(v);
  }

  run_ffg_overlay(accepted);
  justified_ = base_->justified();
  for (const Checkpoint& c : extra_justified_)
    if (c.epoch > justified_.epoch) justified_ = c;
}

const Block* LayeredView::block(BlockId id) const {
  auto it = d_blocks_.find(id);
  if (it != d_blocks_.end()) return &it->second;
  return base_->block(id);
}

std::vector<BlockId> LayeredView::children(BlockId id) const {
  std::vector<BlockId> out = base_->children(id);
  auto it = d_children_.find(id);
  if (it != d_children_.end()) {
    out.insert(out.end(), it->second.begin(), it->second.end());
    std::sort(out.begin(), out.end());
  }
  return out;
}

std::vector<BlockId> LayeredView::block_ids() const {
  std::vector<BlockId> out = base_->block_ids();
  for (const auto& [id, b] : d_blocks_) out.push_back(id);
  return out;
}

Checkpoint LayeredView::justified_before(Epoch epoch) const {
  Checkpoint best = base_->justified_before(epoch);
  for (auto it = extra_justified_.rbegin(); it != extra_justified_.rend(); ++it) {
    if (it->epoch < epoch) {
      if (it->epoch > best.epoch) best = *it;
      break;
    }
  }
  return best;
}

bool LayeredView::is_justified(const Checkpoint& c) const {
  if (base_->is_justified(c)) return true;
  return std::find(extra_justified_.begin(), extra_justified_.end(), c) !=
         extra_justified_.end();
}

bool LayeredView::is_ancestor(BlockId ancestor, BlockId descendant) const {
  const Block* a = block(ancestor);
  const Block* d = block(descendant);
  if (!a || !d) return false;
  // Slots are nonincreasing towards the root but not strictly so (genesis and
  // the slot-0 proposal share a slot), hence >= rather than >.
  while (d && d->id != ancestor && d->slot >= a->slot)
    d = d->parent ? block(*d->parent) : nullptr;
  return d && d->id == ancestor;
}

bool LayeredView::epoch_claimed(Epoch e) const {
  if (base_->justified_at(e)) return true;
  for (const Checkpoint& c : extra_justified_)
    if (c.epoch == e) return true;
  return false;
}

void LayeredView::run_ffg_overlay(const std::vector<Vote>& accepted) {
  using Link = std::pair<Checkpoint, Checkpoint>;
  // Distinct new voters per link, beyond those already tallied in the base.
  std::map<Link, std::set<ValidatorId>> extra;
  for (const Vote& v : accepted) {
    if (v.source.epoch >= v.target.epoch) continue;
    if (base_->tally_contains(v.source, v.target, v.validator)) continue;
    extra[{v.source, v.target}].insert(v.validator);
  }

  std::vector<Link> candidates;
  const std::size_t threshold = params().supermajority();
  for (const auto& [link, who] : extra)
    if (base_->link_tally(link.first, link.second) + who.size() >= threshold)
      candidates.push_back(link);
  // Base links already at supermajority that may complete with layered
  // blocks or a newly justified source.
  for (const Link& link : base_->pending_links()) candidates.push_back(link);

  bool again = true;
  while (again) {
    again = false;
    for (const auto& [source, target] : candidates) {
      if (epoch_claimed(target.epoch)) continue;
      if (!is_justified(source)) continue;
      if (!has_block(source.block) || !has_block(target.block)) continue;
      if (!is_ancestor(source.block, target.block)) continue;
      extra_justified_.push_back(target);
      again = true;
    }
  }
  std::sort(extra_justified_.begin(), extra_justified_.end(),
            [](const Checkpoint& a, const Checkpoint& b) { return a.epoch < b.epoch; });
}

}  // namespace gasperlab
