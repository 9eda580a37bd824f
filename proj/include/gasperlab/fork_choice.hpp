// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <ranges>
#include <unordered_map>
#include <vector>

#include "gasperlab/chain_view.hpp"
#include "gasperlab/types.hpp"

namespace gasperlab {

// Anything that can answer fork-choice queries: the materialized ChainView or
// the layered per-participant view used inside the simulation.
template <typename V>
concept ViewLike = requires(const V& v, BlockId id, Slot s) {
  { v.has_block(id) } -> std::convertible_to<bool>;
  { v.block(id) } -> std::convertible_to<const Block*>;
  { v.children(id) } -> std::ranges::input_range;
  { v.block_ids() } -> std::ranges::input_range;
  { v.justified() } -> std::convertible_to<Checkpoint>;
  { v.params() } -> std::convertible_to<const ProtocolParams&>;
  v.for_each_valid_latest(s, [](const Vote&) {});
};

// Latest fork-choice-eligible vote per validator: at least one slot old and
// the head block known with head.slot <= vote.slot.
template <ViewLike V>
std::vector<Vote> filter_valid_votes(const V& view, Slot current_slot) {
  std::vector<Vote> out;
  view.for_each_valid_latest(current_slot, [&](const Vote& v) { out.push_back(v); });
  return out;
}

// LMD GHOST: starting at the justified checkpoint's block, repeatedly descend
// into the child whose subtree carries the most valid latest votes, breaking
// ties by the supplied rule, until a leaf is reached.
template <ViewLike V>
BlockId ghost_head(const V& view, Slot current_slot, Tiebreak tiebreak = Tiebreak::lowest_id) {
  (void)tiebreak;  // lowest_id is the only rule; kept in the signature for replay configs
  const Checkpoint root = view.justified();
  if (!view.has_block(root.block))
    throw std::logic_error("ghost_head: justified block not in view");

  std::unordered_map<BlockId, std::uint64_t> weight;
  view.for_each_valid_latest(current_slot, [&](const Vote& v) { ++weight[v.head]; });

  // Subtree totals, children before parents (descending slot, then id).
  std::vector<BlockId> order;
  for (BlockId id : view.block_ids()) order.push_back(id);
  std::sort(order.begin(), order.end(), [&](BlockId a, BlockId b) {
    Slot sa = view.block(a)->slot, sb = view.block(b)->slot;
    if (sa != sb) return sa > sb;
    return a > b;
  });
  std::unordered_map<BlockId, std::uint64_t> subtree;
  subtree.reserve(order.size());
  for (BlockId id : order) {
    std::uint64_t w = 0;
    if (auto it = weight.find(id); it != weight.end()) w = it->second;
    for (BlockId c : view.children(id)) w += subtree.at(c);
    subtree[id] = w;
  }

  BlockId head = root.block;
  for (;;) {
    BlockId best = head;
    std::uint64_t best_w = 0;
    bool found = false;
    for (BlockId c : view.children(head)) {
      std::uint64_t w = subtree.at(c);
      if (!found || w > best_w || (w == best_w && c < best)) {
        best = c;
        best_w = w;
        found = true;
      }
    }
    if (!found) return head;
    head = best;
  }
}

// Chain-relative boundary block: the highest-slot ancestor of `tip` at or
// before `epoch`'s first slot, or `tip` itself if it is already earlier. A
// block sitting exactly on the boundary slot is its own chain's boundary
// block; two forks whose first divergent blocks straddle the boundary slot
// therefore expose distinct targets to epoch voting.
template <ViewLike V>
BlockId epoch_boundary_block(const V& view, BlockId tip, Epoch epoch) {
  const Block* b = view.block(tip);
  if (!b) throw std::invalid_argument("epoch_boundary_block: tip not in view");
  const Slot first = view.params().first_slot_of_epoch(epoch);
  while (b->slot > first && b->parent) b = view.block(*b->parent);
  return b->id;
}

// Every vote pair that violates an FFG slashing condition, in deterministic
// (validator, input order) sequence.
std::vector<SlashingOffense> detect_slashing(const std::vector<Vote>& votes);

}  // namespace gasperlab
