// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <tuple>
#include <vector>

#include "gasperlab/types.hpp"

namespace gasperlab {

// Attestation-aggregate bookkeeping. Votes broadcast during a slot form one
// aggregate per (subcommittee, distinct vote payload); aggregates queue in a
// global mempool ordered by attesting slot, a block packs the oldest 128 when
// it is broadcast, aggregates inside a block that leaves the head chain
// re-enter the mempool at their original age, and anything still pending more
// than 32 slots after its attesting slot expires.
class CongestionModel {
 public:
  static constexpr std::uint32_t kBlockCapacity = 128;
  static constexpr std::uint32_t kSubcommitteeSize = 128;
  static constexpr Slot kDeadlineSlots = 32;

  struct Aggregate {
    Slot attest_slot = 0;   // deadline anchor: the slot the votes attest for
    std::uint64_t seq = 0;  // creation order; stable packing tie-break
    std::uint32_t n_votes = 0;
  };

  // Register one broadcast vote. member_index is the voter's position within
  // its committee (subcommittee = index / 128); payload identity is the
  // (head, source, target) triple.
  void on_vote_broadcast(Slot broadcast_slot, const Vote& vote, std::uint32_t member_index);

  // Seal the ended slots' aggregates into the mempool and expire overdue
  // entries. Call once per slot boundary with the slot that just began.
  void on_slot_boundary(Slot new_slot);

  // A block reaching the network packs up to kBlockCapacity oldest aggregates.
  void on_block_broadcast(BlockId id);

  // Returns aggregates held by blocks that left the canonical chain.
  template <typename OnChain>
  void requeue_orphaned(const OnChain& on_chain) {
    for (auto it = packed_.begin(); it != packed_.end();) {
      if (!on_chain(it->first)) {
        for (const Aggregate& a : it->second) insert_sorted(a);
        it = packed_.erase(it);
      } else {
        ++it;
      }
    }
  }

  std::size_t backlog() const { return mempool_.size(); }
  std::uint32_t expired_votes() const { return expired_votes_; }
  std::size_t packed_in(BlockId id) const {
    auto it = packed_.find(id);
    return it == packed_.end() ? 0 : it->second.size();
  }

 private:
  void insert_sorted(const Aggregate& a);

  // (broadcast slot, attesting slot, subcommittee, head, source, target)
  using FormingKey = std::tuple<Slot, Slot, std::uint32_t, BlockId, Checkpoint, Checkpoint>;
  std::map<FormingKey, std::uint32_t> forming_;
  std::vector<Aggregate> mempool_;  // ascending (attest_slot, seq)
  std::map<BlockId, std::vector<Aggregate>> packed_;
  std::uint64_t next_seq_ = 0;
  std::uint32_t expired_votes_ = 0;
};

}  // namespace gasperlab
