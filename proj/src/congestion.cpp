// SPDX-License-Identifier: Apache-2.0
#include "gasperlab/congestion.hpp"

#include <algorithm>

namespace gasperlab {

void CongestionModel::on_vote_broadcast(Slot broadcast_slot, const Vote& vote,
                                        std::uint32_t member_index) {
  FormingKey key{broadcast_slot, vote.slot, member_index / kSubcommitteeSize,
                 vote.head, vote.source, vote.target};
  ++forming_[key];
}

void CongestionModel::on_slot_boundary(Slot new_slot) {
  for (auto it = forming_.begin(); it != forming_.end();) {
    if (std::get<0>(it->first) < new_slot) {
      insert_sorted({std::get<1>(it->first), next_seq_++, it->second});
      it = forming_.erase(it);
    } else {
      ++it;
    }
  }
  auto overdue = [&](const Aggregate& a) { return a.attest_slot + kDeadlineSlots < new_slot; };
  for (const Aggregate& a : mempool_)
    if (overdue(a)) expired_votes_ += a.n_votes;
  mempool_.erase(std::remove_if(mempool_.begin(), mempool_.end(), overdue), mempool_.end());
}

void CongestionModel::on_block_broadcast(BlockId id) {
  const std::size_t take = std::min<std::size_t>(kBlockCapacity, mempool_.size());
  if (take == 0) return;
  auto& slot_aggs = packed_[id];
  slot_aggs.insert(slot_aggs.end(), mempool_.begin(), mempool_.begin() + take);
  mempool_.erase(mempool_.begin(), mempool_.begin() + take);
}

void CongestionModel::insert_sorted(const Aggregate& a) {
  auto pos = std::lower_bound(mempool_.begin(), mempool_.end(), a,
                              [](const Aggregate& x, const Aggregate& y) {
                                return std::tie(x.attest_slot, x.seq) < std::tie(y.attest_slot, y.seq);
                              });
  mempool_.insert(pos, a);
}

}  // namespace gasperlab
