// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>

#include "gasperlab/fork_choice.hpp"
#include "gasperlab/types.hpp"

namespace gasperlab {

enum class AttestationTiming { gasper_halfway, eth2_one_third };

struct HonestConfig {
  AttestationTiming attestation_timing = AttestationTiming::gasper_halfway;
};

// When an honest committee member casts its vote within a slot.
// gasper_halfway: fixed midpoint of the slot. eth2_one_third: as soon as the
// slot's proposal arrives, but no later than one third into the slot.
TimeMs attestation_due(const ProtocolParams& params, Slot slot, const HonestConfig& config,
                       std::optional<TimeMs> proposal_arrival = std::nullopt);

template <typename V>
Block build_proposal(const V& view, BlockId id, Slot slot, ValidatorId proposer) {
  Block b;
  b.id = id;
  b.parent = ghost_head(view, slot);
  b.slot = slot;
  b.proposer = proposer;
  b.adversarial = false;
  return b;
}

// Head from fork choice; FFG source is the latest checkpoint justified before
// this epoch, target the boundary block of the head's own chain. In epoch 0
// both ends degenerate to genesis and the resulting self-link is never
// tallied.
template <typename V>
Vote build_attestation(const V& view, ValidatorId validator, Slot slot) {
  const Epoch epoch = view.params().epoch_of_slot(slot);
  Vote vote;
  vote.validator = validator;
  vote.slot = slot;
  vote.head = ghost_head(view, slot);
  vote.source = view.justified_before(epoch);
  vote.target = {epoch_boundary_block(view, vote.head, epoch), epoch};
  return vote;
}

}  // namespace gasperlab
