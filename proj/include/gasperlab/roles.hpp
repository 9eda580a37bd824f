// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "gasperlab/sim_engine.hpp"
#include "gasperlab/types.hpp"

namespace gasperlab {

// One epoch's duty roster. Committees partition the whole validator set into
// slots_per_epoch groups (sizes differ by at most one; exactly committee_size
// when n_validators == committee_size * slots_per_epoch). The proposer of a
// slot is drawn uniformly and independently of committee membership.
struct RoleSchedule {
  Epoch epoch = 0;
  Slot first_slot = 0;
  std::vector<ValidatorId> proposers;                // by local slot index
  std::vector<std::vector<ValidatorId>> committees;  // by local slot index
  std::vector<Slot> member_slot;                     // validator -> absolute slot
  std::vector<std::uint32_t> pinned_counts;          // per local slot

  ValidatorId proposer_of(Slot slot) const { return proposers.at(local(slot)); }
  const std::vector<ValidatorId>& committee_of(Slot slot) const {
    return committees.at(local(slot));
  }
  Slot committee_slot_of(ValidatorId v) const { return member_slot.at(v); }

  // Deterministic post-draw edits used to force attack preconditions. Pinned
  // committee members occupy the lowest indices of the target committee;
  // pinning preserves the partition (swap semantics).
  void pin_proposer(Slot slot, ValidatorId v) { proposers.at(local(slot)) = v; }
  void pin_committee_member(Slot slot, ValidatorId v);

  std::size_t local(Slot slot) const;
};

RoleSchedule assign_roles(const ProtocolParams& params, Epoch epoch, SeededRandom& rng);

}  // namespace gasperlab
