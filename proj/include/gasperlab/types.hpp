// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace gasperlab {

using ValidatorId = std::uint32_t;
using BlockId = std::uint32_t;
using Slot = std::int64_t;
using Epoch = std::int64_t;

// Simulation clock in integer milliseconds from genesis.
using TimeMs = std::int64_t;

constexpr BlockId kGenesisId = 0;

// Static protocol configuration shared by every participant.
//
// Invariants:
//  1. n_validators >= committee_size * slots_per_epoch, so that each epoch's
//     committees can be drawn without replacement.
//  2. 0 <= beta < 1. beta is the adversarial stake fraction used for derived
//     quantities; the concrete adversarial set is configured per run.
//  3. slot_duration_ms is even: votes are cast halfway through a slot.
struct ProtocolParams {
  std::uint32_t n_validators = 64;
  std::uint32_t committee_size = 2;
  std::uint32_t slots_per_epoch = 32;
  TimeMs slot_duration_ms = 12000;
  double beta = 0.0;

  void validate() const {
    if (n_validators == 0 || committee_size == 0 || slots_per_epoch == 0)
      throw std::invalid_argument("protocol params: sizes must be positive");
    if (static_cast<std::uint64_t>(committee_size) * slots_per_epoch > n_validators)
      throw std::invalid_argument(
          "protocol params: committee_size * slots_per_epoch exceeds n_validators");
    if (beta < 0.0 || beta >= 1.0)
      throw std::invalid_argument("protocol params: beta must be in [0, 1)");
    if (slot_duration_ms <= 0 || slot_duration_ms % 2 != 0)
      throw std::invalid_argument("protocol params: slot_duration_ms must be positive and even");
  }

  // Justification threshold: ceil(2N/3) distinct validators.
  std::uint32_t supermajority() const {
    return static_cast<std::uint32_t>((2ull * n_validators + 2) / 3);
  }

  // Expected honest members per committee, rounded to nearest.
  std::uint32_t honest_per_committee() const {
    return static_cast<std::uint32_t>((1.0 - beta) * committee_size + 0.5);
  }

  Epoch epoch_of_slot(Slot s) const { return s / slots_per_epoch; }
  Slot first_slot_of_epoch(Epoch e) const { return e * slots_per_epoch; }
  TimeMs slot_start_ms(Slot s) const { return s * slot_duration_ms; }
  Slot slot_of_time(TimeMs t) const { return t / slot_duration_ms; }
  // Votes are cast halfway through the slot (delta = slot_duration / 2).
  TimeMs vote_offset_ms() const { return slot_duration_ms / 2; }
};

struct Block {
  BlockId id = kGenesisId;
  // Genesis is the only block without a parent.
  std::optional<BlockId> parent;
  Slot slot = 0;
  ValidatorId proposer = 0;
  bool adversarial = false;
};

// A block paired with the epoch for which it is a justification candidate.
// The same block may recur as the boundary of several consecutive epochs.
struct Checkpoint {
  BlockId block = kGenesisId;
  Epoch epoch = 0;

  friend auto operator<=>(const Checkpoint&, const Checkpoint&) = default;
};

// One attestation: a GHOST head vote plus an FFG source -> target link.
//
// Invariants (enforced by construction in honest and adversarial code paths):
//  1. The caster is a member of slot's committee.
//  2. source.epoch < target.epoch for every vote cast from epoch 1 onward;
//     epoch-0 votes degenerate to the self-link (genesis, 0) -> (genesis, 0)
//     and never contribute to justification.
//  3. target.epoch == epoch containing slot.
struct Vote {
  ValidatorId validator = 0;
  Slot slot = 0;
  BlockId head = kGenesisId;
  Checkpoint source;
  Checkpoint target;

  friend bool operator==(const Vote&, const Vote&) = default;
};

enum class OffenseKind { double_vote, surround_vote };

// Evidence that one validator signed a slashable pair of votes.
struct SlashingOffense {
  OffenseKind kind = OffenseKind::double_vote;
  ValidatorId validator = 0;
  Vote first;
  Vote second;
};

// Fork-choice tie handling. Ties are broken deterministically so that runs
// are reproducible; lowest_id favors the earliest-created block, which an
// adversary can predict and exploit when balancing two branches.
enum class Tiebreak { lowest_id };

inline const char* offense_name(OffenseKind k) {
  return k == OffenseKind::double_vote ? "double_vote" : "surround_vote";
}

}  // namespace gasperlab
