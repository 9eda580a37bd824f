// SPDX-License-Identifier: Apache-2.0
#include "gasperlab/honest.hpp"

#include <algorithm>

namespace gasperlab {

TimeMs attestation_due(const ProtocolParams& params, Slot slot, const HonestConfig& config,
                       std::optional<TimeMs> proposal_arrival) {
  const TimeMs start = params.slot_start_ms(slot);
  if (config.attestation_timing == AttestationTiming::gasper_halfway)
    return start + params.vote_offset_ms();
  TimeMs due = start + params.slot_duration_ms / 3;
  if (proposal_arrival && *proposal_arrival < due) due = *proposal_arrival;
  return std::max(due, start);
}

}  // namespace gasperlab
