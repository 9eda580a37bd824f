// SPDX-License-Identifier: Apache-2.0
#include "gasperlab/roles.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace gasperlab {

std::size_t RoleSchedule::local(Slot slot) const {
  if (slot < first_slot || slot >= first_slot + static_cast<Slot>(committees.size()))
    throw std::out_of_range("RoleSchedule: slot " + std::to_string(slot) +
                            " outside epoch " + std::to_string(epoch));
  return static_cast<std::size_t>(slot - first_slot);
}

void RoleSchedule::pin_committee_member(Slot slot, ValidatorId v) {
  const std::size_t target = local(slot);
  const std::size_t source = local(member_slot.at(v));
  auto& dst = committees[target];
  const std::size_t j = pinned_counts[target]++;
  if (j >= dst.size()) throw std::logic_error("pin_committee_member: committee full of pins");
  auto& src = committees[source];
  const auto it = std::find(src.begin(), src.end(), v);
  const ValidatorId displaced = dst[j];
  // Swap v into the pin position; the displaced member takes v's old seat.
  *it = displaced;
  dst[j] = v;
  member_slot[displaced] = member_slot[v];
  member_slot[v] = slot;
}

RoleSchedule assign_roles(const ProtocolParams& params, Epoch epoch, SeededRandom& rng) {
  params.validate();
  const std::size_t n = params.n_validators;
  const std::size_t spe = static_cast<std::size_t>(params.slots_per_epoch);

  RoleSchedule schedule;
  schedule.epoch = epoch;
  schedule.first_slot = params.first_slot_of_epoch(epoch);

  schedule.proposers.resize(spe);
  for (std::size_t i = 0; i < spe; ++i)
    schedule.proposers[i] = static_cast<ValidatorId>(rng.uniform(n));

  std::vector<ValidatorId> order(n);
  std::iota(order.begin(), order.end(), 0u);
  rng.shuffle(order);

  // Near-equal partition: the first (n % spe) committees take one extra
  // member; all committees have size committee_size when n == W * spe.
  schedule.committees.resize(spe);
  schedule.member_slot.assign(n, 0);
  schedule.pinned_counts.assign(spe, 0);
  const std::size_t q = n / spe;
  const std::size_t r = n % spe;
  std::size_t pos = 0;
  for (std::size_t i = 0; i < spe; ++i) {
    const std::size_t size = q + (i < r ? 1 : 0);
    auto& committee = schedule.committees[i];
    committee.assign(order.begin() + pos, order.begin() + pos + size);
    for (ValidatorId v : committee)
      schedule.member_slot[v] = schedule.first_slot + static_cast<Slot>(i);
    pos += size;
  }
  return schedule;
}

}  // namespace gasperlab
