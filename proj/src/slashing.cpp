// SPDX-License-Identifier: Apache-2.0
#include <map>

#include "gasperlab/fork_choice.hpp"

namespace gasperlab {

namespace {

bool surrounds(const Vote& outer, const Vote& inner) {
  return outer.source.epoch < inner.source.epoch &&
         inner.source.epoch < inner.target.epoch &&
         inner.target.epoch < outer.target.epoch;
}

}  // namespace

std::vector<SlashingOffense> detect_slashing(const std::vector<Vote>& votes) {
  std::map<ValidatorId, std::vector<Vote>> by_validator;
  for (const Vote& v : votes) by_validator[v.validator].push_back(v);

  std::vector<SlashingOffense> out;
  for (const auto& [validator, vs] : by_validator) {
    for (std::size_t i = 0; i < vs.size(); ++i) {
      for (std::size_t j = i + 1; j < vs.size(); ++j) {
        const Vote& a = vs[i];
        const Vote& b = vs[j];
        if (a == b) continue;
        if (a.target.epoch == b.target.epoch) {
          out.push_back({OffenseKind::double_vote, validator, a, b});
        } else if (surrounds(a, b) || surrounds(b, a)) {
          out.push_back({OffenseKind::surround_vote, validator, a, b});
        }
      }
    }
  }
  return out;
}

}  // namespace gasperlab
