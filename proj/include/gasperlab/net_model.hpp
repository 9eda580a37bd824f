// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "gasperlab/sim_engine.hpp"
#include "gasperlab/types.hpp"

namespace gasperlab {

struct TraceRecord {
  std::string msg_id;
  std::uint32_t sender = 0;
  std::uint32_t receiver = 0;
  TimeMs delay_ms = 0;
};

// Immutable after load; indexed by sender for replay draws.
struct TraceSet {
  std::vector<TraceRecord> records;

  struct Message {
    std::string id;
    std::uint32_t sender = 0;
    std::vector<TimeMs> delays;  // one per logged receiver
  };
  std::vector<Message> messages;                       // first-appearance order
  std::map<std::uint32_t, std::vector<std::size_t>> by_sender;

  void index();  // rebuilds messages/by_sender from records
};

// Delay distribution for one broadcast. Delays are i.i.d. across broadcasts
// but correlated within one broadcast for the empirical variant, which deals
// the receiver delays of a single drawn trace message without replacement.
struct DelayModel {
  enum class Variant { zero, fixed, lognormal, empirical, targeted };
  Variant variant = Variant::zero;
  TimeMs fixed_ms = 0;
  double median_ms = 0.0;
  double sigma = 0.0;
  TimeMs lognormal_cap_ms = 60000;  // tail clamp; keeps the settle bound finite
  std::shared_ptr<const TraceSet> trace;
  std::uint32_t sender = 0;
  std::map<ValidatorId, TimeMs> schedule;  // targeted only

  static DelayModel zero() { return {}; }
  static DelayModel fixed(TimeMs d);
  static DelayModel lognormal(double median_ms, double sigma);
  static DelayModel empirical(std::shared_ptr<const TraceSet> trace, std::uint32_t sender);
  static DelayModel targeted(std::map<ValidatorId, TimeMs> schedule);

  // Upper bound on any delay this model can sample: after broadcast time plus
  // this bound, a message has reached every recipient.
  TimeMs settle_bound() const;
};

// Per-broadcast sampler. Draws the empirical trace message once, then deals
// delays incrementally; other variants sample independently per recipient.
class BroadcastSampler {
 public:
  BroadcastSampler(const DelayModel& model, SeededRandom& rng);
  TimeMs sample(ValidatorId recipient, SeededRandom& rng);

 private:
  const DelayModel& model_;
  std::vector<TimeMs> pool_;  // empirical: undealt receiver delays
  std::string msg_id_;
};

// One delay per recipient. Pure in (model, recipients, rng state).
std::map<ValidatorId, TimeMs> sample_delays(const DelayModel& model,
                                            const std::vector<ValidatorId>& recipients,
                                            SeededRandom& rng);

// CSV ingestion; header `msg_id,sender,receiver,delay_ms`. Malformed rows,
// negative delays, and duplicate (message, receiver) pairs are errors that
// name the offending line.
TraceSet load_trace(const std::string& path);
void save_trace(const TraceSet& trace, const std::string& path);

// Synthetic stand-in for measured gossip data: `messages` broadcasts from
// `sender`, each logged at every other node with lognormal(median) delays.
TraceSet generate_trace(double median_ms, double sigma, std::uint32_t nodes,
                        std::uint32_t messages, std::uint32_t sender, SeededRandom& rng);

struct CdfStats {
  std::size_t message_count = 0;
  std::vector<std::vector<TimeMs>> per_message_delays;  // each sorted ascending
  // Mean CDF sampled at every observed delay value, ascending.
  std::vector<std::pair<TimeMs, double>> mean_cdf;
  TimeMs median = 0;  // least t with fraction_received(t) >= 0.5

  double fraction_received(TimeMs t) const;
};

CdfStats cdf_stats(const TraceSet& trace, std::uint32_t sender);

}  // namespace gasperlab
