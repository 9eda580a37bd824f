// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <random>
#include <vector>

#include "gasperlab/types.hpp"

namespace gasperlab {

// Deterministic random source. One instance per run; all randomness flows
// through it so that (config, seed) fixes the entire trajectory.
class SeededRandom {
 public:
  explicit SeededRandom(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() {
    ++draws_;
    return eng_();
  }
  // Uniform integer in [0, n); n > 0.
  std::uint64_t uniform(std::uint64_t n) {
    ++draws_;
    return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(eng_);
  }
  double uniform_real() {
    ++draws_;
    return std::uniform_real_distribution<double>(0.0, 1.0)(eng_);
  }
  // Lognormal with the given median: exp(N(ln median, sigma)).
  double lognormal(double median, double sigma) {
    ++draws_;
    std::normal_distribution<double> n(0.0, 1.0);
    return median * std::exp(sigma * n(eng_));
  }
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i)
      std::swap(v[i - 1], v[uniform(i)]);
  }
  std::uint64_t draws() const { return draws_; }

  // Independent per-trial seed derivation (splitmix64 over base and indices).
  static std::uint64_t derive(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0) {
    std::uint64_t z = base + 0x9E3779B97F4A7C15ull * (a + 1) + 0xD1B54A32D192ED03ull * (b + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

 private:
  std::mt19937_64 eng_;
  std::uint64_t draws_ = 0;
};

enum class EventKind { slot_start, attest_due, deliver, adversary_timer };

struct SimEvent {
  TimeMs due = 0;
  std::uint64_t seq = 0;  // tie-break: FIFO among equal due times
  EventKind kind = EventKind::slot_start;
  Slot slot = 0;               // slot_start, attest_due
  std::uint64_t message = 0;   // deliver
  ValidatorId recipient = 0;   // deliver
  std::uint64_t tag = 0;       // adversary_timer
};

// Discrete-event scheduler. Events run in (due, seq) order; a single
// dispatcher owns all protocol behavior. One engine per run, single-threaded.
class Engine {
 public:
  Engine(const ProtocolParams& params, std::uint64_t seed)
      : params_(params), rng_(seed) {}

  TimeMs now() const { return now_; }
  Slot current_slot() const { return params_.slot_of_time(now_); }
  SeededRandom& rng() { return rng_; }
  const ProtocolParams& params() const { return params_; }

  void schedule_slot_start(TimeMs due, Slot slot) {
    SimEvent e = base_event(due, EventKind::slot_start);
    e.slot = slot;
    push(e);
  }
  void schedule_attest_due(TimeMs due, Slot slot) {
    SimEvent e = base_event(due, EventKind::attest_due);
    e.slot = slot;
    push(e);
  }
  void schedule_deliver(TimeMs due, std::uint64_t message, ValidatorId recipient) {
    SimEvent e = base_event(due, EventKind::deliver);
    e.message = message;
    e.recipient = recipient;
    push(e);
  }
  void schedule_adversary_timer(TimeMs due, std::uint64_t tag) {
    SimEvent e = base_event(due, EventKind::adversary_timer);
    e.tag = tag;
    push(e);
  }

  void set_dispatcher(std::function<void(const SimEvent&)> fn) { dispatch_ = std::move(fn); }
  void set_trace(std::function<void(const SimEvent&)> fn) { trace_ = std::move(fn); }

  // Processes events in order until the queue drains, a stop is requested, or
  // the next event would run at or past the first slot >= horizon.
  void run_until(Slot horizon) {
    const TimeMs cutoff = params_.slot_start_ms(horizon);
    while (!queue_.empty() && !stop_) {
      const SimEvent e = queue_.top();
      if (e.due >= cutoff) break;
      queue_.pop();
      now_ = e.due;
      ++executed_;
      if (trace_) trace_(e);
      dispatch_(e);
    }
  }

  void request_stop() { stop_ = true; }
  bool stopped() const { return stop_; }
  std::uint64_t executed() const { return executed_; }

 private:
  struct Later {
    bool operator()(const SimEvent& a, const SimEvent& b) const {
      if (a.due != b.due) return a.due > b.due;
      return a.seq > b.seq;
    }
  };

  SimEvent base_event(TimeMs due, EventKind kind) {
    if (due < now_)
      throw std::logic_error("schedule: event due in the past (strategy bug)");
    SimEvent e;
    e.due = due;
    e.seq = next_seq_++;
    e.kind = kind;
    return e;
  }
  void push(const SimEvent& e) { queue_.push(e); }

  ProtocolParams params_;
  SeededRandom rng_;
  std::priority_queue<SimEvent, std::vector<SimEvent>, Later> queue_;
  std::function<void(const SimEvent&)> dispatch_;
  std::function<void(const SimEvent&)> trace_;
  TimeMs now_ = 0;
  std::uint64_t next_seq_ = 0;
  std::uint64_t executed_ = 0;
  bool stop_ = false;
};

}  // namespace gasperlab
