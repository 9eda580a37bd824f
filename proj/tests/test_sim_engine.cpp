// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <set>
#include <vector>

#include "gasperlab/sim_engine.hpp"

using namespace gasperlab;

namespace {

ProtocolParams params() {
  ProtocolParams p;
  p.n_validators = 64;
  p.committee_size = 2;
  p.slots_per_epoch = 32;
  p.slot_duration_ms = 12000;
  return p;
}

TEST(EventQueue, OrdersByDueTime) {
  Engine eng(params(), 1);
  std::vector<TimeMs> seen;
  eng.set_dispatcher([&](const SimEvent& e) { seen.push_back(e.due); });
  eng.schedule_deliver(100, 0, 0);
  eng.schedule_deliver(50, 1, 0);
  eng.run_until(1);
  ASSERT_EQ(seen.size(), 2u);
  EXPECT_EQ(seen[0], 50);
  EXPECT_EQ(seen[1], 100);
}

TEST(EventQueue, EqualDueBreaksTiesBySchedulingOrder) {
  Engine eng(params(), 1);
  std::vector<std::uint64_t> seen;
  eng.set_dispatcher([&](const SimEvent& e) { seen.push_back(e.message); });
  eng.schedule_deliver(100, 7, 0);
  eng.schedule_deliver(100, 8, 0);
  eng.schedule_deliver(100, 9, 0);
  eng.run_until(1);
  EXPECT_EQ(seen, (std::vector<std::uint64_t>{7, 8, 9}));
}

TEST(EventQueue, SchedulingInPastThrows) {
  Engine eng(params(), 1);
  eng.set_dispatcher([&](const SimEvent& e) {
    if (e.due == 100) {
      EXPECT_THROW(eng.schedule_deliver(99, 1, 0), std::logic_error);
    }
  });
  eng.schedule_deliver(100, 0, 0);
  eng.run_until(1);
}

TEST(EventQueue, EventsScheduledDuringExecutionRunAfterEqualDuePredecessors) {
  Engine eng(params(), 1);
  std::vector<std::uint64_t> seen;
  eng.set_dispatcher([&](const SimEvent& e) {
    seen.push_back(e.message);
    if (e.message == 1) eng.schedule_deliver(100, 99, 0);  // same due, later seq
  });
  eng.schedule_deliver(100, 1, 0);
  eng.schedule_deliver(100, 2, 0);
  eng.run_until(1);
  EXPECT_EQ(seen, (std::vector<std::uint64_t>{1, 2, 99}));
}

TEST(RunUntil, HorizonZeroProcessesNothing) {
  Engine eng(params(), 1);
  int calls = 0;
  eng.set_dispatcher([&](const SimEvent&) { ++calls; });
  eng.schedule_slot_start(0, 0);
  eng.run_until(0);
  EXPECT_EQ(calls, 0);
}

TEST(RunUntil, StopsAtHorizonSlot) {
  Engine eng(params(), 1);
  std::vector<Slot> slots;
  eng.set_dispatcher([&](const SimEvent& e) {
    slots.push_back(e.slot);
    eng.schedule_slot_start(e.due + 12000, e.slot + 1);
  });
  eng.schedule_slot_start(0, 0);
  eng.run_until(4);
  EXPECT_EQ(slots, (std::vector<Slot>{0, 1, 2, 3}));
}

TEST(RunUntil, ClockIsMonotone) {
  Engine eng(params(), 42);
  TimeMs last = 0;
  int spawned = 0;
  SeededRandom mix(3);
  eng.set_dispatcher([&](const SimEvent& e) {
    EXPECT_GE(e.due, last);
    last = e.due;
    if (spawned < 500) {
      ++spawned;
      eng.schedule_deliver(e.due + mix.uniform(5000), e.message + 1, 0);
      eng.schedule_deliver(e.due + mix.uniform(5000), e.message + 2, 0);
    }
  });
  eng.schedule_deliver(0, 0, 0);
  eng.run_until(100);
}

TEST(RunUntil, CausalityNoEventBeforeItsScheduler) {
  // A child event carries its parent's execution time in `tag`; it must never
  // execute earlier than that time.
  Engine eng(params(), 9);
  SeededRandom mix(4);
  eng.set_dispatcher([&](const SimEvent& e) {
    EXPECT_GE(e.due, static_cast<TimeMs>(e.tag));
    if (e.message < 60) {
      TimeMs due = e.due + mix.uniform(2000);
      eng.schedule_adversary_timer(due, static_cast<std::uint64_t>(e.due));
    }
  });
  eng.schedule_adversary_timer(0, 0);
  eng.run_until(10);
}

TEST(SeededRandom, IdenticalSeedsGiveIdenticalStreams) {
  SeededRandom a(777), b(777);
  for (int i = 0; i < 1000; ++i) {
    EXPECT_EQ(a.next_u64(), b.next_u64());
    EXPECT_EQ(a.uniform(97), b.uniform(97));
    EXPECT_DOUBLE_EQ(a.lognormal(100, 0.3), b.lognormal(100, 0.3));
  }
}

TEST(SeededRandom, DeriveSpreadsTrialSeeds) {
  std::set<std::uint64_t> seeds;
  for (std::uint64_t t = 0; t < 100; ++t)
    for (std::uint64_t j = 0; j < 10; ++j) seeds.insert(SeededRandom::derive(5, t, j));
  EXPECT_EQ(seeds.size(), 1000u);
}

}  // namespace
