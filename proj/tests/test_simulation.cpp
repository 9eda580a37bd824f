// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <stdexcept>
#include <vector>

#include "gasperlab/fork_choice.hpp"
#include "gasperlab/net_model.hpp"
#include "gasperlab/simulation.hpp"

namespace gasperlab {
namespace {

ProtocolParams desk_params() {
  ProtocolParams p;
  p.n_validators = 32;
  p.committee_size = 8;
  p.slots_per_epoch = 4;
  p.slot_duration_ms = 12000;
  return p;
}

SimulationConfig honest_config(Slot horizon, std::uint64_t seed) {
  SimulationConfig cfg;
  cfg.params = desk_params();
  cfg.delay = DelayModel::zero();
  cfg.horizon = horizon;
  cfg.seed = seed;
  return cfg;
}

TEST(HonestBaseline, OneBlockPerSlotAndNoOrphans) {
  Simulation sim(honest_config(12, 7));
  RunRecord rec = sim.run();

  EXPECT_FALSE(rec.success);
  EXPECT_EQ(rec.reorg_length_achieved, 0u);
  EXPECT_EQ(rec.stall_duration, 0u);
  EXPECT_EQ(rec.adversarial_votes_spent, 0u);
  EXPECT_EQ(rec.slashable_offenses, 0u);
  EXPECT_TRUE(rec.orphaned_blocks.empty());
  EXPECT_EQ(rec.finalization_delay, 0u);

  const auto& blocks = sim.blocks_broadcast();
  ASSERT_EQ(blocks.size(), 12u);  // one proposal per slot
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    EXPECT_EQ(blocks[i].slot, static_cast<Slot>(i));
    EXPECT_FALSE(blocks[i].adversarial);
    ASSERT_TRUE(blocks[i].parent.has_value());
    // Linear chain: each proposal extends the previous one.
    EXPECT_EQ(*blocks[i].parent, i == 0 ? kGenesisId : blocks[i - 1].id);
  }
  EXPECT_EQ(ghost_head(sim.omniscient(), 12), blocks.back().id);
}

TEST(HonestBaseline, JustifiesAndFinalizesOnSchedule) {
  Simulation sim(honest_config(12, 3));
  RunRecord rec = sim.run();

  // Nothing justifies before epoch-1 votes accumulate; epochs 1 and 2 are
  // both justified by the horizon and epoch 1 finalizes off the consecutive
  // link, so reported finality lag is zero.
  EXPECT_EQ(sim.justified_count_at(4), 0u);
  EXPECT_EQ(sim.justified_count_at(12), 2u);
  EXPECT_EQ(rec.finalization_delay, 0u);
  EXPECT_EQ(sim.omniscient().finalized().epoch, 1u);

  std::size_t prev = 0;
  for (Slot s = 0; s <= 12; ++s) {
    std::size_t cur = sim.justified_count_at(s);
    EXPECT_GE(cur, prev);
    prev = cur;
  }
}

TEST(HonestBaseline, AggregatesKeepUpWithBlockCapacity) {
  Simulation sim(honest_config(12, 11));
  RunRecord rec = sim.run();
  ASSERT_EQ(rec.aggregate_backlog.size(), 12u);
  for (std::uint32_t b : rec.aggregate_backlog) EXPECT_EQ(b, 0u);
  EXPECT_EQ(rec.expired_target_votes, 0u);
}

TEST(HonestBaseline, LognormalDelaysStillConvergePerSlot) {
  SimulationConfig cfg = honest_config(12, 19);
  cfg.delay = DelayModel::lognormal(100.0, 0.2);
  Simulation sim(cfg);
  RunRecord rec = sim.run();
  // A 100 ms median spread is far below the 6 s voting offset, so views
  // coincide by voting time and the chain stays linear.
  EXPECT_TRUE(rec.orphaned_blocks.empty());
  EXPECT_EQ(rec.slashable_offenses, 0u);
  EXPECT_EQ(rec.finalization_delay, 0u);
}

TEST(HonestBaseline, Eth2TimingModeRuns) {
  SimulationConfig cfg = honest_config(8, 5);
  cfg.delay = DelayModel::lognormal(100.0, 0.2);
  cfg.honest.attestation_timing = AttestationTiming::eth2_one_third;
  Simulation sim(cfg);
  RunRecord rec = sim.run();
  EXPECT_TRUE(rec.orphaned_blocks.empty());
  EXPECT_EQ(rec.slashable_offenses, 0u);
}

TEST(Determinism, IdenticalConfigAndSeedGiveIdenticalRecords) {
  SimulationConfig cfg = honest_config(10, 99);
  cfg.delay = DelayModel::lognormal(250.0, 0.4);

  Simulation first(cfg);
  RunRecord a = first.run();
  Simulation second(cfg);
  RunRecord b = second.run();

  EXPECT_EQ(a.success, b.success);
  EXPECT_EQ(a.reorg_length_achieved, b.reorg_length_achieved);
  EXPECT_EQ(a.stall_duration, b.stall_duration);
  EXPECT_EQ(a.adversarial_votes_spent, b.adversarial_votes_spent);
  EXPECT_EQ(a.slashable_offenses, b.slashable_offenses);
  EXPECT_EQ(a.finalization_delay, b.finalization_delay);
  EXPECT_EQ(a.orphaned_blocks, b.orphaned_blocks);
  EXPECT_EQ(a.aggregate_backlog, b.aggregate_backlog);
  EXPECT_EQ(a.expired_target_votes, b.expired_target_votes);
  ASSERT_EQ(first.blocks_broadcast().size(), second.blocks_broadcast().size());
  for (std::size_t i = 0; i < first.blocks_broadcast().size(); ++i)
    EXPECT_EQ(first.blocks_broadcast()[i].id, second.blocks_broadcast()[i].id);
}

TEST(SimulationConfigChecks, RejectsPopulationCommitteeMismatch) {
  SimulationConfig cfg = honest_config(8, 1);
  cfg.params.n_validators = 33;  // committees must partition the validator set
  EXPECT_THROW({ Simulation sim(cfg); }, std::invalid_argument);
}

TEST(SimulationConfigChecks, RejectsZeroHorizonAndOversizedAdversary) {
  SimulationConfig cfg = honest_config(0, 1);
  EXPECT_THROW({ Simulation sim(cfg); }, std::invalid_argument);
  SimulationConfig cfg2 = honest_config(8, 1);
  cfg2.n_adversarial = 33;
  EXPECT_THROW({ Simulation sim(cfg2); }, std::invalid_argument);
}

}  // namespace
}  // namespace gasperlab
