// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "gasperlab/honest.hpp"
#include "gasperlab/participant_view.hpp"

using namespace gasperlab;

namespace {

ProtocolParams params32() {
  ProtocolParams p;
  p.n_validators = 32;
  p.committee_size = 4;
  p.slots_per_epoch = 4;
  p.slot_duration_ms = 12000;
  return p;
}

Block blk(BlockId id, BlockId parent, Slot slot) {
  Block b;
  b.id = id;
  b.parent = parent;
  b.slot = slot;
  b.proposer = 0;
  return b;
}

Vote ghost_vote(ValidatorId v, Slot slot, BlockId head) {
  Vote vote;
  vote.validator = v;
  vote.slot = slot;
  vote.head = head;
  vote.source = {kGenesisId, 0};
  vote.target = {kGenesisId, 0};
  return vote;
}

TEST(BuildProposal, Slot1OverGenesisBuildsOnGenesis) {
  ChainView view(params32());
  Block b = build_proposal(view, 1, 1, 5);
  ASSERT_TRUE(b.parent.has_value());
  EXPECT_EQ(*b.parent, kGenesisId);
  EXPECT_EQ(b.slot, 1);
  EXPECT_EQ(b.proposer, 5u);
  EXPECT_FALSE(b.adversarial);
}

TEST(BuildProposal, ExtendsCurrentGhostHead) {
  ChainView view(params32());
  view.add_block(blk(1, kGenesisId, 1));
  view.add_block(blk(2, 1, 2));
  Block b = build_proposal(view, 3, 3, 7);
  EXPECT_EQ(*b.parent, 2u);
}

TEST(BuildAttestation, EqualWeightSiblingsVoteTiebreakFavoredSide) {
  ChainView view(params32());
  view.add_block(blk(1, kGenesisId, 1));
  view.add_block(blk(2, kGenesisId, 1));
  view.add_vote(ghost_vote(0, 1, 1));
  view.add_vote(ghost_vote(1, 1, 2));
  Vote v = build_attestation(view, 9, 2);
  EXPECT_EQ(v.head, 1u);  // lowest id wins the tie
  EXPECT_EQ(v.validator, 9u);
  EXPECT_EQ(v.slot, 2);
}

TEST(BuildAttestation, Epoch0LinkDegeneratesToGenesis) {
  ChainView view(params32());
  view.add_block(blk(1, kGenesisId, 1));
  Vote v = build_attestation(view, 3, 2);
  EXPECT_EQ(v.source, (Checkpoint{kGenesisId, 0}));
  EXPECT_EQ(v.target, (Checkpoint{kGenesisId, 0}));
}

TEST(BuildAttestation, CarriesJustifiedSourceAndBoundaryTarget) {
  ProtocolParams p = params32();  // 4 slots per epoch
  ChainView view(p);
  for (BlockId id = 1; id <= 9; ++id) view.add_block(blk(id, id - 1, id));
  // Justify the epoch-1 checkpoint (boundary block of epoch 1 = block 4).
  Checkpoint target1{4, 1};
  for (ValidatorId v = 0; v < p.supermajority(); ++v) {
    Vote vote = ghost_vote(v, 5, 5);
    vote.source = {kGenesisId, 0};
    vote.target = target1;
    view.add_vote(vote);
  }
  ASSERT_TRUE(view.is_justified(target1));
  Vote v = build_attestation(view, 30, 9);  // slot 9 is in epoch 2
  EXPECT_EQ(v.source, target1);
  EXPECT_EQ(v.target, (Checkpoint{8, 2}));  // block at epoch 2's first slot
  EXPECT_EQ(v.head, 9u);
}

TEST(BuildAttestation, WorksOnLayeredView) {
  ChainView base(params32());
  base.add_block(blk(1, kGenesisId, 1));
  LayeredView layered(base, {blk(2, 1, 2)}, {ghost_vote(0, 2, 2)});
  Vote v = build_attestation(layered, 4, 3);
  EXPECT_EQ(v.head, 2u);
}

TEST(AttestationDue, HalfwayModeIsSlotMidpoint) {
  ProtocolParams p = params32();
  HonestConfig cfg;
  EXPECT_EQ(attestation_due(p, 0, cfg), 6000);
  EXPECT_EQ(attestation_due(p, 2, cfg), 2 * 12000 + 6000);
  // A proposal arrival never moves the halfway deadline.
  EXPECT_EQ(attestation_due(p, 2, cfg, 2 * 12000 + 500), 2 * 12000 + 6000);
}

TEST(AttestationDue, Eth2ModeVotesAtProposalOrOneThirdWhicheverFirst) {
  ProtocolParams p = params32();
  HonestConfig cfg;
  cfg.attestation_timing = AttestationTiming::eth2_one_third;
  const TimeMs start = p.slot_start_ms(3);
  EXPECT_EQ(attestation_due(p, 3, cfg), start + 4000);                // no proposal seen
  EXPECT_EQ(attestation_due(p, 3, cfg, start + 1000), start + 1000);  // early proposal
  EXPECT_EQ(attestation_due(p, 3, cfg, start + 9000), start + 4000);  // late proposal
}

}  // namespace
