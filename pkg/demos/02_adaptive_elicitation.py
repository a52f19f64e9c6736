#!/usr/bin/env python3
"""One adaptive questionnaire session, step by step.

A respondent with a latent matching probability answers binary choices
between an ambiguous bet and a lottery at the probe probability q.  Each
answer halves the bounds; the payout question is drawn and committed before
any choice is made, and the commitment verifies at the end.
"""

from beliefhedge.core import EventPartition
from beliefhedge.elicitation import commitment_digest, midpoint_indices, start_session

partition = EventPartition(cutoffs=(950.0, 1100.0))
session = start_session(partition, depth=4, seed=2024, respondent="demo", wave=1)
print(f"questions scheduled: {session.total_questions}")
print(f"payout question pre-drawn: #{session.payout_index}")
print(f"commitment digest: {session.commitment[:32]}...")
print()

latent = {"low": 0.15, "medium": 0.35, "high": 0.55,
          "medium_or_high": 0.80, "low_or_high": 0.65, "low_or_medium": 0.42}

shown = 0
while (pending := session.next_question()) is not None:
    event, q = pending
    chose_bet = latent[event] > q
    if shown < 6:
        action = "bet" if chose_bet else "lottery"
        print(f"q{session.answered:>2}: {partition.describe(event):<58} vs lottery {q:>7.2%} -> {action}")
        shown += 1
    session.record_choice(chose_bet)
print("...")

result = session.finalize()
print()
print("final intervals (width exactly 1/16):")
for iv in result.intervals:
    inside = iv.lb < latent[iv.event] < iv.ub
    print(f"  {iv.event:<16} [{iv.lb:.4f}, {iv.ub:.4f}]  contains latent value: {inside}")

aversion, sensitivity = midpoint_indices(result.intervals)
print(f"\nmoment indices from midpoints: aversion={aversion:.3f} sensitivity={sensitivity:.3f}")

recomputed = commitment_digest(result.seed, "demo", 1, 4)
print(f"revealed seed {result.seed} verifies commitment: {recomputed == result.commitment}")
print(f"payout resolution: question #{result.payout.question} -> {result.payout.outcome}")
