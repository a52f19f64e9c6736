#!/usr/bin/env python3
"""The hedge algebra on a worked two-investor example.

Two investors share beliefs (40%, then 60% after good news) and risk
attitudes, yet bet different amounts on an ambiguous venture.  Their implied
decision weights pin down both attitude parameters, and the six-event hedge
recovers those parameters without ever observing beliefs.
"""

from beliefhedge.core import (
    EVENT_ORDER,
    BeliefVector,
    NeoAdditiveWeighting,
    hedge_pair_sums,
    indicates_aversion,
    linear_weight,
    moment_indices,
    profile_from_weighting,
    weighting_from_two_points,
)

print("=== implied weights -> attitude parameters ===")
# willingness to invest per unit payout at beliefs 40% and 60%
investor_a = profile_from_weighting(weighting_from_two_points(0.4, 0.30, 0.6, 0.40))
investor_b = profile_from_weighting(weighting_from_two_points(0.4, 0.20, 0.6, 0.35))
print(f"investor A: aversion={investor_a.aversion:.3f} sensitivity={investor_a.sensitivity:.2f}")
print(f"investor B: aversion={investor_b.aversion:.3f} sensitivity={investor_b.sensitivity:.2f}")
print("B is more averse AND more sensitive:", investor_b.aversion > investor_a.aversion,
      investor_b.sensitivity > investor_a.sensitivity)

print()
print("=== belief hedging: beliefs cancel in the indices ===")
weighting = NeoAdditiveWeighting(intercept=0.1, slope=0.5)
for p in [(0.2, 0.3, 0.5), (0.6, 0.3, 0.1), (1 / 3, 1 / 3, 1 / 3)]:
    belief = BeliefVector(p)
    matching = {e: linear_weight(belief.probability(e), weighting) for e in EVENT_ORDER}
    aversion, sensitivity = moment_indices(matching)
    print(f"beliefs {p}: recovered aversion={aversion:.3f} sensitivity={sensitivity:.3f}")

print()
print("=== complementary pair sums diagnose aversion directly ===")
print("matching 60% on 'high' and 30% on its complement:")
pair = 0.6 + 0.3
print(f"pair sum = {pair:.0%} -> ambiguity averse? {indicates_aversion(pair)}")

belief = BeliefVector((0.2, 0.3, 0.5))
matching = {e: linear_weight(belief.probability(e), weighting) for e in EVENT_ORDER}
print("all three pair sums under intercept 0.1, slope 0.5:",
      {k: round(v, 3) for k, v in hedge_pair_sums(matching).items()})
print("each equals 2*intercept + slope =", 2 * 0.1 + 0.5)
