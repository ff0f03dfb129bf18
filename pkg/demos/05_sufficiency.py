#!/usr/bin/env python3
"""Sufficient partitions for a family of measures.

Two biased-coin measures on two tosses: the partition by number of heads
is sufficient (one conditional-expectation version serves both biases),
the partition by the first toss alone is not, and the checker produces a
concrete witness for the failure.  The intersection suites replay the
positive theorems constructively.
"""

import numpy as np

from condexp import (
    MeasureFamily,
    Partition,
    check_sufficient,
    check_sufficient_for_f,
    countable_intersection_suite,
    intersection_sufficiency_suite,
)

# outcomes 00, 01, 10, 11; a product coin with bias theta per row
family = MeasureFamily([
    [(1 - t) ** 2, t * (1 - t), t * (1 - t), t ** 2] for t in (1 / 3, 2 / 3)
])
by_sum = Partition([[0], [1, 2], [3]])
by_first = Partition([[0, 1], [2, 3]])

cert = check_sufficient(family, by_sum)
print("head-count partition sufficient:", cert.sufficient)
print("  shared conditional on the mixed block:", cert.block_conditionals[1])

cert = check_sufficient(family, by_first)
print("first-toss partition sufficient:", cert.sufficient)
w = cert.witness
print(f"  witness: measures {w.gamma} vs {w.gamma_prime}, {w.description}, "
      f"violation {w.violation:.4f}")

# Serving one fixed function: the indicator of outcome 01.
f = np.array([0.0, 1.0, 0.0, 0.0])
served = check_sufficient_for_f(family, by_sum, f)
print("\ng serving the indicator of 01 through head count:", served.g)
refused = check_sufficient_for_f(family, by_first, f)
print("served through the first toss alone:", refused.sufficient)

# Intersections of sufficient partitions stay sufficient; the suite
# replays the alternating-projection proof and reports the evidence.
suite = intersection_sufficiency_suite(family, by_sum, Partition.singletons(4))
print("\n" + suite.summary())

suite = countable_intersection_suite(
    family, [by_sum, Partition.singletons(4), by_sum])
print("\nfinal meet of the fold:", suite.conclusion.blocks,
      "passed:", suite.passed)
