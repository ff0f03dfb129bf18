#!/usr/bin/env python3
"""Finite spaces and the partition lattice.

A sub-sigma-field of a finite space is the same thing as a partition of
its outcomes, so field intersection and union become the lattice meet
(finest common coarsening) and join (common refinement).
"""

import numpy as np

from condexp import (
    MeasureFamily,
    OutcomeSpace,
    Partition,
    completion,
    is_measurable,
    join,
    meet,
    null_set,
)

space = OutcomeSpace(["00", "01", "10", "11"])
print("outcomes:", space.labels)

rows = Partition([[0, 1], [2, 3]])     # first bit
cols = Partition([[0, 2], [1, 3]])     # second bit
print("rows:", rows.blocks)
print("cols:", cols.blocks)

# Knowing both bits pins the outcome; knowing their shared information
# pins nothing: the join is the finest partition, the meet the coarsest.
print("join(rows, cols):", join(rows, cols).blocks)
print("meet(rows, cols):", meet(rows, cols).blocks)

# Lattice sanity: absorption
print("meet(rows, join(rows, cols)) == rows:",
      meet(rows, join(rows, cols)) == rows)

# A vector is measurable for a partition when it is constant per block.
x = np.array([1.0, 1.0, 4.0, 4.0])
print("x measurable for rows:", is_measurable(x, rows))
print("x measurable for cols:", is_measurable(x, cols))

# Null outcomes (zero weight under every measure of a family) split off
# into their own blocks when a partition is completed.
family = MeasureFamily([[0.5, 0.5, 0.0, 0.0], [0.25, 0.75, 0.0, 0.0]])
dead = null_set(family)
print("null outcomes:", sorted(dead))
print("completion of rows:", completion(rows, dead).blocks)
