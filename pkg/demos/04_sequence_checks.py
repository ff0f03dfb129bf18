#!/usr/bin/env python3
"""Sequence machinery behind the operator results.

Squared norms of powers of a self-adjoint contraction form a convex
sequence; for any convex bounded sequence the n-weighted second
differences sum to (first term - limit), and dyadic averages control
the sup of the whole sequence.
"""

import numpy as np

from condexp import (
    CondExpOperator,
    Partition,
    convex_sum_identity,
    direct_meet_operator,
    dyadic_bound_check,
    is_convex,
    sandwich_product,
    second_difference,
)

# Plain analytic example: a_n = 1/n is convex with limit 0, so the
# weighted second differences must sum to a_1 - 0 = 1.
n = np.arange(1.0, 10_001.0)
a = 1.0 / n
print("1/n convex:", is_convex(a))
report = convex_sum_identity(a, limit=0.0, tol=1e-9)
print("partial sum ->", report.partial_sums[-1],
      " residual:", report.final_residual)

# Operator-generated sequence: squared norms of sandwich powers.  A lopsided
# measure makes the decay gradual instead of one-step.
weights = np.array([0.4, 0.1, 0.2, 0.3])
t1 = CondExpOperator(Partition([[0, 1], [2, 3]]), weights)
t2 = CondExpOperator(Partition([[0, 2], [1, 3]]), weights)
product = sandwich_product(t1, t2)
x = np.array([1.0, 2.0, 3.0, 4.0])

norms = []
y = x
for _ in range(60):
    y = product.apply(y)
    norms.append(product.ip.norm2_sq(y))
norms = np.array(norms)
print("\nfirst second differences of |T^n x|^2:", second_difference(norms)[:4])
print("convex:", is_convex(norms, tol=1e-12))

q = direct_meet_operator([t1, t2])
limit = q.ip.norm2_sq(q.apply(x))
report = convex_sum_identity(norms, limit=limit, tol=1e-9)
print("identity residual vs |Qx|^2:", report.final_residual)

# Dyadic-average sup bound on the same trajectory.
diffs = norms[:-1] - norms[1:]
c = float(np.sqrt(np.dot(np.arange(1, norms.shape[0], dtype=float), diffs ** 2)))
bound = dyadic_bound_check(norms, a0=limit, c=c)
print("\nsup |a_n - a0| =", bound.sup_deviation)
print("3 sup |b_m - a0| + |c| =", bound.bound, " slack:", bound.slack)
