#!/usr/bin/env python3
"""Why the union of two sufficient fields can fail to be sufficient.

On the plane points with |x1| = |x2| > 0, each radius carries a
four-point orbit and a quarter-mass measure.  The two generator families
(fix the first sign, fix the second) are each sufficient, but any
finitely described combination of their atoms mentions finitely many
radii, so it cannot equal the diagonal x1 = x2: the refuter produces a
checked witness point for any candidate.  Finite truncations show the
flip side: there the join separates points and stays sufficient.
"""

import numpy as np

from condexp import (
    GeneratorAtom,
    ReflectionPoint,
    check_sufficient,
    finite_truncation,
    in_diagonal,
    join,
    membership,
    parse_set_expression,
    refute_diagonal,
    truncation_join_is_sufficient,
    verify_g_construction,
)

# Atoms: two-point sets at a radius with one coordinate's sign fixed.
a = GeneratorAtom(family=1, radius=1, sign=+1)
print("atom contains (1,-1):", membership(a, ReflectionPoint(1, 1, -1)))
print("atom contains (-1,1):", membership(a, ReflectionPoint(1, -1, 1)))

for text in ("(a 1 1 +)",
             "(u (a 1 1 +) (a 2 1 +))",
             "(c (u (a 1 1 +) (i (a 2 3/2 -) (a 1 2 +))))"):
    candidate = parse_set_expression(text)
    witness = refute_diagonal(candidate)
    print(f"candidate {text}")
    print(f"  witness {witness}: in candidate {membership(candidate, witness)}, "
          f"on diagonal {in_diagonal(witness)}")

# Truncate to three radii: a 12-outcome space with three measures.
t = finite_truncation([1, 2, 3])
print("\ntruncation outcomes:", t.space.labels[:4], "...")
print("p1 sufficient:", check_sufficient(t.family, t.p1).sufficient)
print("p2 sufficient:", check_sufficient(t.family, t.p2).sufficient)
print("join block count:", join(t.p1, t.p2).k, "of", t.n, "outcomes")

# The explicit averaging construction behind sufficiency, verified exactly.
rng = np.random.default_rng(0)
report = verify_g_construction([1, 2, 3], rng.uniform(-1, 1, t.n))
print("\n" + report.summary())

# And the honest negative-space statement about finite truncations.
print("\n" + truncation_join_is_sufficient([1, 2, 3]).summary())
