"""Conditional expectation operators as measure-weighted block projections.

The central object is :class:`CondExpOperator`: averaging over the blocks
of a partition under a fixed weighting measure.  On the weighted L2 space
it is a self-adjoint idempotent contraction, and products of two such
operators drive the alternating iteration whose limit is the conditional
expectation given the intersection field.  Everything here is matrix-free:
an application costs two linear passes (block sums, then scatter).

Conventions: a block of total weight zero maps to output value 0, which
keeps the operator linear and self-adjoint as written; all norms ignore
coordinates of measure zero, so statements hold almost everywhere in the
only sense a finite space has.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .rng import portable_rng
from .space import (
    MeasureFamily,
    Partition,
    StructuralError,
    as_vector,
    completion,
    meet,
    null_set,
)

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 10_000


class WeightedInnerProduct:
    """Inner product and norms weighted by one probability measure.

    The sup norm runs over outcomes of positive weight only; null
    coordinates are invisible to every norm here.
    """

    def __init__(self, measure):
        w = np.asarray(measure, dtype=float)
        if w.ndim != 1:
            raise StructuralError("measure must be a single weight row")
        self.measure = w
        self.positive = w > 0
        self.n = w.shape[0]

    def inner(self, x, y) -> float:
        x, y = as_vector(x, self.n), as_vector(y, self.n)
        return float(np.dot(self.measure, x * y))

    def norm1(self, x) -> float:
        return float(np.dot(self.measure, np.abs(as_vector(x, self.n))))

    def norm2_sq(self, x) -> float:
        x = as_vector(x, self.n)
        return float(np.dot(self.measure, x * x))

    def norm2(self, x) -> float:
        return float(np.sqrt(self.norm2_sq(x)))

    def norminf(self, x) -> float:
        x = as_vector(x, self.n)
        if not self.positive.any():
            return 0.0
        return float(np.max(np.abs(x[self.positive])))

    def distinf(self, x, y) -> float:
        """Sup distance over positive-measure coordinates."""
        return self.norminf(np.asarray(x, dtype=float) - np.asarray(y, dtype=float))


class CondExpOperator:
    """Weighted block-average projection for one partition and one measure.

    Applying the operator replaces each coordinate by the measure-weighted
    mean of its block; blocks of zero total weight map to 0.  The output
    is always exactly constant on blocks.
    """

    def __init__(self, partition: Partition, measure):
        w = np.asarray(measure, dtype=float)
        if w.ndim != 1 or w.shape[0] != partition.n:
            raise StructuralError(
                f"measure length {w.shape} does not match partition size {partition.n}"
            )
        if np.any(w < 0) or not np.all(np.isfinite(w)):
            raise StructuralError("measure weights must be finite and nonnegative")
        self.partition = partition
        self.measure = w
        self.n = partition.n
        self.ip = WeightedInnerProduct(w)
        self._block_of = partition.block_of
        self._block_mass = np.bincount(self._block_of, weights=w, minlength=partition.k)
        # Weights normalized per block ahead of time: a singleton block of
        # positive mass then has weight exactly 1, so the operator of the
        # finest partition is the exact identity, bit for bit.
        mass_at = self._block_mass[self._block_of]
        with np.errstate(invalid="ignore", divide="ignore"):
            self._normalized = np.where(mass_at > 0, w / mass_at, 0.0)

    def apply(self, x) -> np.ndarray:
        x = as_vector(x, self.n)
        means = np.bincount(self._block_of, weights=self._normalized * x,
                            minlength=self.partition.k)
        return means[self._block_of]

    __call__ = apply

    def same_measure_as(self, other: "CondExpOperator") -> bool:
        return self.n == other.n and np.array_equal(self.measure, other.measure)


class OperatorProduct:
    """A fixed composition of operators, applied first-to-last.

    ``OperatorProduct((a, b, a))`` maps x to a(b(a(x))).  The product is
    self-adjoint whenever the factor sequence is palindromic, which is the
    only case the summability ledger accepts.
    """

    def __init__(self, factors: Sequence[CondExpOperator]):
        factors = tuple(factors)
        if not factors:
            raise StructuralError("a product needs at least one factor")
        first = factors[0]
        for op in factors[1:]:
            if not first.same_measure_as(op):
                raise StructuralError("all factors must share one weighting measure")
        self.factors = factors
        self.n = first.n
        self.measure = first.measure
        self.ip = first.ip

    def apply(self, x) -> np.ndarray:
        y = as_vector(x, self.n)
        for op in self.factors:
            y = op.apply(y)
        return y

    __call__ = apply

    @property
    def is_palindromic(self) -> bool:
        k = len(self.factors)
        return all(self.factors[i].partition == self.factors[k - 1 - i].partition
                   for i in range(k // 2))


def sandwich_product(outer: CondExpOperator, inner: CondExpOperator) -> OperatorProduct:
    """The palindromic composition outer . inner . outer."""
    return OperatorProduct((outer, inner, outer))


def direct_meet_operator(ops: Sequence[CondExpOperator]) -> CondExpOperator:
    """Projection onto the intersection of the operators' completed fields.

    Null outcomes of the shared measure are split off before taking the
    lattice meet, because the alternating limit only sees the completed
    fields.  This is the independent target that iterate limits are
    certified against.
    """
    ops = list(ops)
    if not ops:
        raise StructuralError("need at least one operator")
    base = ops[0]
    for op in ops[1:]:
        if not base.same_measure_as(op):
            raise StructuralError("operators must share one weighting measure")
    nulls = null_set(MeasureFamily.single(base.measure))
    completed = [completion(op.partition, nulls) for op in ops]
    target = completed[0]
    for p in completed[1:]:
        target = meet(target, p)
    return CondExpOperator(target, base.measure)


@dataclass(frozen=True)
class PropertyReport:
    """Largest observed violation of each projection property."""

    trials: int
    self_adjoint: float
    idempotent: float
    contraction_l1: float
    contraction_l2: float
    contraction_linf: float
    orthogonality: float

    def max_violation(self) -> float:
        return max(self.self_adjoint, self.idempotent, self.contraction_l1,
                   self.contraction_l2, self.contraction_linf, self.orthogonality)

    def passed(self, tol: float = 1e-12) -> bool:
        return self.max_violation() <= tol


def verify_projection_properties(op: CondExpOperator, trials: int,
                                 seed: int = 0) -> PropertyReport:
    """Probe the projection axioms on random vectors with entries in [-1, 1].

    Checks symmetry of the weighted inner product under the operator,
    idempotence, contraction in the 1-, 2- and sup-norms, and
    orthogonality of range and residual.  Violations are reported, never
    raised.
    """
    if trials < 1:
        raise StructuralError("trials must be >= 1")
    rng = portable_rng(seed)
    ip = op.ip
    worst = dict.fromkeys(
        ("self_adjoint", "idempotent", "contraction_l1", "contraction_l2",
         "contraction_linf", "orthogonality"), 0.0)
    for _ in range(trials):
        x = rng.uniform(-1.0, 1.0, op.n)
        y = rng.uniform(-1.0, 1.0, op.n)
        tx, ty = op.apply(x), op.apply(y)
        worst["self_adjoint"] = max(worst["self_adjoint"],
                                    abs(ip.inner(tx, y) - ip.inner(x, ty)))
        worst["idempotent"] = max(worst["idempotent"],
                                  float(np.max(np.abs(op.apply(tx) - tx))))
        worst["contraction_l1"] = max(worst["contraction_l1"],
                                      ip.norm1(tx) - ip.norm1(x))
        worst["contraction_l2"] = max(worst["contraction_l2"],
                                      ip.norm2(tx) - ip.norm2(x))
        worst["contraction_linf"] = max(worst["contraction_linf"],
                                        ip.norminf(tx) - ip.norminf(x))
        worst["orthogonality"] = max(worst["orthogonality"],
                                     abs(ip.inner(x - tx, ty)))
    return PropertyReport(trials=trials, **worst)


@dataclass(frozen=True)
class IterationReport:
    """Trajectory and certification record of one alternating run.

    ``limit`` is not the final iterate: it is the independently computed
    projection onto the intersection of the completed fields, and
    ``residual`` is the weighted sup distance between the final iterate
    and that target.  ``converged`` requires both the stopping rule and
    residual <= tol, guarding against stopping on a premature plateau.
    """

    trajectory: tuple[np.ndarray, ...]
    norms2: np.ndarray
    diffs2: np.ndarray
    limit: np.ndarray
    iterations_used: int
    converged: bool
    residual: float

    @property
    def final(self) -> np.ndarray:
        return self.trajectory[-1]


def iterate(ops: Sequence[CondExpOperator], x, schedule="alternating",
            tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER) -> IterationReport:
    """Run the projection iteration S_k = T_k ... T_1 x and certify its limit.

    ``schedule`` is either ``"alternating"`` (cycle through ``ops``
    endlessly) or an explicit sequence of indices into ``ops``.  The run
    stops once a successive difference is within ``tol`` in the weighted
    sup norm and every operator moves the iterate by at most ``tol`` (a
    small step under one operator alone proves nothing), when an explicit
    schedule is exhausted, or after ``max_iter`` applications.
    Non-convergence is reported, not raised.
    """
    ops = list(ops)
    if not ops:
        raise StructuralError("need at least one operator")
    if tol <= 0:
        raise StructuralError("tol must be positive")
    if max_iter < 1:
        raise StructuralError("max_iter must be >= 1")
    base = ops[0]
    for op in ops[1:]:
        if not base.same_measure_as(op):
            raise StructuralError("operators must share one weighting measure")
    x = as_vector(x, base.n)

    if schedule == "alternating":
        def order():
            while True:
                yield from range(len(ops))
        indices = order()
    else:
        indices = iter(list(schedule))

    ip = base.ip
    target = direct_meet_operator(ops)
    limit = target.apply(x)

    def nearly_fixed(vec) -> bool:
        return all(ip.distinf(op.apply(vec), vec) <= tol for op in ops)

    trajectory: list[np.ndarray] = []
    norms2: list[float] = []
    prev = x
    stopped_on_tol = False
    for idx in indices:
        cur = ops[idx].apply(prev)
        trajectory.append(cur)
        norms2.append(ip.norm2_sq(cur))
        step = ip.distinf(cur, prev)
        prev = cur
        # A small step alone is not enough: an operator that happens to fix
        # the current iterate (the identity, say) would freeze the run before
        # the others act.  Stop only once every operator is done moving it.
        if step <= tol and nearly_fixed(cur):
            stopped_on_tol = True
            break
        if len(trajectory) >= max_iter:
            break

    final = trajectory[-1] if trajectory else x
    diffs2 = np.array([ip.norm2_sq(trajectory[k + 1] - trajectory[k])
                       for k in range(len(trajectory) - 1)])
    residual = ip.distinf(final, limit)
    return IterationReport(
        trajectory=tuple(trajectory),
        norms2=np.array(norms2),
        diffs2=diffs2,
        limit=limit,
        iterations_used=len(trajectory),
        converged=stopped_on_tol and residual <= tol,
        residual=residual,
    )


@dataclass(frozen=True)
class SumBoundReport:
    """Partial sums of squared power differences for a palindromic product.

    ``terms[k]`` is the squared weighted distance between the (k+1)-st and
    (k+3)-rd powers applied to x.  For a self-adjoint contraction the plain
    partial sum never exceeds the squared norm of x, and the index-weighted
    sum telescopes toward the gap between the first power and the limit
    projection.
    """

    terms: np.ndarray
    partial_sum: float
    weighted_sum: float
    bound: float
    weighted_target: float

    @property
    def bound_margin(self) -> float:
        return self.bound - self.partial_sum

    @property
    def weighted_residual(self) -> float:
        return abs(self.weighted_sum - self.weighted_target)


def power_difference_ledger(t1: CondExpOperator, t2: CondExpOperator, x,
                            n_terms: int) -> SumBoundReport:
    """Sum the squared differences of powers of the sandwich t1.t2.t1.

    Computes sum over n = 1..n_terms of the squared weighted norm of
    (T^n - T^{n+2}) x for T = t1.t2.t1, together with the n-weighted sum,
    the bound given by the squared norm of x, and the weighted sum's
    telescoping target: squared norm of T x minus squared norm of the
    intersection projection of x.
    """
    if n_terms < 1:
        raise StructuralError("n_terms must be >= 1")
    product = sandwich_product(t1, t2)
    ip = product.ip
    x = as_vector(x, product.n)
    powers = [x]
    for _ in range(n_terms + 2):
        powers.append(product.apply(powers[-1]))
    terms = np.array([ip.norm2_sq(powers[k] - powers[k + 2])
                      for k in range(1, n_terms + 1)])
    weights = np.arange(1, n_terms + 1, dtype=float)
    q = direct_meet_operator([t1, t2])
    return SumBoundReport(
        terms=terms,
        partial_sum=float(terms.sum()),
        weighted_sum=float(np.dot(weights, terms)),
        bound=ip.norm2_sq(x),
        weighted_target=ip.norm2_sq(powers[1]) - ip.norm2_sq(q.apply(x)),
    )


MAX_DYADIC_LEVEL = 20


def dyadic_average_trajectory(op, x, n_max: int) -> list[np.ndarray]:
    """Dyadic running averages of even powers of ``op`` applied to ``x``.

    Returns, for each level n = 0..n_max, the average of T^2 x, T^4 x, ...
    up to the 2^n-th even power; computed with one running power so level
    n costs no recomputation over level n-1.  Levels are capped at
    ``MAX_DYADIC_LEVEL`` since level n needs 2^(n+1) applications.
    """
    if n_max < 0:
        raise StructuralError("n_max must be >= 0")
    if n_max > MAX_DYADIC_LEVEL:
        raise StructuralError(
            f"n_max = {n_max} exceeds the level cap {MAX_DYADIC_LEVEL}"
        )
    x = as_vector(x, op.n)
    averages = []
    running = x
    total = np.zeros_like(x)
    count = 0
    for level in range(n_max + 1):
        while count < 2 ** level:
            running = op.apply(op.apply(running))
            total = total + running
            count += 1
        averages.append(total / count)
    return averages
