"""High-throughput enumeration of Apollonian orbits up to a curvature bound.

The traversal is a non-backtracking walk over generator applications from a
reduced root: a child is produced by applying S_i to the parent for any i
other than the generator that created the parent, and the branch is pruned
as soon as the newly created curvature exceeds the bound.  From a reduced
root new curvatures never decrease along a non-backtracking word, so the
prune is sound; the test suite validates this against an unpruned
exhaustive search rather than assuming it.

Each walk step creates exactly one new circle of the packing, so the
emission stream plus the root's own positive coordinates is the multiset of
circle curvatures <= X.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

import numpy as np

from .backend import kernels
from .errors import ValidationError
from .quadruple import Quadruple, _as_quadruple, evaluate_descartes, is_reduced
from .tally import CurvatureTally, bit_vector, or_bits


@dataclass(frozen=True)
class EnumerationParams:
    """Configuration of one orbit enumeration."""

    root: Quadruple
    bound: int
    fixed_index: Optional[int] = None  # restrict to the suborbit fixing this coordinate
    threads: int = 1
    max_word_length: Optional[int] = None

    def run(self) -> "CurvatureTally":
        return fill_tally(
            self.root,
            self.bound,
            fixed_index=self.fixed_index,
            threads=self.threads,
            max_word_length=self.max_word_length,
        )


@dataclass(frozen=True)
class Emission:
    """One circle created by the walk: S_{gen_index} applied to parent."""

    parent: Quadruple
    parent_word_length: int
    gen_index: int
    curvature: int


def _validate(root: Sequence[int], bound: int, fixed: int) -> Quadruple:
    v = _as_quadruple(root)
    if evaluate_descartes(v) != 0:
        raise ValidationError(f"root is not a Descartes quadruple: Q={evaluate_descartes(v)}")
    if not is_reduced(v):
        raise ValidationError(
            "root is not reduced; run reduce_to_root on it before enumerating"
        )
    if sum(1 for x in v if x == 0) >= 2:
        raise ValidationError(
            "degenerate strip quadruple (two zero curvatures) has infinitely many "
            "circles below any bound"
        )
    if fixed and v[fixed - 1] == 0:
        raise ValidationError("fixed coordinate must be nonzero")
    top = max(x for x in v)
    if bound < top:
        raise ValidationError(f"bound {bound} is smaller than the root's largest curvature {top}")
    bit_vector(bound)  # raises on a universe past the 2^31 cap
    return v


def _suborbit_reduce(v: Quadruple, fixed: int) -> Quadruple:
    """Apply generators other than `fixed` while they decrease the coordinate sum."""
    w = list(v)
    while True:
        s = sum(w)
        best = None
        for i in range(4):
            if i + 1 == fixed:
                continue
            if 2 * w[i] > s and (best is None or w[i] > w[best]):
                best = i
        if best is None:
            return tuple(w)  # type: ignore[return-value]
        w[best] = 2 * (s - w[best]) - w[best]


def walk(
    root: Sequence[int],
    bound: int,
    fixed_index: Optional[int] = None,
    max_word_length: Optional[int] = None,
) -> Iterator[Emission]:
    """Stream every circle creation of the pruned non-backtracking walk.

    Deterministic depth-first order.  The root itself is not emitted; its
    positive coordinates are the four initial circles.
    """
    fixed = fixed_index or 0
    v = _validate(root, bound, fixed)
    depth_cap = max_word_length if max_word_length is not None else -1
    stack = [(v, 0, 0)]
    while stack:
        node, last, depth = stack.pop()
        if depth_cap >= 0 and depth >= depth_cap:
            continue
        s2 = 2 * sum(node)
        for i in (4, 3, 2, 1):
            if i == last or i == fixed:
                continue
            t = s2 - 3 * node[i - 1]
            if 0 < t <= bound:
                child = node[: i - 1] + (t,) + node[i:]
                yield Emission(node, depth, i, t)
                stack.append((child, i, depth + 1))


def _seed_tally(v: Quadruple, bound: int, fixed: int) -> CurvatureTally:
    tally = CurvatureTally(bound)
    for j, x in enumerate(v):
        if j + 1 != fixed:
            tally.add(x)
    return tally


def fill_tally(
    root: Sequence[int],
    bound: int,
    fixed_index: Optional[int] = None,
    threads: int = 1,
    max_word_length: Optional[int] = None,
) -> CurvatureTally:
    """Tally of all circle curvatures <= bound (distinct bits + multiplicity).

    With threads > 1 the walk frontier is partitioned round-robin across
    workers, each filling a private tally; the merges (bitwise OR and
    integer sum) are commutative, so the result is identical for any thread
    count or schedule.
    """
    fixed = fixed_index or 0
    v = _validate(root, bound, fixed)
    depth_cap = max_word_length if max_word_length is not None else -1
    tally = _seed_tally(v, bound, fixed)
    threads = max(1, threads)

    # deterministic breadth-first expansion to a frontier worth partitioning
    frontier: list[tuple[Quadruple, int, int]] = [(v, 0, 0)]
    target = threads * 8 if threads > 1 else 1
    while 1 <= len(frontier) < target:
        node, last, depth = frontier.pop(0)
        if depth_cap >= 0 and depth >= depth_cap:
            continue
        s2 = 2 * sum(node)
        for i in (1, 2, 3, 4):
            if i == last or i == fixed:
                continue
            t = s2 - 3 * node[i - 1]
            if 0 < t <= bound:
                tally.add(t)
                frontier.append((node[: i - 1] + (t,) + node[i:], i, depth + 1))

    def descend(nodes: list[tuple[Quadruple, int, int]]) -> tuple[bytearray, int]:
        bits = bit_vector(bound)
        emitted = 0
        for (a, b, c, d), last, depth in nodes:
            left = -1 if depth_cap < 0 else depth_cap - depth
            emitted += kernels.orbit_fill(a, b, c, d, last, bound, fixed, left, bits)
        return bits, emitted

    if threads == 1:
        bits, emitted = descend(frontier)
        or_bits(tally.bits, bits)
        tally.multiplicity += emitted
        return tally

    slices = [frontier[k::threads] for k in range(threads)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        for bits, emitted in pool.map(descend, slices):
            or_bits(tally.bits, bits)
            tally.multiplicity += emitted
    return tally


def kappa(root: Sequence[int], bound: int, threads: int = 1) -> int:
    """Number of distinct positive integers <= bound occurring as curvatures.

    The bounding circle's negative curvature is not counted; it is reported
    separately by summary().
    """
    return fill_tally(root, bound, threads=threads).distinct


def count_multiplicity(root: Sequence[int], bound: int, threads: int = 1) -> int:
    """Number of circles of positive curvature <= bound, with multiplicity."""
    return fill_tally(root, bound, threads=threads).multiplicity


def summary(root: Sequence[int], bound: int, threads: int = 1) -> dict:
    """Tally summary JSON object for the CLI."""
    v = _as_quadruple(root)
    out = {"root": ",".join(str(x) for x in v)}
    out.update(fill_tally(v, bound, threads=threads).summary())
    out["bounding"] = min(v) if min(v) < 0 else None
    return out


def tangency_curvatures(
    v: Sequence[int],
    fixed_index: int,
    bound: int,
    threads: int = 1,
) -> np.ndarray:
    """Distinct positive curvatures <= bound of circles tangent to circle `fixed_index`.

    Runs the suborbit that fixes coordinate fixed_index (generated by the
    other three involutions) and collects every value appearing in the
    non-fixed coordinates.  The quadruple is reduced within the suborbit
    first so the prune stays sound.
    """
    if fixed_index not in (1, 2, 3, 4):
        raise ValidationError(f"fixed index must be in 1..4, got {fixed_index}")
    w = _as_quadruple(v)
    if evaluate_descartes(w) != 0:
        raise ValidationError("not a Descartes quadruple")
    if w[fixed_index - 1] == 0:
        raise ValidationError("fixed coordinate must be nonzero")
    start = _suborbit_reduce(w, fixed_index)
    tally = fill_tally(start, bound, fixed_index=fixed_index, threads=threads)
    return tally.members()


def tangency_witnesses(v: Sequence[int], fixed_index: int, limit: int) -> dict[int, Quadruple]:
    """Map curvature -> quadruple (curvature first) for suborbit circles <= limit.

    For every distinct curvature a <= limit tangent to the fixed circle,
    records the lexicographically smallest witness quadruple reordered as
    (a, rest...), suitable for building that circle's tangency form.
    """
    if fixed_index not in (1, 2, 3, 4):
        raise ValidationError(f"fixed index must be in 1..4, got {fixed_index}")
    w = _as_quadruple(v)
    if evaluate_descartes(w) != 0:
        raise ValidationError("not a Descartes quadruple")
    start = _suborbit_reduce(w, fixed_index)
    fixed = fixed_index

    def reorder(q: Quadruple, pos: int) -> Quadruple:
        rest = tuple(q[j] for j in range(4) if j != pos)
        return (q[pos],) + rest  # type: ignore[return-value]

    witnesses: dict[int, Quadruple] = {}

    def offer(a: int, q: Quadruple, pos: int) -> None:
        if 1 <= a <= limit:
            cand = reorder(q, pos)
            prev = witnesses.get(a)
            if prev is None or cand < prev:
                witnesses[a] = cand

    for j in range(4):
        if j + 1 != fixed:
            offer(start[j], start, j)
    stack = [(start, 0)]
    while stack:
        node, last = stack.pop()
        s2 = 2 * sum(node)
        for i in (1, 2, 3, 4):
            if i == last or i == fixed:
                continue
            t = s2 - 3 * node[i - 1]
            if 0 < t <= limit:
                child = node[: i - 1] + (t,) + node[i:]
                offer(t, child, i - 1)
                stack.append((child, i))
    return witnesses


def fit_power_law(bounds: Sequence[int], counts: Sequence[int]) -> tuple[float, float]:
    """Least-squares slope of log(count) against log(bound), with residual."""
    if len(bounds) < 3 or len(bounds) != len(counts):
        raise ValidationError("need at least 3 (bound, count) points")
    if any(b <= 0 for b in bounds) or any(c <= 0 for c in counts):
        raise ValidationError("bounds and counts must be positive for a log-log fit")
    if len(set(bounds)) != len(bounds):
        raise ValidationError("bounds must be distinct")
    xs = np.log(np.asarray(bounds, dtype=float))
    ys = np.log(np.asarray(counts, dtype=float))
    (slope, intercept), res = np.polyfit(xs, ys, 1), 0.0
    res = float(np.sqrt(np.mean((ys - (slope * xs + intercept)) ** 2)))
    return float(slope), res


@dataclass(frozen=True)
class GrowthFit:
    slope: float
    residual: float
    points: tuple[tuple[int, int], ...]  # (bound, multiplicity count)


def delta_fit(root: Sequence[int], bounds: Sequence[int], threads: int = 1) -> GrowthFit:
    """Fit the growth exponent of the circle count N(X) over the given bounds."""
    if sorted(bounds) != list(bounds):
        raise ValidationError("bounds must be ascending")
    counts = [count_multiplicity(root, b, threads=threads) for b in bounds]
    slope, residual = fit_power_law(bounds, counts)
    return GrowthFit(slope, residual, tuple(zip(bounds, counts)))
