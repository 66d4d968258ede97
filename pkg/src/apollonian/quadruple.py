"""Exact integer arithmetic for Descartes quadruples and the Apollonian group.

A Descartes quadruple is a vector of four integer curvatures (bends) of
mutually tangent circles; it satisfies

    Q(x1, x2, x3, x4) = 2*(x1^2 + x2^2 + x3^2 + x4^2) - (x1 + x2 + x3 + x4)^2 = 0.

The Apollonian group acting on quadruples is generated by four involutions
S_1..S_4; S_i swaps the i-th circle for the other circle tangent to the
remaining three, i.e. replaces x_i by 2*(sum of the others) - x_i.

Everything here uses Python's exact big integers, so no overflow is
possible; range restrictions only apply once values enter the compiled
enumeration kernels (see orbit.py).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import ValidationError

# Gram matrix of Q: diagonal 1, off-diagonal -1.
GRAM = (
    (1, -1, -1, -1),
    (-1, 1, -1, -1),
    (-1, -1, 1, -1),
    (-1, -1, -1, 1),
)

Quadruple = tuple[int, int, int, int]


def _as_quadruple(v: Sequence[int]) -> Quadruple:
    if len(v) != 4:
        raise ValidationError(f"expected 4 coordinates, got {len(v)}")
    return (int(v[0]), int(v[1]), int(v[2]), int(v[3]))


def evaluate_descartes(v: Sequence[int]) -> int:
    """Value of the Descartes form Q at v (zero iff v is a Descartes quadruple)."""
    x1, x2, x3, x4 = _as_quadruple(v)
    s = x1 + x2 + x3 + x4
    return 2 * (x1 * x1 + x2 * x2 + x3 * x3 + x4 * x4) - s * s


def is_descartes(v: Sequence[int]) -> bool:
    return evaluate_descartes(v) == 0


@dataclass(frozen=True)
class QuadraticRoots:
    """Integer solutions t of Q(x1, x2, x3, t) = 0, with double roots flagged."""

    values: tuple[int, ...]
    double: bool


def solve_fourth(x1: int, x2: int, x3: int) -> QuadraticRoots:
    """All integers t with Q(x1, x2, x3, t) = 0.

    t = (x1+x2+x3) +- 2*sqrt(x1*x2 + x1*x3 + x2*x3); empty when the radicand
    is negative or not a perfect square, a single value with double=True
    when it is zero.
    """
    s = x1 + x2 + x3
    rad = x1 * x2 + x1 * x3 + x2 * x3
    if rad < 0:
        return QuadraticRoots((), False)
    r = math.isqrt(rad)
    if r * r != rad:
        return QuadraticRoots((), False)
    if r == 0:
        return QuadraticRoots((s,), True)
    return QuadraticRoots((s - 2 * r, s + 2 * r), False)


@dataclass(frozen=True)
class GroupElement:
    """4x4 integer matrix preserving the Descartes form."""

    rows: tuple[tuple[int, int, int, int], ...]

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        a, b = self.rows, other.rows
        return GroupElement(
            tuple(
                tuple(sum(a[r][k] * b[k][c] for k in range(4)) for c in range(4))
                for r in range(4)
            )
        )

    def apply(self, v: Sequence[int]) -> Quadruple:
        w = _as_quadruple(v)
        return tuple(sum(row[k] * w[k] for k in range(4)) for row in self.rows)  # type: ignore[return-value]

    def determinant(self) -> int:
        return _det4(self.rows)

    def preserves_form(self) -> bool:
        """Exact check of m^T * GRAM * m == GRAM."""
        m = self.rows
        for r in range(4):
            for c in range(4):
                acc = 0
                for i in range(4):
                    for j in range(4):
                        acc += m[i][r] * GRAM[i][j] * m[j][c]
                if acc != GRAM[r][c]:
                    return False
        return True


def _det4(m) -> int:
    def det3(a):
        return (
            a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
            - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
            + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
        )

    total = 0
    for c in range(4):
        minor = [[m[r][cc] for cc in range(4) if cc != c] for r in range(1, 4)]
        total += (-1) ** c * m[0][c] * det3(minor)
    return total


IDENTITY = GroupElement(tuple(tuple(1 if r == c else 0 for c in range(4)) for r in range(4)))


def generator(i: int) -> GroupElement:
    """Generator S_i (1-based); differs from the identity only in row i."""
    if i not in (1, 2, 3, 4):
        raise ValidationError(f"generator index must be in 1..4, got {i}")
    rows = [[1 if r == c else 0 for c in range(4)] for r in range(4)]
    rows[i - 1] = [2] * 4
    rows[i - 1][i - 1] = -1
    return GroupElement(tuple(tuple(row) for row in rows))


GENERATORS = (generator(1), generator(2), generator(3), generator(4))


def apply_generator(i: int, v: Sequence[int]) -> Quadruple:
    """S_i * v without building the matrix: coordinate i becomes 2*sum - 3*x_i."""
    if i not in (1, 2, 3, 4):
        raise ValidationError(f"generator index must be in 1..4, got {i}")
    w = list(_as_quadruple(v))
    s = sum(w)
    w[i - 1] = 2 * s - 3 * w[i - 1]
    return tuple(w)  # type: ignore[return-value]


def apply_word(word: Iterable[int], v: Sequence[int]) -> Quadruple:
    """Apply generators in sequence (first element of word acts first)."""
    w = _as_quadruple(v)
    for i in word:
        w = apply_generator(i, w)
    return w


@dataclass(frozen=True)
class ReductionTrace:
    """Sequence of generator indices applied during reduction, in order."""

    word: tuple[int, ...]

    def __post_init__(self):
        for a, b in zip(self.word, self.word[1:]):
            if a == b:
                raise ValidationError("reduction word repeats a generator consecutively")


def is_primitive(v: Sequence[int]) -> bool:
    """True iff gcd of the absolute coordinates is 1; the zero vector is invalid."""
    w = _as_quadruple(v)
    g = math.gcd(*[abs(x) for x in w])
    if g == 0:
        raise ValidationError("the zero quadruple has no gcd")
    return g == 1


def is_reduced(v: Sequence[int]) -> bool:
    """True iff no generator application decreases the coordinate sum."""
    w = _as_quadruple(v)
    return 2 * max(w) <= sum(w)


def reduce_to_root(
    v: Sequence[int], require_primitive: bool = True
) -> tuple[Quadruple, ReductionTrace]:
    """Reduce a Descartes quadruple to the root quadruple of its packing.

    Repeatedly applies the generator acting on the largest coordinate while
    that strictly decreases the coordinate sum (ties broken by smallest
    index); this terminates because the sum is positive and strictly
    decreasing.  The root is returned sorted ascending, and the recorded
    word is relabelled through the final sort so that applying it reversed
    to the root reproduces a coordinate permutation of the input.
    """
    w = list(_as_quadruple(v))
    if evaluate_descartes(w) != 0:
        raise ValidationError(f"not a Descartes quadruple: Q={evaluate_descartes(w)}")
    if require_primitive and not is_primitive(w):
        raise ValidationError("quadruple is not primitive")
    if sum(w) <= 0:
        raise ValidationError("coordinate sum must be positive (negate the quadruple)")

    word: list[int] = []
    while True:
        s = sum(w)
        i = max(range(4), key=lambda k: (w[k], -k))
        if 2 * w[i] <= s:
            break
        w[i] = 2 * (s - w[i]) - w[i]
        word.append(i + 1)

    order = sorted(range(4), key=lambda k: w[k])
    root = tuple(w[k] for k in order)
    # relabel: coordinate p of the unsorted result sits at position inv[p] of the root
    inv = [0] * 4
    for pos, p in enumerate(order):
        inv[p] = pos
    relabelled = tuple(inv[i - 1] + 1 for i in word)
    return root, ReductionTrace(relabelled)  # type: ignore[return-value]


def parse_quadruple(text: str) -> Quadruple:
    """Parse 'x1,x2,x3,x4' with signed decimal integers."""
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 4:
        raise ValidationError(f"expected 4 comma-separated integers, got {text!r}")
    try:
        return tuple(int(p) for p in parts)  # type: ignore[return-value]
    except ValueError as exc:
        raise ValidationError(f"bad quadruple {text!r}: {exc}") from None


def format_quadruple(v: Sequence[int]) -> str:
    return ",".join(str(x) for x in _as_quadruple(v))


@dataclass(frozen=True)
class DescartesQuadruple:
    """Validated Descartes quadruple for API boundaries (CLI, reports)."""

    coords: Quadruple

    def __post_init__(self):
        if evaluate_descartes(self.coords) != 0:
            raise ValidationError(
                f"not a Descartes quadruple: Q={evaluate_descartes(self.coords)}"
            )

    @classmethod
    def parse(cls, text: str) -> "DescartesQuadruple":
        return cls(parse_quadruple(text))

    def __str__(self) -> str:
        return format_quadruple(self.coords)
