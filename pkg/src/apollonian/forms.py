"""Shifted binary quadratic forms attached to circles of a packing.

Fixing a circle of curvature a0 in a Descartes quadruple (a0, b, c, d), the
curvatures of circles tangent to it are values of f(x, y) - a0 where f is a
positive definite binary quadratic form of discriminant -4*a0^2:

    f(x, y) = A0*x^2 + 2*B0*x*y + C0*y^2,
    A0 = b + a0,  C0 = d + a0,  B0 = (b + d + a0 - c) / 2.

The B0 coefficient carries the +a0 term forced by the substitution chain
y = (b+a0, c+a0, d+a0), A = y2, C = y4, y3 = A + C - 2B together with the
discriminant identity (2*B0)^2 - 4*A0*C0 = -4*a0^2, which is asserted on
every construction.

The module also exposes the ternary machinery behind that substitution: the
form g(y) = y2^2+y3^2+y4^2-2(y2*y3+y2*y4+y3*y4) with its three generator
matrices, the discriminant form B^2 - A*C with its own generators, and the
degree-2 spin map from 2x2 projective integer matrices onto the special
orthogonal group of the discriminant form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _kernels_py
from .backend import kernels
from .errors import BudgetError, ValidationError
from .quadruple import Quadruple, _as_quadruple, evaluate_descartes
from .tally import bit_vector, bits_to_array, popcount

DEFAULT_BUDGET = 512  # units of 10^6 inner-loop iterations


@dataclass(frozen=True)
class BinaryQuadraticForm:
    """a*x^2 + b2*x*y + c*y^2 with b2 even (b2 = twice the middle coefficient)."""

    a: int
    b2: int
    c: int

    def __post_init__(self):
        if self.b2 % 2 != 0:
            raise ValidationError("middle coefficient b2 must be even")

    @property
    def disc(self) -> int:
        return self.b2 * self.b2 - 4 * self.a * self.c

    def is_positive_definite(self) -> bool:
        return self.a > 0 and self.disc < 0

    def value(self, x: int, y: int) -> int:
        return self.a * x * x + self.b2 * x * y + self.c * y * y

    @classmethod
    def parse(cls, text: str) -> "BinaryQuadraticForm":
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 3:
            raise ValidationError(f"expected 'A,2B,C', got {text!r}")
        return cls(*(int(p) for p in parts))

    def __str__(self) -> str:
        return f"{self.a},{self.b2},{self.c}"


@dataclass(frozen=True)
class TangencyForm:
    """Binary form plus the shift whose values-minus-shift are tangent curvatures."""

    form: BinaryQuadraticForm
    shift: int
    source: Quadruple  # ordered with the fixed curvature first


def tangency_form(v: Sequence[int]) -> TangencyForm:
    """Tangency form of the first coordinate of the quadruple (a0, b, c, d)."""
    a0, b, c, d = _as_quadruple(v)
    if evaluate_descartes(v) != 0:
        raise ValidationError(f"not a Descartes quadruple: Q={evaluate_descartes(v)}")
    if a0 == 0:
        raise ValidationError("tangency form requires a nonzero fixed curvature")
    b2 = b + d + a0 - c  # = 2*B0; even because the coordinate sum is even
    form = BinaryQuadraticForm(b + a0, b2, d + a0)
    if form.disc != -4 * a0 * a0:
        raise ValidationError(
            f"discriminant identity failed: disc={form.disc}, expected {-4 * a0 * a0}"
        )
    if not form.is_positive_definite():
        raise ValidationError(f"tangency form {form} is not positive definite")
    return TangencyForm(form, a0, (a0, b, c, d))


def _region_budget(form: BinaryQuadraticForm, m: int, budget: int) -> None:
    if m < 1:
        return
    d2 = form.a * form.c - (form.b2 // 2) ** 2
    est = int(3.3 * m / math.sqrt(d2)) + 2 * math.isqrt(form.a * m // d2) + 16
    if est > budget * 10**6:
        raise BudgetError(
            f"region enumeration needs ~{est} lattice points, over the budget of "
            f"{budget}e6; raise --budget"
        )


def value_bits(
    form: BinaryQuadraticForm,
    shift: int,
    bound: int,
    coprime: bool = True,
    nonneg: bool = False,
    budget: int = DEFAULT_BUDGET,
) -> bytearray:
    """Bit vector over [1, bound] of values f(x,y) - shift under the constraints."""
    if not form.is_positive_definite():
        raise ValidationError(f"form {form} is not positive definite")
    bits = bit_vector(max(bound, 1))
    if bound < 1:
        return bits
    _region_budget(form, bound + shift, budget)
    # the compiled kernel works in int64; route oversized fills to exact Python ints
    impl = kernels if form.a * (bound + shift) < 2**62 else _kernels_py
    impl.region_fill(form.a, form.b2, form.c, shift, bound, int(coprime), int(nonneg), bits)
    return bits


def value_set(
    tf: TangencyForm,
    bound: int,
    coprime: bool = True,
    nonneg: bool = False,
    budget: int = DEFAULT_BUDGET,
) -> np.ndarray:
    """Sorted distinct integers n in [1, bound] with n = f(x,y) - shift.

    coprime restricts to gcd(x, y) = 1; nonneg restricts arguments to
    x, y >= 0 (the full-plane default is needed to realise every tangency,
    e.g. the second curvature-2 circle of the (-1,2,2,3) packing requires
    f(1,-1)).  The zero pair is never a representation.
    """
    bits = value_bits(tf.form, tf.shift, bound, coprime=coprime, nonneg=nonneg, budget=budget)
    return bits_to_array(bits, bound)


def representation_count(
    form: BinaryQuadraticForm, n: int, coprime: bool = True
) -> int:
    """Exact number of (x, y) in Z^2 - {0} with f(x, y) = n (optionally coprime)."""
    if not form.is_positive_definite():
        raise ValidationError("representation counting requires a positive definite form")
    if n < 0:
        return 0
    a, b2, c = form.a, form.b2, form.c
    B = b2 // 2
    d2 = a * c - B * B
    count = 0
    ylim = math.isqrt(a * n // d2) + 1
    for y in range(-ylim, ylim + 1):
        rem = a * n - d2 * y * y
        if rem < 0:
            continue
        s = math.isqrt(rem)
        # a*x + B*y = ±s
        for u in {s, -s}:
            num = u - B * y
            if num % a:
                continue
            x = num // a
            if x == 0 and y == 0:
                continue
            if form.value(x, y) != n:
                continue
            if coprime and math.gcd(abs(x), abs(y)) != 1:
                continue
            count += 1
    return count


def count_distinct_values(
    form: BinaryQuadraticForm,
    bound: int,
    coprime: bool = True,
    budget: int = DEFAULT_BUDGET,
) -> int:
    """Number of distinct n in [1, bound] represented by the form itself."""
    bits = value_bits(form, 0, bound, coprime=coprime, nonneg=False, budget=budget)
    return popcount(bits)


def min_represented(form: BinaryQuadraticForm) -> int:
    """Smallest positive integer represented by the form over Z^2 - {0}.

    The minimum of a reduced positive definite form is at most
    sqrt(|disc|/3), so scanning values up to that bound suffices.
    """
    if not form.is_positive_definite():
        raise ValidationError("minimum search requires a positive definite form")
    cap = math.isqrt(-form.disc // 3) + 2
    bits = value_bits(form, 0, cap, coprime=False, nonneg=False)
    members = bits_to_array(bits, cap)
    if len(members) == 0:
        raise ValidationError(f"form {form} represents nothing below {cap}; not reduced?")
    return int(members[0])


def distinct_density_ratio(
    form: BinaryQuadraticForm, bound: int, budget: int = DEFAULT_BUDGET
) -> float:
    """U(bound) * sqrt(log bound) / bound, the X-normalised distinct-value density."""
    if bound < 2:
        raise ValidationError("bound must be >= 2")
    u = count_distinct_values(form, bound, coprime=True, budget=budget)
    return u * math.sqrt(math.log(bound)) / bound


# --- ternary machinery -----------------------------------------------------

# Gram matrix of g(y) = y2^2 + y3^2 + y4^2 - 2*(y2*y3 + y2*y4 + y3*y4)
TERNARY_GRAM = ((1, -1, -1), (-1, 1, -1), (-1, -1, 1))

# generators of the ternary group conjugate to the suborbit action on (y2, y3, y4)
TERNARY_GENS = (
    ((-1, 2, 2), (0, 1, 0), (0, 0, 1)),
    ((1, 0, 0), (2, -1, 2), (0, 0, 1)),
    ((1, 0, 0), (0, 1, 0), (2, 2, -1)),
)

# generators acting on coefficient triples (A, B, C), preserving B^2 - A*C
COEFFICIENT_GENS = (
    ((1, -4, 4), (0, -1, 2), (0, 0, 1)),
    ((1, 0, 0), (0, -1, 0), (0, 0, 1)),
    ((1, 0, 0), (2, -1, 0), (4, -4, 1)),
)

# Gram matrix of 2*(B^2 - A*C) in the variables (A, B, C)
DISC_FORM_GRAM = ((0, 0, -1), (0, 2, 0), (-1, 0, 0))

# the two congruence-subgroup generators whose spin images land in the
# coefficient group: [[1,0],[-2,1]] and [[1,-2],[0,1]]
CONGRUENCE2_GENS = (((1, 0), (-2, 1)), ((1, -2), (0, 1)))

Matrix2 = tuple[tuple[int, int], tuple[int, int]]
Matrix3 = tuple[tuple[int, int, int], ...]


def _mat3_mul(a: Matrix3, b: Matrix3) -> Matrix3:
    return tuple(
        tuple(sum(a[r][k] * b[k][c] for k in range(3)) for c in range(3)) for r in range(3)
    )


def _preserves(mat: Matrix3, gram: Matrix3) -> bool:
    for r in range(3):
        for c in range(3):
            acc = 0
            for i in range(3):
                for j in range(3):
                    acc += mat[i][r] * gram[i][j] * mat[j][c]
            if acc != gram[r][c]:
                return False
    return True


def preserves_ternary(mat: Matrix3) -> bool:
    return _preserves(mat, TERNARY_GRAM)


def preserves_disc_form(mat: Matrix3) -> bool:
    return _preserves(mat, DISC_FORM_GRAM)


def spin_map(m: Matrix2) -> Matrix3:
    """Degree-2 map from determinant-±1 2x2 matrices to the disc-form orthogonal group.

    spin_map(m) is the action of the substitution (x, y) -> (x, y)·m on the
    coefficient triple (A, B, C) of A*x^2 + 2B*x*y + C*y^2, scaled by
    1/det(m); it is a homomorphism, preserves B^2 - A*C, has determinant +1
    and is invariant under m -> -m.
    """
    (a, b), (c, d) = m
    det = a * d - b * c
    if det not in (1, -1):
        raise ValidationError(f"spin map requires determinant ±1, got {det}")
    raw = (
        (a * a, 2 * a * b, b * b),
        (a * c, a * d + b * c, b * d),
        (c * c, 2 * c * d, d * d),
    )
    # 1/det == det for det = ±1, so the image stays integral
    return tuple(tuple(x * det for x in row) for row in raw)


def in_congruence_subgroup(m: Matrix2) -> bool:
    """Level-2 principal congruence membership: m ≡ ±identity (mod 2), det +1."""
    (a, b), (c, d) = m
    return a * d - b * c == 1 and a % 2 == 1 and d % 2 == 1 and b % 2 == 0 and c % 2 == 0


def ternary_value(y: Sequence[int]) -> int:
    y2, y3, y4 = y
    return y2 * y2 + y3 * y3 + y4 * y4 - 2 * (y2 * y3 + y2 * y4 + y3 * y4)


def verify_change_of_variables(v: Sequence[int]) -> dict:
    """Exact verification of the variable chain from a quadruple to its disc form.

    Checks, for v = (a0, b, c, d) with Q(v) = 0 and a0 != 0:
      * g(b+a0, c+a0, d+a0) = -4*a0^2
      * with A = b+a0, C = d+a0, B = (b+d+a0-c)/2: 4*(B^2 - A*C) = -4*a0^2
      * each ternary generator preserves g, each coefficient generator
        preserves B^2 - A*C (fixed integer matrix identities)
      * the ternary generators reproduce the suborbit action on shifted
        coordinates: y(S_j v) = G_{j-1} y(v) for j = 2, 3, 4.
    Returns a report naming any failing identity instead of raising.
    """
    a0, b, c, d = _as_quadruple(v)
    if evaluate_descartes(v) != 0:
        raise ValidationError("not a Descartes quadruple")
    if a0 == 0:
        raise ValidationError("fixed curvature must be nonzero")
    failures: list[str] = []

    y = (b + a0, c + a0, d + a0)
    g_val = ternary_value(y)
    if g_val != -4 * a0 * a0:
        failures.append("ternary_identity")

    A, C = b + a0, d + a0
    B = (b + d + a0 - c) // 2
    if (b + d + a0 - c) % 2 != 0:
        failures.append("middle_coefficient_parity")
    disc_val = B * B - A * C
    if 4 * disc_val != -4 * a0 * a0:
        failures.append("disc_identity")

    for idx, gen in enumerate(TERNARY_GENS, start=1):
        if not preserves_ternary(gen):
            failures.append(f"ternary_generator_{idx}")
    for idx, gen in enumerate(COEFFICIENT_GENS, start=1):
        if not preserves_disc_form(gen):
            failures.append(f"coefficient_generator_{idx}")

    # suborbit correspondence: changing coordinate j of v matches generator j-1 on y
    for j in (2, 3, 4):
        w = list((a0, b, c, d))
        s = sum(w)
        w[j - 1] = 2 * (s - w[j - 1]) - w[j - 1]
        yw = (w[1] + a0, w[2] + a0, w[3] + a0)
        gen = TERNARY_GENS[j - 2]
        image = tuple(sum(gen[r][k] * y[k] for k in range(3)) for r in range(3))
        if image != yw:
            failures.append(f"suborbit_correspondence_{j}")

    return {
        "quadruple": ",".join(str(x) for x in (a0, b, c, d)),
        "shifted": list(y),
        "ternary_value": g_val,
        "ternary_expected": -4 * a0 * a0,
        "coefficients": {"A": A, "B": B, "C": C},
        "disc_value": disc_val,
        "disc_expected": -a0 * a0,
        "failures": failures,
        "ok": not failures,
    }
