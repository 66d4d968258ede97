"""Counting apparatus for the positive-density experiment.

Pipeline: fix a circle of curvature a0 and collect the set A0 of curvatures
tangent to it (values of its shifted tangency form); select dyadic windows
A^(k) of A0 with a window parameter eta; for each selected curvature a
build the tangency form f_a from a witness quadruple of the packing and
take its value set S_a below the bound; then bound the union |U S_a| from
below by inclusion-exclusion, with exact pairwise intersections.

The overcounting side is also first-class: the quaternary form
F = f_a - f_a' with target a - a' gets an exact lattice representation
count over a box, a deterministic singular-integral estimate, and exact
local densities sigma_p (solution counts modulo prime powers, normalised by
p^(-3k)) with a Hensel-style lifting path for large moduli.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import orbit
from .errors import BudgetError, ValidationError
from .forms import (
    DEFAULT_BUDGET,
    BinaryQuadraticForm,
    TangencyForm,
    tangency_form,
    value_bits,
)
from .quadruple import Quadruple, _as_quadruple
from .tally import and_popcount, bit_vector, bits_to_array, or_bits, popcount


def rotate_first(v: Sequence[int], index: int) -> Quadruple:
    """Reorder a quadruple so coordinate `index` (1-based) comes first."""
    w = _as_quadruple(v)
    if index not in (1, 2, 3, 4):
        raise ValidationError(f"index must be in 1..4, got {index}")
    rest = tuple(w[j] for j in range(4) if j != index - 1)
    return (w[index - 1],) + rest  # type: ignore[return-value]


def base_curvature_set(
    source: Sequence[int],
    bound: int,
    coprime: bool = False,
    nonneg: bool = True,
    budget: int = DEFAULT_BUDGET,
) -> np.ndarray:
    """Values of the source circle's shifted tangency form in [1, bound].

    Defaults (nonneg, no coprimality) follow the printed definition of the
    base set; the experiment tightens to coprime representations so that
    every member is guaranteed to be an actual tangent curvature.
    """
    tf = tangency_form(source)
    bits = value_bits(tf.form, tf.shift, bound, coprime=coprime, nonneg=nonneg, budget=budget)
    return bits_to_array(bits, bound)


@dataclass(frozen=True)
class WindowChoice:
    """Chosen subinterval of one dyadic range [2^k, 2^(k+1))."""

    k: int
    n: int
    lo: float
    hi: float
    members: tuple[int, ...]
    counts: tuple[int, ...]  # |A0 ∩ subinterval| for every subinterval index

    @property
    def mean_count(self) -> float:
        return sum(self.counts) / len(self.counts)


@dataclass(frozen=True)
class DyadicSelection:
    """Per-k window choices plus the selected curvatures."""

    eta: float
    windows: tuple[WindowChoice, ...]
    warning: Optional[str] = None

    def members(self) -> list[int]:
        out: list[int] = []
        for w in self.windows:
            out.extend(w.members)
        return sorted(out)


def select_windows(
    base_members: Sequence[int], eta: float, a_lo: int, a_hi: int
) -> DyadicSelection:
    """Pick, per dyadic range anchored in [a_lo, a_hi], the fullest subinterval.

    Each [2^k, 2^(k+1)) with a_lo <= 2^k <= a_hi is split into
    ceil(sqrt(k)/eta) subintervals of length eta*2^k/sqrt(k); the subinterval
    with the most base-set members wins, ties to the smallest index.
    """
    if not 0 < eta < 1:
        raise ValidationError(f"eta must be in (0, 1), got {eta}")
    if a_lo < 2 or a_hi < a_lo:
        raise ValidationError(f"bad curvature range [{a_lo}, {a_hi}]")
    members = sorted(set(int(a) for a in base_members))
    ks = [k for k in range(1, a_hi.bit_length() + 1) if a_lo <= 2**k <= a_hi]
    if not ks:
        return DyadicSelection(eta, (), warning=f"no dyadic anchor 2^k in [{a_lo}, {a_hi}]")
    windows = []
    empty = True
    for k in ks:
        base = 2**k
        length = eta * base / math.sqrt(k)
        nsub = math.ceil(math.sqrt(k) / eta)
        buckets: list[list[int]] = [[] for _ in range(nsub)]
        for a in members:
            if base <= a < 2 * base:
                n = min(int((a - base) / length), nsub - 1)
                buckets[n].append(a)
        counts = tuple(len(b) for b in buckets)
        best = max(range(nsub), key=lambda n: (counts[n], -n))
        if counts[best]:
            empty = False
        windows.append(
            WindowChoice(
                k=k,
                n=best,
                lo=base + best * length,
                hi=base + (best + 1) * length,
                members=tuple(buckets[best]),
                counts=counts,
            )
        )
    warning = "base set is empty on every dyadic window" if empty else None
    return DyadicSelection(eta, tuple(windows), warning=warning)


def attach_witness_forms(
    selection: DyadicSelection, witnesses: dict[int, Quadruple]
) -> tuple[dict[int, TangencyForm], list[int]]:
    """Tangency form per selected curvature, from orbit witness quadruples.

    Members without a witness (possible when the base set was built without
    coprimality, whose extra values need not be curvatures at all) are
    dropped and reported.
    """
    forms: dict[int, TangencyForm] = {}
    dropped: list[int] = []
    for a in selection.members():
        q = witnesses.get(a)
        if q is None:
            dropped.append(a)
        else:
            forms[a] = tangency_form(q)
    return forms, dropped


def sum_value_sizes(
    forms: dict[int, TangencyForm],
    bound: int,
    eta: float,
    coprime: bool = True,
    nonneg: bool = True,
    budget: int = DEFAULT_BUDGET,
) -> dict:
    """|S_a| for every selected a, their total, and the total scaled by 1/(eta*X)."""
    sizes = {}
    for a, tf in sorted(forms.items()):
        bits = value_bits(tf.form, tf.shift, bound, coprime=coprime, nonneg=nonneg, budget=budget)
        sizes[a] = popcount(bits)
    total = sum(sizes.values())
    return {
        "sizes": sizes,
        "total": total,
        "scaled_total": f"{total / (eta * bound):.9f}" if bound else "0",
    }


def intersection_exact(
    tf_a: TangencyForm,
    tf_b: TangencyForm,
    bound: int,
    coprime: bool = True,
    nonneg: bool = True,
    budget: int = DEFAULT_BUDGET,
) -> int:
    """|S_a ∩ S_a'| by exact sorted-set intersection (each integer once)."""
    bits_a = value_bits(tf_a.form, tf_a.shift, bound, coprime=coprime, nonneg=nonneg, budget=budget)
    bits_b = value_bits(tf_b.form, tf_b.shift, bound, coprime=coprime, nonneg=nonneg, budget=budget)
    return and_popcount(bits_a, bits_b)


# --- quaternary form and its box -------------------------------------------


@dataclass(frozen=True)
class QuaternaryForm:
    """F(x, y, x', y') = f_a(x, y) - f_a'(x', y') with target a - a'."""

    fa: TangencyForm
    fb: TangencyForm

    def __post_init__(self):
        a, b = self.fa.shift, self.fb.shift
        if a <= 0 or b <= 0:
            raise ValidationError("quaternary pairs need positive shifts")
        if self.fa.form.disc * self.fb.form.disc != 16 * a * a * b * b:
            raise ValidationError("discriminant product identity failed")

    @property
    def target(self) -> int:
        return self.fa.shift - self.fb.shift


@dataclass(frozen=True)
class BoxRegion:
    """Integer box |A*x + B*y| <= sqrt(A*X), |shift*y| <= sqrt(A*X).

    Every point of the box satisfies f(x, y) <= 2*X (constant 2, from
    A*f = (A*x+B*y)^2 + shift^2*y^2 <= 2*A*X).
    """

    form: BinaryQuadraticForm
    shift: int
    bound: int

    @property
    def side(self) -> int:
        return math.isqrt(self.form.a * self.bound)

    def point_estimate(self) -> int:
        s = self.side
        return (2 * (s // self.shift) + 2) * (2 * s // self.form.a + 2)

    def iter_points(self):
        a, b2 = self.form.a, self.form.b2
        B = b2 // 2
        s = self.side
        s2 = s * s
        ylim = s // self.shift
        for y in range(-ylim, ylim + 1):
            xlo = -((s + B * y) // a)
            xhi = (s - B * y) // a
            for x in range(xlo, xhi + 1):
                u = a * x + B * y
                if u * u <= s2:
                    yield x, y


def _box_check_budget(regions: Sequence[BoxRegion], budget: int) -> None:
    est = sum(r.point_estimate() for r in regions)
    if est > budget * 10**6:
        raise BudgetError(
            f"box enumeration needs ~{est} lattice points, over the budget of {budget}e6"
        )


def quaternary_representation_count(
    qf: QuaternaryForm, bound: int, budget: int = DEFAULT_BUDGET
) -> int:
    """Exact number of box 4-tuples with F = target (multiplicity-weighted).

    Counts integer points of box_a x box_b on the level set by tabulating
    the second form's values over its box and summing lookups from the
    first box.
    """
    box_a = BoxRegion(qf.fa.form, qf.fa.shift, bound)
    box_b = BoxRegion(qf.fb.form, qf.fb.shift, bound)
    _box_check_budget([box_a, box_b], budget)
    table: dict[int, int] = {}
    for x, y in box_b.iter_points():
        v = qf.fb.form.value(x, y)
        table[v] = table.get(v, 0) + 1
    target = qf.target
    total = 0
    for x, y in box_a.iter_points():
        total += table.get(qf.fa.form.value(x, y) - target, 0)
    return total


def box_restricted_value_bits(
    tf: TangencyForm,
    bound: int,
    coprime: bool = True,
    nonneg: bool = True,
    budget: int = DEFAULT_BUDGET,
) -> bytearray:
    """Values f(x,y) - shift in [1, bound] realised by representations inside the box."""
    box = BoxRegion(tf.form, tf.shift, bound)
    _box_check_budget([box], budget)
    bits = bit_vector(bound)
    for x, y in box.iter_points():
        if nonneg and (x < 0 or y < 0):
            continue
        if x == 0 and y == 0:
            continue
        if coprime and math.gcd(abs(x), abs(y)) != 1:
            continue
        v = tf.form.value(x, y) - tf.shift
        if 1 <= v <= bound:
            bits[v >> 3] |= 1 << (v & 7)
    return bits


def singular_integral_estimate(
    qf: QuaternaryForm,
    bound: int,
    epsilon: float = 0.5,
    budget: int = DEFAULT_BUDGET,
    tolerance: float = 0.05,
) -> dict:
    """Deterministic lattice estimate of (1/eps) * Vol{x in box : |F(x) - target| < eps}.

    Samples each 2D box on a regular grid of cell centres, then counts cell
    pairs on the near-level set with a sorted sweep; the grid is refined by
    doubling until the estimate moves by under `tolerance` relative.  Also
    reports the closed-form ceiling 64 * X / (a * a') implied by the box
    dimensions.
    """
    if epsilon <= 0:
        raise ValidationError("epsilon must be positive")
    box_a = BoxRegion(qf.fa.form, qf.fa.shift, bound)
    box_b = BoxRegion(qf.fb.form, qf.fb.shift, bound)

    def grid_values(box: BoxRegion, n: int) -> tuple[np.ndarray, float]:
        a, B = box.form.a, box.form.b2 / 2.0
        s = math.sqrt(box.form.a * box.bound)
        ylim = s / box.shift
        ys = (np.arange(n) + 0.5) * (2 * ylim / n) - ylim
        # x spans the parallelogram |a*x + B*y| <= s for the widest y
        xmin = (-s - B * ylim) / a if B >= 0 else (-s + B * ylim) / a
        xmax = (s + abs(B) * ylim) / a
        xs = (np.arange(n) + 0.5) * ((xmax - xmin) / n) + xmin
        X_, Y_ = np.meshgrid(xs, ys, indexing="ij")
        U = a * X_ + B * Y_
        inside = np.abs(U) <= s
        f = box.form.a * X_ * X_ + box.form.b2 * X_ * Y_ + box.form.c * Y_ * Y_
        cell = (2 * ylim / n) * ((xmax - xmin) / n)
        return f[inside].ravel(), cell

    target = qf.target
    prev = None
    n = 64
    result = 0.0
    while True:
        if 2 * n * n > budget * 10**6:
            raise BudgetError(f"singular integral grid {n}x{n} exceeds budget {budget}e6")
        va, cell_a = grid_values(box_a, n)
        vb, cell_b = grid_values(box_b, n)
        vb = np.sort(vb)
        lo = np.searchsorted(vb, va - target - epsilon, side="left")
        hi = np.searchsorted(vb, va - target + epsilon, side="right")
        pairs = int((hi - lo).sum())
        result = pairs * cell_a * cell_b / epsilon
        if prev is not None and (prev == result == 0.0 or
                                 (prev > 0 and abs(result - prev) / prev < tolerance)):
            break
        prev = result
        n *= 2
    aa = qf.fa.shift * qf.fb.shift
    return {
        "estimate": result,
        "grid": n,
        "epsilon": epsilon,
        "ceiling": 64.0 * bound / aa,
    }


# --- local densities and the singular series --------------------------------


def classify_prime(p: int, a: int, b: int) -> str:
    """Case of the local-density analysis at p for the pair (a, a')."""
    if a % p == 0 and b % p == 0:
        return "common_divisor"
    if (a - b) % p == 0:
        return "divides_difference"
    if a % p == 0 or b % p == 0:
        return "divides_one"
    return "generic"


def _value_counts_mod(form: BinaryQuadraticForm, m: int) -> np.ndarray:
    """counts[v] = #{(x, y) in (Z/m)^2 : f(x, y) ≡ v (mod m)}, exactly."""
    xs = np.arange(m, dtype=np.int64)
    X_, Y_ = np.meshgrid(xs, xs, indexing="ij")
    vals = (form.a % m) * X_ * X_ + (form.b2 % m) * X_ * Y_ + (form.c % m) * Y_ * Y_
    return np.bincount((vals % m).ravel(), minlength=m)


def _solutions_exhaustive(qf: QuaternaryForm, p: int, k: int) -> int:
    m = p**k
    ca = _value_counts_mod(qf.fa.form, m)
    cb = _value_counts_mod(qf.fb.form, m)
    idx = (np.arange(m) - qf.target) % m
    return int(np.dot(ca, cb[idx]))


def _solutions_mod(qf: QuaternaryForm, p: int, k: int, budget: int) -> int:
    return _solutions_with_ops(qf, p, k, budget * 10**6)


def _solutions_with_ops(qf: QuaternaryForm, p: int, k: int, ops: int) -> int:
    """#{x in (Z/p^k)^4 : F(x) ≡ target}, exhaustively or by Hensel lifting.

    The exhaustive path enumerates the two binary forms' value distributions
    modulo p^k (cost p^(2k)) and convolves them.  Above the ops cap, for odd
    p not dividing a*a' the Gram matrix of F is invertible mod p, so the
    only singular solutions are ≡ 0 (mod p): nonsingular solutions lift
    p^3-fold and the singular count reduces to the target divided by p^2.
    """

    def lift_ok() -> bool:
        return p != 2 and qf.fa.shift % p != 0 and qf.fb.shift % p != 0

    def S(j: int, t: int) -> int:
        if j == 0:
            return 1
        if p ** (2 * j) <= ops:
            m = p**j
            ca = _value_counts_mod(qf.fa.form, m)
            cb = _value_counts_mod(qf.fb.form, m)
            idx = (np.arange(m) - t) % m
            return int(np.dot(ca, cb[idx]))
        if j == 1 or not lift_ok():
            raise BudgetError(
                f"sigma_p at p={p}, k={j} exceeds the {ops} op cap and has no lifting "
                f"path (lifting needs the level-1 base in budget and odd p not "
                f"dividing the shifts)"
            )
        return p**3 * (S(j - 1, t) - Z(j - 1, t)) + Z(j, t)

    def Z(j: int, t: int) -> int:
        # solutions ≡ 0 (mod p) counted mod p^j
        if j == 1:
            return 1 if t % p == 0 else 0
        if t % (p * p) != 0:
            return 0
        return p**4 * S(j - 2, t // (p * p))

    return S(k, qf.target)


def local_density(
    qf: QuaternaryForm, p: int, k: int, budget: int = DEFAULT_BUDGET
) -> Fraction:
    """sigma_p at level k: p^(-3k) times the exact solution count mod p^k."""
    if k < 1:
        raise ValidationError("k must be >= 1")
    if p < 2 or any(p % q == 0 for q in range(2, math.isqrt(p) + 1)):
        raise ValidationError(f"{p} is not prime")
    return Fraction(_solutions_mod(qf, p, k, budget), p ** (3 * k))


@dataclass(frozen=True)
class PrimeLocalDensity:
    p: int
    k: int
    sigma: Fraction
    case: str


@dataclass(frozen=True)
class SingularSeriesReport:
    rows: tuple[PrimeLocalDensity, ...]
    p_max: int
    product: Fraction
    bad_prime_factor: Fraction  # prod (1 + 1/p) over p | a*a'*(a-a'), p not | (a, a')
    common_divisor_factor: int  # 2^omega(gcd(a, a'))
    ceiling_constant: float
    within_ceiling: bool

    def as_dict(self) -> dict:
        return {
            "p_max": self.p_max,
            "rows": [
                {"p": r.p, "k": r.k, "sigma": str(r.sigma), "sigma_float": f"{float(r.sigma):.9f}",
                 "case": r.case}
                for r in self.rows
            ],
            "product": f"{float(self.product):.9f}",
            "bad_prime_factor": f"{float(self.bad_prime_factor):.9f}",
            "common_divisor_factor": self.common_divisor_factor,
            "ceiling_constant": self.ceiling_constant,
            "within_ceiling": self.within_ceiling,
        }


def primes_up_to(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i :: i] = b"\x00" * len(sieve[i * i :: i])
    return [i for i in range(n + 1) if sieve[i]]


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of |n| by trial division."""
    n = abs(n)
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out


def singular_series(
    qf: QuaternaryForm,
    p_max: int,
    k: int = 2,
    budget: int = DEFAULT_BUDGET,
    ceiling_constant: float = 2.0,
) -> SingularSeriesReport:
    """Truncated product of local densities with per-prime case classification.

    Generic primes are evaluated at level 1 (their densities are constant in
    k, which the test suite checks exactly); the other cases use level k.
    """
    a, b = qf.fa.shift, qf.fb.shift
    if a == b:
        raise ValidationError("singular series needs distinct shifts (every prime divides 0)")
    rows = []
    product = Fraction(1)
    for p in primes_up_to(p_max):
        case = classify_prime(p, a, b)
        k_used = 1 if case == "generic" else k
        sigma = local_density(qf, p, k_used, budget=budget)
        rows.append(PrimeLocalDensity(p, k_used, sigma, case))
        product *= sigma
    bad = Fraction(1)
    g = math.gcd(a, b)
    for p in prime_factors(a * b * (a - b)):
        if g % p != 0:
            bad *= Fraction(p + 1, p)
    omega = len(prime_factors(g)) if g > 1 else 0
    common = 2**omega
    within = float(product) <= ceiling_constant * float(bad) * common
    return SingularSeriesReport(
        tuple(rows), p_max, product, bad, common, ceiling_constant, within
    )


# --- sums of two squares in progressions ------------------------------------


def two_squares_flags(bound: int) -> np.ndarray:
    """flags[n] for n <= bound: n is a sum of two squares.

    Uses the classification by prime valuations: n = s^2 + t^2 iff every
    prime ≡ 3 (mod 4) divides n to an even power.  Odd-valuation positions
    are found per prime with an XOR toggle over the strides p, p^2, ...
    """
    flags = np.ones(bound + 1, dtype=bool)
    if bound < 1:
        return flags
    toggles = np.zeros(bound + 1, dtype=np.uint8)
    for p in primes_up_to(bound):
        if p % 4 != 3:
            continue
        if p * p > bound:
            flags[p::p] = False
            continue
        pe = p
        while pe <= bound:
            toggles[pe::pe] ^= 1
            pe *= p
        flags[p::p] &= toggles[p::p] == 0
        toggles[p::p] = 0
    return flags


def count_two_squares(
    bound: int, q: int, r: int, budget: int = DEFAULT_BUDGET
) -> int:
    """B(x, q, r): # of n <= x, n ≡ r (mod q), expressible as a sum of two squares."""
    if q < 1 or not 0 <= r < q:
        raise ValidationError(f"need q >= 1 and 0 <= r < q, got q={q}, r={r}")
    if bound > budget * 10**6:
        raise BudgetError(f"sieve bound {bound} exceeds budget {budget}e6")
    if bound < 1:
        return 0
    flags = two_squares_flags(bound)
    start = r if r >= 1 else q
    if start > bound:
        return 0
    return int(flags[start :: q].sum())


def progression_reciprocal_sum(
    members: Sequence[int], q: int, r: int, eta: float
) -> dict:
    """Exact sum of 1/a over selected a ≡ r (mod q), with the scaled ratio.

    q must be squarefree and > 1; the reference scale is eta*loglog(q)/q,
    reported only for q >= 3 (loglog is negative below e).
    """
    if q <= 1:
        raise ValidationError("q must be > 1")
    for p in primes_up_to(math.isqrt(q) + 1):
        if q % (p * p) == 0:
            raise ValidationError(f"q={q} is not squarefree")
    total = Fraction(0)
    for a in members:
        if a % q == r % q:
            total += Fraction(1, int(a))
    out = {
        "q": q,
        "r": r,
        "sum": str(total),
        "sum_float": f"{float(total):.12g}",
    }
    if q >= 3:
        scale = eta * math.log(math.log(q)) / q
        out["ratio"] = f"{float(total) / scale:.12g}" if scale > 0 else None
    return out


# --- the experiment ----------------------------------------------------------


@dataclass
class ExperimentConfig:
    root: Quadruple
    a0_index: int = 1
    bound: int = 10**6
    eta: float = 0.5
    a_lo: int = 50
    a_hi: int = 100
    coprime: bool = True
    nonneg: bool = True
    threads: int = 1
    budget: int = DEFAULT_BUDGET


def run_density_experiment(cfg: ExperimentConfig) -> dict:
    """Full pipeline: base set, dyadic selection, value sets, inclusion-exclusion.

    Reports sum |S_a|, all pairwise |S_a ∩ S_a'|, the Bonferroni lower
    bound for |U S_a|, the exact union size, and the packing's distinct
    curvature count over the same bound for comparison.  All quantities are
    exact integers; the result is a pure function of the config.
    """
    root = _as_quadruple(cfg.root)
    source = rotate_first(root, cfg.a0_index)
    window_cap = 2 ** (cfg.a_hi.bit_length() + 1)

    base = base_curvature_set(
        source, window_cap, coprime=cfg.coprime, nonneg=cfg.nonneg, budget=cfg.budget
    )
    selection = select_windows(base.tolist(), cfg.eta, cfg.a_lo, cfg.a_hi)
    witnesses = orbit.tangency_witnesses(root, cfg.a0_index, window_cap)
    forms, dropped = attach_witness_forms(selection, witnesses)

    sizes = sum_value_sizes(
        forms, cfg.bound, cfg.eta, coprime=cfg.coprime, nonneg=cfg.nonneg, budget=cfg.budget
    )

    selected = sorted(forms)
    sets = {
        a: value_bits(
            forms[a].form, forms[a].shift, cfg.bound,
            coprime=cfg.coprime, nonneg=cfg.nonneg, budget=cfg.budget,
        )
        for a in selected
    }
    pair_rows = []
    pair_total = 0
    for i, a in enumerate(selected):
        for b in selected[i + 1 :]:
            n = and_popcount(sets[a], sets[b])
            pair_rows.append([a, b, n])
            pair_total += n
    union_bits = bit_vector(cfg.bound)
    for bits in sets.values():
        or_bits(union_bits, bits)
    union = popcount(union_bits)
    lower_bound = sizes["total"] - pair_total

    packing_tally = orbit.fill_tally(root, cfg.bound, threads=cfg.threads)

    report = {
        "config": {
            "root": ",".join(str(x) for x in root),
            "a0_index": cfg.a0_index,
            "a0": source[0],
            "X": cfg.bound,
            "eta": cfg.eta,
            "a_range": [cfg.a_lo, cfg.a_hi],
            "coprime": cfg.coprime,
            "quadrant": "nonneg" if cfg.nonneg else "full",
        },
        "base_set_size": int(len(base)),
        "windows": [
            {
                "k": w.k,
                "chosen_n": w.n,
                "range": [f"{w.lo:.6f}", f"{w.hi:.6f}"],
                "counts": list(w.counts),
                "members": list(w.members),
            }
            for w in selection.windows
        ],
        "selection_warning": selection.warning,
        "selected": selected,
        "dropped_without_witness": dropped,
        "set_sizes": {str(a): sizes["sizes"][a] for a in selected},
        "sum_sizes": sizes["total"],
        "sum_sizes_scaled": sizes["scaled_total"],
        "pairwise_intersections": pair_rows,
        "pairwise_total": pair_total,
        "inclusion_exclusion_lower_bound": lower_bound,
        "union": union,
        "union_ratio": f"{union / cfg.bound:.9f}",
        "kappa": packing_tally.distinct,
        "kappa_ratio": f"{packing_tally.distinct / cfg.bound:.9f}",
        "union_within_kappa": union <= packing_tally.distinct,
    }
    return report
