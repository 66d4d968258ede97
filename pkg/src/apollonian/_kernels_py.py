"""Pure-Python fallback for the hot enumeration kernels.

Same contracts as the compiled _kernels extension; selected at import time
by backend.py when the extension is unavailable (or APOLLONIAN_PURE is
set).  Both kernels mark membership bits in a caller-supplied bit vector
and return a plain count, so results merge commutatively across workers.
"""

from __future__ import annotations

from math import gcd, isqrt

UNLIMITED = 1 << 62


def orbit_fill(
    x1: int,
    x2: int,
    x3: int,
    x4: int,
    last: int,
    bound: int,
    fixed: int,
    depth_left: int,
    bits: bytearray,
) -> int:
    """Non-backtracking descent below one node of the Apollonian orbit.

    Emits every child curvature <= bound reachable without immediately
    repeating a generator (and never touching generator `fixed`, if
    nonzero), marking each emitted value's bit and counting emissions with
    multiplicity.  The caller is responsible for tallying the node's own
    coordinates.  depth_left < 0 means unlimited.
    """
    if depth_left < 0:
        depth_left = UNLIMITED
    if depth_left == 0:
        return 0
    emitted = 0
    stack = [(x1, x2, x3, x4, last, depth_left)]
    push = stack.append
    pop = stack.pop
    while stack:
        a, b, c, d, last, depth = pop()
        s2 = (a + b + c + d) << 1
        depth -= 1
        if last != 1 and fixed != 1:
            t = s2 - 3 * a
            if 0 < t <= bound:
                bits[t >> 3] |= 1 << (t & 7)
                emitted += 1
                if depth:
                    push((t, b, c, d, 1, depth))
        if last != 2 and fixed != 2:
            t = s2 - 3 * b
            if 0 < t <= bound:
                bits[t >> 3] |= 1 << (t & 7)
                emitted += 1
                if depth:
                    push((a, t, c, d, 2, depth))
        if last != 3 and fixed != 3:
            t = s2 - 3 * c
            if 0 < t <= bound:
                bits[t >> 3] |= 1 << (t & 7)
                emitted += 1
                if depth:
                    push((a, b, t, d, 3, depth))
        if last != 4 and fixed != 4:
            t = s2 - 3 * d
            if 0 < t <= bound:
                bits[t >> 3] |= 1 << (t & 7)
                emitted += 1
                if depth:
                    push((a, b, c, t, 4, depth))
    return emitted


def region_fill(
    a_coef: int,
    b2_coef: int,
    c_coef: int,
    shift: int,
    bound: int,
    coprime: int,
    nonneg: int,
    bits: bytearray,
) -> int:
    """Mark all values f(x,y) - shift in [1, bound] of a positive definite form.

    f(x,y) = a*x^2 + b2*x*y + c*y^2 with b2 even.  Enumeration bounds come
    from a*f = (a*x + B*y)^2 + (a*c - B^2)*y^2 with B = b2/2, widened by one
    lattice step on each side; every candidate is checked exactly, so the
    widening cannot over-mark.  nonneg restricts to x, y >= 0; otherwise one
    representative per {±(x,y)} orbit is visited.  Returns the number of
    lattice points visited.
    """
    B = b2_coef >> 1
    d2 = a_coef * c_coef - B * B
    m = bound + shift
    if m < 1 or bound < 1:
        return 0
    am = a_coef * m
    visited = 0
    ylim = isqrt(am // d2) + 1
    for y in range(0, ylim + 1):
        rem = am - d2 * y * y
        if rem < 0:
            break
        s = isqrt(rem)
        xlo = -((s + B * y) // a_coef) - 1
        xhi = (s - B * y) // a_coef + 1
        if nonneg:
            if xlo < 0:
                xlo = 0
        elif y == 0:
            xlo = max(xlo, 1)
        if xhi < xlo:
            continue
        # incremental evaluation: f(x+1,y) - f(x,y) = a*(2x+1) + b2*y
        f = a_coef * xlo * xlo + b2_coef * xlo * y + c_coef * y * y
        step = a_coef * (2 * xlo + 1) + b2_coef * y
        two_a = 2 * a_coef
        for x in range(xlo, xhi + 1):
            visited += 1
            v = f - shift
            if 1 <= v <= bound and not (x == 0 and y == 0):
                if not coprime or gcd(x if x >= 0 else -x, y) == 1:
                    bits[v >> 3] |= 1 << (v & 7)
            f += step
            step += two_a
    return visited
