# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled enumeration kernels.

Same contracts as _kernels_py (the pure-Python reference); selected by
backend.py when built.  Inputs are pre-validated by the callers to fit
int64: orbit coordinates stay below 8x the 2^31 universe cap, and region
fills are routed here only when a*(bound+shift) < 2^62.
"""

from libc.stdlib cimport free, malloc, realloc
from libc.math cimport sqrt

ctypedef long long i64

UNLIMITED = 1 << 62


cdef inline i64 _isqrt(i64 n) noexcept nogil:
    if n <= 0:
        return 0
    cdef i64 r = <i64>sqrt(<double>n)
    while r > 0 and r * r > n:
        r -= 1
    while (r + 1) * (r + 1) <= n:
        r += 1
    return r


cdef inline i64 _gcd(i64 a, i64 b) noexcept nogil:
    cdef i64 t
    if a < 0:
        a = -a
    if b < 0:
        b = -b
    while b:
        t = a % b
        a = b
        b = t
    return a


cdef inline i64 _fdiv(i64 a, i64 b) noexcept nogil:
    # Python floor division for b > 0 (C division truncates toward zero)
    cdef i64 q = a / b
    if a % b != 0 and a < 0:
        q -= 1
    return q


cdef i64 _orbit_fill(i64 a0, i64 b0, i64 c0, i64 d0, i64 last0, i64 bound,
                     i64 fixed, i64 depth0, unsigned char* bits) noexcept nogil:
    cdef i64 cap = 4096
    cdef i64* st = <i64*>malloc(cap * 6 * sizeof(i64))
    cdef i64* grown
    if st == NULL:
        return -1
    cdef i64 top = 1
    st[0] = a0; st[1] = b0; st[2] = c0; st[3] = d0; st[4] = last0; st[5] = depth0
    cdef i64 emitted = 0
    cdef i64 a, b, c, d, last, depth, s2, t, base
    while top:
        top -= 1
        base = top * 6
        a = st[base]; b = st[base + 1]; c = st[base + 2]; d = st[base + 3]
        last = st[base + 4]; depth = st[base + 5]
        s2 = (a + b + c + d) * 2
        depth -= 1
        if top + 4 > cap:
            cap *= 2
            grown = <i64*>realloc(st, cap * 6 * sizeof(i64))
            if grown == NULL:
                free(st)
                return -1
            st = grown
        if last != 1 and fixed != 1:
            t = s2 - 3 * a
            if 0 < t <= bound:
                bits[t >> 3] |= <unsigned char>(1 << (t & 7))
                emitted += 1
                if depth:
                    base = top * 6
                    st[base] = t; st[base + 1] = b; st[base + 2] = c; st[base + 3] = d
                    st[base + 4] = 1; st[base + 5] = depth
                    top += 1
        if last != 2 and fixed != 2:
            t = s2 - 3 * b
            if 0 < t <= bound:
                bits[t >> 3] |= <unsigned char>(1 << (t & 7))
                emitted += 1
                if depth:
                    base = top * 6
                    st[base] = a; st[base + 1] = t; st[base + 2] = c; st[base + 3] = d
                    st[base + 4] = 2; st[base + 5] = depth
                    top += 1
        if last != 3 and fixed != 3:
            t = s2 - 3 * c
            if 0 < t <= bound:
                bits[t >> 3] |= <unsigned char>(1 << (t & 7))
                emitted += 1
                if depth:
                    base = top * 6
                    st[base] = a; st[base + 1] = b; st[base + 2] = t; st[base + 3] = d
                    st[base + 4] = 3; st[base + 5] = depth
                    top += 1
        if last != 4 and fixed != 4:
            t = s2 - 3 * d
            if 0 < t <= bound:
                bits[t >> 3] |= <unsigned char>(1 << (t & 7))
                emitted += 1
                if depth:
                    base = top * 6
                    st[base] = a; st[base + 1] = b; st[base + 2] = c; st[base + 3] = t
                    st[base + 4] = 4; st[base + 5] = depth
                    top += 1
    free(st)
    return emitted


def orbit_fill(x1, x2, x3, x4, last, bound, fixed, depth_left, bits):
    """Non-backtracking descent below one orbit node; see _kernels_py.orbit_fill."""
    cdef i64 depth = depth_left
    if depth < 0:
        depth = UNLIMITED
    if depth == 0:
        return 0
    cdef unsigned char[::1] view = bits
    cdef i64 out
    cdef i64 ca = x1, cb = x2, cc = x3, cd = x4
    cdef i64 clast = last, cbound = bound, cfixed = fixed
    with nogil:
        out = _orbit_fill(ca, cb, cc, cd, clast, cbound, cfixed, depth, &view[0])
    if out < 0:
        raise MemoryError("orbit stack allocation failed")
    return out


cdef i64 _region_fill(i64 a, i64 b2, i64 c, i64 shift, i64 bound,
                      bint coprime, bint nonneg, unsigned char* bits) noexcept nogil:
    cdef i64 B = b2 >> 1
    cdef i64 d2 = a * c - B * B
    cdef i64 m = bound + shift
    if m < 1 or bound < 1:
        return 0
    cdef i64 am = a * m
    cdef i64 visited = 0
    cdef i64 ylim = _isqrt(am / d2) + 1
    cdef i64 y, rem, s, xlo, xhi, f, step, two_a, x, v, ax
    for y in range(0, ylim + 1):
        rem = am - d2 * y * y
        if rem < 0:
            break
        s = _isqrt(rem)
        xlo = -_fdiv(s + B * y, a) - 1
        xhi = _fdiv(s - B * y, a) + 1
        if nonneg:
            if xlo < 0:
                xlo = 0
        elif y == 0:
            if xlo < 1:
                xlo = 1
        if xhi < xlo:
            continue
        f = a * xlo * xlo + b2 * xlo * y + c * y * y
        step = a * (2 * xlo + 1) + b2 * y
        two_a = 2 * a
        for x in range(xlo, xhi + 1):
            visited += 1
            v = f - shift
            if 1 <= v <= bound and not (x == 0 and y == 0):
                if not coprime or _gcd(x, y) == 1:
                    bits[v >> 3] |= <unsigned char>(1 << (v & 7))
            f += step
            step += two_a
    return visited


def region_fill(a_coef, b2_coef, c_coef, shift, bound, coprime, nonneg, bits):
    """Mark values f(x,y) - shift in [1, bound]; see _kernels_py.region_fill."""
    cdef unsigned char[::1] view = bits
    cdef i64 out
    cdef i64 a = a_coef, b2 = b2_coef, c = c_coef, s = shift, bd = bound
    cdef bint cop = coprime, nn = nonneg
    with nogil:
        out = _region_fill(a, b2, c, s, bd, cop, nn, &view[0])
    return out
