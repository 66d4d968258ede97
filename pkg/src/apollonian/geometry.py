"""Circle placements and SVG rendering for bounded packings.

Uses the complex form of the Descartes relation: if four mutually tangent
circles have curvatures k_i and centres z_i (as complex numbers), the
products w_i = k_i * z_i satisfy the same quadratic as the curvatures, and
a generator application updates (k_i, w_i) simultaneously by the same
2*sum - 3*self rule.  Geometry is float diagnostics only; it never feeds
the integer counts.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

from .errors import ValidationError
from .quadruple import _as_quadruple, evaluate_descartes, is_reduced


@dataclass(frozen=True)
class CirclePlacement:
    center: complex
    radius: float
    curvature: int
    word_length: int

    def tangency_gap(self, other: "CirclePlacement") -> float:
        """Distance from exact tangency, relative: 0 means exactly tangent."""
        d = abs(self.center - other.center)
        ext = abs(d - (self.radius + other.radius))
        internal = abs(d - abs(self.radius - other.radius))
        scale = max(self.radius, other.radius)
        return min(ext, internal) / scale


def _initial_placement(root) -> tuple[list[complex], list[complex]]:
    """Centres and curvature*centre products for the four root circles."""
    k = list(root)
    rho = [1.0 / x for x in k]  # signed radii; bounding circle negative
    z = [0j, 0j, 0j, 0j]
    z[0] = 0j
    d12 = abs(rho[0] + rho[1])
    z[1] = complex(d12, 0.0)
    # circle 3 from its tangency distances to circles 1 and 2
    d13 = abs(rho[0] + rho[2])
    d23 = abs(rho[1] + rho[2])
    x = (d13 * d13 + d12 * d12 - d23 * d23) / (2 * d12)
    y2 = d13 * d13 - x * x
    z[2] = complex(x, math.sqrt(max(y2, 0.0)))
    # circle 4 from the complex Descartes relation, sign fixed by tangency
    w = [k[i] * z[i] for i in range(3)]
    s = w[0] + w[1] + w[2]
    rad = cmath.sqrt(w[0] * w[1] + w[0] * w[2] + w[1] * w[2])
    best = None
    for sign in (1, -1):
        z4 = (s + 2 * sign * rad) / k[3]
        err = max(
            abs(abs(z4 - z[i]) - abs(rho[3] + rho[i])) for i in range(3)
        )
        if best is None or err < best[0]:
            best = (err, z4)
    z[3] = best[1]
    return z, [k[i] * z[i] for i in range(4)]


def layout_packing(root: Sequence[int], depth: int) -> list[CirclePlacement]:
    """Placements of every circle reachable by words of length <= depth.

    The root must be a reduced bounded-packing quadruple (one negative
    curvature, no zeros).  Circle count is 4 + sum_{j<=depth} 4*3^(j-1).
    """
    v = _as_quadruple(root)
    if evaluate_descartes(v) != 0:
        raise ValidationError("not a Descartes quadruple")
    if not is_reduced(v):
        raise ValidationError("root must be reduced")
    if depth < 0:
        raise ValidationError("depth must be >= 0")
    if min(v) >= 0 or any(x == 0 for x in v):
        raise ValidationError("layout requires a bounded packing root (one negative, no zeros)")

    z, w = _initial_placement(v)
    placements = [
        CirclePlacement(z[i], 1.0 / abs(v[i]), v[i], 0) for i in range(4)
    ]
    frontier = [(v, tuple(w), 0)]
    for level in range(1, depth + 1):
        nxt = []
        for node, wvec, last in frontier:
            s2k = 2 * sum(node)
            s2w = 2 * sum(wvec)
            for i in (1, 2, 3, 4):
                if i == last:
                    continue
                tk = s2k - 3 * node[i - 1]
                tw = s2w - 3 * wvec[i - 1]
                child = node[: i - 1] + (tk,) + node[i:]
                cw = wvec[: i - 1] + (tw,) + wvec[i:]
                placements.append(CirclePlacement(tw / tk, 1.0 / abs(tk), tk, level))
                nxt.append((child, cw, i))
        frontier = nxt
    return placements


def svg_document(placements: Sequence[CirclePlacement], margin: float = 0.02) -> str:
    """Stroke-only SVG, one <circle> per placement, viewBox on the bounding circle."""
    if not placements:
        raise ValidationError("no circles to render")
    bounding = max(placements, key=lambda p: p.radius)
    r = bounding.radius * (1 + margin)
    cx, cy = bounding.center.real, bounding.center.imag
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" '
        f'viewBox="{cx - r:.6f} {cy - r:.6f} {2 * r:.6f} {2 * r:.6f}">',
    ]
    stroke = bounding.radius / 400.0
    for p in placements:
        lines.append(
            f'<circle cx="{p.center.real:.9f}" cy="{p.center.imag:.9f}" '
            f'r="{p.radius:.9f}" fill="none" stroke="black" stroke-width="{stroke:.9f}"/>'
        )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
