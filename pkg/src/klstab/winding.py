"""Winding number of the origin for closed sampled curves, plus the refinement rule.

The index is accumulated by exact quadrant bookkeeping: each consecutive pair
contributes its signed quadrant-boundary crossing count (0, +-1, or +-2 with
the half-plane cross-product sign test deciding the ambiguous opposite-quadrant
case).  The total is 4x the winding number of the sample polygon, with no
floating-point argument accumulation to drift.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import OriginOnCurve

ORIGIN_EPS = 1e-300
QUARTER_TURN = math.pi / 2.0
PROXIMITY_FLOOR = 1e-12
PROXIMITY_FRACTION = 0.1


@dataclass(frozen=True)
class WindingResult:
    """Index of the origin, the closest sample, and segment certification."""

    index: int
    min_distance: float
    certified: bool


def _quadrant(re: float, im: float) -> int:
    if re > 0 and im >= 0:
        return 0
    if re <= 0 and im > 0:
        return 1
    if re < 0 and im <= 0:
        return 2
    return 3


def _segment_distance_to_origin(a: complex, b: complex) -> float:
    dx, dy = b.real - a.real, b.imag - a.imag
    denom = dx * dx + dy * dy
    if denom == 0.0:
        return abs(a)
    t = -(a.real * dx + a.imag * dy) / denom
    t = min(1.0, max(0.0, t))
    return abs(complex(a.real + t * dx, a.imag + t * dy))


def needs_refinement(a: complex, b: complex) -> bool:
    """True when the segment a -> b cannot be trusted by the quadrant bookkeeping.

    Either the argument change strictly exceeds a quarter turn, or the segment
    passes within max(1e-12, 0.1 * min(|a|, |b|)) of the origin.
    """
    a, b = complex(a), complex(b)
    if abs(a) == 0.0 or abs(b) == 0.0:
        return True
    cross = a.real * b.imag - a.imag * b.real
    dot = a.real * b.real + a.imag * b.imag
    if abs(math.atan2(cross, dot)) > QUARTER_TURN:
        return True
    threshold = max(PROXIMITY_FLOOR, PROXIMITY_FRACTION * min(abs(a), abs(b)))
    return _segment_distance_to_origin(a, b) < threshold


def winding_number(samples) -> WindingResult:
    """Winding number of the origin for the closed polygon through ``samples``.

    The last sample connects back to the first.  Raises OriginOnCurve when a
    sample (modulus below 1e-300) or a segment passes exactly through 0.
    ``certified`` is True when every segment satisfies the refinement predicate,
    in which case the polygon index equals the underlying curve's index.
    """
    pts = [complex(v) for v in samples]
    if len(pts) < 2:
        raise ValueError("need at least 2 samples")
    min_dist = math.inf
    for v in pts:
        m = abs(v)
        if m < ORIGIN_EPS:
            raise OriginOnCurve(f"sample at {v} is numerically the origin")
        min_dist = min(min_dist, m)

    total = 0
    certified = True
    n = len(pts)
    for i in range(n):
        a, b = pts[i], pts[(i + 1) % n]
        if needs_refinement(a, b):
            certified = False
        d = (_quadrant(b.real, b.imag) - _quadrant(a.real, a.imag)) % 4
        if d == 0:
            continue
        if d == 1:
            total += 1
        elif d == 3:
            total -= 1
        else:
            cross = a.real * b.imag - a.imag * b.real
            if cross == 0.0:
                raise OriginOnCurve(f"segment {a} -> {b} passes through the origin")
            total += 2 if cross > 0 else -2
    assert total % 4 == 0, "quadrant transitions must telescope to a multiple of 4"
    return WindingResult(index=total // 4, min_distance=min_dist, certified=certified)
