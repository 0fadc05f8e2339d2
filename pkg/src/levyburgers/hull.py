"""Upper concave majorant of a finite point cloud.

The majorant is the minimal concave function dominating the points; its
vertex chain is computed by a single left-to-right monotone-chain pass.
Slope queries expose the left/right derivative, with +/-inf sentinels at
the chain ends where the majorant is unconstrained by the data.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InputError, OutOfDomainError

# Collinearity threshold: triples whose cross product is below
# COLLINEAR_RTOL times the largest coordinate magnitude in the triple are
# flattened, keeping the extreme points of each collinear run.  Avoids
# slope-tie vertices that would break strict slope monotonicity.
COLLINEAR_RTOL = 1e-12


@dataclass(frozen=True)
class ConcaveMajorant:
    """Vertex/slope representation of an upper concave hull.

    ``ys``/``vs`` are the vertex coordinates (ys strictly increasing),
    ``indices`` the positions of the vertices in the input cloud, and
    ``slopes`` the strictly decreasing edge slopes (length m-1).
    """

    ys: np.ndarray
    vs: np.ndarray
    indices: np.ndarray
    slopes: np.ndarray = field(init=False)

    def __post_init__(self):
        with np.errstate(divide="ignore"):
            s = np.diff(self.vs) / np.diff(self.ys)
        object.__setattr__(self, "slopes", s)

    def __len__(self) -> int:
        return len(self.ys)

    def left_slope(self, k: int) -> float:
        """Slope of the edge entering vertex k (+inf at the first vertex)."""
        return float(self.slopes[k - 1]) if k > 0 else np.inf

    def right_slope(self, k: int) -> float:
        """Slope of the edge leaving vertex k (-inf at the last vertex)."""
        return float(self.slopes[k]) if k < len(self.ys) - 1 else -np.inf


def _cross(y1, v1, y2, v2, y3, v3) -> float:
    """Cross product of (p2-p1, p3-p1); negative iff p2 lies strictly
    above the chord p1-p3 (a concave triple)."""
    return (y2 - y1) * (v3 - v1) - (v2 - v1) * (y3 - y1)


def upper_concave_majorant(
    points: list[tuple[float, float]] | np.ndarray,
) -> ConcaveMajorant:
    """Vertex chain of the upper concave hull of points sorted by y.

    Needs >= 2 points with strictly increasing y (collapse duplicate y to
    the max v beforehand).  Single monotone-chain pass, amortized O(n);
    interior points collinear with their neighbors are removed.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 2:
        raise InputError("need at least 2 points of shape (n, 2)")
    ys, vs = pts[:, 0], pts[:, 1]
    if np.any(np.diff(ys) <= 0):
        raise InputError("y coordinates must be strictly increasing")

    stack: list[int] = []
    for j in range(len(ys)):
        while len(stack) >= 2:
            i1, i2 = stack[-2], stack[-1]
            c = _cross(ys[i1], vs[i1], ys[i2], vs[i2], ys[j], vs[j])
            scale = max(
                abs(ys[i1]), abs(ys[i2]), abs(ys[j]),
                abs(vs[i1]), abs(vs[i2]), abs(vs[j]),
            )
            # pop the middle point if it is below the chord or collinear
            if c >= -COLLINEAR_RTOL * scale:
                stack.pop()
            else:
                break
        stack.append(j)

    idx = np.asarray(stack, dtype=np.intp)
    return ConcaveMajorant(ys=ys[idx], vs=vs[idx], indices=idx)


def query(cm: ConcaveMajorant, y: float) -> tuple[float, float, float]:
    """(value, left slope, right slope) of the majorant at y.

    Value by linear interpolation; at a vertex the two slopes are the
    incoming/outgoing edge slopes (+/-inf sentinels at the chain ends); at
    an edge-interior point both equal the edge slope.  Binary search,
    O(log m).  Raises OutOfDomainError outside [ys[0], ys[-1]].
    """
    ys = cm.ys
    if y < ys[0] or y > ys[-1]:
        raise OutOfDomainError(f"{y} outside the hull domain [{ys[0]}, {ys[-1]}]")
    k = int(np.searchsorted(ys, y))
    if k < len(ys) and ys[k] == y:
        return float(cm.vs[k]), cm.left_slope(k), cm.right_slope(k)
    # interior of edge (k-1, k)
    s = float(cm.slopes[k - 1])
    val = float(cm.vs[k - 1] + s * (y - ys[k - 1]))
    return val, s, s
