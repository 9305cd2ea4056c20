"""Angle vectors on the constrained simplex and exact polygon measurements.

A polygon tied to a circle of radius R is described by the half central
angles (theta_1, ..., theta_n), each in the open interval (0, pi/2), summing
to pi. For a tangential polygon (circumscribed about the circle) the angles
sit at the vertices and

    L = 2 R sum tan(theta_i),   A = R^2 sum tan(theta_i),

so A = R L / 2 exactly. For a cyclic polygon (inscribed in the circle) the
angles are subtended by the sides and

    L = 2 R sum sin(theta_i),   A = R^2 sum sin(theta_i) cos(theta_i).

The regular counterpart shares the circle: L* = 2 n R tan(pi/n) or
2 n R sin(pi/n), likewise for A*. The isoperimetric deficit is
L^2 - 4 d_n A with d_n = n tan(pi/n); it is nonnegative and vanishes
exactly for the regular polygon.

Everything here is immutable after construction and every operation is a
pure function of its inputs plus an explicit seed, so concurrent use needs
no locking.
"""

from __future__ import annotations

import hashlib
import math
import struct
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import (
    DomainViolation,
    EmptyInput,
    InvalidN,
    OutOfDomain,
    RejectionBudgetExceeded,
    SumMismatch,
)

#: Open-interval bound for all geometric angle families: theta in (0, pi/2).
GEOMETRIC_BOUND = math.pi / 2

#: Default clearance from the interval endpoints; keeps tan(theta) bounded.
DEFAULT_MARGIN = 1e-6

#: Relative tolerance on the angle-sum constraint.
SUM_RTOL = 1e-12

#: Rejection sampling draws at most this many candidates per point.
DEFAULT_DRAW_CAP = 500

# Fixed draw chunk so the RNG stream does not depend on call pattern.
_CHUNK = 128


class PolygonKind(str, Enum):
    TANGENTIAL = "tangential"  # circumscribed about the circle
    CYCLIC = "cyclic"          # inscribed in the circle


@dataclass(frozen=True)
class AngleVector:
    """n angles in an open interval whose sum is pinned to ``total``.

    The mean sigma = total / n is always derived, never stored.
    Construct through :func:`make_angle_vector` or :func:`regular_angles`
    so the invariants are checked.
    """

    values: tuple[float, ...]
    total: float

    @property
    def n(self) -> int:
        return len(self.values)

    @property
    def sigma(self) -> float:
        return self.total / len(self.values)

    def to_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)

    def max_deviation(self) -> float:
        """max |theta_i - sigma|, the distance from the regular point."""
        s = self.sigma
        return max(abs(v - s) for v in self.values)

    def angle_hash(self) -> str:
        """Stable 16-hex-digit fingerprint of the exact float values."""
        packed = b"".join(struct.pack("<d", v) for v in self.values)
        return hashlib.sha256(packed).hexdigest()[:16]


def make_angle_vector(
    values, total: float, bound: float = GEOMETRIC_BOUND
) -> AngleVector:
    """Validate ``values`` as a point of the constrained open simplex.

    Each value must lie strictly inside (0, bound) and the sum must match
    ``total`` within 1e-12 relative.

    Raises EmptyInput, OutOfDomain (with the offending index), SumMismatch.
    """
    vals = tuple(float(v) for v in values)
    if not vals:
        raise EmptyInput("angle vector needs at least one value")
    for i, v in enumerate(vals):
        if not (0.0 < v < bound) or not math.isfinite(v):
            raise OutOfDomain(
                f"angle {v!r} at index {i} outside open interval (0, {bound!r})",
                index=i,
            )
    total = float(total)
    if abs(math.fsum(vals) - total) > SUM_RTOL * abs(total):
        raise SumMismatch(
            f"sum {math.fsum(vals)!r} does not match declared total {total!r}"
        )
    return AngleVector(values=vals, total=total)


def regular_angles(n: int, total: float, bound: float = GEOMETRIC_BOUND) -> AngleVector:
    """The barycenter (sigma, ..., sigma) of the constrained simplex."""
    if n < 2:
        raise InvalidN(f"need n >= 2, got {n}")
    sigma = float(total) / n
    if not (0.0 < sigma < bound):
        raise DomainViolation(
            f"mean angle {sigma!r} is not interior to (0, {bound!r})"
        )
    return AngleVector(values=(sigma,) * n, total=float(total))


def dn(n: int) -> float:
    """Polygon isoperimetric constant n * tan(pi/n).

    Strictly decreasing in n; tends to pi from above as n grows.
    """
    if n < 3:
        raise InvalidN(f"polygon constant needs n >= 3, got {n}")
    return n * math.tan(math.pi / n)


@dataclass(frozen=True)
class PolygonModel:
    """A tangential or cyclic polygon: kind, circle radius, half angles."""

    kind: PolygonKind
    radius: float
    angles: AngleVector

    def __post_init__(self):
        if not (self.radius > 0.0 and math.isfinite(self.radius)):
            raise DomainViolation(f"radius must be positive, got {self.radius!r}")
        if abs(self.angles.total - math.pi) > SUM_RTOL * math.pi:
            raise SumMismatch(
                f"polygon angles must sum to pi, declared total is {self.angles.total!r}"
            )


@dataclass(frozen=True)
class GeometricSummary:
    """Perimeter, area, regular-counterpart values and the deficit."""

    perimeter: float
    area: float
    regular_perimeter: float
    regular_area: float
    dn: float
    deficit: float


def measure(p: PolygonModel) -> GeometricSummary:
    """Exact closed-form perimeter/area for the polygon and its regular twin."""
    out = measure_arrays(p.kind, p.radius, p.angles.to_array()[None, :])
    return GeometricSummary(
        perimeter=float(out["L"][0]),
        area=float(out["A"][0]),
        regular_perimeter=float(out["Lstar"]),
        regular_area=float(out["Astar"]),
        dn=float(out["dn"]),
        deficit=float(out["deficit"][0]),
    )


def measure_arrays(kind: PolygonKind, radius: float, angles: np.ndarray) -> dict:
    """Vectorized measurement over a batch of angle rows.

    ``angles`` has shape (m, n); returns per-row arrays L, A, deficit plus
    the shared scalars Lstar, Astar, dn. Used by the catalog sweeps and the
    grid oracle; :func:`measure` is the single-polygon wrapper.
    """
    angles = np.asarray(angles, dtype=float)
    m, n = angles.shape
    if n < 3:
        raise InvalidN(f"geometric measurement needs n >= 3, got {n}")
    d = dn(n)
    r2 = radius * radius
    if kind == PolygonKind.TANGENTIAL:
        s = np.tan(angles).sum(axis=1)
        L = 2.0 * radius * s
        A = r2 * s
        Lstar = 2.0 * n * radius * math.tan(math.pi / n)
        Astar = n * r2 * math.tan(math.pi / n)
    else:
        sin = np.sin(angles)
        L = 2.0 * radius * sin.sum(axis=1)
        A = r2 * (sin * np.cos(angles)).sum(axis=1)
        Lstar = 2.0 * n * radius * math.sin(math.pi / n)
        Astar = n * r2 * math.sin(math.pi / n) * math.cos(math.pi / n)
    deficit = L * L - 4.0 * d * A
    return {"L": L, "A": A, "Lstar": Lstar, "Astar": Astar, "dn": d, "deficit": deficit}


def _check_margin_window(n: int, total: float, margin: float, bound: float) -> None:
    if n < 2:
        raise InvalidN(f"need n >= 2, got {n}")
    if not (margin > 0.0):
        raise DomainViolation(f"margin must be positive, got {margin!r}")
    sigma = total / n
    if not (margin < sigma < bound - margin):
        raise DomainViolation(
            f"mean angle {sigma!r} not inside margin window "
            f"({margin!r}, {bound - margin!r}); margin infeasible"
        )


def sample_simplex(
    n: int,
    total: float,
    margin: float,
    seed: int,
    bound: float = GEOMETRIC_BOUND,
    max_draws: int = DEFAULT_DRAW_CAP,
) -> AngleVector:
    """One uniform point of the scaled simplex, margin-respecting.

    Draws symmetric Dirichlet(1, ..., 1) weights rescaled to ``total`` and
    rejects until every coordinate lies in (margin, bound - margin).
    Deterministic given ``seed``. Raises RejectionBudgetExceeded after
    ``max_draws`` candidates, which signals the margin window is too tight.
    """
    _check_margin_window(n, total, margin, bound)
    rng = np.random.default_rng(seed)
    drawn = 0
    while drawn < max_draws:
        count = min(_CHUNK, max_draws - drawn)
        cand = rng.dirichlet(np.ones(n), size=count) * total
        ok = ((cand > margin) & (cand < bound - margin)).all(axis=1)
        hits = np.nonzero(ok)[0]
        if hits.size:
            row = cand[hits[0]]
            return AngleVector(values=tuple(float(v) for v in row), total=float(total))
        drawn += count
    raise RejectionBudgetExceeded(
        f"no sample with all coordinates in ({margin!r}, {bound - margin!r}) "
        f"after {max_draws} draws"
    )


def sample_simplex_batch(
    n: int,
    total: float,
    margin: float,
    count: int,
    seed: int,
    bound: float = GEOMETRIC_BOUND,
) -> np.ndarray:
    """``count`` independent simplex points as a (count, n) array.

    Same distribution and margin rule as :func:`sample_simplex`; the batch
    is deterministic given (seed, count). The draw budget scales with the
    request so a feasible margin never spuriously fails.
    """
    _check_margin_window(n, total, margin, bound)
    if count < 1:
        raise DomainViolation(f"count must be >= 1, got {count}")
    rng = np.random.default_rng(seed)
    rows = []
    have = 0
    budget = max(10_000, 64 * count)
    drawn = 0
    while have < count:
        if drawn >= budget:
            raise RejectionBudgetExceeded(
                f"accepted only {have}/{count} samples after {drawn} draws"
            )
        size = min(max(_CHUNK, count - have), 65536)
        cand = rng.dirichlet(np.ones(n), size=size) * total
        ok = ((cand > margin) & (cand < bound - margin)).all(axis=1)
        good = cand[ok]
        if good.shape[0]:
            rows.append(good[: count - have])
            have += min(good.shape[0], count - have)
        drawn += size
    return np.vstack(rows)
