"""Registry of the geometric slack inequalities over circle polygons.

Each entry maps a displayed inequality to a signed slack evaluator over a
PolygonModel: slack = lhs - rhs for >= entries, rhs - lhs for <= entries,
so nonnegative slack always means the inequality holds as stated, with
equality exactly at the regular polygon. Entries carry the polygon kind
they apply to, their legal (alpha, k) parameter set, a display-style
citation anchor and the power of R that scales the slack (None when the
two sides scale differently, which happens for the perimeter-power
reverse bound with k > 2).

The catalog is immutable after import; evaluations are pure functions, so
parallel evaluation is safe. Entry ids and citation strings are part of
the stable report schema.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from . import highprec
from .analytic_inequalities import Direction
from .errors import KindMismatch, ParamOutOfDomain, UnknownId
from .polygon_core import PolygonKind, PolygonModel, measure_arrays
from .records import EQUALITY_RTOL, SlackRecord, scale_tolerance

log = logging.getLogger(__name__)

BOTH_KINDS = frozenset({PolygonKind.TANGENTIAL, PolygonKind.CYCLIC})
TANGENTIAL_ONLY = frozenset({PolygonKind.TANGENTIAL})
CYCLIC_ONLY = frozenset({PolygonKind.CYCLIC})


@dataclass(frozen=True)
class EvalContext:
    """Measured quantities one slack formula needs; float, array or mpf."""

    n: int
    R: object
    L: object
    A: object
    Lstar: object
    Astar: object
    dn: object
    tan_pin: object
    cos_pin: object

    @property
    def L_hat(self):
        return self.L / (2 * self.R)

    @property
    def Lstar_hat(self):
        return self.Lstar / (2 * self.R)

    @property
    def A_hat(self):
        return self.A / (self.R * self.R)

    @property
    def Astar_hat(self):
        return self.Astar / (self.R * self.R)


@dataclass(frozen=True)
class ParamSpec:
    """Legal (alpha, k) set for one entry.

    Free parameters accept any positive integer (k >= 2); fixed parameters
    pin a specialization; unused parameters must stay absent.
    """

    uses_alpha: bool = False
    uses_k: bool = False
    alpha_fixed: int | None = None
    k_fixed: int | None = None

    def validate(self, alpha, k) -> tuple[int | None, int | None]:
        if not self.uses_alpha:
            if alpha is not None:
                raise ParamOutOfDomain("entry takes no alpha")
            a = None
        elif self.alpha_fixed is not None:
            a = self.alpha_fixed if alpha is None else alpha
            if a != self.alpha_fixed:
                raise ParamOutOfDomain(
                    f"entry fixes alpha = {self.alpha_fixed}, got {alpha!r}"
                )
        else:
            a = 1 if alpha is None else alpha
            if not isinstance(a, (int, np.integer)) or a < 1:
                raise ParamOutOfDomain(f"alpha must be a positive integer, got {alpha!r}")
            a = int(a)
        if not self.uses_k:
            if k is not None:
                raise ParamOutOfDomain("entry takes no k")
            kk = None
        elif self.k_fixed is not None:
            kk = self.k_fixed if k is None else k
            if kk != self.k_fixed:
                raise ParamOutOfDomain(f"entry fixes k = {self.k_fixed}, got {k!r}")
        else:
            kk = 2 if k is None else k
            if not isinstance(kk, (int, np.integer)) or kk < 2:
                raise ParamOutOfDomain(f"k must be an integer >= 2, got {k!r}")
            kk = int(kk)
        return a, kk

    def combos(self, alpha_set: Iterable[int], k_set: Iterable[int]) -> list[tuple]:
        """Legal (alpha, k) pairs for a sweep grid, deterministic order.

        Fixed parameters contribute their pinned value regardless of the
        grid; free parameters range over the sorted grid values.
        """
        if not self.uses_alpha:
            alphas = [None]
        elif self.alpha_fixed is not None:
            alphas = [self.alpha_fixed]
        else:
            alphas = sorted({int(a) for a in alpha_set if int(a) >= 1})
        if not self.uses_k:
            ks = [None]
        elif self.k_fixed is not None:
            ks = [self.k_fixed]
        else:
            ks = sorted({int(k) for k in k_set if int(k) >= 2})
        return [(a, k) for a in alphas for k in ks]


@dataclass(frozen=True)
class CatalogEntry:
    """One displayed inequality: formulas, kind, parameters, metadata."""

    id: str
    citation: str
    kinds: frozenset
    direction: Direction
    params: ParamSpec
    formula: str
    lhs: Callable  # (ctx, alpha, k) -> value
    rhs: Callable
    terms: Callable  # (ctx, alpha, k) -> tuple of top-level magnitudes
    homogeneity_fn: Callable = None  # (alpha, k) -> int | None

    def homogeneity_degree(self, alpha=None, k=None) -> int | None:
        """Power of R scaling the slack; None when the sides scale apart."""
        a, kk = self.params.validate(alpha, k)
        return self.homogeneity_fn(a, kk)

    def applies_to(self, kind: PolygonKind) -> bool:
        return kind in self.kinds


def _deficit_lhs(ctx, a):
    return ctx.L ** (2 * a) - (4 * ctx.dn * ctx.A) ** a


def _dimless_lhs(ctx, a):
    return ctx.A_hat ** (2 * a) - ctx.dn**a * ctx.L_hat**a


def _build_entries() -> tuple[CatalogEntry, ...]:
    free_a = ParamSpec(uses_alpha=True)
    free_ak = ParamSpec(uses_alpha=True, uses_k=True)
    no_params = ParamSpec()

    def fixed(a=None, k=None):
        return ParamSpec(
            uses_alpha=a is not None,
            uses_k=k is not None,
            alpha_fixed=a,
            k_fixed=k,
        )

    entries = [
        CatalogEntry(
            id="BASIC", citation="Eq. 1.2", kinds=BOTH_KINDS, direction=Direction.GE,
            params=no_params,
            formula="L^2 - 4*d_n*A >= 0",
            lhs=lambda c, a, k: c.L**2 - 4 * c.dn * c.A,
            rhs=lambda c, a, k: c.L * 0,
            terms=lambda c, a, k: (c.L**2, 4 * c.dn * c.A),
            homogeneity_fn=lambda a, k: 2,
        ),
        CatalogEntry(
            id="ZHANG97", citation="Eq. 1.4", kinds=CYCLIC_ONLY, direction=Direction.GE,
            params=no_params,
            formula="L^2 - 4*d_n*A >= (L* - L)^2",
            lhs=lambda c, a, k: c.L**2 - 4 * c.dn * c.A,
            rhs=lambda c, a, k: (c.Lstar - c.L) ** 2,
            terms=lambda c, a, k: (c.L**2, 4 * c.dn * c.A, (c.Lstar - c.L) ** 2),
            homogeneity_fn=lambda a, k: 2,
        ),
        CatalogEntry(
            id="T31A", citation="Eq. 3.1", kinds=TANGENTIAL_ONLY, direction=Direction.GE,
            params=free_a,
            formula="L^(2a) - 4^a*(d_n*A)^a >= (2*R*tan(pi/n))^a * (L^a - L*^a)",
            lhs=lambda c, a, k: _deficit_lhs(c, a),
            rhs=lambda c, a, k: (2 * c.R * c.tan_pin) ** a * (c.L**a - c.Lstar**a),
            terms=lambda c, a, k: (
                c.L ** (2 * a), (4 * c.dn * c.A) ** a,
                (2 * c.R * c.tan_pin) ** a * c.L**a,
                (2 * c.R * c.tan_pin) ** a * c.Lstar**a,
            ),
            homogeneity_fn=lambda a, k: 2 * a,
        ),
        CatalogEntry(
            id="T31B", citation="Eq. 3.2", kinds=TANGENTIAL_ONLY, direction=Direction.GE,
            params=free_a,
            formula="(A/R^2)^(2a) - d_n^a*(L/2R)^a >= tan(pi/n)^a * ((L/2R)^a - (L*/2R)^a)",
            lhs=lambda c, a, k: _dimless_lhs(c, a),
            rhs=lambda c, a, k: c.tan_pin**a * (c.L_hat**a - c.Lstar_hat**a),
            terms=lambda c, a, k: (
                c.A_hat ** (2 * a), c.dn**a * c.L_hat**a,
                c.tan_pin**a * c.L_hat**a, c.tan_pin**a * c.Lstar_hat**a,
            ),
            homogeneity_fn=lambda a, k: 0,
        ),
        CatalogEntry(
            id="C35", citation="Eq. 3.5", kinds=TANGENTIAL_ONLY, direction=Direction.GE,
            params=fixed(a=1),
            formula="L^2 - 4*d_n*A >= 2*R*tan(pi/n) * (L - L*)",
            lhs=lambda c, a, k: c.L**2 - 4 * c.dn * c.A,
            rhs=lambda c, a, k: 2 * c.R * c.tan_pin * (c.L - c.Lstar),
            terms=lambda c, a, k: (
                c.L**2, 4 * c.dn * c.A,
                2 * c.R * c.tan_pin * c.L, 2 * c.R * c.tan_pin * c.Lstar,
            ),
            homogeneity_fn=lambda a, k: 2,
        ),
        CatalogEntry(
            id="C36", citation="Eq. 3.6", kinds=TANGENTIAL_ONLY, direction=Direction.GE,
            params=fixed(a=1),
            formula="(A/R^2)^2 - d_n*(L/2R) >= tan(pi/n) * (L/2R - L*/2R)",
            lhs=lambda c, a, k: _dimless_lhs(c, 1),
            rhs=lambda c, a, k: c.tan_pin * (c.L_hat - c.Lstar_hat),
            terms=lambda c, a, k: (
                c.A_hat**2, c.dn * c.L_hat,
                c.tan_pin * c.L_hat, c.tan_pin * c.Lstar_hat,
            ),
            homogeneity_fn=lambda a, k: 0,
        ),
        CatalogEntry(
            id="T32A", citation="Eq. 3.7", kinds=TANGENTIAL_ONLY, direction=Direction.GE,
            params=free_a,
            formula="L^(2a) - 4^a*(d_n*A)^a >= 4^a*tan(pi/n)^a * (A^a - A*^a)",
            lhs=lambda c, a, k: _deficit_lhs(c, a),
            rhs=lambda c, a, k: (4 * c.tan_pin) ** a * (c.A**a - c.Astar**a),
            terms=lambda c, a, k: (
                c.L ** (2 * a), (4 * c.dn * c.A) ** a,
                (4 * c.tan_pin) ** a * c.A**a, (4 * c.tan_pin) ** a * c.Astar**a,
            ),
            homogeneity_fn=lambda a, k: 2 * a,
        ),
        CatalogEntry(
            id="T32B", citation="Eq. 3.8", kinds=TANGENTIAL_ONLY, direction=Direction.GE,
            params=free_a,
            formula="(A/R^2)^(2a) - d_n^a*(L/2R)^a >= tan(pi/n)^a * ((A/R^2)^a - (A*/R^2)^a)",
            lhs=lambda c, a, k: _dimless_lhs(c, a),
            rhs=lambda c, a, k: c.tan_pin**a * (c.A_hat**a - c.Astar_hat**a),
            terms=lambda c, a, k: (
                c.A_hat ** (2 * a), c.dn**a * c.L_hat**a,
                c.tan_pin**a * c.A_hat**a, c.tan_pin**a * c.Astar_hat**a,
            ),
            homogeneity_fn=lambda a, k: 0,
        ),
        CatalogEntry(
            id="CQX", citation="Eq. qx", kinds=TANGENTIAL_ONLY, direction=Direction.GE,
            params=fixed(a=1),
            formula="L^2 - 4*d_n*A >= 4*tan(pi/n) * (A - A*)",
            lhs=lambda c, a, k: c.L**2 - 4 * c.dn * c.A,
            rhs=lambda c, a, k: 4 * c.tan_pin * (c.A - c.Astar),
            terms=lambda c, a, k: (
                c.L**2, 4 * c.dn * c.A,
                4 * c.tan_pin * c.A, 4 * c.tan_pin * c.Astar,
            ),
            homogeneity_fn=lambda a, k: 2,
        ),
        CatalogEntry(
            id="CQC", citation="Eq. qc", kinds=TANGENTIAL_ONLY, direction=Direction.GE,
            params=fixed(a=1),
            formula="(A/R^2)^2 - d_n*(L/2R) >= tan(pi/n) * (A/R^2 - A*/R^2)",
            lhs=lambda c, a, k: _dimless_lhs(c, 1),
            rhs=lambda c, a, k: c.tan_pin * (c.A_hat - c.Astar_hat),
            terms=lambda c, a, k: (
                c.A_hat**2, c.dn * c.L_hat,
                c.tan_pin * c.A_hat, c.tan_pin * c.Astar_hat,
            ),
            homogeneity_fn=lambda a, k: 0,
        ),
        CatalogEntry(
            id="T41A", citation="Eq. 4.1", kinds=TANGENTIAL_ONLY, direction=Direction.LE,
            params=free_ak,
            formula="L^(2a) - (4*d_n*A)^a <= L^(ka) - L*^(ka)",
            lhs=lambda c, a, k: _deficit_lhs(c, a),
            rhs=lambda c, a, k: c.L ** (k * a) - c.Lstar ** (k * a),
            terms=lambda c, a, k: (
                c.L ** (2 * a), (4 * c.dn * c.A) ** a,
                c.L ** (k * a), c.Lstar ** (k * a),
            ),
            # Sides scale as R^(2a) and R^(ka): only k = 2 is homogeneous.
            homogeneity_fn=lambda a, k: 2 * a if k == 2 else None,
        ),
        CatalogEntry(
            id="T41B", citation="Eq. 4.2", kinds=TANGENTIAL_ONLY, direction=Direction.LE,
            params=free_ak,
            formula="(A/R^2)^(2a) - d_n^a*(L/2R)^a <= (L/2R)^(ka) - (L*/2R)^(ka)",
            lhs=lambda c, a, k: _dimless_lhs(c, a),
            rhs=lambda c, a, k: c.L_hat ** (k * a) - c.Lstar_hat ** (k * a),
            terms=lambda c, a, k: (
                c.A_hat ** (2 * a), c.dn**a * c.L_hat**a,
                c.L_hat ** (k * a), c.Lstar_hat ** (k * a),
            ),
            homogeneity_fn=lambda a, k: 0,
        ),
        CatalogEntry(
            id="C4A", citation="Eq. 4.3", kinds=TANGENTIAL_ONLY, direction=Direction.LE,
            params=fixed(a=1, k=3),
            formula="L^2 - 4*d_n*A <= L^3 - L*^3",
            lhs=lambda c, a, k: c.L**2 - 4 * c.dn * c.A,
            rhs=lambda c, a, k: c.L**3 - c.Lstar**3,
            terms=lambda c, a, k: (c.L**2, 4 * c.dn * c.A, c.L**3, c.Lstar**3),
            homogeneity_fn=lambda a, k: None,
        ),
        CatalogEntry(
            id="C4B", citation="Eq. 4.4", kinds=TANGENTIAL_ONLY, direction=Direction.LE,
            params=fixed(a=1, k=2),
            formula="(A/R^2)^2 - d_n*(L/2R) <= (L/2R)^2 - (L*/2R)^2",
            lhs=lambda c, a, k: _dimless_lhs(c, 1),
            rhs=lambda c, a, k: c.L_hat**2 - c.Lstar_hat**2,
            terms=lambda c, a, k: (
                c.A_hat**2, c.dn * c.L_hat, c.L_hat**2, c.Lstar_hat**2,
            ),
            homogeneity_fn=lambda a, k: 0,
        ),
        CatalogEntry(
            id="T42A", citation="Eq. 4.5", kinds=TANGENTIAL_ONLY, direction=Direction.LE,
            params=free_ak,
            formula="L^(2a) - 4^a*(d_n*A)^a <= 4^a/R^(2(k-1)a) * (A^(ka) - A*^(ka))",
            lhs=lambda c, a, k: _deficit_lhs(c, a),
            # Normalized to R = 1 via A/R^2 and rescaled by R^(2a): avoids the
            # 1/R^(2(k-1)a) division that amplifies roundoff for small R.
            rhs=lambda c, a, k: (4**a * c.R ** (2 * a))
            * (c.A_hat ** (k * a) - c.Astar_hat ** (k * a)),
            terms=lambda c, a, k: (
                c.L ** (2 * a), (4 * c.dn * c.A) ** a,
                (4**a * c.R ** (2 * a)) * c.A_hat ** (k * a),
                (4**a * c.R ** (2 * a)) * c.Astar_hat ** (k * a),
            ),
            homogeneity_fn=lambda a, k: 2 * a,
        ),
        CatalogEntry(
            id="T42B", citation="Eq. 4.6", kinds=TANGENTIAL_ONLY, direction=Direction.LE,
            params=free_ak,
            formula="(A/R^2)^(2a) - d_n^a*(L/2R)^a <= (A/R^2)^(ka) - (A*/R^2)^(ka)",
            lhs=lambda c, a, k: _dimless_lhs(c, a),
            rhs=lambda c, a, k: c.A_hat ** (k * a) - c.Astar_hat ** (k * a),
            terms=lambda c, a, k: (
                c.A_hat ** (2 * a), c.dn**a * c.L_hat**a,
                c.A_hat ** (k * a), c.Astar_hat ** (k * a),
            ),
            homogeneity_fn=lambda a, k: 0,
        ),
        CatalogEntry(
            id="C42A", citation="Eq. 4.7", kinds=TANGENTIAL_ONLY, direction=Direction.LE,
            params=fixed(a=1, k=2),
            formula="L^2 - 4*d_n*A <= 4/R^2 * (A^2 - A*^2)",
            lhs=lambda c, a, k: c.L**2 - 4 * c.dn * c.A,
            rhs=lambda c, a, k: (4 * c.R**2) * (c.A_hat**2 - c.Astar_hat**2),
            terms=lambda c, a, k: (
                c.L**2, 4 * c.dn * c.A,
                (4 * c.R**2) * c.A_hat**2, (4 * c.R**2) * c.Astar_hat**2,
            ),
            homogeneity_fn=lambda a, k: 2,
        ),
        CatalogEntry(
            id="C42B", citation="Eq. 4.8", kinds=TANGENTIAL_ONLY, direction=Direction.LE,
            params=fixed(a=1, k=3),
            formula="(A/R^2)^2 - d_n*(L/2R) <= (A/R^2)^3 - (A*/R^2)^3",
            lhs=lambda c, a, k: _dimless_lhs(c, 1),
            rhs=lambda c, a, k: c.A_hat**3 - c.Astar_hat**3,
            terms=lambda c, a, k: (
                c.A_hat**2, c.dn * c.L_hat, c.A_hat**3, c.Astar_hat**3,
            ),
            homogeneity_fn=lambda a, k: 0,
        ),
        CatalogEntry(
            id="T52", citation="Eq. 5.11", kinds=CYCLIC_ONLY, direction=Direction.LE,
            params=no_params,
            formula="A - L*R*cos(pi/n) + d_n*(R*cos(pi/n))^2 <= 0",
            lhs=lambda c, a, k: c.A - c.L * c.R * c.cos_pin
            + c.dn * (c.R * c.cos_pin) ** 2,
            rhs=lambda c, a, k: c.L * 0,
            terms=lambda c, a, k: (
                c.A, c.L * c.R * c.cos_pin, c.dn * (c.R * c.cos_pin) ** 2,
            ),
            homogeneity_fn=lambda a, k: 2,
        ),
        CatalogEntry(
            id="T53", citation="Eq. 5.15", kinds=CYCLIC_ONLY, direction=Direction.GE,
            params=no_params,
            formula="L^2 - 4*d_n*A >= (1/R^2)*(A* - A)^2",
            lhs=lambda c, a, k: c.L**2 - 4 * c.dn * c.A,
            rhs=lambda c, a, k: (c.Astar_hat - c.A_hat) ** 2 * c.R**2,
            terms=lambda c, a, k: (
                c.L**2, 4 * c.dn * c.A, (c.Astar_hat - c.A_hat) ** 2 * c.R**2,
            ),
            homogeneity_fn=lambda a, k: 2,
        ),
    ]
    return tuple(entries)


_ENTRIES: tuple[CatalogEntry, ...] = _build_entries()
_BY_ID = {e.id: e for e in _ENTRIES}


def list_entries(kind: PolygonKind | None = None) -> tuple[CatalogEntry, ...]:
    """All catalog entries, optionally filtered by polygon kind."""
    if kind is None:
        return _ENTRIES
    return tuple(e for e in _ENTRIES if e.applies_to(kind))


def get_entry(entry_id: str) -> CatalogEntry:
    try:
        return _BY_ID[entry_id]
    except KeyError:
        raise UnknownId(f"no catalog entry with id {entry_id!r}") from None


def _resolve(entry_or_id) -> CatalogEntry:
    if isinstance(entry_or_id, CatalogEntry):
        return entry_or_id
    return get_entry(entry_or_id)


def sign_flipped(entry_or_id, new_id: str | None = None) -> CatalogEntry:
    """A copy of an entry with its inequality direction inverted.

    The flipped entry is mathematically false, which is exactly what the
    falsifier-validation tests and the CLI fault-injection switch need.
    The global registry is never mutated.
    """
    e = _resolve(entry_or_id)
    flipped = Direction.LE if e.direction == Direction.GE else Direction.GE
    return CatalogEntry(
        id=new_id or f"{e.id}-FLIPPED",
        citation=e.citation,
        kinds=e.kinds,
        direction=flipped,
        params=e.params,
        formula=f"flipped({e.formula})",
        lhs=e.lhs,
        rhs=e.rhs,
        terms=e.terms,
        homogeneity_fn=e.homogeneity_fn,
    )


def _context_from_arrays(kind: PolygonKind, radius: float, pts: np.ndarray) -> EvalContext:
    m = measure_arrays(kind, radius, pts)
    n = pts.shape[1]
    return EvalContext(
        n=n, R=radius, L=m["L"], A=m["A"], Lstar=m["Lstar"], Astar=m["Astar"],
        dn=m["dn"], tan_pin=np.tan(np.pi / n), cos_pin=np.cos(np.pi / n),
    )


def _context_exact(kind: PolygonKind, radius, angles, dps: int) -> EvalContext:
    m = highprec.measure_exact(kind, radius, angles, dps=dps)
    return EvalContext(
        n=m["n"], R=m["R"], L=m["L"], A=m["A"], Lstar=m["Lstar"],
        Astar=m["Astar"], dn=m["dn"], tan_pin=m["tan_pin"], cos_pin=m["cos_pin"],
    )


def _signed(entry: CatalogEntry, lhs, rhs):
    return (lhs - rhs) if entry.direction == Direction.GE else (rhs - lhs)


def evaluate_batch(
    entry_or_id,
    kind: PolygonKind,
    radius: float,
    pts: np.ndarray,
    alpha: int | None = None,
    k: int | None = None,
) -> dict:
    """Vectorized slack over rows of ``pts``; the sweep and grid workhorse.

    Returns arrays lhs, rhs, slack, scale plus the validated (alpha, k).
    """
    entry = _resolve(entry_or_id)
    if not entry.applies_to(kind):
        raise KindMismatch(f"entry {entry.id} does not apply to {kind.value} polygons")
    a, kk = entry.params.validate(alpha, k)
    ctx = _context_from_arrays(kind, radius, np.asarray(pts, dtype=float))
    lhs = np.asarray(entry.lhs(ctx, a, kk), dtype=float)
    rhs = np.asarray(entry.rhs(ctx, a, kk), dtype=float)
    lhs, rhs = np.broadcast_arrays(lhs, rhs)
    slack = _signed(entry, lhs, rhs)
    scale = np.ones_like(slack)
    for term in entry.terms(ctx, a, kk):
        scale = np.maximum(scale, np.abs(np.asarray(term, dtype=float)))
    return {"lhs": lhs, "rhs": rhs, "slack": slack, "scale": scale,
            "alpha": a, "k": kk}


def evaluate(
    entry_or_id,
    polygon: PolygonModel,
    alpha: int | None = None,
    k: int | None = None,
) -> SlackRecord:
    """Slack record for one polygon; see the module docstring for signs."""
    entry = _resolve(entry_or_id)
    out = evaluate_batch(entry, polygon.kind, polygon.radius,
                         polygon.angles.to_array()[None, :], alpha, k)
    lhs = float(out["lhs"][0])
    rhs = float(out["rhs"][0])
    slack = float(out["slack"][0])
    return SlackRecord(
        lhs=lhs, rhs=rhs, slack=slack,
        equality=abs(slack) <= scale_tolerance(lhs, rhs, EQUALITY_RTOL),
        scale=float(out["scale"][0]),
        alpha=out["alpha"], k=out["k"], entry_id=entry.id,
        n=polygon.angles.n, radius=polygon.radius,
        angle_hash=polygon.angles.angle_hash(),
    )


def evaluate_exact(
    entry_or_id,
    polygon: PolygonModel,
    alpha: int | None = None,
    k: int | None = None,
    dps: int = highprec.DEFAULT_DPS,
) -> SlackRecord:
    """Slack recomputed in high precision; adjudicates near-equality cases.

    The returned fields are correctly rounded floats of mpf intermediates,
    so cancellation in the lhs/rhs differences no longer limits accuracy.
    """
    entry = _resolve(entry_or_id)
    if not entry.applies_to(polygon.kind):
        raise KindMismatch(f"entry {entry.id} does not apply to {polygon.kind.value} polygons")
    a, kk = entry.params.validate(alpha, k)
    ctx = _context_exact(polygon.kind, polygon.radius, polygon.angles.values, dps)
    lhs = entry.lhs(ctx, a, kk)
    rhs = entry.rhs(ctx, a, kk)
    slack = _signed(entry, lhs, rhs)
    scale = 1.0
    for term in entry.terms(ctx, a, kk):
        scale = max(scale, abs(float(term)))
    lhs_f, rhs_f = float(lhs), float(rhs)
    return SlackRecord(
        lhs=lhs_f, rhs=rhs_f, slack=float(slack),
        equality=abs(float(slack)) <= scale_tolerance(lhs_f, rhs_f, EQUALITY_RTOL),
        scale=scale, alpha=a, k=kk, entry_id=entry.id,
        n=polygon.angles.n, radius=polygon.radius,
        angle_hash=polygon.angles.angle_hash(),
    )


def evaluate_all(
    polygon: PolygonModel,
    alpha_set: Iterable[int] = (1,),
    k_set: Iterable[int] = (2, 3),
) -> list[SlackRecord]:
    """Every kind-compatible entry over the parameter grid.

    Order is deterministic: catalog order, then alpha, then k. Entries of
    the other kind are skipped with a debug log line.
    """
    records = []
    for entry in _ENTRIES:
        if not entry.applies_to(polygon.kind):
            log.debug("skip %s: requires %s, polygon is %s",
                      entry.id, sorted(k.value for k in entry.kinds),
                      polygon.kind.value)
            continue
        for a, kk in entry.params.combos(alpha_set, k_set):
            records.append(evaluate(entry, polygon, a, kk))
    return records
