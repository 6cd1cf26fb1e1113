"""Majorization verdicts from Lorenz curve pairs, plus threshold scans.

f majorizes g when the positive curve of f dominates g's and the negative
curve of f lies below g's at every abscissa, with equal total integrals.
Verdicts are four-way: with a finite comparison tolerance eps a direction
"holds" when no violation exceeds eps, and a holding direction is promoted to
strict dominance only when some gap exceeds ``strictness * eps`` (separating
real dominance from quadrature noise).
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .errors import ConfigError, NormalizationError, ScanError
from .grids import ReferenceDistribution, SampledDistribution, same_grid
from .rearrange import (
    LorenzCurve,
    curves,
    piecewise_minus_integral,
    piecewise_plus_integral,
)

DEFAULT_EPS_CMP = 1e-4
DEFAULT_EPS_NORM = 1e-3
STRICTNESS = 10.0


class Outcome(Enum):
    MAJORIZES = "majorizes"
    MAJORIZED_BY = "majorized_by"
    EQUIVALENT = "equivalent"
    INCOMPARABLE = "incomparable"


@dataclass(frozen=True)
class Witness:
    """Location of a decisive crossing or dominance gap."""

    s: float
    side: str
    gap: float


@dataclass(frozen=True)
class MajorizationVerdict:
    outcome: Outcome
    witness: Witness | None
    witness_reverse: Witness | None
    tolerance: float

    def __str__(self) -> str:
        msg = self.outcome.value
        if self.witness is not None:
            w = self.witness
            msg += f" (s*={w.s:.6g}, side={w.side}, gap={w.gap:.3g})"
        return msg


class _Dominance(NamedTuple):
    holds: bool
    max_gap: float       # largest margin in the claimed direction
    gap_at: Witness      # where that margin is attained
    violation: Witness   # worst violation (gap < 0 region), if any


def _evaluate_direction(
    pos_f: LorenzCurve, neg_f: LorenzCurve, pos_g: LorenzCurve, neg_g: LorenzCurve,
    eps: float,
) -> _Dominance:
    """Does f dominate g? Checked on the union of breakpoint abscissae."""
    sp = np.union1d(pos_f.s, pos_g.s)
    dp = pos_f(sp) - pos_g(sp)           # want >= 0 everywhere
    sn = np.union1d(neg_f.s, neg_g.s)
    dn = neg_g(sn) - neg_f(sn)           # want >= 0 everywhere
    lo_p, hi_p = int(np.argmin(dp)), int(np.argmax(dp))
    lo_n, hi_n = int(np.argmin(dn)), int(np.argmax(dn))
    worst = (
        Witness(float(sp[lo_p]), pos_f.side, float(dp[lo_p]))
        if dp[lo_p] <= dn[lo_n]
        else Witness(float(sn[lo_n]), neg_f.side, float(dn[lo_n]))
    )
    best = (
        Witness(float(sp[hi_p]), pos_f.side, float(dp[hi_p]))
        if dp[hi_p] >= dn[hi_n]
        else Witness(float(sn[hi_n]), neg_f.side, float(dn[hi_n]))
    )
    holds = worst.gap >= -eps
    return _Dominance(holds, best.gap, best, worst)


def compare_curve_pairs(
    curves_f: tuple[LorenzCurve, LorenzCurve],
    curves_g: tuple[LorenzCurve, LorenzCurve],
    eps_cmp: float = DEFAULT_EPS_CMP,
    strictness: float = STRICTNESS,
) -> MajorizationVerdict:
    """Four-way verdict from two (positive, negative) curve pairs."""
    fwd = _evaluate_direction(*curves_f, *curves_g, eps=eps_cmp)
    bwd = _evaluate_direction(*curves_g, *curves_f, eps=eps_cmp)
    strict = strictness * eps_cmp
    if fwd.holds and bwd.holds:
        return MajorizationVerdict(Outcome.EQUIVALENT, None, None, eps_cmp)
    if fwd.holds:
        if fwd.max_gap > strict:
            return MajorizationVerdict(Outcome.MAJORIZES, fwd.gap_at, None, eps_cmp)
        return MajorizationVerdict(Outcome.EQUIVALENT, None, None, eps_cmp)
    if bwd.holds:
        if bwd.max_gap > strict:
            return MajorizationVerdict(
                Outcome.MAJORIZED_BY, bwd.gap_at, None, eps_cmp
            )
        return MajorizationVerdict(Outcome.EQUIVALENT, None, None, eps_cmp)
    # crossings in both directions: report where each direction fails
    return MajorizationVerdict(
        Outcome.INCOMPARABLE, fwd.violation, bwd.violation, eps_cmp
    )


def compare(
    f: SampledDistribution,
    g: SampledDistribution,
    q: ReferenceDistribution | None = None,
    eps_cmp: float = DEFAULT_EPS_CMP,
    eps_norm: float = DEFAULT_EPS_NORM,
    strictness: float = STRICTNESS,
) -> MajorizationVerdict:
    """Majorization verdict between f and g (relative to q when given).

    Raises NormalizationError when the total integrals differ by more than
    eps_norm: unequal integrals are a precondition failure, not a verdict.
    """
    same_grid(f, g)
    if abs(f.total_integral - g.total_integral) > eps_norm:
        raise NormalizationError(
            f"total integrals differ: {f.total_integral:.6g} vs "
            f"{g.total_integral:.6g} (eps_norm={eps_norm:g})"
        )
    return compare_curve_pairs(
        curves(f, q), curves(g, q), eps_cmp=eps_cmp, strictness=strictness
    )


class Statement4Result(NamedTuple):
    forward: bool
    backward: bool


def ratio_breakpoints(
    f: SampledDistribution,
    g: SampledDistribution,
    q: ReferenceDistribution | None = None,
    max_points: int | None = None,
) -> np.ndarray:
    """Candidate u values where the piecewise-linear statement-4 sides kink.

    These are the distinct |values| (entrywise |f|/q ratios in the relative
    case) of both functions, plus 0 and a point beyond the maximum.  With
    ``max_points`` the set is thinned to quantile-spaced representatives.
    """
    if q is None:
        cand = np.abs(np.concatenate([f.values, g.values]))
    else:
        cand = np.abs(np.concatenate([f.values, g.values])) / np.concatenate(
            [q.values, q.values]
        )
    cand = np.unique(cand[cand > 0])
    if max_points is not None and len(cand) > max_points:
        take = np.linspace(0, len(cand) - 1, max_points).round().astype(int)
        cand = cand[np.unique(take)]
    top = cand[-1] * 1.5 if len(cand) else 1.0
    return np.concatenate([[0.0], cand, [top]])


def statement4_check(
    f: SampledDistribution,
    g: SampledDistribution,
    q: ReferenceDistribution | None = None,
    u_grid: Sequence[float] | None = None,
    eps_cmp: float = DEFAULT_EPS_CMP,
) -> Statement4Result:
    """Check both dominance directions via shifted positive/negative parts.

    Direction f over g requires, for every u in the grid, that the integral
    of (f-uq)+ is at least that of (g-uq)+ and the integral of (f+uq)- is at
    most that of (g+uq)-.  Used as a cross-validation of ``compare``.
    """
    if u_grid is None:
        u_grid = ratio_breakpoints(f, g, q, max_points=256)
    u_grid = np.asarray(u_grid, dtype=float)
    if u_grid.size == 0:
        raise ConfigError("u_grid must be nonempty")
    if (u_grid < 0).any():
        raise ConfigError("u_grid entries must be >= 0")
    fwd = True
    bwd = True
    for u in u_grid:
        fp = piecewise_plus_integral(f, u, q)
        gp = piecewise_plus_integral(g, u, q)
        fm = piecewise_minus_integral(f, u, q)
        gm = piecewise_minus_integral(g, u, q)
        fwd = fwd and fp >= gp - eps_cmp and fm <= gm + eps_cmp
        bwd = bwd and gp >= fp - eps_cmp and gm <= fm + eps_cmp
        if not (fwd or bwd):
            break
    return Statement4Result(fwd, bwd)


@dataclass(frozen=True)
class ThresholdResult:
    """Bracketed comparability flip along a reference family parameter."""

    parameter: str
    lower: float
    upper: float
    resolution: float
    verdict_lower: Outcome
    verdict_upper: Outcome

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lower + self.upper)


def _is_comparable(outcome: Outcome) -> bool:
    return outcome is not Outcome.INCOMPARABLE


def scan_threshold(
    f: SampledDistribution,
    g: SampledDistribution,
    family: Callable[[float], ReferenceDistribution],
    bracket: tuple[float, float],
    resolution: float = 0.01,
    parameter: str = "nbar",
    eps_cmp: float = DEFAULT_EPS_CMP,
    prescan: int = 10,
) -> ThresholdResult:
    """Bisection on a reference-family parameter for a comparability flip.

    A coarse ``prescan``-point sweep locates the first adjacent pair of
    parameters whose verdicts differ (comparable vs incomparable); bisection
    then narrows the flip below ``resolution``.  Prescan evaluations may run
    concurrently, capped by the QMAJ_THREADS environment variable.
    """
    a, b = bracket
    if not (b > a):
        raise ConfigError(f"bad bracket {bracket}")
    pts = np.linspace(a, b, max(prescan, 2))

    def verdict_at(param: float) -> Outcome:
        return compare(f, g, family(param), eps_cmp=eps_cmp).outcome

    workers = int(os.environ.get("QMAJ_THREADS", "1") or "1")
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(verdict_at, pts))
    else:
        outcomes = [verdict_at(p) for p in pts]

    flags = [_is_comparable(o) for o in outcomes]
    flip = next((i for i in range(len(pts) - 1) if flags[i] != flags[i + 1]), None)
    if flip is None:
        raise ScanError(
            f"no comparability sign change for {parameter} in [{a:g}, {b:g}]"
        )
    lo, hi = float(pts[flip]), float(pts[flip + 1])
    out_lo, out_hi = outcomes[flip], outcomes[flip + 1]
    while hi - lo > resolution:
        mid = 0.5 * (lo + hi)
        out_mid = verdict_at(mid)
        if _is_comparable(out_mid) == flags[flip]:
            lo = mid
            out_lo = out_mid
        else:
            hi = mid
            out_hi = out_mid
    return ThresholdResult(parameter, lo, hi, resolution, out_lo, out_hi)
