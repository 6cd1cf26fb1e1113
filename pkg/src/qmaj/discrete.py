"""Exact counting-measure majorization: the oracle layer.

Vectors over a finite index set with unit cell weights.  With Fraction (or
int) entries everything here is exact arithmetic, which is the point: these
routines certify the grid-based code.  Relative curves rank entries by the
ratio f/q and measure the abscissa in the q-weighted (nu) measure, so curve
endpoints are q-independent, matching the continuous construction.

Square stochastic matrices cannot be strictly semidoubly stochastic: columns
summing to one force the row total to equal the row count, so rows bounded
by one must all equal one.  Strictness needs more rows than columns.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .compare import MajorizationVerdict, Outcome, Witness
from .errors import ConfigError

Number = int | float | Fraction

Curve = list[tuple[Number, Number]]  # breakpoints (s, L), starting at (0, 0)


@dataclass(frozen=True)
class QuasiVector:
    """Finite real vector under the counting measure."""

    entries: tuple[Number, ...]

    def __post_init__(self):
        if not self.entries:
            raise ConfigError("empty quasivector")
        object.__setattr__(self, "entries", tuple(self.entries))

    @classmethod
    def from_text(cls, text: str, exact: bool = False) -> "QuasiVector":
        conv = Fraction if exact else float
        try:
            return cls(tuple(conv(tok.strip()) for tok in text.split(",")))
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigError(f"bad vector literal {text!r}: {exc}")

    @property
    def total(self) -> Number:
        return sum(self.entries)

    def __len__(self) -> int:
        return len(self.entries)


def _as_entries(f) -> tuple[Number, ...]:
    return f.entries if isinstance(f, QuasiVector) else tuple(f)


def _ratio(value: Number, weight: Number) -> Number:
    # int/int must not silently degrade to float
    if isinstance(value, float) or isinstance(weight, float):
        return value / weight
    return Fraction(value) / Fraction(weight)


def vec_lorenz(f, q: Sequence[Number] | None = None) -> tuple[Curve, Curve]:
    """Exact positive/negative Lorenz curves (relative to q when given).

    The positive curve accumulates entries sorted by decreasing value (ratio
    to q in the relative case), abscissa in counting (nu) measure; the
    negative curve mirrors it.  Breakpoints include the flat extension to the
    measure of the whole index set.
    """
    entries = _as_entries(f)
    k = len(entries)
    if q is None:
        weights: tuple[Number, ...] = tuple(1 for _ in entries)
    else:
        weights = _as_entries(q)
        if len(weights) != k:
            raise ConfigError("reference vector length mismatch")
        if any(w <= 0 for w in weights):
            raise ConfigError("reference vector must be strictly positive")
    total_nu = sum(weights)

    def build(side_positive: bool) -> Curve:
        items = [
            (entries[i], weights[i])
            for i in range(k)
            if (entries[i] > 0 if side_positive else entries[i] < 0)
        ]
        # sort stability keeps ties in index order, also under reverse=True
        items.sort(key=lambda t: _ratio(t[0], t[1]), reverse=side_positive)
        curve: Curve = [(0, 0)]
        s: Number = 0
        total: Number = 0
        for value, weight in items:
            s = s + weight
            total = total + value
            curve.append((s, total))
        if s != total_nu:
            curve.append((total_nu, total))
        return curve

    return build(True), build(False)


def _eval_curve(curve: Curve, s: Number) -> Number:
    """Exact piecewise-linear evaluation with flat extension."""
    if s <= 0:
        return 0
    xs = [pt[0] for pt in curve]
    k = bisect_left(xs, s)
    if k >= len(xs):
        return curve[-1][1]
    s1, l1 = curve[k]
    if s1 == s:
        return l1
    s0, l0 = curve[k - 1]
    return l0 + (l1 - l0) * _ratio(s - s0, s1 - s0)


def _dominates(cf: Curve, cg: Curve, cnf: Curve, cng: Curve):
    """Exact check that f dominates g: returns (holds, strict, worst witness)."""
    holds = True
    strict = False
    worst: Witness | None = None
    for (a, b), sign, side in ((( cf, cg), 1, "positive"), ((cnf, cng), -1, "negative")):
        grid = sorted({pt[0] for pt in a} | {pt[0] for pt in b})
        for s in grid:
            gap = sign * (_eval_curve(a, s) - _eval_curve(b, s))
            if gap < 0:
                holds = False
                if worst is None or gap < worst.gap:
                    worst = Witness(float(s), side, float(gap))
            elif gap > 0:
                strict = True
    return holds, strict, worst


def vec_compare(f, g, q: Sequence[Number] | None = None) -> MajorizationVerdict:
    """Exact four-way verdict between two quasivectors.

    Vectors of different lengths are padded with zeros (zeros contribute to
    neither curve side but extend the flat plateau).  Equal totals required,
    exactly for exact entries and within 1e-12 for floats.
    """
    fe, ge = _as_entries(f), _as_entries(g)
    if abs(sum(fe) - sum(ge)) > 1e-12:
        raise ConfigError(f"sum mismatch: {sum(fe)} vs {sum(ge)}")
    width = max(len(fe), len(ge))
    if q is not None:
        qe = _as_entries(q)
        if len(qe) < width:
            raise ConfigError("reference vector shorter than the inputs")
        width = len(qe)
    fe = fe + (0,) * (width - len(fe))
    ge = ge + (0,) * (width - len(ge))
    qv = _as_entries(q) if q is not None else None
    cf, cnf = vec_lorenz(QuasiVector(fe), qv)
    cg, cng = vec_lorenz(QuasiVector(ge), qv)
    f_holds, _, forward_violation = _dominates(cf, cg, cnf, cng)
    g_holds, _, backward_violation = _dominates(cg, cf, cng, cnf)
    if f_holds and g_holds:
        return MajorizationVerdict(Outcome.EQUIVALENT, None, None, 0.0)
    if f_holds:
        return MajorizationVerdict(Outcome.MAJORIZES, None, None, 0.0)
    if g_holds:
        return MajorizationVerdict(Outcome.MAJORIZED_BY, None, None, 0.0)
    return MajorizationVerdict(
        Outcome.INCOMPARABLE, forward_violation, backward_violation, 0.0
    )


def vec_statement4(f, g, q: Sequence[Number] | None = None) -> tuple[bool, bool]:
    """Exact dominance via shifted positive/negative part sums.

    Both sides are piecewise linear in u with kinks only at the entry values
    (entrywise |f|/q ratios in the relative case), so checking those plus 0
    and one point beyond the maximum is a finite exact certificate of the
    "for all u >= 0" statement.
    """
    fe, ge = _as_entries(f), _as_entries(g)
    width = max(len(fe), len(ge))
    qe = _as_entries(q) if q is not None else tuple(1 for _ in range(width))
    if len(qe) < width:
        raise ConfigError("reference vector shorter than the inputs")
    fe = fe + (0,) * (len(qe) - len(fe))
    ge = ge + (0,) * (len(qe) - len(ge))

    def plus(v, u):
        return sum(max(v[i] - u * qe[i], 0) for i in range(len(v)))

    def minus(v, u):
        return sum(min(v[i] + u * qe[i], 0) for i in range(len(v)))

    ratios = {_ratio(abs(fe[i]), qe[i]) for i in range(len(fe))}
    ratios |= {_ratio(abs(ge[i]), qe[i]) for i in range(len(ge))}
    grid = sorted(ratios | {0})
    grid.append(grid[-1] + 1)
    fwd = all(
        plus(fe, u) >= plus(ge, u) and minus(fe, u) <= minus(ge, u) for u in grid
    )
    bwd = all(
        plus(ge, u) >= plus(fe, u) and minus(ge, u) <= minus(fe, u) for u in grid
    )
    return fwd, bwd


def negative_volume_vec(f) -> Number:
    entries = _as_entries(f)
    return (sum(abs(v) for v in entries) - sum(entries)) / 2


@dataclass(frozen=True)
class StochasticMatrix:
    """Column-stochastic nonnegative matrix acting on quasivectors."""

    rows: tuple[tuple[Number, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.rows)
        if not rows:
            raise ConfigError("empty matrix")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ConfigError("ragged matrix")
        if any(v < 0 for r in rows for v in r):
            raise ConfigError("matrix entries must be nonnegative")
        for j in range(width):
            col = sum(r[j] for r in rows)
            if abs(col - 1) > 1e-12:
                raise ConfigError(f"column {j} sums to {col}, not 1")
        object.__setattr__(self, "rows", rows)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.rows[0])

    def is_sds(self) -> bool:
        return all(sum(r) <= 1 + 1e-12 for r in self.rows)

    def is_sqs(self, q: Sequence[Number]) -> bool:
        qe = _as_entries(q)
        if len(qe) != self.shape[1] or len(qe) < self.shape[0]:
            raise ConfigError("reference length must cover matrix dimensions")
        for m, row in enumerate(self.rows):
            if sum(row[j] * qe[j] for j in range(len(row))) > qe[m] + 1e-12:
                return False
        return True


def apply_matrix(S: StochasticMatrix, f) -> QuasiVector:
    entries = _as_entries(f)
    m, k = S.shape
    if len(entries) != k:
        raise ConfigError(
            f"matrix width {k} does not match vector length {len(entries)}"
        )
    return QuasiVector(
        tuple(sum(S.rows[i][j] * entries[j] for j in range(k)) for i in range(m))
    )


def thermal_embedding_demo(f, beta: float, energies: Sequence[float]):
    """Relative curves against a normalized Gibbs reference.

    Orders the entries by the ratio to the Gibbs weights (the beta-ordering)
    and measures abscissae in the reference's own measure, which realizes the
    embedding construction of thermo-majorization at finite size.
    """
    import math

    entries = _as_entries(f)
    if len(energies) != len(entries):
        raise ConfigError("need one energy per entry")
    gibbs = [math.exp(-beta * e) for e in energies]
    z = sum(gibbs)
    q = tuple(w / z for w in gibbs)
    pos, neg = vec_lorenz(QuasiVector(entries), q)
    return pos, neg, q
